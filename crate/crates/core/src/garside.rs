//! Element arithmetic in dihedral Artin groups `A_st = ⟨s, t | sts… = tst…⟩`.
//!
//! For `m ≥ 3` every element has a unique form `m₁⋯m_k · Δ^ℓ` with the atoms
//! `m_i` left-weighted (the last letter of `m_i` is the first letter of
//! `m_{i+1}`). The form is computed incrementally: the element is kept as a
//! positive word `P` without an alternating run of length `m`, times `Δ^ℓ`.
//! Appending a letter twists it by `τ^ℓ` (conjugation by `Δ`), and a run of
//! length `m` at the end of `P` is a copy of `Δ` that moves into the exponent.
//! Inverse letters use `x⁻¹ = Δ⁻¹ · (Δ x⁻¹)` where `Δ x⁻¹` is positive.
//!
//! For `m = 2` the group is `ℤ²` and elements are stored as [`AbelianNF`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Letter, Word, DIHEDRAL_ALPHABET, S, T};

pub(crate) fn other(x: usize) -> usize {
    1 - x
}

/// An alternating positive word of length `1..m` starting with `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Atom {
    pub start: usize,
    pub len: u32,
}

impl Atom {
    pub fn new(start: usize, len: u32) -> Self {
        debug_assert!(start <= 1 && len >= 1);
        Atom { start, len }
    }

    pub fn last(self) -> usize {
        if self.len % 2 == 1 {
            self.start
        } else {
            other(self.start)
        }
    }

    pub fn letters(self) -> impl Iterator<Item = usize> {
        (0..self.len).map(move |i| if i % 2 == 0 { self.start } else { other(self.start) })
    }

    /// The `2(m-1)` atoms of `A_st`.
    pub fn all(m: u32) -> Vec<Atom> {
        [S, T].into_iter().flat_map(|x| (1..m).map(move |l| Atom::new(x, l))).collect()
    }

    pub fn to_string_dihedral(self) -> String {
        self.letters().map(|g| DIHEDRAL_ALPHABET[g]).collect()
    }
}

/// `m₁⋯m_k Δ^ℓ` with left-weighted atoms, for `m ≥ 3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GarsideNF {
    atoms: Vec<Atom>,
    delta_exp: i64,
    modulus: u32,
}

/// `s^p t^q` in `A_st` with `m = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AbelianNF {
    pub p: i64,
    pub q: i64,
}

impl AbelianNF {
    pub fn from_word(w: &Word) -> Self {
        AbelianNF { p: w.exponent_sum(S), q: w.exponent_sum(T) }
    }

    pub fn is_identity(self) -> bool {
        self.p == 0 && self.q == 0
    }

    pub fn multiply(self, o: Self) -> Self {
        AbelianNF { p: self.p + o.p, q: self.q + o.q }
    }

    pub fn to_word(self) -> Word {
        Word::gen_power(S, self.p).concat(&Word::gen_power(T, self.q))
    }
}

/// The Garside element as a positive word starting with `start`.
pub fn delta_word(m: u32, start: usize) -> Word {
    Word::from_letters(Atom::new(start, m).letters().map(|g| Letter::new(g, false)).collect())
}

/// Conjugation by `Δ` on letters: swaps `s, t` when `m` is odd.
pub fn tau_letter(m: u32, x: usize, times: i64) -> usize {
    if m % 2 == 1 && times.rem_euclid(2) == 1 {
        other(x)
    } else {
        x
    }
}

/// Incremental normal-form engine: positive word without runs of length `m`, times `Δ^ℓ`.
#[derive(Debug, Clone)]
pub(crate) struct Builder {
    m: u32,
    letters: Vec<usize>,
    runs: Vec<u32>,
    delta: i64,
}

impl Builder {
    pub(crate) fn new(m: u32) -> Self {
        Builder { m, letters: Vec::new(), runs: Vec::new(), delta: 0 }
    }

    fn from_nf(x: &GarsideNF) -> Self {
        let mut b = Builder::new(x.modulus);
        for a in &x.atoms {
            for g in a.letters() {
                b.push_raw(g);
            }
        }
        b.delta = x.delta_exp;
        b
    }

    fn push_raw(&mut self, g: usize) {
        let run = match (self.letters.last(), self.runs.last()) {
            (Some(&l), Some(&r)) if l != g => r + 1,
            _ => 1,
        };
        self.letters.push(g);
        self.runs.push(run);
        if run == self.m {
            let n = self.letters.len() - self.m as usize;
            self.letters.truncate(n);
            self.runs.truncate(n);
            self.delta += 1;
        }
    }

    pub(crate) fn append_gen(&mut self, x: usize) {
        self.push_raw(tau_letter(self.m, x, self.delta));
    }

    pub(crate) fn append_inv(&mut self, x: usize) {
        self.delta -= 1;
        let start = if self.m % 2 == 1 { x } else { other(x) };
        for g in Atom::new(start, self.m - 1).letters() {
            self.append_gen(g);
        }
    }

    pub(crate) fn append_letter(&mut self, l: Letter) {
        if l.inv {
            self.append_inv(l.gen)
        } else {
            self.append_gen(l.gen)
        }
    }

    pub(crate) fn append_delta(&mut self, k: i64) {
        self.delta += k;
    }

    pub(crate) fn finish(&self) -> GarsideNF {
        let mut atoms = Vec::new();
        let mut i = 0;
        while i < self.letters.len() {
            let mut j = i + 1;
            while j < self.letters.len() && self.letters[j] != self.letters[j - 1] {
                j += 1;
            }
            atoms.push(Atom::new(self.letters[i], (j - i) as u32));
            i = j;
        }
        GarsideNF { atoms, delta_exp: self.delta, modulus: self.m }
    }
}

impl GarsideNF {
    pub fn identity(m: u32) -> Self {
        assert!(m >= 3, "Garside forms need m >= 3");
        GarsideNF { atoms: Vec::new(), delta_exp: 0, modulus: m }
    }

    pub fn delta(m: u32) -> Self {
        GarsideNF { atoms: Vec::new(), delta_exp: 1, modulus: m }
    }

    /// Builds a form from parts, checking the invariants.
    pub fn from_parts(atoms: Vec<Atom>, delta_exp: i64, m: u32) -> Result<Self> {
        if m < 3 {
            return Err(Error::Precondition("Garside forms need m >= 3".into()));
        }
        for a in &atoms {
            if a.start > 1 || a.len == 0 || a.len >= m {
                return Err(Error::Validation(format!("{a:?} is not an atom for m={m}")));
            }
        }
        for w in atoms.windows(2) {
            if w[0].last() != w[1].start {
                return Err(Error::Validation("atoms are not left-weighted".into()));
            }
        }
        Ok(GarsideNF { atoms, delta_exp, modulus: m })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn delta_exp(&self) -> i64 {
        self.delta_exp
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn is_identity(&self) -> bool {
        self.atoms.is_empty() && self.delta_exp == 0
    }

    /// Total letter count of the atom part.
    pub fn positive_len(&self) -> usize {
        self.atoms.iter().map(|a| a.len as usize).sum()
    }

    /// The positive letters of the atom part.
    pub fn positive_letters(&self) -> Vec<usize> {
        self.atoms.iter().flat_map(|a| a.letters()).collect()
    }

    pub fn to_word(&self) -> Word {
        let pos = Word::from_letters(
            self.positive_letters().into_iter().map(|g| Letter::new(g, false)).collect(),
        );
        pos.concat(&delta_word(self.modulus, S).power(self.delta_exp))
    }

    /// Same element with the `Δ` exponent dropped (a vertex of the quasi-tree).
    pub fn without_delta(&self) -> GarsideNF {
        GarsideNF { atoms: self.atoms.clone(), delta_exp: 0, modulus: self.modulus }
    }

    pub fn abelianization(&self) -> i64 {
        self.positive_len() as i64 + self.modulus as i64 * self.delta_exp
    }

    fn check_modulus(&self, other: &GarsideNF) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch { left: self.modulus, right: other.modulus });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &GarsideNF) -> Result<GarsideNF> {
        self.check_modulus(other)?;
        let mut b = Builder::from_nf(self);
        for g in other.positive_letters() {
            b.append_gen(g);
        }
        b.append_delta(other.delta_exp);
        Ok(b.finish())
    }

    /// Right multiplication by a word.
    pub fn times_word(&self, w: &Word) -> GarsideNF {
        let mut b = Builder::from_nf(self);
        for &l in w.letters() {
            b.append_letter(l);
        }
        b.finish()
    }

    /// Right multiplication by a single letter power `x^k`.
    pub fn times_gen_power(&self, x: usize, k: i64) -> GarsideNF {
        let mut b = Builder::from_nf(self);
        for _ in 0..k.unsigned_abs() {
            if k > 0 {
                b.append_gen(x)
            } else {
                b.append_inv(x)
            }
        }
        b.finish()
    }

    pub fn times_delta(&self, k: i64) -> GarsideNF {
        GarsideNF { atoms: self.atoms.clone(), delta_exp: self.delta_exp + k, modulus: self.modulus }
    }

    pub fn invert(&self) -> GarsideNF {
        normal_form(&self.to_word().inverse(), self.modulus)
    }

    pub fn power(&self, k: i64) -> GarsideNF {
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut acc = GarsideNF::identity(self.modulus);
        let mut sq = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.multiply(&sq).expect("same modulus");
            }
            e >>= 1;
            if e > 0 {
                sq = sq.multiply(&sq).expect("same modulus");
            }
        }
        acc
    }

    /// `Δ⁻¹ · self · Δ`.
    pub fn tau(&self) -> GarsideNF {
        let atoms = if self.modulus % 2 == 1 {
            self.atoms.iter().map(|a| Atom::new(other(a.start), a.len)).collect()
        } else {
            self.atoms.clone()
        };
        GarsideNF { atoms, delta_exp: self.delta_exp, modulus: self.modulus }
    }

    /// `Some(k)` when the element equals `x^k`.
    pub fn cyclic_exponent(&self, x: usize) -> Option<i64> {
        let k = self.abelianization();
        (GarsideNF::identity(self.modulus).times_gen_power(x, k) == *self).then_some(k)
    }
}

impl fmt::Display for GarsideNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.atoms.iter().map(|a| a.to_string_dihedral()).collect();
        if self.delta_exp != 0 || parts.is_empty() {
            parts.push(match self.delta_exp {
                0 => "1".to_string(),
                1 => "D".to_string(),
                e => format!("D^{e}"),
            });
        }
        write!(f, "{}", parts.join("."))
    }
}

/// Garside normal form of a word over `{s, t}`.
pub fn normal_form(w: &Word, m: u32) -> GarsideNF {
    assert!(m >= 3, "Garside forms need m >= 3");
    let mut b = Builder::new(m);
    for &l in w.letters() {
        b.append_letter(l);
    }
    b.finish()
}

/// An element of `A_st` for any `m ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DihedralElement {
    Garside(GarsideNF),
    Abelian(AbelianNF),
}

pub fn element(w: &Word, m: u32) -> Result<DihedralElement> {
    check_dihedral_word(w)?;
    match m {
        0 | 1 => Err(Error::Precondition(format!("label {m} < 2"))),
        2 => Ok(DihedralElement::Abelian(AbelianNF::from_word(w))),
        _ => Ok(DihedralElement::Garside(normal_form(w, m))),
    }
}

impl fmt::Display for DihedralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DihedralElement::Garside(g) => write!(f, "{g}"),
            DihedralElement::Abelian(a) => write!(f, "{}", a.to_word().to_dihedral_string()),
        }
    }
}

impl DihedralElement {
    pub fn is_identity(&self) -> bool {
        match self {
            DihedralElement::Garside(g) => g.is_identity(),
            DihedralElement::Abelian(a) => a.is_identity(),
        }
    }
}

fn check_dihedral_word(w: &Word) -> Result<()> {
    match w.max_gen() {
        Some(g) if g > T => Err(Error::Validation("word uses generators other than s, t".into())),
        _ => Ok(()),
    }
}

/// Word problem in `A_st`.
pub fn equals(x: &Word, y: &Word, m: u32) -> Result<bool> {
    Ok(element(x, m)? == element(y, m)?)
}

/// Which standard generators an element is conjugate to a power of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorClass {
    S,
    T,
    /// `s` and `t` are conjugate when `m` is odd.
    #[serde(rename = "st")]
    ST,
}

impl GeneratorClass {
    pub fn of(m: u32, gen: usize) -> Self {
        if m % 2 == 1 {
            GeneratorClass::ST
        } else if gen == S {
            GeneratorClass::S
        } else {
            GeneratorClass::T
        }
    }

    pub fn representative(self) -> usize {
        match self {
            GeneratorClass::S | GeneratorClass::ST => S,
            GeneratorClass::T => T,
        }
    }
}

/// Decides whether `w` is conjugate in `A_st` to `x^k` for a standard generator `x`.
///
/// For `m ≥ 3` the test runs in the central quotient, a free product of two
/// cyclic groups where conjugacy is decided by cyclic reduction; the kernel is
/// generated by a power of `Δ` with nonzero exponent sum, so also matching
/// the exponent sum pins the conjugacy class in `A_st`.
pub fn conjugate_to_generator_power(w: &Word, m: u32) -> Result<Option<(GeneratorClass, i64)>> {
    let e = element(w, m)?;
    if e.is_identity() {
        return Err(Error::IdentityInput);
    }
    if let DihedralElement::Abelian(a) = e {
        return Ok(match (a.p, a.q) {
            (p, 0) => Some((GeneratorClass::S, p)),
            (0, q) => Some((GeneratorClass::T, q)),
            _ => None,
        });
    }
    let k = w.abelianization();
    if k == 0 {
        return Ok(None);
    }
    let q = central_quotient::Quotient::new(m);
    let image = q.image(w);
    let candidates: &[usize] = if m % 2 == 1 { &[S] } else { &[S, T] };
    for &x in candidates {
        if q.conjugate(&image, &q.image(&Word::gen_power(x, k))) {
            return Ok(Some((GeneratorClass::of(m, x), k)));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EllipticClass {
    TreeElliptic { class: GeneratorClass, power: i64 },
    VertexElliptic,
}

pub fn classify_elliptic(w: &Word, m: u32) -> Result<EllipticClass> {
    Ok(match conjugate_to_generator_power(w, m)? {
        Some((class, power)) => EllipticClass::TreeElliptic { class, power },
        None => EllipticClass::VertexElliptic,
    })
}

/// A tree-elliptic element `g x^n g⁻¹` of `A_st`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeEllipticSpec {
    pub conjugator: Word,
    pub generator: usize,
    pub power: i64,
}

impl TreeEllipticSpec {
    pub fn to_word(&self) -> Word {
        Word::gen_power(self.generator, self.power).conjugate_by(&self.conjugator)
    }

    fn check(&self) -> Result<()> {
        if self.generator > T {
            return Err(Error::Spec("generator must be s or t".into()));
        }
        if self.power == 0 {
            return Err(Error::Spec("power must be nonzero".into()));
        }
        check_dihedral_word(&self.conjugator).map_err(|e| Error::Spec(e.to_string()))
    }
}

/// For `a = g x^n g⁻¹` and `b = h y^k h⁻¹` returns `a^k b^{-n}`.
pub fn vertex_elliptic_product(a: &TreeEllipticSpec, b: &TreeEllipticSpec) -> Result<Word> {
    a.check()?;
    b.check()?;
    let left = Word::gen_power(a.generator, a.power * b.power).conjugate_by(&a.conjugator);
    let right = Word::gen_power(b.generator, -a.power * b.power).conjugate_by(&b.conjugator);
    Ok(left.concat(&right))
}

/// The central quotient of `A_st` (`m ≥ 3`) as a free product of two cyclic groups.
///
/// `m` odd: `ℤ/2 * ℤ/m` with `x = Δ`, `y = st`.
/// `m` even: `ℤ/(m/2) * ℤ` with `a = st`, `b = s`.
pub(crate) mod central_quotient {
    use crate::word::{Word, S};

    /// Reduced syllables `(factor, exponent)`; factor orders in [`Quotient::orders`].
    pub type Syllables = Vec<(usize, i64)>;

    pub struct Quotient {
        /// Order of each factor; 0 means infinite.
        pub orders: [i64; 2],
        /// Images of `s`, `t` and their inverses as syllable lists.
        images: [[Syllables; 2]; 2],
    }

    impl Quotient {
        pub fn new(m: u32) -> Self {
            let m = m as i64;
            let (orders, s_img, t_img): ([i64; 2], Syllables, Syllables) = if m % 2 == 1 {
                let r = (m + 1) / 2;
                ([2, m], vec![(1, r), (0, 1)], vec![(0, 1), (1, r)])
            } else {
                ([m / 2, 0], vec![(1, 1)], vec![(1, -1), (0, 1)])
            };
            let mut q = Quotient { orders, images: Default::default() };
            let s_inv = q.inverse(&s_img);
            let t_inv = q.inverse(&t_img);
            q.images = [[s_img, s_inv], [t_img, t_inv]];
            q
        }

        fn reduce_exp(&self, f: usize, e: i64) -> i64 {
            match self.orders[f] {
                0 => e,
                n => e.rem_euclid(n),
            }
        }

        pub fn push(&self, acc: &mut Syllables, (f, e): (usize, i64)) {
            let e = self.reduce_exp(f, e);
            if e == 0 {
                return;
            }
            match acc.last_mut() {
                Some((g, x)) if *g == f => {
                    *x = self.reduce_exp(f, *x + e);
                    if *x == 0 {
                        acc.pop();
                    }
                }
                _ => acc.push((f, e)),
            }
        }

        pub fn inverse(&self, w: &Syllables) -> Syllables {
            let mut out = Vec::new();
            for &(f, e) in w.iter().rev() {
                self.push(&mut out, (f, -e));
            }
            out
        }

        pub fn image(&self, w: &Word) -> Syllables {
            let mut out = Vec::new();
            for l in w.letters() {
                let idx = if l.gen == S { 0 } else { 1 };
                for &syl in &self.images[idx][l.inv as usize] {
                    self.push(&mut out, syl);
                }
            }
            out
        }

        pub fn cyclically_reduce(&self, w: &Syllables) -> Syllables {
            let mut w = w.clone();
            while w.len() >= 2 && w[0].0 == w[w.len() - 1].0 {
                let first = w.remove(0);
                self.push(&mut w, first);
            }
            w
        }

        pub fn conjugate(&self, a: &Syllables, b: &Syllables) -> bool {
            let a = self.cyclically_reduce(a);
            let b = self.cyclically_reduce(b);
            if a.len() != b.len() {
                return false;
            }
            if a.len() <= 1 {
                return a == b;
            }
            (0..a.len()).any(|r| a[r..].iter().chain(&a[..r]).eq(b.iter()))
        }
    }
}
