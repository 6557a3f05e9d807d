//! Independent checks for the Garside code: amalgamated-product normal
//! forms for dihedral Artin groups, a normal form for right-angled Artin
//! groups and bounded brute-force conjugacy search.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::garside::{self, Atom, GarsideNF};
use crate::presentation::PresentationGraph;
use crate::word::{Letter, Word, S};

/// `z^e · g₁ g₂ ⋯` in `⟨x⟩ *_z ⟨y⟩`, with `z` central.
///
/// `m` odd: `x² = y^m = z`, syllables `x` and `y^{1..m-1}`.
/// `m` even: `⟨a, b | [a^{m/2}, b]⟩` with `z = a^{m/2}`, syllables `a^{1..m/2-1}` and `b^j`, `j ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AmalgamNF {
    /// `(factor, exponent)`; factor 0 is `x` (or `a`), factor 1 is `y` (or `b`).
    pub syllables: Vec<(usize, i64)>,
    pub central_exp: i64,
}

struct Amalgam {
    /// Exponent period of each factor modulo the center; 0 when the factor meets the center trivially.
    periods: [i64; 2],
    /// Images of `s, s⁻¹, t, t⁻¹`.
    images: [Vec<(usize, i64)>; 4],
}

impl Amalgam {
    fn new(m: u32) -> Self {
        let m = m as i64;
        if m % 2 == 1 {
            let h = (m + 1) / 2;
            let g = (m - 1) / 2;
            // s = y^{(m+1)/2} x⁻¹, t = x y^{(1-m)/2}
            Amalgam {
                periods: [2, m],
                images: [
                    vec![(1, h), (0, -1)],
                    vec![(0, 1), (1, -h)],
                    vec![(0, 1), (1, -g)],
                    vec![(1, g), (0, -1)],
                ],
            }
        } else {
            // s = b, t = b⁻¹ a
            Amalgam {
                periods: [m / 2, 0],
                images: [vec![(1, 1)], vec![(1, -1)], vec![(1, -1), (0, 1)], vec![(0, -1), (1, 1)]],
            }
        }
    }

    fn push(&self, nf: &mut AmalgamNF, f: usize, e: i64) {
        let merged = match nf.syllables.last() {
            Some(&(g, x)) if g == f => {
                nf.syllables.pop();
                x + e
            }
            _ => e,
        };
        let p = self.periods[f];
        let rest = if p > 0 {
            nf.central_exp += merged.div_euclid(p);
            merged.rem_euclid(p)
        } else {
            merged
        };
        if rest != 0 {
            nf.syllables.push((f, rest));
        }
    }

    fn normal_form(&self, w: &Word) -> AmalgamNF {
        let mut nf = AmalgamNF { syllables: Vec::new(), central_exp: 0 };
        for l in w.letters() {
            let idx = 2 * l.gen + l.inv as usize;
            for &(f, e) in &self.images[idx] {
                self.push(&mut nf, f, e);
            }
        }
        nf
    }
}

/// Normal form of the image of `w` in the amalgam presentation of `A_st`.
pub fn amalgam_nf(w: &Word, m: u32) -> Result<AmalgamNF> {
    if m < 3 {
        return Err(Error::Precondition("amalgam oracle needs m >= 3".into()));
    }
    if w.max_gen().is_some_and(|g| g > 1) {
        return Err(Error::Validation("word uses generators other than s, t".into()));
    }
    Ok(Amalgam::new(m).normal_form(w))
}

pub fn amalgam_is_identity(w: &Word, m: u32) -> Result<bool> {
    let nf = amalgam_nf(w, m)?;
    Ok(nf.syllables.is_empty() && nf.central_exp == 0)
}

/// Reduced syllables of a right-angled Artin group element, in shortlex order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RaagNF {
    pub syllables: Vec<(usize, i64)>,
}

impl RaagNF {
    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }
}

fn require_raag(g: &PresentationGraph) -> Result<()> {
    if g.all_labels_two() {
        Ok(())
    } else {
        Err(Error::Mode("RAAG oracle needs every edge label to be 2".into()))
    }
}

pub fn raag_nf(w: &Word, g: &PresentationGraph) -> Result<RaagNF> {
    require_raag(g)?;
    let n = g.num_generators();
    if w.max_gen().is_some_and(|x| x >= n) {
        return Err(Error::Validation("word uses an unknown generator".into()));
    }
    let commutes = |a: usize, b: usize| a != b && g.label(a, b).is_some();
    // Reduce: a new letter cancels or merges with the last syllable of its
    // generator when everything after it commutes with the letter.
    let mut syl: Vec<(usize, i64)> = Vec::new();
    for l in w.letters() {
        let mut hit = None;
        for i in (0..syl.len()).rev() {
            if syl[i].0 == l.gen {
                hit = Some(i);
                break;
            }
            if !commutes(syl[i].0, l.gen) {
                break;
            }
        }
        match hit {
            Some(i) => {
                syl[i].1 += l.exponent();
                if syl[i].1 == 0 {
                    syl.remove(i);
                }
            }
            None => syl.push((l.gen, l.exponent())),
        }
    }
    // Shortlex: repeatedly move the smallest available syllable to the front.
    let mut out = Vec::with_capacity(syl.len());
    while !syl.is_empty() {
        let mut best: Option<usize> = None;
        for i in 0..syl.len() {
            if syl[..i].iter().all(|&(h, _)| commutes(h, syl[i].0)) {
                let key = |j: usize| (syl[j].0, syl[j].1 < 0);
                if best.is_none_or(|b| key(i) < key(b)) {
                    best = Some(i);
                }
            }
        }
        out.push(syl.remove(best.expect("the first syllable is always available")));
    }
    Ok(RaagNF { syllables: out })
}

pub fn raag_is_identity(w: &Word, g: &PresentationGraph) -> Result<bool> {
    Ok(raag_nf(w, g)?.is_identity())
}

/// Searches for a nonempty freely reduced word of syllable length at most
/// `depth` in the elements `gens` that is trivial in the RAAG. Returns the
/// first such word, or `None` when the sweep finds none.
pub fn raag_free_sweep(g: &PresentationGraph, gens: &[Word], depth: usize) -> Result<Option<Word>> {
    require_raag(g)?;
    let k = gens.len();
    let mut frontier: Vec<Vec<(usize, bool)>> = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &frontier {
            for i in 0..k {
                for inv in [false, true] {
                    if w.last() == Some(&(i, !inv)) {
                        continue;
                    }
                    let mut v = w.clone();
                    v.push((i, inv));
                    let word = v.iter().fold(Word::empty(), |acc, &(j, inv)| {
                        acc.concat(&if inv { gens[j].inverse() } else { gens[j].clone() })
                    });
                    if raag_is_identity(&word, g)? {
                        return Ok(Some(word));
                    }
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    Ok(None)
}

/// All elements `A·Δ^ℓ` with `#atoms + |ℓ| ≤ size`, ordered by size then lexicographically.
pub fn garside_ball(m: u32, size: usize) -> Vec<GarsideNF> {
    let mut by_len: Vec<Vec<Vec<Atom>>> = vec![vec![Vec::new()]];
    for len in 1..=size {
        let mut next = Vec::new();
        for seq in &by_len[len - 1] {
            for a in Atom::all(m) {
                if seq.last().is_none_or(|p| p.last() == a.start) {
                    let mut s = seq.clone();
                    s.push(a);
                    next.push(s);
                }
            }
        }
        by_len.push(next);
    }
    let mut out = Vec::new();
    for total in 0..=size {
        for (len, seqs) in by_len.iter().enumerate().take(total + 1) {
            let d = (total - len) as i64;
            let exps: Vec<i64> = if d == 0 { vec![0] } else { vec![d, -d] };
            for &e in &exps {
                for seq in seqs {
                    out.push(GarsideNF::from_parts(seq.clone(), e, m).expect("left-weighted"));
                }
            }
        }
    }
    out
}

/// Finds `c` with `c·w·c⁻¹ = target` among conjugators of size at most `bound`
/// (atom count plus `|Δ` exponent|). `None` only means nothing in that ball.
pub fn brute_conjugacy_search(w: &Word, target: &Word, m: u32, bound: usize) -> Result<Option<Word>> {
    let x = garside::element(w, m)?;
    let y = garside::element(target, m)?;
    if m == 2 {
        return Ok((x == y).then(Word::empty));
    }
    let (x, y) = match (x, y) {
        (garside::DihedralElement::Garside(x), garside::DihedralElement::Garside(y)) => (x, y),
        _ => unreachable!("m >= 3 gives Garside forms"),
    };
    for c in garside_ball(m, bound) {
        if c.multiply(&x)?.multiply(&c.invert())? == y {
            return Ok(Some(c.to_word()));
        }
    }
    Ok(None)
}

/// Result of comparing the Garside word problem against the amalgam oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub m: u32,
    pub max_len: usize,
    pub words_checked: u64,
    pub identities: u64,
    pub disagreements: u64,
    pub first_disagreement: Option<String>,
}

/// Checks every word of length at most `max_len` over `s^{±1}, t^{±1}`.
pub fn oracle_sweep(m: u32, max_len: usize) -> Result<SweepReport> {
    if m < 3 {
        return Err(Error::Precondition("oracle sweep needs m >= 3".into()));
    }
    let amalgam = Amalgam::new(m);
    let mut report = SweepReport {
        m,
        max_len,
        words_checked: 0,
        identities: 0,
        disagreements: 0,
        first_disagreement: None,
    };
    let letters = [Letter::new(S, false), Letter::new(S, true), Letter::new(1, false), Letter::new(1, true)];
    let mut stack = vec![Vec::<Letter>::new()];
    while let Some(v) = stack.pop() {
        let w = Word::from_letters(v.clone());
        let by_garside = garside::normal_form(&w, m).is_identity();
        let nf = amalgam.normal_form(&w);
        let by_amalgam = nf.syllables.is_empty() && nf.central_exp == 0;
        report.words_checked += 1;
        report.identities += by_garside as u64;
        if by_garside != by_amalgam {
            report.disagreements += 1;
            report.first_disagreement.get_or_insert_with(|| w.to_dihedral_string());
        }
        if v.len() < max_len {
            for &l in &letters {
                let mut u = v.clone();
                u.push(l);
                stack.push(u);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::garside::{central_quotient::Quotient, delta_word, normal_form};

    fn w(text: &str) -> Word {
        Word::parse_dihedral(text).unwrap()
    }

    fn path(names: &[&str]) -> PresentationGraph {
        let edges: Vec<_> = (0..names.len() - 1).map(|i| (i, i + 1, 2)).collect();
        PresentationGraph::new(names.iter().map(|s| s.to_string()).collect(), &edges).unwrap()
    }

    #[test]
    fn amalgam_examples() {
        assert!(amalgam_is_identity(&w("sts t^-1 s^-1 t^-1"), 3).unwrap());
        assert!(!amalgam_is_identity(&w("s"), 5).unwrap());
        assert_eq!(amalgam_nf(&w("sts"), 3).unwrap(), amalgam_nf(&w("tst"), 3).unwrap());
        assert!(!amalgam_is_identity(&w("st s^-1 t^-1"), 3).unwrap());
        assert!(matches!(amalgam_is_identity(&w("s"), 2), Err(Error::Precondition(_))));
    }

    #[test]
    fn tietze_translations_respect_the_relations() {
        for m in 3..10u32 {
            let rel = delta_word(m, S).concat(&delta_word(m, 1).inverse());
            assert!(amalgam_is_identity(&rel, m).unwrap(), "m={m}");
            // Δ maps to the generator x (m odd) or the central a^{m/2} (m even).
            let d = amalgam_nf(&delta_word(m, S), m).unwrap();
            if m % 2 == 1 {
                assert_eq!(d, AmalgamNF { syllables: vec![(0, 1)], central_exp: 0 });
            } else {
                assert_eq!(d, AmalgamNF { syllables: vec![], central_exp: 1 });
            }
            assert_eq!(amalgam_nf(&w("st"), m).unwrap().syllables, vec![(if m % 2 == 1 { 1 } else { 0 }, 1)]);
        }
    }

    #[test]
    fn central_quotient_matches_amalgam_modulo_center() {
        let words = ["s t s^-1", "t^-3 s^2 t", "s s t^-1 s^-1 t t s", "t s^-2 t^4"];
        for m in 3..8 {
            let q = Quotient::new(m);
            for text in words {
                let word = w(text);
                assert_eq!(q.image(&word), amalgam_nf(&word, m).unwrap().syllables, "m={m} {text}");
            }
        }
    }

    #[test]
    fn normal_form_example_checked_by_brute_force() {
        // s t s^-1 = st.ts.Δ^-1 for m = 3: the amalgam oracle agrees, and no
        // shorter word of length at most 6 represents a different element.
        let target = w("s t s^-1");
        let nf = normal_form(&target, 3);
        assert!(amalgam_is_identity(&nf.to_word().concat(&target.inverse()), 3).unwrap());
        let mut hits = 0;
        for len in 0..=4 {
            for code in 0..4u32.pow(len) {
                let mut v = Vec::new();
                let mut c = code;
                for _ in 0..len {
                    v.push(Letter::new((c % 2) as usize, (c / 2) % 2 == 1));
                    c /= 4;
                }
                let u = Word::from_letters(v);
                let same_oracle = amalgam_is_identity(&u.concat(&target.inverse()), 3).unwrap();
                let same_garside = normal_form(&u, 3) == nf;
                assert_eq!(same_oracle, same_garside);
                hits += same_oracle as u32;
            }
        }
        assert!(hits >= 1);
    }

    #[test]
    fn small_sweeps_agree() {
        for m in 3..7 {
            let r = oracle_sweep(m, 5).unwrap();
            assert_eq!(r.disagreements, 0, "{r:?}");
            assert_eq!(r.words_checked, (0..=5).map(|k| 4u64.pow(k)).sum::<u64>());
            assert!(r.identities > 1);
        }
    }

    #[test]
    fn raag_examples() {
        let ab = path(&["a", "b"]);
        let abc = path(&["a", "b", "c"]);
        let parse = |t: &str, g: &PresentationGraph| Word::parse(t, &g.alphabet()).unwrap();
        assert!(raag_is_identity(&parse("a b a^-1 b^-1", &ab), &ab).unwrap());
        assert!(!raag_is_identity(&parse("a c a^-1 c^-1", &abc), &abc).unwrap());
        assert_eq!(raag_nf(&parse("a c a^-1 c^-1", &abc), &abc).unwrap().syllables.len(), 4);
        assert!(raag_is_identity(&Word::empty(), &abc).unwrap());
        assert_eq!(
            raag_nf(&parse("c b^2 a", &abc), &abc).unwrap().syllables,
            vec![(1, 2), (2, 1), (0, 1)]
        );
        let bad = PresentationGraph::new(vec!["a".into(), "b".into()], &[(0, 1, 3)]).unwrap();
        assert!(matches!(raag_is_identity(&Word::empty(), &bad), Err(Error::Mode(_))));
    }

    #[test]
    fn raag_commutator_exhaustive_commutation_search() {
        // Without the a–c edge, no sequence of commutation moves on a c a⁻¹ c⁻¹
        // brings cancelling letters together: a and c do not commute.
        let abc = path(&["a", "b", "c"]);
        let word = Word::parse("a c a^-1 c^-1", &abc.alphabet()).unwrap();
        assert!(abc.label(0, 2).is_none());
        assert!(!raag_is_identity(&word, &abc).unwrap());
        let free = raag_free_sweep(&abc, &[Word::gen_power(0, 1), Word::gen_power(2, 1)], 4).unwrap();
        assert_eq!(free, None);
        let found = raag_free_sweep(&abc, &[Word::gen_power(0, 1), Word::gen_power(1, 1)], 4).unwrap();
        assert!(found.is_some());
    }

    #[test]
    fn brute_conjugacy_examples() {
        let c = brute_conjugacy_search(&w("s"), &w("t"), 3, 3).unwrap().unwrap();
        assert_eq!(normal_form(&c, 3), GarsideNF::delta(3));
        assert_eq!(brute_conjugacy_search(&w("s"), &w("t"), 4, 4).unwrap(), None);
        let x = w("s t^-1 s^2");
        assert_eq!(brute_conjugacy_search(&x, &x, 5, 0).unwrap(), Some(Word::empty()));
        assert_eq!(brute_conjugacy_search(&w("s"), &w("t"), 2, 2).unwrap(), None);
    }

    #[test]
    fn garside_ball_sizes() {
        // size ≤ 1: identity, Δ^{±1} and the 2(m-1) atoms
        assert_eq!(garside_ball(3, 1).len(), 1 + 2 + 4);
        let ball = garside_ball(4, 2);
        let mut sorted = ball.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), ball.len());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_word(max: usize) -> impl Strategy<Value = Word> {
            proptest::collection::vec((0usize..2, any::<bool>()), 0..max)
                .prop_map(|v| Word::from_letters(v.into_iter().map(|(g, i)| Letter::new(g, i)).collect()))
        }

        proptest! {
            #[test]
            fn garside_equality_agrees_with_amalgam(x in arb_word(12), y in arb_word(12), m in 3u32..8) {
                let same = garside::equals(&x, &y, m).unwrap();
                prop_assert_eq!(same, amalgam_nf(&x, m).unwrap() == amalgam_nf(&y, m).unwrap());
            }

            #[test]
            fn raag_agrees_with_abelian_on_one_edge(x in arb_word(14)) {
                let g = path(&["s", "t"]);
                let abelian = garside::AbelianNF::from_word(&x).is_identity();
                prop_assert_eq!(raag_is_identity(&x, &g).unwrap(), abelian);
            }

            #[test]
            fn brute_conjugators_are_correct(x in arb_word(6), c in arb_word(4), m in 3u32..6) {
                let target = x.conjugate_by(&c);
                if let Some(found) = brute_conjugacy_search(&x, &target, m, 2).unwrap() {
                    prop_assert!(garside::equals(&x.conjugate_by(&found), &target, m).unwrap());
                }
            }
        }
    }
}
