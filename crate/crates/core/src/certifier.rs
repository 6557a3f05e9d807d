//! Freeness certificates: `⟨aⁿ, bⁿ⟩` is free of rank two when `a`, `b` are
//! elliptic with disjoint fixed sets and a path `γ` between the fixed sets
//! makes an angle of at least `π` with its translates at both endpoints.
//!
//! Every check is exact. Contacts are located syntactically: the contact
//! vertex `c·A_T` must be reached from the conjugator of the spec by a word
//! in `T`, which places it on `Fix(a)` without solving the word problem of
//! `A_Γ`. A certificate embeds its inputs; the checker recomputes every
//! record from them and compares the results field by field.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::angle::AngularValue;
use crate::error::{Error, Result};
use crate::garside::{self, classify_elliptic, normal_form, AbelianNF, DihedralElement, EllipticClass};
use crate::linkgeom::{
    axis_key, build_link_type1, m2_link_distance, BallOptions, Distance, LinkPoint, LinkVertex, QuotientMetric,
    DEFAULT_BUDGET,
};
use crate::oracles::{raag_free_sweep, raag_is_identity};
use crate::presentation::PresentationGraph;
use crate::quasitree::f_count;
use crate::word::{Letter, Word, S, T};

pub const CERT_FORMAT: &str = "freeness-cert/1";
/// Exponents searched for `n₀` and for per-endpoint minima.
pub const EXPONENT_WINDOW: u32 = 16;

/// A coset `c·A_{xy}` of a dihedral parabolic, with `s ↦ x`, `t ↦ y` locally.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetDescriptor {
    #[serde(default)]
    pub conjugator: String,
    pub generators: [String; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EllipticSpec {
    /// `c · x^power · c⁻¹`.
    TreeElliptic {
        #[serde(default)]
        conjugator: String,
        generator: String,
        power: i64,
    },
    /// `c · w · c⁻¹` with `w` a word in `s, t` read in the vertex group.
    VertexElliptic { vertex: CosetDescriptor, word: String },
}

impl EllipticSpec {
    pub fn generator(name: &str) -> Self {
        EllipticSpec::TreeElliptic { conjugator: String::new(), generator: name.to_string(), power: 1 }
    }
}

/// A type-0 vertex `x^power{1}` or a type-2 vertex `⟨x, neighbor⟩` of the link of `c⟨x⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Type1Point {
    Coset0 {
        #[serde(default)]
        power: i64,
    },
    Type2 { neighbor: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum ContactSpec {
    /// `γ` meets the edge from `c⟨x⟩` to `c⟨x, neighbor⟩` in its interior.
    InteriorEdgePerp {
        #[serde(default)]
        conjugator: String,
        generator: String,
        neighbor: String,
        perpendicular: bool,
    },
    /// `γ` meets `Fix(a)` at the type-1 vertex `c⟨x⟩`.
    Type1Contact {
        #[serde(default)]
        conjugator: String,
        generator: String,
        gamma_bar: Type1Point,
    },
    /// `γ` meets `Fix(a)` at the type-2 vertex `c·A_{xy}`, leaving in direction `gamma_bar`.
    Type2Contact { vertex: CosetDescriptor, gamma_bar: LinkPoint },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KDistance {
    pub k: i64,
    pub distance: AngularValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum EndpointRecord {
    InteriorEdgePerp {
        angle: AngularValue,
    },
    Type1Contact {
        link_distance: Distance,
        angle: AngularValue,
    },
    /// `m = 2`: the distance `d(γ̄, āⁿγ̄)` is the same for every nonzero multiple of `n`.
    Type2Abelian {
        local: String,
        translate: LinkPoint,
        distance: AngularValue,
        fixes_no_link_vertex: Option<bool>,
        n0: u64,
    },
    Type2TreeElliptic {
        m: u32,
        local: String,
        tbar_distance: AngularValue,
        n0: u64,
        f_count: usize,
        separated_angle: AngularValue,
    },
    Type2VertexElliptic {
        m: u32,
        local: String,
        bound: u32,
        distances: Vec<KDistance>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertMode {
    Exact,
    ConditionalOnLabels,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssumptionKind {
    Disjointness,
    /// `γ` realizes the distance between `Fix(a)` and `Fix(b)`.
    DistanceRealizing,
    BoundedExponent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assumption {
    pub kind: AssumptionKind,
    pub statement: String,
    pub discharged: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RaagSweepRecord {
    pub depth: usize,
    /// Nonempty reduced words of syllable length at most `depth`, all nontrivial.
    pub reduced_words: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreenessCertificate {
    pub format: String,
    pub graph: serde_json::Value,
    pub a: EllipticSpec,
    pub b: EllipticSpec,
    pub gamma: [ContactSpec; 2],
    pub n: u64,
    pub bound_k: u32,
    pub assume_disjoint: bool,
    pub sweep_depth: usize,
    pub n_min: u64,
    pub endpoint_records: [EndpointRecord; 2],
    pub mode: CertMode,
    pub assumptions: Vec<Assumption>,
    pub raag_sweep: Option<RaagSweepRecord>,
    pub loxodromic: String,
}

#[derive(Debug, Clone, Copy)]
pub struct CertifyOptions {
    pub n: Option<u64>,
    /// `K` for vertex-elliptic endpoints with `m ≥ 3`.
    pub bound_k: u32,
    pub assume_disjoint: bool,
    pub sweep_depth: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { n: None, bound_k: 4, assume_disjoint: false, sweep_depth: 6 }
    }
}

fn parse(g: &PresentationGraph, text: &str) -> Result<Word> {
    Word::parse(text, &g.alphabet()).map(|w| w.freely_reduced()).map_err(|e| Error::Spec(e.to_string()))
}

fn gen_index(g: &PresentationGraph, name: &str) -> Result<usize> {
    g.index_of(name).ok_or_else(|| Error::Spec(format!("unknown generator {name:?}")))
}

fn show(g: &PresentationGraph, w: &Word) -> String {
    w.display(&g.alphabet()).to_string()
}

/// Rewrites a word in `pair[0], pair[1]` as a dihedral word, if it uses no other letters.
fn to_local(w: &Word, pair: [usize; 2]) -> Option<Word> {
    let letters = w.letters().iter().map(|l| {
        let gen = pair.iter().position(|&p| p == l.gen)?;
        Some(Letter::new(gen, l.inv))
    });
    letters.collect::<Option<Vec<_>>>().map(Word::from_letters)
}

fn from_local(w: &Word, pair: [usize; 2]) -> Word {
    Word::from_letters(w.letters().iter().map(|l| Letter::new(pair[l.gen], l.inv)).collect())
}

enum Resolved {
    Tree { c: Word, x: usize, d: i64 },
    Vertex { c: Word, pair: [usize; 2], w: Word },
}

impl Resolved {
    fn element(&self) -> Word {
        match self {
            Resolved::Tree { c, x, d } => Word::gen_power(*x, *d).conjugate_by(c).freely_reduced(),
            Resolved::Vertex { c, pair, w, .. } => from_local(w, *pair).conjugate_by(c).freely_reduced(),
        }
    }
}

fn resolve_pair(g: &PresentationGraph, v: &CosetDescriptor) -> Result<([usize; 2], u32)> {
    let pair = [gen_index(g, &v.generators[0])?, gen_index(g, &v.generators[1])?];
    let m = g
        .label(pair[0], pair[1])
        .ok_or_else(|| Error::Spec(format!("{} and {} span no type-2 vertex", v.generators[0], v.generators[1])))?;
    Ok((pair, m))
}

fn resolve(g: &PresentationGraph, a: &EllipticSpec) -> Result<Resolved> {
    match a {
        EllipticSpec::TreeElliptic { conjugator, generator, power } => {
            if *power == 0 {
                return Err(Error::Spec("tree-elliptic power must be nonzero".into()));
            }
            Ok(Resolved::Tree { c: parse(g, conjugator)?, x: gen_index(g, generator)?, d: *power })
        }
        EllipticSpec::VertexElliptic { vertex, word } => {
            let (pair, m) = resolve_pair(g, vertex)?;
            let w = Word::parse_dihedral(word).map_err(|e| Error::Spec(e.to_string()))?.freely_reduced();
            let vertex_elliptic = match garside::element(&w, m)? {
                DihedralElement::Abelian(x) => x.p != 0 && x.q != 0,
                DihedralElement::Garside(x) if x.is_identity() => false,
                DihedralElement::Garside(_) => classify_elliptic(&w, m)? == EllipticClass::VertexElliptic,
            };
            if !vertex_elliptic {
                return Err(Error::Spec(format!("{word:?} is not vertex-elliptic in its vertex group")));
            }
            Ok(Resolved::Vertex { c: parse(g, &vertex.conjugator)?, pair, w })
        }
    }
}

/// Smallest `n ≤ 16` with `f(n) ≥ m + 1` for `a = s^d`, so that `(f(n) − 1)·π/m ≥ π`.
pub fn min_exponent_tree_elliptic_type2(m: u32, d: i64) -> Result<u64> {
    if d == 0 {
        return Err(Error::Spec("power must be nonzero".into()));
    }
    if m == 2 {
        return Ok(1);
    }
    if m < 2 {
        return Err(Error::Precondition("m must be at least 2".into()));
    }
    (1..=EXPONENT_WINDOW as u64)
        .find(|&n| f_count(m, S, d, n) > m as usize)
        .ok_or(Error::Unresolved { window: EXPONENT_WINDOW })
}

/// `f(1), …, f(window)` for `a = s^d`.
pub fn f_sweep(m: u32, d: i64, window: u32) -> Vec<usize> {
    (1..=window as u64).map(|n| f_count(m, S, d, n)).collect()
}

/// Requires `c_contact⁻¹ · c_spec` to be a word in `letters`.
fn contact_offset(g: &PresentationGraph, contact: &str, spec_c: &Word, letters: &[usize]) -> Result<Word> {
    let r = parse(g, contact)?.inverse().concat(spec_c).freely_reduced();
    if r.letters().iter().all(|l| letters.contains(&l.gen)) {
        Ok(r)
    } else {
        Err(Error::CaseMismatch(format!("contact is not visibly on Fix(a): offset {} leaves the vertex group", show(g, &r))))
    }
}

fn require_pi(what: String, found: AngularValue) -> Result<()> {
    if found < AngularValue::PI {
        return Err(Error::AngleTooSmall { what, found, needed: AngularValue::PI });
    }
    Ok(())
}

/// Checks the angle condition for `γ` and its `a^{kn}`-translates at one endpoint.
pub fn verify_endpoint(
    g: &PresentationGraph,
    a: &EllipticSpec,
    contact: &ContactSpec,
    n: u64,
    bound_k: u32,
) -> Result<EndpointRecord> {
    if n == 0 {
        return Err(Error::Rejected("n must be at least 1".into()));
    }
    let spec = resolve(g, a)?;
    match contact {
        ContactSpec::InteriorEdgePerp { conjugator, generator, neighbor, perpendicular } => {
            let Resolved::Tree { c, x, .. } = &spec else {
                return Err(Error::CaseMismatch("a vertex-elliptic element fixes no edge".into()));
            };
            if !perpendicular {
                return Err(Error::CaseMismatch("only perpendicular edge contacts are certified".into()));
            }
            if gen_index(g, generator)? != *x {
                return Err(Error::CaseMismatch(format!("edge generator {generator} differs from that of a")));
            }
            if g.label(*x, gen_index(g, neighbor)?).is_none() {
                return Err(Error::Spec(format!("{generator} and {neighbor} span no type-2 vertex")));
            }
            contact_offset(g, conjugator, c, &[*x])?;
            Ok(EndpointRecord::InteriorEdgePerp { angle: AngularValue::PI })
        }
        ContactSpec::Type1Contact { conjugator, generator, gamma_bar } => {
            let Resolved::Tree { c, x, d } = &spec else {
                return Err(Error::CaseMismatch("a vertex-elliptic element fixes no type-1 vertex".into()));
            };
            if gen_index(g, generator)? != *x {
                return Err(Error::CaseMismatch(format!("type-1 vertex of {generator} is not fixed by a")));
            }
            contact_offset(g, conjugator, c, &[*x])?;
            let Type1Point::Coset0 { power } = gamma_bar else {
                return Err(Error::CaseMismatch("γ must leave a type-1 vertex through a type-0 vertex".into()));
            };
            let step = d * n as i64;
            let radius = AngularValue::new(3, 2);
            let link_distance = if g.neighbors(*x).is_empty() {
                Distance::AtLeast(radius)
            } else {
                let window = (power.unsigned_abs() + step.unsigned_abs()) as u32;
                let opts = BallOptions { radius, axis_window: window, budget: DEFAULT_BUDGET };
                let link = build_link_type1(g, generator, &opts)?;
                let i = link.index_of(&LinkVertex::Power(*power)).expect("inside window");
                let j = link.index_of(&LinkVertex::Power(power + step)).expect("inside window");
                link.vertex_distance(i, j)
            };
            let angle = match link_distance {
                Distance::Exact(d) => d.min(AngularValue::PI),
                Distance::AtLeast(_) => AngularValue::PI,
            };
            require_pi("angle in the type-1 link".into(), angle)?;
            Ok(EndpointRecord::Type1Contact { link_distance, angle })
        }
        ContactSpec::Type2Contact { vertex, gamma_bar } => {
            let (pair, m) = resolve_pair(g, vertex)?;
            gamma_bar.check(m)?;
            // ā: the element a seen from the contact vertex, as a dihedral word
            let (local, tree) = match &spec {
                Resolved::Tree { c, x, d } => {
                    let Some(xi) = pair.iter().position(|p| p == x) else {
                        return Err(Error::CaseMismatch("a's generator is not in the contact vertex group".into()));
                    };
                    let r = contact_offset(g, &vertex.conjugator, c, &pair)?;
                    let u = to_local(&r, pair).expect("offset checked");
                    (Word::gen_power(xi, *d).conjugate_by(&u), Some((u, xi, *d)))
                }
                Resolved::Vertex { c, pair: vp, w, .. } => {
                    let w = if *vp == pair {
                        w.clone()
                    } else if *vp == [pair[1], pair[0]] {
                        Word::from_letters(w.letters().iter().map(|l| Letter::new(1 - l.gen, l.inv)).collect())
                    } else {
                        return Err(Error::CaseMismatch("a fixes a different type-2 vertex".into()));
                    };
                    let r = contact_offset(g, &vertex.conjugator, c, &pair)?;
                    (w.conjugate_by(&to_local(&r, pair).expect("offset checked")), None)
                }
            };
            let local_text = show(g, &from_local(&local.freely_reduced(), pair));
            if m == 2 {
                let a_n = local.power(n as i64).freely_reduced();
                let translate = gamma_bar.translate(&a_n);
                let distance = m2_link_distance(gamma_bar, &translate)?;
                let fixes_no_link_vertex = match tree {
                    Some(_) => None,
                    None => {
                        let e = AbelianNF::from_word(&local);
                        Some(e.p != 0 && e.q != 0)
                    }
                };
                if fixes_no_link_vertex == Some(false) {
                    return Err(Error::CaseMismatch("a fixes a link vertex".into()));
                }
                require_pi(format!("d(γ̄, a^{n}γ̄) in Lk(v), m = 2"), distance)?;
                return Ok(EndpointRecord::Type2Abelian {
                    local: local_text,
                    translate,
                    distance,
                    fixes_no_link_vertex,
                    n0: 1,
                });
            }
            let metric = QuotientMetric::new(m)?;
            match tree {
                Some((u, x, d)) => {
                    let axis = axis_key(&normal_form(&u, m), x);
                    let tbar_distance = metric.distance_to_axis(gamma_bar, &axis)?;
                    if tbar_distance < AngularValue::HALF_PI {
                        return Err(Error::AngleTooSmall {
                            what: "d(γ̄, T̄) in Lk(v)/⟨Δ⟩".into(),
                            found: tbar_distance,
                            needed: AngularValue::HALF_PI,
                        });
                    }
                    let n0 = min_exponent_tree_elliptic_type2(m, d)?;
                    let f = f_count(m, x, d, n);
                    let separated_angle = AngularValue::pi_over(m as u64) * (f.saturating_sub(1) as u64);
                    require_pi(format!("(f({n}) - 1)·π/{m}"), separated_angle)?;
                    Ok(EndpointRecord::Type2TreeElliptic {
                        m,
                        local: local_text,
                        tbar_distance,
                        n0,
                        f_count: f,
                        separated_angle,
                    })
                }
                None => {
                    let mut distances = Vec::new();
                    for k in (1..=bound_k as i64).flat_map(|k| [k, -k]) {
                        let moved = gamma_bar.translate(&local.power(k * n as i64).freely_reduced());
                        let distance = metric.distance(gamma_bar, &moved)?;
                        require_pi(format!("d(γ̄, a^{}γ̄) in Lk(v)/⟨Δ⟩", k * n as i64), distance)?;
                        distances.push(KDistance { k, distance });
                    }
                    Ok(EndpointRecord::Type2VertexElliptic { m, local: local_text, bound: bound_k, distances })
                }
            }
        }
    }
}

/// Smallest `n` in the exponent window at which the endpoint passes.
pub fn endpoint_min_exponent(g: &PresentationGraph, a: &EllipticSpec, c: &ContactSpec, bound_k: u32) -> Result<u64> {
    let mut last = Error::Unresolved { window: EXPONENT_WINDOW };
    for n in 1..=EXPONENT_WINDOW as u64 {
        match verify_endpoint(g, a, c, n, bound_k) {
            Ok(_) => return Ok(n),
            Err(e @ Error::AngleTooSmall { .. }) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

fn disjointness(g: &PresentationGraph, a: &Resolved, b: &Resolved, assume: bool) -> Result<Assumption> {
    if a.element() == b.element() {
        return Err(Error::DisjointnessUnknown("a and b coincide, so their fixed sets are equal".into()));
    }
    if let (Resolved::Tree { c: ca, x, .. }, Resolved::Tree { c: cb, x: y, .. }) = (a, b) {
        if g.all_labels_two() && ca == cb && x != y && g.label(*x, *y).is_none() {
            return Ok(Assumption {
                kind: AssumptionKind::Disjointness,
                statement: format!(
                    "Fix(a) and Fix(b) are disjoint: a common fixed vertex would put {} and {} in a conjugate of an abelian vertex group, but non-adjacent generators do not commute",
                    g.name(*x),
                    g.name(*y)
                ),
                discharged: true,
            });
        }
    }
    if assume {
        return Ok(Assumption {
            kind: AssumptionKind::Disjointness,
            statement: "Fix(a) and Fix(b) are disjoint (asserted)".into(),
            discharged: false,
        });
    }
    Err(Error::DisjointnessUnknown("disjointness is only derived for non-adjacent generators of a RAAG".into()))
}

/// The builder's `γ` for two RAAG generators is a local geodesic meeting both
/// fixed sets at angle at least `π/2` when it turns through one type-1
/// vertex (`Lk(⟨b⟩)` is complete bipartite, so the turn is `π`) or through
/// `{1}` between components of `Γ`. Longer chains turn by `π/2` at the
/// intermediate type-2 vertices, so those `γ` are only asserted.
fn distance_realizing(g: &PresentationGraph, a: &Resolved, b: &Resolved, gamma: &[ContactSpec; 2]) -> Assumption {
    let built = match (a, b) {
        (Resolved::Tree { c: ca, x, .. }, Resolved::Tree { c: cb, x: y, .. }) if ca.is_empty() && cb.is_empty() => {
            raag_gamma(g, g.name(*x), g.name(*y)).ok().filter(|built| built == gamma).map(|_| (*x, *y))
        }
        _ => None,
    };
    let short = built.is_some_and(|(x, y)| match &gamma[0] {
        ContactSpec::Type2Contact { vertex, .. } => {
            let mid = g.index_of(&vertex.generators[1]);
            mid.is_some_and(|v| g.label(v, y).is_some()) && g.label(x, y).is_none()
        }
        _ => true,
    });
    if short {
        Assumption {
            kind: AssumptionKind::DistanceRealizing,
            statement: "γ is a local geodesic meeting Fix(a) and Fix(b) at angle at least π/2".into(),
            discharged: true,
        }
    } else {
        Assumption {
            kind: AssumptionKind::DistanceRealizing,
            statement: "γ realizes the distance between Fix(a) and Fix(b) (asserted)".into(),
            discharged: false,
        }
    }
}

/// Emits a certificate that `⟨aⁿ, bⁿ⟩` is free of rank two.
pub fn certify_free(
    g: &PresentationGraph,
    a: &EllipticSpec,
    b: &EllipticSpec,
    gamma: &[ContactSpec; 2],
    opts: &CertifyOptions,
) -> Result<FreenessCertificate> {
    if !g.is_two_dimensional() {
        return Err(Error::Precondition("the presentation graph must be two-dimensional".into()));
    }
    let (ra, rb) = (resolve(g, a)?, resolve(g, b)?);
    let mut assumptions = vec![disjointness(g, &ra, &rb, opts.assume_disjoint)?, distance_realizing(g, &ra, &rb, gamma)];
    let n_min = endpoint_min_exponent(g, a, &gamma[0], opts.bound_k)?
        .max(endpoint_min_exponent(g, b, &gamma[1], opts.bound_k)?);
    let n = opts.n.unwrap_or(n_min);
    if n == 0 {
        return Err(Error::Rejected("n must be at least 1".into()));
    }
    let records = [
        verify_endpoint(g, a, &gamma[0], n, opts.bound_k)?,
        verify_endpoint(g, b, &gamma[1], n, opts.bound_k)?,
    ];
    for (i, r) in records.iter().enumerate() {
        if let EndpointRecord::Type2VertexElliptic { bound, .. } = r {
            assumptions.push(Assumption {
                kind: AssumptionKind::BoundedExponent,
                statement: format!("endpoint {i}: angle checked for 0 < |k| <= {bound} only"),
                discharged: false,
            });
        }
    }
    let (a_n, b_n) = (ra.element().power(n as i64), rb.element().power(n as i64));
    let raag_sweep = if g.all_labels_two() {
        if let Some(w) = raag_free_sweep(g, &[a_n.clone(), b_n.clone()], opts.sweep_depth)? {
            return Err(Error::Rejected(format!("the oracle found the trivial word {}", show(g, &w))));
        }
        Some(RaagSweepRecord { depth: opts.sweep_depth, reduced_words: 2 * (3u64.pow(opts.sweep_depth as u32) - 1) })
    } else {
        None
    };
    let mode = if assumptions.iter().all(|x| x.discharged) { CertMode::Exact } else { CertMode::ConditionalOnLabels };
    Ok(FreenessCertificate {
        format: CERT_FORMAT.to_string(),
        graph: g.to_json(),
        a: a.clone(),
        b: b.clone(),
        gamma: gamma.clone(),
        n,
        bound_k: opts.bound_k,
        assume_disjoint: opts.assume_disjoint,
        sweep_depth: opts.sweep_depth,
        n_min,
        endpoint_records: records,
        mode,
        assumptions,
        raag_sweep,
        loxodromic: show(g, &a_n.concat(&b_n).freely_reduced()),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub n: u64,
    pub mode: CertMode,
    pub undischarged: Vec<String>,
}

fn first_difference(path: &str, x: &serde_json::Value, y: &serde_json::Value) -> Option<(String, String, String)> {
    use serde_json::Value;
    match (x, y) {
        (Value::Object(a), Value::Object(b)) => {
            let keys: std::collections::BTreeSet<&String> = a.keys().chain(b.keys()).collect();
            keys.into_iter().find_map(|k| {
                let (u, v) = (a.get(k).unwrap_or(&Value::Null), b.get(k).unwrap_or(&Value::Null));
                first_difference(&format!("{path}.{k}"), u, v)
            })
        }
        (Value::Array(a), Value::Array(b)) if a.len() == b.len() => {
            a.iter().zip(b).enumerate().find_map(|(i, (u, v))| first_difference(&format!("{path}[{i}]"), u, v))
        }
        _ if x == y => None,
        _ => Some((path.to_string(), x.to_string(), y.to_string())),
    }
}

/// Re-derives every record of the certificate from its inputs.
pub fn check(cert: &FreenessCertificate) -> Result<CheckReport> {
    if cert.format != CERT_FORMAT {
        return Err(Error::Rejected(format!("unknown format {:?}", cert.format)));
    }
    if cert.n == 0 {
        return Err(Error::Rejected("n must be at least 1".into()));
    }
    let g = PresentationGraph::parse_json(&cert.graph.to_string()).map_err(|e| Error::Rejected(format!("graph: {e}")))?;
    let opts = CertifyOptions {
        n: Some(cert.n),
        bound_k: cert.bound_k,
        assume_disjoint: cert.assume_disjoint,
        sweep_depth: cert.sweep_depth,
    };
    let fresh = certify_free(&g, &cert.a, &cert.b, &cert.gamma, &opts)
        .map_err(|e| Error::Rejected(format!("recomputation failed: {e}")))?;
    let (x, y) = (serde_json::to_value(cert).expect("serializable"), serde_json::to_value(&fresh).expect("serializable"));
    if let Some((path, recorded, recomputed)) = first_difference("", &x, &y) {
        return Err(Error::Rejected(format!("{path}: recorded {recorded}, recomputed {recomputed}")));
    }
    Ok(CheckReport {
        n: cert.n,
        mode: cert.mode,
        undischarged: cert.assumptions.iter().filter(|a| !a.discharged).map(|a| a.statement.clone()).collect(),
    })
}

pub fn check_json(text: &str) -> Result<CheckReport> {
    let cert: FreenessCertificate =
        serde_json::from_str(text).map_err(|e| Error::Rejected(format!("malformed certificate: {e}")))?;
    check(&cert)
}

/// Contacts for two non-adjacent generators of a RAAG. With a path
/// `a – v₁ – … – c` in `Γ`, `γ` leaves `⟨a, v₁⟩` towards `⟨v₁⟩` and reaches
/// `⟨v_{k−1}, c⟩` from `⟨v_{k−1}⟩`; otherwise it runs `⟨a⟩ – {1} – ⟨c⟩`.
pub fn raag_gamma(g: &PresentationGraph, a: &str, c: &str) -> Result<[ContactSpec; 2]> {
    if !g.all_labels_two() {
        return Err(Error::Mode("the γ builder needs a right-angled graph".into()));
    }
    let (ia, ic) = (gen_index(g, a)?, gen_index(g, c)?);
    if ia == ic || g.label(ia, ic).is_some() {
        return Err(Error::DisjointnessUnknown(format!("{a} and {c} commute")));
    }
    let mut prev = vec![None; g.num_generators()];
    let mut seen = vec![false; g.num_generators()];
    seen[ia] = true;
    let mut queue = VecDeque::from([ia]);
    while let Some(v) = queue.pop_front() {
        for w in g.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                prev[w] = Some(v);
                queue.push_back(w);
            }
        }
    }
    if !seen[ic] {
        let type1 = |x: &str| ContactSpec::Type1Contact {
            conjugator: String::new(),
            generator: x.to_string(),
            gamma_bar: Type1Point::Coset0 { power: 0 },
        };
        return Ok([type1(a), type1(c)]);
    }
    let mut path = vec![ic];
    while let Some(p) = prev[*path.last().unwrap()] {
        path.push(p);
    }
    path.reverse();
    let contact = |x: usize, y: usize| ContactSpec::Type2Contact {
        vertex: CosetDescriptor { conjugator: String::new(), generators: [g.name(x).to_string(), g.name(y).to_string()] },
        gamma_bar: LinkPoint::Coset { word: Word::empty(), gen: T },
    };
    Ok([contact(ia, path[1]), contact(ic, path[path.len() - 2])])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PingPongEdge {
    pub parent: usize,
    pub child: usize,
    pub label: String,
}

/// The tree of translates `g₀⋯gᵢ·γ` for reduced words in `a^{±n}`, `b^{±n}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PingPongTree {
    pub n: u64,
    pub depth: usize,
    pub nodes: Vec<String>,
    pub edges: Vec<PingPongEdge>,
    /// Edges added at each level: `4·3^{k−1}`.
    pub level_edges: Vec<usize>,
}

pub fn pingpong_tree(cert: &FreenessCertificate, depth: usize) -> Result<PingPongTree> {
    check(cert)?;
    let n = cert.n as i64;
    let labels = [format!("a^{n}"), format!("a^-{n}"), format!("b^{n}"), format!("b^-{n}")];
    let mut tree = PingPongTree { n: cert.n, depth, nodes: vec!["1".into()], edges: Vec::new(), level_edges: Vec::new() };
    // (node id, last letter index)
    let mut frontier: Vec<(usize, Option<usize>)> = vec![(0, None)];
    for _ in 0..depth {
        let mut next = Vec::new();
        for &(id, last) in &frontier {
            for (i, label) in labels.iter().enumerate() {
                if last == Some(i ^ 1) {
                    continue;
                }
                let child = tree.nodes.len();
                let word = if id == 0 { label.clone() } else { format!("{} {label}", tree.nodes[id]) };
                tree.nodes.push(word);
                tree.edges.push(PingPongEdge { parent: id, child, label: label.clone() });
                next.push((child, Some(i)));
            }
        }
        tree.level_edges.push(next.len());
        frontier = next;
    }
    Ok(tree)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoxodromicWitness {
    pub word: String,
    pub note: String,
    /// In a RAAG, the largest `k` with `(aⁿbⁿ)^j ≠ 1` checked for `1 ≤ j ≤ k`.
    pub nontrivial_powers: Option<u32>,
}

pub fn loxodromic_witness(cert: &FreenessCertificate) -> Result<LoxodromicWitness> {
    check(cert)?;
    let g = PresentationGraph::parse_json(&cert.graph.to_string())?;
    let n = cert.n as i64;
    let w = resolve(&g, &cert.a)?.element().power(n).concat(&resolve(&g, &cert.b)?.element().power(n));
    let nontrivial_powers = if g.all_labels_two() {
        for k in 1..=4 {
            if raag_is_identity(&w.power(k), &g)? {
                return Err(Error::Rejected(format!("(a^n b^n)^{k} is trivial")));
            }
        }
        Some(4)
    } else {
        None
    };
    Ok(LoxodromicWitness {
        word: show(&g, &w.freely_reduced()),
        note: "a^n b^n acts loxodromically: it is not conjugate to a power of a^n or b^n".into(),
        nontrivial_powers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_abc() -> PresentationGraph {
        PresentationGraph::new(vec!["a".into(), "b".into(), "c".into()], &[(0, 1, 2), (1, 2, 2)]).unwrap()
    }

    fn dihedral(m: u32) -> PresentationGraph {
        PresentationGraph::new(vec!["s".into(), "t".into()], &[(0, 1, m)]).unwrap()
    }

    fn type2(gens: [&str; 2], gamma_bar: LinkPoint) -> ContactSpec {
        ContactSpec::Type2Contact {
            vertex: CosetDescriptor { conjugator: String::new(), generators: [gens[0].into(), gens[1].into()] },
            gamma_bar,
        }
    }

    fn elem(text: &str) -> LinkPoint {
        LinkPoint::Element { word: Word::parse_dihedral(text).unwrap() }
    }

    #[test]
    fn n0_for_small_cases() {
        assert_eq!(min_exponent_tree_elliptic_type2(3, 1).unwrap(), 5);
        assert!(min_exponent_tree_elliptic_type2(3, 2).unwrap() <= 5);
        assert_eq!(min_exponent_tree_elliptic_type2(2, 1).unwrap(), 1);
        let sweep = f_sweep(3, 1, 16);
        assert!(sweep.windows(2).all(|w| w[0] <= w[1]));
        for m in 3..6 {
            assert!(min_exponent_tree_elliptic_type2(m, 1).is_ok());
        }
    }

    #[test]
    fn path_raag_certificate() {
        let g = path_abc();
        let gamma = raag_gamma(&g, "a", "c").unwrap();
        let (a, c) = (EllipticSpec::generator("a"), EllipticSpec::generator("c"));
        let cert = certify_free(&g, &a, &c, &gamma, &CertifyOptions::default()).unwrap();
        assert_eq!(cert.n, 1);
        assert_eq!(cert.mode, CertMode::Exact);
        assert_eq!(cert.loxodromic, "a c");
        check(&cert).unwrap();
        let text = serde_json::to_string(&cert).unwrap();
        check_json(&text).unwrap();
        let lox = loxodromic_witness(&cert).unwrap();
        assert_eq!(lox.nontrivial_powers, Some(4));
        let two = certify_free(&g, &a, &c, &gamma, &CertifyOptions { n: Some(2), ..Default::default() }).unwrap();
        assert_eq!(loxodromic_witness(&two).unwrap().word, "a^2 c^2");
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = path_abc();
        let gamma = raag_gamma(&g, "a", "c").unwrap();
        let a = EllipticSpec::generator("a");
        let zero = CertifyOptions { n: Some(0), ..Default::default() };
        assert!(certify_free(&g, &a, &EllipticSpec::generator("c"), &gamma, &zero).is_err());
        assert!(matches!(
            certify_free(&g, &a, &a, &gamma, &CertifyOptions::default()),
            Err(Error::DisjointnessUnknown(_))
        ));
        assert!(raag_gamma(&g, "a", "b").is_err());
    }

    #[test]
    fn tampering_is_detected() {
        let g = path_abc();
        let gamma = raag_gamma(&g, "a", "c").unwrap();
        let cert =
            certify_free(&g, &EllipticSpec::generator("a"), &EllipticSpec::generator("c"), &gamma, &Default::default())
                .unwrap();
        let mut bad = cert.clone();
        bad.n = 2;
        assert!(check(&bad).is_err());
        let mut bad = cert.clone();
        bad.n_min = 3;
        assert!(check(&bad).is_err());
        let mut bad = cert;
        bad.format = "freeness-cert/0".into();
        assert!(check(&bad).is_err());
    }

    #[test]
    fn long_chains_are_conditional() {
        let g = PresentationGraph::new(
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            &[(0, 1, 2), (1, 2, 2), (2, 3, 2)],
        )
        .unwrap();
        let gamma = raag_gamma(&g, "a", "d").unwrap();
        let cert =
            certify_free(&g, &EllipticSpec::generator("a"), &EllipticSpec::generator("d"), &gamma, &Default::default())
                .unwrap();
        assert_eq!(cert.mode, CertMode::ConditionalOnLabels);
        assert!(cert.assumptions.iter().any(|a| a.kind == AssumptionKind::DistanceRealizing && !a.discharged));
    }

    #[test]
    fn disconnected_generators_use_type1_contacts() {
        let g = PresentationGraph::new(vec!["a".into(), "b".into(), "c".into()], &[(0, 1, 2)]).unwrap();
        let gamma = raag_gamma(&g, "a", "c").unwrap();
        assert!(matches!(gamma[1], ContactSpec::Type1Contact { .. }));
        let cert =
            certify_free(&g, &EllipticSpec::generator("a"), &EllipticSpec::generator("c"), &gamma, &Default::default())
                .unwrap();
        assert!(matches!(cert.endpoint_records[0], EndpointRecord::Type1Contact { angle, .. } if angle == AngularValue::PI));
        check(&cert).unwrap();
    }

    #[test]
    fn m2_vertex_elliptic_endpoint() {
        let g = dihedral(2);
        let a = EllipticSpec::VertexElliptic {
            vertex: CosetDescriptor { conjugator: String::new(), generators: ["s".into(), "t".into()] },
            word: "s t".into(),
        };
        for gen in [S, T] {
            let c = type2(["s", "t"], LinkPoint::Coset { word: Word::empty(), gen });
            let r = verify_endpoint(&g, &a, &c, 1, 4).unwrap();
            assert!(matches!(r, EndpointRecord::Type2Abelian { distance, fixes_no_link_vertex: Some(true), .. } if distance == AngularValue::PI));
        }
    }

    #[test]
    fn m3_tree_elliptic_endpoint() {
        let g = dihedral(3);
        let a = EllipticSpec::generator("s");
        let on_tree = type2(["s", "t"], LinkPoint::Coset { word: Word::empty(), gen: S });
        let err = verify_endpoint(&g, &a, &on_tree, 5, 4).unwrap_err();
        assert!(matches!(err, Error::AngleTooSmall { found, .. } if found == AngularValue::ZERO));
        let adjacent = type2(["s", "t"], elem(""));
        let err = verify_endpoint(&g, &a, &adjacent, 5, 4).unwrap_err();
        assert!(matches!(err, Error::AngleTooSmall { found, .. } if found == AngularValue::pi_over(6)));
        // t{1} lies on ⟨t⟩ and t⟨s⟩, both one coset-graph edge from T̄
        let far = type2(["s", "t"], elem("t"));
        let r = verify_endpoint(&g, &a, &far, 5, 4).unwrap();
        assert!(matches!(r, EndpointRecord::Type2TreeElliptic { n0: 5, f_count: 4, .. }));
        assert!(matches!(verify_endpoint(&g, &a, &far, 4, 4), Err(Error::AngleTooSmall { .. })));
        assert_eq!(endpoint_min_exponent(&g, &a, &far, 4).unwrap(), 5);
    }

    #[test]
    fn contact_must_lie_on_fix() {
        let g = path_abc();
        let a = EllipticSpec::generator("a");
        let wrong = type2(["b", "c"], LinkPoint::Coset { word: Word::empty(), gen: T });
        assert!(matches!(verify_endpoint(&g, &a, &wrong, 1, 4), Err(Error::CaseMismatch(_))));
        let far = ContactSpec::Type2Contact {
            vertex: CosetDescriptor { conjugator: "c".into(), generators: ["a".into(), "b".into()] },
            gamma_bar: LinkPoint::Coset { word: Word::empty(), gen: T },
        };
        assert!(matches!(verify_endpoint(&g, &a, &far, 1, 4), Err(Error::CaseMismatch(_))));
        let edge = ContactSpec::InteriorEdgePerp {
            conjugator: "a^3".into(),
            generator: "a".into(),
            neighbor: "b".into(),
            perpendicular: true,
        };
        assert_eq!(verify_endpoint(&g, &a, &edge, 1, 4).unwrap(), EndpointRecord::InteriorEdgePerp { angle: AngularValue::PI });
        let slanted = ContactSpec::InteriorEdgePerp {
            conjugator: String::new(),
            generator: "a".into(),
            neighbor: "b".into(),
            perpendicular: false,
        };
        assert!(matches!(verify_endpoint(&g, &a, &slanted, 1, 4), Err(Error::CaseMismatch(_))));
        let type1_bad = ContactSpec::Type1Contact {
            conjugator: String::new(),
            generator: "a".into(),
            gamma_bar: Type1Point::Type2 { neighbor: "b".into() },
        };
        assert!(matches!(verify_endpoint(&g, &a, &type1_bad, 1, 4), Err(Error::CaseMismatch(_))));
    }

    #[test]
    fn symmetric_in_a_and_b() {
        let g = path_abc();
        let gamma = raag_gamma(&g, "a", "c").unwrap();
        let (a, c) = (EllipticSpec::generator("a"), EllipticSpec::generator("c"));
        let x = certify_free(&g, &a, &c, &gamma, &Default::default()).unwrap();
        let mirrored = [gamma[1].clone(), gamma[0].clone()];
        let y = certify_free(&g, &c, &a, &mirrored, &Default::default()).unwrap();
        assert_eq!(x.endpoint_records[0], y.endpoint_records[1]);
        assert_eq!(x.endpoint_records[1], y.endpoint_records[0]);
    }

    #[test]
    fn pingpong_counts() {
        let g = path_abc();
        let gamma = raag_gamma(&g, "a", "c").unwrap();
        let cert =
            certify_free(&g, &EllipticSpec::generator("a"), &EllipticSpec::generator("c"), &gamma, &Default::default())
                .unwrap();
        assert_eq!(pingpong_tree(&cert, 1).unwrap().edges.len(), 4);
        assert_eq!(pingpong_tree(&cert, 2).unwrap().edges.len(), 16);
        let t = pingpong_tree(&cert, 3).unwrap();
        assert_eq!(t.level_edges, vec![4, 12, 36]);
        assert_eq!(t.nodes.len(), t.edges.len() + 1);
    }
}
