//! Links of vertices of the Deligne complex and their angular metrics.
//!
//! The link of the type-2 vertex `v_st` is the barycentric subdivision of
//! the coset graph of `A_st`: a vertex `g{1}` (type 0) for every element and
//! a vertex `g⟨x⟩` (type 1) for every coset of a generator, with `g{1}`
//! joined to `g⟨s⟩` and `g⟨t⟩` by edges of length `π/(2m)`. Cosets have
//! infinitely many neighbors, so materialized balls also cap the exponent
//! `j` in `g·x^j` ("axis window").
//!
//! Exact distances do not need balls:
//!
//! * `m = 2`: the coset graph is complete bipartite, so distances only
//!   depend on which coordinates of `ℤ²` agree.
//! * `m ≥ 3`, quotient by the right action of `⟨Δ⟩`: the quotient coset
//!   graph has the `Δ`-orbits of cosets ("axes") as vertices and the
//!   vertices of the quasi-tree `𝒯` as edges; each block of `𝒯` becomes an
//!   `m`-cycle. A shortest path between two axes never leaves the blocks
//!   along the block-tree path between them (every intermediate block-tree
//!   node separates), so a BFS over those cycles is exact.

use std::cell::RefCell;
use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::angle::AngularValue;
use crate::error::{Error, Result};
use crate::garside::{self, tau_letter, AbelianNF, DihedralElement, GarsideNF};
use crate::presentation::PresentationGraph;
use crate::quasitree::{blocks_of, display_vertex, element_of, tree_path, Block, TVertex, TreeNode};
use crate::word::{dihedral_gen, dihedral_text, Word, DIHEDRAL_ALPHABET, S, T};

pub const DEFAULT_BUDGET: usize = 200_000;

/// The minimal element of the coset `g⟨x⟩` under (atom count, atoms).
///
/// Along `g·x^j` the atom count changes by at most one per step and is
/// unimodal in `j`, so walking both ways until the count is two above the
/// best seen finds the minimum.
pub fn coset_min(g: &GarsideNF, x: usize) -> GarsideNF {
    let key = |e: &GarsideNF| (e.atoms().len(), e.atoms().to_vec());
    let mut best = g.clone();
    let limit = 2 * (g.atoms().len() + g.modulus() as usize) + 8;
    for dir in [1i64, -1] {
        let mut cur = g.clone();
        for _ in 0..limit {
            cur = cur.times_gen_power(x, dir);
            if key(&cur) < key(&best) {
                best = cur.clone();
            }
            if cur.atoms().len() >= best.atoms().len() + 2 {
                break;
            }
        }
    }
    best
}

/// The coset `rep·⟨gen⟩` with `rep = coset_min`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CosetKey {
    pub rep: GarsideNF,
    pub gen: usize,
}

pub fn coset_key(g: &GarsideNF, x: usize) -> CosetKey {
    CosetKey { rep: coset_min(g, x), gen: x }
}

/// A right `⟨Δ⟩`-orbit of cosets, written `base·⟨gen⟩` with `base` of zero `Δ` exponent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AxisKey {
    pub base: TVertex,
    #[serde(with = "dihedral_gen")]
    pub gen: usize,
}

impl fmt::Display for AxisKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]<{}>", display_vertex(&self.base), DIHEDRAL_ALPHABET[self.gen])
    }
}

/// Orbit of `g⟨x⟩`: if its minimal element is `AΔ^δ` then `g⟨x⟩Δ^{-δ} = A⟨τ^δ(x)⟩`.
pub fn axis_key(g: &GarsideNF, x: usize) -> AxisKey {
    let u = coset_min(g, x);
    AxisKey { base: u.atoms().to_vec(), gen: tau_letter(g.modulus(), x, u.delta_exp()) }
}

/// `T̄` for the generator `gen`: the orbit of `⟨gen⟩`.
pub fn tbar(gen: usize) -> AxisKey {
    AxisKey { base: Vec::new(), gen }
}

/// A point of the link of `v_st`, given by group elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LinkPoint {
    /// The type-0 vertex `g{1}`.
    Element {
        #[serde(with = "dihedral_text")]
        word: Word,
    },
    /// The type-1 vertex `g⟨gen⟩`.
    Coset {
        #[serde(with = "dihedral_text")]
        word: Word,
        #[serde(with = "dihedral_gen")]
        gen: usize,
    },
    /// The point at distance `offset` from `g{1}` on the edge to `g⟨gen⟩`.
    Edge {
        #[serde(with = "dihedral_text")]
        word: Word,
        #[serde(with = "dihedral_gen")]
        gen: usize,
        offset: AngularValue,
    },
}

impl LinkPoint {
    pub fn word(&self) -> &Word {
        match self {
            LinkPoint::Element { word } | LinkPoint::Coset { word, .. } | LinkPoint::Edge { word, .. } => word,
        }
    }

    /// `h · self`.
    pub fn translate(&self, h: &Word) -> LinkPoint {
        let mut p = self.clone();
        match &mut p {
            LinkPoint::Element { word } | LinkPoint::Coset { word, .. } | LinkPoint::Edge { word, .. } => {
                *word = h.concat(word)
            }
        }
        p
    }

    pub fn check(&self, m: u32) -> Result<()> {
        if self.word().max_gen().is_some_and(|g| g > T) {
            return Err(Error::Validation("link point word must use s, t only".into()));
        }
        if let LinkPoint::Edge { offset, .. } = self {
            if offset.is_zero() || *offset >= edge_length(m) {
                return Err(Error::Validation(format!(
                    "edge offset {offset} must lie strictly between 0 and {}",
                    edge_length(m)
                )));
            }
        }
        Ok(())
    }
}

/// Length of a link edge at a type-2 vertex with label `m`.
pub fn edge_length(m: u32) -> AngularValue {
    AngularValue::pi_over(2 * m as u64)
}

fn units(k: u64, m: u32) -> AngularValue {
    edge_length(m) * k
}

/// Combines anchor lists `(node, cost)` of two points: the minimum of
/// `cost_p + d(node_p, node_q) + cost_q`, or the offset difference when both
/// points sit on the same edge.
fn combine<N: PartialEq>(
    p: &[(N, AngularValue)],
    q: &[(N, AngularValue)],
    m: u32,
    mut node_units: impl FnMut(&N, &N) -> Result<u64>,
) -> Result<AngularValue> {
    let mut best: Option<AngularValue> = None;
    if p.len() == 2 && q.len() == 2 && p[0].0 == q[0].0 && p[1].0 == q[1].0 {
        let (a, b) = (p[0].1, q[0].1);
        best = Some(if a >= b { a - b } else { b - a });
    }
    for (a, ca) in p {
        for (b, cb) in q {
            let d = *ca + *cb + units(node_units(a, b)?, m);
            if best.is_none_or(|x| d < x) {
                best = Some(d);
            }
        }
    }
    Ok(best.expect("points have anchors"))
}

/// A vertex of the `Δ`-quotient of the link.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QNode {
    Vertex(TVertex),
    Axis(AxisKey),
}

/// Exact metric on `Lk(v_st)/⟨Δ⟩` for `m ≥ 3`.
pub struct QuotientMetric {
    m: u32,
    pad: usize,
    cache: RefCell<HashMap<(TVertex, usize), AxisKey>>,
}

impl QuotientMetric {
    pub fn new(m: u32) -> Result<Self> {
        Self::with_padding(m, 1)
    }

    /// `pad` extra layers of blocks around the block-tree path are searched
    /// (for cross-checking; the result does not depend on it).
    pub fn with_padding(m: u32, pad: usize) -> Result<Self> {
        if m < 3 {
            return Err(Error::Precondition("the Δ-quotient metric needs m >= 3".into()));
        }
        Ok(QuotientMetric { m, pad, cache: RefCell::new(HashMap::new()) })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn axis_of(&self, v: &[crate::garside::Atom], gen: usize) -> AxisKey {
        let k = (v.to_vec(), gen);
        if let Some(a) = self.cache.borrow().get(&k) {
            return a.clone();
        }
        let a = axis_key(&element_of(v, self.m), gen);
        self.cache.borrow_mut().insert(k, a.clone());
        a
    }

    /// The `m` axes around the block, in cycle order.
    pub fn block_cycle(&self, b: &Block) -> Vec<AxisKey> {
        let vs = b.vertices(self.m);
        (0..self.m).map(|i| self.axis_of(&vs[i as usize], b.edge_letter(i))).collect()
    }

    /// Distance between two axes, counted in quotient coset-graph edges (each `π/m`).
    pub fn axis_distance(&self, x: &AxisKey, y: &AxisKey) -> Result<u64> {
        if x == y {
            return Ok(0);
        }
        let mut blocks = BTreeSet::new();
        for node in tree_path(&x.base, &y.base) {
            match node {
                TreeNode::Vertex(v) => blocks.extend(blocks_of(&v)),
                TreeNode::Block(b) => {
                    blocks.insert(b);
                }
            }
        }
        for _ in 0..self.pad {
            let layer: Vec<Block> = blocks.iter().cloned().collect();
            for b in layer {
                for v in b.vertices(self.m) {
                    blocks.extend(blocks_of(&v));
                }
            }
        }
        let mut adj: HashMap<AxisKey, Vec<AxisKey>> = HashMap::new();
        for b in &blocks {
            let cyc = self.block_cycle(b);
            for i in 0..cyc.len() {
                let (p, q) = (&cyc[i], &cyc[(i + 1) % cyc.len()]);
                adj.entry(p.clone()).or_default().push(q.clone());
                adj.entry(q.clone()).or_default().push(p.clone());
            }
        }
        let mut dist: HashMap<&AxisKey, u64> = HashMap::from([(x, 0)]);
        let mut queue = VecDeque::from([x]);
        while let Some(a) = queue.pop_front() {
            let d = dist[a];
            for b in adj.get(a).into_iter().flatten() {
                if !dist.contains_key(b) {
                    if b == y {
                        return Ok(d + 1);
                    }
                    dist.insert(b, d + 1);
                    queue.push_back(b);
                }
            }
        }
        Err(Error::StructureViolation(format!("no path from {x} to {y} in the block region")))
    }

    /// Distance between quotient vertices in units of `π/(2m)`.
    pub fn node_units(&self, a: &QNode, b: &QNode) -> Result<u64> {
        let axes = |v: &TVertex| [self.axis_of(v, S), self.axis_of(v, T)];
        Ok(match (a, b) {
            (QNode::Axis(x), QNode::Axis(y)) => 2 * self.axis_distance(x, y)?,
            (QNode::Vertex(v), QNode::Axis(y)) | (QNode::Axis(y), QNode::Vertex(v)) => {
                let mut best = u64::MAX;
                for x in axes(v) {
                    best = best.min(self.axis_distance(&x, y)?);
                }
                1 + 2 * best
            }
            (QNode::Vertex(v), QNode::Vertex(w)) => {
                if v == w {
                    0
                } else {
                    let mut best = u64::MAX;
                    for x in axes(v) {
                        for y in axes(w) {
                            best = best.min(self.axis_distance(&x, &y)?);
                        }
                    }
                    2 + 2 * best
                }
            }
        })
    }

    pub fn anchors(&self, p: &LinkPoint) -> Result<Vec<(QNode, AngularValue)>> {
        p.check(self.m)?;
        let g = garside::normal_form(p.word(), self.m);
        Ok(match p {
            LinkPoint::Element { .. } => vec![(QNode::Vertex(g.atoms().to_vec()), AngularValue::ZERO)],
            LinkPoint::Coset { gen, .. } => vec![(QNode::Axis(axis_key(&g, *gen)), AngularValue::ZERO)],
            LinkPoint::Edge { gen, offset, .. } => vec![
                (QNode::Vertex(g.atoms().to_vec()), *offset),
                (QNode::Axis(axis_key(&g, *gen)), edge_length(self.m) - *offset),
            ],
        })
    }

    pub fn distance(&self, p: &LinkPoint, q: &LinkPoint) -> Result<AngularValue> {
        let (a, b) = (self.anchors(p)?, self.anchors(q)?);
        combine(&a, &b, self.m, |x, y| self.node_units(x, y))
    }

    /// `d(p, T̄)` for the standard axis of `gen`.
    pub fn distance_to_axis(&self, p: &LinkPoint, axis: &AxisKey) -> Result<AngularValue> {
        let a = self.anchors(p)?;
        combine(&a, &[(QNode::Axis(axis.clone()), AngularValue::ZERO)], self.m, |x, y| self.node_units(x, y))
    }
}

/// Exact distance in `Lk(v_st)/⟨Δ⟩`, `m ≥ 3`.
pub fn quotient_distance(m: u32, p: &LinkPoint, q: &LinkPoint) -> Result<AngularValue> {
    QuotientMetric::new(m)?.distance(p, q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum M2Node {
    Elem(i64, i64),
    /// `g⟨s⟩` keyed by the `t`-coordinate.
    S(i64),
    /// `g⟨t⟩` keyed by the `s`-coordinate.
    T(i64),
}

fn m2_units(a: &M2Node, b: &M2Node) -> u64 {
    use M2Node::*;
    match (*a, *b) {
        (Elem(p, q), Elem(r, u)) => match ((p == r) as u8) + ((q == u) as u8) {
            2 => 0,
            1 => 2,
            _ => 4,
        },
        (Elem(_, q), S(u)) | (S(u), Elem(_, q)) => if q == u { 1 } else { 3 },
        (Elem(p, _), T(r)) | (T(r), Elem(p, _)) => if p == r { 1 } else { 3 },
        (S(q), S(u)) | (T(q), T(u)) => if q == u { 0 } else { 4 },
        (S(_), T(_)) | (T(_), S(_)) => 2,
    }
}

fn m2_anchors(p: &LinkPoint) -> Result<Vec<(M2Node, AngularValue)>> {
    p.check(2)?;
    let a = AbelianNF::from_word(p.word());
    let coset = |gen: usize| if gen == S { M2Node::S(a.q) } else { M2Node::T(a.p) };
    Ok(match p {
        LinkPoint::Element { .. } => vec![(M2Node::Elem(a.p, a.q), AngularValue::ZERO)],
        LinkPoint::Coset { gen, .. } => vec![(coset(*gen), AngularValue::ZERO)],
        LinkPoint::Edge { gen, offset, .. } => {
            vec![(M2Node::Elem(a.p, a.q), *offset), (coset(*gen), edge_length(2) - *offset)]
        }
    })
}

/// Exact distance in the link of `v_st` for `m = 2`.
pub fn m2_link_distance(p: &LinkPoint, q: &LinkPoint) -> Result<AngularValue> {
    combine(&m2_anchors(p)?, &m2_anchors(q)?, 2, |a, b| Ok(m2_units(a, b)))
}

/// A shortest-path result inside a materialized ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Distance {
    Exact(AngularValue),
    AtLeast(AngularValue),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CosetKind {
    /// `g{1}`
    Coset0,
    /// `g⟨gen⟩`
    Coset1 {
        #[serde(with = "dihedral_gen")]
        gen: usize,
    },
    /// A type-2 coset, in the link of a type-1 vertex.
    Type2,
}

/// A vertex of a materialized link ball.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LinkVertex {
    Element(DihedralElement),
    Coset { rep: DihedralElement, gen: usize },
    ElementOrbit(TVertex),
    AxisOrbit(AxisKey),
    /// `a^i{1}` in the link of the type-1 vertex `⟨a⟩`.
    Power(i64),
    /// The type-2 coset `⟨a, b⟩` containing `⟨a⟩`.
    Parabolic(String),
}

impl LinkVertex {
    pub fn kind(&self) -> CosetKind {
        match self {
            LinkVertex::Element(_) | LinkVertex::ElementOrbit(_) | LinkVertex::Power(_) => CosetKind::Coset0,
            LinkVertex::Coset { gen, .. } => CosetKind::Coset1 { gen: *gen },
            LinkVertex::AxisOrbit(a) => CosetKind::Coset1 { gen: a.gen },
            LinkVertex::Parabolic(_) => CosetKind::Type2,
        }
    }

    fn label(&self, center: &LinkCenter) -> String {
        match self {
            LinkVertex::Element(e) => format!("{e}"),
            LinkVertex::Coset { rep, gen } => format!("{rep}<{}>", DIHEDRAL_ALPHABET[*gen]),
            LinkVertex::ElementOrbit(v) => format!("[{}]", display_vertex(v)),
            LinkVertex::AxisOrbit(a) => a.to_string(),
            LinkVertex::Power(i) => match center {
                LinkCenter::Type1 { generator, .. } => format!("{generator}^{i}"),
                _ => format!("^{i}"),
            },
            LinkVertex::Parabolic(name) => match center {
                LinkCenter::Type1 { generator, .. } => format!("<{generator},{name}>"),
                _ => format!("<{name}>"),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LinkCenter {
    Type2 { m: u32 },
    Type1 { generator: String, neighbors: Vec<String> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LinkEdge {
    pub a: usize,
    pub b: usize,
    pub len: AngularValue,
}

#[derive(Debug, Clone, Copy)]
pub struct BallOptions {
    pub radius: AngularValue,
    /// Exponents `|j| ≤ axis_window` in `g·x^j` around each coset representative.
    pub axis_window: u32,
    pub budget: usize,
}

impl BallOptions {
    pub fn new(radius: AngularValue) -> Self {
        BallOptions { radius, axis_window: 2, budget: DEFAULT_BUDGET }
    }
}

/// A finite piece of a link: everything reachable from the root within the
/// radius using at most `axis_window` steps along each coset. Distances
/// measured inside it are distances in this subgraph.
#[derive(Debug, Clone)]
pub struct LinkGraph {
    pub center: LinkCenter,
    pub quotiented: bool,
    pub radius: AngularValue,
    pub axis_window: u32,
    pub vertices: Vec<LinkVertex>,
    pub edges: Vec<LinkEdge>,
    /// Combinatorial distance from the root.
    pub depth: Vec<u32>,
    index: HashMap<LinkVertex, usize>,
    adj: Vec<Vec<usize>>,
}

fn grow(
    center: LinkCenter,
    quotiented: bool,
    opts: &BallOptions,
    edge_len: AngularValue,
    root: LinkVertex,
    mut neighbors: impl FnMut(&LinkVertex) -> Vec<LinkVertex>,
) -> Result<LinkGraph> {
    if opts.radius < edge_len {
        return Err(Error::Precondition(format!("radius must be at least {edge_len}")));
    }
    let max_depth = ((opts.radius.num() as u128 * edge_len.den() as u128)
        / (opts.radius.den() as u128 * edge_len.num() as u128)) as u32;
    let mut g = LinkGraph {
        center,
        quotiented,
        radius: opts.radius,
        axis_window: opts.axis_window,
        vertices: vec![root.clone()],
        edges: Vec::new(),
        depth: vec![0],
        index: HashMap::from([(root, 0)]),
        adj: vec![Vec::new()],
    };
    let mut seen_edges = BTreeSet::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if g.depth[i] >= max_depth {
            continue;
        }
        for w in neighbors(&g.vertices[i].clone()) {
            let j = match g.index.get(&w) {
                Some(&j) => j,
                None => {
                    let j = g.vertices.len();
                    if j >= opts.budget {
                        return Err(Error::ResourceLimit { what: "link ball vertices".into(), budget: opts.budget });
                    }
                    g.index.insert(w.clone(), j);
                    g.vertices.push(w);
                    g.depth.push(g.depth[i] + 1);
                    g.adj.push(Vec::new());
                    queue.push_back(j);
                    j
                }
            };
            if i != j && seen_edges.insert((i.min(j), i.max(j))) {
                g.edges.push(LinkEdge { a: i.min(j), b: i.max(j), len: edge_len });
                g.adj[i].push(j);
                g.adj[j].push(i);
            }
        }
    }
    Ok(g)
}

fn coset_vertex(e: &DihedralElement, gen: usize) -> LinkVertex {
    match e {
        DihedralElement::Abelian(a) => {
            let rep = if gen == S { AbelianNF { p: 0, q: a.q } } else { AbelianNF { p: a.p, q: 0 } };
            LinkVertex::Coset { rep: DihedralElement::Abelian(rep), gen }
        }
        DihedralElement::Garside(g) => LinkVertex::Coset { rep: DihedralElement::Garside(coset_min(g, gen)), gen },
    }
}

fn times_gen_power(e: &DihedralElement, gen: usize, j: i64) -> DihedralElement {
    match e {
        DihedralElement::Abelian(a) => DihedralElement::Abelian(if gen == S {
            AbelianNF { p: a.p + j, q: a.q }
        } else {
            AbelianNF { p: a.p, q: a.q + j }
        }),
        DihedralElement::Garside(g) => DihedralElement::Garside(g.times_gen_power(gen, j)),
    }
}

/// Ball in the link of `v_st` around the type-0 vertex `e{1}`.
pub fn build_link_type2(m: u32, opts: &BallOptions) -> Result<LinkGraph> {
    let root = garside::element(&Word::empty(), m)?;
    let w = opts.axis_window as i64;
    grow(LinkCenter::Type2 { m }, false, opts, edge_length(m), LinkVertex::Element(root), |v| match v {
        LinkVertex::Element(e) => vec![coset_vertex(e, S), coset_vertex(e, T)],
        LinkVertex::Coset { rep, gen } => (-w..=w).map(|j| LinkVertex::Element(times_gen_power(rep, *gen, j))).collect(),
        _ => Vec::new(),
    })
}

/// Ball in `Lk(v_st)/⟨Δ⟩` around the orbit of `e{1}`, built directly on orbit keys.
pub fn build_quotient_link(m: u32, opts: &BallOptions) -> Result<QuotientLink> {
    let metric = QuotientMetric::new(m)?;
    let w = opts.axis_window as i64;
    let graph = grow(
        LinkCenter::Type2 { m },
        true,
        opts,
        edge_length(m),
        LinkVertex::ElementOrbit(Vec::new()),
        |v| match v {
            LinkVertex::ElementOrbit(a) => {
                vec![LinkVertex::AxisOrbit(metric.axis_of(a, S)), LinkVertex::AxisOrbit(metric.axis_of(a, T))]
            }
            LinkVertex::AxisOrbit(x) => {
                let base = element_of(&x.base, m);
                (-w..=w).map(|j| LinkVertex::ElementOrbit(base.times_gen_power(x.gen, j).atoms().to_vec())).collect()
            }
            _ => Vec::new(),
        },
    )?;
    let map = (0..graph.vertices.len()).collect();
    Ok(QuotientLink { graph, map, tbar: standard_tbar() })
}

fn standard_tbar() -> BTreeMap<String, AxisKey> {
    BTreeMap::from([("s".to_string(), tbar(S)), ("t".to_string(), tbar(T))])
}

/// Ball in the link of the type-1 vertex `⟨a⟩`: complete bipartite between
/// the type-0 vertices `a^i{1}` and the type-2 cosets `⟨a, b⟩` for the
/// neighbors `b` of `a` in `Γ`.
pub fn build_link_type1(g: &PresentationGraph, a: &str, opts: &BallOptions) -> Result<LinkGraph> {
    let ai = g.index_of(a).ok_or_else(|| Error::Validation(format!("unknown generator {a:?}")))?;
    let neighbors: Vec<String> = g.neighbors(ai).into_iter().map(|b| g.name(b).to_string()).collect();
    let w = opts.axis_window as i64;
    let center = LinkCenter::Type1 { generator: a.to_string(), neighbors: neighbors.clone() };
    grow(center, false, opts, AngularValue::HALF_PI, LinkVertex::Power(0), |v| match v {
        LinkVertex::Power(_) => neighbors.iter().map(|b| LinkVertex::Parabolic(b.clone())).collect(),
        LinkVertex::Parabolic(_) => (-w..=w).map(LinkVertex::Power).collect(),
        _ => Vec::new(),
    })
}

impl LinkGraph {
    pub fn m(&self) -> Option<u32> {
        match self.center {
            LinkCenter::Type2 { m } => Some(m),
            LinkCenter::Type1 { .. } => None,
        }
    }

    pub fn index_of(&self, v: &LinkVertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn label(&self, i: usize) -> String {
        self.vertices[i].label(&self.center)
    }

    /// The vertex of this ball representing a group-theoretic link vertex.
    fn vertex_for(&self, word: &Word, gen: Option<usize>) -> Result<LinkVertex> {
        let m = self.m().ok_or_else(|| Error::Precondition("link points live in type-2 links".into()))?;
        let e = garside::element(word, m)?;
        Ok(match (self.quotiented, gen, &e) {
            (false, None, _) => LinkVertex::Element(e),
            (false, Some(x), _) => coset_vertex(&e, x),
            (true, None, DihedralElement::Garside(g)) => LinkVertex::ElementOrbit(g.atoms().to_vec()),
            (true, Some(x), DihedralElement::Garside(g)) => LinkVertex::AxisOrbit(axis_key(g, x)),
            (true, _, DihedralElement::Abelian(_)) => unreachable!("quotient balls need m >= 3"),
        })
    }

    fn locate(&self, p: &LinkPoint) -> Result<Vec<(usize, AngularValue)>> {
        let m = self.m().ok_or_else(|| Error::Precondition("link points live in type-2 links".into()))?;
        p.check(m)?;
        let find = |v: LinkVertex| -> Result<usize> {
            self.index_of(&v).ok_or_else(|| Error::PointOutsideBall(self.vertices_label(&v)))
        };
        Ok(match p {
            LinkPoint::Element { word } => vec![(find(self.vertex_for(word, None)?)?, AngularValue::ZERO)],
            LinkPoint::Coset { word, gen } => vec![(find(self.vertex_for(word, Some(*gen))?)?, AngularValue::ZERO)],
            LinkPoint::Edge { word, gen, offset } => vec![
                (find(self.vertex_for(word, None)?)?, *offset),
                (find(self.vertex_for(word, Some(*gen))?)?, edge_length(m) - *offset),
            ],
        })
    }

    fn vertices_label(&self, v: &LinkVertex) -> String {
        v.label(&self.center)
    }

    /// Dijkstra from weighted sources.
    fn shortest(&self, sources: &[(usize, AngularValue)]) -> Vec<Option<AngularValue>> {
        let mut dist: Vec<Option<AngularValue>> = vec![None; self.vertices.len()];
        let mut heap = BinaryHeap::new();
        for &(v, c) in sources {
            if dist[v].is_none_or(|d| c < d) {
                dist[v] = Some(c);
                heap.push(Reverse((c, v)));
            }
        }
        let mut len_of: HashMap<(usize, usize), AngularValue> = HashMap::new();
        for e in &self.edges {
            len_of.insert((e.a, e.b), e.len);
        }
        while let Some(Reverse((d, v))) = heap.pop() {
            if dist[v] != Some(d) {
                continue;
            }
            for &w in &self.adj[v] {
                let nd = d + len_of[&(v.min(w), v.max(w))];
                if dist[w].is_none_or(|x| nd < x) {
                    dist[w] = Some(nd);
                    heap.push(Reverse((nd, w)));
                }
            }
        }
        dist
    }

    /// Shortest path between two points inside the ball. Values at or
    /// beyond the radius are reported as `AtLeast(radius)`.
    pub fn distance(&self, p: &LinkPoint, q: &LinkPoint) -> Result<Distance> {
        let (a, b) = (self.locate(p)?, self.locate(q)?);
        let m = self.m().expect("checked in locate");
        let dist = self.shortest(&a);
        let mut best: Option<AngularValue> = None;
        if a.len() == 2 && b.len() == 2 && a[0].0 == b[0].0 && a[1].0 == b[1].0 {
            let (x, y) = (a[0].1, b[0].1);
            best = Some(if x >= y { x - y } else { y - x });
        }
        let _ = m;
        for &(v, c) in &b {
            if let Some(d) = dist[v] {
                let t = d + c;
                if best.is_none_or(|x| t < x) {
                    best = Some(t);
                }
            }
        }
        Ok(self.classify(best))
    }

    fn classify(&self, d: Option<AngularValue>) -> Distance {
        match d {
            Some(d) if d < self.radius => Distance::Exact(d),
            _ => Distance::AtLeast(self.radius),
        }
    }

    pub fn vertex_distance(&self, i: usize, j: usize) -> Distance {
        self.classify(self.shortest(&[(i, AngularValue::ZERO)])[j])
    }

    /// Largest distance between two vertices of the ball graph; `None` when
    /// the graph is disconnected or has a single vertex.
    pub fn diameter(&self) -> Option<AngularValue> {
        if self.vertices.len() < 2 {
            return None;
        }
        let mut best = AngularValue::ZERO;
        for i in 0..self.vertices.len() {
            for d in self.shortest(&[(i, AngularValue::ZERO)]) {
                best = best.max(d?);
            }
        }
        Some(best)
    }

    /// Pairs of type-1 vertices joined through a type-0 vertex of degree 2,
    /// with the total length of the two edges: the edges of the coset graph.
    pub fn coset_graph_edges(&self) -> Vec<(usize, usize, AngularValue)> {
        let mut len_of: HashMap<(usize, usize), AngularValue> = HashMap::new();
        for e in &self.edges {
            len_of.insert((e.a, e.b), e.len);
        }
        let mut out = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if v.kind() == CosetKind::Coset0 && self.adj[i].len() == 2 {
                let (a, b) = (self.adj[i][0], self.adj[i][1]);
                let l = len_of[&(i.min(a), i.max(a))] + len_of[&(i.min(b), i.max(b))];
                out.push((a.min(b), a.max(b), l));
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vertices: Vec<serde_json::Value> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| {
                serde_json::json!({
                    "id": i,
                    "kind": v.kind(),
                    "label": self.label(i),
                    "depth": self.depth[i],
                })
            })
            .collect();
        serde_json::json!({
            "center": self.center,
            "quotiented": self.quotiented,
            "radius": self.radius,
            "axis_window": self.axis_window,
            "vertices": vertices,
            "edges": self.edges,
        })
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph link {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let shape = match v.kind() {
                CosetKind::Coset0 => "point",
                CosetKind::Coset1 { .. } => "ellipse",
                CosetKind::Type2 => "box",
            };
            s.push_str(&format!("  {i} [label=\"{}\", shape={shape}];\n", self.label(i)));
        }
        for e in &self.edges {
            s.push_str(&format!("  {} -- {} [len=\"{}\"];\n", e.a, e.b, e.len));
        }
        s.push_str("}\n");
        s
    }
}

/// A ball of `Lk(v_st)/⟨Δ⟩` with the position of `T̄`.
#[derive(Debug, Clone)]
pub struct QuotientLink {
    pub graph: LinkGraph,
    /// Image of each vertex of the source ball (identity when built directly).
    pub map: Vec<usize>,
    /// `T̄` for `s` and `t`.
    pub tbar: BTreeMap<String, AxisKey>,
}

impl QuotientLink {
    pub fn tbar_vertex(&self, gen: usize) -> Option<usize> {
        self.graph.index_of(&LinkVertex::AxisOrbit(tbar(gen)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = self.graph.to_json();
        v["tbar"] = serde_json::json!(self
            .tbar
            .iter()
            .map(|(k, a)| (k.clone(), serde_json::json!({ "label": a.to_string(), "vertex": self.graph.index_of(&LinkVertex::AxisOrbit(a.clone())) })))
            .collect::<BTreeMap<_, _>>());
        v
    }
}

/// Image of a type-2 link ball under the right `⟨Δ⟩`-action.
pub fn quotient_by_delta(l: &LinkGraph) -> Result<QuotientLink> {
    let m = match l.center {
        LinkCenter::Type2 { m } if m >= 3 && !l.quotiented => m,
        _ => return Err(Error::Precondition("quotient needs an unquotiented type-2 link with m >= 3".into())),
    };
    let image = |v: &LinkVertex| -> LinkVertex {
        match v {
            LinkVertex::Element(DihedralElement::Garside(g)) => LinkVertex::ElementOrbit(g.atoms().to_vec()),
            LinkVertex::Coset { rep: DihedralElement::Garside(u), gen } => LinkVertex::AxisOrbit(axis_key(u, *gen)),
            other => other.clone(),
        }
    };
    let mut g = LinkGraph {
        center: LinkCenter::Type2 { m },
        quotiented: true,
        radius: l.radius,
        axis_window: l.axis_window,
        vertices: Vec::new(),
        edges: Vec::new(),
        depth: Vec::new(),
        index: HashMap::new(),
        adj: Vec::new(),
    };
    let mut map = Vec::with_capacity(l.vertices.len());
    for (i, v) in l.vertices.iter().enumerate() {
        let w = image(v);
        let j = match g.index.get(&w) {
            Some(&j) => {
                g.depth[j] = g.depth[j].min(l.depth[i]);
                j
            }
            None => {
                g.index.insert(w.clone(), g.vertices.len());
                g.vertices.push(w);
                g.depth.push(l.depth[i]);
                g.adj.push(Vec::new());
                g.vertices.len() - 1
            }
        };
        map.push(j);
    }
    let mut seen = BTreeSet::new();
    for e in &l.edges {
        let (a, b) = (map[e.a].min(map[e.b]), map[e.a].max(map[e.b]));
        if a != b && seen.insert((a, b)) {
            g.edges.push(LinkEdge { a, b, len: e.len });
            g.adj[a].push(b);
            g.adj[b].push(a);
        }
    }
    Ok(QuotientLink { graph: g, map, tbar: standard_tbar() })
}

/// Vertices of an unquotiented type-2 ball whose coset is preserved by left
/// multiplication by `w`.
pub fn fixed_link_vertices(l: &LinkGraph, w: &Word) -> Result<BTreeSet<usize>> {
    let m = match l.center {
        LinkCenter::Type2 { m } if !l.quotiented => m,
        _ => return Err(Error::Precondition("fixed vertices are computed in unquotiented type-2 links".into())),
    };
    let we = garside::element(w, m)?;
    let mut out = BTreeSet::new();
    for (i, v) in l.vertices.iter().enumerate() {
        let fixed = match (v, &we) {
            (LinkVertex::Element(_), _) => we.is_identity(),
            (LinkVertex::Coset { gen, .. }, DihedralElement::Abelian(a)) => {
                if *gen == S {
                    a.q == 0
                } else {
                    a.p == 0
                }
            }
            (LinkVertex::Coset { rep: DihedralElement::Garside(u), gen }, DihedralElement::Garside(x)) => {
                u.invert().multiply(x)?.multiply(u)?.cyclic_exponent(*gen).is_some()
            }
            _ => false,
        };
        if fixed {
            out.insert(i);
        }
    }
    Ok(out)
}
