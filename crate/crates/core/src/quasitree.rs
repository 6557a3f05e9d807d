//! The quasi-tree `𝒯 = Cay(A_st, M)/⟨Δ⟩` and the augmented graphs `𝒢`, `𝒦`.
//!
//! A vertex of `𝒯` is the atom sequence of a normal form with the `Δ`
//! exponent dropped. `𝒯` is a tree of `m`-cliques ("blocks"): the block
//! `h·{e, x, xy, …}` has the `m` vertices `h·p_i` where `p_i` is the
//! alternating prefix of length `i` starting with `x`, and `h·p_{m-1}·y = hΔ`
//! closes it up. Every vertex `a₁⋯a_k` lies in exactly two blocks: its parent
//! block `(a₁⋯a_{k-1}, first letter of a_k)` and its child block
//! `(a₁⋯a_k, last letter of a_k)`. The root `e` has two child blocks. The
//! number of atoms is therefore the depth in the block tree.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::garside::{normal_form, tau_letter, Atom, GarsideNF};
use crate::linkgeom::{axis_key, AxisKey};
use crate::word::{Word, S, T};

/// A vertex of `𝒯`: a left-weighted atom sequence.
pub type TVertex = Vec<Atom>;

/// `v` viewed as a group element with zero `Δ` exponent.
pub fn element_of(v: &[Atom], m: u32) -> GarsideNF {
    GarsideNF::from_parts(v.to_vec(), 0, m).expect("vertex is left-weighted")
}

pub fn display_vertex(v: &[Atom]) -> String {
    if v.is_empty() {
        "e".to_string()
    } else {
        v.iter().map(|a| a.to_string_dihedral()).collect::<Vec<_>>().join(".")
    }
}

/// The clique `base·{p_0, …, p_{m-1}}` with `p_i` alternating from `letter`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Block {
    pub base: TVertex,
    pub letter: usize,
}

impl Block {
    pub fn vertices(&self, m: u32) -> Vec<TVertex> {
        let mut out = vec![self.base.clone()];
        for i in 1..m {
            let mut v = self.base.clone();
            v.push(Atom::new(self.letter, i));
            out.push(v);
        }
        out
    }

    /// Letter of the cycle edge from `p_i` to `p_{i+1}` (indices mod `m`).
    pub fn edge_letter(&self, i: u32) -> usize {
        if i.is_multiple_of(2) {
            self.letter
        } else {
            1 - self.letter
        }
    }
}

pub fn parent_block(v: &[Atom]) -> Option<Block> {
    let (last, prefix) = v.split_last()?;
    Some(Block { base: prefix.to_vec(), letter: last.start })
}

pub fn blocks_of(v: &[Atom]) -> Vec<Block> {
    match v.last() {
        None => vec![Block { base: Vec::new(), letter: S }, Block { base: Vec::new(), letter: T }],
        Some(last) => vec![
            parent_block(v).expect("nonempty"),
            Block { base: v.to_vec(), letter: last.last() },
        ],
    }
}

/// A node of the block-cut tree of `𝒯`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TreeNode {
    Vertex(TVertex),
    Block(Block),
}

fn root_path(v: &[Atom]) -> Vec<TreeNode> {
    let mut out = vec![TreeNode::Vertex(Vec::new())];
    for k in 0..v.len() {
        out.push(TreeNode::Block(Block { base: v[..k].to_vec(), letter: v[k].start }));
        out.push(TreeNode::Vertex(v[..=k].to_vec()));
    }
    out
}

/// The path between two vertices in the block-cut tree, endpoints included.
pub fn tree_path(u: &[Atom], v: &[Atom]) -> Vec<TreeNode> {
    let ru = root_path(u);
    let rv = root_path(v);
    let common = ru.iter().zip(&rv).take_while(|(a, b)| a == b).count();
    let mut path: Vec<TreeNode> = ru[common - 1..].iter().rev().cloned().collect();
    path.extend_from_slice(&rv[common..]);
    path
}

/// All left-weighted atom sequences with at most `depth` atoms, shortest first.
pub fn left_weighted_sequences(m: u32, depth: usize) -> Vec<TVertex> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<TVertex> = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for v in &layer {
            for a in Atom::all(m) {
                if v.last().is_none_or(|p| p.last() == a.start) {
                    let mut w = v.clone();
                    w.push(a);
                    next.push(w);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn check_budget(what: &str, count: usize, budget: usize) -> Result<()> {
    if count > budget {
        Err(Error::ResourceLimit { what: what.to_string(), budget })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct QuasiTreeBall {
    pub m: u32,
    pub depth: usize,
    pub vertices: Vec<TVertex>,
    /// `(i, j, atom)` with `i < j` and `vertex j = vertex i · atom` modulo `Δ`.
    pub edges: Vec<(usize, usize, Atom)>,
    /// Blocks lying entirely in the ball, as vertex indices.
    pub simplices: Vec<Vec<usize>>,
    #[serde(skip)]
    index: HashMap<TVertex, usize>,
}

pub fn build_quasitree(m: u32, depth: usize, budget: usize) -> Result<QuasiTreeBall> {
    if m < 3 {
        return Err(Error::Precondition("the quasi-tree needs m >= 3".into()));
    }
    let count: f64 = 1.0 + (1..=depth).map(|k| 2.0 * ((m - 1) as f64).powi(k as i32)).sum::<f64>();
    check_budget("quasi-tree vertices", count.min(usize::MAX as f64) as usize, budget)?;
    let vertices = left_weighted_sequences(m, depth);
    let index: HashMap<TVertex, usize> = vertices.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let mut edges = BTreeMap::new();
    for (i, v) in vertices.iter().enumerate() {
        let g = element_of(v, m);
        for a in Atom::all(m) {
            let w = g.times_word(&atom_word(a)).atoms().to_vec();
            if let Some(&j) = index.get(&w) {
                if i < j {
                    edges.entry((i, j)).or_insert(a);
                }
            }
        }
    }
    let mut simplices = Vec::new();
    let mut seen = BTreeSet::new();
    for v in &vertices {
        for b in blocks_of(v) {
            if !seen.insert(b.clone()) {
                continue;
            }
            let ids: Option<Vec<usize>> = b.vertices(m).iter().map(|u| index.get(u).copied()).collect();
            if let Some(mut ids) = ids {
                ids.sort_unstable();
                simplices.push(ids);
            }
        }
    }
    simplices.sort();
    Ok(QuasiTreeBall {
        m,
        depth,
        vertices,
        edges: edges.into_iter().map(|((i, j), a)| (i, j, a)).collect(),
        simplices,
        index,
    })
}

fn atom_word(a: Atom) -> Word {
    Word::from_letters(a.letters().map(|g| crate::word::Letter::new(g, false)).collect())
}

impl QuasiTreeBall {
    pub fn index_of(&self, v: &[Atom]) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// Adds an edge; used to build defective fixtures.
    pub fn add_edge(&mut self, i: usize, j: usize, label: Atom) {
        let (i, j) = (i.min(j), i.max(j));
        if !self.edges.iter().any(|&(a, b, _)| (a, b) == (i, j)) {
            self.edges.push((i, j, label));
        }
    }

    fn adjacency(&self) -> Vec<BTreeSet<usize>> {
        let mut adj = vec![BTreeSet::new(); self.vertices.len()];
        for &(i, j, _) in &self.edges {
            adj[i].insert(j);
            adj[j].insert(i);
        }
        adj
    }

    /// The maximal cliques of the ball graph (Bron–Kerbosch with pivoting).
    pub fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut out = Vec::new();
        let all: BTreeSet<usize> = (0..self.vertices.len()).collect();
        bron_kerbosch(&adj, &mut Vec::new(), all, BTreeSet::new(), &mut out);
        for c in &mut out {
            c.sort_unstable();
        }
        out.sort();
        out
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph quasitree {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            s.push_str(&format!("  {i} [label=\"{}\"];\n", display_vertex(v)));
        }
        for &(i, j, a) in &self.edges {
            s.push_str(&format!("  {i} -- {j} [label=\"{}\"];\n", a.to_string_dihedral()));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "m": self.m,
            "depth": self.depth,
            "vertices": self.vertices.iter().map(|v| display_vertex(v)).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|&(i, j, a)| serde_json::json!([i, j, a.to_string_dihedral()])).collect::<Vec<_>>(),
            "simplices": self.simplices,
        })
    }
}

fn bron_kerbosch(
    adj: &[BTreeSet<usize>],
    r: &mut Vec<usize>,
    mut p: BTreeSet<usize>,
    mut x: BTreeSet<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(r.clone());
        }
        return;
    }
    let pivot = *p.iter().chain(x.iter()).max_by_key(|&&u| adj[u].intersection(&p).count()).expect("nonempty");
    let candidates: Vec<usize> = p.difference(&adj[pivot]).copied().collect();
    for v in candidates {
        r.push(v);
        let np = p.intersection(&adj[v]).copied().collect();
        let nx = x.intersection(&adj[v]).copied().collect();
        bron_kerbosch(adj, r, np, nx, out);
        r.pop();
        p.remove(&v);
        x.insert(v);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeOfSimplicesReport {
    pub m: u32,
    pub depth: usize,
    pub vertices: usize,
    pub edges: usize,
    pub maximal_cliques: usize,
    pub clique_size: usize,
}

/// Checks that the ball is a tree of `m`-cliques: maximal cliques have `m`
/// vertices, meet in at most one vertex, and the vertex–clique incidence
/// graph has no cycle.
pub fn check_tree_of_simplices(q: &QuasiTreeBall) -> Result<TreeOfSimplicesReport> {
    if q.depth < 2 {
        return Err(Error::Precondition("tree-of-simplices check needs depth >= 2".into()));
    }
    let cliques = q.maximal_cliques();
    let name = |ids: &[usize]| -> String {
        ids.iter().map(|&i| display_vertex(&q.vertices[i])).collect::<Vec<_>>().join(", ")
    };
    for c in &cliques {
        if c.len() != q.m as usize {
            return Err(Error::StructureViolation(format!(
                "maximal clique {{{}}} has {} vertices, expected {}",
                name(c),
                c.len(),
                q.m
            )));
        }
    }
    let mut member: Vec<Vec<usize>> = vec![Vec::new(); q.vertices.len()];
    for (ci, c) in cliques.iter().enumerate() {
        for &v in c {
            member[v].push(ci);
        }
    }
    for (ci, c) in cliques.iter().enumerate() {
        for (cj, d) in cliques.iter().enumerate().skip(ci + 1) {
            let shared: Vec<usize> = c.iter().filter(|v| d.contains(v)).copied().collect();
            if shared.len() > 1 {
                return Err(Error::StructureViolation(format!(
                    "cliques #{ci} and #{cj} share {{{}}}",
                    name(&shared)
                )));
            }
        }
    }
    // Union-find over vertices and cliques; an incidence joining two nodes
    // that are already connected closes a cycle.
    let n = q.vertices.len();
    let mut uf = UnionFind::new(n + cliques.len());
    for (ci, c) in cliques.iter().enumerate() {
        for &v in c {
            if !uf.union(v, n + ci) {
                return Err(Error::StructureViolation(format!(
                    "clique {{{}}} closes a cycle of cliques at {}",
                    name(c),
                    display_vertex(&q.vertices[v])
                )));
            }
        }
    }
    Ok(TreeOfSimplicesReport {
        m: q.m,
        depth: q.depth,
        vertices: n,
        edges: q.edges.len(),
        maximal_cliques: cliques.len(),
        clique_size: q.m as usize,
    })
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// A vertex of an augmented graph: the point `element` on its axis in direction `gen`.
///
/// In `𝒦` the element has zero `Δ` exponent, and `gen` is read relative to it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AugVertex {
    pub element: GarsideNF,
    pub gen: usize,
}

impl AugVertex {
    /// The vertex of `𝒦` over the point `g` of the axis `g⟨x⟩`.
    pub fn quotient(g: &GarsideNF, gen: usize) -> Self {
        AugVertex {
            element: g.without_delta(),
            gen: tau_letter(g.modulus(), gen, g.delta_exp()),
        }
    }

    /// Left translation by `h`.
    pub fn translate(&self, h: &GarsideNF, quotiented: bool) -> Self {
        let g = h.multiply(&self.element).expect("same modulus");
        if quotiented {
            AugVertex::quotient(&g, self.gen)
        } else {
            AugVertex { element: g, gen: self.gen }
        }
    }

    pub fn label(&self) -> String {
        let g = if self.element.delta_exp() == 0 {
            display_vertex(self.element.atoms())
        } else {
            self.element.to_string()
        };
        format!("{g}@{}", crate::word::DIHEDRAL_ALPHABET[self.gen])
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AugmentedGraph {
    pub m: u32,
    pub depth: usize,
    pub quotiented: bool,
    pub vertices: Vec<AugVertex>,
    /// Type A edges, along axes.
    pub a_edges: Vec<(usize, usize)>,
    /// Type I edges, joining the two axes through a point.
    pub i_edges: Vec<(usize, usize)>,
    #[serde(skip)]
    index: HashMap<AugVertex, usize>,
}

/// Builds `𝒦` over the `𝒯`-ball of the given depth (`quotiented`), or `𝒢`
/// over the ball of radius `depth` in `Cay(A_st, {s, t})`.
pub fn build_augmented(m: u32, depth: usize, quotiented: bool, budget: usize) -> Result<AugmentedGraph> {
    if m < 3 {
        return Err(Error::Precondition("augmented graphs need m >= 3".into()));
    }
    let points: Vec<GarsideNF> = if quotiented {
        build_quasitree(m, depth, budget / 2)?.vertices.iter().map(|v| element_of(v, m)).collect()
    } else {
        cayley_ball(m, depth, budget / 2)?
    };
    let mut g = AugmentedGraph {
        m,
        depth,
        quotiented,
        vertices: Vec::new(),
        a_edges: Vec::new(),
        i_edges: Vec::new(),
        index: HashMap::new(),
    };
    for p in &points {
        for gen in [S, T] {
            let v = AugVertex { element: p.clone(), gen };
            g.index.insert(v.clone(), g.vertices.len());
            g.vertices.push(v);
        }
    }
    for (i, v) in g.vertices.iter().enumerate() {
        if v.gen == S {
            g.i_edges.push((i, i + 1));
        }
        let next = v.element.times_gen_power(v.gen, 1);
        let w = if quotiented {
            AugVertex::quotient(&next, v.gen)
        } else {
            AugVertex { element: next, gen: v.gen }
        };
        if let Some(&j) = g.index.get(&w) {
            g.a_edges.push((i.min(j), i.max(j)));
        }
    }
    g.a_edges.sort_unstable();
    g.a_edges.dedup();
    Ok(g)
}

/// Elements of word length at most `radius` over `s^{±1}, t^{±1}`, in BFS order.
pub fn cayley_ball(m: u32, radius: usize, budget: usize) -> Result<Vec<GarsideNF>> {
    let mut seen: HashMap<GarsideNF, usize> = HashMap::new();
    let mut order = vec![GarsideNF::identity(m)];
    seen.insert(order[0].clone(), 0);
    let mut queue = VecDeque::from([(order[0].clone(), 0usize)]);
    while let Some((g, d)) = queue.pop_front() {
        if d == radius {
            continue;
        }
        for gen in [S, T] {
            for k in [1, -1] {
                let h = g.times_gen_power(gen, k);
                if !seen.contains_key(&h) {
                    seen.insert(h.clone(), d + 1);
                    order.push(h.clone());
                    check_budget("Cayley ball elements", order.len(), budget)?;
                    queue.push_back((h, d + 1));
                }
            }
        }
    }
    Ok(order)
}

/// A graph obtained by collapsing one type of edge; `map[v]` is the image of vertex `v`.
#[derive(Debug, Clone, Serialize)]
pub struct Collapsed<K> {
    pub nodes: Vec<K>,
    pub map: Vec<usize>,
    pub edges: BTreeSet<(usize, usize)>,
}

/// Image key of an axis: the coset `rep·⟨gen⟩` with `rep` canonical.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CosetImage {
    pub rep: GarsideNF,
    pub gen: usize,
}

impl AugmentedGraph {
    pub fn index_of(&self, v: &AugVertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    fn require(&self, v: &AugVertex) -> Result<usize> {
        self.index_of(v).ok_or_else(|| Error::PointOutsideBall(v.label()))
    }

    /// Collapses the type I edges: the target is `𝒯` (or `Cay(A_st, S)`).
    pub fn pr_i(&self) -> Collapsed<GarsideNF> {
        let mut nodes = Vec::new();
        let mut ids: HashMap<GarsideNF, usize> = HashMap::new();
        let map: Vec<usize> = self
            .vertices
            .iter()
            .map(|v| {
                *ids.entry(v.element.clone()).or_insert_with(|| {
                    nodes.push(v.element.clone());
                    nodes.len() - 1
                })
            })
            .collect();
        let edges = self.a_edges.iter().map(|&(a, b)| (map[a].min(map[b]), map[a].max(map[b]))).collect();
        Collapsed { nodes, map, edges }
    }

    /// Collapses the type A edges: the target is the coset graph of the link
    /// (or its `Δ`-quotient). Nodes are keyed by canonical coset representatives.
    pub fn pr_a(&self) -> Collapsed<CosetImage> {
        let mut nodes = Vec::new();
        let mut ids: HashMap<CosetImage, usize> = HashMap::new();
        let map: Vec<usize> = self
            .vertices
            .iter()
            .map(|v| {
                let key = if self.quotiented {
                    let AxisKey { base, gen } = axis_key(&v.element, v.gen);
                    CosetImage { rep: element_of(&base, self.m), gen }
                } else {
                    let c = crate::linkgeom::coset_key(&v.element, v.gen);
                    CosetImage { rep: c.rep, gen: c.gen }
                };
                *ids.entry(key.clone()).or_insert_with(|| {
                    nodes.push(key);
                    nodes.len() - 1
                })
            })
            .collect();
        let edges = self.i_edges.iter().map(|&(a, b)| (map[a].min(map[b]), map[a].max(map[b]))).collect();
        Collapsed { nodes, map, edges }
    }

    /// Connected components after deleting the given vertices.
    fn components_without(&self, removed: &BTreeSet<usize>) -> Vec<usize> {
        let mut uf = UnionFind::new(self.vertices.len());
        for &(a, b) in self.a_edges.iter().chain(&self.i_edges) {
            if !removed.contains(&a) && !removed.contains(&b) {
                uf.union(a, b);
            }
        }
        (0..self.vertices.len()).map(|v| uf.find(v)).collect()
    }

    /// The closed fiber `W_v = pr_I⁻¹(v)` as vertex indices.
    pub fn fiber(&self, v: &GarsideNF) -> Vec<usize> {
        [S, T]
            .iter()
            .filter_map(|&gen| self.index_of(&AugVertex { element: v.clone(), gen }))
            .collect()
    }

    /// Number of edges `W_{x^i}` separating `x` from `y` (quotiented graphs only).
    pub fn separating_count(&self, x: &AugVertex, y: &AugVertex, gen: usize) -> Result<usize> {
        if !self.quotiented {
            return Err(Error::Precondition("separating counts are taken in the quotiented graph".into()));
        }
        self.require(x)?;
        self.require(y)?;
        Ok(separating_count_exact(self.m, x, y, gen))
    }

    /// Same count by brute force: delete each closed `W_{x^i}` in the ball and
    /// test whether `x` and `y` fall into different components.
    pub fn separating_count_by_removal(&self, x: &AugVertex, y: &AugVertex, gen: usize) -> Result<usize> {
        if !self.quotiented {
            return Err(Error::Precondition("separating counts are taken in the quotiented graph".into()));
        }
        let (ix, iy) = (self.require(x)?, self.require(y)?);
        let tbar = axis_key(&GarsideNF::identity(self.m), gen);
        let mut count = 0;
        let mut seen = BTreeSet::new();
        for v in &self.vertices {
            if !seen.insert(v.element.clone()) || !on_standard_axis(&v.element, &tbar) {
                continue;
            }
            let fiber: BTreeSet<usize> = self.fiber(&v.element).into_iter().collect();
            if fiber.contains(&ix) || fiber.contains(&iy) {
                continue;
            }
            let comp = self.components_without(&fiber);
            count += (comp[ix] != comp[iy]) as usize;
        }
        Ok(count)
    }

    /// For every `𝒯`-vertex of depth below the ball depth: its fiber is one
    /// type I edge and deleting it disconnects the neighbors of the fiber.
    /// Returns the vertices where this fails.
    pub fn separating_edge_violations(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let mut seen = BTreeSet::new();
        for v in &self.vertices {
            let p = &v.element;
            if !seen.insert(p.clone()) || p.atoms().len() >= self.depth {
                continue;
            }
            let fiber = self.fiber(p);
            let fiber_set: BTreeSet<usize> = fiber.iter().copied().collect();
            let i_count = self.i_edges.iter().filter(|(a, b)| fiber_set.contains(a) && fiber_set.contains(b)).count();
            if fiber.len() != 2 || i_count != 1 {
                bad.push(format!("{}: fiber is not a single edge", display_vertex(p.atoms())));
                continue;
            }
            let comp = self.components_without(&fiber_set);
            let mut touching = BTreeSet::new();
            for &(a, b) in self.a_edges.iter() {
                if fiber_set.contains(&a) && !fiber_set.contains(&b) {
                    touching.insert(comp[b]);
                } else if fiber_set.contains(&b) && !fiber_set.contains(&a) {
                    touching.insert(comp[a]);
                }
            }
            if touching.len() < 2 {
                bad.push(format!("{}: removing the fiber does not disconnect", display_vertex(p.atoms())));
            }
        }
        bad
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph augmented {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            s.push_str(&format!("  {i} [label=\"{}\"];\n", v.label()));
        }
        for &(a, b) in &self.a_edges {
            s.push_str(&format!("  {a} -- {b} [type=\"A\"];\n"));
        }
        for &(a, b) in &self.i_edges {
            s.push_str(&format!("  {a} -- {b} [type=\"I\", style=dashed];\n"));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "m": self.m,
            "depth": self.depth,
            "quotiented": self.quotiented,
            "vertices": self.vertices.iter().map(AugVertex::label).collect::<Vec<_>>(),
            "a_edges": self.a_edges,
            "i_edges": self.i_edges,
        })
    }
}

/// Whether the `𝒯`-vertex `v` lies on the standard axis with key `tbar`.
pub fn on_standard_axis(v: &GarsideNF, tbar: &AxisKey) -> bool {
    axis_key(v, S) == *tbar || axis_key(v, T) == *tbar
}

/// Number of vertices `v` of the standard axis `⟨gen⟩` strictly inside the
/// block-tree path between `pr_I(x)` and `pr_I(y)`. Each such `v` is a cut
/// vertex of `𝒯`, so the closed edge `W_v` separates `x` from `y` in `𝒦`;
/// vertices off the path do not.
pub fn separating_count_exact(m: u32, x: &AugVertex, y: &AugVertex, gen: usize) -> usize {
    let tbar = axis_key(&GarsideNF::identity(m), gen);
    let path = tree_path(x.element.atoms(), y.element.atoms());
    if path.len() <= 2 {
        return 0;
    }
    path[1..path.len() - 1]
        .iter()
        .filter(|node| match node {
            TreeNode::Vertex(v) => on_standard_axis(&element_of(v, m), &tbar),
            TreeNode::Block(_) => false,
        })
        .count()
}

/// The counting function `f(n)` for `a = x^d`: separating edges between the
/// base vertex (the point `e` on the other generator's axis) and its
/// `a^n`-translate.
pub fn f_count(m: u32, gen: usize, d: i64, n: u64) -> usize {
    let base = AugVertex { element: GarsideNF::identity(m), gen: 1 - gen };
    let a_n = normal_form(&Word::gen_power(gen, d * n as i64), m);
    separating_count_exact(m, &base, &base.translate(&a_n, true), gen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Letter;

    const BUDGET: usize = 1 << 20;

    fn v(m: u32, text: &str) -> TVertex {
        normal_form(&Word::parse_dihedral(text).unwrap(), m).atoms().to_vec()
    }

    #[test]
    fn ball_sizes_match_left_weighted_count() {
        for m in 3..6u32 {
            for depth in 0..4usize {
                let q = build_quasitree(m, depth, BUDGET).unwrap();
                let expected = 1 + (1..=depth).map(|k| 2 * (m as usize - 1).pow(k as u32)).sum::<usize>();
                assert_eq!(q.vertices.len(), expected);
            }
        }
        assert_eq!(build_quasitree(3, 0, BUDGET).unwrap().vertices, vec![Vec::<Atom>::new()]);
        assert!(matches!(build_quasitree(3, 10, 100), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn depth_two_simplices_at_base() {
        let q = build_quasitree(3, 2, BUDGET).unwrap();
        let e = q.index_of(&[]).unwrap();
        let mut at_e: Vec<Vec<String>> = q
            .simplices
            .iter()
            .filter(|c| c.contains(&e))
            .map(|c| c.iter().map(|&i| display_vertex(&q.vertices[i])).collect())
            .collect();
        for c in &mut at_e {
            c.sort();
        }
        at_e.sort();
        assert_eq!(at_e, vec![vec!["e", "s", "st"], vec!["e", "t", "ts"]]);
        assert_eq!(q.maximal_cliques(), q.simplices);
    }

    #[test]
    fn tree_of_simplices_holds() {
        for m in 3..6 {
            for depth in 2..4 {
                let q = build_quasitree(m, depth, BUDGET).unwrap();
                let r = check_tree_of_simplices(&q).unwrap();
                assert_eq!(r.clique_size, m as usize);
            }
        }
    }

    #[test]
    fn injected_edge_is_caught() {
        let mut q = build_quasitree(3, 3, BUDGET).unwrap();
        let a = q.index_of(&v(3, "s s")).unwrap();
        let b = q.index_of(&v(3, "t t")).unwrap();
        q.add_edge(a, b, Atom::new(S, 1));
        assert!(matches!(check_tree_of_simplices(&q), Err(Error::StructureViolation(_))));
    }

    #[test]
    fn blocks_are_cliques_of_the_cayley_graph() {
        for m in 3..7 {
            for b in blocks_of(&v(m, "s t s^-1")) {
                let vs = b.vertices(m);
                for (i, x) in vs.iter().enumerate() {
                    for y in &vs[i + 1..] {
                        let diff = element_of(x, m).invert().multiply(&element_of(y, m)).unwrap();
                        // some Δ-twist of the difference is an atom
                        assert_eq!(diff.atoms().len(), 1, "{x:?} {y:?}");
                    }
                    let next = element_of(x, m).times_gen_power(b.edge_letter(i as u32), 1);
                    assert_eq!(next.atoms(), vs[(i + 1) % m as usize].as_slice());
                }
            }
        }
    }

    #[test]
    fn tree_paths() {
        let m = 3;
        let p = tree_path(&[], &v(m, "s s"));
        assert_eq!(p.len(), 5);
        assert_eq!(p[2], TreeNode::Vertex(v(m, "s")));
        let q = tree_path(&v(m, "s t"), &v(m, "s"));
        assert_eq!(q.len(), 3);
        assert_eq!(tree_path(&v(m, "t"), &v(m, "t")).len(), 1);
    }

    #[test]
    fn augmented_fibers_and_axes() {
        let k = build_augmented(3, 3, true, BUDGET).unwrap();
        let e = GarsideNF::identity(3);
        assert_eq!(k.fiber(&e).len(), 2);
        let (a, b) = (k.fiber(&e)[0], k.fiber(&e)[1]);
        assert!(k.i_edges.contains(&(a, b)));
        for m in 3..6 {
            let k = build_augmented(m, 3, true, BUDGET).unwrap();
            assert!(k.separating_edge_violations().is_empty());
        }
        // distinct s-axes of 𝒢 never share a vertex: each vertex has one key
        let g = build_augmented(3, 3, false, BUDGET).unwrap();
        let pa = g.pr_a();
        for (i, vtx) in g.vertices.iter().enumerate() {
            assert_eq!(pa.nodes[pa.map[i]].gen, vtx.gen);
        }
    }

    #[test]
    fn collapsing_i_edges_gives_cayley_graph() {
        let m = 4;
        let g = build_augmented(m, 3, false, BUDGET).unwrap();
        let pi = g.pr_i();
        let ball = cayley_ball(m, 3, BUDGET).unwrap();
        assert_eq!(pi.nodes.len(), ball.len());
        let mut expected = BTreeSet::new();
        for (i, x) in pi.nodes.iter().enumerate() {
            for gen in [S, T] {
                let y = x.times_word(&Word::from_letters(vec![Letter::new(gen, false)]));
                if let Some(j) = pi.nodes.iter().position(|z| *z == y) {
                    expected.insert((i.min(j), i.max(j)));
                }
            }
        }
        assert_eq!(pi.edges, expected);
    }

    #[test]
    fn pr_i_of_k_is_the_quasitree() {
        let m = 3;
        let k = build_augmented(m, 3, true, BUDGET).unwrap();
        let t = build_quasitree(m, 3, BUDGET).unwrap();
        let pi = k.pr_i();
        assert_eq!(pi.nodes.len(), t.vertices.len());
        let t_edges: BTreeSet<(TVertex, TVertex)> = t
            .edges
            .iter()
            .map(|&(i, j, _)| (t.vertices[i].clone(), t.vertices[j].clone()))
            .collect();
        let k_edges: BTreeSet<(TVertex, TVertex)> = pi
            .edges
            .iter()
            .map(|&(i, j)| {
                let (a, b) = (pi.nodes[i].atoms().to_vec(), pi.nodes[j].atoms().to_vec());
                let ia = t.index_of(&a).unwrap();
                let ib = t.index_of(&b).unwrap();
                if ia < ib { (a, b) } else { (b, a) }
            })
            .collect();
        assert_eq!(k_edges, t_edges);
    }

    #[test]
    fn quotient_commutes_with_pr_i() {
        let m = 3;
        let g = build_augmented(m, 2, false, BUDGET).unwrap();
        let k = build_augmented(m, 2, true, BUDGET).unwrap();
        for &(a, b) in &g.a_edges {
            let qa = AugVertex::quotient(&g.vertices[a].element, g.vertices[a].gen);
            let qb = AugVertex::quotient(&g.vertices[b].element, g.vertices[b].gen);
            // quotient then pr_I equals pr_I then quotient
            assert_eq!(qa.element, g.vertices[a].element.without_delta());
            if let (Some(ia), Some(ib)) = (k.index_of(&qa), k.index_of(&qb)) {
                assert!(k.a_edges.contains(&(ia.min(ib), ia.max(ib))));
            }
        }
    }

    #[test]
    fn separating_counts_agree_with_removal() {
        for m in 3..5 {
            let k = build_augmented(m, 4, true, BUDGET).unwrap();
            let base = AugVertex { element: GarsideNF::identity(m), gen: T };
            for n in 0..4 {
                let s_n = normal_form(&Word::gen_power(S, n), m);
                let y = base.translate(&s_n, true);
                let exact = k.separating_count(&base, &y, S).unwrap();
                assert_eq!(exact, k.separating_count_by_removal(&base, &y, S).unwrap(), "m={m} n={n}");
                assert_eq!(exact, (n as usize).saturating_sub(1));
            }
            assert_eq!(k.separating_count(&base, &base, S).unwrap(), 0);
        }
        let k = build_augmented(3, 2, true, BUDGET).unwrap();
        let far = AugVertex { element: normal_form(&Word::gen_power(S, 5), 3), gen: T };
        assert!(matches!(k.separating_count(&far, &far, S), Err(Error::PointOutsideBall(_))));
    }

    #[test]
    fn f_is_monotone() {
        for m in 3..6 {
            for d in [1i64, 2, -1] {
                let vals: Vec<usize> = (1..=8).map(|n| f_count(m, S, d, n)).collect();
                assert!(vals.windows(2).all(|w| w[0] <= w[1]), "m={m} d={d} {vals:?}");
                assert!(vals[7] >= 7);
            }
        }
        assert_eq!(f_count(3, S, 1, 5), 4);
        assert_eq!(f_count(3, S, 2, 3), 5);
    }
}
