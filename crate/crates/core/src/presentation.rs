//! Presentation graphs and the dimension / hyperbolicity tests on them.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A labelled simple graph. A missing edge means the label is ∞.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationGraph {
    generators: Vec<String>,
    edges: BTreeMap<(usize, usize), u32>,
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphDoc {
    generators: Vec<String>,
    #[serde(default)]
    edges: Vec<EdgeDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeDoc {
    a: String,
    b: String,
    m: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ParabolicDescriptor {
    Type0,
    Type1 { generator: usize },
    Type2 { a: usize, b: usize },
}

/// An induced triangle with its three labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Triangle {
    pub vertices: [usize; 3],
    pub labels: [u32; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HyperbolicityWitness {
    EuclideanTriangle(Triangle),
    /// `{a, b}` and `{c, d}` non-adjacent, all four cross pairs labelled 2.
    SquarePattern { a: usize, b: usize, c: usize, d: usize },
}

impl PresentationGraph {
    pub fn new(generators: Vec<String>, edges: &[(usize, usize, u32)]) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for g in &generators {
            if g.is_empty() {
                return Err(Error::Validation("empty generator name".into()));
            }
            if g.chars().any(|c| c.is_whitespace() || c == '^') {
                return Err(Error::Validation(format!("generator name {g:?} not allowed")));
            }
            if !seen.insert(g.as_str()) {
                return Err(Error::Validation(format!("duplicate generator {g:?}")));
            }
        }
        let mut map = BTreeMap::new();
        for &(a, b, m) in edges {
            if a >= generators.len() || b >= generators.len() {
                return Err(Error::Validation("edge endpoint out of range".into()));
            }
            if a == b {
                return Err(Error::Validation(format!("loop at {:?}", generators[a])));
            }
            if m < 2 {
                return Err(Error::Validation(format!(
                    "label {m} < 2 on edge {}-{}",
                    generators[a], generators[b]
                )));
            }
            if map.insert((a.min(b), a.max(b)), m).is_some() {
                return Err(Error::Validation(format!(
                    "duplicate edge {}-{}",
                    generators[a], generators[b]
                )));
            }
        }
        Ok(PresentationGraph { generators, edges: map })
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let doc: GraphDoc =
            serde_json::from_str(text).map_err(|e| Error::Syntax(e.to_string()))?;
        let index = |n: &str| {
            doc.generators
                .iter()
                .position(|g| g == n)
                .ok_or_else(|| Error::Validation(format!("edge mentions unknown generator {n:?}")))
        };
        let mut edges = Vec::with_capacity(doc.edges.len());
        for e in &doc.edges {
            if e.m < 2 {
                return Err(Error::Validation(format!("label {} < 2 on edge {}-{}", e.m, e.a, e.b)));
            }
            let m = u32::try_from(e.m).map_err(|_| Error::Validation("label too large".into()))?;
            edges.push((index(&e.a)?, index(&e.b)?, m));
        }
        PresentationGraph::new(doc.generators.clone(), &edges)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = GraphDoc {
            generators: self.generators.clone(),
            edges: self
                .edges
                .iter()
                .map(|(&(a, b), &m)| EdgeDoc {
                    a: self.generators[a].clone(),
                    b: self.generators[b].clone(),
                    m: m as i64,
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("graph serializes")
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn alphabet(&self) -> Vec<&str> {
        self.generators.iter().map(String::as_str).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn name(&self, i: usize) -> &str {
        &self.generators[i]
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    /// Edges as `(a, b, m)` with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.edges.iter().map(|(&(a, b), &m)| (a, b, m))
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn label(&self, a: usize, b: usize) -> Option<u32> {
        self.edges.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn neighbors(&self, a: usize) -> Vec<usize> {
        (0..self.generators.len()).filter(|&b| self.label(a, b).is_some()).collect()
    }

    pub fn all_labels_two(&self) -> bool {
        self.edges.values().all(|&m| m == 2)
    }

    pub fn without_edge(&self, a: usize, b: usize) -> Self {
        let mut g = self.clone();
        g.edges.remove(&(a.min(b), a.max(b)));
        g
    }

    pub fn triangles(&self) -> Vec<Triangle> {
        let n = self.generators.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let Some(p) = self.label(a, b) else { continue };
                for c in b + 1..n {
                    if let (Some(q), Some(r)) = (self.label(b, c), self.label(a, c)) {
                        out.push(Triangle { vertices: [a, b, c], labels: [p, q, r] });
                    }
                }
            }
        }
        out
    }

    /// Triangles whose standard parabolic is spherical (`1/p + 1/q + 1/r > 1`).
    pub fn spherical_triangles(&self) -> Vec<Triangle> {
        self.triangles().into_iter().filter(|t| triangle_sum_cmp(t.labels).is_gt()).collect()
    }

    pub fn is_two_dimensional(&self) -> bool {
        self.spherical_triangles().is_empty()
    }

    /// `Ok(None)` for hyperbolic type, `Ok(Some(witness))` otherwise.
    pub fn hyperbolicity_witness(&self) -> Result<Option<HyperbolicityWitness>> {
        if !self.is_two_dimensional() {
            return Err(Error::Precondition("presentation graph is not two-dimensional".into()));
        }
        if let Some(t) = self.triangles().into_iter().find(|t| triangle_sum_cmp(t.labels).is_eq()) {
            return Ok(Some(HyperbolicityWitness::EuclideanTriangle(t)));
        }
        let n = self.generators.len();
        let two = |x: usize, y: usize| self.label(x, y) == Some(2);
        for a in 0..n {
            for b in a + 1..n {
                if self.label(a, b).is_some() {
                    continue;
                }
                for c in 0..n {
                    if c == a || c == b || !two(a, c) || !two(b, c) {
                        continue;
                    }
                    for d in c + 1..n {
                        if d == a || d == b || self.label(c, d).is_some() {
                            continue;
                        }
                        if two(a, d) && two(b, d) {
                            return Ok(Some(HyperbolicityWitness::SquarePattern { a, b, c, d }));
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn is_hyperbolic_type(&self) -> Result<bool> {
        Ok(self.hyperbolicity_witness()?.is_none())
    }

    pub fn spherical_parabolics(&self) -> Result<Vec<ParabolicDescriptor>> {
        if !self.is_two_dimensional() {
            return Err(Error::Precondition("presentation graph is not two-dimensional".into()));
        }
        let mut out = vec![ParabolicDescriptor::Type0];
        out.extend((0..self.generators.len()).map(|g| ParabolicDescriptor::Type1 { generator: g }));
        out.extend(self.edges.keys().map(|&(a, b)| ParabolicDescriptor::Type2 { a, b }));
        Ok(out)
    }

    /// JSON report used by `artin validate`.
    pub fn validation_report(&self) -> serde_json::Value {
        let names = |t: &Triangle| {
            serde_json::json!({
                "vertices": t.vertices.iter().map(|&v| self.name(v)).collect::<Vec<_>>(),
                "labels": t.labels,
            })
        };
        let violations: Vec<_> = self.spherical_triangles().iter().map(names).collect();
        let two_dim = violations.is_empty();
        let hyperbolic = if two_dim {
            match self.hyperbolicity_witness().expect("checked two-dimensional") {
                None => serde_json::json!({"hyperbolic": true, "criterion": "per specialized criterion"}),
                Some(HyperbolicityWitness::EuclideanTriangle(t)) => serde_json::json!({
                    "hyperbolic": false,
                    "criterion": "per specialized criterion",
                    "witness": {"kind": "euclidean_triangle", "triangle": names(&t)},
                }),
                Some(HyperbolicityWitness::SquarePattern { a, b, c, d }) => serde_json::json!({
                    "hyperbolic": false,
                    "criterion": "per specialized criterion",
                    "witness": {"kind": "square_pattern",
                                "vertices": [self.name(a), self.name(b), self.name(c), self.name(d)]},
                }),
            }
        } else {
            serde_json::Value::Null
        };
        let parabolics = self.spherical_parabolics().map(|p| p.len()).ok();
        serde_json::json!({
            "generators": self.generators.len(),
            "edges": self.edges.len(),
            "two_dimensional": two_dim,
            "violations": violations,
            "hyperbolic_type": hyperbolic,
            "spherical_parabolics": parabolics,
        })
    }
}

/// Compares `1/p + 1/q + 1/r` with 1.
fn triangle_sum_cmp([p, q, r]: [u32; 3]) -> std::cmp::Ordering {
    let (p, q, r) = (p as u64, q as u64, r as u64);
    (q * r + p * r + p * q).cmp(&(p * q * r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(text: &str) -> PresentationGraph {
        PresentationGraph::parse_json(text).unwrap()
    }

    fn triangle(p: u32, q: u32, r: u32) -> PresentationGraph {
        let names = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        PresentationGraph::new(names, &[(0, 1, p), (1, 2, q), (0, 2, r)]).unwrap()
    }

    #[test]
    fn parse_examples() {
        let g = graph(r#"{"generators":["s","t"],"edges":[{"a":"s","b":"t","m":3}]}"#);
        assert_eq!(g.label(0, 1), Some(3));
        let g = graph(
            r#"{"generators":["a","b","c"],"edges":[{"a":"a","b":"b","m":2},{"a":"b","b":"c","m":2}]}"#,
        );
        assert_eq!(g.num_edges(), 2);
        assert!(g.all_labels_two());
        assert_eq!(g.label(0, 2), None);
    }

    #[test]
    fn parse_rejections() {
        let bad = |t: &str| PresentationGraph::parse_json(t).unwrap_err();
        assert!(matches!(
            bad(r#"{"generators":["s","t"],"edges":[{"a":"s","b":"t","m":1}]}"#),
            Error::Validation(_)
        ));
        assert!(matches!(
            bad(r#"{"generators":["s"],"edges":[{"a":"s","b":"s","m":3}]}"#),
            Error::Validation(_)
        ));
        assert!(matches!(
            bad(r#"{"generators":["s","t"],"edges":[{"a":"s","b":"t","m":3},{"a":"t","b":"s","m":4}]}"#),
            Error::Validation(_)
        ));
        assert!(matches!(bad(r#"{"generators":["s","s"]}"#), Error::Validation(_)));
        assert!(matches!(bad(r#"{"generators":["s","#), Error::Syntax(_)));
    }

    #[test]
    fn two_dimensionality() {
        assert!(triangle(3, 3, 3).is_two_dimensional());
        let g = triangle(2, 3, 5);
        assert!(!g.is_two_dimensional());
        assert_eq!(g.spherical_triangles()[0].labels, [2, 3, 5]);
        let path = graph(
            r#"{"generators":["a","b","c"],"edges":[{"a":"a","b":"b","m":2},{"a":"b","b":"c","m":2}]}"#,
        );
        assert!(path.is_two_dimensional());
    }

    #[test]
    fn hyperbolic_type() {
        assert!(matches!(
            triangle(3, 3, 3).hyperbolicity_witness().unwrap(),
            Some(HyperbolicityWitness::EuclideanTriangle(_))
        ));
        for (p, q, r) in [(2, 4, 4), (2, 3, 6)] {
            assert!(!triangle(p, q, r).is_hyperbolic_type().unwrap());
        }
        assert!(triangle(3, 3, 4).is_hyperbolic_type().unwrap());
        let path = graph(
            r#"{"generators":["s","t","u"],"edges":[{"a":"s","b":"t","m":3},{"a":"t","b":"u","m":3}]}"#,
        );
        assert!(path.is_hyperbolic_type().unwrap());
        let square = graph(
            r#"{"generators":["a","b","c","d"],"edges":[
                {"a":"a","b":"c","m":2},{"a":"c","b":"b","m":2},
                {"a":"b","b":"d","m":2},{"a":"d","b":"a","m":2}]}"#,
        );
        assert!(matches!(
            square.hyperbolicity_witness().unwrap(),
            Some(HyperbolicityWitness::SquarePattern { .. })
        ));
        assert!(matches!(triangle(2, 3, 5).is_hyperbolic_type(), Err(Error::Precondition(_))));
    }

    #[test]
    fn parabolics() {
        let g = graph(r#"{"generators":["s","t"],"edges":[{"a":"s","b":"t","m":3}]}"#);
        assert_eq!(
            g.spherical_parabolics().unwrap(),
            vec![
                ParabolicDescriptor::Type0,
                ParabolicDescriptor::Type1 { generator: 0 },
                ParabolicDescriptor::Type1 { generator: 1 },
                ParabolicDescriptor::Type2 { a: 0, b: 1 },
            ]
        );
        let path = graph(
            r#"{"generators":["a","b","c"],"edges":[{"a":"a","b":"b","m":2},{"a":"b","b":"c","m":2}]}"#,
        );
        assert_eq!(path.spherical_parabolics().unwrap().len(), 6);
        let empty = graph(r#"{"generators":["a","b"]}"#);
        assert_eq!(empty.spherical_parabolics().unwrap().len(), 3);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_graph() -> impl Strategy<Value = PresentationGraph> {
            (2usize..6).prop_flat_map(|n| {
                let pairs: Vec<(usize, usize)> =
                    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
                let k = pairs.len();
                proptest::collection::vec(proptest::option::of(2u32..7), k).prop_map(move |labels| {
                    let names = (0..n).map(|i| format!("g{i}")).collect();
                    let edges: Vec<_> = pairs
                        .iter()
                        .zip(labels)
                        .filter_map(|(&(a, b), m)| m.map(|m| (a, b, m)))
                        .collect();
                    PresentationGraph::new(names, &edges).unwrap()
                })
            })
        }

        proptest! {
            #[test]
            fn edge_deletion_preserves_two_dimensionality(g in arb_graph()) {
                if g.is_two_dimensional() {
                    for (a, b, _) in g.edges() {
                        prop_assert!(g.without_edge(a, b).is_two_dimensional());
                    }
                }
            }

            #[test]
            fn parabolic_count(g in arb_graph()) {
                if let Ok(p) = g.spherical_parabolics() {
                    prop_assert_eq!(p.len(), 1 + g.num_generators() + g.num_edges());
                }
            }
        }
    }
}
