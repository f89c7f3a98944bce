//! Orbit and orbital extraction by thresholded nonvanishing.
//!
//! Points i, j are in the same orbit when some fiber has P_ij != 0; pairs
//! (i, k), (j, l) are in the same orbital when the averaged trace of
//! P_ij P_kl is nonzero. For an exact quantum group both relations are
//! equivalences, but a thresholded float relation need not be transitive,
//! so the classes returned are those of the transitive closure and the
//! report says whether closure actually merged anything. Traces that land
//! within a factor of 10 of the threshold are counted as near-threshold so
//! borderline classifications are visible instead of silent.

use serde::Serialize;

use super::{pair_trace, AnalysisConfig, MagicModel, ModelError};
use crate::graphs::LabeledGraph;
use crate::linalg;

/// Classes of the point or pair relation, 1-based, each class sorted, the
/// class list sorted by first element.
#[derive(Debug, Clone, Serialize)]
pub enum OrbitalClasses {
    Points(Vec<Vec<usize>>),
    Pairs(Vec<Vec<(usize, usize)>>),
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitalStructure {
    pub k: usize,
    pub classes: OrbitalClasses,
    /// True when the thresholded relation was not already an equivalence.
    pub closure_changed: bool,
    /// Number of magnitudes within a factor of 10 of the threshold.
    pub near_threshold_count: usize,
    /// For k = 2 only: whether the diagonal {(i,i)} is a union of classes.
    pub diagonal_is_union: Option<bool>,
}

impl OrbitalStructure {
    pub fn num_classes(&self) -> usize {
        match &self.classes {
            OrbitalClasses::Points(c) => c.len(),
            OrbitalClasses::Pairs(c) => c.len(),
        }
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(size: usize) -> Self {
        UnionFind {
            parent: (0..size).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn classes_of(uf: &mut UnionFind, size: usize) -> Vec<Vec<usize>> {
    let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for x in 0..size {
        let r = uf.find(x);
        by_root.entry(r).or_default().push(x);
    }
    by_root.into_values().collect()
}

/// Whether a reflexive symmetric boolean relation is already transitive.
fn is_transitive(rel: &[Vec<bool>]) -> bool {
    let n = rel.len();
    for a in 0..n {
        for b in 0..n {
            if !rel[a][b] {
                continue;
            }
            for c in 0..n {
                if rel[b][c] && !rel[a][c] {
                    return false;
                }
            }
        }
    }
    true
}

/// Orbit (k = 1) or orbital (k = 2) classes of the model under the
/// thresholded nonvanishing relation.
pub fn orbital_structure(
    m: &MagicModel,
    k: usize,
    config: &AnalysisConfig,
) -> Result<OrbitalStructure, ModelError> {
    match k {
        1 => Ok(orbits(m, config)),
        2 => Ok(orbitals(m, config)),
        _ => Err(ModelError::BadTuple(format!(
            "orbital structure is defined for k in {{1, 2}}, got {k}"
        ))),
    }
}

fn near(mag: f64, tol: f64) -> bool {
    mag > tol / 10.0 && mag < tol * 10.0
}

/// Symmetrized, reflexive nonvanishing relation on points: i ~ j when some
/// fiber entry P_ij or P_ji has Frobenius norm above the threshold.
fn point_relation(m: &MagicModel, config: &AnalysisConfig) -> (Vec<Vec<bool>>, usize) {
    let n = m.n();
    let tol = config.orbit_tol;
    let mut rel = vec![vec![false; n]; n];
    let mut near_count = 0usize;
    for i in 0..n {
        for j in 0..n {
            let mag = m
                .fibers()
                .iter()
                .map(|f| linalg::frobenius_norm(f.entry(i, j)))
                .fold(0.0f64, f64::max);
            if near(mag, tol) {
                near_count += 1;
            }
            if mag > tol {
                rel[i][j] = true;
            }
        }
    }
    for i in 0..n {
        rel[i][i] = true;
        for j in 0..i {
            let any = rel[i][j] || rel[j][i];
            rel[i][j] = any;
            rel[j][i] = any;
        }
    }
    (rel, near_count)
}

/// Same relation on ordered pairs, measured by the averaged pair trace.
/// Pair (i, k) lives at index (i-1)*n + (k-1).
fn pair_relation(m: &MagicModel, config: &AnalysisConfig) -> (Vec<Vec<bool>>, usize) {
    let n = m.n();
    let tol = config.orbit_tol;
    let size = n * n;
    let mut rel = vec![vec![false; size]; size];
    let mut near_count = 0usize;
    for i in 1..=n {
        for k in 1..=n {
            let a = (i - 1) * n + (k - 1);
            for j in 1..=n {
                for l in 1..=n {
                    let b = (j - 1) * n + (l - 1);
                    let mag = pair_trace(m, i, j, k, l).norm();
                    if near(mag, tol) {
                        near_count += 1;
                    }
                    if mag > tol {
                        rel[a][b] = true;
                    }
                }
            }
        }
    }
    for a in 0..size {
        rel[a][a] = true;
        for b in 0..a {
            let any = rel[a][b] || rel[b][a];
            rel[a][b] = any;
            rel[b][a] = any;
        }
    }
    (rel, near_count)
}

fn orbits(m: &MagicModel, config: &AnalysisConfig) -> OrbitalStructure {
    let n = m.n();
    let (rel, near_count) = point_relation(m, config);
    let closure_changed = !is_transitive(&rel);
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in 0..n {
            if rel[i][j] {
                uf.union(i, j);
            }
        }
    }
    let classes = classes_of(&mut uf, n)
        .into_iter()
        .map(|c| c.into_iter().map(|x| x + 1).collect())
        .collect();
    OrbitalStructure {
        k: 1,
        classes: OrbitalClasses::Points(classes),
        closure_changed,
        near_threshold_count: near_count,
        diagonal_is_union: None,
    }
}

fn orbitals(m: &MagicModel, config: &AnalysisConfig) -> OrbitalStructure {
    let n = m.n();
    let size = n * n;
    let (rel, near_count) = pair_relation(m, config);
    let closure_changed = !is_transitive(&rel);
    let mut uf = UnionFind::new(size);
    for a in 0..size {
        for b in 0..size {
            if rel[a][b] {
                uf.union(a, b);
            }
        }
    }
    let classes: Vec<Vec<(usize, usize)>> = classes_of(&mut uf, size)
        .into_iter()
        .map(|c| c.into_iter().map(|x| (x / n + 1, x % n + 1)).collect())
        .collect();
    let diagonal_is_union = classes
        .iter()
        .all(|c| c.iter().all(|(i, k)| i == k) || c.iter().all(|(i, k)| i != k));
    OrbitalStructure {
        k: 2,
        classes: OrbitalClasses::Pairs(classes),
        closure_changed,
        near_threshold_count: near_count,
        diagonal_is_union: Some(diagonal_is_union),
    }
}

/// The point nonvanishing relation as a graph on vertices 1..N. Its
/// connected components are exactly the classes of orbital_structure(m, 1).
pub fn orbit_graph(m: &MagicModel, config: &AnalysisConfig) -> LabeledGraph {
    let n = m.n();
    let (rel, _) = point_relation(m, config);
    let labels = (1..=n).map(|i| i.to_string()).collect();
    let mut g = LabeledGraph::new(labels);
    for i in 0..n {
        for j in 0..i {
            if rel[i][j] {
                g.add_edge(j, i);
            }
        }
    }
    g
}

/// The pair nonvanishing relation as a graph on all N^2 ordered pairs,
/// labeled "(i,k)". Components match orbital_structure(m, 2).
pub fn orbital_graph(m: &MagicModel, config: &AnalysisConfig) -> LabeledGraph {
    let n = m.n();
    let (rel, _) = pair_relation(m, config);
    let labels = (1..=n)
        .flat_map(|i| (1..=n).map(move |k| format!("({i},{k})")))
        .collect();
    let mut g = LabeledGraph::new(labels);
    for a in 0..n * n {
        for b in 0..a {
            if rel[a][b] {
                g.add_edge(b, a);
            }
        }
    }
    g
}
