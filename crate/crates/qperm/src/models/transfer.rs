//! Transfer matrices of coordinate words and their averaged limits.
//!
//! For word length k the transfer matrix has entries
//!
//! ```text
//! T((i1..ik), (j1..jk)) = sum_f w_f * tr(P_{i1 j1} ... P_{ik jk}) / K
//! ```
//!
//! over either all k-tuples (FULL) or tuples with consecutive entries
//! distinct (JSET, size N(N-1)^{k-1}). Row sums are 1 in both cases: along a
//! row, summing the last column index telescopes through the magic relations
//! (row sums are the identity; same-column entries are orthogonal), leaving
//! tr(1)/K = 1. In exact arithmetic all powers of T have entries of modulus
//! at most 1, so the spectrum sits in the closed unit disk and eigenvalues
//! on the circle are semisimple.
//!
//! The limit of the Cesaro averages (1/n) sum T^m is the spectral projection
//! at eigenvalue 1; its rank is the fixed-space dimension of the k-th tensor
//! power under the model's Hopf image. Plain unit-step averaging decays like
//! 1/n and cannot meet a 1e-10 successive-difference tolerance in any
//! reasonable iteration budget, and repeated squaring of T itself is
//! unstable (unit-circle eigenvalues drift outward in floats). Squaring the
//! half-step average S = (I + T)/2 avoids both: eigenvalues z of T map to
//! (1 + z)/2, which has modulus < 1 strictly unless z = 1, so S^(2^j)
//! converges geometrically to the same spectral projection and every iterate
//! stays power-bounded. Convergence is checked on successive squarings.

use ndarray::Array2;
use num_complex::Complex64;
use serde::Serialize;

use super::{AnalysisConfig, MagicModel, ModelError};
use crate::linalg;

/// Which tuple family indexes the transfer matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexSet {
    /// All of {1..N}^k.
    Full,
    /// Consecutive entries distinct.
    Jset,
}

impl std::fmt::Display for IndexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IndexSet::Full => write!(f, "full"),
            IndexSet::Jset => write!(f, "jset"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TransferMatrix {
    k: usize,
    n: usize,
    index_set: IndexSet,
    tuples: Vec<Vec<usize>>,
    entries: Array2<Complex64>,
    max_row_sum_deviation: f64,
    spectral_radius_estimate: f64,
}

impl TransferMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn index_set(&self) -> IndexSet {
        self.index_set
    }

    /// Row/column labels, 1-based tuples in assembly order.
    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.tuples.len()
    }

    pub fn max_row_sum_deviation(&self) -> f64 {
        self.max_row_sum_deviation
    }

    pub fn spectral_radius_estimate(&self) -> f64 {
        self.spectral_radius_estimate
    }
}

/// Tuples of the given level, JSET-pruned if asked, in lexicographic order,
/// together with child index maps so products can be built level by level.
fn enumerate_levels(n: usize, k: usize, jset: bool) -> Vec<Vec<Vec<usize>>> {
    let mut levels: Vec<Vec<Vec<usize>>> = Vec::with_capacity(k);
    let mut current: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for t in &current {
            for x in 1..=n {
                if jset {
                    if let Some(&last) = t.last() {
                        if last == x {
                            continue;
                        }
                    }
                }
                let mut ext = t.clone();
                ext.push(x);
                next.push(ext);
            }
        }
        levels.push(next.clone());
        current = next;
    }
    levels
}

/// Builds the transfer matrix, checking the row-sum and spectral-radius
/// integrity invariants. Fails with a resource error when the tuple count
/// exceeds the configured cap.
pub fn transfer_matrix(
    m: &MagicModel,
    k: usize,
    index_set: IndexSet,
    config: &AnalysisConfig,
) -> Result<TransferMatrix, ModelError> {
    if k == 0 {
        return Err(ModelError::BadTuple("word length k must be positive".into()));
    }
    let n = m.n();
    let kd = m.kdim();
    let jset = index_set == IndexSet::Jset;
    let levels = enumerate_levels(n, k, jset);
    let dim = levels[k - 1].len();
    if dim == 0 || dim > config.transfer_dim_cap {
        return Err(ModelError::SizeCap {
            needed: dim,
            cap: config.transfer_dim_cap,
        });
    }
    let mut entries: Array2<Complex64> = Array2::zeros((dim, dim));
    // Per fiber: walk paired prefixes level by level, reusing the partial
    // matrix products shared by all extensions of a prefix pair.
    for fiber in m.fibers() {
        let weight = fiber.weight_f64;
        // Level 1 products are the grid entries themselves.
        let len1 = levels[0].len();
        let mut prods: Vec<Array2<Complex64>> = Vec::with_capacity(len1 * len1);
        for a in &levels[0] {
            for b in &levels[0] {
                prods.push(fiber.entry(a[0] - 1, b[0] - 1).clone());
            }
        }
        let mut level_tuples = levels[0].clone();
        for s in 1..k {
            let next_tuples = &levels[s];
            let next_len = next_tuples.len();
            if s + 1 == k {
                // Final level: accumulate traces instead of storing products.
                for (ri, row_t) in next_tuples.iter().enumerate() {
                    let pre_r = position_of_prefix(&level_tuples, row_t);
                    for (ci, col_t) in next_tuples.iter().enumerate() {
                        let pre_c = position_of_prefix(&level_tuples, col_t);
                        let base = &prods[pre_r * level_tuples.len() + pre_c];
                        let last = fiber.entry(row_t[s] - 1, col_t[s] - 1);
                        let mut tr = Complex64::new(0.0, 0.0);
                        for r in 0..kd {
                            for c in 0..kd {
                                tr += base[(r, c)] * last[(c, r)];
                            }
                        }
                        entries[(ri, ci)] += tr * weight / kd as f64;
                    }
                }
            } else {
                let mut next_prods: Vec<Array2<Complex64>> =
                    Vec::with_capacity(next_len * next_len);
                for row_t in next_tuples {
                    let pre_r = position_of_prefix(&level_tuples, row_t);
                    for col_t in next_tuples {
                        let pre_c = position_of_prefix(&level_tuples, col_t);
                        let base = &prods[pre_r * level_tuples.len() + pre_c];
                        next_prods.push(base.dot(fiber.entry(row_t[s] - 1, col_t[s] - 1)));
                    }
                }
                prods = next_prods;
                level_tuples = next_tuples.clone();
            }
        }
        if k == 1 {
            for (ri, row_t) in levels[0].iter().enumerate() {
                for (ci, col_t) in levels[0].iter().enumerate() {
                    let p = fiber.entry(row_t[0] - 1, col_t[0] - 1);
                    let mut tr = Complex64::new(0.0, 0.0);
                    for r in 0..kd {
                        tr += p[(r, r)];
                    }
                    entries[(ri, ci)] += tr * weight / kd as f64;
                }
            }
        }
    }
    let mut max_dev = 0.0f64;
    for r in 0..dim {
        let mut sum = Complex64::new(0.0, 0.0);
        for c in 0..dim {
            sum += entries[(r, c)];
        }
        max_dev = max_dev.max((sum - Complex64::new(1.0, 0.0)).norm());
    }
    if max_dev > config.integrity_tol {
        return Err(ModelError::TransferIntegrity(format!(
            "row sums deviate from 1 by {max_dev:e} (> {:e})",
            config.integrity_tol
        )));
    }
    let radius = linalg::spectral_radius_estimate(&entries, 200, config.seed);
    if radius > 1.0 + config.spectral_tol {
        return Err(ModelError::TransferIntegrity(format!(
            "spectral radius estimate {radius} exceeds 1 + {:e}",
            config.spectral_tol
        )));
    }
    Ok(TransferMatrix {
        k,
        n,
        index_set,
        tuples: levels[k - 1].clone(),
        entries,
        max_row_sum_deviation: max_dev,
        spectral_radius_estimate: radius,
    })
}

/// Position of the length-(s) prefix of `t` in the sorted level list.
/// Levels are enumerated lexicographically, so binary search applies.
fn position_of_prefix(level: &[Vec<usize>], t: &[usize]) -> usize {
    let prefix = &t[..level[0].len()];
    level
        .binary_search_by(|probe| probe.as_slice().cmp(prefix))
        .expect("prefix of an enumerated tuple is enumerated")
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CesaroDiagnostics {
    /// Squarings of the half-step average; each one doubles the effective
    /// averaging depth, so depth = 2^squarings.
    pub squarings: usize,
    /// Frobenius distance between the last two iterates.
    pub residual: f64,
}

/// Limit of the Cesaro averages of powers of `t`: the spectral projection at
/// eigenvalue 1, computed by squaring S = (I + T)/2 until successive
/// iterates agree within `config.cesaro_tol`. The squaring budget is
/// min(max_iter, 60): beyond 60 squarings the effective depth 2^60 exceeds
/// any float-representable improvement and continued squaring only
/// compounds rounding.
pub fn averaged_projection(
    t: &Array2<Complex64>,
    config: &AnalysisConfig,
) -> Result<(Array2<Complex64>, CesaroDiagnostics), ModelError> {
    let dim = t.nrows();
    assert_eq!(dim, t.ncols());
    let id: Array2<Complex64> = Array2::eye(dim);
    let mut s = (&id + t).mapv(|z| z * 0.5);
    let cap = config.max_iter.min(60).max(1);
    let mut residual = f64::INFINITY;
    for squarings in 1..=cap {
        let s2 = s.dot(&s);
        residual = linalg::frobenius_distance(&s2, &s);
        s = s2;
        if residual < config.cesaro_tol {
            return Ok((
                s,
                CesaroDiagnostics {
                    squarings,
                    residual,
                },
            ));
        }
    }
    Err(ModelError::Convergence {
        iterations: cap,
        residual,
    })
}

/// Fixed-space dimension of the k-th tensor power plus the diagnostics that
/// justify it.
#[derive(Debug, Clone, Serialize)]
pub struct FixedSpace {
    pub k: usize,
    pub dim: usize,
    /// Trace of the limit projection; matches `dim` when the limit is clean.
    pub trace: f64,
    pub squarings: usize,
    pub residual: f64,
    /// True when some singular value landed suspiciously far from {0} u [1, inf):
    /// inside (0.05, 0.95), a factor-10 band around the rank threshold 1/2.
    pub near_threshold: bool,
}

/// Rank of the averaged-power limit of the FULL transfer matrix at word
/// length k, counted as singular values above 1/2. Idempotents have no
/// singular values in (0, 1), so the count is stable against the residual
/// left by the iteration.
pub fn fixed_dim(m: &MagicModel, k: usize, config: &AnalysisConfig) -> Result<FixedSpace, ModelError> {
    let t = transfer_matrix(m, k, IndexSet::Full, config)?;
    let (limit, diag) = averaged_projection(t.entries(), config)?;
    let sv = linalg::singular_values(&limit);
    let dim = sv.iter().filter(|s| **s > 0.5).count();
    let near_threshold = sv.iter().any(|s| *s > 0.05 && *s < 0.95);
    let trace = limit.diag().iter().map(|z| z.re).sum();
    Ok(FixedSpace {
        k,
        dim,
        trace,
        squarings: diag.squarings,
        residual: diag.residual,
        near_threshold,
    })
}

/// The three-level transitivity verdict with its underlying dimensions.
#[derive(Debug, Clone, Serialize)]
pub struct TransitivityReport {
    pub dims: [usize; 3],
    pub transitive: bool,
    pub doubly_transitive: bool,
    pub triply_transitive: bool,
    pub near_threshold: bool,
}

/// Computes fixed_dim at k = 1, 2, 3 and applies the dimension criteria
/// 1, 2, 5 (the Bell-number minima for a 3-transitive action).
pub fn classify_transitivity(
    m: &MagicModel,
    config: &AnalysisConfig,
) -> Result<TransitivityReport, ModelError> {
    let d1 = fixed_dim(m, 1, config)?;
    let d2 = fixed_dim(m, 2, config)?;
    let d3 = fixed_dim(m, 3, config)?;
    Ok(TransitivityReport {
        dims: [d1.dim, d2.dim, d3.dim],
        transitive: d1.dim == 1,
        doubly_transitive: d2.dim == 2,
        triply_transitive: d3.dim == 5,
        near_threshold: d1.near_threshold || d2.near_threshold || d3.near_threshold,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct JTransitivitySum {
    pub k: usize,
    pub sum: f64,
    pub squarings: usize,
    pub residual: f64,
}

/// Sum of the diagonal of the averaged JSET limit: equals 1 within
/// tolerance exactly when the coaction on consecutive-distinct tuples is
/// transitive, and exceeds 1 when several fixed vectors contribute.
pub fn j_transitivity_sum(
    m: &MagicModel,
    k: usize,
    config: &AnalysisConfig,
) -> Result<JTransitivitySum, ModelError> {
    let t = transfer_matrix(m, k, IndexSet::Jset, config)?;
    let (limit, diag) = averaged_projection(t.entries(), config)?;
    let sum = limit.diag().iter().map(|z| z.re).sum();
    Ok(JTransitivitySum {
        k,
        sum,
        squarings: diag.squarings,
        residual: diag.residual,
    })
}
