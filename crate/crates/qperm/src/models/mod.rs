//! Magic-model engine.
//!
//! A [`MagicModel`] is a finite weighted family of fibers; every fiber is an
//! N x N grid of K x K complex projections whose rows and columns each sum
//! to the identity. The integral over the model is the weighted average of
//! normalized traces of entry words,
//!
//! ```text
//! <u_{i1 j1} ... u_{ik jk}> = sum_f weight_f * tr(P_{i1 j1} ... P_{ik jk}) / K
//! ```
//!
//! and all the analyzers (flatness tables, transfer matrices, orbitals) are
//! different ways of reading this one functional. Weights are exact
//! rationals so group models average exactly; the grids are floats and every
//! check carries an explicit tolerance from [`AnalysisConfig`].

mod io;
mod orbitals;
mod transfer;

pub use io::{model_from_json, model_to_json, FiberJson, ModelJson, RationalJson};
pub use orbitals::{orbit_graph, orbital_graph, orbital_structure, OrbitalClasses, OrbitalStructure};
pub use transfer::{
    classify_transitivity, fixed_dim, j_transitivity_sum, transfer_matrix, CesaroDiagnostics,
    FixedSpace, IndexSet, JTransitivitySum, TransferMatrix, TransitivityReport,
};

use ndarray::Array2;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("structural error: {0}")]
    Shape(String),
    #[error("fiber weights must be positive and sum to 1, got sum {got}")]
    BadWeights { got: String },
    #[error("index tuple invalid: {0}")]
    BadTuple(String),
    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),
    #[error("size {needed} exceeds the configured cap {cap}")]
    SizeCap { needed: usize, cap: usize },
    #[error("transfer matrix integrity: {0}")]
    TransferIntegrity(String),
    #[error("no convergence after {iterations} iterations, residual {residual:e}")]
    Convergence { iterations: usize, residual: f64 },
    #[error("operation needs n >= {min}, model has n = {n}")]
    NTooSmall { n: usize, min: usize },
}

/// Tolerances and caps for all numerical analyzers. The defaults are pinned
/// here and nowhere else; the CLI config file deserializes into this struct
/// with per-field overrides.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct AnalysisConfig {
    /// Projection / self-adjointness / row-column sum tolerance.
    pub magic_tol: f64,
    /// Nonvanishing threshold for orbit and orbital detection.
    pub orbit_tol: f64,
    /// Successive-iterate Frobenius tolerance for the averaged-power limit.
    pub cesaro_tol: f64,
    /// Iteration budget for the limit computation.
    pub max_iter: usize,
    /// Cap on the transfer-matrix dimension N^k.
    pub transfer_dim_cap: usize,
    /// Allowed deviation of transfer row sums from 1.
    pub integrity_tol: f64,
    /// Allowed excess of the spectral-radius estimate over 1.
    pub spectral_tol: f64,
    /// Seed for the power-iteration probe vector and random bases.
    pub seed: u64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            magic_tol: 1e-9,
            orbit_tol: 1e-8,
            cesaro_tol: 1e-10,
            max_iter: 10_000,
            transfer_dim_cap: 2048,
            integrity_tol: 1e-8,
            spectral_tol: 1e-6,
            seed: 0,
        }
    }
}

/// One sample point of the model: a weight and an N x N grid of K x K
/// matrices. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Fiber {
    weight: BigRational,
    weight_f64: f64,
    grid: Vec<Vec<Array2<Complex64>>>,
}

impl Fiber {
    pub fn new(weight: BigRational, grid: Vec<Vec<Array2<Complex64>>>) -> Result<Self, ModelError> {
        if weight <= BigRational::zero() {
            return Err(ModelError::BadWeights {
                got: format!("non-positive weight {weight}"),
            });
        }
        let weight_f64 = weight.to_f64().ok_or_else(|| ModelError::BadWeights {
            got: "weight does not fit in f64".into(),
        })?;
        for row in &grid {
            for entry in row {
                if entry.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(ModelError::Shape("non-finite grid entry".into()));
                }
            }
        }
        Ok(Fiber {
            weight,
            weight_f64,
            grid,
        })
    }

    pub fn weight(&self) -> &BigRational {
        &self.weight
    }

    pub fn grid(&self) -> &[Vec<Array2<Complex64>>] {
        &self.grid
    }

    pub fn entry(&self, i: usize, j: usize) -> &Array2<Complex64> {
        &self.grid[i][j]
    }
}

/// Weighted family of magic-unitary fibers over a common index size N and
/// fiber dimension K.
#[derive(Debug, Clone)]
pub struct MagicModel {
    n: usize,
    kdim: usize,
    fibers: Vec<Fiber>,
}

impl MagicModel {
    pub fn new(n: usize, kdim: usize, fibers: Vec<Fiber>) -> Result<Self, ModelError> {
        if n == 0 || kdim == 0 {
            return Err(ModelError::Shape("n and k_dim must be positive".into()));
        }
        if fibers.is_empty() {
            return Err(ModelError::Shape("at least one fiber required".into()));
        }
        for (f, fiber) in fibers.iter().enumerate() {
            if fiber.grid.len() != n || fiber.grid.iter().any(|row| row.len() != n) {
                return Err(ModelError::Shape(format!("fiber {f}: grid is not {n} x {n}")));
            }
            for row in &fiber.grid {
                for entry in row {
                    if entry.dim() != (kdim, kdim) {
                        return Err(ModelError::Shape(format!(
                            "fiber {f}: entry is {:?}, expected ({kdim}, {kdim})",
                            entry.dim()
                        )));
                    }
                }
            }
        }
        let total: BigRational = fibers.iter().map(|f| f.weight.clone()).sum();
        if total != BigRational::one() {
            return Err(ModelError::BadWeights {
                got: total.to_string(),
            });
        }
        Ok(MagicModel { n, kdim, fibers })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kdim(&self) -> usize {
        self.kdim
    }

    pub fn fibers(&self) -> &[Fiber] {
        &self.fibers
    }

    fn check_tuples(&self, i: &[usize], j: &[usize]) -> Result<(), ModelError> {
        if i.is_empty() || i.len() != j.len() {
            return Err(ModelError::BadTuple(format!(
                "tuples must be nonempty and of equal length, got {} and {}",
                i.len(),
                j.len()
            )));
        }
        for &v in i.iter().chain(j.iter()) {
            if v == 0 || v > self.n {
                return Err(ModelError::BadTuple(format!("entry {v} outside 1..={}", self.n)));
            }
        }
        Ok(())
    }

    /// The model integral of the coordinate word u_{i1 j1} ... u_{ik jk}:
    /// fiber-weighted normalized trace of the matrix word. Tuples are
    /// 1-based.
    pub fn word_trace(&self, i: &[usize], j: &[usize]) -> Result<Complex64, ModelError> {
        self.check_tuples(i, j)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for fiber in &self.fibers {
            let mut word = fiber.entry(i[0] - 1, j[0] - 1).clone();
            for s in 1..i.len() {
                word = word.dot(fiber.entry(i[s] - 1, j[s] - 1));
            }
            acc += linalg::trace(&word) * fiber.weight_f64;
        }
        Ok(acc / self.kdim as f64)
    }
}

/// Worst-case defects of the magic-unitary axioms over all fibers.
#[derive(Debug, Clone, Serialize)]
pub struct MagicVerification {
    pub pass: bool,
    pub max_projection_defect: f64,
    pub max_adjoint_defect: f64,
    pub max_row_defect: f64,
    pub max_col_defect: f64,
}

/// Checks that every entry is a self-adjoint idempotent and that rows and
/// columns of every fiber sum to the identity, all within `tol` in Frobenius
/// norm. Failure is a report, not an error; errors are reserved for
/// structural breakage.
pub fn verify_magic(m: &MagicModel, tol: f64) -> MagicVerification {
    let id = linalg::identity(m.kdim);
    let mut proj = 0.0f64;
    let mut adj = 0.0f64;
    let mut row = 0.0f64;
    let mut col = 0.0f64;
    for fiber in &m.fibers {
        for i in 0..m.n {
            for j in 0..m.n {
                let p = fiber.entry(i, j);
                proj = proj.max(linalg::frobenius_distance(&p.dot(p), p));
                adj = adj.max(linalg::frobenius_distance(&linalg::adjoint(p), p));
            }
        }
        for a in 0..m.n {
            let mut row_sum = Array2::zeros((m.kdim, m.kdim));
            let mut col_sum = Array2::zeros((m.kdim, m.kdim));
            for b in 0..m.n {
                row_sum += fiber.entry(a, b);
                col_sum += fiber.entry(b, a);
            }
            row = row.max(linalg::frobenius_distance(&row_sum, &id));
            col = col.max(linalg::frobenius_distance(&col_sum, &id));
        }
    }
    MagicVerification {
        pass: proj <= tol && adj <= tol && row <= tol && col <= tol,
        max_projection_defect: proj,
        max_adjoint_defect: adj,
        max_row_defect: row,
        max_col_defect: col,
    }
}

/// Entry ranks per fiber plus the flatness verdict.
#[derive(Debug, Clone, Serialize)]
pub struct FlatnessReport {
    /// ranks[f][i][j] = rank of entry (i, j) of fiber f.
    pub ranks: Vec<Vec<Vec<usize>>>,
    pub is_flat: bool,
    pub common_rank: Option<usize>,
    /// When flat: worst |tr(P_ij) - R/K| over all entries; 0 otherwise.
    pub max_trace_deviation: f64,
}

/// Ranks every grid entry by counting eigenvalues above 1/2. An eigenvalue
/// within `tol` of 1/2 means the entry is not close to any projection and
/// ranking it would be a guess, so that is an error rather than a report.
pub fn flatness_profile(m: &MagicModel, tol: f64) -> Result<FlatnessReport, ModelError> {
    let mut ranks = Vec::with_capacity(m.fibers.len());
    for (f, fiber) in m.fibers.iter().enumerate() {
        let mut fiber_ranks = vec![vec![0usize; m.n]; m.n];
        for i in 0..m.n {
            for j in 0..m.n {
                let eig = linalg::hermitian_eigenvalues(fiber.entry(i, j));
                if let Some(bad) = eig.iter().find(|l| (**l - 0.5).abs() < tol) {
                    return Err(ModelError::NumericalDegeneracy(format!(
                        "fiber {f} entry ({}, {}) has eigenvalue {bad} within {tol:e} of 1/2",
                        i + 1,
                        j + 1
                    )));
                }
                fiber_ranks[i][j] = eig.iter().filter(|l| **l > 0.5).count();
            }
        }
        ranks.push(fiber_ranks);
    }
    let first = ranks[0][0][0];
    let is_flat = ranks
        .iter()
        .all(|fr| fr.iter().all(|row| row.iter().all(|&r| r == first)));
    let mut max_trace_deviation = 0.0f64;
    if is_flat {
        let target = first as f64 / m.kdim as f64;
        for fiber in &m.fibers {
            for i in 0..m.n {
                for j in 0..m.n {
                    let t = linalg::trace(fiber.entry(i, j)) / m.kdim as f64;
                    let dev = (t - Complex64::new(target, 0.0)).norm();
                    max_trace_deviation = max_trace_deviation.max(dev);
                }
            }
        }
    }
    Ok(FlatnessReport {
        ranks,
        is_flat,
        common_rank: if is_flat { Some(first) } else { None },
        max_trace_deviation,
    })
}

/// Weighted pair trace <u_ij u_kl> = sum_f w_f tr(P_ij P_kl)/K with 1-based
/// indices; the basic quantity behind orbitals, profile graphs, and the
/// degree-2 flatness table.
pub fn pair_trace(m: &MagicModel, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for fiber in &m.fibers {
        let a = fiber.entry(i - 1, j - 1);
        let b = fiber.entry(k - 1, l - 1);
        // tr(AB) without forming AB.
        let mut t = Complex64::new(0.0, 0.0);
        for r in 0..m.kdim {
            for s in 0..m.kdim {
                t += a[(r, s)] * b[(s, r)];
            }
        }
        acc += t * fiber.weight_f64;
    }
    acc / m.kdim as f64
}

/// Deviations from the degree-2 flat trace table, split by coincidence case.
#[derive(Debug, Clone, Serialize)]
pub struct DoubleFlatReport {
    pub pass: bool,
    /// i = k, j = l: target 1/N.
    pub max_dev_equal: f64,
    /// Exactly one of i = k, j = l: target 0.
    pub max_dev_mixed: f64,
    /// i != k, j != l: target 1/(N(N-1)).
    pub max_dev_distinct: f64,
}

impl DoubleFlatReport {
    pub fn max_deviation(&self) -> f64 {
        self.max_dev_equal.max(self.max_dev_mixed).max(self.max_dev_distinct)
    }
}

/// Tests the three-case table tr(P_ij P_kl) = 1/N, 0, 1/(N(N-1)) over all
/// index quadruples.
pub fn check_double_flat(m: &MagicModel, tol: f64) -> DoubleFlatReport {
    let n = m.n;
    let mut equal = 0.0f64;
    let mut mixed = 0.0f64;
    let mut distinct = 0.0f64;
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    let t = pair_trace(m, i, j, k, l);
                    if i == k && j == l {
                        equal = equal.max((t - Complex64::new(1.0 / n as f64, 0.0)).norm());
                    } else if i == k || j == l {
                        mixed = mixed.max(t.norm());
                    } else {
                        let target = 1.0 / (n * (n - 1)) as f64;
                        distinct = distinct.max((t - Complex64::new(target, 0.0)).norm());
                    }
                }
            }
        }
    }
    DoubleFlatReport {
        pass: equal <= tol && mixed <= tol && distinct <= tol,
        max_dev_equal: equal,
        max_dev_mixed: mixed,
        max_dev_distinct: distinct,
    }
}

/// Deviation from the degree-3 constant on fully distinct triples.
#[derive(Debug, Clone, Serialize)]
pub struct TripleFlatReport {
    pub pass: bool,
    pub target: f64,
    pub max_deviation: f64,
}

/// Tests tr(P_ij P_kl P_pq) = 1/(N(N-1)(N-2)) over all sextuples with
/// i, k, p pairwise distinct and j, l, q pairwise distinct; needs N >= 3.
pub fn check_triple_flat(m: &MagicModel, tol: f64) -> Result<TripleFlatReport, ModelError> {
    let n = m.n;
    if n < 3 {
        return Err(ModelError::NTooSmall { n, min: 3 });
    }
    let target = 1.0 / (n * (n - 1) * (n - 2)) as f64;
    let distinct3: Vec<[usize; 3]> = {
        let mut v = Vec::new();
        for a in 1..=n {
            for b in 1..=n {
                for c in 1..=n {
                    if a != b && a != c && b != c {
                        v.push([a, b, c]);
                    }
                }
            }
        }
        v
    };
    let mut max_dev = 0.0f64;
    for rows in &distinct3 {
        for cols in &distinct3 {
            let t = m
                .word_trace(rows, cols)
                .expect("tuples enumerated in range");
            max_dev = max_dev.max((t - Complex64::new(target, 0.0)).norm());
        }
    }
    Ok(TripleFlatReport {
        pass: max_dev <= tol,
        target,
        max_deviation: max_dev,
    })
}
