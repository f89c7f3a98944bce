//! Constructors for the bundled example models: complex Hadamard matrices
//! and their rank-1 magic models, Weyl-operator models, and the minimal
//! rank-2 three-point model.
//!
//! Every constructor that builds a magic unitary re-verifies the magic
//! axioms on its output and fails with a construction-integrity error
//! instead of returning a silently broken model.

use ndarray::{Array1, Array2};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::graphs::LabeledGraph;
use crate::linalg;
use crate::models::{
    pair_trace, verify_magic, AnalysisConfig, Fiber, MagicModel, ModelError,
};
use crate::permgroup::{integrate_group, PermutationGroup};

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("not a complex Hadamard matrix: modulus defect {modulus:e}, orthogonality defect {gram:e}")]
    BadHadamard { modulus: f64, gram: f64 },
    #[error("constructed model failed magic verification: {0}")]
    ConstructionIntegrity(String),
    #[error("Weyl fiber averaging is implemented for base sizes 2 and 3, got {n}")]
    UnsupportedWeylBase { n: usize },
    #[error("basis must be 6 orthonormal vectors in C^6: {0}")]
    NonOrthonormal(String),
    #[error("model has n = {model_n} but the group acts on {group_n} points")]
    StationaryDegreeMismatch { model_n: usize, group_n: usize },
}

/// An N x N matrix with unimodular entries and orthogonal rows.
#[derive(Debug, Clone)]
pub struct ComplexHadamard {
    n: usize,
    entries: Array2<Complex64>,
}

impl ComplexHadamard {
    pub fn from_entries(entries: Array2<Complex64>) -> Result<Self, GeneratorError> {
        let (r, c) = entries.dim();
        if r == 0 || r != c {
            return Err(GeneratorError::Model(ModelError::Shape(format!(
                "Hadamard matrix must be square and nonempty, got {r} x {c}"
            ))));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(GeneratorError::Model(ModelError::Shape(
                "non-finite Hadamard entry".into(),
            )));
        }
        Ok(ComplexHadamard { n: r, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct HadamardReport {
    pub pass: bool,
    pub max_modulus_defect: f64,
    pub max_gram_defect: f64,
}

/// Checks |H_ij| = 1 and H H* = N I within tol.
pub fn verify_hadamard(h: &ComplexHadamard, tol: f64) -> HadamardReport {
    let n = h.n;
    let mut modulus = 0.0f64;
    for z in h.entries.iter() {
        modulus = modulus.max((z.norm() - 1.0).abs());
    }
    let gram = h.entries.dot(&linalg::adjoint(&h.entries));
    let mut gram_defect = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j {
                Complex64::new(n as f64, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            gram_defect = gram_defect.max((gram[(i, j)] - target).norm());
        }
    }
    HadamardReport {
        pass: modulus <= tol && gram_defect <= tol,
        max_modulus_defect: modulus,
        max_gram_defect: gram_defect,
    }
}

/// The Fourier matrix H_jk = exp(2 pi i jk / n), 0-based exponents.
pub fn fourier_matrix(n: usize) -> ComplexHadamard {
    assert!(n >= 1, "fourier_matrix needs n >= 1");
    let entries = Array2::from_shape_fn((n, n), |(j, k)| {
        let angle = std::f64::consts::TAU * ((j * k) % n) as f64 / n as f64;
        Complex64::new(angle.cos(), angle.sin())
    });
    ComplexHadamard { n, entries }
}

/// The one-parameter deformation of the 4 x 4 Fourier matrix: the entries
/// at the (odd row, odd column) positions pick up the phase q = e^{i theta}.
/// At theta = 0 this is the Fourier matrix itself; it is Hadamard for every
/// real theta.
pub fn f4_deformed(theta: f64) -> ComplexHadamard {
    let q = Complex64::new(theta.cos(), theta.sin());
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    let rows = [
        [one, one, one, one],
        [one, i * q, -one, -i * q],
        [one, -one, one, -one],
        [one, -i * q, -one, i * q],
    ];
    let entries = Array2::from_shape_fn((4, 4), |(r, c)| rows[r][c]);
    ComplexHadamard { n: 4, entries }
}

/// Scales rows then columns by phases so the first row and column are 1.
pub fn dephase(h: &ComplexHadamard) -> ComplexHadamard {
    let n = h.n;
    let mut e = h.entries.clone();
    for r in 0..n {
        let phase = e[(r, 0)] / e[(r, 0)].norm();
        for c in 0..n {
            e[(r, c)] /= phase;
        }
    }
    for c in 0..n {
        let phase = e[(0, c)] / e[(0, c)].norm();
        for r in 0..n {
            e[(r, c)] /= phase;
        }
    }
    ComplexHadamard { n, entries: e }
}

/// The rank-1 magic model of a complex Hadamard matrix: P_ij projects onto
/// the entrywise ratio of rows i and j, xi_ij(r) = H_ir / H_jr. Rows and
/// columns sum to the identity because the ratio vectors along a row form a
/// rescaled copy of the orthogonal row system.
pub fn hadamard_model(
    h: &ComplexHadamard,
    config: &AnalysisConfig,
) -> Result<MagicModel, GeneratorError> {
    let rep = verify_hadamard(h, config.magic_tol);
    if !rep.pass {
        return Err(GeneratorError::BadHadamard {
            modulus: rep.max_modulus_defect,
            gram: rep.max_gram_defect,
        });
    }
    let n = h.n;
    let grid: Vec<Vec<Array2<Complex64>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let xi: Array1<Complex64> =
                        Array1::from_iter((0..n).map(|r| h.entries[(i, r)] / h.entries[(j, r)]));
                    linalg::rank1_projection(&xi)
                })
                .collect()
        })
        .collect();
    let fiber = Fiber::new(BigRational::from(BigInt::from(1)), grid)?;
    let model = MagicModel::new(n, n, vec![fiber])?;
    let v = verify_magic(&model, config.magic_tol);
    if !v.pass {
        return Err(GeneratorError::ConstructionIntegrity(format!(
            "hadamard model defects: projection {:e}, adjoint {:e}, row {:e}, col {:e}",
            v.max_projection_defect, v.max_adjoint_defect, v.max_row_defect, v.max_col_defect
        )));
    }
    Ok(model)
}

/// The profile graph of a Hadamard matrix: vertices are ordered pairs
/// (i, k) with i != k, and (i, k) -- (j, l) is an edge when the pair trace
/// tr(P_ij P_kl) is above the orbit threshold. Connectivity of this graph
/// is the double-transitivity criterion for the model's quantum group.
#[derive(Debug, Clone)]
pub struct ProfileGraph {
    pub graph: LabeledGraph,
    pub connected: bool,
}

pub fn profile_graph_of_model(m: &MagicModel, config: &AnalysisConfig) -> ProfileGraph {
    let n = m.n();
    let mut vertices: Vec<(usize, usize)> = Vec::new();
    for i in 1..=n {
        for k in 1..=n {
            if i != k {
                vertices.push((i, k));
            }
        }
    }
    let labels = vertices.iter().map(|(i, k)| format!("({i},{k})")).collect();
    let mut graph = LabeledGraph::new(labels);
    for (a, &(i, k)) in vertices.iter().enumerate() {
        for (b, &(j, l)) in vertices.iter().enumerate().skip(a + 1) {
            let forward = pair_trace(m, i, j, k, l).norm();
            let backward = pair_trace(m, j, i, l, k).norm();
            if forward.max(backward) > config.orbit_tol {
                graph.add_edge(a, b);
            }
        }
    }
    let connected = graph.is_connected();
    ProfileGraph { graph, connected }
}

pub fn profile_graph(
    h: &ComplexHadamard,
    config: &AnalysisConfig,
) -> Result<ProfileGraph, GeneratorError> {
    let model = hadamard_model(h, config)?;
    Ok(profile_graph_of_model(&model, config))
}

/// The Weyl operator basis of M_n: U_(a,b) = X^a Z^b with X the cyclic
/// shift and Z the modulation diag(w^j), w = exp(2 pi i / n). The n^2
/// operators are unitary and orthogonal in the trace form.
#[derive(Debug, Clone)]
pub struct WeylSystem {
    n: usize,
    matrices: Vec<Array2<Complex64>>,
}

impl WeylSystem {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Index (a, b) lives at a*n + b.
    pub fn matrices(&self) -> &[Array2<Complex64>] {
        &self.matrices
    }
}

pub fn weyl_system(n: usize) -> WeylSystem {
    assert!(n >= 2, "weyl_system needs n >= 2");
    let omega = std::f64::consts::TAU / n as f64;
    let x = Array2::from_shape_fn((n, n), |(i, j)| {
        if i == (j + 1) % n {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let z = Array2::from_shape_fn((n, n), |(i, j)| {
        if i == j {
            Complex64::new((omega * i as f64).cos(), (omega * i as f64).sin())
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let mut matrices = Vec::with_capacity(n * n);
    let mut xa = Array2::eye(n);
    for _a in 0..n {
        let mut u = xa.clone();
        for _b in 0..n {
            matrices.push(u.clone());
            u = u.dot(&z);
        }
        xa = xa.dot(&x);
    }
    WeylSystem { n, matrices }
}

/// Clifford group of prime degree p, modulo global phase: the closure of
/// the Fourier matrix, the quadratic phase gate, and the Weyl shifts under
/// multiplication. Its size is p^2 * |SL(2, p)| = p^2 (p^3 - p).
fn clifford_mod_phase(p: usize) -> Vec<Array2<Complex64>> {
    let expected = p * p * (p * p * p - p);
    let f = {
        let m = fourier_matrix(p);
        m.entries().mapv(|z| z / (p as f64).sqrt())
    };
    let quad = if p == 2 {
        // diag(1, i): the order-4 phase gate; diag(w^{j^2}) would only
        // reproduce Z at p = 2.
        Array2::from_shape_fn((2, 2), |(i, j)| match (i, j) {
            (0, 0) => Complex64::new(1.0, 0.0),
            (1, 1) => Complex64::new(0.0, 1.0),
            _ => Complex64::new(0.0, 0.0),
        })
    } else {
        let omega = std::f64::consts::TAU / p as f64;
        Array2::from_shape_fn((p, p), |(i, j)| {
            if i == j {
                let a = omega * ((i * i) % p) as f64;
                Complex64::new(a.cos(), a.sin())
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    };
    let ws = weyl_system(p);
    let x = ws.matrices()[p].clone(); // (a, b) = (1, 0)
    let z = ws.matrices()[1].clone(); // (a, b) = (0, 1)
    let canonical_key = |m: &Array2<Complex64>| -> Vec<(i64, i64)> {
        let phase = m
            .iter()
            .find(|z| z.norm() > 0.3)
            .map(|z| z / z.norm())
            .expect("unitary matrix has an entry of magnitude >= 1/sqrt(p)");
        m.iter()
            .map(|z| {
                let w = z / phase;
                ((w.re * 1e6).round() as i64, (w.im * 1e6).round() as i64)
            })
            .collect()
    };
    let generators = [f, quad, x, z];
    let mut seen = std::collections::HashSet::new();
    let mut elements: Vec<Array2<Complex64>> = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    let id: Array2<Complex64> = Array2::eye(p);
    seen.insert(canonical_key(&id));
    elements.push(id.clone());
    queue.push_back(id);
    while let Some(current) = queue.pop_front() {
        for g in &generators {
            let next = g.dot(&current);
            let key = canonical_key(&next);
            if seen.insert(key) {
                assert!(
                    elements.len() < 2 * expected,
                    "Clifford closure runaway at p = {p}; phase canonicalization broke"
                );
                elements.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    assert_eq!(
        elements.len(),
        expected,
        "Clifford group mod phase at p = {p} must have {expected} elements"
    );
    elements
}

/// The Weyl-operator magic model on N = n^2 indices, fibered over the
/// Clifford group of M_n: for the fiber of the Clifford element x, the
/// entry at (g, h) projects onto vec(U_g x U_h*), a rank-1 projection in
/// the K = n^2 trace-form space of matrices. Each fiber is magic because
/// {U_g x U_h*}_h is a trace-orthogonal basis; averaging the fibers over
/// the Clifford group makes the degree-2 traces match the unitary-group
/// Haar values, which needs the symplectic group to move every nonzero
/// Weyl index to every other -- true exactly when n is prime, hence the
/// restriction. n = 2 and 3 are supported; larger primes would need
/// gigabytes for the fiber list.
pub fn weyl_model(n: usize, config: &AnalysisConfig) -> Result<MagicModel, GeneratorError> {
    if !(n == 2 || n == 3) {
        return Err(GeneratorError::UnsupportedWeylBase { n });
    }
    let big_n = n * n;
    let ws = weyl_system(n);
    let cliff = clifford_mod_phase(n);
    let weight = BigRational::new(BigInt::from(1), BigInt::from(cliff.len()));
    let mut fibers = Vec::with_capacity(cliff.len());
    for x in &cliff {
        let grid: Vec<Vec<Array2<Complex64>>> = (0..big_n)
            .map(|g| {
                let ug_x = ws.matrices()[g].dot(x);
                (0..big_n)
                    .map(|h| {
                        let m = ug_x.dot(&linalg::adjoint(&ws.matrices()[h]));
                        let v: Array1<Complex64> = Array1::from_iter(m.iter().copied());
                        linalg::rank1_projection(&v)
                    })
                    .collect()
            })
            .collect();
        fibers.push(Fiber::new(weight.clone(), grid)?);
    }
    let model = MagicModel::new(big_n, big_n, fibers)?;
    let v = verify_magic(&model, config.magic_tol);
    if !v.pass {
        return Err(GeneratorError::ConstructionIntegrity(format!(
            "weyl model defects: projection {:e}, adjoint {:e}, row {:e}, col {:e}",
            v.max_projection_defect, v.max_adjoint_defect, v.max_row_defect, v.max_col_defect
        )));
    }
    Ok(model)
}

/// Grid layout of the minimal three-point model: six letters a..f placed so
/// each row and column carries every letter exactly once in rank-2 sums.
const S3_GRID: [[(usize, usize); 3]; 3] = [
    [(0, 1), (2, 3), (4, 5)],
    [(2, 5), (0, 4), (1, 3)],
    [(4, 3), (1, 5), (0, 2)],
];

/// The minimal doubly flat model on 3 points: K = 6, every entry a rank-2
/// projection P = letter + letter built from six orthonormal vectors.
pub fn s3_minimal_model(basis: &[Array1<Complex64>]) -> Result<MagicModel, GeneratorError> {
    if basis.len() != 6 || basis.iter().any(|v| v.len() != 6) {
        return Err(GeneratorError::NonOrthonormal(format!(
            "expected 6 vectors of length 6, got {} vectors",
            basis.len()
        )));
    }
    for a in 0..6 {
        for b in 0..6 {
            let mut inner = Complex64::new(0.0, 0.0);
            for r in 0..6 {
                inner += basis[a][r].conj() * basis[b][r];
            }
            let target = if a == b {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            if (inner - target).norm() > 1e-9 {
                return Err(GeneratorError::NonOrthonormal(format!(
                    "<v{a}, v{b}> = {inner} deviates from {target}"
                )));
            }
        }
    }
    let letters: Vec<Array2<Complex64>> = basis.iter().map(linalg::rank1_projection).collect();
    let grid: Vec<Vec<Array2<Complex64>>> = S3_GRID
        .iter()
        .map(|row| {
            row.iter()
                .map(|&(x, y)| &letters[x] + &letters[y])
                .collect()
        })
        .collect();
    let fiber = Fiber::new(BigRational::from(BigInt::from(1)), grid)?;
    let model = MagicModel::new(3, 6, vec![fiber])?;
    let v = verify_magic(&model, 1e-10);
    if !v.pass {
        return Err(GeneratorError::ConstructionIntegrity(format!(
            "three-point model defects: projection {:e}, row {:e}",
            v.max_projection_defect, v.max_row_defect
        )));
    }
    Ok(model)
}

/// Same model over the orthonormal basis given by the columns of a seeded
/// random unitary.
pub fn s3_minimal_model_seeded(seed: u64) -> Result<MagicModel, GeneratorError> {
    let u = linalg::random_unitary(6, seed);
    let basis: Vec<Array1<Complex64>> = (0..6)
        .map(|c| Array1::from_iter((0..6).map(|r| u[(r, c)])))
        .collect();
    s3_minimal_model(&basis)
}

/// The standard coordinate basis of C^6.
pub fn standard_s3_basis() -> Vec<Array1<Complex64>> {
    (0..6)
        .map(|i| {
            Array1::from_shape_fn(6, |r| {
                if r == i {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
        })
        .collect()
}

/// Per-word-length maximum deviation between the model's trace functional
/// and the group's exact Haar integral.
#[derive(Debug, Clone, serde::Serialize)]
pub struct StationaryReport {
    pub max_k: usize,
    pub per_k_max_deviation: Vec<f64>,
    pub pass: bool,
}

/// Compares the model integral of every coordinate word of length <= max_k
/// with the exact group average. This is finite-word evidence of
/// stationarity, not a proof.
pub fn check_stationary(
    m: &MagicModel,
    g: &PermutationGroup,
    max_k: usize,
    tol: f64,
) -> Result<StationaryReport, GeneratorError> {
    if m.n() != g.degree() {
        return Err(GeneratorError::StationaryDegreeMismatch {
            model_n: m.n(),
            group_n: g.degree(),
        });
    }
    let n = m.n();
    let mut per_k = Vec::with_capacity(max_k);
    for k in 1..=max_k {
        let mut tuples: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..k {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    (1..=n).map(move |x| {
                        let mut e = t.clone();
                        e.push(x);
                        e
                    })
                })
                .collect();
        }
        let mut worst = 0.0f64;
        for i in &tuples {
            for j in &tuples {
                let model_val = m.word_trace(i, j)?;
                let group_val = integrate_group(g, i, j)
                    .expect("tuples enumerated in range")
                    .to_f64()
                    .expect("small rational fits in f64");
                worst = worst.max((model_val - Complex64::new(group_val, 0.0)).norm());
            }
        }
        per_k.push(worst);
    }
    Ok(StationaryReport {
        max_k,
        per_k_max_deviation: per_k.clone(),
        pass: per_k.iter().all(|d| *d <= tol),
    })
}

/// The Hadamard matrices every test sweep runs over: Fourier matrices up to
/// size 8 and a generic point of the deformed 4 x 4 family.
pub fn bundled_hadamards() -> Vec<(String, ComplexHadamard)> {
    let mut out: Vec<(String, ComplexHadamard)> = (2..=8)
        .map(|n| (format!("F{n}"), fourier_matrix(n)))
        .collect();
    out.push(("F4(0.7)".to_string(), f4_deformed(0.7)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{check_double_flat, flatness_profile};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn fourier_small_cases() {
        let f2 = fourier_matrix(2);
        assert!((f2.entries()[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((f2.entries()[(1, 1)] - c(-1.0, 0.0)).norm() < 1e-15);
        let f4 = fourier_matrix(4);
        let row1: Vec<Complex64> = (0..4).map(|k| f4.entries()[(1, k)]).collect();
        let expect = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        for (got, want) in row1.iter().zip(expect.iter()) {
            assert!((got - want).norm() < 1e-12);
        }
        for n in 1..=8 {
            let rep = verify_hadamard(&fourier_matrix(n), 1e-12);
            assert!(rep.pass, "F{n}: {rep:?}");
        }
    }

    #[test]
    fn hadamard_verification_rejects_bad_input() {
        let ones = ComplexHadamard::from_entries(Array2::from_elem((2, 2), c(1.0, 0.0))).unwrap();
        let rep = verify_hadamard(&ones, 1e-9);
        assert!(!rep.pass);
        assert!(rep.max_gram_defect > 1.0);
        let mut doubled = fourier_matrix(4).entries().clone();
        doubled[(2, 2)] *= 2.0;
        let bad = ComplexHadamard::from_entries(doubled).unwrap();
        let rep = verify_hadamard(&bad, 1e-9);
        assert!(!rep.pass);
        assert!(rep.max_modulus_defect > 0.5);
    }

    #[test]
    fn deformed_family_is_hadamard_for_all_angles() {
        for theta in [0.0, 0.3, 0.7, 1.0, std::f64::consts::PI, 5.0] {
            let rep = verify_hadamard(&f4_deformed(theta), 1e-12);
            assert!(rep.pass, "theta = {theta}: {rep:?}");
        }
        // theta = 0 recovers the Fourier matrix.
        let f4 = fourier_matrix(4);
        let d0 = f4_deformed(0.0);
        for i in 0..4 {
            for j in 0..4 {
                assert!((f4.entries()[(i, j)] - d0.entries()[(i, j)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn dephasing_normalizes_first_row_and_column() {
        let mut e = fourier_matrix(3).entries().clone();
        for r in 0..3 {
            for s in 0..3 {
                let angle = 0.7 * (r as f64) - 1.3 * (s as f64);
                e[(r, s)] *= c(angle.cos(), angle.sin());
            }
        }
        let scrambled = ComplexHadamard::from_entries(e).unwrap();
        let d = dephase(&scrambled);
        for t in 0..3 {
            assert!((d.entries()[(0, t)] - c(1.0, 0.0)).norm() < 1e-12);
            assert!((d.entries()[(t, 0)] - c(1.0, 0.0)).norm() < 1e-12);
        }
        assert!(verify_hadamard(&d, 1e-12).pass);
    }

    #[test]
    fn fourier2_model_matches_hand_computation() {
        let cfg = AnalysisConfig::default();
        let m = hadamard_model(&fourier_matrix(2), &cfg).unwrap();
        // P_11 projects onto (1, 1), P_12 onto (1, -1).
        let p11 = m.fibers()[0].entry(0, 0);
        let p12 = m.fibers()[0].entry(0, 1);
        for r in 0..2 {
            for s in 0..2 {
                assert!((p11[(r, s)] - c(0.5, 0.0)).norm() < 1e-15);
                let want = if r == s { 0.5 } else { -0.5 };
                assert!((p12[(r, s)] - c(want, 0.0)).norm() < 1e-15);
            }
        }
        let flat = flatness_profile(&m, 1e-9).unwrap();
        assert!(flat.is_flat);
        assert_eq!(flat.common_rank, Some(1));
    }

    #[test]
    fn hadamard_models_verify_for_all_bundled_inputs() {
        let cfg = AnalysisConfig::default();
        for (name, h) in bundled_hadamards() {
            let m = hadamard_model(&h, &cfg).unwrap_or_else(|e| panic!("{name}: {e}"));
            let flat = flatness_profile(&m, 1e-9).unwrap();
            assert!(flat.is_flat, "{name}");
            assert_eq!(flat.common_rank, Some(1), "{name}");
            assert!(flat.max_trace_deviation < 1e-10, "{name}");
        }
    }

    #[test]
    fn fourier_profile_graphs_split_into_difference_classes() {
        let cfg = AnalysisConfig::default();
        for n in [3usize, 4, 5] {
            let p = profile_graph(&fourier_matrix(n), &cfg).unwrap();
            // (i,k) -- (j,l) iff i - k = j - l mod n: one complete component
            // per nonzero difference.
            assert_eq!(p.graph.components().len(), n - 1, "F{n}");
            assert_eq!(p.connected, n == 2 || n - 1 == 1, "F{n}");
        }
        let p2 = profile_graph(&fourier_matrix(2), &cfg).unwrap();
        assert!(p2.connected);
    }

    #[test]
    fn generic_deformation_merges_two_classes() {
        let cfg = AnalysisConfig::default();
        let p = profile_graph(&f4_deformed(0.7), &cfg).unwrap();
        // The generic deformation joins the odd difference classes but the
        // difference-2 class stays separate: two components, still not
        // connected.
        assert_eq!(p.graph.components().len(), 2);
        assert!(!p.connected);
    }

    #[test]
    fn weyl_system_is_trace_orthogonal() {
        for n in [2usize, 3, 4] {
            let ws = weyl_system(n);
            assert_eq!(ws.matrices().len(), n * n);
            let id = linalg::identity(n);
            for (a, u) in ws.matrices().iter().enumerate() {
                assert!(
                    linalg::frobenius_distance(&linalg::adjoint(u).dot(u), &id) < 1e-12,
                    "U_{a} not unitary"
                );
                for (b, v) in ws.matrices().iter().enumerate() {
                    let t = linalg::trace(&linalg::adjoint(v).dot(u));
                    let want = if a == b { n as f64 } else { 0.0 };
                    assert!((t - c(want, 0.0)).norm() < 1e-12, "tr(U_{b}* U_{a})");
                }
            }
        }
    }

    #[test]
    fn clifford_closures_have_the_expected_sizes() {
        assert_eq!(clifford_mod_phase(2).len(), 24);
        assert_eq!(clifford_mod_phase(3).len(), 216);
    }

    #[test]
    fn weyl2_model_is_doubly_flat() {
        let cfg = AnalysisConfig::default();
        let m = weyl_model(2, &cfg).unwrap();
        assert_eq!(m.n(), 4);
        assert_eq!(m.kdim(), 4);
        assert_eq!(m.fibers().len(), 24);
        let flat = flatness_profile(&m, 1e-9).unwrap();
        assert_eq!(flat.common_rank, Some(1));
        let rep = check_double_flat(&m, 1e-9);
        assert!(rep.pass, "{rep:?}");
        // Off-diagonal value 1/(4*3).
        let t = pair_trace(&m, 1, 1, 2, 2);
        assert!((t - c(1.0 / 12.0, 0.0)).norm() < 1e-12, "{t}");
    }

    #[test]
    fn weyl_base_restriction() {
        let cfg = AnalysisConfig::default();
        assert!(matches!(
            weyl_model(4, &cfg),
            Err(GeneratorError::UnsupportedWeylBase { n: 4 })
        ));
        assert!(matches!(
            weyl_model(1, &cfg),
            Err(GeneratorError::UnsupportedWeylBase { n: 1 })
        ));
    }

    #[test]
    fn s3_standard_basis_gives_diagonal_entries() {
        let m = s3_minimal_model(&standard_s3_basis()).unwrap();
        assert_eq!(m.n(), 3);
        assert_eq!(m.kdim(), 6);
        let v = verify_magic(&m, 0.0);
        assert!(v.pass, "{v:?}");
        // Entry (1,1) = a + b projects onto coordinates 1, 2.
        let p = m.fibers()[0].entry(0, 0);
        for r in 0..6 {
            let want = if r < 2 { 1.0 } else { 0.0 };
            assert!((p[(r, r)] - c(want, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn s3_model_traces_for_random_bases() {
        for seed in [1u64, 2] {
            let m = s3_minimal_model_seeded(seed).unwrap();
            let flat = flatness_profile(&m, 1e-9).unwrap();
            assert!(flat.is_flat);
            assert_eq!(flat.common_rank, Some(2));
            assert!(flat.max_trace_deviation < 1e-12);
            // tr(P_11 P_22) = tr((a+b)(a+e))/6 = tr(a)/6 = 1/6.
            let t = pair_trace(&m, 1, 1, 2, 2);
            assert!((t - c(1.0 / 6.0, 0.0)).norm() < 1e-12);
            let rep = check_double_flat(&m, 1e-9);
            assert!(rep.pass, "{rep:?}");
        }
    }

    #[test]
    fn s3_model_rejects_non_orthonormal_input() {
        let mut basis = standard_s3_basis();
        basis[1] = basis[0].clone();
        assert!(matches!(
            s3_minimal_model(&basis),
            Err(GeneratorError::NonOrthonormal(_))
        ));
        assert!(matches!(
            s3_minimal_model(&basis[..3]),
            Err(GeneratorError::NonOrthonormal(_))
        ));
    }

    #[test]
    fn s3_model_is_stationary_and_fourier3_is_not() {
        let cfg = AnalysisConfig::default();
        let s3 = PermutationGroup::symmetric(3).unwrap();
        let m = s3_minimal_model_seeded(11).unwrap();
        let rep = check_stationary(&m, &s3, 3, 1e-9).unwrap();
        assert!(rep.pass, "{rep:?}");
        let fm = hadamard_model(&fourier_matrix(3), &cfg).unwrap();
        let rep = check_stationary(&fm, &s3, 2, 1e-9).unwrap();
        assert!(!rep.pass);
        assert!(rep.per_k_max_deviation[0] < 1e-9, "degree 1 agrees");
        assert!(rep.per_k_max_deviation[1] > 1e-3, "degree 2 differs");
    }

    #[test]
    fn group_model_stationarity_is_exact() {
        let s3 = PermutationGroup::symmetric(3).unwrap();
        let m = crate::permgroup::group_model(&s3);
        let rep = check_stationary(&m, &s3, 3, 0.0).unwrap();
        assert!(rep.pass, "{rep:?}");
        let z3 = PermutationGroup::cyclic(3).unwrap();
        assert!(matches!(
            check_stationary(&m, &PermutationGroup::cyclic(4).unwrap(), 2, 1e-9),
            Err(GeneratorError::StationaryDegreeMismatch { .. })
        ));
        // The S_3 model is not stationary for the smaller group Z_3.
        let rep = check_stationary(&m, &z3, 2, 1e-9).unwrap();
        assert!(!rep.pass);
    }
}
