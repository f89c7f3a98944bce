//! Dense complex linear algebra for the model analyzers.
//!
//! Everything here works on `Array2<Complex64>` and stays O(m^3) with small
//! constants; the matrices in this crate top out around 125x125 (transfer
//! matrices) and 9x9 (fiber blocks), so a careful Jacobi eigensolver beats
//! pulling in a LAPACK binding. All randomness is seeded explicitly.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub(crate) type CMat = Array2<Complex64>;
pub(crate) type CVec = Array1<Complex64>;

pub(crate) fn identity(dim: usize) -> CMat {
    Array2::eye(dim)
}

pub(crate) fn adjoint(a: &CMat) -> CMat {
    a.t().mapv(|z| z.conj())
}

pub(crate) fn frobenius_norm(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn frobenius_distance(a: &CMat, b: &CMat) -> f64 {
    debug_assert_eq!(a.dim(), b.dim());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

pub(crate) fn trace(a: &CMat) -> Complex64 {
    a.diag().sum()
}

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations,
/// ascending. The input is symmetrized first so tiny Hermiticity defects
/// from upstream float work cannot stall convergence; callers that care
/// about the defect measure it themselves.
pub(crate) fn hermitian_eigenvalues(a: &CMat) -> Vec<f64> {
    let m = a.nrows();
    assert_eq!(m, a.ncols(), "hermitian_eigenvalues needs a square matrix");
    if m == 0 {
        return Vec::new();
    }
    let mut w = (a + &adjoint(a)).mapv(|z| z * 0.5);
    let scale = frobenius_norm(&w).max(1.0);
    let stop = 1e-14 * scale;
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..m {
            for q in (p + 1)..m {
                off += w[(p, q)].norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= stop {
            break;
        }
        for p in 0..m {
            for q in (p + 1)..m {
                let zpq = w[(p, q)];
                let mag = zpq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                let alpha = w[(p, p)].re;
                let beta = w[(q, q)].re;
                let phase = zpq / mag;
                // Zero w[(p,q)]: t solves t^2 - 2*tau*t - 1 = 0, smaller root.
                let tau = (beta - alpha) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let sw = phase * s;
                // Column update: [col_p, col_q] <- [col_p*c + col_q*conj(sw),
                //                                   col_q*c - col_p*sw].
                for r in 0..m {
                    let xp = w[(r, p)];
                    let xq = w[(r, q)];
                    w[(r, p)] = xp * c + xq * sw.conj();
                    w[(r, q)] = xq * c - xp * sw;
                }
                // Row update with the adjoint rotation.
                for r in 0..m {
                    let xp = w[(p, r)];
                    let xq = w[(q, r)];
                    w[(p, r)] = xp * c + xq * sw;
                    w[(q, r)] = xq * c - xp * sw.conj();
                }
                debug_assert!(w[(p, q)].norm() <= 1e-10 * scale);
            }
        }
    }
    let mut eig: Vec<f64> = w.diag().iter().map(|z| z.re).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eig
}

/// Singular values, descending, via the eigenvalues of A*A.
pub(crate) fn singular_values(a: &CMat) -> Vec<f64> {
    let gram = adjoint(a).dot(a);
    let mut sv: Vec<f64> = hermitian_eigenvalues(&gram)
        .into_iter()
        .map(|lambda| lambda.max(0.0).sqrt())
        .collect();
    sv.reverse();
    sv
}

/// Power-iteration estimate of the spectral radius. This is a lower
/// estimate in exact arithmetic; transfer matrices always carry the
/// eigenvalue 1 (constant row sums), so the estimate is sharp there and
/// any excess over 1 signals corrupted entries.
pub(crate) fn spectral_radius_estimate(a: &CMat, iters: usize, seed: u64) -> f64 {
    let m = a.nrows();
    assert_eq!(m, a.ncols());
    if m == 0 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: CVec = Array1::from_iter((0..m).map(|_| gaussian_complex(&mut rng)));
    let mut norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return 0.0;
    }
    v.mapv_inplace(|z| z / norm);
    let mut ratio = 0.0;
    for _ in 0..iters {
        let w = a.dot(&v);
        norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm <= 1e-300 {
            return 0.0;
        }
        ratio = norm;
        v = w.mapv(|z| z / norm);
    }
    ratio
}

fn uniform_open01(rng: &mut ChaCha8Rng) -> f64 {
    // 53 random bits, shifted into (0, 1]; the +1 keeps log() finite.
    (((rng.next_u64() >> 11) + 1) as f64) / (1u64 << 53) as f64
}

pub(crate) fn gaussian_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    let u1 = uniform_open01(rng);
    let u2 = uniform_open01(rng);
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = std::f64::consts::TAU * u2;
    Complex64::new(r * theta.cos(), r * theta.sin()) / 2.0f64.sqrt()
}

/// Haar-ish random unitary: Gaussian matrix, then twice-iterated modified
/// Gram-Schmidt on the columns. Deterministic in the seed.
pub(crate) fn random_unitary(dim: usize, seed: u64) -> CMat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Array2::from_shape_fn((dim, dim), |_| gaussian_complex(&mut rng));
    for _pass in 0..2 {
        for j in 0..dim {
            for i in 0..j {
                let mut proj = Complex64::new(0.0, 0.0);
                for r in 0..dim {
                    proj += g[(r, i)].conj() * g[(r, j)];
                }
                for r in 0..dim {
                    let gi = g[(r, i)];
                    g[(r, j)] -= proj * gi;
                }
            }
            let norm = (0..dim).map(|r| g[(r, j)].norm_sqr()).sum::<f64>().sqrt();
            assert!(norm > 1e-12, "Gram-Schmidt degenerated; bad seed stream");
            for r in 0..dim {
                g[(r, j)] /= norm;
            }
        }
    }
    g
}

/// Rank-1 projection onto a (not necessarily normalized) nonzero vector.
pub(crate) fn rank1_projection(v: &CVec) -> CMat {
    let norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    assert!(norm_sq > 1e-300, "projection onto the zero vector");
    let dim = v.len();
    Array2::from_shape_fn((dim, dim), |(i, j)| v[i] * v[j].conj() / norm_sq)
}
