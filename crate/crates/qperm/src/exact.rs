//! Exact dense linear algebra over big integers.
//!
//! Gram matrices here have integer entries, and their inverses are needed
//! exactly, so inversion runs in the fraction-free (Bareiss) form of
//! Gauss-Jordan elimination: every intermediate entry is a minor of the
//! original matrix, every division is exact, and no per-operation gcd is
//! paid. On the augmented system [A | I] the sweep terminates with d*I on
//! the left and d*A^{-1} on the right, d being det(A) up to the sign of the
//! row swaps.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Exact inverse scaled by a common denominator.
pub(crate) struct ScaledInverse {
    /// Integer matrix R with R / scale = A^{-1}.
    pub scaled: Vec<Vec<BigInt>>,
    /// Common scale; equals det(A) up to row-swap sign, never zero.
    pub scale: BigInt,
}

/// Fraction-free Gauss-Jordan inverse. Returns `None` when the matrix is
/// singular.
pub(crate) fn invert(a: &[Vec<BigInt>]) -> Option<ScaledInverse> {
    let m = a.len();
    assert!(m > 0 && a.iter().all(|r| r.len() == m), "square matrix");
    // Augment with the identity.
    let mut w: Vec<Vec<BigInt>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    let mut prev = BigInt::one();
    for col in 0..m {
        // Pivot: smallest nonzero magnitude in this column at or below the
        // diagonal keeps the intermediate minors small.
        let pivot_row = (col..m)
            .filter(|&r| !w[r][col].is_zero())
            .min_by_key(|&r| w[r][col].magnitude().clone())?;
        w.swap(col, pivot_row);
        let pivot = w[col][col].clone();
        for i in 0..m {
            if i == col {
                continue;
            }
            let factor = w[i][col].clone();
            for j in 0..2 * m {
                let num = &pivot * &w[i][j] - &factor * &w[col][j];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "fraction-free division must be exact");
                w[i][j] = q;
            }
        }
        prev = pivot;
    }
    // Left block is now prev * I except that earlier pivot rows were never
    // rescaled by later steps' own row; renormalize each row so the left
    // block is exactly prev * I before reading off the inverse.
    let mut scaled = vec![vec![BigInt::zero(); m]; m];
    for i in 0..m {
        let d = w[i][i].clone();
        debug_assert!(!d.is_zero());
        for j in 0..m {
            // Row i of the right block represents row i of A^{-1} scaled by
            // the row's own diagonal d; rescale to the common denominator.
            let num = &w[i][m + j] * &prev;
            let (q, r) = num.div_rem(&d);
            debug_assert!(r.is_zero(), "row renormalization must be exact");
            scaled[i][j] = q;
        }
    }
    Some(ScaledInverse {
        scaled,
        scale: prev,
    })
}

/// Multiplies two integer matrices; used by invariant checks.
pub(crate) fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let (n, m) = (a.len(), b[0].len());
    let inner = b.len();
    let mut out = vec![vec![BigInt::zero(); m]; n];
    for i in 0..n {
        for l in 0..inner {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                let prod = &a[i][l] * &b[l][j];
                out[i][j] += prod;
            }
        }
    }
    out
}

pub(crate) fn is_scaled_identity(a: &[Vec<BigInt>], scale: &BigInt) -> bool {
    a.iter().enumerate().all(|(i, row)| {
        row.iter()
            .enumerate()
            .all(|(j, x)| if i == j { x == scale } else { x.is_zero() })
    })
}
