//! Exact Weingarten calculus for the symmetric group S_N and its free
//! analogue S_N^+.
//!
//! The Gram matrix of the partition vectors is G(p, q) = N^{|p v q|}, indexed
//! over all partitions of k points or over the noncrossing ones. Its exact
//! rational inverse, the Weingarten matrix, turns delta-function sums into
//! Haar-state moments of the coordinates u_ij:
//!
//! ```text
//! int u_{i1 j1} ... u_{ik jk} = sum_{p, q} delta_p(i) delta_q(j) W(p, q)
//! ```
//!
//! with the sum over all partitions for S_N and over noncrossing partitions
//! for S_N^+. For S_N there is also the closed form (N - b)!/N! when the two
//! tuples have the same kernel with b blocks, and 0 otherwise; the two routes
//! agree and are cross-checked in the test suites. Degree <= 3 moments agree
//! between S_N and S_N^+ because every partition of up to 3 points is
//! noncrossing.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact;
use crate::partitions::{
    delta, enumerate_noncrossing, enumerate_partitions, kernel, PartitionError, SetPartition,
};

/// Which lattice of partitions indexes the Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartitionFamily {
    /// Every set partition; Bell(k) of them. The S_N side.
    All,
    /// Noncrossing partitions only; Catalan(k) of them. The S_N^+ side.
    Noncrossing,
}

impl std::fmt::Display for PartitionFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PartitionFamily::All => write!(f, "all"),
            PartitionFamily::Noncrossing => write!(f, "noncrossing"),
        }
    }
}

#[derive(Debug, Error)]
pub enum WeingartenError {
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("gram matrix is singular for k={k}, n={n}, family={family}")]
    SingularGram {
        k: usize,
        n: usize,
        family: PartitionFamily,
    },
    #[error("n must be at least {min}, got {n}")]
    NTooSmall { n: usize, min: usize },
    #[error("tuple entry {value} outside 1..={n}")]
    EntryOutOfRange { value: usize, n: usize },
    #[error("tuples have different lengths: {i_len} vs {j_len}")]
    LengthMismatch { i_len: usize, j_len: usize },
}

/// Gram matrix of partition vectors at a given dimension.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    k: usize,
    n: usize,
    family: PartitionFamily,
    partitions: Vec<SetPartition>,
    entries: Vec<Vec<BigInt>>,
}

impl GramMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> PartitionFamily {
        self.family
    }

    /// Index order of the rows and columns.
    pub fn partitions(&self) -> &[SetPartition] {
        &self.partitions
    }

    pub fn entries(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.partitions.len()
    }
}

/// Exact inverse of a Gram matrix, with the integer form kept alongside the
/// reduced rationals so exact identities stay cheap to verify.
#[derive(Debug, Clone)]
pub struct WeingartenMatrix {
    k: usize,
    n: usize,
    family: PartitionFamily,
    partitions: Vec<SetPartition>,
    entries: Vec<Vec<BigRational>>,
    scaled_inverse: Vec<Vec<BigInt>>,
    scale: BigInt,
}

impl WeingartenMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> PartitionFamily {
        self.family
    }

    pub fn partitions(&self) -> &[SetPartition] {
        &self.partitions
    }

    /// Entries as reduced rationals; W * G = I exactly.
    pub fn entries(&self) -> &[Vec<BigRational>] {
        &self.entries
    }

    /// Integer matrix R with R = scale * W; scale is det(G) up to sign.
    pub fn scaled_inverse(&self) -> &[Vec<BigInt>] {
        &self.scaled_inverse
    }

    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    pub fn dim(&self) -> usize {
        self.partitions.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> &BigRational {
        &self.entries[row][col]
    }
}

fn family_partitions(k: usize, family: PartitionFamily) -> Result<Vec<SetPartition>, WeingartenError> {
    Ok(match family {
        PartitionFamily::All => enumerate_partitions(k)?,
        PartitionFamily::Noncrossing => enumerate_noncrossing(k)?,
    })
}

/// The Gram matrix G(p, q) = n^{|p v q|} over the chosen family, indexed in
/// enumeration order (discrete partition first).
pub fn gram(k: usize, n: usize, family: PartitionFamily) -> Result<GramMatrix, WeingartenError> {
    if n < 1 {
        return Err(WeingartenError::NTooSmall { n, min: 1 });
    }
    let partitions = family_partitions(k, family)?;
    let m = partitions.len();
    let n_big = BigInt::from(n);
    let mut entries = vec![vec![BigInt::zero(); m]; m];
    for a in 0..m {
        for b in a..m {
            let joined = partitions[a].join(&partitions[b])?;
            let e = n_big.pow(joined.num_blocks() as u32);
            entries[a][b] = e.clone();
            entries[b][a] = e;
        }
    }
    Ok(GramMatrix {
        k,
        n,
        family,
        partitions,
        entries,
    })
}

static WEINGARTEN_CACHE: Lazy<Mutex<HashMap<(usize, usize, PartitionFamily), Arc<WeingartenMatrix>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// The Weingarten matrix W = G^{-1}, exact. Results are cached per
/// (k, n, family) for the session; the cache is safe for concurrent use.
pub fn weingarten(
    k: usize,
    n: usize,
    family: PartitionFamily,
) -> Result<Arc<WeingartenMatrix>, WeingartenError> {
    if let Some(hit) = WEINGARTEN_CACHE.lock().unwrap().get(&(k, n, family)) {
        return Ok(Arc::clone(hit));
    }
    let g = gram(k, n, family)?;
    let inv = exact::invert(&g.entries).ok_or(WeingartenError::SingularGram { k, n, family })?;
    let m = g.dim();
    let mut entries = vec![vec![BigRational::zero(); m]; m];
    for i in 0..m {
        for j in 0..m {
            entries[i][j] = BigRational::new(inv.scaled[i][j].clone(), inv.scale.clone());
        }
    }
    let w = Arc::new(WeingartenMatrix {
        k,
        n,
        family,
        partitions: g.partitions,
        entries,
        scaled_inverse: inv.scaled,
        scale: inv.scale,
    });
    let mut cache = WEINGARTEN_CACHE.lock().unwrap();
    Ok(Arc::clone(cache.entry((k, n, family)).or_insert(w)))
}

fn validate_tuples(i: &[usize], j: &[usize], n: usize) -> Result<(), WeingartenError> {
    if i.is_empty() || j.is_empty() {
        return Err(WeingartenError::Partition(PartitionError::EmptyTuple));
    }
    if i.len() != j.len() {
        return Err(WeingartenError::LengthMismatch {
            i_len: i.len(),
            j_len: j.len(),
        });
    }
    for &v in i.iter().chain(j.iter()) {
        if v == 0 || v > n {
            return Err(WeingartenError::EntryOutOfRange { value: v, n });
        }
    }
    Ok(())
}

/// Haar moment over S_N in closed form: (n - b)!/n! when ker i = ker j with
/// b blocks, 0 otherwise. Tuples are 1-based with entries in 1..=n.
pub fn integrate_sn_closed(i: &[usize], j: &[usize], n: usize) -> Result<BigRational, WeingartenError> {
    if n < 1 {
        return Err(WeingartenError::NTooSmall { n, min: 1 });
    }
    validate_tuples(i, j, n)?;
    let ker_i = kernel(i)?;
    let ker_j = kernel(j)?;
    if ker_i != ker_j {
        return Ok(BigRational::zero());
    }
    let b = ker_i.num_blocks();
    // (n - b)!/n! = 1 / (n (n-1) ... (n-b+1)); entries in 1..=n force b <= n.
    let mut den = BigInt::one();
    for t in 0..b {
        den *= BigInt::from(n - t);
    }
    Ok(BigRational::new(BigInt::one(), den))
}

fn weingarten_sum(
    i: &[usize],
    j: &[usize],
    n: usize,
    family: PartitionFamily,
) -> Result<BigRational, WeingartenError> {
    validate_tuples(i, j, n)?;
    let k = i.len();
    let w = weingarten(k, n, family)?;
    let parts = w.partitions();
    let rows: Vec<usize> = (0..parts.len())
        .filter(|&a| delta(&parts[a], i).unwrap_or(false))
        .collect();
    let cols: Vec<usize> = (0..parts.len())
        .filter(|&b| delta(&parts[b], j).unwrap_or(false))
        .collect();
    let mut acc = BigRational::zero();
    for &a in &rows {
        for &b in &cols {
            acc += w.entry(a, b);
        }
    }
    Ok(acc)
}

/// Haar moment over S_N through the Weingarten sum; agrees exactly with
/// `integrate_sn_closed`.
pub fn integrate_sn_weingarten(
    i: &[usize],
    j: &[usize],
    n: usize,
) -> Result<BigRational, WeingartenError> {
    if n < 1 {
        return Err(WeingartenError::NTooSmall { n, min: 1 });
    }
    weingarten_sum(i, j, n, PartitionFamily::All)
}

/// Haar moment over the free quantum group S_N^+, n >= 4. The noncrossing
/// Gram matrix is invertible throughout that regime; below it the sum would
/// not represent the Haar state, so smaller n is rejected.
pub fn integrate_snplus(i: &[usize], j: &[usize], n: usize) -> Result<BigRational, WeingartenError> {
    if n < 4 {
        return Err(WeingartenError::NTooSmall { n, min: 4 });
    }
    weingarten_sum(i, j, n, PartitionFamily::Noncrossing)
}

/// The common value of degree-3 moments on distinct triples: 1/(n(n-1)(n-2)).
/// For n >= 4 this is the S_n^+ value on every pair of distinct triples,
/// which is the 3-transitivity statement; at n = 3 it is the classical one.
pub fn snplus_3transitive_value(n: usize) -> Result<BigRational, WeingartenError> {
    if n < 3 {
        return Err(WeingartenError::NTooSmall { n, min: 3 });
    }
    let den = BigInt::from(n) * BigInt::from(n - 1) * BigInt::from(n - 2);
    Ok(BigRational::new(BigInt::one(), den))
}

/// Recomputes the Gram matrix and checks R * G == scale * I in integers,
/// where R is the stored scaled inverse. This is the exact certificate that
/// the Weingarten matrix really is the inverse; it costs a full integer
/// matrix product, so it is a tool for test sweeps, not a per-call check.
pub fn verify_exact_inverse(w: &WeingartenMatrix) -> Result<bool, WeingartenError> {
    let g = gram(w.k(), w.n(), w.family())?;
    let prod = exact::mat_mul(w.scaled_inverse(), g.entries());
    Ok(exact::is_scaled_identity(&prod, w.scale()))
}

/// Renders a rational as "p/q" for reports.
pub fn rational_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
