//! Set partitions of `{1, ..., k}`: enumeration, joins, kernels, and the
//! delta function that drives the Weingarten sums.
//!
//! Partitions are kept in canonical form: blocks sorted by least element,
//! elements ascending inside each block. The enumeration order is fixed and
//! documented because Gram/Weingarten matrices are indexed by it: restricted
//! growth strings in reverse lexicographic order, which lists the discrete
//! partition `{1}{2}...{k}` first and the one-block partition last.

use std::fmt;

use thiserror::Error;

/// Largest ground-set size accepted by the enumeration routines.
///
/// `enumerate_partitions(12)` materializes Bell(12) = 4,213,597 partitions,
/// which is the practical ceiling for holding the full list in memory.
pub const MAX_PARTITION_K: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("ground-set size {0} outside 1..={MAX_PARTITION_K}")]
    SizeOutOfRange(usize),
    #[error("partitions live on different ground sets: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("tuple is empty")]
    EmptyTuple,
    #[error("tuple length {got} does not match ground-set size {want}")]
    TupleLength { got: usize, want: usize },
    #[error("blocks do not form a partition of 1..={k}: {reason}")]
    InvalidBlocks { k: usize, reason: String },
}

/// A set partition of `{1, ..., k}` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    k: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Builds a partition from blocks over `{1, ..., k}`, canonicalizing the
    /// order. The blocks must be nonempty, disjoint, and cover the ground set.
    pub fn from_blocks(k: usize, blocks: &[Vec<usize>]) -> Result<Self, PartitionError> {
        if k == 0 {
            return Err(PartitionError::SizeOutOfRange(0));
        }
        let mut seen = vec![false; k + 1];
        let mut count = 0usize;
        for b in blocks {
            if b.is_empty() {
                return Err(PartitionError::InvalidBlocks {
                    k,
                    reason: "empty block".into(),
                });
            }
            for &x in b {
                if x == 0 || x > k {
                    return Err(PartitionError::InvalidBlocks {
                        k,
                        reason: format!("element {x} out of range"),
                    });
                }
                if seen[x] {
                    return Err(PartitionError::InvalidBlocks {
                        k,
                        reason: format!("element {x} appears twice"),
                    });
                }
                seen[x] = true;
                count += 1;
            }
        }
        if count != k {
            return Err(PartitionError::InvalidBlocks {
                k,
                reason: format!("{count} elements cover a ground set of {k}"),
            });
        }
        let mut blocks: Vec<Vec<usize>> = blocks.to_vec();
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(SetPartition { k, blocks })
    }

    /// Builds a partition from a restricted growth string: `labels[p]` is the
    /// block label of point `p + 1`, labels starting at 0 in first-occurrence
    /// order.
    pub fn from_rgs(labels: &[usize]) -> Result<Self, PartitionError> {
        if labels.is_empty() {
            return Err(PartitionError::EmptyTuple);
        }
        let k = labels.len();
        let nblocks = labels.iter().max().unwrap() + 1;
        let mut blocks = vec![Vec::new(); nblocks];
        for (pos, &lab) in labels.iter().enumerate() {
            if lab >= nblocks {
                unreachable!();
            }
            blocks[lab].push(pos + 1);
        }
        // A valid RGS opens block j before block j+1, so blocks are already
        // ordered by least element; from_blocks revalidates anyway.
        Self::from_blocks(k, &blocks)
    }

    /// The restricted growth string of this partition.
    pub fn rgs(&self) -> Vec<usize> {
        let mut labels = vec![0usize; self.k];
        for (lab, b) in self.blocks.iter().enumerate() {
            for &x in b {
                labels[x - 1] = lab;
            }
        }
        labels
    }

    /// Ground-set size.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Blocks in canonical order.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Number of blocks.
    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// The discrete partition `{1}{2}...{k}`.
    pub fn discrete(k: usize) -> Result<Self, PartitionError> {
        Self::from_blocks(k, &(1..=k).map(|x| vec![x]).collect::<Vec<_>>())
    }

    /// The one-block partition `{1,...,k}`.
    pub fn full(k: usize) -> Result<Self, PartitionError> {
        Self::from_blocks(k, &[(1..=k).collect::<Vec<_>>()])
    }

    /// Whether two sorted blocks interleave as `a < b < c < d` with
    /// `a, c` in one block and `b, d` in the other.
    fn blocks_cross(b1: &[usize], b2: &[usize]) -> bool {
        // Merge the two sorted blocks and collapse runs of equal labels; a
        // crossing is exactly an alternation of length >= 4.
        let (mut i, mut j) = (0usize, 0usize);
        let mut runs = 0usize;
        let mut last = 2u8;
        while i < b1.len() || j < b2.len() {
            let take1 = match (b1.get(i), b2.get(j)) {
                (Some(&x), Some(&y)) => x < y,
                (Some(_), None) => true,
                _ => false,
            };
            let lab = if take1 { 0u8 } else { 1u8 };
            if take1 {
                i += 1;
            } else {
                j += 1;
            }
            if lab != last {
                runs += 1;
                last = lab;
                if runs >= 4 {
                    return true;
                }
            }
        }
        false
    }

    /// True when no two blocks cross.
    pub fn is_noncrossing(&self) -> bool {
        for (a, b1) in self.blocks.iter().enumerate() {
            if b1.len() < 2 {
                continue;
            }
            for b2 in &self.blocks[a + 1..] {
                if b2.len() >= 2 && Self::blocks_cross(b1, b2) {
                    return false;
                }
            }
        }
        true
    }

    /// The join: finest partition refined by neither argument, i.e. the
    /// transitive closure of the union of the two block relations.
    pub fn join(&self, other: &SetPartition) -> Result<SetPartition, PartitionError> {
        if self.k != other.k {
            return Err(PartitionError::SizeMismatch(self.k, other.k));
        }
        let mut uf = UnionFind::new(self.k);
        for p in [self, other] {
            for b in &p.blocks {
                for w in b.windows(2) {
                    uf.union(w[0] - 1, w[1] - 1);
                }
            }
        }
        uf.into_partition(self.k)
    }

    /// True when `self` refines `other`: every block of `self` sits inside a
    /// block of `other`.
    pub fn refines(&self, other: &SetPartition) -> Result<bool, PartitionError> {
        if self.k != other.k {
            return Err(PartitionError::SizeMismatch(self.k, other.k));
        }
        let labels = other.rgs();
        Ok(self
            .blocks
            .iter()
            .all(|b| b.iter().all(|&x| labels[x - 1] == labels[b[0] - 1])))
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            write!(f, "{{")?;
            for (i, x) in b.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    fn into_partition(mut self, k: usize) -> Result<SetPartition, PartitionError> {
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for x in 0..k {
            let r = self.find(x);
            groups.entry(r).or_default().push(x + 1);
        }
        let blocks: Vec<Vec<usize>> = groups.into_values().collect();
        SetPartition::from_blocks(k, &blocks)
    }
}

/// All set partitions of `{1, ..., k}` in the canonical order: restricted
/// growth strings, reverse lexicographic. The discrete partition comes first,
/// the one-block partition last; the list has Bell(k) entries.
pub fn enumerate_partitions(k: usize) -> Result<Vec<SetPartition>, PartitionError> {
    if k == 0 || k > MAX_PARTITION_K {
        return Err(PartitionError::SizeOutOfRange(k));
    }
    let mut out = Vec::new();
    let mut s = vec![0usize; k];
    enumerate_rgs(&mut s, 1, 0, &mut out);
    out.reverse();
    Ok(out)
}

fn enumerate_rgs(s: &mut Vec<usize>, pos: usize, max_used: usize, out: &mut Vec<SetPartition>) {
    if pos == s.len() {
        out.push(SetPartition::from_rgs(s).expect("generated RGS is valid"));
        return;
    }
    for v in 0..=max_used + 1 {
        s[pos] = v;
        enumerate_rgs(s, pos + 1, max_used.max(v), out);
    }
}

/// The noncrossing partitions of `{1, ..., k}`, as the order-preserving
/// sublist of `enumerate_partitions(k)`; the list has Catalan(k) entries.
pub fn enumerate_noncrossing(k: usize) -> Result<Vec<SetPartition>, PartitionError> {
    Ok(enumerate_partitions(k)?
        .into_iter()
        .filter(|p| p.is_noncrossing())
        .collect())
}

/// The kernel of a tuple: positions grouped by equal values.
pub fn kernel(t: &[usize]) -> Result<SetPartition, PartitionError> {
    if t.is_empty() {
        return Err(PartitionError::EmptyTuple);
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (pos, &v) in t.iter().enumerate() {
        groups.entry(v).or_default().push(pos + 1);
    }
    let mut blocks: Vec<Vec<usize>> = groups.into_values().collect();
    blocks.sort_by_key(|b| b[0]);
    SetPartition::from_blocks(t.len(), &blocks)
}

/// The delta function: 1 exactly when the tuple is constant on every block of
/// the partition, equivalently when the partition refines `kernel(t)`.
pub fn delta(p: &SetPartition, t: &[usize]) -> Result<bool, PartitionError> {
    if t.len() != p.k() {
        return Err(PartitionError::TupleLength {
            got: t.len(),
            want: p.k(),
        });
    }
    Ok(p.blocks()
        .iter()
        .all(|b| b.iter().all(|&x| t[x - 1] == t[b[0] - 1])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    /// Bell numbers via the Bell triangle, independent of the enumerator.
    fn bell_numbers(up_to: usize) -> Vec<u64> {
        let mut rows: Vec<Vec<u64>> = vec![vec![1]];
        for _ in 1..up_to {
            let prev = rows.last().unwrap();
            let mut row = vec![*prev.last().unwrap()];
            for &x in prev {
                let last = *row.last().unwrap();
                row.push(last + x);
            }
            rows.push(row);
        }
        // Last entry of row m is Bell(m + 1): 1, 2, 5, 15, 52, ...
        rows.iter().map(|r| *r.last().unwrap()).collect()
    }

    /// Catalan numbers via the convolution recurrence.
    fn catalan_numbers(up_to: usize) -> Vec<u64> {
        let mut c = vec![1u64];
        for n in 0..up_to {
            let next: u64 = (0..=n).map(|i| c[i] * c[n - i]).sum();
            c.push(next);
        }
        c[1..].to_vec()
    }

    #[test]
    fn canonical_form_sorts_blocks_and_elements() {
        let p = SetPartition::from_blocks(4, &[vec![4, 2], vec![3, 1]]).unwrap();
        assert_eq!(p.blocks(), &[vec![1, 3], vec![2, 4]]);
        assert_eq!(p.to_string(), "{1,3}{2,4}");
    }

    #[test]
    fn from_blocks_rejects_non_partitions() {
        assert!(SetPartition::from_blocks(3, &[vec![1, 2]]).is_err());
        assert!(SetPartition::from_blocks(3, &[vec![1, 2], vec![2, 3]]).is_err());
        assert!(SetPartition::from_blocks(3, &[vec![1, 2, 3, 4]]).is_err());
        assert!(SetPartition::from_blocks(3, &[vec![1, 2, 3], vec![]]).is_err());
        assert!(SetPartition::from_blocks(0, &[]).is_err());
    }

    #[test]
    fn enumeration_counts_match_bell_triangle() {
        let bell = bell_numbers(10);
        for k in 1..=10 {
            let parts = enumerate_partitions(k).unwrap();
            assert_eq!(parts.len() as u64, bell[k - 1], "k = {k}");
            // Canonical forms are pairwise distinct.
            let set: BTreeSet<_> = parts.iter().cloned().collect();
            assert_eq!(set.len(), parts.len());
        }
    }

    #[test]
    fn noncrossing_counts_match_catalan_recurrence() {
        let catalan = catalan_numbers(10);
        for k in 1..=10 {
            let nc = enumerate_noncrossing(k).unwrap();
            assert_eq!(nc.len() as u64, catalan[k - 1], "k = {k}");
        }
    }

    #[test]
    fn partitions_of_three_are_all_noncrossing() {
        let all = enumerate_partitions(3).unwrap();
        let nc = enumerate_noncrossing(3).unwrap();
        assert_eq!(all, nc);
    }

    #[test]
    fn enumeration_order_puts_discrete_first_and_full_last() {
        for k in 1..=6 {
            let parts = enumerate_partitions(k).unwrap();
            assert_eq!(parts[0], SetPartition::discrete(k).unwrap());
            assert_eq!(*parts.last().unwrap(), SetPartition::full(k).unwrap());
        }
        // k = 2 in full: discrete then one-block.
        let parts = enumerate_partitions(2).unwrap();
        assert_eq!(parts[0].to_string(), "{1}{2}");
        assert_eq!(parts[1].to_string(), "{1,2}");
    }

    #[test]
    fn enumeration_matches_bruteforce_label_canonicalization() {
        // Independent route to P_4: canonicalize every labeling of 4 points
        // by 4 labels and dedupe.
        let mut seen = BTreeSet::new();
        for code in 0..(4usize.pow(4)) {
            let t: Vec<usize> = (0..4).map(|p| (code >> (2 * p)) & 0b11).collect();
            seen.insert(kernel(&t.iter().map(|x| x + 1).collect::<Vec<_>>()).unwrap());
        }
        let parts = enumerate_partitions(4).unwrap();
        assert_eq!(seen.len(), 15);
        assert_eq!(parts.len(), 15);
        assert_eq!(seen, parts.iter().cloned().collect());
    }

    #[test]
    fn crossing_detection_on_known_cases() {
        let crossing = SetPartition::from_blocks(4, &[vec![1, 3], vec![2, 4]]).unwrap();
        assert!(!crossing.is_noncrossing());
        let nested = SetPartition::from_blocks(4, &[vec![1, 4], vec![2, 3]]).unwrap();
        assert!(nested.is_noncrossing());
        let sided = SetPartition::from_blocks(4, &[vec![1, 2], vec![3, 4]]).unwrap();
        assert!(sided.is_noncrossing());
        let with_singleton = SetPartition::from_blocks(4, &[vec![1, 3], vec![2], vec![4]]).unwrap();
        assert!(with_singleton.is_noncrossing());
        let six = SetPartition::from_blocks(6, &[vec![1, 4, 6], vec![2, 5], vec![3]]).unwrap();
        assert!(!six.is_noncrossing());
    }

    #[test]
    fn join_of_interleaved_pairs() {
        let p = SetPartition::from_blocks(4, &[vec![1, 3], vec![2], vec![4]]).unwrap();
        let q = SetPartition::from_blocks(4, &[vec![1], vec![2, 4], vec![3]]).unwrap();
        let j = p.join(&q).unwrap();
        assert_eq!(j, SetPartition::from_blocks(4, &[vec![1, 3], vec![2, 4]]).unwrap());
    }

    #[test]
    fn join_is_commutative_associative_idempotent_up_to_k5() {
        for k in 1..=5 {
            let parts = enumerate_partitions(k).unwrap();
            let discrete = SetPartition::discrete(k).unwrap();
            let full = SetPartition::full(k).unwrap();
            for p in &parts {
                assert_eq!(p.join(p).unwrap(), *p);
                assert_eq!(p.join(&discrete).unwrap(), *p);
                assert_eq!(p.join(&full).unwrap(), full);
                for q in &parts {
                    assert_eq!(p.join(q).unwrap(), q.join(p).unwrap());
                }
            }
            // Associativity on a subsampled triple set for k = 5, full below.
            let step = if k == 5 { 7 } else { 1 };
            for (a, p) in parts.iter().enumerate().step_by(step) {
                for q in parts.iter().skip(a % 2).step_by(step) {
                    for r in parts.iter().step_by(step) {
                        assert_eq!(
                            p.join(q).unwrap().join(r).unwrap(),
                            p.join(&q.join(r).unwrap()).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn join_size_mismatch_is_an_error() {
        let p = SetPartition::discrete(3).unwrap();
        let q = SetPartition::discrete(4).unwrap();
        assert!(matches!(p.join(&q), Err(PartitionError::SizeMismatch(3, 4))));
    }

    #[test]
    fn kernel_groups_positions_by_value() {
        let p = kernel(&[1, 5, 1]).unwrap();
        assert_eq!(p, SetPartition::from_blocks(3, &[vec![1, 3], vec![2]]).unwrap());
        let q = kernel(&[2, 2, 2]).unwrap();
        assert_eq!(q, SetPartition::full(3).unwrap());
        assert!(matches!(kernel(&[]), Err(PartitionError::EmptyTuple)));
    }

    #[test]
    fn delta_matches_join_kernel_identity_exhaustively() {
        // delta(p, t) = 1  iff  join(p, kernel(t)) = kernel(t), for every
        // partition of up to 4 points and every tuple over {1, 2, 3}.
        for k in 1..=4 {
            let parts = enumerate_partitions(k).unwrap();
            let mut tuple = vec![1usize; k];
            loop {
                let ker = kernel(&tuple).unwrap();
                for p in &parts {
                    let lhs = delta(p, &tuple).unwrap();
                    let rhs = p.join(&ker).unwrap() == ker;
                    assert_eq!(lhs, rhs, "p = {p}, t = {tuple:?}");
                    assert_eq!(lhs, p.refines(&ker).unwrap());
                }
                // next tuple over {1,2,3}
                let mut pos = 0;
                loop {
                    if pos == k {
                        break;
                    }
                    tuple[pos] += 1;
                    if tuple[pos] <= 3 {
                        break;
                    }
                    tuple[pos] = 1;
                    pos += 1;
                }
                if pos == k {
                    break;
                }
            }
        }
    }

    #[test]
    fn delta_length_mismatch_is_an_error() {
        let p = SetPartition::discrete(3).unwrap();
        assert!(delta(&p, &[1, 2]).is_err());
    }

    #[test]
    fn enumeration_size_bounds() {
        assert!(enumerate_partitions(0).is_err());
        assert!(enumerate_partitions(MAX_PARTITION_K + 1).is_err());
    }

    #[test]
    fn rgs_round_trips() {
        for k in 1..=6 {
            for p in enumerate_partitions(k).unwrap() {
                assert_eq!(SetPartition::from_rgs(&p.rgs()).unwrap(), p);
            }
        }
    }
}
