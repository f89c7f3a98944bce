//! Finite permutation groups: the exact classical oracle.
//!
//! Everything here is integer arithmetic on complete element lists, so the
//! answers are exact and fast at desk scale (order capped at 10,000). The
//! group's Haar integral is a literal average, k-transitivity is a literal
//! orbit computation, and fixed-space dimensions come from Burnside's lemma
//! rather than tuple enumeration: counting fixed points of each element
//! costs |G| * n work where enumerating n^k tuples would explode.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::models::{Fiber, MagicModel};

/// Generated groups larger than this are refused; the oracle targets small
/// verification groups, not computational group theory.
pub const GROUP_ORDER_CAP: usize = 10_000;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("not a bijection of 1..={n}: {reason}")]
    NotABijection { n: usize, reason: String },
    #[error("group order exceeds the cap of {cap} elements")]
    TooLarge { cap: usize },
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("permutation degree {got} does not match group degree {want}")]
    DegreeMismatch { got: usize, want: usize },
    #[error("cannot parse cycle notation: {0}")]
    BadCycles(String),
    #[error("k = {k} out of range 1..={max}")]
    KOutOfRange { k: usize, max: usize },
    #[error("tuple entry {value} outside 1..={n}")]
    EntryOutOfRange { value: usize, n: usize },
    #[error("tuples must be nonempty and of equal length")]
    BadTuples,
    #[error("dihedral groups need n >= 3, got {n}")]
    DihedralTooSmall { n: usize },
    #[error("counter overflow at degree {n}, k = {k}; reduce k")]
    CountOverflow { n: usize, k: usize },
}

/// A permutation of {1,..,n}, stored 0-based; all public arguments and
/// return values are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// From a 1-based images array: images[x-1] is where x goes.
    pub fn from_images(images: &[usize]) -> Result<Self, GroupError> {
        let n = images.len();
        if n == 0 {
            return Err(GroupError::ZeroDegree);
        }
        let mut seen = vec![false; n];
        for &im in images {
            if im == 0 || im > n {
                return Err(GroupError::NotABijection {
                    n,
                    reason: format!("image {im} outside 1..={n}"),
                });
            }
            if seen[im - 1] {
                return Err(GroupError::NotABijection {
                    n,
                    reason: format!("image {im} repeated"),
                });
            }
            seen[im - 1] = true;
        }
        Ok(Permutation {
            images: images.iter().map(|&x| x - 1).collect(),
        })
    }

    /// Parses cycle notation like "(1 2 3)(4 5)"; commas also separate
    /// entries. The empty string and "()" denote the identity. Points not
    /// mentioned are fixed.
    pub fn from_cycles(n: usize, text: &str) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::ZeroDegree);
        }
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Ok(Permutation { images });
        }
        let mut rest = trimmed;
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(GroupError::BadCycles(format!(
                    "expected '(' at {rest:?}"
                )));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| GroupError::BadCycles("unbalanced parenthesis".into()))?;
            let inner = &rest[1..close];
            rest = rest[close + 1..].trim_start();
            let points: Vec<usize> = inner
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| GroupError::BadCycles(format!("bad point {s:?}")))
                })
                .collect::<Result<_, _>>()?;
            if points.is_empty() {
                continue;
            }
            for &p in &points {
                if p == 0 || p > n {
                    return Err(GroupError::BadCycles(format!("point {p} outside 1..={n}")));
                }
                if used[p - 1] {
                    return Err(GroupError::BadCycles(format!("point {p} appears twice")));
                }
                used[p - 1] = true;
            }
            for w in 0..points.len() {
                let from = points[w] - 1;
                let to = points[(w + 1) % points.len()] - 1;
                images[from] = to;
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of a 1-based point.
    pub fn apply(&self, point: usize) -> usize {
        self.images[point - 1] + 1
    }

    /// (self . other)(x) = self(other(x)).
    pub fn compose(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0usize; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        Permutation { images: inv }
    }

    /// 1-based images array.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x + 1).collect()
    }

    pub fn num_fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|(x, &y)| *x == y).count()
    }
}

impl std::fmt::Display for Permutation {
    /// Canonical cycle notation; fixed points omitted, identity is "()".
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut wrote = false;
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                continue;
            }
            write!(f, "(")?;
            let mut x = start;
            let mut first = true;
            loop {
                seen[x] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", x + 1)?;
                first = false;
                x = self.images[x];
                if x == start {
                    break;
                }
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// A complete, closed list of permutations of {1,..,n}.
#[derive(Debug, Clone)]
pub struct PermutationGroup {
    n: usize,
    elements: Vec<Permutation>,
}

impl PermutationGroup {
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::ZeroDegree);
        }
        if n == 1 {
            return generate_group(1, &[]);
        }
        let transposition = Permutation::from_cycles(n, "(1 2)")?;
        let cycle_text = format!(
            "({})",
            (1..=n).map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
        );
        let cycle = Permutation::from_cycles(n, &cycle_text)?;
        generate_group(n, &[transposition, cycle])
    }

    pub fn alternating(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::ZeroDegree);
        }
        if n <= 2 {
            return generate_group(n, &[]);
        }
        let three_cycle = Permutation::from_cycles(n, "(1 2 3)")?;
        if n == 3 {
            return generate_group(n, &[three_cycle]);
        }
        // A long even cycle: the full n-cycle for odd n, an (n-1)-cycle
        // starting at 2 for even n.
        let pts: Vec<usize> = if n % 2 == 1 {
            (1..=n).collect()
        } else {
            (2..=n).collect()
        };
        let text = format!(
            "({})",
            pts.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
        );
        let long = Permutation::from_cycles(n, &text)?;
        generate_group(n, &[three_cycle, long])
    }

    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::ZeroDegree);
        }
        if n == 1 {
            return generate_group(1, &[]);
        }
        let text = format!(
            "({})",
            (1..=n).map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
        );
        generate_group(n, &[Permutation::from_cycles(n, &text)?])
    }

    /// Symmetries of the n-gon on vertices 1..n: order 2n.
    pub fn dihedral(n: usize) -> Result<Self, GroupError> {
        if n < 3 {
            return Err(GroupError::DihedralTooSmall { n });
        }
        let text = format!(
            "({})",
            (1..=n).map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
        );
        let rotation = Permutation::from_cycles(n, &text)?;
        let reflection =
            Permutation::from_images(&(1..=n).map(|x| n + 1 - x).collect::<Vec<_>>())?;
        generate_group(n, &[rotation, reflection])
    }
}

/// Closure of the generators under composition, breadth-first. Errors when
/// a generator has the wrong degree or the closure passes the order cap.
pub fn generate_group(n: usize, generators: &[Permutation]) -> Result<PermutationGroup, GroupError> {
    generate_group_capped(n, generators, GROUP_ORDER_CAP)
}

pub fn generate_group_capped(
    n: usize,
    generators: &[Permutation],
    cap: usize,
) -> Result<PermutationGroup, GroupError> {
    if n == 0 {
        return Err(GroupError::ZeroDegree);
    }
    for g in generators {
        if g.degree() != n {
            return Err(GroupError::DegreeMismatch {
                got: g.degree(),
                want: n,
            });
        }
    }
    let identity = Permutation::identity(n);
    let mut seen: HashSet<Permutation> = HashSet::new();
    let mut queue: VecDeque<Permutation> = VecDeque::new();
    seen.insert(identity.clone());
    queue.push_back(identity);
    while let Some(current) = queue.pop_front() {
        for g in generators {
            let next = g.compose(&current);
            if !seen.contains(&next) {
                if seen.len() >= cap {
                    return Err(GroupError::TooLarge { cap });
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    // BFS over left-multiplication reaches every product of generators;
    // inverses come for free in a finite group (g^-1 = g^(order-1)).
    let mut elements: Vec<Permutation> = seen.into_iter().collect();
    elements.sort();
    Ok(PermutationGroup { n, elements })
}

fn check_tuples(g: &PermutationGroup, i: &[usize], j: &[usize]) -> Result<(), GroupError> {
    if i.is_empty() || i.len() != j.len() {
        return Err(GroupError::BadTuples);
    }
    for &v in i.iter().chain(j.iter()) {
        if v == 0 || v > g.n {
            return Err(GroupError::EntryOutOfRange { value: v, n: g.n });
        }
    }
    Ok(())
}

/// Exact Haar integral of u_{i1 j1} ... u_{ik jk} over the group:
/// |{sigma : sigma(j_s) = i_s for all s}| / |G|.
pub fn integrate_group(
    g: &PermutationGroup,
    i: &[usize],
    j: &[usize],
) -> Result<BigRational, GroupError> {
    check_tuples(g, i, j)?;
    let count = g
        .elements
        .iter()
        .filter(|sigma| i.iter().zip(j.iter()).all(|(&a, &b)| sigma.apply(b) == a))
        .count();
    Ok(BigRational::new(BigInt::from(count), BigInt::from(g.order())))
}

/// Whether the action on distinct-entry k-tuples has a single orbit: the
/// orbit of the base tuple (1,..,k) is computed by applying every element
/// and compared against the falling-factorial count.
pub fn is_k_transitive(g: &PermutationGroup, k: usize) -> Result<bool, GroupError> {
    if k == 0 || k > g.n {
        return Err(GroupError::KOutOfRange { k, max: g.n });
    }
    let base: Vec<usize> = (1..=k).collect();
    let orbit: HashSet<Vec<usize>> = g
        .elements
        .iter()
        .map(|sigma| base.iter().map(|&x| sigma.apply(x)).collect())
        .collect();
    let mut total: usize = 1;
    for t in 0..k {
        total = total.saturating_mul(g.n - t);
    }
    Ok(orbit.len() == total)
}

/// Number of orbits of G on {1,..,n}^k, by Burnside's lemma:
/// (1/|G|) sum_sigma fix(sigma)^k.
pub fn dim_fix(g: &PermutationGroup, k: usize) -> Result<u64, GroupError> {
    if k == 0 {
        return Err(GroupError::KOutOfRange { k, max: usize::MAX });
    }
    let mut total: u128 = 0;
    for sigma in &g.elements {
        let f = sigma.num_fixed_points() as u128;
        let mut pow: u128 = 1;
        for _ in 0..k {
            pow = pow
                .checked_mul(f)
                .ok_or(GroupError::CountOverflow { n: g.n, k })?;
        }
        total = total
            .checked_add(pow)
            .ok_or(GroupError::CountOverflow { n: g.n, k })?;
    }
    let order = g.order() as u128;
    debug_assert_eq!(total % order, 0, "Burnside sum must divide by the order");
    u64::try_from(total / order).map_err(|_| GroupError::CountOverflow { n: g.n, k })
}

/// The group as a magic model: one fiber per element with uniform weight,
/// 1 x 1 grid entries P_ij = [sigma(j) = i]. Exact by construction.
pub fn group_model(g: &PermutationGroup) -> MagicModel {
    use ndarray::Array2;
    use num_complex::Complex64;
    let n = g.n;
    let weight = BigRational::new(BigInt::from(1), BigInt::from(g.order()));
    let fibers: Vec<Fiber> = g
        .elements
        .iter()
        .map(|sigma| {
            let grid: Vec<Vec<Array2<Complex64>>> = (1..=n)
                .map(|i| {
                    (1..=n)
                        .map(|j| {
                            let hit = sigma.apply(j) == i;
                            Array2::from_elem(
                                (1, 1),
                                Complex64::new(if hit { 1.0 } else { 0.0 }, 0.0),
                            )
                        })
                        .collect()
                })
                .collect();
            Fiber::new(weight.clone(), grid).expect("0/1 grid entries are finite")
        })
        .collect();
    MagicModel::new(n, 1, fibers).expect("group model is magic by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::verify_magic;
    use crate::weingarten::integrate_sn_closed;
    use num_traits::{One, Zero};

    fn q(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn cycle_parser_round_trips() {
        let p = Permutation::from_cycles(5, "(1 2 3)(4 5)").unwrap();
        assert_eq!(p.to_string(), "(1 2 3)(4 5)");
        assert_eq!(p.images(), vec![2, 3, 1, 5, 4]);
        let with_commas = Permutation::from_cycles(5, "(1,2,3)(4,5)").unwrap();
        assert_eq!(p, with_commas);
        assert_eq!(Permutation::from_cycles(3, "").unwrap(), Permutation::identity(3));
        assert_eq!(Permutation::from_cycles(3, "()").unwrap(), Permutation::identity(3));
        assert_eq!(Permutation::identity(4).to_string(), "()");
    }

    #[test]
    fn cycle_parser_rejects_garbage() {
        assert!(Permutation::from_cycles(3, "(1 4)").is_err());
        assert!(Permutation::from_cycles(3, "(1 1)").is_err());
        assert!(Permutation::from_cycles(3, "(1 2)(2 3)").is_err());
        assert!(Permutation::from_cycles(3, "(1 2").is_err());
        assert!(Permutation::from_cycles(3, "1 2").is_err());
        assert!(Permutation::from_cycles(3, "(1 x)").is_err());
    }

    #[test]
    fn images_validation() {
        assert!(Permutation::from_images(&[2, 1, 3]).is_ok());
        assert!(Permutation::from_images(&[2, 2, 3]).is_err());
        assert!(Permutation::from_images(&[0, 1, 2]).is_err());
        assert!(Permutation::from_images(&[4, 1, 2]).is_err());
        assert!(Permutation::from_images(&[]).is_err());
    }

    #[test]
    fn composition_and_inverse_laws() {
        let a = Permutation::from_cycles(4, "(1 2 3 4)").unwrap();
        let b = Permutation::from_cycles(4, "(1 2)").unwrap();
        // (a.b)(x) = a(b(x)): b sends 1 to 2, a sends 2 to 3.
        assert_eq!(a.compose(&b).apply(1), 3);
        assert_eq!(a.compose(&a.inverse()), Permutation::identity(4));
        assert_eq!(a.inverse().compose(&a), Permutation::identity(4));
    }

    #[test]
    fn generation_examples() {
        let s3 = generate_group(
            3,
            &[
                Permutation::from_images(&[2, 1, 3]).unwrap(),
                Permutation::from_images(&[1, 3, 2]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(s3.order(), 6);
        let z4 = generate_group(4, &[Permutation::from_images(&[2, 3, 4, 1]).unwrap()]).unwrap();
        assert_eq!(z4.order(), 4);
        let trivial = generate_group(3, &[]).unwrap();
        assert_eq!(trivial.order(), 1);
    }

    #[test]
    fn generation_cap_is_enforced() {
        let gens = [
            Permutation::from_cycles(5, "(1 2)").unwrap(),
            Permutation::from_cycles(5, "(1 2 3 4 5)").unwrap(),
        ];
        assert!(matches!(
            generate_group_capped(5, &gens, 100),
            Err(GroupError::TooLarge { cap: 100 })
        ));
    }

    #[test]
    fn named_groups_have_the_right_orders() {
        assert_eq!(PermutationGroup::symmetric(4).unwrap().order(), 24);
        assert_eq!(PermutationGroup::symmetric(5).unwrap().order(), 120);
        assert_eq!(PermutationGroup::alternating(4).unwrap().order(), 12);
        assert_eq!(PermutationGroup::alternating(5).unwrap().order(), 60);
        assert_eq!(PermutationGroup::cyclic(4).unwrap().order(), 4);
        assert_eq!(PermutationGroup::dihedral(4).unwrap().order(), 8);
        assert_eq!(PermutationGroup::dihedral(5).unwrap().order(), 10);
        assert!(PermutationGroup::dihedral(2).is_err());
    }

    #[test]
    fn integrate_examples() {
        let s4 = PermutationGroup::symmetric(4).unwrap();
        assert_eq!(integrate_group(&s4, &[1, 2], &[3, 4]).unwrap(), q(1, 12));
        let trivial = generate_group(1, &[]).unwrap();
        assert_eq!(integrate_group(&trivial, &[1], &[1]).unwrap(), BigRational::one());
        let z4 = PermutationGroup::cyclic(4).unwrap();
        assert_eq!(integrate_group(&z4, &[1], &[2]).unwrap(), q(1, 4));
        assert!(matches!(
            integrate_group(&z4, &[5], &[1]),
            Err(GroupError::EntryOutOfRange { value: 5, n: 4 })
        ));
    }

    #[test]
    fn symmetric_group_average_matches_closed_form() {
        for n in 2..=5usize {
            let g = PermutationGroup::symmetric(n).unwrap();
            let tuples: Vec<Vec<usize>> = {
                let mut v = Vec::new();
                for a in 1..=n.min(3) {
                    for b in 1..=n.min(3) {
                        v.push(vec![a, b]);
                    }
                }
                v
            };
            for i in &tuples {
                for j in &tuples {
                    assert_eq!(
                        integrate_group(&g, i, j).unwrap(),
                        integrate_sn_closed(i, j, n).unwrap(),
                        "n={n}, i={i:?}, j={j:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn transitivity_examples() {
        let s4 = PermutationGroup::symmetric(4).unwrap();
        assert!(is_k_transitive(&s4, 4).unwrap());
        let z4 = PermutationGroup::cyclic(4).unwrap();
        assert!(is_k_transitive(&z4, 1).unwrap());
        assert!(!is_k_transitive(&z4, 2).unwrap());
        let a4 = PermutationGroup::alternating(4).unwrap();
        assert!(is_k_transitive(&a4, 2).unwrap());
        assert!(!is_k_transitive(&a4, 3).unwrap());
        assert!(matches!(
            is_k_transitive(&z4, 5),
            Err(GroupError::KOutOfRange { k: 5, max: 4 })
        ));
    }

    #[test]
    fn burnside_dimensions() {
        let s4 = PermutationGroup::symmetric(4).unwrap();
        assert_eq!(dim_fix(&s4, 3).unwrap(), 5);
        let s5 = PermutationGroup::symmetric(5).unwrap();
        assert_eq!(dim_fix(&s5, 4).unwrap(), 15);
        let trivial = generate_group(3, &[]).unwrap();
        assert_eq!(dim_fix(&trivial, 1).unwrap(), 3);
        let z4 = PermutationGroup::cyclic(4).unwrap();
        assert_eq!(dim_fix(&z4, 1).unwrap(), 1);
        assert_eq!(dim_fix(&z4, 2).unwrap(), 4);
        let d4 = PermutationGroup::dihedral(4).unwrap();
        assert_eq!(dim_fix(&d4, 2).unwrap(), 3);
        let a5 = PermutationGroup::alternating(5).unwrap();
        assert_eq!(dim_fix(&a5, 3).unwrap(), 5);
    }

    #[test]
    fn transitivity_iff_full_orbit_count_and_nonvanishing() {
        // The six equivalent k-transitivity readings, on a 2-transitive
        // and a non-2-transitive group side by side.
        let n = 4usize;
        let full = PermutationGroup::symmetric(n).unwrap();
        for (g, k, expect) in [
            (PermutationGroup::alternating(4).unwrap(), 2usize, true),
            (PermutationGroup::cyclic(4).unwrap(), 2usize, false),
        ] {
            assert_eq!(is_k_transitive(&g, k).unwrap(), expect);
            assert_eq!(dim_fix(&g, k).unwrap() == dim_fix(&full, k).unwrap(), expect);
            let mut all_equal = true;
            let mut all_nonzero = true;
            let target = q(1, (n * (n - 1)) as i64);
            for i1 in 1..=n {
                for i2 in 1..=n {
                    if i1 == i2 {
                        continue;
                    }
                    for j1 in 1..=n {
                        for j2 in 1..=n {
                            if j1 == j2 {
                                continue;
                            }
                            let v = integrate_group(&g, &[i1, i2], &[j1, j2]).unwrap();
                            all_equal &= v == target;
                            all_nonzero &= !v.is_zero();
                        }
                    }
                }
            }
            assert_eq!(all_equal, expect);
            assert_eq!(all_nonzero, expect);
        }
    }

    #[test]
    fn group_model_is_exactly_magic() {
        let z2 = PermutationGroup::cyclic(2).unwrap();
        let m = group_model(&z2);
        let v = verify_magic(&m, 0.0);
        assert!(v.pass, "{v:?}");
        assert_eq!(m.fibers().len(), 2);
        // One fiber is the identity grid, the other the flip.
        let diag: Vec<f64> = m
            .fibers()
            .iter()
            .map(|f| f.entry(0, 0)[(0, 0)].re)
            .collect();
        assert!(diag.contains(&1.0) && diag.contains(&0.0));
        let s3 = PermutationGroup::symmetric(3).unwrap();
        let m3 = group_model(&s3);
        assert!(verify_magic(&m3, 0.0).pass);
        assert_eq!(m3.fibers().len(), 6);
    }
}
