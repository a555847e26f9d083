//! Hive patterns and the hive polytope constraint system.
//!
//! A hive of side `r` has one entry per lattice point `(i, j, k)` with `i + j + k = r`.
//! Entries are numbered row by row from the apex `(0, 0, r)`; row `s = i + j` lists its
//! entries left to right, i.e. by increasing `j`. The left edge (`j = 0`) carries the partial
//! sums of `nu`, the right edge (`i = 0`) those of `lambda`, and the bottom edge (`k = 0`)
//! continues from `|lambda|` at the right corner by the partial sums of `mu`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::polyhedra::HRepPolytope;
use crate::weights::{WeightError, WeightTriple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HiveError {
    #[error("|nu| = {nu} differs from |lambda| + |mu| = {expected}")]
    SizeMismatch { nu: u64, expected: u64 },
    #[error("hive side length must be at least 1")]
    ZeroRank,
    #[error("boundary value {0} does not fit in a 64-bit integer")]
    Overflow(u64),
    #[error("pattern has {got} entries, side {rank} needs {expected}")]
    EntryCount {
        rank: usize,
        got: usize,
        expected: usize,
    },
    #[error(transparent)]
    Weight(#[from] WeightError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HiveIndex {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl HiveIndex {
    pub fn new(i: usize, j: usize, k: usize) -> Self {
        Self { i, j, k }
    }

    pub fn rank(&self) -> usize {
        self.i + self.j + self.k
    }

    /// Position in the canonical variable order.
    pub fn position(&self) -> usize {
        let s = self.i + self.j;
        s * (s + 1) / 2 + self.j
    }
}

pub fn entry_count(rank: usize) -> usize {
    (rank + 1) * (rank + 2) / 2
}

pub fn interior_count(rank: usize) -> usize {
    if rank < 2 {
        0
    } else {
        (rank - 1) * (rank - 2) / 2
    }
}

/// All indices of a side-`rank` hive in canonical variable order.
pub fn indices(rank: usize) -> Vec<HiveIndex> {
    (0..=rank)
        .flat_map(|s| (0..=s).map(move |j| HiveIndex::new(s - j, j, rank - s)))
        .collect()
}

/// One rhombus inequality `sum(acute) <= sum(obtuse)`, stored as variable positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rhombus {
    pub acute: [usize; 2],
    pub obtuse: [usize; 2],
}

impl Rhombus {
    /// Dense row of `R` (`+1` on acute corners, `-1` on obtuse ones).
    pub fn row(&self, nvars: usize) -> Vec<i64> {
        let mut row = vec![0; nvars];
        for &a in &self.acute {
            row[a] += 1;
        }
        for &o in &self.obtuse {
            row[o] -= 1;
        }
        row
    }

    /// `sum(obtuse) - sum(acute)`, nonnegative on a hive.
    pub fn slack<T>(&self, h: &[T]) -> T
    where
        T: Clone + std::ops::Add<Output = T> + std::ops::Sub<Output = T>,
    {
        h[self.obtuse[0]].clone() + h[self.obtuse[1]].clone()
            - h[self.acute[0]].clone()
            - h[self.acute[1]].clone()
    }
}

/// The `3 r (r - 1) / 2` little rhombi; three per index with `i, j >= 1`.
pub fn rhombi(rank: usize) -> Vec<Rhombus> {
    let p = |i: usize, j: usize, k: usize| HiveIndex::new(i, j, k).position();
    let mut out = Vec::with_capacity(3 * rank * rank.saturating_sub(1) / 2);
    for idx in indices(rank) {
        let HiveIndex { i, j, k } = idx;
        if i == 0 || j == 0 {
            continue;
        }
        out.push(Rhombus {
            acute: [p(i, j - 1, k + 1), p(i - 1, j + 1, k)],
            obtuse: [p(i, j, k), p(i - 1, j, k + 1)],
        });
        out.push(Rhombus {
            acute: [p(i, j, k), p(i - 1, j - 1, k + 2)],
            obtuse: [p(i, j - 1, k + 1), p(i - 1, j, k + 1)],
        });
        out.push(Rhombus {
            acute: [p(i + 1, j - 1, k), p(i - 1, j, k + 1)],
            obtuse: [p(i, j, k), p(i, j - 1, k + 1)],
        });
    }
    out
}

/// Rows of `R` with `R h <= 0` on hives.
pub fn rhombus_constraints(rank: usize) -> Vec<Vec<i64>> {
    let n = entry_count(rank);
    rhombi(rank).iter().map(|r| r.row(n)).collect()
}

/// Boundary positions in `B` row order: apex, lambda edge, mu edge, nu edge.
pub fn boundary_positions(rank: usize) -> Vec<usize> {
    let p = |i: usize, j: usize, k: usize| HiveIndex::new(i, j, k).position();
    let mut out = vec![p(0, 0, rank)];
    out.extend((1..=rank).map(|s| p(0, s, rank - s)));
    out.extend((1..=rank).map(|t| p(t, rank - t, 0)));
    out.extend((1..=rank).map(|s| p(s, 0, rank - s)));
    out
}

/// Rows of `B` and the right-hand side `b(lambda, mu, nu)`.
pub fn boundary_constraints(triple: &WeightTriple) -> Result<(Vec<Vec<i64>>, Vec<i64>), HiveError> {
    let expected = triple.lambda().size() + triple.mu().size();
    if triple.nu().size() != expected {
        return Err(HiveError::SizeMismatch {
            nu: triple.nu().size(),
            expected,
        });
    }
    let rank = triple.parts();
    let n = entry_count(rank);
    let lam_size = triple.lambda().size();
    let mut rhs = vec![0u64];
    rhs.extend(triple.lambda().partial_sums());
    rhs.extend(triple.mu().partial_sums().into_iter().map(|s| lam_size + s));
    rhs.extend(triple.nu().partial_sums());
    let rhs = rhs
        .into_iter()
        .map(|v| i64::try_from(v).map_err(|_| HiveError::Overflow(v)))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = boundary_positions(rank)
        .into_iter()
        .map(|pos| {
            let mut row = vec![0; n];
            row[pos] = 1;
            row
        })
        .collect();
    Ok((rows, rhs))
}

/// `H = { h : B h = b, R h <= 0 }` for a weight triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HiveConstraintSystem {
    pub rank: usize,
    pub boundary: Vec<Vec<i64>>,
    pub rhombus: Vec<Vec<i64>>,
    pub rhs: Vec<i64>,
}

impl HiveConstraintSystem {
    pub fn nvars(&self) -> usize {
        entry_count(self.rank)
    }

    pub fn variable_order(&self) -> Vec<HiveIndex> {
        indices(self.rank)
    }

    pub fn to_polytope(&self) -> HRepPolytope {
        HRepPolytope::new(
            self.nvars(),
            self.boundary.clone(),
            self.rhs.clone(),
            self.rhombus.clone(),
            vec![0; self.rhombus.len()],
        )
        .expect("hive systems are well formed")
    }

    /// Whether `h` satisfies `B h = b` and `R h <= 0`.
    pub fn contains(&self, h: &[BigRational]) -> bool {
        let eval = |row: &[i64]| -> BigRational {
            row.iter()
                .zip(h)
                .filter(|(c, _)| **c != 0)
                .fold(BigRational::zero(), |acc, (c, v)| acc + v * BigInt::from(*c))
        };
        self.boundary
            .iter()
            .zip(&self.rhs)
            .all(|(row, b)| eval(row) == BigRational::from_integer(BigInt::from(*b)))
            && self.rhombus.iter().all(|row| !eval(row).is_positive())
    }
}

pub fn build_hive_polytope(triple: &WeightTriple) -> Result<HiveConstraintSystem, HiveError> {
    let (boundary, rhs) = boundary_constraints(triple)?;
    Ok(HiveConstraintSystem {
        rank: triple.parts(),
        boundary,
        rhombus: rhombus_constraints(triple.parts()),
        rhs,
    })
}

/// Homogenized hive matrix `M = [B 0; R I]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HiveMatrix {
    pub rank: usize,
    pub rows: Vec<Vec<i64>>,
    pub hive_columns: usize,
    pub slack_columns: usize,
}

impl HiveMatrix {
    pub fn for_rank(rank: usize) -> Self {
        let n = entry_count(rank);
        let boundary: Vec<Vec<i64>> = boundary_positions(rank)
            .into_iter()
            .map(|pos| {
                let mut row = vec![0; n];
                row[pos] = 1;
                row
            })
            .collect();
        Self::assemble(rank, &boundary, &rhombus_constraints(rank))
    }

    fn assemble(rank: usize, boundary: &[Vec<i64>], rhombus: &[Vec<i64>]) -> Self {
        let n = entry_count(rank);
        let q = rhombus.len();
        let mut rows = Vec::with_capacity(boundary.len() + q);
        for b in boundary {
            let mut row = b.clone();
            row.resize(n + q, 0);
            rows.push(row);
        }
        for (t, r) in rhombus.iter().enumerate() {
            let mut row = r.clone();
            row.resize(n + q, 0);
            row[n + t] = 1;
            rows.push(row);
        }
        Self {
            rank,
            rows,
            hive_columns: n,
            slack_columns: q,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.hive_columns + self.slack_columns
    }

    pub fn columns(&self) -> Vec<Vec<i64>> {
        (0..self.ncols())
            .map(|c| self.rows.iter().map(|r| r[c]).collect())
            .collect()
    }
}

/// Right-hand side of a g-hive polytope `{ x >= 0 : M x = b }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GHiveRhs {
    pub rank: usize,
    pub b: Vec<i64>,
}

impl GHiveRhs {
    pub fn new(rank: usize, b: Vec<i64>) -> Result<Self, HiveError> {
        let rows = 3 * rank + 1 + 3 * rank * rank.saturating_sub(1) / 2;
        if b.len() != rows {
            return Err(HiveError::EntryCount {
                rank,
                got: b.len(),
                expected: rows,
            });
        }
        Ok(Self { rank, b })
    }
}

/// `(M, [b; 0])`: the slack form of a hive system.
pub fn homogenize(sys: &HiveConstraintSystem) -> (HiveMatrix, GHiveRhs) {
    let m = HiveMatrix::assemble(sys.rank, &sys.boundary, &sys.rhombus);
    let mut b = sys.rhs.clone();
    b.resize(sys.rhs.len() + sys.rhombus.len(), 0);
    (m, GHiveRhs { rank: sys.rank, b })
}

/// The slack lift `h -> [h; -R h]`.
pub fn homogenized_point(sys: &HiveConstraintSystem, h: &[BigRational]) -> Vec<BigRational> {
    let mut out = h.to_vec();
    for row in &sys.rhombus {
        let v = row
            .iter()
            .zip(h)
            .fold(BigRational::zero(), |acc, (c, x)| acc + x * BigInt::from(*c));
        out.push(-v);
    }
    out
}

/// Checks `b(n lambda, n mu, n nu) = n b(lambda, mu, nu)` with `B`, `R` unchanged.
pub fn dilation_rhs_identity(triple: &WeightTriple, n: u64) -> Result<bool, HiveError> {
    let base = build_hive_polytope(triple)?;
    let dilated = build_hive_polytope(&triple.dilate(n)?)?;
    let scaled: Option<Vec<i64>> = base
        .rhs
        .iter()
        .map(|&v| i64::try_from(n).ok().and_then(|n| v.checked_mul(n)))
        .collect();
    Ok(dilated.boundary == base.boundary
        && dilated.rhombus == base.rhombus
        && scaled.as_deref() == Some(&dilated.rhs[..]))
}

/// A triangular array of rational entries in canonical variable order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HivePattern {
    rank: usize,
    entries: Vec<BigRational>,
}

impl HivePattern {
    pub fn new(rank: usize, entries: Vec<BigRational>) -> Result<Self, HiveError> {
        if rank == 0 {
            return Err(HiveError::ZeroRank);
        }
        if entries.len() != entry_count(rank) {
            return Err(HiveError::EntryCount {
                rank,
                got: entries.len(),
                expected: entry_count(rank),
            });
        }
        Ok(Self { rank, entries })
    }

    /// Builds a pattern from its displayed rows, apex first, each row left to right.
    pub fn from_rows(rows: &[&[i64]]) -> Result<Self, HiveError> {
        let rank = rows.len().checked_sub(1).ok_or(HiveError::ZeroRank)?;
        let entries: Vec<BigRational> = rows
            .iter()
            .flat_map(|r| r.iter())
            .map(|&v| BigRational::from_integer(BigInt::from(v)))
            .collect();
        if rows.iter().enumerate().any(|(s, r)| r.len() != s + 1) {
            return Err(HiveError::EntryCount {
                rank,
                got: entries.len(),
                expected: entry_count(rank),
            });
        }
        Self::new(rank, entries)
    }

    pub fn zero(rank: usize) -> Self {
        Self {
            rank,
            entries: vec![BigRational::zero(); entry_count(rank)],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn get(&self, idx: HiveIndex) -> &BigRational {
        &self.entries[idx.position()]
    }

    pub fn set(&mut self, idx: HiveIndex, v: BigRational) {
        self.entries[idx.position()] = v;
    }

    /// Left-right mirror image, exchanging `i` and `j`.
    pub fn mirrored(&self) -> Self {
        let mut out = self.clone();
        for idx in indices(self.rank) {
            out.set(
                HiveIndex::new(idx.j, idx.i, idx.k),
                self.get(idx).clone(),
            );
        }
        out
    }
}

impl fmt::Display for HivePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in 0..=self.rank {
            let pad = " ".repeat(2 * (self.rank - s));
            let row: Vec<String> = (0..=s)
                .map(|j| format!("{:>3}", self.get(HiveIndex::new(s - j, j, self.rank - s))))
                .collect();
            writeln!(f, "{pad}{}", row.join(" "))?;
        }
        Ok(())
    }
}

pub fn is_hive_pattern(p: &HivePattern) -> bool {
    rhombi(p.rank)
        .iter()
        .all(|r| !r.slack(&p.entries).is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::HighestWeight;

    fn hw(p: &[u64]) -> HighestWeight {
        HighestWeight::new(p.to_vec()).unwrap()
    }

    fn displayed_hive() -> HivePattern {
        HivePattern::from_rows(&[
            &[0],
            &[5, 8],
            &[8, 12, 13],
            &[11, 15, 17, 18],
            &[12, 16, 18, 20, 20],
        ])
        .unwrap()
    }

    #[test]
    fn rhombus_counts() {
        assert_eq!(rhombus_constraints(1).len(), 0);
        assert_eq!(rhombus_constraints(2).len(), 3);
        assert_eq!(rhombus_constraints(5).len(), 30);
    }

    #[test]
    fn rhombus_rows_are_little_rhombi() {
        for rank in 1..7 {
            let idx = indices(rank);
            for r in rhombi(rank) {
                let pts: Vec<HiveIndex> = r
                    .acute
                    .iter()
                    .chain(&r.obtuse)
                    .map(|&p| idx[p])
                    .collect();
                let mut all = r.acute.to_vec();
                all.extend(r.obtuse);
                all.sort_unstable();
                all.dedup();
                assert_eq!(all.len(), 4);
                let dist = |a: HiveIndex, b: HiveIndex| {
                    a.i.abs_diff(b.i) + a.j.abs_diff(b.j) + a.k.abs_diff(b.k)
                };
                // acute corners are at distance 2 steps, obtuse corners adjacent
                assert_eq!(dist(pts[2], pts[3]), 2);
                assert_eq!(dist(pts[0], pts[1]), 4);
                for a in 0..2 {
                    for o in 2..4 {
                        assert_eq!(dist(pts[a], pts[o]), 2);
                    }
                }
            }
        }
    }

    #[test]
    fn variable_order_is_row_major_from_apex() {
        let idx = indices(2);
        assert_eq!(idx[0], HiveIndex::new(0, 0, 2));
        assert_eq!(idx[1], HiveIndex::new(1, 0, 1));
        assert_eq!(idx[2], HiveIndex::new(0, 1, 1));
        assert_eq!(idx[5], HiveIndex::new(0, 2, 0));
        for (p, i) in idx.iter().enumerate() {
            assert_eq!(i.position(), p);
            assert_eq!(i.rank(), 2);
        }
    }

    #[test]
    fn boundary_partial_sums() {
        let t = WeightTriple::new(hw(&[1, 1, 0]), hw(&[1, 0, 0]), hw(&[2, 1, 0]));
        let (rows, rhs) = boundary_constraints(&t).unwrap();
        assert_eq!(rows.len(), 10);
        // apex; lambda edge; mu edge from the right corner; nu edge
        assert_eq!(rhs, vec![0, 1, 2, 2, 3, 3, 3, 2, 3, 3]);
        for row in &rows {
            assert_eq!(row.iter().filter(|&&v| v == 1).count(), 1);
            assert_eq!(row.iter().filter(|&&v| v != 0).count(), 1);
        }
        let zero = WeightTriple::new(hw(&[0, 0]), hw(&[0, 0]), hw(&[0, 0]));
        let (_, rhs) = boundary_constraints(&zero).unwrap();
        assert!(rhs.iter().all(|&v| v == 0));
    }

    #[test]
    fn boundary_rejects_unbalanced_sizes() {
        let t = WeightTriple::new(hw(&[1, 0]), hw(&[1, 0]), hw(&[1, 0]));
        assert_eq!(
            boundary_constraints(&t),
            Err(HiveError::SizeMismatch { nu: 1, expected: 2 })
        );
    }

    #[test]
    fn displayed_hive_is_a_hive() {
        let p = displayed_hive();
        assert_eq!(p.rank(), 4);
        assert!(is_hive_pattern(&p));
        assert!(is_hive_pattern(&HivePattern::zero(5)));
    }

    #[test]
    fn perturbed_hive_fails() {
        let mut p = displayed_hive();
        let idx = HiveIndex::new(1, 1, 2);
        assert_eq!(p.get(idx), &BigRational::from_integer(12.into()));
        p.set(idx, BigRational::from_integer(20.into()));
        assert!(!is_hive_pattern(&p));
    }

    #[test]
    fn displayed_hive_satisfies_its_system() {
        // the display puts lambda on the left edge; mirror into the canonical orientation
        let p = displayed_hive().mirrored();
        let t = WeightTriple::new(hw(&[5, 3, 3, 1]), hw(&[4, 2, 2, 0]), hw(&[8, 5, 5, 2]));
        let sys = build_hive_polytope(&t).unwrap();
        assert!(sys.contains(p.entries()));
        assert_eq!(t.nu().size(), 20);
        let lifted = homogenized_point(&sys, p.entries());
        assert!(lifted[sys.nvars()..].iter().all(|v| !v.is_negative()));
        // in the display's own orientation the nu edge reads 5, 8, 11, 12
        let raw = displayed_hive();
        let left: Vec<_> = (1..=4)
            .map(|s| raw.get(HiveIndex::new(s, 0, 4 - s)).clone())
            .collect();
        assert_eq!(left.last().unwrap(), &BigRational::from_integer(12.into()));
    }

    #[test]
    fn homogenized_dimensions() {
        let t = WeightTriple::new(hw(&[0, 0]), hw(&[0, 0]), hw(&[0, 0]));
        let sys = build_hive_polytope(&t).unwrap();
        let (m, b) = homogenize(&sys);
        assert_eq!((m.nrows(), m.ncols()), (10, 9));
        assert!(b.b.iter().all(|&v| v == 0));
        assert_eq!(HiveMatrix::for_rank(2), m);
        let m3 = HiveMatrix::for_rank(3);
        assert_eq!((m3.nrows(), m3.ncols()), (19, 19));
        let m1 = HiveMatrix::for_rank(1);
        assert_eq!((m1.nrows(), m1.ncols()), (4, 3));
        assert_eq!(m1.slack_columns, 0);
    }

    #[test]
    fn dilation_identity() {
        let t = WeightTriple::parse("9,7,3,0,0", "9,9,3,2,0", "10,9,9,8,6").unwrap();
        assert!(dilation_rhs_identity(&t, 1).unwrap());
        assert!(dilation_rhs_identity(&t, 2).unwrap());
        let z = WeightTriple::parse("0,0", "0,0", "0,0").unwrap();
        assert!(dilation_rhs_identity(&z, 7).unwrap());
    }

    #[test]
    fn entry_counts() {
        for rank in 1..8 {
            assert_eq!(indices(rank).len(), entry_count(rank));
            assert_eq!(boundary_positions(rank).len(), 3 * rank + 1);
            let mut b = boundary_positions(rank);
            b.sort_unstable();
            b.dedup();
            assert_eq!(entry_count(rank) - b.len(), interior_count(rank));
        }
    }
}
