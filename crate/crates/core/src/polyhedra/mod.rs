//! Exact rational polyhedra: integral lattice charts of equality systems, linear
//! programming, vertex enumeration and supporting cones.

pub(crate) mod exact;
pub mod lp;
pub mod vertices;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{self, big_matrix, big_vec, dot, rat};
pub use lp::{LinearProgram, LpOutcome};
pub use vertices::RationalPoint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyhedraError {
    #[error("equality system has no integral solution")]
    InfeasibleLattice,
    #[error("polytope is empty")]
    Infeasible,
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("row {row} has {got} coefficients, expected {expected}")]
    DimensionMismatch {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("coordinate {index} out of range for dimension {dim}")]
    BadCoordinate { index: usize, dim: usize },
    #[error("point is not a vertex of the polytope")]
    NotAVertex,
    #[error("coefficient does not fit in a 64-bit integer")]
    Overflow,
}

/// `{ x in R^d : eq_matrix x = eq_rhs, ineq_matrix x <= ineq_rhs }` with integral data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HRepPolytope {
    dim: usize,
    eq_matrix: Vec<Vec<i64>>,
    eq_rhs: Vec<i64>,
    ineq_matrix: Vec<Vec<i64>>,
    ineq_rhs: Vec<i64>,
}

impl HRepPolytope {
    pub fn new(
        dim: usize,
        eq_matrix: Vec<Vec<i64>>,
        eq_rhs: Vec<i64>,
        ineq_matrix: Vec<Vec<i64>>,
        ineq_rhs: Vec<i64>,
    ) -> Result<Self, PolyhedraError> {
        for (row, r) in eq_matrix.iter().chain(&ineq_matrix).enumerate() {
            if r.len() != dim {
                return Err(PolyhedraError::DimensionMismatch {
                    row,
                    got: r.len(),
                    expected: dim,
                });
            }
        }
        if eq_rhs.len() != eq_matrix.len() {
            return Err(PolyhedraError::DimensionMismatch {
                row: eq_matrix.len(),
                got: eq_rhs.len(),
                expected: eq_matrix.len(),
            });
        }
        if ineq_rhs.len() != ineq_matrix.len() {
            return Err(PolyhedraError::DimensionMismatch {
                row: ineq_matrix.len(),
                got: ineq_rhs.len(),
                expected: ineq_matrix.len(),
            });
        }
        Ok(Self {
            dim,
            eq_matrix,
            eq_rhs,
            ineq_matrix,
            ineq_rhs,
        })
    }

    /// Only inequalities `a x <= b`.
    pub fn from_inequalities(dim: usize, rows: Vec<Vec<i64>>, rhs: Vec<i64>) -> Result<Self, PolyhedraError> {
        Self::new(dim, vec![], vec![], rows, rhs)
    }

    /// Builds a polytope from rational rows, clearing each row's denominators.
    pub fn from_rational(
        dim: usize,
        eq: &[(Vec<BigRational>, BigRational)],
        ineq: &[(Vec<BigRational>, BigRational)],
    ) -> Result<Self, PolyhedraError> {
        let clear = |rows: &[(Vec<BigRational>, BigRational)]| -> Result<(Vec<Vec<i64>>, Vec<i64>), PolyhedraError> {
            let mut m = Vec::new();
            let mut r = Vec::new();
            for (coef, rhs) in rows {
                let mut all = coef.clone();
                all.push(rhs.clone());
                let (nums, _) = linalg::clear_denominators(&all);
                let nums = linalg::primitive(&nums);
                let ints = nums
                    .iter()
                    .map(|v| i64::try_from(v).map_err(|_| PolyhedraError::Overflow))
                    .collect::<Result<Vec<i64>, _>>()?;
                r.push(ints[dim]);
                m.push(ints[..dim].to_vec());
            }
            Ok((m, r))
        };
        let (em, er) = clear(eq)?;
        let (im, ir) = clear(ineq)?;
        Self::new(dim, em, er, im, ir)
    }

    /// The box `[0, 1]^d`-style polytope given by lower and upper bounds per coordinate.
    pub fn from_box(lower: &[i64], upper: &[i64]) -> Self {
        let d = lower.len();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..d {
            let mut r = vec![0; d];
            r[i] = 1;
            rows.push(r.clone());
            rhs.push(upper[i]);
            r[i] = -1;
            rows.push(r);
            rhs.push(-lower[i]);
        }
        Self::from_inequalities(d, rows, rhs).expect("box rows have the right width")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eq_matrix(&self) -> &[Vec<i64>] {
        &self.eq_matrix
    }

    pub fn eq_rhs(&self) -> &[i64] {
        &self.eq_rhs
    }

    pub fn ineq_matrix(&self) -> &[Vec<i64>] {
        &self.ineq_matrix
    }

    pub fn ineq_rhs(&self) -> &[i64] {
        &self.ineq_rhs
    }

    /// `n P`: every right-hand side multiplied by `n`.
    pub fn dilate(&self, n: u64) -> Result<Self, PolyhedraError> {
        let n = i64::try_from(n).map_err(|_| PolyhedraError::Overflow)?;
        let scale = |v: &[i64]| -> Result<Vec<i64>, PolyhedraError> {
            v.iter()
                .map(|x| x.checked_mul(n).ok_or(PolyhedraError::Overflow))
                .collect()
        };
        Ok(Self {
            dim: self.dim,
            eq_matrix: self.eq_matrix.clone(),
            eq_rhs: scale(&self.eq_rhs)?,
            ineq_matrix: self.ineq_matrix.clone(),
            ineq_rhs: scale(&self.ineq_rhs)?,
        })
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        let eval = |row: &[i64]| {
            row.iter()
                .zip(x)
                .fold(BigRational::zero(), |acc, (c, v)| acc + v * BigInt::from(*c))
        };
        self.eq_matrix
            .iter()
            .zip(&self.eq_rhs)
            .all(|(r, b)| eval(r) == BigRational::from_integer((*b).into()))
            && self
                .ineq_matrix
                .iter()
                .zip(&self.ineq_rhs)
                .all(|(r, b)| eval(r) <= BigRational::from_integer((*b).into()))
    }

    pub fn contains_integer(&self, x: &[BigInt]) -> bool {
        let xs: Vec<BigRational> = x.iter().map(rat).collect();
        self.contains(&xs)
    }

    fn program<'a>(&self, bufs: &'a LpBuffers) -> LinearProgram<'a> {
        LinearProgram {
            nvars: self.dim,
            eq: &bufs.eq,
            eq_rhs: &bufs.eq_rhs,
            ineq: &bufs.ineq,
            ineq_rhs: &bufs.ineq_rhs,
        }
    }

    fn buffers(&self) -> LpBuffers {
        LpBuffers {
            eq: big_matrix(&self.eq_matrix),
            eq_rhs: big_vec(&self.eq_rhs),
            ineq: big_matrix(&self.ineq_matrix),
            ineq_rhs: big_vec(&self.ineq_rhs),
        }
    }

    /// Optimizes a linear functional over the polytope.
    pub fn optimize(&self, objective: &[BigInt], maximize: bool) -> LpOutcome {
        let bufs = self.buffers();
        self.program(&bufs).optimize(objective, maximize)
    }
}

struct LpBuffers {
    eq: Vec<Vec<BigInt>>,
    eq_rhs: Vec<BigInt>,
    ineq: Vec<Vec<BigInt>>,
    ineq_rhs: Vec<BigInt>,
}

/// Rational nonemptiness, decided by exact simplex.
pub fn lp_feasible(p: &HRepPolytope) -> bool {
    let bufs = p.buffers();
    p.program(&bufs).is_feasible()
}

/// Exact minimum and maximum of coordinate `index` over `p`.
pub fn lp_bounds(p: &HRepPolytope, index: usize) -> Result<(BigRational, BigRational), PolyhedraError> {
    if index >= p.dim {
        return Err(PolyhedraError::BadCoordinate { index, dim: p.dim });
    }
    let mut obj = vec![BigInt::zero(); p.dim];
    obj[index] = BigInt::one();
    let bufs = p.buffers();
    let lp = p.program(&bufs);
    let lo = match lp.optimize(&obj, false) {
        LpOutcome::Infeasible => return Err(PolyhedraError::Infeasible),
        LpOutcome::Unbounded => return Err(PolyhedraError::Unbounded),
        LpOutcome::Optimal { value, .. } => value,
    };
    let hi = match lp.optimize(&obj, true) {
        LpOutcome::Infeasible => return Err(PolyhedraError::Infeasible),
        LpOutcome::Unbounded => return Err(PolyhedraError::Unbounded),
        LpOutcome::Optimal { value, .. } => value,
    };
    Ok((lo, hi))
}

/// `x = base + basis t`, a bijection from `Z^free_dim` onto the integral solutions of an
/// equality system. `basis` holds the kernel generators as columns (stored as vectors).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeChart {
    pub base_point: Vec<BigInt>,
    pub kernel_basis: Vec<Vec<BigInt>>,
}

impl LatticeChart {
    pub fn identity(dim: usize) -> Self {
        Self {
            base_point: vec![BigInt::zero(); dim],
            kernel_basis: (0..dim)
                .map(|i| {
                    let mut v = vec![BigInt::zero(); dim];
                    v[i] = BigInt::one();
                    v
                })
                .collect(),
        }
    }

    pub fn free_dim(&self) -> usize {
        self.kernel_basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.base_point.len()
    }

    /// Image of an integral chart point.
    pub fn apply(&self, t: &[BigInt]) -> Vec<BigInt> {
        let mut x = self.base_point.clone();
        for (ti, col) in t.iter().zip(&self.kernel_basis) {
            if ti.is_zero() {
                continue;
            }
            for (xi, c) in x.iter_mut().zip(col) {
                *xi += ti * c;
            }
        }
        x
    }

    pub fn apply_rational(&self, t: &[BigRational]) -> Vec<BigRational> {
        let mut x: Vec<BigRational> = self.base_point.iter().map(rat).collect();
        for (ti, col) in t.iter().zip(&self.kernel_basis) {
            for (xi, c) in x.iter_mut().zip(col) {
                *xi += ti * c;
            }
        }
        x
    }

    /// Image of a direction (no translation).
    pub fn apply_linear(&self, t: &[BigInt]) -> Vec<BigInt> {
        let mut x = vec![BigInt::zero(); self.ambient_dim()];
        for (ti, col) in t.iter().zip(&self.kernel_basis) {
            for (xi, c) in x.iter_mut().zip(col) {
                *xi += ti * c;
            }
        }
        x
    }

    /// `self` followed by an inner chart on its free coordinates.
    pub fn compose(&self, inner: &LatticeChart) -> LatticeChart {
        LatticeChart {
            base_point: self.apply(&inner.base_point),
            kernel_basis: inner
                .kernel_basis
                .iter()
                .map(|col| self.apply_linear(col))
                .collect(),
        }
    }
}

/// Integral parametrization of `{ x in Z^n : a x = rhs }`.
pub fn lattice_chart(a: &[Vec<i64>], rhs: &[i64], ncols: usize) -> Result<LatticeChart, PolyhedraError> {
    lattice_chart_big(&big_matrix(a), &big_vec(rhs), ncols)
}

pub(crate) fn lattice_chart_big(
    a: &[Vec<BigInt>],
    rhs: &[BigInt],
    ncols: usize,
) -> Result<LatticeChart, PolyhedraError> {
    if a.is_empty() {
        return Ok(LatticeChart::identity(ncols));
    }
    let (ech, sol) = linalg::integer_solution(a, rhs, ncols);
    let base_point = sol.ok_or(PolyhedraError::InfeasibleLattice)?;
    Ok(LatticeChart {
        base_point,
        kernel_basis: ech.kernel_basis(),
    })
}

/// A full-dimensional polytope `{ t : a t <= b }` in chart coordinates, with its vertices.
#[derive(Debug, Clone)]
pub struct ChartPolytope {
    pub chart: LatticeChart,
    pub a: Vec<Vec<BigInt>>,
    pub b: Vec<BigInt>,
    pub vertices: Vec<RationalPoint>,
}

impl ChartPolytope {
    pub fn dim(&self) -> usize {
        self.chart.free_dim()
    }

    /// Rows of the constraint system tight at a chart point.
    pub fn active_rows(&self, v: &RationalPoint) -> Vec<usize> {
        self.a
            .iter()
            .zip(&self.b)
            .enumerate()
            .filter(|(_, (row, bv))| dot(row, &v.num) == *bv * &v.den)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Result of reducing an H-polytope to a full-dimensional chart.
#[derive(Debug, Clone)]
pub enum Reduction {
    /// No integral point can exist (rationally empty, or the affine hull misses the lattice).
    Empty,
    FullDim(ChartPolytope),
}

/// Rewrites `p` in integral coordinates of its affine hull.
///
/// Fails with `Unbounded` if `p` is unbounded.
pub fn reduce(p: &HRepPolytope) -> Result<Reduction, PolyhedraError> {
    let chart = match lattice_chart(p.eq_matrix(), p.eq_rhs(), p.dim()) {
        Ok(c) => c,
        Err(PolyhedraError::InfeasibleLattice) => return Ok(Reduction::Empty),
        Err(e) => return Err(e),
    };
    let ineq = big_matrix(p.ineq_matrix());
    let ineq_rhs = big_vec(p.ineq_rhs());
    let (a, b) = pull_back(&ineq, &ineq_rhs, &chart);
    let f = chart.free_dim();

    // feasibility and boundedness in chart space
    {
        let lp = LinearProgram {
            nvars: f,
            eq: &[],
            eq_rhs: &[],
            ineq: &a,
            ineq_rhs: &b,
        };
        if !lp.is_feasible() {
            return Ok(Reduction::Empty);
        }
        let rec_rhs = vec![BigInt::zero(); a.len()];
        let rec = LinearProgram {
            nvars: f,
            eq: &[],
            eq_rhs: &[],
            ineq: &a,
            ineq_rhs: &rec_rhs,
        };
        for i in 0..f {
            for maximize in [true, false] {
                let mut obj = vec![BigInt::zero(); f];
                obj[i] = BigInt::one();
                if let LpOutcome::Unbounded = rec.optimize(&obj, maximize) {
                    return Err(PolyhedraError::Unbounded);
                }
            }
        }
    }
    reduce_chart(chart, a, b)
}

fn pull_back(a: &[Vec<BigInt>], b: &[BigInt], chart: &LatticeChart) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let rows: Vec<Vec<BigInt>> = a
        .iter()
        .map(|row| chart.kernel_basis.iter().map(|col| dot(row, col)).collect())
        .collect();
    let rhs: Vec<BigInt> = a
        .iter()
        .zip(b)
        .map(|(row, bv)| bv - dot(row, &chart.base_point))
        .collect();
    (rows, rhs)
}

/// Removes implicit equalities until the polytope is full-dimensional in its chart.
fn reduce_chart(
    chart: LatticeChart,
    a: Vec<Vec<BigInt>>,
    b: Vec<BigInt>,
) -> Result<Reduction, PolyhedraError> {
    let f = chart.free_dim();
    let verts = vertices::enumerate_vertices(&a, &b, f);
    if verts.is_empty() {
        return Ok(Reduction::Empty);
    }
    let implicit: Vec<usize> = (0..a.len())
        .filter(|&i| verts.iter().all(|v| dot(&a[i], &v.num) == &b[i] * &v.den))
        .collect();
    let nontrivial: Vec<usize> = implicit
        .iter()
        .copied()
        .filter(|&i| a[i].iter().any(|c| !c.is_zero()))
        .collect();
    if nontrivial.is_empty() {
        // only facet-defining rows: weakly redundant ones inflate the active sets at degenerate vertices
        let keep: Vec<usize> = (0..a.len())
            .filter(|i| !implicit.contains(i))
            .filter(|&i| defines_facet(&a[i], &b[i], &verts, f))
            .collect();
        let a2: Vec<Vec<BigInt>> = keep.iter().map(|&i| a[i].clone()).collect();
        let b2: Vec<BigInt> = keep.iter().map(|&i| b[i].clone()).collect();
        return Ok(Reduction::FullDim(ChartPolytope {
            chart,
            a: a2,
            b: b2,
            vertices: verts,
        }));
    }
    let eq: Vec<Vec<BigInt>> = nontrivial
        .iter()
        .map(|&i| {
            let mut row = a[i].clone();
            row.push(b[i].clone());
            let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            row.iter().map(|x| x / &g).collect()
        })
        .collect();
    let eq_rhs: Vec<BigInt> = eq.iter().map(|r| r[f].clone()).collect();
    let eq: Vec<Vec<BigInt>> = eq.into_iter().map(|mut r| {
        r.truncate(f);
        r
    }).collect();
    let inner = match lattice_chart_big(&eq, &eq_rhs, f) {
        Ok(c) => c,
        Err(PolyhedraError::InfeasibleLattice) => return Ok(Reduction::Empty),
        Err(e) => return Err(e),
    };
    let keep: Vec<usize> = (0..a.len()).filter(|i| !implicit.contains(i)).collect();
    let a2: Vec<Vec<BigInt>> = keep.iter().map(|&i| a[i].clone()).collect();
    let b2: Vec<BigInt> = keep.iter().map(|&i| b[i].clone()).collect();
    let (a3, b3) = pull_back(&a2, &b2, &inner);
    reduce_chart(chart.compose(&inner), a3, b3)
}

fn defines_facet(row: &[BigInt], rhs: &BigInt, verts: &[vertices::RationalPoint], f: usize) -> bool {
    let tight: Vec<&vertices::RationalPoint> = verts
        .iter()
        .filter(|v| dot(row, &v.num) == rhs * &v.den)
        .collect();
    let Some((first, rest)) = tight.split_first() else {
        return false;
    };
    if rest.len() + 1 < f {
        return false;
    }
    let diffs: Vec<Vec<BigInt>> = rest
        .iter()
        .map(|v| {
            v.num
                .iter()
                .zip(&first.num)
                .map(|(x, y)| x * &first.den - y * &v.den)
                .collect()
        })
        .collect();
    crate::linalg::rank(&diffs, f) + 1 == f
}

/// Vertices of a bounded polytope in ambient coordinates, each exactly once.
pub fn enumerate_vertices(p: &HRepPolytope) -> Result<Vec<Vec<BigRational>>, PolyhedraError> {
    match reduce(p)? {
        Reduction::Empty => Ok(vec![]),
        Reduction::FullDim(cp) => Ok(cp
            .vertices
            .iter()
            .map(|v| cp.chart.apply_rational(&v.to_rationals()))
            .collect()),
    }
}

/// The tangent cone of a polytope at one of its vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexCone {
    pub apex: Vec<BigRational>,
    pub rays: Vec<Vec<BigInt>>,
}

impl VertexCone {
    pub fn dim(&self) -> usize {
        self.apex.len()
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dim()
    }
}

/// Tangent cone of the chart polytope at vertex `v`, in chart coordinates.
pub fn chart_supporting_cone(cp: &ChartPolytope, v: &RationalPoint) -> VertexCone {
    let active: Vec<Vec<BigInt>> = cp.active_rows(v).into_iter().map(|i| cp.a[i].clone()).collect();
    VertexCone {
        apex: v.to_rationals(),
        rays: vertices::extreme_rays(&active, cp.dim()),
    }
}

/// Supporting cone at vertex `v` (ambient coordinates), with primitive integral rays.
pub fn supporting_cone(p: &HRepPolytope, v: &[BigRational]) -> Result<VertexCone, PolyhedraError> {
    let cp = match reduce(p)? {
        Reduction::Empty => return Err(PolyhedraError::NotAVertex),
        Reduction::FullDim(cp) => cp,
    };
    let target = cp
        .vertices
        .iter()
        .find(|w| cp.chart.apply_rational(&w.to_rationals()) == v)
        .ok_or(PolyhedraError::NotAVertex)?;
    let cone = chart_supporting_cone(&cp, target);
    Ok(VertexCone {
        apex: v.to_vec(),
        rays: cone
            .rays
            .iter()
            .map(|r| linalg::primitive(&cp.chart.apply_linear(r)))
            .collect(),
    })
}
