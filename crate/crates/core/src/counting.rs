//! Lattice-point counting: a bound-propagation enumerator and Barvinok's signed decomposition
//! into unimodular cones evaluated by specialization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, dot, inverse, mat_vec, primitive, rat, transpose};
use crate::hive::{build_hive_polytope, HiveError};
use crate::lll::lll_reduce;
use crate::polyhedra::{
    self, chart_supporting_cone, lattice_chart, HRepPolytope, LinearProgram, LpOutcome,
    PolyhedraError, Reduction, VertexCone,
};
use crate::triangulation::placing_triangulation;
use crate::weights::WeightTriple;

pub const DEFAULT_NAIVE_CAP: usize = 12;
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    Naive,
    Barvinok,
}

impl std::fmt::Display for CountMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CountMethod::Naive => write!(f, "naive"),
            CountMethod::Barvinok => write!(f, "barvinok"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountResult {
    pub value: BigInt,
    pub method: CountMethod,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("free dimension {free_dim} exceeds the enumeration cap {cap}")]
    CapExceeded { free_dim: usize, cap: usize },
    #[error("polytope is unbounded")]
    Unbounded,
    #[error(transparent)]
    Polyhedra(#[from] PolyhedraError),
    #[error(transparent)]
    Hive(#[from] HiveError),
}

/// One term `sign * [apex + cone(rays)]` of a signed decomposition. Facet `i` (opposite
/// `rays[i]`) is included when `closed[i]` and excluded otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedUnimodularCone {
    pub sign: i32,
    pub apex: Vec<BigRational>,
    pub rays: Vec<Vec<BigInt>>,
    pub closed: Vec<bool>,
}

impl SignedUnimodularCone {
    pub fn determinant(&self) -> BigInt {
        linalg::determinant(&transpose(&self.rays, self.apex.len()))
    }

    /// Whether the half-open cone contains `x`.
    pub fn contains(&self, x: &[BigRational]) -> bool {
        let d = self.apex.len();
        let m = transpose(&self.rays, d);
        let diff: Vec<BigRational> = x.iter().zip(&self.apex).map(|(a, b)| a - b).collect();
        let Some(t) = linalg::solve_rational(&m, &diff, d) else {
            return false;
        };
        t.iter().zip(&self.closed).all(|(ti, &c)| {
            if c {
                !ti.is_negative()
            } else {
                ti.is_positive()
            }
        })
    }

    /// The unique lattice point `a` with `apex + cone = a + cone` on the lattice.
    fn lattice_apex(&self) -> Vec<BigInt> {
        let d = self.apex.len();
        let u = transpose(&self.rays, d);
        let (inv, den) = inverse(&u).expect("unimodular cone is nonsingular");
        debug_assert!(den.is_one());
        let s: Vec<BigInt> = inv
            .iter()
            .zip(&self.closed)
            .map(|(row, &closed)| {
                let c = linalg::dot_rat(row, &self.apex);
                if closed {
                    c.ceil().to_integer()
                } else {
                    c.floor().to_integer() + 1
                }
            })
            .collect();
        mat_vec(&u, &s)
    }
}

fn det_cols(rays: &[Vec<BigInt>]) -> BigInt {
    let d = rays.len();
    linalg::determinant(&transpose(rays, d))
}

/// Barvinok's signed decomposition of the simplicial cone spanned by `rays` into
/// unimodular cones, modulo lower-dimensional cones. Returns `(sign, rays)` pairs and the
/// recursion depth.
pub(crate) fn decompose_simplicial(rays: Vec<Vec<BigInt>>) -> (Vec<(i32, Vec<Vec<BigInt>>)>, usize) {
    let mut out = Vec::new();
    let mut depth = 0;
    let rays: Vec<Vec<BigInt>> = rays.iter().map(|r| primitive(r)).collect();
    let mut stack = vec![(1i32, rays, 0usize)];
    while let Some((sign, rays, level)) = stack.pop() {
        depth = depth.max(level);
        let det = det_cols(&rays);
        assert!(!det.is_zero(), "simplicial cone has independent rays");
        if det.abs().is_one() {
            out.push((sign, rays));
            continue;
        }
        let d = rays.len();
        let u = transpose(&rays, d);
        let (inv, den) = inverse(&u).expect("nonsingular");
        // columns of inv generate den * U^{-1} Z^d
        let mut basis: Vec<Vec<BigInt>> = (0..d).map(|c| inv.iter().map(|r| r[c].clone()).collect()).collect();
        lll_reduce(&mut basis);
        let centered = |b: &Vec<BigInt>| -> Vec<BigInt> {
            b.iter()
                .map(|x| {
                    let q = BigRational::new(x.clone(), den.clone()).round().to_integer();
                    x - &q * &den
                })
                .collect()
        };
        let beta = basis
            .iter()
            .map(centered)
            .filter(|b| b.iter().any(|x| !x.is_zero()))
            .min_by_key(|b| b.iter().map(|x| x.abs()).max().unwrap_or_default())
            .expect("a non-integral lattice vector exists when the index exceeds one");
        let beta: Vec<BigInt> = if beta.iter().any(|x| x.is_positive()) {
            beta
        } else {
            beta.iter().map(|x| -x).collect()
        };
        // w = U beta / den
        let w: Vec<BigInt> = mat_vec(&u, &beta).iter().map(|x| x / &den).collect();
        let w = primitive(&w);
        for (i, b) in beta.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let mut next = rays.clone();
            next[i] = w.clone();
            let s = if b.is_positive() { sign } else { -sign };
            stack.push((s, next, level + 1));
        }
    }
    (out, depth)
}

/// Signed unimodular cones for a full-dimensional pointed cone, using the half-open
/// convention fixed by an interior vector `y`. Returns `None` when `y` lies on a facet
/// hyperplane of some output cone.
fn decompose_with(c: &VertexCone, pieces: &[(i32, Vec<Vec<BigInt>>)], y: &[BigInt]) -> Option<Vec<SignedUnimodularCone>> {
    let d = c.dim();
    let mut out = Vec::with_capacity(pieces.len());
    for (sign, rays) in pieces {
        let (inv, _) = inverse(&transpose(rays, d)).expect("unimodular");
        let t = mat_vec(&inv, y);
        if t.iter().any(|v| v.is_zero()) {
            return None;
        }
        out.push(SignedUnimodularCone {
            sign: *sign,
            apex: c.apex.clone(),
            rays: rays.clone(),
            closed: t.iter().map(|v| v.is_positive()).collect(),
        });
    }
    Some(out)
}

fn unimodular_pieces(c: &VertexCone) -> Vec<(i32, Vec<Vec<BigInt>>)> {
    let d = c.dim();
    let cells: Vec<Vec<Vec<BigInt>>> = if c.rays.len() == d {
        vec![c.rays.clone()]
    } else {
        let order: Vec<usize> = (0..c.rays.len()).collect();
        placing_triangulation(&c.rays, d, &order)
            .cells
            .into_iter()
            .map(|cell| cell.iter().map(|&i| c.rays[i].clone()).collect())
            .collect()
    };
    cells.into_iter().flat_map(|rays| decompose_simplicial(rays).0).collect()
}

fn decompose_seeded(c: &VertexCone, rng: &mut ChaCha8Rng) -> Vec<SignedUnimodularCone> {
    let d = c.dim();
    if d == 0 {
        return vec![SignedUnimodularCone {
            sign: 1,
            apex: vec![],
            rays: vec![],
            closed: vec![],
        }];
    }
    let pieces = unimodular_pieces(c);
    let mut range = 8i64;
    loop {
        let mut y = vec![BigInt::zero(); d];
        for r in &c.rays {
            let k = BigInt::from(rng.gen_range(1..=range));
            for (yi, ri) in y.iter_mut().zip(r) {
                *yi += &k * ri;
            }
        }
        if let Some(out) = decompose_with(c, &pieces, &y) {
            return out;
        }
        range = range.saturating_mul(2);
    }
}

/// Signed closed unimodular cones summing to `apex + { y : n y <= 0 for n in normals }`
/// modulo cones that contain lines, whose generating functions vanish.
///
/// The polar cone `cone(normals)` is triangulated and decomposed instead of the cone itself;
/// at degenerate vertices it has far fewer generators. Polarity turns the lower-dimensional
/// cones dropped on the polar side into cones with lines on the primal side.
pub fn decompose_polar(apex: &[BigRational], normals: &[Vec<BigInt>]) -> Vec<SignedUnimodularCone> {
    let d = apex.len();
    let mut gens: Vec<Vec<BigInt>> = normals
        .iter()
        .filter(|n| n.iter().any(|x| !x.is_zero()))
        .map(|n| primitive(n))
        .collect();
    gens.sort();
    gens.dedup();
    let order: Vec<usize> = (0..gens.len()).collect();
    let cells = placing_triangulation(&gens, d, &order).cells;
    let mut out = Vec::new();
    for cell in cells {
        let w: Vec<Vec<BigInt>> = cell.iter().map(|&i| gens[i].clone()).collect();
        for (sign, piece) in decompose_simplicial(w).0 {
            // rays r_j with <piece_k, r_j> = -delta_kj
            let (inv, den) = inverse(&piece).expect("unimodular");
            let rays: Vec<Vec<BigInt>> = (0..d).map(|j| inv.iter().map(|row| -&row[j] / &den).collect()).collect();
            out.push(SignedUnimodularCone {
                sign,
                apex: apex.to_vec(),
                rays,
                closed: vec![true; d],
            });
        }
    }
    out
}

/// Decomposes a full-dimensional pointed cone with apex into signed half-open unimodular
/// cones whose signed indicator functions sum exactly to the indicator of the cone.
pub fn decompose_cone(c: &VertexCone) -> Vec<SignedUnimodularCone> {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    decompose_seeded(c, &mut rng)
}

/// Coefficients `B_k / k!` of `x / (e^x - 1)` up to degree `n`.
fn todd_coefficients(n: usize) -> Vec<BigRational> {
    let mut bern: Vec<BigRational> = vec![BigRational::one()];
    for m in 1..=n {
        // sum_{j<=m} C(m+1, j) B_j = 0
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for (j, b) in bern.iter().enumerate() {
            acc += b * &binom;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        bern.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    let mut fact = BigInt::one();
    bern.into_iter()
        .enumerate()
        .map(|(k, b)| {
            if k > 0 {
                fact *= BigInt::from(k);
            }
            b / BigRational::from_integer(fact.clone())
        })
        .collect()
}

/// Todd coefficients scaled to integers: `(t_k, L)` with `B_k / k! = t_k / L`.
fn scaled_todd(n: usize) -> (Vec<BigInt>, BigInt) {
    let todd = todd_coefficients(n);
    let l = todd.iter().fold(BigInt::one(), |acc, t| acc.lcm(t.denom()));
    let scaled = todd.iter().map(|t| (t * rat(&l)).to_integer()).collect();
    (scaled, l)
}

/// Constant term at `tau = 0` of `sign * e^{tau <l,a>} / prod(1 - e^{tau <l,u_i>})`, times
/// `d! L^d` where `L` is the Todd scale from [`scaled_todd`].
fn specialize(cone: &SignedUnimodularCone, ell: &[BigInt], todd: &[BigInt]) -> BigRational {
    let d = cone.rays.len();
    let a = cone.lattice_apex();
    let alpha = dot(ell, &a);
    let betas: Vec<BigInt> = cone.rays.iter().map(|u| dot(ell, u)).collect();
    let mut poly = vec![BigInt::zero(); d + 1];
    poly[0] = BigInt::one();
    let mut factor = vec![BigInt::zero(); d + 1];
    for b in &betas {
        let mut pw = BigInt::one();
        for (f, t) in factor.iter_mut().zip(todd) {
            *f = t * &pw;
            pw *= b;
        }
        for i in (0..=d).rev() {
            let mut acc = BigInt::zero();
            for j in 0..=i {
                if !poly[i - j].is_zero() && !factor[j].is_zero() {
                    acc += &poly[i - j] * &factor[j];
                }
            }
            poly[i] = acc;
        }
    }
    // sum_j alpha^j (d!/j!) poly[d - j]
    let mut ratio = vec![BigInt::one(); d + 1];
    for j in (0..d).rev() {
        ratio[j] = &ratio[j + 1] * BigInt::from(j + 1);
    }
    let mut sum = BigInt::zero();
    let mut apow = BigInt::one();
    for j in 0..=d {
        if j > 0 {
            apow *= &alpha;
        }
        sum += &apow * &poly[d - j] * &ratio[j];
    }
    if (d % 2 == 1) != (cone.sign < 0) {
        sum = -sum;
    }
    BigRational::new(sum, betas.iter().product())
}

fn choose_direction(cones: &[SignedUnimodularCone], d: usize, rng: &mut ChaCha8Rng) -> Vec<BigInt> {
    let mut range = 1i64 << 12;
    loop {
        let ell: Vec<BigInt> = (0..d).map(|_| BigInt::from(rng.gen_range(-range..=range))).collect();
        let generic = cones
            .iter()
            .all(|c| c.rays.iter().all(|u| !dot(&ell, u).is_zero()));
        if generic {
            return ell;
        }
        range = range.saturating_mul(2);
    }
}

/// Sum of the generating functions of the signed cones, evaluated at `z = 1`.
pub fn evaluate_cones(cones: &[SignedUnimodularCone], seed: u64) -> BigInt {
    let Some(first) = cones.first() else {
        return BigInt::zero();
    };
    let d = first.apex.len();
    if d == 0 {
        return cones.iter().map(|c| BigInt::from(c.sign)).sum();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let ell = choose_direction(cones, d, &mut rng);
    let (todd, l) = scaled_todd(d);
    let scaled = cones
        .par_iter()
        .map(|c| specialize(c, &ell, &todd))
        .reduce(BigRational::zero, |a, b| a + b);
    let fact: BigInt = (1..=d).map(BigInt::from).product();
    let total = scaled / rat(&(fact * num_traits::pow(l, d)));
    assert!(total.is_integer(), "cone sum is an integer");
    total.to_integer()
}

/// Exact count by Barvinok's algorithm with the default seed.
pub fn count_barvinok(p: &HRepPolytope) -> Result<CountResult, CountError> {
    count_barvinok_seeded(p, DEFAULT_SEED)
}

/// Exact count by Barvinok's algorithm; `seed` drives the internal generic choices only.
pub fn count_barvinok_seeded(p: &HRepPolytope, seed: u64) -> Result<CountResult, CountError> {
    let value = match polyhedra::reduce(p).map_err(map_unbounded)? {
        Reduction::Empty => BigInt::zero(),
        Reduction::FullDim(cp) if cp.dim() == 0 => BigInt::one(),
        Reduction::FullDim(cp) => {
            let cones: Vec<SignedUnimodularCone> = cp
                .vertices
                .par_iter()
                .enumerate()
                .flat_map_iter(|(i, v)| {
                    let active = cp.active_rows(v);
                    if active.len() > cp.dim() {
                        let normals: Vec<Vec<BigInt>> = active.iter().map(|&r| cp.a[r].clone()).collect();
                        return decompose_polar(&v.to_rationals(), &normals);
                    }
                    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
                    let cone = chart_supporting_cone(&cp, v);
                    decompose_seeded(&cone, &mut rng)
                })
                .collect();
            evaluate_cones(&cones, seed)
        }
    };
    Ok(CountResult {
        value,
        method: CountMethod::Barvinok,
    })
}

fn map_unbounded(e: PolyhedraError) -> CountError {
    match e {
        PolyhedraError::Unbounded => CountError::Unbounded,
        other => CountError::Polyhedra(other),
    }
}

/// Counts the lattice points of `n P` (right-hand sides scaled by `n`).
pub fn count_dilation(p: &HRepPolytope, n: u64) -> Result<CountResult, CountError> {
    count_barvinok(&p.dilate(n)?)
}

/// Exact count by recursive enumeration of chart coordinates with LP bounds.
pub fn count_naive(p: &HRepPolytope) -> Result<CountResult, CountError> {
    count_naive_with_cap(p, DEFAULT_NAIVE_CAP)
}

pub fn count_naive_with_cap(p: &HRepPolytope, cap: usize) -> Result<CountResult, CountError> {
    let chart = match lattice_chart(p.eq_matrix(), p.eq_rhs(), p.dim()) {
        Ok(c) => c,
        Err(PolyhedraError::InfeasibleLattice) => {
            return Ok(CountResult {
                value: BigInt::zero(),
                method: CountMethod::Naive,
            })
        }
        Err(e) => return Err(e.into()),
    };
    let f = chart.free_dim();
    if f > cap {
        return Err(CountError::CapExceeded { free_dim: f, cap });
    }
    let ineq = linalg::big_matrix(p.ineq_matrix());
    let a: Vec<Vec<BigInt>> = ineq
        .iter()
        .map(|row| chart.kernel_basis.iter().map(|col| dot(row, col)).collect())
        .collect();
    let b: Vec<BigInt> = ineq
        .iter()
        .zip(p.ineq_rhs())
        .map(|(row, bv)| BigInt::from(*bv) - dot(row, &chart.base_point))
        .collect();
    let value = naive_rec(&a, &b, 0)?;
    Ok(CountResult {
        value,
        method: CountMethod::Naive,
    })
}

/// Counts integral `t` with `a t <= b`, where the first `k` columns are already eliminated.
fn naive_rec(a: &[Vec<BigInt>], b: &[BigInt], k: usize) -> Result<BigInt, CountError> {
    let f = a.first().map_or(0, |r| r.len());
    if k == f {
        return Ok(if b.iter().all(|v| !v.is_negative()) {
            BigInt::one()
        } else {
            BigInt::zero()
        });
    }
    let rest: Vec<Vec<BigInt>> = a.iter().map(|r| r[k..].to_vec()).collect();
    let lp = LinearProgram {
        nvars: f - k,
        eq: &[],
        eq_rhs: &[],
        ineq: &rest,
        ineq_rhs: b,
    };
    let mut obj = vec![BigInt::zero(); f - k];
    obj[0] = BigInt::one();
    let lo = match lp.optimize(&obj, false) {
        LpOutcome::Infeasible => return Ok(BigInt::zero()),
        LpOutcome::Unbounded => return Err(CountError::Unbounded),
        LpOutcome::Optimal { value, .. } => value.ceil().to_integer(),
    };
    let hi = match lp.optimize(&obj, true) {
        LpOutcome::Infeasible => return Ok(BigInt::zero()),
        LpOutcome::Unbounded => return Err(CountError::Unbounded),
        LpOutcome::Optimal { value, .. } => value.floor().to_integer(),
    };
    if hi < lo {
        return Ok(BigInt::zero());
    }
    if k + 1 == f {
        return Ok(hi - lo + 1);
    }
    let mut total = BigInt::zero();
    let mut v = lo;
    while v <= hi {
        let b2: Vec<BigInt> = a.iter().zip(b).map(|(r, bv)| bv - &r[k] * &v).collect();
        total += naive_rec(a, &b2, k + 1)?;
        v += 1;
    }
    Ok(total)
}

/// `c_{lambda mu}^nu` as the lattice-point count of the hive polytope; zero when the sizes
/// do not balance.
pub fn count_triple(triple: &WeightTriple, method: CountMethod, seed: u64) -> Result<CountResult, CountError> {
    if !triple.sizes_balanced() {
        return Ok(CountResult {
            value: BigInt::zero(),
            method,
        });
    }
    let p = build_hive_polytope(triple)?.to_polytope();
    match method {
        CountMethod::Naive => count_naive(&p),
        CountMethod::Barvinok => count_barvinok_seeded(&p, seed),
    }
}

/// Whether `c_{lambda mu}^nu > 0`, decided by rational feasibility of the hive polytope.
pub fn is_nonzero(triple: &WeightTriple) -> Result<bool, CountError> {
    if !triple.sizes_balanced() {
        return Ok(false);
    }
    Ok(polyhedra::lp_feasible(&build_hive_polytope(triple)?.to_polytope()))
}

/// Integer points of `[lo, hi]^d`, for brute-force checks.
#[cfg(test)]
fn box_points(d: usize, lo: i64, hi: i64) -> Vec<Vec<BigInt>> {
    let mut pts = vec![vec![]];
    for _ in 0..d {
        pts = pts
            .into_iter()
            .flat_map(|p: Vec<BigInt>| {
                (lo..=hi).map(move |x| {
                    let mut q = p.clone();
                    q.push(BigInt::from(x));
                    q
                })
            })
            .collect();
    }
    pts
}
