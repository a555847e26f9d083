//! Exact integer and rational linear algebra on small dense matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn big_matrix(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter()
        .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
        .collect()
}

pub fn big_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn rat(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rat(a: &[BigInt], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .fold(BigRational::zero(), |acc, (x, y)| acc + y * x)
}

pub fn mat_vec(a: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|row| dot(row, x)).collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>], ncols: usize) -> Vec<Vec<T>> {
    (0..ncols)
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Divides an integer vector by the gcd of its entries.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Clears denominators of a rational vector, returning `(numerators, positive denominator)`
/// with `gcd(numerators, denominator) = 1`.
pub fn clear_denominators(v: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let den = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let nums: Vec<BigInt> = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    (nums, den)
}

/// Column reduction `A U = H` with `U` unimodular.
///
/// Column `c < rank` of `H` has its pivot at row `pivots[c]`, pivots strictly increase, every
/// entry of column `c` above its pivot is zero and columns `rank..` of `H` are zero.
#[derive(Debug, Clone)]
pub struct ColumnEchelon {
    pub h: Vec<Vec<BigInt>>,
    pub u: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
}

impl ColumnEchelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Columns `rank..` of `U`: a basis of the integer kernel lattice of `A`.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        let n = self.u.len();
        (self.rank()..n)
            .map(|c| (0..n).map(|r| self.u[r][c].clone()).collect())
            .collect()
    }
}

fn combine_columns(
    m: &mut [Vec<BigInt>],
    a: usize,
    b: usize,
    coeffs: (&BigInt, &BigInt, &BigInt, &BigInt),
) {
    // (col_a, col_b) <- (p*col_a + q*col_b, r*col_a + s*col_b)
    let (p, q, r, s) = coeffs;
    for row in m.iter_mut() {
        let va = row[a].clone();
        let vb = row[b].clone();
        row[a] = p * &va + q * &vb;
        row[b] = r * &va + s * &vb;
    }
}

fn negate_column(m: &mut [Vec<BigInt>], c: usize) {
    for row in m.iter_mut() {
        row[c] = -row[c].clone();
    }
}

fn swap_columns(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Computes a column echelon form of the `rows x ncols` matrix `a`.
pub fn column_echelon(a: &[Vec<BigInt>], ncols: usize) -> ColumnEchelon {
    let mut h: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..ncols)
        .map(|i| {
            (0..ncols)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut col = 0;
    for row in 0..h.len() {
        if col == ncols {
            break;
        }
        for c in col + 1..ncols {
            if h[row][c].is_zero() {
                continue;
            }
            if h[row][col].is_zero() {
                swap_columns(&mut h, col, c);
                swap_columns(&mut u, col, c);
                continue;
            }
            let a_val = h[row][col].clone();
            let b_val = h[row][c].clone();
            let eg = a_val.extended_gcd(&b_val);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let ra = -(&b_val / &g);
            let sa = &a_val / &g;
            combine_columns(&mut h, col, c, (&x, &y, &ra, &sa));
            combine_columns(&mut u, col, c, (&x, &y, &ra, &sa));
        }
        if !h[row][col].is_zero() {
            if h[row][col].is_negative() {
                negate_column(&mut h, col);
                negate_column(&mut u, col);
            }
            // keep earlier columns small by reducing their entries in this row
            for prev in 0..col {
                let q = h[row][prev].div_floor(&h[row][col]);
                if !q.is_zero() {
                    let neg_q = -q;
                    let one = BigInt::one();
                    let zero = BigInt::zero();
                    // col_prev <- col_prev - q * col_pivot
                    combine_columns(&mut h, prev, col, (&one, &neg_q, &zero, &one));
                    combine_columns(&mut u, prev, col, (&one, &neg_q, &zero, &one));
                }
            }
            pivots.push(row);
            col += 1;
        }
    }
    ColumnEchelon { h, u, pivots }
}

/// Integral solution of `A x = b` together with the echelon data, or `None` when
/// no integral solution exists.
pub fn integer_solution(
    a: &[Vec<BigInt>],
    b: &[BigInt],
    ncols: usize,
) -> (ColumnEchelon, Option<Vec<BigInt>>) {
    let ech = column_echelon(a, ncols);
    let rank = ech.rank();
    let mut y = vec![BigInt::zero(); ncols];
    for (k, &prow) in ech.pivots.iter().enumerate() {
        let partial: BigInt = (0..k).map(|j| &ech.h[prow][j] * &y[j]).sum();
        let rem = &b[prow] - partial;
        let (q, r) = rem.div_rem(&ech.h[prow][k]);
        if !r.is_zero() {
            return (ech, None);
        }
        y[k] = q;
    }
    for (row, bv) in b.iter().enumerate() {
        let lhs: BigInt = (0..rank).map(|j| &ech.h[row][j] * &y[j]).sum();
        if &lhs != bv {
            return (ech, None);
        }
    }
    let x = mat_vec(&ech.u, &y);
    (ech, Some(x))
}

/// Fraction-free determinant (Bareiss) of a square integer matrix.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Reduced row echelon form over the rationals; returns pivot columns.
pub fn rref(m: &mut [Vec<BigRational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let (head, tail) = if i < r {
                    let (h, t) = m.split_at_mut(r);
                    (&mut h[i], &t[0])
                } else {
                    let (h, t) = m.split_at_mut(i);
                    (&mut t[0], &h[r])
                };
                for (x, y) in head.iter_mut().zip(tail.iter()) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<BigInt>], ncols: usize) -> usize {
    let mut q: Vec<Vec<BigRational>> = m.iter().map(|r| r.iter().map(rat).collect()).collect();
    rref(&mut q, ncols).len()
}

/// Solves `A x = b` over the rationals (`A` is `rows x ncols`); returns one solution or `None`.
pub fn solve_rational(a: &[Vec<BigInt>], b: &[BigRational], ncols: usize) -> Option<Vec<BigRational>> {
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, bv)| {
            let mut r: Vec<BigRational> = row.iter().map(rat).collect();
            r.push(bv.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][ncols].clone();
    }
    Some(x)
}

/// Integer basis of the rational nullspace of `a`, each vector primitive.
pub fn nullspace(a: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    column_echelon(a, ncols)
        .kernel_basis()
        .into_iter()
        .map(|v| primitive(&v))
        .collect()
}

/// Inverse of a square integer matrix as `(adjugate-like numerator, positive denominator)`
/// with `inverse = num / den`, or `None` when singular.
pub fn inverse(m: &[Vec<BigInt>]) -> Option<(Vec<Vec<BigInt>>, BigInt)> {
    let n = m.len();
    let mut aug: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row.iter().map(rat).collect();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    let pivots = rref(&mut aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    let inv: Vec<Vec<BigRational>> = aug.into_iter().map(|r| r[n..].to_vec()).collect();
    let den = inv
        .iter()
        .flatten()
        .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let num = inv
        .iter()
        .map(|r| r.iter().map(|x| x.numer() * (&den / x.denom())).collect())
        .collect();
    Some((num, den))
}
