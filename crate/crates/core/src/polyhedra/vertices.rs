//! Vertex and extreme-ray enumeration by the double description method.
//!
//! Both problems reduce to the extreme rays of a pointed cone `{ y : g y <= 0 }`. Rays are
//! kept with their sets of tight constraints, and adjacency is decided combinatorially, so
//! highly degenerate inputs cost no more than their number of rays.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::exact::{convert_matrix, dot, normalize, Echelon, Exact, Reduced};

/// A rational point stored as integer numerators over a positive common denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint {
    pub num: Vec<BigInt>,
    pub den: BigInt,
}

impl RationalPoint {
    pub fn to_rationals(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|n| BigRational::new(n.clone(), self.den.clone()))
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.num.len()
    }
}

/// Vertices of `{ x in R^d : a x <= b }` (assumed bounded), each exactly once, sorted.
pub fn enumerate_vertices(a: &[Vec<BigInt>], b: &[BigInt], d: usize) -> Vec<RationalPoint> {
    if d == 0 {
        return if b.iter().all(|v| v >= &BigInt::from(0)) {
            vec![RationalPoint {
                num: vec![],
                den: BigInt::from(1),
            }]
        } else {
            vec![]
        };
    }
    // homogenize: (x, t) with a x - b t <= 0 and t >= 0
    let mut g: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, bv)| {
            let mut r = row.clone();
            r.push(-bv);
            r
        })
        .collect();
    let mut t_row = vec![BigInt::from(0); d + 1];
    t_row[d] = BigInt::from(-1);
    g.push(t_row);
    let rays = cone_rays(&g, d + 1);
    let mut out: Vec<RationalPoint> = rays
        .into_iter()
        .filter(|r| r[d] > BigInt::from(0))
        .map(|mut r| {
            let den = r.pop().expect("homogenizing coordinate");
            RationalPoint { num: r, den }
        })
        .collect();
    out.sort();
    out
}

/// Primitive integral generators of the extreme rays of the pointed cone
/// `{ y : a_i y <= 0 for i in rows }`, sorted.
pub fn extreme_rays(a: &[Vec<BigInt>], d: usize) -> Vec<Vec<BigInt>> {
    if d == 0 {
        return vec![];
    }
    cone_rays(a, d)
}

fn cone_rays(g: &[Vec<BigInt>], d: usize) -> Vec<Vec<BigInt>> {
    let mut out = match double_description::<i128>(g, d) {
        Some(r) => r,
        None => double_description::<BigInt>(g, d).expect("bigint arithmetic does not overflow"),
    };
    out.sort();
    out
}

#[derive(Clone)]
struct Ray<T> {
    v: Vec<T>,
    /// Bitset over constraint indices that are tight and already processed.
    zeros: Vec<u64>,
}

fn set_bit(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn count_bits(a: &[u64]) -> usize {
    a.iter().map(|w| w.count_ones() as usize).sum()
}

/// Kernel vector of `rows` (`d - 1` independent rows in dimension `d`).
fn kernel_vector<T: Exact>(rows: &[Vec<T>], d: usize) -> Option<Vec<T>> {
    let mut ech = Echelon::new(d);
    for r in rows {
        match ech.reduce(r.clone())? {
            Reduced::Independent(row, p) => ech.push(row, p),
            Reduced::Dependent => unreachable!("basis rows are independent"),
        }
    }
    let free = (0..d).find(|c| !ech.pivots.contains(c)).expect("one free column");
    let (mut num, _) = ech.back_substitute(|_| Some(T::zero()), &[(free, T::one())])?;
    normalize(&mut num);
    Some(num)
}

fn double_description<T: Exact>(g: &[Vec<BigInt>], d: usize) -> Option<Vec<Vec<BigInt>>> {
    let g: Vec<Vec<T>> = convert_matrix(g)?;
    let m = g.len();
    let words = m.div_ceil(64).max(1);

    // initial simplicial cone from a row basis
    let mut ech = Echelon::new(d);
    let mut basis = Vec::new();
    for (i, row) in g.iter().enumerate() {
        if let Reduced::Independent(r, p) = ech.reduce(row.clone())? {
            ech.push(r, p);
            basis.push(i);
            if basis.len() == d {
                break;
            }
        }
    }
    assert_eq!(basis.len(), d, "cone must be pointed");
    let mut processed = vec![false; m];
    let mut rays: Vec<Ray<T>> = Vec::with_capacity(d);
    for (k, &i) in basis.iter().enumerate() {
        let others: Vec<Vec<T>> = basis
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, &b)| g[b].clone())
            .collect();
        let mut v = kernel_vector(&others, d)?;
        if dot(&g[i], &v)?.signum() > 0 {
            for x in v.iter_mut() {
                *x = x.neg()?;
            }
        }
        let mut zeros = vec![0u64; words];
        for &j in basis.iter().filter(|&&j| j != i) {
            set_bit(&mut zeros, j);
        }
        rays.push(Ray { v, zeros });
    }
    for &i in &basis {
        processed[i] = true;
    }

    for i in 0..m {
        if processed[i] {
            continue;
        }
        processed[i] = true;
        let vals: Vec<T> = rays.iter().map(|r| dot(&g[i], &r.v)).collect::<Option<_>>()?;
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].signum() > 0).collect();
        if pos.is_empty() {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    set_bit(&mut r.zeros, i);
                }
            }
            continue;
        }
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].signum() < 0).collect();
        let mut created = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common: Vec<u64> = rays[p].zeros.iter().zip(&rays[n].zeros).map(|(x, y)| x & y).collect();
                if count_bits(&common) + 2 < d {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == p || k == n || !subset(&common, &r.zeros));
                if !adjacent {
                    continue;
                }
                // vals[p] > 0 > vals[n]
                let cp = vals[p].clone();
                let cn = vals[n].neg()?;
                let mut v: Vec<T> = rays[n]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(x, y)| x.mul(&cp)?.add(&y.mul(&cn)?))
                    .collect::<Option<_>>()?;
                normalize(&mut v);
                let mut zeros = common;
                set_bit(&mut zeros, i);
                created.push(Ray { v, zeros });
            }
        }
        let mut next: Vec<Ray<T>> = Vec::with_capacity(rays.len() - pos.len() + created.len());
        for (k, mut r) in rays.into_iter().enumerate() {
            match vals[k].signum() {
                0 => {
                    set_bit(&mut r.zeros, i);
                    next.push(r);
                }
                s if s < 0 => next.push(r),
                _ => {}
            }
        }
        next.extend(created);
        rays = next;
    }
    Some(rays.into_iter().map(|r| r.v.iter().map(T::to_big).collect()).collect())
}
