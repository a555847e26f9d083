//! LLL basis reduction over exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::linalg::rat;

fn dot_q(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

fn gram_schmidt(basis: &[Vec<BigInt>]) -> (Vec<Vec<BigRational>>, Vec<Vec<BigRational>>, Vec<BigRational>) {
    let n = basis.len();
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut norms = Vec::with_capacity(n);
    for i in 0..n {
        let bi: Vec<BigRational> = basis[i].iter().map(rat).collect();
        let mut v = bi.clone();
        for j in 0..i {
            mu[i][j] = if norms[j] == BigRational::zero() {
                BigRational::zero()
            } else {
                dot_q(&bi, &star[j]) / &norms[j]
            };
            for (x, y) in v.iter_mut().zip(&star[j]) {
                *x -= &mu[i][j] * y;
            }
        }
        norms.push(dot_q(&v, &v));
        star.push(v);
    }
    (star, mu, norms)
}

/// Reduces a basis of linearly independent integer vectors in place (delta = 3/4).
pub fn lll_reduce(basis: &mut [Vec<BigInt>]) {
    let n = basis.len();
    if n < 2 {
        return;
    }
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let (_, mut mu, mut norms) = gram_schmidt(basis);
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            if mu[k][j].abs() > half {
                let q = mu[k][j].round().to_integer();
                let bj = basis[j].clone();
                for (x, y) in basis[k].iter_mut().zip(&bj) {
                    *x -= &q * y;
                }
                let qr = rat(&q);
                for l in 0..j {
                    let m = mu[j][l].clone();
                    mu[k][l] -= &qr * m;
                }
                mu[k][j] -= &qr;
            }
        }
        let lhs = &norms[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            let (_, m2, n2) = gram_schmidt(basis);
            mu = m2;
            norms = n2;
            k = (k - 1).max(1);
        }
    }
}
