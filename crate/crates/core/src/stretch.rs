//! Stretched coefficients `e(n) = c_{n lambda, n mu}^{n nu}` and exact quasi-polynomial fits.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::counting::{count_dilation, CountError};
use crate::hive::{build_hive_polytope, interior_count};
use crate::linalg::rat;
use crate::weights::WeightTriple;

pub const DEFAULT_PERIODS: [usize; 2] = [1, 2];
pub const VALIDATION_MARGIN: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StretchError {
    #[error("no period among {candidates:?} reproduces the samples with degree <= {degree}")]
    NoFit { candidates: Vec<usize>, degree: usize },
    #[error("period {period} needs {needed} samples per residue class, class {class} has {got}")]
    InsufficientSamples {
        period: usize,
        class: usize,
        needed: usize,
        got: usize,
    },
    #[error("stretch range must start at n = 1 and be nonempty")]
    EmptyRange,
    #[error(transparent)]
    Count(#[from] CountError),
}

/// A polynomial with exact rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polynomial {
    #[serde(with = "crate::serde_util::rational_vec")]
    pub coefficients: Vec<BigRational>,
}

impl Polynomial {
    pub fn constant(c: i64) -> Self {
        Self {
            coefficients: vec![BigRational::from_integer(c.into())],
        }
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coefficients
            .iter()
            .rposition(|c| !c.is_zero())
            .unwrap_or(0)
    }

    pub fn eval(&self, n: &BigRational) -> BigRational {
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * n + c)
    }

    fn trimmed(mut self) -> Self {
        while self.coefficients.len() > 1 && self.coefficients.last().is_some_and(|c| c.is_zero()) {
            self.coefficients.pop();
        }
        self
    }
}

impl std::fmt::Display for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            terms.push(match k {
                0 => format!("{c}"),
                1 => format!("{c}*n"),
                _ => format!("{c}*n^{k}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// `i(n) = f_j(n)` where `j = n mod period`, with residue `period` for multiples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiPolynomial {
    pub period: usize,
    pub degree: usize,
    /// `constituents[j - 1]` is `f_j`.
    pub constituents: Vec<Polynomial>,
}

impl QuasiPolynomial {
    pub fn eval(&self, n: u64) -> BigRational {
        let j = ((n as usize) + self.period - 1) % self.period;
        self.constituents[j].eval(&BigRational::from_integer(n.into()))
    }

    pub fn all_coefficients_nonnegative(&self) -> bool {
        self.constituents
            .iter()
            .flat_map(|p| &p.coefficients)
            .all(|c| !c.is_negative())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifiedPoint {
    pub n: u64,
    #[serde(with = "crate::serde_util::big_string")]
    pub count: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StretchReport {
    pub triple: WeightTriple,
    pub quasi: QuasiPolynomial,
    pub all_coeffs_nonnegative: bool,
    pub verified_points: Vec<VerifiedPoint>,
}

/// `(n, e(n))` for `n = 1..=n_max`.
pub fn stretched_counts(triple: &WeightTriple, n_max: u64) -> Result<Vec<(u64, BigInt)>, StretchError> {
    if n_max == 0 {
        return Err(StretchError::EmptyRange);
    }
    if !triple.sizes_balanced() {
        return Ok((1..=n_max).map(|n| (n, BigInt::zero())).collect());
    }
    let p = build_hive_polytope(triple).map_err(CountError::from)?.to_polytope();
    (1..=n_max)
        .into_par_iter()
        .map(|n| Ok((n, count_dilation(&p, n)?.value)))
        .collect()
}

/// Newton interpolation through `points`, returned in the monomial basis.
fn interpolate(points: &[(BigRational, BigRational)]) -> Polynomial {
    let k = points.len();
    let mut coef: Vec<BigRational> = points.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..k {
        for i in (level..k).rev() {
            let num = &coef[i] - &coef[i - 1];
            let den = &points[i].0 - &points[i - level].0;
            coef[i] = num / den;
        }
    }
    // expand c_0 + c_1 (x - x_0) + c_2 (x - x_0)(x - x_1) + ...
    let mut result = vec![BigRational::zero(); k.max(1)];
    for i in (0..k).rev() {
        // result = result * (x - x_i) + coef[i]
        let mut next = vec![BigRational::zero(); k.max(1)];
        for (d, r) in result.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            if d + 1 < next.len() {
                next[d + 1] += r;
            }
            next[d] -= r * &points[i].0;
        }
        next[0] += &coef[i];
        result = next;
    }
    Polynomial {
        coefficients: result,
    }
    .trimmed()
}

/// Fits the smallest period in `period_candidates` whose per-class interpolants of degree
/// `<= degree_bound` reproduce every sample exactly.
pub fn fit_quasi_polynomial(
    samples: &[(u64, BigInt)],
    degree_bound: usize,
    period_candidates: &[usize],
) -> Result<QuasiPolynomial, StretchError> {
    let mut periods = period_candidates.to_vec();
    periods.sort_unstable();
    periods.dedup();
    let needed = degree_bound + 1 + VALIDATION_MARGIN;
    for &period in &periods {
        if period == 0 {
            continue;
        }
        let mut constituents = Vec::with_capacity(period);
        let mut fits = true;
        for class in 1..=period {
            let pts: Vec<(BigRational, BigRational)> = samples
                .iter()
                .filter(|(n, _)| ((*n as usize) + period - 1) % period == class - 1)
                .map(|(n, c)| (BigRational::from_integer((*n).into()), rat(c)))
                .collect();
            if pts.len() < needed {
                return Err(StretchError::InsufficientSamples {
                    period,
                    class,
                    needed,
                    got: pts.len(),
                });
            }
            let poly = interpolate(&pts[..degree_bound + 1]);
            if pts.iter().any(|(x, y)| poly.eval(x) != *y) {
                fits = false;
                break;
            }
            constituents.push(poly);
        }
        if fits {
            let degree = constituents.iter().map(Polynomial::degree).max().unwrap_or(0);
            return Ok(QuasiPolynomial {
                period,
                degree,
                constituents,
            });
        }
    }
    Err(StretchError::NoFit {
        candidates: periods,
        degree: degree_bound,
    })
}

/// Smallest `n_max` that lets every candidate period be tested.
pub fn required_samples(degree_bound: usize, period: usize) -> u64 {
    (period * (degree_bound + 1 + VALIDATION_MARGIN)) as u64
}

/// Computes `e(1..=n_max)`, fits a quasi-polynomial with degree bound equal to the number
/// of free hive entries, and records coefficient signs.
pub fn conjecture2_report(triple: &WeightTriple, n_max: u64) -> Result<StretchReport, StretchError> {
    conjecture2_report_with(triple, n_max, &DEFAULT_PERIODS)
}

pub fn conjecture2_report_with(
    triple: &WeightTriple,
    n_max: u64,
    periods: &[usize],
) -> Result<StretchReport, StretchError> {
    let samples = stretched_counts(triple, n_max)?;
    let degree_bound = interior_count(triple.parts());
    let quasi = fit_quasi_polynomial(&samples, degree_bound, periods)?;
    debug_assert!(samples
        .iter()
        .all(|(n, c)| quasi.eval(*n) == rat(c)));
    Ok(StretchReport {
        triple: triple.clone(),
        all_coeffs_nonnegative: quasi.all_coefficients_nonnegative(),
        quasi,
        verified_points: samples
            .into_iter()
            .map(|(n, count)| VerifiedPoint { n, count })
            .collect(),
    })
}

impl StretchReport {
    pub fn leading_coefficient_positive(&self) -> bool {
        self.quasi.constituents.iter().all(|p| {
            p.coefficients
                .iter()
                .rev()
                .find(|c| !c.is_zero())
                .is_some_and(|c| c.is_positive())
        })
    }

    pub fn reproduces_samples(&self) -> bool {
        self.verified_points
            .iter()
            .all(|p| self.quasi.eval(p.n) == rat(&p.count))
    }
}
