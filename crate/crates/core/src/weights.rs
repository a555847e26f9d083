//! Type A highest weights (partitions) and weight triples.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("weight must have at least one part")]
    Empty,
    #[error("parts must be weakly decreasing, got {0:?}")]
    NotDecreasing(Vec<u64>),
    #[error("cannot parse weight {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("weight {weight} has nonzero parts beyond length {len}")]
    TooLong { weight: String, len: usize },
    #[error("size mismatch: |lambda| = {lambda}, |mu| = {mu}")]
    SizeMismatch { lambda: u64, mu: u64 },
    #[error("arithmetic overflow while dilating")]
    Overflow,
}

/// A weakly decreasing vector of nonnegative integers in canonical-basis coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct HighestWeight(Vec<u64>);

impl HighestWeight {
    pub fn new(parts: Vec<u64>) -> Result<Self, WeightError> {
        if parts.is_empty() {
            return Err(WeightError::Empty);
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(WeightError::NotDecreasing(parts));
        }
        Ok(Self(parts))
    }

    /// The weight with `len` zero parts.
    pub fn zero(len: usize) -> Self {
        Self(vec![0; len.max(1)])
    }

    pub fn parts(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of nonzero parts.
    pub fn length(&self) -> usize {
        self.0.iter().take_while(|&&p| p > 0).count()
    }

    /// `|w|`, the sum of the parts.
    pub fn size(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&p| p == 0)
    }

    /// Multiplies every part by `n`.
    pub fn dilate(&self, n: u64) -> Result<Self, WeightError> {
        let parts = self
            .0
            .iter()
            .map(|&p| p.checked_mul(n).ok_or(WeightError::Overflow))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self(parts))
    }

    /// Zero-pads (or trims trailing zeros) to exactly `len` parts.
    pub fn padded(&self, len: usize) -> Result<Self, WeightError> {
        let len = len.max(1);
        if self.0.iter().skip(len).any(|&p| p != 0) {
            return Err(WeightError::TooLong {
                weight: self.to_string(),
                len,
            });
        }
        let mut parts = self.0.clone();
        parts.resize(len, 0);
        Ok(Self(parts))
    }

    /// Partial sums `w_1, w_1 + w_2, ..., |w|`.
    pub fn partial_sums(&self) -> Vec<u64> {
        self.0
            .iter()
            .scan(0u64, |acc, &p| {
                *acc += p;
                Some(*acc)
            })
            .collect()
    }
}

impl TryFrom<Vec<u64>> for HighestWeight {
    type Error = WeightError;

    fn try_from(parts: Vec<u64>) -> Result<Self, Self::Error> {
        Self::new(parts)
    }
}

impl From<HighestWeight> for Vec<u64> {
    fn from(w: HighestWeight) -> Self {
        w.0
    }
}

impl fmt::Display for HighestWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", join_parts(&self.0))
    }
}

impl FromStr for HighestWeight {
    type Err = WeightError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::new(parse_parts(s)?)
    }
}

pub(crate) fn join_parts(parts: &[u64]) -> String {
    parts
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Parses comma-separated nonnegative decimal integers, e.g. `"9,7,3,0,0"`.
pub fn parse_parts(s: &str) -> Result<Vec<u64>, WeightError> {
    let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
    if trimmed.is_empty() {
        return Err(WeightError::Empty);
    }
    trimmed
        .split(',')
        .map(|tok| {
            tok.trim().parse::<u64>().map_err(|e| WeightError::Parse {
                input: s.to_string(),
                reason: e.to_string(),
            })
        })
        .collect()
}

/// Three highest weights padded to a common number of parts.
///
/// The number of parts is the side length of the associated hive triangle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightTriple {
    lambda: HighestWeight,
    mu: HighestWeight,
    nu: HighestWeight,
}

impl WeightTriple {
    /// Pads all three weights to the longest of them.
    pub fn new(lambda: HighestWeight, mu: HighestWeight, nu: HighestWeight) -> Self {
        let len = lambda.len().max(mu.len()).max(nu.len());
        Self::with_parts(&lambda, &mu, &nu, len).expect("padding to the maximum length cannot fail")
    }

    /// Pads all three weights to exactly `parts` parts.
    pub fn with_parts(
        lambda: &HighestWeight,
        mu: &HighestWeight,
        nu: &HighestWeight,
        parts: usize,
    ) -> Result<Self, WeightError> {
        Ok(Self {
            lambda: lambda.padded(parts)?,
            mu: mu.padded(parts)?,
            nu: nu.padded(parts)?,
        })
    }

    pub fn parse(lambda: &str, mu: &str, nu: &str) -> Result<Self, WeightError> {
        Ok(Self::new(lambda.parse()?, mu.parse()?, nu.parse()?))
    }

    pub fn lambda(&self) -> &HighestWeight {
        &self.lambda
    }

    pub fn mu(&self) -> &HighestWeight {
        &self.mu
    }

    pub fn nu(&self) -> &HighestWeight {
        &self.nu
    }

    /// Common number of parts, i.e. the hive side length.
    pub fn parts(&self) -> usize {
        self.lambda.len()
    }

    /// Lie rank of `sl_{parts}`.
    pub fn lie_rank(&self) -> usize {
        self.parts() - 1
    }

    /// `|nu| = |lambda| + |mu|`, necessary for a nonzero coefficient.
    pub fn sizes_balanced(&self) -> bool {
        self.lambda.size() + self.mu.size() == self.nu.size()
    }

    pub fn dilate(&self, n: u64) -> Result<Self, WeightError> {
        Ok(Self {
            lambda: self.lambda.dilate(n)?,
            mu: self.mu.dilate(n)?,
            nu: self.nu.dilate(n)?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.lambda.is_zero() && self.mu.is_zero() && self.nu.is_zero()
    }
}

impl fmt::Display for WeightTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}), ({}), ({})", self.lambda, self.mu, self.nu)
    }
}

/// Sum of parts.
pub fn weight_size(w: &HighestWeight) -> u64 {
    w.size()
}

/// `n`-fold stretching of a weight.
pub fn dilate(w: &HighestWeight, n: u64) -> Result<HighestWeight, WeightError> {
    w.dilate(n)
}

/// Suffix-sum weights `(sigma, tau)` with `K_{lambda, mu} = c_{sigma, lambda}^{tau}`.
///
/// `tau_i = mu_i + mu_{i+1} + ...` and `sigma_i = mu_{i+1} + mu_{i+2} + ...`. The content
/// `mu` need not be a partition; both outputs always are.
pub fn kostka_to_lr(
    lambda: &HighestWeight,
    mu: &[u64],
) -> Result<(HighestWeight, HighestWeight), WeightError> {
    let mu_size: u64 = mu.iter().sum();
    if lambda.size() != mu_size {
        return Err(WeightError::SizeMismatch {
            lambda: lambda.size(),
            mu: mu_size,
        });
    }
    if mu.is_empty() {
        return Err(WeightError::Empty);
    }
    let mut tau = vec![0u64; mu.len()];
    let mut acc = 0u64;
    for i in (0..mu.len()).rev() {
        acc += mu[i];
        tau[i] = acc;
    }
    let mut sigma: Vec<u64> = tau.iter().skip(1).copied().collect();
    sigma.push(0);
    Ok((HighestWeight(sigma), HighestWeight(tau)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hw(p: &[u64]) -> HighestWeight {
        HighestWeight::new(p.to_vec()).unwrap()
    }

    #[test]
    fn sizes() {
        assert_eq!(weight_size(&hw(&[9, 7, 3, 0, 0])), 19);
        assert_eq!(weight_size(&hw(&[0, 0, 0])), 0);
        assert_eq!(weight_size(&hw(&[935, 639, 283, 75, 48])), 1980);
    }

    #[test]
    fn dilation() {
        assert_eq!(dilate(&hw(&[2, 1, 0]), 3).unwrap(), hw(&[6, 3, 0]));
        assert_eq!(dilate(&hw(&[1, 0]), 1).unwrap(), hw(&[1, 0]));
        assert_eq!(
            dilate(&hw(&[9, 7, 3, 0, 0]), 2).unwrap(),
            hw(&[18, 14, 6, 0, 0])
        );
        assert_eq!(hw(&[u64::MAX]).dilate(2), Err(WeightError::Overflow));
    }

    #[test]
    fn rejects_increasing_parts() {
        assert!(matches!(
            HighestWeight::new(vec![1, 2]),
            Err(WeightError::NotDecreasing(_))
        ));
        assert!(matches!(
            "2,3,1".parse::<HighestWeight>(),
            Err(WeightError::NotDecreasing(_))
        ));
        assert_eq!(HighestWeight::new(vec![]), Err(WeightError::Empty));
        assert!(matches!(
            "1,x".parse::<HighestWeight>(),
            Err(WeightError::Parse { .. })
        ));
    }

    #[test]
    fn parse_and_display() {
        let w: HighestWeight = "9,7,3,0,0".parse().unwrap();
        assert_eq!(w.parts(), &[9, 7, 3, 0, 0]);
        assert_eq!(w.to_string(), "9,7,3,0,0");
        assert_eq!(" 3, 1 ".parse::<HighestWeight>().unwrap(), hw(&[3, 1]));
    }

    #[test]
    fn triple_padding() {
        let t = WeightTriple::parse("2,1", "1", "3,1,0,0").unwrap();
        assert_eq!(t.parts(), 4);
        assert_eq!(t.lambda().parts(), &[2, 1, 0, 0]);
        assert_eq!(t.lie_rank(), 3);
        assert!(t.sizes_balanced());
        assert!(WeightTriple::with_parts(&hw(&[1, 1]), &hw(&[1]), &hw(&[2]), 1).is_err());
    }

    #[test]
    fn kostka_transform_examples() {
        let lam = hw(&[4, 3, 1]);
        let (s, t) = kostka_to_lr(&lam, &[2, 3, 1, 2]).unwrap();
        assert_eq!(t.parts(), &[8, 6, 3, 2]);
        assert_eq!(s.parts(), &[6, 3, 2, 0]);
        let (s, t) = kostka_to_lr(&hw(&[3]), &[1, 1, 1]).unwrap();
        assert_eq!(t.parts(), &[3, 2, 1]);
        assert_eq!(s.parts(), &[2, 1, 0]);
        let (s, t) = kostka_to_lr(&hw(&[5]), &[5, 0, 0]).unwrap();
        assert_eq!(t.parts(), &[5, 0, 0]);
        assert_eq!(s.parts(), &[0, 0, 0]);
        assert!(matches!(
            kostka_to_lr(&hw(&[2]), &[1]),
            Err(WeightError::SizeMismatch { .. })
        ));
    }

    proptest! {
        #[test]
        fn kostka_transform_telescopes(mu in proptest::collection::vec(0u64..20, 1..7)) {
            let size: u64 = mu.iter().sum();
            let lam = HighestWeight::new(vec![size]).unwrap();
            let (s, t) = kostka_to_lr(&lam, &mu).unwrap();
            for i in 0..mu.len() {
                prop_assert_eq!(t.parts()[i], s.parts()[i] + mu[i]);
                if i + 1 < mu.len() {
                    prop_assert_eq!(s.parts()[i], t.parts()[i + 1]);
                }
            }
        }

        #[test]
        fn dilation_composes(mut parts in proptest::collection::vec(0u64..1000, 1..6), a in 1u64..50, b in 1u64..50) {
            parts.sort_unstable_by(|x, y| y.cmp(x));
            let w = HighestWeight::new(parts).unwrap();
            prop_assert_eq!(w.dilate(a).unwrap().dilate(b).unwrap(), w.dilate(a * b).unwrap());
            prop_assert_eq!(w.dilate(a).unwrap().size(), a * w.size());
        }
    }
}
