//! Independent type A oracles: weight multiplicities, Klimyk's formula, and brute-force
//! tableau counters.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::counting::{count_barvinok, CountError};
use crate::hive::{build_hive_polytope, HiveError};
use crate::weights::{kostka_to_lr, HighestWeight, WeightError, WeightTriple};

pub const DEFAULT_SIZE_CAP: u64 = 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KlimykError {
    #[error("weight size {size} exceeds the brute-force cap {cap}")]
    SizeCap { size: u64, cap: u64 },
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Hive(#[from] HiveError),
    #[error(transparent)]
    Count(#[from] CountError),
}

/// A weight in canonical-basis coordinates, not necessarily dominant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AmbientWeight(pub Vec<i64>);

impl AmbientWeight {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionTerm {
    pub nu: HighestWeight,
    #[serde(with = "crate::serde_util::big_string")]
    pub multiplicity: BigInt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KostkaMethod {
    Direct,
    Hive,
}

fn check_cap(size: u64, cap: u64) -> Result<(), KlimykError> {
    if size > cap {
        Err(KlimykError::SizeCap { size, cap })
    } else {
        Ok(())
    }
}

/// Counts semistandard tableaux of shape `shape` and content `content` by peeling off the
/// largest letter as a horizontal strip.
struct SsytCounter {
    memo: HashMap<(Vec<u64>, Vec<u64>), BigInt>,
}

impl SsytCounter {
    fn new() -> Self {
        Self {
            memo: HashMap::new(),
        }
    }

    fn count(&mut self, shape: &[u64], content: &[u64]) -> BigInt {
        let m = content.len();
        if m == 0 {
            return if shape.iter().all(|&p| p == 0) {
                BigInt::one()
            } else {
                BigInt::zero()
            };
        }
        let key = (shape.to_vec(), content.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let mut total = BigInt::zero();
        let mut inner = shape.to_vec();
        self.strips(shape, &mut inner, 0, content[m - 1], &content[..m - 1], &mut total);
        self.memo.insert(key, total.clone());
        total
    }

    /// Enumerates `inner` with `shape / inner` a horizontal strip of size `left`.
    fn strips(
        &mut self,
        shape: &[u64],
        inner: &mut Vec<u64>,
        row: usize,
        left: u64,
        rest: &[u64],
        total: &mut BigInt,
    ) {
        if row == shape.len() {
            if left == 0 {
                *total += self.count(inner, rest);
            }
            return;
        }
        let lo = shape.get(row + 1).copied().unwrap_or(0);
        let hi = shape[row];
        let max_remove = (hi - lo).min(left);
        for removed in 0..=max_remove {
            inner[row] = hi - removed;
            self.strips(shape, inner, row + 1, left - removed, rest, total);
        }
        inner[row] = hi;
    }
}

/// Number of semistandard tableaux of shape `lambda` with content `content`.
pub fn kostka_direct(lambda: &HighestWeight, content: &[u64]) -> BigInt {
    if lambda.size() != content.iter().sum::<u64>() {
        return BigInt::zero();
    }
    SsytCounter::new().count(lambda.parts(), content)
}

/// `K_{lambda mu}` by tableau enumeration or through the hive polytope of
/// [`kostka_to_lr`]'s triple.
pub fn kostka(lambda: &HighestWeight, mu: &[u64], via: KostkaMethod) -> Result<BigInt, KlimykError> {
    kostka_with_cap(lambda, mu, via, DEFAULT_SIZE_CAP)
}

pub fn kostka_with_cap(
    lambda: &HighestWeight,
    mu: &[u64],
    via: KostkaMethod,
    cap: u64,
) -> Result<BigInt, KlimykError> {
    if lambda.size() != mu.iter().sum::<u64>() {
        return Ok(BigInt::zero());
    }
    match via {
        KostkaMethod::Direct => {
            check_cap(lambda.size(), cap)?;
            Ok(kostka_direct(lambda, mu))
        }
        KostkaMethod::Hive => {
            if mu.is_empty() || lambda.length() > mu.len() {
                return Ok(BigInt::zero());
            }
            let (sigma, tau) = kostka_to_lr(lambda, mu)?;
            let triple = WeightTriple::new(sigma, lambda.clone(), tau);
            let p = build_hive_polytope(&triple)?.to_polytope();
            Ok(count_barvinok(&p)?.value)
        }
    }
}

fn compositions(total: u64, parts: usize) -> Vec<Vec<u64>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    let mut cur = vec![0u64; parts];
    fn rec(total: u64, i: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i + 1 == cur.len() {
            cur[i] = total;
            out.push(cur.clone());
            return;
        }
        for v in (0..=total).rev() {
            cur[i] = v;
            rec(total - v, i + 1, cur, out);
        }
    }
    rec(total, 0, &mut cur, &mut out);
    out
}

/// All weights of `V_lambda` with their multiplicities.
pub fn weight_multiplicities(lambda: &HighestWeight) -> Result<BTreeMap<AmbientWeight, BigInt>, KlimykError> {
    weight_multiplicities_with_cap(lambda, DEFAULT_SIZE_CAP)
}

pub fn weight_multiplicities_with_cap(
    lambda: &HighestWeight,
    cap: u64,
) -> Result<BTreeMap<AmbientWeight, BigInt>, KlimykError> {
    check_cap(lambda.size(), cap)?;
    let mut counter = SsytCounter::new();
    let mut dominant: HashMap<Vec<u64>, BigInt> = HashMap::new();
    let mut out = BTreeMap::new();
    for eps in compositions(lambda.size(), lambda.len()) {
        let mut sorted = eps.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let k = dominant
            .entry(sorted.clone())
            .or_insert_with(|| counter.count(lambda.parts(), &sorted))
            .clone();
        if k.is_positive() {
            out.insert(AmbientWeight(eps.iter().map(|&v| v as i64).collect()), k);
        }
    }
    Ok(out)
}

/// Sorts `w` decreasingly, returning the sign of the sorting permutation, or `None` when
/// `w` has a repeated coordinate.
pub fn dominant_conjugate(w: &AmbientWeight) -> Option<(AmbientWeight, i32)> {
    let c = &w.0;
    let mut inversions = 0usize;
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            if c[i] == c[j] {
                return None;
            }
            if c[i] < c[j] {
                inversions += 1;
            }
        }
    }
    let mut sorted = c.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let sign = if inversions % 2 == 0 { 1 } else { -1 };
    Some((AmbientWeight(sorted), sign))
}

/// `V_lambda ⊗ V_mu` decomposed by Klimyk's formula, terms sorted by `nu`.
pub fn klimyk_decompose(lambda: &HighestWeight, mu: &HighestWeight) -> Result<Vec<DecompositionTerm>, KlimykError> {
    klimyk_decompose_with_cap(lambda, mu, DEFAULT_SIZE_CAP)
}

pub fn klimyk_decompose_with_cap(
    lambda: &HighestWeight,
    mu: &HighestWeight,
    cap: u64,
) -> Result<Vec<DecompositionTerm>, KlimykError> {
    check_cap(mu.size(), cap)?;
    let n = lambda.len().max(mu.len());
    let lambda = lambda.padded(n)?;
    let mu = mu.padded(n)?;
    let weights = weight_multiplicities_with_cap(&lambda, cap)?;
    let mut acc: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
    for (eps, k) in &weights {
        let shifted: Vec<i64> = eps
            .0
            .iter()
            .zip(mu.parts())
            .enumerate()
            .map(|(i, (e, m))| e + *m as i64 + (n - 1 - i) as i64)
            .collect();
        let Some((dom, sign)) = dominant_conjugate(&AmbientWeight(shifted)) else {
            continue;
        };
        let nu: Vec<i64> = dom.0.iter().enumerate().map(|(i, v)| v - (n - 1 - i) as i64).collect();
        let entry = acc.entry(nu).or_insert_with(BigInt::zero);
        if sign > 0 {
            *entry += k;
        } else {
            *entry -= k;
        }
    }
    let mut out = Vec::new();
    for (nu, m) in acc {
        debug_assert!(!m.is_negative(), "Klimyk multiplicity is negative at {nu:?}");
        if m.is_positive() {
            let parts = nu.iter().map(|&v| v as u64).collect();
            out.push(DecompositionTerm {
                nu: HighestWeight::new(parts)?,
                multiplicity: m,
            });
        }
    }
    Ok(out)
}

/// Coefficient of `nu` in [`klimyk_decompose`].
pub fn klimyk_coefficient(lambda: &HighestWeight, mu: &HighestWeight, nu: &HighestWeight) -> Result<BigInt, KlimykError> {
    let n = lambda.len().max(mu.len()).max(nu.len());
    let nu = nu.padded(n)?;
    Ok(klimyk_decompose(&lambda.padded(n)?, &mu.padded(n)?)?
        .into_iter()
        .find(|t| t.nu == nu)
        .map_or_else(BigInt::zero, |t| t.multiplicity))
}

/// Number of Littlewood-Richardson tableaux of shape `nu / lambda` and content `mu`.
pub fn lr_tableau_count(lambda: &HighestWeight, mu: &HighestWeight, nu: &HighestWeight) -> Result<BigInt, KlimykError> {
    lr_tableau_count_with_cap(lambda, mu, nu, DEFAULT_SIZE_CAP)
}

pub fn lr_tableau_count_with_cap(
    lambda: &HighestWeight,
    mu: &HighestWeight,
    nu: &HighestWeight,
    cap: u64,
) -> Result<BigInt, KlimykError> {
    check_cap(nu.size(), cap)?;
    if nu.size() != lambda.size() + mu.size() {
        return Ok(BigInt::zero());
    }
    let n = lambda.len().max(mu.len()).max(nu.len());
    let lam = lambda.padded(n)?;
    let nu = nu.padded(n)?;
    if lam.parts().iter().zip(nu.parts()).any(|(a, b)| a > b) {
        return Ok(BigInt::zero());
    }
    let content: Vec<u64> = mu.parts().iter().copied().filter(|&v| v > 0).collect();
    let mut search = LrSearch {
        outer: nu.parts().to_vec(),
        inner: lam.parts().to_vec(),
        content,
        rows: Vec::new(),
        count: BigInt::zero(),
    };
    let mut used = vec![0u64; search.content.len()];
    search.row(0, &mut used);
    Ok(search.count)
}

struct LrSearch {
    outer: Vec<u64>,
    inner: Vec<u64>,
    content: Vec<u64>,
    /// Letter in each column of every filled row (index by absolute column).
    rows: Vec<Vec<Option<usize>>>,
    count: BigInt,
}

impl LrSearch {
    fn row(&mut self, r: usize, used: &mut Vec<u64>) {
        if r == self.outer.len() {
            if used.iter().zip(&self.content).all(|(u, c)| u == c) {
                self.count += 1;
            }
            return;
        }
        let len = (self.outer[r] - self.inner[r]) as usize;
        let mut counts = vec![0u64; self.content.len()];
        let before = used.clone();
        self.letters(r, 0, len, &mut counts, &before, used);
    }

    /// Chooses how many copies of letter `j` go into row `r`.
    fn letters(&mut self, r: usize, j: usize, left: usize, counts: &mut Vec<u64>, before: &[u64], used: &mut Vec<u64>) {
        let m = self.content.len();
        if j == m {
            if left != 0 {
                return;
            }
            let start = self.inner[r] as usize;
            let mut filling = vec![None; self.outer[r] as usize];
            let mut col = start;
            for (letter, &c) in counts.iter().enumerate() {
                for _ in 0..c {
                    filling[col] = Some(letter);
                    col += 1;
                }
            }
            // columns strictly increase downward
            if let Some(prev) = self.rows.last() {
                for c in start..filling.len() {
                    if let (Some(Some(above)), Some(here)) = (prev.get(c), filling[c]) {
                        if *above >= here {
                            return;
                        }
                    }
                }
            }
            self.rows.push(filling);
            self.row(r + 1, used);
            self.rows.pop();
            return;
        }
        let avail = (self.content[j] - used[j]) as usize;
        for c in 0..=avail.min(left) {
            // lattice condition for the pair (j - 1, j) when this row is read right to left
            if j > 0 && before[j] + c as u64 > before[j - 1] {
                break;
            }
            counts[j] = c as u64;
            used[j] += c as u64;
            self.letters(r, j + 1, left - c, counts, before, used);
            used[j] -= c as u64;
        }
        counts[j] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hw(p: &[u64]) -> HighestWeight {
        HighestWeight::new(p.to_vec()).unwrap()
    }

    fn aw(c: &[i64]) -> AmbientWeight {
        AmbientWeight(c.to_vec())
    }

    #[test]
    fn multiplicities() {
        let w = weight_multiplicities(&hw(&[2, 1, 0])).unwrap();
        assert_eq!(w[&aw(&[1, 1, 1])], BigInt::from(2));
        assert_eq!(w[&aw(&[0, 1, 2])], BigInt::one());
        assert_eq!(w.len(), 7);
        let std = weight_multiplicities(&hw(&[1, 0, 0, 0])).unwrap();
        assert_eq!(std.len(), 4);
        assert!(std.values().all(|k| k.is_one()));
        for n in 0..5u64 {
            let row = weight_multiplicities(&hw(&[n, 0])).unwrap();
            for k in 0..=n {
                assert_eq!(row[&aw(&[k as i64, (n - k) as i64])], BigInt::one());
            }
        }
        assert_eq!(
            weight_multiplicities(&hw(&[31])),
            Err(KlimykError::SizeCap { size: 31, cap: 30 })
        );
    }

    #[test]
    fn conjugates() {
        assert_eq!(dominant_conjugate(&aw(&[3, 1, 2])), Some((aw(&[3, 2, 1]), -1)));
        assert_eq!(dominant_conjugate(&aw(&[5, 4, 2])), Some((aw(&[5, 4, 2]), 1)));
        assert_eq!(dominant_conjugate(&aw(&[2, 2, 0])), None);
        assert_eq!(dominant_conjugate(&aw(&[0, 1, 2])), Some((aw(&[2, 1, 0]), -1)));
    }

    #[test]
    fn decompositions() {
        let t = klimyk_decompose(&hw(&[1, 0]), &hw(&[1, 0])).unwrap();
        assert_eq!(
            t,
            vec![
                DecompositionTerm {
                    nu: hw(&[1, 1]),
                    multiplicity: BigInt::one()
                },
                DecompositionTerm {
                    nu: hw(&[2, 0]),
                    multiplicity: BigInt::one()
                },
            ]
        );
        let t = klimyk_decompose(&hw(&[3, 1, 0]), &hw(&[0, 0, 0])).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].nu, hw(&[3, 1, 0]));
        assert_eq!(
            klimyk_coefficient(&hw(&[2, 1, 0]), &hw(&[2, 1, 0]), &hw(&[3, 2, 1])).unwrap(),
            BigInt::from(2)
        );
    }

    #[test]
    fn lr_counts() {
        assert_eq!(
            lr_tableau_count(&hw(&[2, 1, 0]), &hw(&[2, 1, 0]), &hw(&[3, 2, 1])).unwrap(),
            BigInt::from(2)
        );
        assert!(lr_tableau_count(&hw(&[6, 3, 2, 0]), &hw(&[4, 3, 1]), &hw(&[8, 6, 3, 2]))
            .unwrap()
            .is_positive());
        assert_eq!(
            lr_tableau_count(&hw(&[3, 1]), &hw(&[0]), &hw(&[3, 1])).unwrap(),
            BigInt::one()
        );
        assert_eq!(
            lr_tableau_count(&hw(&[1, 0]), &hw(&[1, 0]), &hw(&[3, 0])).unwrap(),
            BigInt::zero()
        );
        assert_eq!(
            lr_tableau_count(&hw(&[2, 1]), &hw(&[2, 1]), &hw(&[4, 2])).unwrap(),
            BigInt::one()
        );
    }

    #[test]
    fn kostka_numbers() {
        for via in [KostkaMethod::Direct, KostkaMethod::Hive] {
            assert_eq!(kostka(&hw(&[2, 1]), &[1, 1, 1], via).unwrap(), BigInt::from(2));
            assert_eq!(kostka(&hw(&[4, 2, 1]), &[4, 2, 1], via).unwrap(), BigInt::one());
            assert_eq!(kostka(&hw(&[2, 1]), &[1, 1], via).unwrap(), BigInt::zero());
        }
        let direct = kostka(&hw(&[4, 3, 1]), &[2, 3, 1, 2], KostkaMethod::Direct).unwrap();
        assert!(direct.is_positive());
        assert_eq!(kostka(&hw(&[4, 3, 1]), &[2, 3, 1, 2], KostkaMethod::Hive).unwrap(), direct);
        let (sigma, tau) = kostka_to_lr(&hw(&[4, 3, 1]), &[2, 3, 1, 2]).unwrap();
        assert_eq!(lr_tableau_count(&sigma, &hw(&[4, 3, 1]), &tau).unwrap(), direct);
        // three-row shape with content longer than the shape
        assert_eq!(kostka(&hw(&[3, 0, 0]), &[1, 1, 1], KostkaMethod::Hive).unwrap(), BigInt::one());
    }

    #[test]
    fn oracles_agree_on_small_products() {
        let shapes = [hw(&[2, 1, 0]), hw(&[3, 0, 0]), hw(&[1, 1, 1]), hw(&[2, 2, 0])];
        for l in &shapes {
            for m in &shapes {
                let terms = klimyk_decompose(l, m).unwrap();
                for t in &terms {
                    assert_eq!(lr_tableau_count(l, m, &t.nu).unwrap(), t.multiplicity);
                }
                // every LR-positive target appears
                let total: BigInt = terms.iter().map(|t| t.multiplicity.clone()).sum();
                assert!(total.is_positive());
            }
        }
    }
}
