//! LattE-style polytope files.
//!
//! ```text
//! m d+1
//! c a_1 ... a_d        (c + a.x >= 0, or = 0 for linearity rows)
//! ...
//! linearity k i_1 ... i_k
//! ```

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::polyhedra::{HRepPolytope, PolyhedraError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatteError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Polyhedra(#[from] PolyhedraError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolytopeFile {
    /// Rows `[c, a_1, ..., a_d]`.
    pub rows: Vec<Vec<i64>>,
    /// Sorted 1-based indices of equality rows.
    pub linearity: Vec<usize>,
    pub dim: usize,
}

impl PolytopeFile {
    /// Equalities first (all listed as linearity), then inequalities.
    pub fn from_polytope(p: &HRepPolytope) -> Self {
        let row = |a: &[i64], b: i64| {
            let mut r = Vec::with_capacity(a.len() + 1);
            r.push(b);
            r.extend(a.iter().map(|v| -v));
            r
        };
        let mut rows: Vec<Vec<i64>> = p.eq_matrix().iter().zip(p.eq_rhs()).map(|(a, &b)| row(a, b)).collect();
        let linearity = (1..=rows.len()).collect();
        rows.extend(p.ineq_matrix().iter().zip(p.ineq_rhs()).map(|(a, &b)| row(a, b)));
        Self {
            rows,
            linearity,
            dim: p.dim(),
        }
    }

    pub fn to_polytope(&self) -> Result<HRepPolytope, LatteError> {
        let (mut em, mut er, mut im, mut ir) = (vec![], vec![], vec![], vec![]);
        for (i, r) in self.rows.iter().enumerate() {
            let a: Vec<i64> = r[1..].iter().map(|v| -v).collect();
            if self.linearity.binary_search(&(i + 1)).is_ok() {
                em.push(a);
                er.push(r[0]);
            } else {
                im.push(a);
                ir.push(r[0]);
            }
        }
        Ok(HRepPolytope::new(self.dim, em, er, im, ir)?)
    }

    pub fn inequality_count(&self) -> usize {
        self.rows.len() - self.linearity.len()
    }
}

impl fmt::Display for PolytopeFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows.len(), self.dim + 1)?;
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(i64::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        if !self.linearity.is_empty() {
            let idx: Vec<String> = self.linearity.iter().map(usize::to_string).collect();
            writeln!(f, "linearity {} {}", self.linearity.len(), idx.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for PolytopeFile {
    type Err = LatteError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |line: usize, msg: String| LatteError::Syntax { line, msg };
        let ints = |line: usize, text: &str| -> Result<Vec<i64>, LatteError> {
            text.split_whitespace()
                .map(|t| t.parse::<i64>().map_err(|_| err(line, format!("not an integer: {t:?}"))))
                .collect()
        };
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
        let header = ints(hl, header)?;
        let [m, width] = header[..] else {
            return Err(err(hl, "header must be \"m d+1\"".into()));
        };
        if m < 0 || width < 1 {
            return Err(err(hl, "header must be \"m d+1\"".into()));
        }
        let (m, width) = (m as usize, width as usize);
        let mut rows = Vec::with_capacity(m);
        let mut linearity = Vec::new();
        for (ln, text) in lines {
            if let Some(rest) = text.strip_prefix("linearity") {
                let v = ints(ln, rest)?;
                let k = *v.first().ok_or_else(|| err(ln, "linearity needs a count".into()))?;
                if k < 0 || v.len() != k as usize + 1 {
                    return Err(err(ln, format!("linearity announces {k} rows, lists {}", v.len().saturating_sub(1))));
                }
                for &i in &v[1..] {
                    if i < 1 || i as usize > m {
                        return Err(err(ln, format!("linearity index {i} out of range")));
                    }
                    linearity.push(i as usize);
                }
                continue;
            }
            if rows.len() == m {
                return Err(err(ln, format!("more than {m} rows")));
            }
            let r = ints(ln, text)?;
            if r.len() != width {
                return Err(err(ln, format!("expected {width} entries, got {}", r.len())));
            }
            rows.push(r);
        }
        if rows.len() != m {
            return Err(err(hl, format!("header announces {m} rows, found {}", rows.len())));
        }
        linearity.sort_unstable();
        linearity.dedup();
        Ok(Self {
            rows,
            linearity,
            dim: width - 1,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hive::build_hive_polytope;
    use crate::weights::WeightTriple;

    #[test]
    fn zero_triple_export() {
        let t = WeightTriple::parse("0,0", "0,0", "0,0").unwrap();
        let p = build_hive_polytope(&t).unwrap().to_polytope();
        let f = PolytopeFile::from_polytope(&p);
        assert_eq!(f.linearity.len(), 7);
        assert_eq!(f.inequality_count(), 3);
        let text = f.to_string();
        assert!(text.starts_with("10 7\n"));
        assert!(text.trim_end().ends_with("linearity 7 1 2 3 4 5 6 7"));
        let back: PolytopeFile = text.parse().unwrap();
        assert_eq!(back, f);
        assert_eq!(back.to_polytope().unwrap(), p);
    }

    #[test]
    fn square() {
        let f: PolytopeFile = "4 3\n0 1 0\n0 0 1\n2 -1 0\n2 0 -1\n".parse().unwrap();
        let p = f.to_polytope().unwrap();
        assert_eq!(p.ineq_matrix(), &[vec![-1, 0], vec![0, -1], vec![1, 0], vec![0, 1]]);
        assert_eq!(p.ineq_rhs(), &[0, 0, 2, 2]);
        assert_eq!(crate::counting::count_naive(&p).unwrap().value, 9.into());
    }

    #[test]
    fn rejects_bad_input() {
        assert!("".parse::<PolytopeFile>().is_err());
        assert!("2 3\n0 1 0\n".parse::<PolytopeFile>().is_err());
        assert!("1 3\n0 1\n".parse::<PolytopeFile>().is_err());
        assert!("1 3\n0 1 x\n".parse::<PolytopeFile>().is_err());
        assert!("1 3\n0 1 0\nlinearity 1 2\n".parse::<PolytopeFile>().is_err());
        assert!("1 3\n0 1 0\nlinearity 2 1\n".parse::<PolytopeFile>().is_err());
    }
}
