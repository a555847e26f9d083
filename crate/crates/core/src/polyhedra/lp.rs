//! Dense two-phase simplex over exact rationals with Bland's rule.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::linalg::rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal {
        value: BigRational,
        point: Vec<BigRational>,
    },
}

/// `optimize c.x` over `{ x free : eq x = eq_rhs, ineq x <= ineq_rhs }`.
#[derive(Debug, Clone)]
pub struct LinearProgram<'a> {
    pub nvars: usize,
    pub eq: &'a [Vec<BigInt>],
    pub eq_rhs: &'a [BigInt],
    pub ineq: &'a [Vec<BigInt>],
    pub ineq_rhs: &'a [BigInt],
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &BigRational {
        &self.rows[r][self.ncols]
    }

    fn pivot(&mut self, r: usize, c: usize, obj: &mut [BigRational]) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            *v *= &inv;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        if !obj[c].is_zero() {
            let f = obj[c].clone();
            for (x, y) in obj.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Reduced-cost row (with `-value` in the last slot) for minimizing `cost`.
    fn objective_row(&self, cost: &[BigRational]) -> Vec<BigRational> {
        let mut obj: Vec<BigRational> = cost.to_vec();
        obj.push(BigRational::zero());
        for (r, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            let f = cost[b].clone();
            for (x, y) in obj.iter_mut().zip(&self.rows[r]) {
                *x -= &f * y;
            }
        }
        obj
    }

    /// Minimizes; returns false when unbounded.
    fn run(&mut self, obj: &mut Vec<BigRational>, allowed: &[bool]) -> bool {
        loop {
            let Some(enter) = (0..self.ncols).find(|&j| allowed[j] && obj[j].is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, BigRational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                let better = match &leave {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < *lratio || (ratio == *lratio && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return false;
            };
            self.pivot(r, enter, obj);
        }
    }
}

impl LinearProgram<'_> {
    /// Minimizes (or maximizes) `objective . x`.
    pub fn optimize(&self, objective: &[BigInt], maximize: bool) -> LpOutcome {
        let n = self.nvars;
        let me = self.eq.len();
        let mi = self.ineq.len();
        let m = me + mi;
        // columns: p (n), q (n), slacks (mi), artificials (m)
        let slack0 = 2 * n;
        let art0 = slack0 + mi;
        let ncols = art0 + m;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut needs_art = Vec::with_capacity(m);
        for r in 0..m {
            let (coef, b, slack) = if r < me {
                (&self.eq[r], &self.eq_rhs[r], None)
            } else {
                (&self.ineq[r - me], &self.ineq_rhs[r - me], Some(slack0 + r - me))
            };
            let flip = b.is_negative();
            let sgn = |v: BigRational| if flip { -v } else { v };
            let mut row = vec![BigRational::zero(); ncols + 1];
            for j in 0..n {
                if !coef[j].is_zero() {
                    row[j] = sgn(rat(&coef[j]));
                    row[n + j] = -row[j].clone();
                }
            }
            if let Some(s) = slack {
                row[s] = sgn(BigRational::one());
            }
            row[ncols] = sgn(rat(b));
            match slack {
                Some(s) if !flip => {
                    basis.push(s);
                    needs_art.push(false);
                }
                _ => {
                    row[art0 + r] = BigRational::one();
                    basis.push(art0 + r);
                    needs_art.push(true);
                }
            }
            rows.push(row);
        }
        let mut t = Tableau { rows, basis, ncols };

        if needs_art.iter().any(|&a| a) {
            let mut cost = vec![BigRational::zero(); ncols];
            for r in 0..m {
                if needs_art[r] {
                    cost[art0 + r] = BigRational::one();
                }
            }
            let mut obj = t.objective_row(&cost);
            let allowed: Vec<bool> = (0..ncols)
                .map(|j| j < art0 || needs_art[j - art0])
                .collect();
            t.run(&mut obj, &allowed);
            if !obj[ncols].is_zero() {
                return LpOutcome::Infeasible;
            }
            // drive artificials out of the basis, dropping redundant rows
            let mut r = 0;
            while r < t.rows.len() {
                if t.basis[r] >= art0 {
                    match (0..art0).find(|&j| !t.rows[r][j].is_zero()) {
                        Some(j) => {
                            let mut dummy = vec![BigRational::zero(); ncols + 1];
                            t.pivot(r, j, &mut dummy);
                        }
                        None => {
                            t.rows.remove(r);
                            t.basis.remove(r);
                            continue;
                        }
                    }
                }
                r += 1;
            }
        }

        let mut cost = vec![BigRational::zero(); ncols];
        for j in 0..n {
            let c = rat(&objective[j]);
            let c = if maximize { -c } else { c };
            cost[n + j] = -c.clone();
            cost[j] = c;
        }
        let mut obj = t.objective_row(&cost);
        let allowed: Vec<bool> = (0..ncols).map(|j| j < art0).collect();
        if !t.run(&mut obj, &allowed) {
            return LpOutcome::Unbounded;
        }
        let mut z = vec![BigRational::zero(); ncols];
        for (r, &b) in t.basis.iter().enumerate() {
            z[b] = t.rows[r][ncols].clone();
        }
        let point: Vec<BigRational> = (0..n).map(|j| &z[j] - &z[n + j]).collect();
        let value = point
            .iter()
            .zip(objective)
            .fold(BigRational::zero(), |acc, (x, c)| acc + x * c);
        LpOutcome::Optimal { value, point }
    }

    pub fn is_feasible(&self) -> bool {
        let zero = vec![BigInt::zero(); self.nvars];
        !matches!(self.optimize(&zero, false), LpOutcome::Infeasible)
    }
}
