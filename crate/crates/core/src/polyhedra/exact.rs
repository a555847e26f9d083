//! Integer arithmetic abstraction for the hot enumeration loops: checked `i128` first,
//! `BigInt` when a computation overflows.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

pub(crate) trait Exact: Clone + Eq + Hash + Debug + Send + Sync {
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn signum(&self) -> i32;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    fn div_exact(&self, o: &Self) -> Self;
    fn gcd(&self, o: &Self) -> Self;
}

impl Exact for i128 {
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn signum(&self) -> i32 {
        i128::signum(*self) as i32
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
}

impl Exact for BigInt {
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn zero() -> Self {
        <BigInt as Zero>::zero()
    }
    fn one() -> Self {
        BigInt::from(1)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn signum(&self) -> i32 {
        if Signed::is_negative(self) {
            -1
        } else if Zero::is_zero(self) {
            0
        } else {
            1
        }
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
}

pub(crate) fn convert_matrix<T: Exact>(m: &[Vec<BigInt>]) -> Option<Vec<Vec<T>>> {
    m.iter()
        .map(|r| r.iter().map(T::from_big).collect::<Option<Vec<T>>>())
        .collect()
}

/// `sum a_i b_i`, or `None` on overflow.
pub(crate) fn dot<T: Exact>(a: &[T], b: &[T]) -> Option<T> {
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        acc = acc.add(&x.mul(y)?)?;
    }
    Some(acc)
}

/// Divides a vector by the gcd of its entries.
pub(crate) fn normalize<T: Exact>(v: &mut [T]) {
    let mut g = T::zero();
    for x in v.iter() {
        g = g.gcd(x);
        if g == T::one() {
            return;
        }
    }
    if g.is_zero() {
        return;
    }
    for x in v.iter_mut() {
        *x = x.div_exact(&g);
    }
}

/// Echelon rows built by successive fraction-free elimination.
///
/// Each stored row is reduced against all earlier rows, so the pivot columns of earlier
/// rows are zero in later ones.
#[derive(Clone, Debug)]
pub(crate) struct Echelon<T> {
    pub rows: Vec<Vec<T>>,
    pub pivots: Vec<usize>,
    /// Number of leading columns that belong to the coefficient part; the rest is carried.
    pub width: usize,
}

pub(crate) enum Reduced<T> {
    Independent(Vec<T>, usize),
    Dependent,
}

impl<T: Exact> Echelon<T> {
    pub fn new(width: usize) -> Self {
        Self {
            rows: Vec::new(),
            pivots: Vec::new(),
            width,
        }
    }

    pub fn reduce(&self, mut row: Vec<T>) -> Option<Reduced<T>> {
        for (er, &pc) in self.rows.iter().zip(&self.pivots) {
            if row[pc].is_zero() {
                continue;
            }
            let f = row[pc].clone();
            let p = er[pc].clone();
            for (x, y) in row.iter_mut().zip(er) {
                let a = x.mul(&p)?;
                let b = if y.is_zero() { T::zero() } else { y.mul(&f)? };
                *x = a.sub(&b)?;
            }
            normalize(&mut row);
        }
        match (0..self.width).find(|&c| !row[c].is_zero()) {
            Some(pc) => Some(Reduced::Independent(row, pc)),
            None => Some(Reduced::Dependent),
        }
    }

    pub fn push(&mut self, row: Vec<T>, pivot: usize) {
        self.rows.push(row);
        self.pivots.push(pivot);
    }

    /// Solves the square system `rows[:, ..width] x = rhs(row)` by back substitution,
    /// returning `(numerators, positive denominator)` in lowest terms.
    ///
    /// `rhs` extracts the right-hand side of each stored row; `fixed` lists columns not
    /// covered by pivots together with the value (times the denominator) they take.
    pub fn back_substitute(
        &self,
        rhs: impl Fn(&[T]) -> Option<T>,
        fixed: &[(usize, T)],
    ) -> Option<(Vec<T>, T)> {
        let n = self.width;
        let mut num = vec![T::zero(); n];
        let mut den = T::one();
        for (c, v) in fixed {
            num[*c] = v.clone();
        }
        let mut known = vec![false; n];
        for (c, _) in fixed {
            known[*c] = true;
        }
        for (row, &p) in self.rows.iter().zip(&self.pivots).rev() {
            // row[p] x_p + sum_{known q} row[q] x_q = r
            let mut acc = rhs(row)?.mul(&den)?;
            for q in 0..n {
                if known[q] && !row[q].is_zero() && !num[q].is_zero() {
                    acc = acc.sub(&row[q].mul(&num[q])?)?;
                }
            }
            let c = row[p].clone();
            for (q, v) in num.iter_mut().enumerate() {
                if known[q] && !v.is_zero() {
                    *v = v.mul(&c)?;
                }
            }
            den = den.mul(&c)?;
            num[p] = acc;
            known[p] = true;
            let mut g = den.clone();
            for v in &num {
                g = g.gcd(v);
            }
            if !g.is_zero() && g != T::one() {
                for v in num.iter_mut() {
                    *v = v.div_exact(&g);
                }
                den = den.div_exact(&g);
            }
        }
        if den.signum() < 0 {
            den = den.neg()?;
            for v in num.iter_mut() {
                *v = v.neg()?;
            }
        }
        Some((num, den))
    }
}
