//! Exact Laurent polynomials in one variable and exact integer linear algebra.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("symmetric form is singular (nullity {0})")]
    SingularForm(usize),
}

/// Integer Laurent polynomial in `T`. Zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: impl Into<BigInt>, exp: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, c.into());
        p
    }

    /// `T`
    pub fn t() -> Self {
        Self::monomial(1, 1)
    }

    /// Builds `sum coeffs[k] * T^(low + k)`.
    pub fn from_coeffs(low: i64, coeffs: &[i64]) -> Self {
        let mut p = Self::zero();
        for (k, &c) in coeffs.iter().enumerate() {
            p.add_term(low + k as i64, BigInt::from(c));
        }
        p
    }

    fn add_term(&mut self, exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(exp).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_default()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut p = Self::zero();
        for (e, a) in self.terms() {
            p.add_term(e, a * c);
        }
        p
    }

    /// Multiplies by `T^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Substitutes `T -> T^-1`.
    pub fn invert_variable(&self) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.invert_variable()
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    /// Exact division. `None` when `other` does not divide `self`.
    pub fn div_exact(&self, other: &LaurentPoly) -> Option<LaurentPoly> {
        let (blo, bhi) = (other.min_exp()?, other.max_exp()?);
        let lead = &other.coeffs[&bhi];
        let mut rem = self.clone();
        let mut q = LaurentPoly::zero();
        while let (Some(lo), Some(hi)) = (rem.min_exp(), rem.max_exp()) {
            if hi - lo < bhi - blo {
                return None;
            }
            let (c, r) = rem.coeffs[&hi].div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            let term = LaurentPoly::monomial(c, hi - bhi);
            rem = &rem - &(&term * other);
            q = &q + &term;
        }
        Some(q)
    }
}

/// `p''(1)`, computed term by term.
pub fn second_derivative_at_one(p: &LaurentPoly) -> BigInt {
    p.terms()
        .map(|(e, c)| c * BigInt::from(e) * BigInt::from(e - 1))
        .sum()
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut p = self.clone();
        for (e, c) in rhs.terms() {
            p.add_term(e, c.clone());
        }
        p
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut p = self.clone();
        for (e, c) in rhs.terms() {
            p.add_term(e, -c.clone());
        }
        p
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                p.add_term(e1 + e2, c1 * c2);
            }
        }
        p
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&BigInt::from(-1))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.coeffs.iter().rev().enumerate() {
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match *e {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if *e == 1 {
                        write!(f, "T")?;
                    } else {
                        write!(f, "T^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

/// Determinant over the Laurent ring by fraction-free (Bareiss) elimination.
pub fn det_laurent(m: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let n = m.len();
    let mut a: Vec<Vec<LaurentPoly>> = m.to_vec();
    let mut prev = LaurentPoly::one();
    let mut negate = false;
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return LaurentPoly::zero();
            };
            a.swap(k, r);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .div_exact(&prev)
                    .expect("Bareiss step divides exactly in an integral domain");
            }
        }
        prev = a[k][k].clone();
    }
    let d = if n == 0 { LaurentPoly::one() } else { a[n - 1][n - 1].clone() };
    if negate {
        -&d
    } else {
        d
    }
}

/// Dense square integer matrix.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct IntMatrix {
    n: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix { n, data: vec![BigInt::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self, AlgebraError> {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(AlgebraError::NotSquare);
            }
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, v.clone().into());
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j).clone()).collect()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a - b)
    }

    fn zip(&self, o: &Self, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Self {
        assert_eq!(self.n, o.n);
        IntMatrix {
            n: self.n,
            data: self.data.iter().zip(&o.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let mut p = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let s: BigInt = (0..n).map(|k| self.get(i, k) * o.get(k, j)).sum();
                p.set(i, j, s);
            }
        }
        p
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    /// Integer determinant (Bareiss).
    pub fn det(&self) -> BigInt {
        let n = self.n;
        let mut a = self.rows();
        let mut prev = BigInt::one();
        let mut negate = false;
        for k in 0..n {
            if a[k][k].is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap(k, r);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        let d = if n == 0 { BigInt::one() } else { a[n - 1][n - 1].clone() };
        if negate {
            -d
        } else {
            d
        }
    }
}

/// Sylvester inertia of a symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn signature(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }
}

/// Inertia by symmetric rational pivoting.
///
/// Pivot order: the first nonzero remaining diagonal entry (swapped into
/// place); failing that, the first nonzero off-diagonal pair, used as a
/// 2x2 block. A 2x2 block with zero diagonal always has one positive and
/// one negative eigenvalue.
pub fn inertia(s: &IntMatrix) -> Result<Inertia, AlgebraError> {
    if !s.is_symmetric() {
        return Err(AlgebraError::NotSymmetric);
    }
    let n = s.dim();
    let mut a: Vec<Vec<BigRational>> = s
        .rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    let swap = |a: &mut Vec<Vec<BigRational>>, i: usize, j: usize| {
        if i != j {
            a.swap(i, j);
            for row in a.iter_mut() {
                row.swap(i, j);
            }
        }
    };
    let mut res = Inertia::default();
    let mut k = 0;
    while k < n {
        if let Some(i) = (k..n).find(|&i| !a[i][i].is_zero()) {
            swap(&mut a, i, k);
            let p = a[k][k].clone();
            if p.is_positive() {
                res.positive += 1;
            } else {
                res.negative += 1;
            }
            for r in k + 1..n {
                if a[r][k].is_zero() {
                    continue;
                }
                let f = &a[r][k] / &p;
                for c in k + 1..n {
                    let d = &f * &a[k][c];
                    a[r][c] -= d;
                }
            }
            for r in k + 1..n {
                a[r][k] = BigRational::zero();
                a[k][r] = BigRational::zero();
            }
            k += 1;
            continue;
        }
        let pair = (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero());
        let Some((i, j)) = pair else {
            res.zero += n - k;
            break;
        };
        swap(&mut a, i, k);
        swap(&mut a, j, k + 1);
        let b = a[k][k + 1].clone();
        res.positive += 1;
        res.negative += 1;
        for r in k + 2..n {
            let x = a[r][k].clone();
            let y = a[r][k + 1].clone();
            if x.is_zero() && y.is_zero() {
                continue;
            }
            for c in k + 2..n {
                let d = (&y * &a[k][c] + &x * &a[k + 1][c]) / &b;
                a[r][c] -= d;
            }
        }
        for r in k + 2..n {
            for c in [k, k + 1] {
                a[r][c] = BigRational::zero();
                a[c][r] = BigRational::zero();
            }
        }
        k += 2;
    }
    Ok(res)
}

/// Signature of a nonsingular symmetric integer matrix.
pub fn symmetric_signature(s: &IntMatrix) -> Result<i64, AlgebraError> {
    let i = inertia(s)?;
    if i.zero > 0 {
        return Err(AlgebraError::SingularForm(i.zero));
    }
    Ok(i.signature())
}
