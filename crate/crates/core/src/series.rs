//! Dense truncated power series over arbitrary-precision integers.
//!
//! A [`TruncSeries`] of order `N` knows the coefficients of `q^0 ..= q^N`
//! exactly and nothing beyond. Binary operations truncate to the smaller of
//! the two orders, so a result never claims more precision than its inputs.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Sign of a monomial `±q^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    // Invariant: never empty; len == order + 1.
    coeffs: Vec<BigInt>,
}

impl TruncSeries {
    pub fn zero(order: usize) -> Self {
        TruncSeries {
            coeffs: vec![BigInt::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(1, 0, order)
    }

    /// `c·q^e` known through `q^order`. Vanishes when `e > order`.
    pub fn monomial(c: impl Into<BigInt>, e: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if e <= order {
            s.coeffs[e] = c.into();
        }
        s
    }

    /// Builds a series of order `coeffs.len() - 1`.
    ///
    /// Panics on an empty vector: a series always knows at least `q^0`.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least one coefficient");
        TruncSeries { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// All-ones series `1/(1-q)` through `q^order`.
    pub fn geometric(order: usize) -> Self {
        TruncSeries {
            coeffs: vec![BigInt::one(); order + 1],
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, j: usize) -> &BigInt {
        &self.coeffs[j]
    }

    pub fn get(&self, j: usize) -> Option<&BigInt> {
        self.coeffs.get(j)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Forgets every coefficient above `order`. `order` larger than the
    /// current order is clamped: precision cannot be invented.
    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order());
        TruncSeries {
            coeffs: self.coeffs[..=n].to_vec(),
        }
    }

    pub fn truncate_in_place(&mut self, order: usize) {
        let n = order.min(self.order());
        self.coeffs.truncate(n + 1);
    }

    /// Multiplies by `q^e`. The product is known exactly through
    /// `q^(order + e)`.
    pub fn shift(&self, e: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); e];
        coeffs.extend(self.coeffs.iter().cloned());
        TruncSeries { coeffs }
    }

    /// Divides by `q^e`, assuming the coefficients below `q^e` vanish.
    /// Returns `None` when they do not or when nothing would remain.
    pub fn unshift(&self, e: usize) -> Option<Self> {
        if e > self.order() || self.coeffs[..e].iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(TruncSeries {
            coeffs: self.coeffs[e..].to_vec(),
        })
    }

    /// `self + s·q^e·b`, of order `min(order(self), order(b) + e)`.
    pub fn axpy_shift(&self, b: &TruncSeries, s: i64, e: usize) -> Self {
        let order = self.order().min(b.order() + e);
        let mut out = self.truncate(order);
        if s == 0 {
            return out;
        }
        let scale = BigInt::from(s);
        for (j, c) in out.coeffs.iter_mut().enumerate().skip(e) {
            let bj = &b.coeffs[j - e];
            match s {
                1 => *c += bj,
                -1 => *c -= bj,
                _ => *c += &scale * bj,
            }
        }
        out
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Schoolbook Cauchy product truncated to the smaller order.
    ///
    /// Zero coefficients of `self` are skipped, so multiplying by a sparse
    /// factor such as a finite Pochhammer product costs `O(N · nnz)`.
    pub fn mul(&self, b: &TruncSeries) -> Self {
        let order = self.order().min(b.order());
        let mut out = vec![BigInt::zero(); order + 1];
        for (i, ai) in self.coeffs.iter().enumerate().take(order + 1) {
            if ai.is_zero() {
                continue;
            }
            let unit = if ai.is_one() {
                Some(Sign::Plus)
            } else if (-ai).is_one() {
                Some(Sign::Minus)
            } else {
                None
            };
            for (dst, bj) in out[i..].iter_mut().zip(&b.coeffs) {
                match unit {
                    Some(Sign::Plus) => *dst += bj,
                    Some(Sign::Minus) => *dst -= bj,
                    None => *dst += ai * bj,
                }
            }
        }
        TruncSeries { coeffs: out }
    }

    /// Reciprocal series through the same order.
    ///
    /// Requires a constant term of `±1`, which keeps the result integral.
    pub fn invert(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        let sign = if a0.is_one() {
            Sign::Plus
        } else if (-a0).is_one() {
            Sign::Minus
        } else {
            return Err(Error::NonUnitConstant(a0.to_string()));
        };
        let support: Vec<(usize, &BigInt)> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let n = self.order();
        let mut out: Vec<BigInt> = Vec::with_capacity(n + 1);
        out.push(BigInt::from(sign.as_i64()));
        for j in 1..=n {
            let mut acc = BigInt::zero();
            for &(i, ai) in &support {
                if i > j {
                    break;
                }
                acc += ai * &out[j - i];
            }
            // c_j = -a0^{-1} * acc, and a0^{-1} = a0.
            if sign == Sign::Plus {
                acc = -acc;
            }
            out.push(acc);
        }
        Ok(TruncSeries { coeffs: out })
    }

    /// In place: `self *= (1 - sign·q^e)`.
    pub fn mul_one_minus(&mut self, sign: Sign, e: usize) {
        if e == 0 {
            match sign {
                Sign::Plus => self.coeffs.iter_mut().for_each(|c| c.set_zero()),
                Sign::Minus => self.coeffs.iter_mut().for_each(|c| *c *= 2),
            }
            return;
        }
        for j in (e..self.coeffs.len()).rev() {
            let (lo, hi) = self.coeffs.split_at_mut(j);
            match sign {
                Sign::Plus => hi[0] -= &lo[j - e],
                Sign::Minus => hi[0] += &lo[j - e],
            }
        }
    }

    /// In place: `self /= (1 - sign·q^e)`. Fails for `e = 0`, where the
    /// factor is `0` or `2`.
    pub fn div_one_minus(&mut self, sign: Sign, e: usize) -> Result<()> {
        if e == 0 {
            let c0 = if sign == Sign::Plus { 0 } else { 2 };
            return Err(Error::NonUnitConstant(c0.to_string()));
        }
        for j in e..self.coeffs.len() {
            let (lo, hi) = self.coeffs.split_at_mut(j);
            match sign {
                Sign::Plus => hi[0] += &lo[j - e],
                Sign::Minus => hi[0] -= &lo[j - e],
            }
        }
        Ok(())
    }

    /// First exponent in `from..=order` whose coefficient is negative.
    pub fn first_negative(&self, from: usize) -> Option<usize> {
        (from..self.coeffs.len()).find(|&j| self.coeffs[j].is_negative())
    }
}

/// `a + s·q^e·b`; see [`TruncSeries::axpy_shift`].
pub fn axpy_shift(a: &TruncSeries, b: &TruncSeries, s: i64, e: usize) -> TruncSeries {
    a.axpy_shift(b, s, e)
}

pub fn mul(a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
    a.mul(b)
}

pub fn invert(a: &TruncSeries) -> Result<TruncSeries> {
    a.invert()
}

impl Add for &TruncSeries {
    type Output = TruncSeries;

    fn add(self, rhs: &TruncSeries) -> TruncSeries {
        self.axpy_shift(rhs, 1, 0)
    }
}

impl Sub for &TruncSeries {
    type Output = TruncSeries;

    fn sub(self, rhs: &TruncSeries) -> TruncSeries {
        self.axpy_shift(rhs, -1, 0)
    }
}

impl Mul for &TruncSeries {
    type Output = TruncSeries;

    fn mul(self, rhs: &TruncSeries) -> TruncSeries {
        TruncSeries::mul(self, rhs)
    }
}

impl Neg for &TruncSeries {
    type Output = TruncSeries;

    fn neg(self) -> TruncSeries {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let mag = c.abs();
            match (j, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("q")?,
                (1, false) => write!(f, "{mag}q")?,
                (_, true) => write!(f, "q^{j}")?,
                (_, false) => write!(f, "{mag}q^{j}")?,
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}
