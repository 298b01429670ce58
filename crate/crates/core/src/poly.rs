//! Exact finite polynomials in `q` with arbitrary-precision coefficients.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::series::TruncSeries;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    // Invariant: no trailing zeros; the zero polynomial is empty.
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(c: impl Into<BigInt>, e: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); e];
        coeffs.push(c.into());
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `q^j`, zero above the degree.
    pub fn coeff(&self, j: usize) -> BigInt {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn is_nonnegative(&self) -> bool {
        !self.coeffs.iter().any(Signed::is_negative)
    }

    pub fn shift(&self, e: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); e];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPolynomial { coeffs }
    }

    /// `self · (1 - sign·q^e)`.
    pub fn mul_one_minus(&self, sign: crate::series::Sign, e: usize) -> Self {
        let factor = &Self::one() - &Self::monomial(sign.as_i64(), e);
        self * &factor
    }

    /// The series this polynomial defines, known through `q^order`.
    pub fn to_series(&self, order: usize) -> TruncSeries {
        let mut coeffs: Vec<BigInt> = self.coeffs.iter().take(order + 1).cloned().collect();
        coeffs.resize(order + 1, BigInt::zero());
        TruncSeries::from_coeffs(coeffs)
    }

    /// Exact quotient `self / divisor`.
    ///
    /// The divisor's leading coefficient must be `±1`; any nonzero remainder
    /// is reported as an integrity failure because every caller divides
    /// polynomials that are known to divide evenly.
    pub fn div_exact(&self, divisor: &IntPolynomial) -> Result<IntPolynomial> {
        let dd = divisor
            .degree()
            .ok_or_else(|| Error::Integrity("division by the zero polynomial".into()))?;
        let lead = &divisor.coeffs[dd];
        let lead_sign = if lead.is_one() {
            1
        } else if (-lead).is_one() {
            -1
        } else {
            return Err(Error::Integrity(format!(
                "divisor leading coefficient {lead} is not a unit"
            )));
        };
        let Some(nd) = self.degree() else {
            return Ok(Self::zero());
        };
        if nd < dd {
            return Err(Error::Integrity(format!(
                "degree {nd} dividend is not divisible by degree {dd} divisor"
            )));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let c = std::mem::take(&mut rem[i + dd]);
            if c.is_zero() {
                continue;
            }
            let c = if lead_sign == 1 { c } else { -c };
            for (r, d) in rem[i..i + dd].iter_mut().zip(&divisor.coeffs) {
                if !d.is_zero() {
                    *r -= &c * d;
                }
            }
            quot[i] = c;
        }
        if let Some(j) = rem.iter().position(|r| !r.is_zero()) {
            return Err(Error::Integrity(format!(
                "exact division left a nonzero remainder (first at q^{j})"
            )));
        }
        Ok(Self::from_coeffs(quot))
    }
}

/// Running sums `c(n) = a(0) + ... + a(n)` for `0 <= n <= deg p`.
///
/// These are the leading coefficients of `p/(1-q)`; beyond the degree the
/// quotient's coefficients stay at `c(deg p)`.
pub fn prefix_sums(p: &IntPolynomial) -> Vec<BigInt> {
    let mut acc = BigInt::zero();
    p.coeffs
        .iter()
        .map(|a| {
            acc += a;
            acc.clone()
        })
        .collect()
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|j| self.coeff(j) + rhs.coeff(j)).collect();
        IntPolynomial::from_coeffs(coeffs)
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        IntPolynomial::from_coeffs(out)
    }
}
