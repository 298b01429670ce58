//! q-Pochhammer symbols with signed-monomial parameters, and Gaussian
//! polynomials.
//!
//! `(a; q^r)_n = (1 - a)(1 - a q^r) ... (1 - a q^{r(n-1)})` with `a = ±q^e`,
//! `e >= 0`. Every factor is a binomial `1 - σ q^{e + rj}`, so products and
//! quotients are applied one factor at a time in `O(N)` each.

use std::fmt;

use crate::error::{Error, Result};
use crate::poly::IntPolynomial;
use crate::series::{Sign, TruncSeries};

/// The Pochhammer parameter `sign · q^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignedMonomial {
    pub sign: Sign,
    pub exponent: usize,
}

impl SignedMonomial {
    pub fn plus(exponent: usize) -> Self {
        SignedMonomial {
            sign: Sign::Plus,
            exponent,
        }
    }

    pub fn minus(exponent: usize) -> Self {
        SignedMonomial {
            sign: Sign::Minus,
            exponent,
        }
    }
}

impl fmt::Display for SignedMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign == Sign::Minus { "-" } else { "" };
        write!(f, "{s}q^{}", self.exponent)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PochLength {
    Finite(usize),
    Infinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PochSpec {
    pub param: SignedMonomial,
    pub step: usize,
    pub length: PochLength,
}

impl PochSpec {
    pub fn new(param: SignedMonomial, step: usize, length: PochLength) -> Result<Self> {
        if step == 0 {
            return Err(Error::InvalidParameter("Pochhammer step must be positive".into()));
        }
        Ok(PochSpec {
            param,
            step,
            length,
        })
    }

    pub fn finite(param: SignedMonomial, step: usize, n: usize) -> Self {
        Self::new(param, step, PochLength::Finite(n)).expect("positive step")
    }

    pub fn infinite(param: SignedMonomial, step: usize) -> Self {
        Self::new(param, step, PochLength::Infinite).expect("positive step")
    }

    /// `(1; q^r)_∞`, identically zero from its first factor.
    pub fn is_degenerate(&self) -> bool {
        self.length == PochLength::Infinite
            && self.param.sign == Sign::Plus
            && self.param.exponent == 0
    }

    /// Exponents `e + r·j` of the factors that are not `1 + O(q^{order+1})`.
    fn factor_exponents(&self, order: usize) -> impl Iterator<Item = usize> {
        let (e, r) = (self.param.exponent, self.step);
        let n = match self.length {
            PochLength::Finite(n) => n,
            PochLength::Infinite => usize::MAX,
        };
        (0..n).map(move |j| e + r * j).take_while(move |&x| x <= order)
    }
}

/// The product truncated to order `order`.
pub fn poch(spec: &PochSpec, order: usize) -> TruncSeries {
    let mut s = TruncSeries::one(order);
    mul_poch(&mut s, spec);
    s
}

/// In place: `series *= spec`.
pub fn mul_poch(series: &mut TruncSeries, spec: &PochSpec) {
    for e in spec.factor_exponents(series.order()) {
        series.mul_one_minus(spec.param.sign, e);
    }
}

/// In place: `series /= spec`. Fails if some factor has constant term
/// other than 1, i.e. a parameter `±q^0`.
pub fn div_poch(series: &mut TruncSeries, spec: &PochSpec) -> Result<()> {
    for e in spec.factor_exponents(series.order()) {
        series.div_one_minus(spec.param.sign, e)?;
    }
    Ok(())
}

/// A finite Pochhammer product as an exact polynomial.
pub fn poch_poly(param: SignedMonomial, step: usize, n: usize) -> IntPolynomial {
    let mut p = IntPolynomial::one();
    for j in 0..n {
        p = p.mul_one_minus(param.sign, param.exponent + step * j);
    }
    p
}

/// Gaussian polynomial `[n, m]` in base `q^step`: zero outside `0 <= m <= n`,
/// otherwise `(q^r;q^r)_n / ((q^r;q^r)_m (q^r;q^r)_{n-m})` by exact division.
pub fn gauss(n: usize, m: i64, step: usize) -> Result<IntPolynomial> {
    if step == 0 {
        return Err(Error::InvalidParameter("Gaussian polynomial step must be positive".into()));
    }
    let m = match usize::try_from(m) {
        Ok(m) if m <= n => m,
        _ => return Ok(IntPolynomial::zero()),
    };
    let base = SignedMonomial::plus(step);
    let num = poch_poly(base, step, n);
    let den = &poch_poly(base, step, m) * &poch_poly(base, step, n - m);
    num.div_exact(&den).map_err(|e| match e {
        Error::Integrity(msg) => Error::Integrity(format!("gauss({n}, {m}, {step}): {msg}")),
        other => other,
    })
}

/// Gaussian polynomial truncated to `order`, as
/// `prod_{i=1}^{m} (1 - q^{r(n-m+i)}) / (1 - q^{ri})`.
///
/// Cheap when the full polynomial would be far larger than `order`.
pub fn gauss_series(n: usize, m: i64, step: usize, order: usize) -> TruncSeries {
    let m = match usize::try_from(m) {
        Ok(m) if m <= n => m,
        _ => return TruncSeries::zero(order),
    };
    let m = m.min(n - m);
    let mut s = TruncSeries::one(order);
    for i in 1..=m {
        s.mul_one_minus(Sign::Plus, step * (n - m + i));
    }
    for i in 1..=m {
        s.div_one_minus(Sign::Plus, step * i)
            .expect("positive exponent");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn s(c: &[i64]) -> TruncSeries {
        TruncSeries::from_i64s(c)
    }

    #[test]
    fn poch_examples() {
        let spec = PochSpec::finite(SignedMonomial::plus(1), 2, 2);
        assert_eq!(poch(&spec, 5), s(&[1, -1, 0, -1, 1, 0]));
        let spec = PochSpec::finite(SignedMonomial::plus(1), 2, 0);
        assert_eq!(poch(&spec, 5), TruncSeries::one(5));
        let spec = PochSpec::infinite(SignedMonomial::plus(2), 2);
        assert_eq!(poch(&spec, 4), s(&[1, 0, -1, 0, -1]));
    }

    /// Expands the infinite product by enumerating subsets of its factors
    /// below the truncation order.
    fn brute_infinite(param: SignedMonomial, step: usize, order: usize) -> Vec<i64> {
        let exps: Vec<usize> = (0..)
            .map(|j| param.exponent + step * j)
            .take_while(|&x| x <= order)
            .collect();
        let mut out = vec![0i64; order + 1];
        for mask in 0u32..(1 << exps.len()) {
            let mut deg = 0;
            let mut sign = 1i64;
            for (i, &x) in exps.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    deg += x;
                    sign *= -param.sign.as_i64();
                }
            }
            if deg <= order {
                out[deg] += sign;
            }
        }
        out
    }

    #[test]
    fn infinite_poch_matches_subset_expansion() {
        for (param, step) in [
            (SignedMonomial::plus(1), 1),
            (SignedMonomial::minus(1), 2),
            (SignedMonomial::plus(3), 2),
            (SignedMonomial::plus(2), 3),
        ] {
            let got = poch(&PochSpec::infinite(param, step), 14);
            assert_eq!(got, s(&brute_infinite(param, step, 14)), "{param} step {step}");
        }
    }

    #[test]
    fn degenerate_and_vanishing() {
        let spec = PochSpec::infinite(SignedMonomial::plus(0), 2);
        assert!(spec.is_degenerate());
        assert!(poch(&spec, 6).is_zero());
        for n in 1..5 {
            for r in 1..3 {
                let spec = PochSpec::finite(SignedMonomial::plus(0), r, n);
                assert!(!spec.is_degenerate());
                assert!(poch(&spec, 8).is_zero());
            }
        }
        assert!(PochSpec::new(SignedMonomial::plus(1), 0, PochLength::Finite(1)).is_err());
    }

    #[test]
    fn div_poch_undoes_mul_poch() {
        let spec = PochSpec::finite(SignedMonomial::minus(3), 2, 4);
        let a = s(&[1, 2, 3, 4, 5, 6, 7, 8, 9, 10]);
        let mut b = a.clone();
        mul_poch(&mut b, &spec);
        div_poch(&mut b, &spec).unwrap();
        assert_eq!(a, b);
        let bad = PochSpec::finite(SignedMonomial::plus(0), 1, 2);
        assert!(div_poch(&mut b, &bad).is_err());
    }

    #[test]
    fn gauss_examples() {
        assert_eq!(gauss(2, 1, 2).unwrap(), IntPolynomial::from_i64s(&[1, 0, 1]));
        assert!(gauss(5, 7, 1).unwrap().is_zero());
        assert!(gauss(5, -1, 1).unwrap().is_zero());
        for n in 0..6 {
            for r in 1..4 {
                assert_eq!(gauss(n, 0, r).unwrap(), IntPolynomial::one());
            }
        }
    }

    /// Pascal-recurrence oracle, independent of exact division.
    fn pascal(n: usize, m: i64, r: usize) -> IntPolynomial {
        if m < 0 || m as usize > n {
            return IntPolynomial::zero();
        }
        if m == 0 || m as usize == n {
            return IntPolynomial::one();
        }
        let a = pascal(n - 1, m - 1, r);
        let b = pascal(n - 1, m, r).shift(r * m as usize);
        &a + &b
    }

    #[test]
    fn gauss_symmetry_positivity_pascal() {
        for r in 1..=2 {
            for n in 0..=12usize {
                for m in 0..=n as i64 {
                    let g = gauss(n, m, r).unwrap();
                    assert_eq!(g, gauss(n, n as i64 - m, r).unwrap());
                    assert!(g.is_nonnegative());
                    assert_eq!(g.degree(), Some(r * m as usize * (n - m as usize)));
                    assert_eq!(g, pascal(n, m, r), "n={n} m={m} r={r}");
                    if n >= 1 {
                        let rec = &gauss(n - 1, m - 1, r).unwrap()
                            + &gauss(n - 1, m, r).unwrap().shift(r * m as usize);
                        assert_eq!(g, rec);
                    }
                }
            }
        }
    }

    #[test]
    fn gauss_series_truncates_gauss() {
        for r in 1..=2 {
            for n in 0..=10 {
                for m in -1..=(n as i64 + 1) {
                    let exact = gauss(n, m, r).unwrap().to_series(30);
                    assert_eq!(gauss_series(n, m, r, 30), exact);
                }
            }
        }
    }

    /// (a;q^r)_n = sum_j [n, j]_{q^r} (-1)^j a^j q^{r j(j-1)/2}
    #[test]
    fn gaussian_expansion_of_pochhammer() {
        let order = 400;
        for r in 1..=2 {
            for e in 0..=6 {
                for sign in [Sign::Plus, Sign::Minus] {
                    let a = SignedMonomial { sign, exponent: e };
                    for n in 0..=10 {
                        let lhs = poch_poly(a, r, n);
                        let mut rhs = IntPolynomial::zero();
                        for j in 0..=n {
                            let mut c = BigInt::from(1);
                            if j % 2 == 1 {
                                c = -c;
                            }
                            if sign == Sign::Minus && j % 2 == 1 {
                                c = -c;
                            }
                            let term = &gauss(n, j as i64, r).unwrap()
                                * &IntPolynomial::monomial(c, e * j + r * j * (j.saturating_sub(1)) / 2);
                            rhs = &rhs + &term;
                        }
                        assert_eq!(lhs, rhs, "a={a} r={r} n={n}");
                        let spec = PochSpec::finite(a, r, n);
                        assert_eq!(poch(&spec, order), lhs.to_series(order));
                    }
                }
            }
        }
    }

    #[test]
    fn gauss_reports_integrity_on_bad_division() {
        let p = IntPolynomial::from_i64s(&[1, 1]);
        let err = p.div_exact(&IntPolynomial::from_i64s(&[1, 0, 1])).unwrap_err();
        assert!(matches!(err, Error::Integrity(_)));
    }
}
