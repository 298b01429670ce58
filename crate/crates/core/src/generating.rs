//! The named q-series: `F_{k,m}`, Ramanujan's `ω`, `E_k`, `G_{k,n}` and the
//! certificate polynomial `H_k`.
//!
//! `F_{k,1}` has three independent constructions (the defining infinite
//! product sum, the finite Gaussian form, and the Pochhammer-quotient sum);
//! they are kept separate so each can serve as an oracle for the others.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedSub, Zero};

use crate::error::{Error, Result};
use crate::poly::IntPolynomial;
use crate::qseries::{div_poch, gauss, gauss_series, mul_poch, PochSpec, SignedMonomial};
use crate::series::{Sign, TruncSeries};

/// Largest `k` for which [`h_poly`] materializes `H_k` by default.
pub const DEFAULT_MATERIALIZATION_CAP: u32 = 10;

/// Parameters of `F_{k,m}` truncated at `q^order`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FkmParams {
    pub k: u32,
    pub m: u32,
    pub order: usize,
}

impl FkmParams {
    pub fn new(k: u32, m: u32, order: usize) -> Result<Self> {
        if k == 0 || m == 0 {
            return Err(Error::InvalidParameter(format!(
                "F_{{k,m}} needs k >= 1 and m >= 1 (got k = {k}, m = {m})"
            )));
        }
        Ok(FkmParams { k, m, order })
    }

    pub fn ell(&self) -> Result<u64> {
        ell(self.k)
    }
}

/// `lcm(1, 3, 5, ..., 2k-3)`; 1 when the list is empty.
pub fn ell(k: u32) -> Result<u64> {
    let top = (2 * u64::from(k)).saturating_sub(3);
    let mut acc: u64 = 1;
    for odd in (1..=top).step_by(2) {
        let g = acc.gcd(&odd);
        acc = acc
            .checked_mul(odd / g)
            .ok_or(Error::EllOverflow(k))?;
    }
    Ok(acc)
}

/// `d_k = ℓ + (k-2)^2`, the degree of `H_k`.
pub fn h_degree(k: u32) -> Result<u64> {
    let l = ell(k)?;
    let sq = u64::from(k.saturating_sub(2)).pow(2);
    l.checked_add(sq).ok_or(Error::EllOverflow(k))
}

fn require_k(k: u32, min: u32, what: &str) -> Result<()> {
    if k < min {
        return Err(Error::InvalidParameter(format!("{what} requires k >= {min} (got {k})")));
    }
    Ok(())
}

/// `F_{k,m}` from its definition
/// `sum_n (q^{2n+2}, q^{2n+2k}; q^2)_∞ / (q^{2n+1}; q^2)_∞^2 · q^{m(2n+1)}`.
///
/// The infinite-product part of term `n+1` is that of term `n` times
/// `(1 - q^{2n+1})^2 / ((1 - q^{2n+2})(1 - q^{2n+2k}))`, so the whole sum
/// costs `O(N^2)` coefficient operations.
pub fn f_def(k: u32, m: u32, order: usize) -> Result<TruncSeries> {
    let p = FkmParams::new(k, m, order)?;
    let (k, m) = (p.k as usize, p.m as usize);
    let mut acc = TruncSeries::zero(order);
    if m > order {
        return Ok(acc);
    }
    let mut prod = TruncSeries::one(order - m);
    mul_poch(&mut prod, &PochSpec::infinite(SignedMonomial::plus(2), 2));
    mul_poch(&mut prod, &PochSpec::infinite(SignedMonomial::plus(2 * k), 2));
    let odd = PochSpec::infinite(SignedMonomial::plus(1), 2);
    div_poch(&mut prod, &odd)?;
    div_poch(&mut prod, &odd)?;

    let mut n = 0usize;
    loop {
        let lead = m * (2 * n + 1);
        acc = acc.axpy_shift(&prod, 1, lead);
        let next_lead = m * (2 * n + 3);
        if next_lead > order {
            break;
        }
        prod.truncate_in_place(order - next_lead);
        prod.mul_one_minus(Sign::Plus, 2 * n + 1);
        prod.mul_one_minus(Sign::Plus, 2 * n + 1);
        prod.div_one_minus(Sign::Plus, 2 * n + 2)?;
        prod.div_one_minus(Sign::Plus, 2 * n + 2 * k)?;
        n += 1;
    }
    Ok(acc)
}

/// `F_{k,1}` from its finite form over `(q;q^2)_{k-1}`, with the sign
/// rearrangement `(q^{4-2k};q^2)_n q^{(2k-1)n} = (-1)^n (q^{2k-2n-2};q^2)_n q^{n^2+2n}`
/// so that no negative power of `q` ever appears:
///
/// `F_{k,1} = 1/(q;q^2)_{k-1} · sum_{n=0}^{k-2} (-1)^n (q^{2k-2n-2};q^2)_n q^{(n+1)^2}
///            / ((1 - q^{2n+1}) (q^2;q^2)_n)`.
pub fn f_sum31(k: u32, order: usize) -> Result<TruncSeries> {
    require_k(k, 3, "the finite Gaussian form of F_{k,1}")?;
    let k = k as usize;
    let mut acc = TruncSeries::zero(order);
    for n in 0..=k - 2 {
        let lead = (n + 1) * (n + 1);
        if lead > order {
            break;
        }
        let mut term = TruncSeries::one(order - lead);
        mul_poch(&mut term, &PochSpec::finite(SignedMonomial::plus(2 * k - 2 * n - 2), 2, n));
        div_poch(&mut term, &PochSpec::finite(SignedMonomial::plus(2), 2, n))?;
        term.div_one_minus(Sign::Plus, 2 * n + 1)?;
        let sign = if n % 2 == 0 { 1 } else { -1 };
        acc = acc.axpy_shift(&term, sign, lead);
    }
    div_poch(&mut acc, &PochSpec::finite(SignedMonomial::plus(1), 2, k - 1))?;
    Ok(acc)
}

/// `F_{k,1} = sum_{n>=0} (q^{2k-1};q^2)_n q^{n+1} / (q;q^2)_{n+1}`.
pub fn f_sum32(k: u32, order: usize) -> Result<TruncSeries> {
    require_k(k, 1, "F_{k,1}")?;
    let k = k as usize;
    let mut acc = TruncSeries::zero(order);
    if order == 0 {
        return Ok(acc);
    }
    // ratio_n = (q^{2k-1};q^2)_n / (q;q^2)_{n+1}
    let mut ratio = TruncSeries::geometric(order - 1);
    for n in 0..order {
        acc = acc.axpy_shift(&ratio, 1, n + 1);
        if n + 2 > order {
            break;
        }
        ratio.truncate_in_place(order - n - 2);
        ratio.mul_one_minus(Sign::Plus, 2 * k - 1 + 2 * n);
        ratio.div_one_minus(Sign::Plus, 2 * n + 3)?;
    }
    Ok(acc)
}

/// The G-summands of [`f_sum32`]: `G_{k,n} = (q^{2k-1};q^2)_n / (q;q^2)_{n+1}`.
pub fn g_poch(k: u32, n: usize, order: usize) -> Result<TruncSeries> {
    require_k(k, 1, "G_{k,n}")?;
    let mut s = TruncSeries::one(order);
    mul_poch(&mut s, &PochSpec::finite(SignedMonomial::plus(2 * k as usize - 1), 2, n));
    div_poch(&mut s, &PochSpec::finite(SignedMonomial::plus(1), 2, n + 1))?;
    Ok(s)
}

/// `G_{k,n}` as a quotient of Gaussian polynomials:
/// `[2k+2n-2, 2n]_q / [k+n-1, n]_{q^2} / (1 - q^{2n+1})`.
pub fn g_binquot(k: u32, n: usize, order: usize) -> Result<TruncSeries> {
    require_k(k, 1, "G_{k,n}")?;
    let k = k as usize;
    let num = gauss(2 * k + 2 * n - 2, 2 * n as i64, 1)?;
    let den = gauss(k + n - 1, n as i64, 2)?;
    let mut s = num.to_series(order).mul(&den.to_series(order).invert()?);
    s.div_one_minus(Sign::Plus, 2 * n + 1)?;
    Ok(s)
}

/// Ramanujan's third-order mock theta function
/// `ω(q) = sum_{n>=0} q^{2n(n+1)} / (q;q^2)_{n+1}^2`.
pub fn omega(order: usize) -> TruncSeries {
    let mut acc = TruncSeries::zero(order);
    let mut denom_inv = TruncSeries::one(order);
    denom_inv.div_one_minus(Sign::Plus, 1).expect("positive exponent");
    denom_inv.div_one_minus(Sign::Plus, 1).expect("positive exponent");
    let mut n = 0usize;
    loop {
        let lead = 2 * n * (n + 1);
        acc = acc.axpy_shift(&denom_inv, 1, lead);
        let next_lead = 2 * (n + 1) * (n + 2);
        if next_lead > order {
            return acc;
        }
        denom_inv.truncate_in_place(order - next_lead);
        denom_inv.div_one_minus(Sign::Plus, 2 * n + 3).expect("positive exponent");
        denom_inv.div_one_minus(Sign::Plus, 2 * n + 3).expect("positive exponent");
        n += 1;
    }
}

/// `E_k(q)` from its closed form
/// `1/((1-q)(1-q^3)) · (1 + sum_{n>=1} q^n/(q^5;q^2)_n
///   · sum_{j=0}^{n} [n+1, j+1]_{q^2} (-1)^j q^{j^2+2kj})`.
pub fn e_k(k: u32, order: usize) -> Result<TruncSeries> {
    require_k(k, 1, "E_k")?;
    let k = k as usize;
    let mut acc = TruncSeries::one(order);
    for n in 1..=order {
        let room = order - n;
        let mut inner = TruncSeries::zero(room);
        for j in 0..=n {
            let lead = j * j + 2 * k * j;
            if lead > room {
                break;
            }
            let g = gauss_series(n + 1, j as i64 + 1, 2, room - lead);
            let sign = if j % 2 == 0 { 1 } else { -1 };
            inner = inner.axpy_shift(&g, sign, lead);
        }
        div_poch(&mut inner, &PochSpec::finite(SignedMonomial::plus(5), 2, n))?;
        acc = acc.axpy_shift(&inner, 1, n);
    }
    acc.div_one_minus(Sign::Plus, 1)?;
    acc.div_one_minus(Sign::Plus, 3)?;
    Ok(acc)
}

/// One summand of `H_k`: `sign · gauss · q^offset · (1 + q^p + ... + q^{p(count-1)})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HTerm {
    pub sign: Sign,
    pub gauss: IntPolynomial,
    pub offset: u64,
    pub period: u64,
    pub count: u64,
}

impl HTerm {
    /// Highest exponent this summand reaches.
    pub fn top(&self) -> u64 {
        let g = self.gauss.degree().unwrap_or(0) as u64;
        self.offset + g + self.period * (self.count - 1)
    }
}

/// The `k - 1` summands of
/// `H_k = sum_{n=0}^{k-2} [k-2, n]_{q^2} (-1)^n q^{(n+1)^2} sum_{j<ℓ/(2n+1)} q^{(2n+1)j}`.
pub fn h_terms(k: u32) -> Result<Vec<HTerm>> {
    require_k(k, 3, "H_k")?;
    let l = ell(k)?;
    (0..=k - 2)
        .map(|n| {
            let period = 2 * u64::from(n) + 1;
            Ok(HTerm {
                sign: if n % 2 == 0 { Sign::Plus } else { Sign::Minus },
                gauss: gauss((k - 2) as usize, i64::from(n), 2)?,
                offset: (u64::from(n) + 1).pow(2),
                period,
                count: l / period,
            })
        })
        .collect()
}

/// `H_k` as an explicit polynomial of degree `d_k`, for `3 <= k <= 10`.
pub fn h_poly(k: u32) -> Result<IntPolynomial> {
    h_poly_with_cap(k, DEFAULT_MATERIALIZATION_CAP)
}

pub fn h_poly_with_cap(k: u32, cap: u32) -> Result<IntPolynomial> {
    require_k(k, 3, "H_k")?;
    if k > cap {
        return Err(Error::CapExceeded { k, cap });
    }
    let terms = h_terms(k)?;
    let len = usize::try_from(h_degree(k)?).map_err(|_| Error::EllOverflow(k))? + 1;
    let coeffs = match accumulate_terms::<i64>(&terms, len) {
        Some(small) => small.into_iter().map(BigInt::from).collect(),
        None => accumulate_terms::<BigInt>(&terms, len).expect("arbitrary precision cannot overflow"),
    };
    Ok(IntPolynomial::from_coeffs(coeffs))
}

/// Dense accumulation of the summands; `None` on overflow of `T`.
pub(crate) fn accumulate_terms<T>(terms: &[HTerm], len: usize) -> Option<Vec<T>>
where
    T: Clone + Zero + CheckedAdd + CheckedSub + TryFrom<BigInt>,
{
    let mut out = vec![T::zero(); len];
    for term in terms {
        for (i, c) in term.gauss.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = T::try_from(c.clone()).ok()?;
            let mut at = (term.offset as usize) + i;
            for _ in 0..term.count {
                let slot = &mut out[at];
                *slot = match term.sign {
                    Sign::Plus => slot.checked_add(&c)?,
                    Sign::Minus => slot.checked_sub(&c)?,
                };
                at += term.period as usize;
            }
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::poch;

    fn s(c: &[i64]) -> TruncSeries {
        TruncSeries::from_i64s(c)
    }

    /// Evaluates each defining term of `F_{k,m}` from scratch with
    /// Pochhammer products and a generic inverse.
    fn f_def_per_term(k: usize, m: usize, order: usize) -> TruncSeries {
        let mut acc = TruncSeries::zero(order);
        let mut n = 0;
        while m * (2 * n + 1) <= order {
            let num = poch(&PochSpec::infinite(SignedMonomial::plus(2 * n + 2), 2), order)
                .mul(&poch(&PochSpec::infinite(SignedMonomial::plus(2 * n + 2 * k), 2), order));
            let d = poch(&PochSpec::infinite(SignedMonomial::plus(2 * n + 1), 2), order);
            let term = num.mul(&d.mul(&d).invert().unwrap());
            acc = acc.axpy_shift(&term, 1, m * (2 * n + 1));
            n += 1;
        }
        acc
    }

    /// `ω` by brute force: each summand's denominator via a generic inverse.
    fn omega_brute(order: usize) -> TruncSeries {
        let mut acc = TruncSeries::zero(order);
        let mut n = 0;
        while 2 * n * (n + 1) <= order {
            let d = poch(&PochSpec::finite(SignedMonomial::plus(1), 2, n + 1), order);
            let t = d.mul(&d).invert().unwrap();
            acc = acc.axpy_shift(&t, 1, 2 * n * (n + 1));
            n += 1;
        }
        acc
    }

    #[test]
    fn ell_values() {
        assert_eq!(ell(1).unwrap(), 1);
        assert_eq!(ell(2).unwrap(), 1);
        assert_eq!(ell(3).unwrap(), 3);
        assert_eq!(ell(8).unwrap(), 45045);
        assert_eq!(ell(10).unwrap(), 765765);
        assert_eq!(ell(11).unwrap(), 14549535);
        assert_eq!(ell(12).unwrap(), 14549535);
        assert_eq!(h_degree(10).unwrap(), 765829);
        assert_eq!(h_degree(11).unwrap(), 14549616);
        assert!(matches!(ell(200), Err(Error::EllOverflow(200))));
    }

    #[test]
    fn fkm_params_validate() {
        assert!(FkmParams::new(0, 1, 5).is_err());
        assert!(FkmParams::new(1, 0, 5).is_err());
        assert_eq!(FkmParams::new(10, 1, 0).unwrap().ell().unwrap(), 765765);
    }

    #[test]
    fn f_def_examples() {
        assert_eq!(f_def(10, 1, 3).unwrap(), s(&[0, 1, 2, 3]));
        for k in 1..5 {
            for m in 1..4 {
                assert!(f_def(k, m, 10).unwrap().coeff(0).is_zero());
            }
        }
        let f = f_def(2, 4, 12).unwrap();
        assert!((4..=12).all(|j| *f.coeff(j) > BigInt::zero()));
    }

    #[test]
    fn f_def_incremental_matches_per_term() {
        for k in 1..=4 {
            for m in 1..=3 {
                assert_eq!(
                    f_def(k, m, 40).unwrap(),
                    f_def_per_term(k as usize, m as usize, 40),
                    "k={k} m={m}"
                );
            }
        }
    }

    #[test]
    fn f_sum31_examples() {
        assert_eq!(f_sum31(5, 50).unwrap(), f_def(5, 1, 50).unwrap());
        assert_eq!(f_sum31(3, 0).unwrap(), TruncSeries::zero(0));
        assert!(matches!(f_sum31(2, 10), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn f_sum32_examples() {
        assert_eq!(f_sum32(1, 30).unwrap(), f_def(1, 1, 30).unwrap());
        assert_eq!(f_sum32(7, 0).unwrap(), TruncSeries::zero(0));
        assert_eq!(f_sum32(10, 3).unwrap(), s(&[0, 1, 2, 3]));
    }

    #[test]
    fn triple_agreement_small() {
        for k in 3..=8 {
            let d = f_def(k, 1, 150).unwrap();
            assert_eq!(d, f_sum31(k, 150).unwrap(), "k={k}");
            assert_eq!(d, f_sum32(k, 150).unwrap(), "k={k}");
        }
        for k in 1..=2 {
            assert_eq!(f_def(k, 1, 150).unwrap(), f_sum32(k, 150).unwrap());
        }
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(5), s(&[1, 2, 3, 4, 6, 8]));
        assert_eq!(omega(0), s(&[1]));
        let w = omega(200);
        assert!(w.coeffs().iter().all(|c| *c >= BigInt::from(1)));
        assert_eq!(omega(120), omega_brute(120));
    }

    #[test]
    fn e_k_constant_term_and_gap_identity() {
        for k in 1..=8 {
            assert_eq!(e_k(k, 0).unwrap(), TruncSeries::one(0));
            let n = 60;
            let shift = 2 * k as usize + 1;
            let q_omega = omega(n + shift - 1).shift(1);
            let diff = q_omega.axpy_shift(&f_sum32(k, n + shift).unwrap(), -1, 0);
            assert_eq!(diff.unshift(shift).unwrap(), e_k(k, n).unwrap(), "k={k}");
        }
    }

    #[test]
    fn e_1_low_coefficients() {
        // q·ω - F_{1,1} = q^3 E_1, read off independently from the two series.
        let q_omega = omega(4).shift(1);
        let diff = q_omega.axpy_shift(&f_def(1, 1, 5).unwrap(), -1, 0);
        let expected = diff.unshift(3).unwrap();
        assert_eq!(e_k(1, 2).unwrap(), expected);
        assert_eq!(*expected.coeff(0), BigInt::from(1));
    }

    #[test]
    fn g_examples() {
        for k in 1..6 {
            assert_eq!(g_poch(k, 0, 30).unwrap(), TruncSeries::geometric(30));
        }
        for n in 0..8 {
            assert_eq!(g_poch(2, n, 30).unwrap(), TruncSeries::geometric(30));
        }
        assert_eq!(g_binquot(4, 2, 40).unwrap(), g_poch(4, 2, 40).unwrap());
    }

    #[test]
    fn g_partial_sums_rebuild_f() {
        let order = 80;
        for k in 1..=6 {
            let mut acc = TruncSeries::zero(order);
            for n in 0..order {
                acc = acc.axpy_shift(&g_poch(k, n, order - n - 1).unwrap(), 1, n + 1);
            }
            assert_eq!(acc, f_sum32(k, order).unwrap(), "k={k}");
        }
    }

    #[test]
    fn h_poly_low_coefficients_and_degree() {
        for k in 3..=7 {
            let h = h_poly(k).unwrap();
            assert!(h.coeff(0).is_zero());
            assert_eq!(h.coeff(1), BigInt::from(1));
            assert_eq!(h.degree().unwrap() as u64, h_degree(k).unwrap());
        }
        let h3 = h_poly(3).unwrap();
        assert_eq!(h3.degree(), Some(4));
    }

    #[test]
    fn h_poly_cap() {
        assert!(matches!(h_poly(11), Err(Error::CapExceeded { k: 11, cap: 10 })));
        assert!(h_poly_with_cap(5, 4).is_err());
        assert!(h_poly(2).is_err());
    }

    #[test]
    fn accumulation_paths_agree() {
        let terms = h_terms(6).unwrap();
        let len = h_degree(6).unwrap() as usize + 1;
        let small: Vec<BigInt> = accumulate_terms::<i64>(&terms, len)
            .unwrap()
            .into_iter()
            .map(BigInt::from)
            .collect();
        let big = accumulate_terms::<BigInt>(&terms, len).unwrap();
        assert_eq!(small, big);
        let term = HTerm {
            sign: Sign::Plus,
            gauss: IntPolynomial::from_i64s(&[100]),
            offset: 0,
            period: 1,
            count: 2,
        };
        let twice = [term.clone(), term];
        assert_eq!(accumulate_terms::<i8>(&twice[..1], 2), Some(vec![100, 100]));
        assert!(accumulate_terms::<i8>(&twice, 2).is_none());
    }

    #[test]
    fn h_poly_factorization() {
        for k in 3..=6u32 {
            let d = h_degree(k).unwrap() as usize;
            let f = f_sum31(k, d).unwrap();
            let p = poch(&PochSpec::finite(SignedMonomial::plus(1), 2, k as usize - 1), d);
            let l = ell(k).unwrap() as usize;
            let one_minus = TruncSeries::one(d).axpy_shift(&TruncSeries::one(d), -1, l);
            let lhs = f.mul(&p).mul(&one_minus);
            assert_eq!(lhs, h_poly(k).unwrap().to_series(d), "k={k}");
        }
    }
}
