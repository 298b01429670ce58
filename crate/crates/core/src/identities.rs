//! Finite-order checks of the classical q-series transformations used to
//! derive the alternative forms of `F_{k,1}`.
//!
//! Both sides of each identity are expanded as power series to a common
//! order and compared exactly. Derived parameters such as `abt/c` may carry
//! a negative power of `q`; a factor `1 - σq^{-u}` is rewritten as
//! `-σq^{-u}(1 - σq^u)` and the `q^{-u}` is absorbed by the term's monomial
//! part. If a term would still need a negative power, the instance is
//! rejected.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::generating::{e_k, f_sum32, omega};
use crate::qseries::{div_poch, mul_poch, PochSpec, SignedMonomial};
use crate::series::{Sign, TruncSeries};

/// Default comparison order for the identity checks.
pub const DEFAULT_IDENTITY_ORDER: usize = 400;

/// `sign · q^exponent` where the exponent may be negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Laurent {
    sign: Sign,
    exponent: i64,
}

impl Laurent {
    fn of(m: SignedMonomial) -> Self {
        Laurent {
            sign: m.sign,
            exponent: m.exponent as i64,
        }
    }

    fn times(self, other: Laurent) -> Laurent {
        Laurent {
            sign: self.sign.times(other.sign),
            exponent: self.exponent + other.exponent,
        }
    }

    fn over(self, other: Laurent) -> Laurent {
        Laurent {
            sign: self.sign.times(other.sign),
            exponent: self.exponent - other.exponent,
        }
    }

    fn shifted(self, by: i64) -> Laurent {
        Laurent {
            exponent: self.exponent + by,
            ..self
        }
    }

    fn monomial(self, what: &str) -> Result<SignedMonomial> {
        let exponent = usize::try_from(self.exponent).map_err(|_| {
            Error::NonMonomial(format!("{what} = q^{} has a negative exponent", self.exponent))
        })?;
        Ok(SignedMonomial {
            sign: self.sign,
            exponent,
        })
    }
}

/// `sum_{n>=0} scale_n · prod_i (num_i; q^r)_n / prod_j (den_j; q^r)_n · z^n · q^{quad·n(n-1)/2}`,
/// optionally with each term multiplied by `1 - extra·q^{2rn}`.
struct BasicSum {
    step: usize,
    num: Vec<Laurent>,
    den: Vec<Laurent>,
    z: Laurent,
    quad: i64,
    extra: Option<Laurent>,
}

impl BasicSum {
    fn expand(&self, order: usize) -> Result<TruncSeries> {
        let r = self.step as i64;
        let mut acc = TruncSeries::zero(order);
        // term_n = q^lead · body
        let mut body = TruncSeries::one(order);
        let mut lead: i64 = 0;
        let mut n: i64 = 0;
        loop {
            let mut term = body.clone();
            if let Some(x) = self.extra {
                apply_numerator(&mut term, x.shifted(2 * r * n), &mut 0)?;
            }
            acc = acc.axpy_shift(&term, 1, lead as usize);

            let mut delta = self.z.exponent + self.quad * n;
            if self.z.sign == Sign::Minus {
                body = -&body;
            }
            for p in &self.num {
                if !apply_numerator(&mut body, p.shifted(r * n), &mut delta)? {
                    return Ok(acc);
                }
            }
            for p in &self.den {
                let e = p.exponent + r * n;
                if e <= 0 {
                    return Err(Error::NonMonomial(format!(
                        "denominator factor 1 - {}q^{e} has no unit constant term",
                        if p.sign == Sign::Minus { "-" } else { "" }
                    )));
                }
                body.div_one_minus(p.sign, e as usize)?;
            }
            if delta <= 0 {
                return Err(Error::NonMonomial(format!(
                    "term {n} does not raise the q-adic order (step {delta})"
                )));
            }
            lead += delta;
            if lead > order as i64 {
                return Ok(acc);
            }
            body.truncate_in_place(order - lead as usize);
            n += 1;
        }
    }
}

/// `series *= (1 - p)`, rewriting a negative exponent into `delta`.
/// Returns `false` when the factor is exactly zero.
fn apply_numerator(series: &mut TruncSeries, p: Laurent, delta: &mut i64) -> Result<bool> {
    match p.exponent {
        0 if p.sign == Sign::Plus => {
            *series = TruncSeries::zero(series.order());
            Ok(false)
        }
        0 => {
            *series = series.scale(&BigInt::from(2));
            Ok(true)
        }
        e if e > 0 => {
            series.mul_one_minus(p.sign, e as usize);
            Ok(true)
        }
        e => {
            // 1 - σq^e = -σ q^e (1 - σq^{-e})
            series.mul_one_minus(p.sign, (-e) as usize);
            if p.sign == Sign::Plus {
                *series = -&*series;
            }
            *delta += e;
            Ok(true)
        }
    }
}

/// Heine's transformation in base `q^step`:
/// `sum (a,b)_n t^n / (q,c)_n = (c/b, bt)_∞ / (c, t)_∞ · sum (abt/c, b)_n (c/b)^n / (q, bt)_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeineInstance {
    pub a: SignedMonomial,
    pub b: SignedMonomial,
    pub c: SignedMonomial,
    pub t: SignedMonomial,
    pub step: usize,
    pub order: usize,
}

impl HeineInstance {
    /// The instance turning the defining sum of `F_{k,1}` into its finite
    /// form: base `q^2`, `a = b = q`, `c = q^{2k}`, `t = q^2`.
    pub fn for_finite_form(k: u32, order: usize) -> Self {
        HeineInstance {
            a: SignedMonomial::plus(1),
            b: SignedMonomial::plus(1),
            c: SignedMonomial::plus(2 * k as usize),
            t: SignedMonomial::plus(2),
            step: 2,
            order,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.step == 0 {
            return Err(Error::InvalidParameter("base step must be positive".into()));
        }
        if self.t.exponent == 0 || self.c.exponent == 0 {
            return Err(Error::InvalidParameter(
                "t and c must have positive exponents for both sides to converge".into(),
            ));
        }
        Ok(())
    }
}

/// Both sides of Heine's transformation; `rhs_delta` raises the exponent of
/// the right-hand `(bt)_∞` factor, which breaks the identity for negative
/// controls.
pub fn heine_sides(inst: &HeineInstance, rhs_delta: i64) -> Result<(TruncSeries, TruncSeries)> {
    inst.validate()?;
    let r = inst.step;
    let (a, b, c, t) = (
        Laurent::of(inst.a),
        Laurent::of(inst.b),
        Laurent::of(inst.c),
        Laurent::of(inst.t),
    );
    let q = Laurent {
        sign: Sign::Plus,
        exponent: r as i64,
    };
    let lhs = BasicSum {
        step: r,
        num: vec![a, b],
        den: vec![q, c],
        z: t,
        quad: 0,
        extra: None,
    }
    .expand(inst.order)?;

    let c_over_b = c.over(b);
    let bt = b.times(t);
    let abt_over_c = a.times(b).times(t).over(c);
    let inner = BasicSum {
        step: r,
        num: vec![abt_over_c, b],
        den: vec![q, bt],
        z: c_over_b,
        quad: 0,
        extra: None,
    }
    .expand(inst.order)?;
    let mut rhs = inner;
    mul_poch(&mut rhs, &PochSpec::infinite(c_over_b.monomial("c/b")?, r));
    mul_poch(&mut rhs, &PochSpec::infinite(bt.shifted(rhs_delta).monomial("bt")?, r));
    div_poch(&mut rhs, &PochSpec::infinite(inst.c, r))?;
    div_poch(&mut rhs, &PochSpec::infinite(inst.t, r))?;
    Ok((lhs, rhs))
}

pub fn heine_check(inst: &HeineInstance) -> Result<bool> {
    let (lhs, rhs) = heine_sides(inst, 0)?;
    Ok(lhs == rhs)
}

/// Negative control: the same comparison with one right-hand exponent moved.
pub fn heine_check_perturbed(inst: &HeineInstance, delta: i64) -> Result<bool> {
    let (lhs, rhs) = heine_sides(inst, delta)?;
    Ok(lhs == rhs)
}

/// Rogers-Fine in base `q^step`:
/// `sum (α)_n w^n / (β)_n = sum (α, αwq/β)_n β^n w^n q^{n^2-n} (1 - αwq^{2n}) / ((β)_n (w)_{n+1})`.
/// `alpha = None` stands for `α = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RogersFineInstance {
    pub alpha: Option<SignedMonomial>,
    pub beta: SignedMonomial,
    pub w: SignedMonomial,
    pub step: usize,
    pub order: usize,
}

impl RogersFineInstance {
    /// The instance linking the limit of `F_{k,1}` to `ω`: base `q^2`,
    /// `α = 0`, `β = q^3`, `w = q`.
    pub fn for_omega(order: usize) -> Self {
        RogersFineInstance {
            alpha: None,
            beta: SignedMonomial::plus(3),
            w: SignedMonomial::plus(1),
            step: 2,
            order,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.step == 0 {
            return Err(Error::InvalidParameter("base step must be positive".into()));
        }
        if self.w.exponent == 0 {
            return Err(Error::InvalidParameter("w must have a positive exponent".into()));
        }
        Ok(())
    }
}

/// Both sides of Rogers-Fine; `rhs_delta` raises the exponent of `β^n` on
/// the right for negative controls.
pub fn rogers_fine_sides(inst: &RogersFineInstance, rhs_delta: i64) -> Result<(TruncSeries, TruncSeries)> {
    inst.validate()?;
    let r = inst.step;
    let beta = Laurent::of(inst.beta);
    let w = Laurent::of(inst.w);
    let q = Laurent {
        sign: Sign::Plus,
        exponent: r as i64,
    };
    let alpha = inst.alpha.map(Laurent::of);

    let lhs = BasicSum {
        step: r,
        num: alpha.into_iter().collect(),
        den: vec![beta],
        z: w,
        quad: 0,
        extra: None,
    }
    .expand(inst.order)?;

    let mut num = Vec::new();
    if let Some(a) = alpha {
        num.push(a);
        num.push(a.times(w).times(q).over(beta));
    }
    let mut rhs = BasicSum {
        step: r,
        num,
        // (w)_{n+1} = (1 - w) (wq)_n
        den: vec![beta, w.times(q)],
        z: beta.shifted(rhs_delta).times(w),
        quad: 2 * r as i64,
        extra: alpha.map(|a| a.times(w)),
    }
    .expand(inst.order)?;
    rhs.div_one_minus(inst.w.sign, inst.w.exponent)?;
    Ok((lhs, rhs))
}

pub fn rogers_fine_check(inst: &RogersFineInstance) -> Result<bool> {
    let (lhs, rhs) = rogers_fine_sides(inst, 0)?;
    Ok(lhs == rhs)
}

pub fn rogers_fine_check_perturbed(inst: &RogersFineInstance, delta: i64) -> Result<bool> {
    let (lhs, rhs) = rogers_fine_sides(inst, delta)?;
    Ok(lhs == rhs)
}

/// `qω - F_{k,1} = q^{2k+1} E_k` with `E_k(0) = 1`, checked through `q^order`.
/// Needs `order >= 2k + 1`.
pub fn mock_theta_gap_check(k: u32, order: usize) -> Result<bool> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let gap = 2 * k as usize + 1;
    if order < gap {
        return Err(Error::InvalidParameter(format!(
            "the gap check for k = {k} needs order >= {gap} (got {order})"
        )));
    }
    let diff = omega(order - 1).shift(1).axpy_shift(&f_sum32(k, order)?, -1, 0);
    let vanishes = diff.coeffs()[..gap].iter().all(num_traits::Zero::is_zero);
    let leading_one = *diff.coeff(gap) == BigInt::from(1);
    let quotient_ok = diff
        .unshift(gap)
        .is_some_and(|quot| quot == e_k(k, order - gap).unwrap_or_else(|_| TruncSeries::zero(0)));
    Ok(vanishes && leading_one && quotient_ok)
}
