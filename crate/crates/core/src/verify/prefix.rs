//! Prefix-sum positivity certificates for `F_{k,1}`.
//!
//! `F_{k,1} = H_k / ((q;q^2)_{k-1} (1 - q^ℓ))`, and the cofactor
//! `(1-q) / ((q;q^2)_{k-1} (1 - q^ℓ))` has non-negative coefficients, so
//! `F_{k,1} ⪰ 0` follows once every running sum of `H_k`'s coefficients
//! through `d_k` is non-negative. The converse does not hold: a negative
//! running sum leaves positivity undecided.
//!
//! Two engines compute the same scan. The materialized engine builds `H_k`
//! explicitly. The streaming engine produces `a_k(j)` in increasing `j`
//! from `k - 1` small Gaussian polynomials and one ring buffer per summand,
//! so its memory does not depend on `ℓ`.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::generating::{h_degree, h_poly_with_cap, h_terms, DEFAULT_MATERIALIZATION_CAP};
use crate::series::Sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EngineMode {
    Materialized,
    Streaming,
}

impl EngineMode {
    pub fn as_str(self) -> &'static str {
        match self {
            EngineMode::Materialized => "materialized",
            EngineMode::Streaming => "streaming",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// All prefix sums non-negative, hence `F_{k,1} ⪰ 0`.
    Verified,
    /// Some prefix sum is negative; the criterion is only sufficient, so
    /// this says nothing about the coefficients of `F_{k,1}`.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixReport {
    pub k: u32,
    pub ell: u64,
    pub degree: u64,
    pub min_prefix: BigInt,
    /// First exponent at which `min_prefix` is attained.
    pub argmin: u64,
    pub verified: bool,
    pub elapsed: Duration,
    pub mode: EngineMode,
}

impl PrefixReport {
    fn new(k: u32, ell: u64, degree: u64, min_prefix: BigInt, argmin: u64, mode: EngineMode, start: Instant) -> Self {
        PrefixReport {
            k,
            ell,
            degree,
            verified: !min_prefix.is_negative(),
            min_prefix,
            argmin,
            elapsed: start.elapsed(),
            mode,
        }
    }

    pub fn outcome(&self) -> Outcome {
        if self.verified {
            Outcome::Verified
        } else {
            Outcome::Inconclusive
        }
    }
}

impl fmt::Display for PrefixReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k = {} ({} engine)", self.k, self.mode.as_str())?;
        writeln!(f, "ell = {}, d_k = {}", self.ell, self.degree)?;
        writeln!(f, "min prefix sum = {} at q^{}", self.min_prefix, self.argmin)?;
        match self.outcome() {
            Outcome::Verified => write!(f, "verified: every prefix sum of H_{} is >= 0, so F_{{{},1}} has non-negative coefficients", self.k, self.k)?,
            Outcome::Inconclusive => write!(
                f,
                "inconclusive: a prefix sum of H_{} is negative; the criterion is sufficient but not necessary, so this does not contradict positivity of F_{{{},1}}",
                self.k, self.k
            )?,
        }
        write!(f, "\nelapsed: {:.3} s", self.elapsed.as_secs_f64())
    }
}

/// An exact integer that stays in a machine word until it overflows.
#[derive(Clone, Debug)]
enum Exact {
    Small(i64),
    Big(BigInt),
}

impl Exact {
    fn add(&mut self, x: i64) {
        match self {
            Exact::Small(v) => match v.checked_add(x) {
                Some(s) => *v = s,
                None => *self = Exact::Big(BigInt::from(*v) + x),
            },
            Exact::Big(b) => *b += x,
        }
    }

    fn less_than(&self, other: &Exact) -> bool {
        match (self, other) {
            (Exact::Small(a), Exact::Small(b)) => a < b,
            _ => self.to_big() < other.to_big(),
        }
    }

    fn to_big(&self) -> BigInt {
        match self {
            Exact::Small(v) => BigInt::from(*v),
            Exact::Big(b) => b.clone(),
        }
    }
}

/// Running minimum of the prefix sums of a coefficient stream.
#[derive(Debug)]
struct MinPrefix {
    sum: Exact,
    min: Exact,
    argmin: u64,
    seen: u64,
}

impl MinPrefix {
    fn new() -> Self {
        MinPrefix {
            sum: Exact::Small(0),
            min: Exact::Small(0),
            argmin: 0,
            seen: 0,
        }
    }

    fn push_small(&mut self, a: i64) {
        self.sum.add(a);
        self.note();
    }

    fn push_big(&mut self, a: &BigInt) {
        self.sum = Exact::Big(self.sum.to_big() + a);
        self.note();
    }

    fn note(&mut self) {
        if self.seen == 0 || self.sum.less_than(&self.min) {
            self.min = self.sum.clone();
            self.argmin = self.seen;
        }
        self.seen += 1;
    }
}

/// One summand `±g(q) · q^offset · (1 + q^p + ... + q^{p(count-1)})` in
/// streaming form. Its coefficient at `j` obeys
/// `b(j) = b(j - p) + g(j - offset) - g(j - offset - p·count)`,
/// so a ring of the last `p` values is all the state it needs.
#[derive(Debug)]
struct CombStream {
    negative: bool,
    gauss: Vec<i64>,
    offset: u64,
    span: u64,
    ring: Vec<i64>,
    slot: usize,
}

impl CombStream {
    fn gauss_at(&self, j: u64, shift: u64) -> i64 {
        match j.checked_sub(self.offset + shift) {
            Some(i) if (i as usize) < self.gauss.len() => self.gauss[i as usize],
            _ => 0,
        }
    }

    fn next(&mut self, j: u64) -> Result<i64> {
        let delta = self.gauss_at(j, 0) - self.gauss_at(j, self.span);
        let cell = &mut self.ring[self.slot];
        *cell = cell
            .checked_add(delta)
            .ok_or_else(|| Error::Integrity(format!("comb accumulator overflow at q^{j}")))?;
        let value = *cell;
        self.slot += 1;
        if self.slot == self.ring.len() {
            self.slot = 0;
        }
        Ok(if self.negative { -value } else { value })
    }
}

/// Coefficients `a_k(0), ..., a_k(d_k)` of `H_k`, produced in order without
/// materializing the polynomial.
#[derive(Debug)]
pub struct HCoefficients {
    streams: Vec<CombStream>,
    next_exponent: u64,
    degree: u64,
}

impl HCoefficients {
    pub fn new(k: u32) -> Result<Self> {
        let degree = h_degree(k)?;
        let streams = h_terms(k)?
            .into_iter()
            .map(|t| {
                let gauss = t
                    .gauss
                    .coeffs()
                    .iter()
                    .map(|c| {
                        i64::try_from(c).map_err(|_| {
                            Error::Integrity(format!("Gaussian coefficient {c} exceeds 64 bits"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                let ring_len = usize::try_from(t.period).map_err(|_| Error::EllOverflow(k))?;
                Ok(CombStream {
                    negative: t.sign == Sign::Minus,
                    gauss,
                    offset: t.offset,
                    span: t.period * t.count,
                    ring: vec![0; ring_len],
                    slot: 0,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(HCoefficients {
            streams,
            next_exponent: 0,
            degree,
        })
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// Machine words of state held by the stream. Depends on `k` only.
    pub fn state_words(&self) -> usize {
        self.streams
            .iter()
            .map(|s| s.gauss.len() + s.ring.len())
            .sum()
    }
}

impl Iterator for HCoefficients {
    type Item = Result<i64>;

    fn next(&mut self) -> Option<Result<i64>> {
        if self.next_exponent > self.degree {
            return None;
        }
        let j = self.next_exponent;
        self.next_exponent += 1;
        let mut total: i64 = 0;
        for s in &mut self.streams {
            let v = match s.next(j) {
                Ok(v) => v,
                Err(e) => return Some(Err(e)),
            };
            total = match total.checked_add(v) {
                Some(t) => t,
                None => {
                    return Some(Err(Error::Integrity(format!(
                        "coefficient of H at q^{j} exceeds 64 bits"
                    ))))
                }
            };
        }
        Some(Ok(total))
    }
}

/// Prefix-sum scan of `H_k` without materializing it. Requires `k >= 3`.
pub fn verify_prefix_stream(k: u32) -> Result<PrefixReport> {
    let start = Instant::now();
    let coeffs = HCoefficients::new(k)?;
    let degree = coeffs.degree();
    let mut scan = MinPrefix::new();
    for a in coeffs {
        scan.push_small(a?);
    }
    Ok(PrefixReport::new(
        k,
        crate::generating::ell(k)?,
        degree,
        scan.min.to_big(),
        scan.argmin,
        EngineMode::Streaming,
        start,
    ))
}

/// Builds `H_k` explicitly, then scans it. Limited to `k <= 10`.
pub fn verify_prefix_materialized(k: u32) -> Result<PrefixReport> {
    verify_prefix_materialized_with_cap(k, DEFAULT_MATERIALIZATION_CAP)
}

pub fn verify_prefix_materialized_with_cap(k: u32, cap: u32) -> Result<PrefixReport> {
    let start = Instant::now();
    let h = h_poly_with_cap(k, cap)?;
    let mut scan = MinPrefix::new();
    for a in h.coeffs() {
        match i64::try_from(a) {
            Ok(small) => scan.push_small(small),
            Err(_) => scan.push_big(a),
        }
    }
    let degree = h.degree().unwrap_or(0) as u64;
    Ok(PrefixReport::new(
        k,
        crate::generating::ell(k)?,
        degree,
        scan.min.to_big(),
        scan.argmin,
        EngineMode::Materialized,
        start,
    ))
}

/// Minimum and first argmin of the running sums of `coeffs`.
pub fn min_prefix_of(coeffs: &[BigInt]) -> (BigInt, u64) {
    let mut sum = BigInt::zero();
    let mut best: Option<(BigInt, u64)> = None;
    for (j, a) in coeffs.iter().enumerate() {
        sum += a;
        if best.as_ref().is_none_or(|(m, _)| sum < *m) {
            best = Some((sum.clone(), j as u64));
        }
    }
    best.unwrap_or((BigInt::zero(), 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generating::h_poly;

    #[test]
    fn stream_reproduces_h_poly() {
        for k in 3..=7 {
            let h = h_poly(k).unwrap();
            let streamed: Vec<BigInt> = HCoefficients::new(k)
                .unwrap()
                .map(|a| BigInt::from(a.unwrap()))
                .collect();
            assert_eq!(streamed, h.coeffs(), "k={k}");
        }
    }

    #[test]
    fn k3_small_case() {
        let r = verify_prefix_materialized(3).unwrap();
        assert_eq!((r.ell, r.degree), (3, 4));
        let s = verify_prefix_stream(3).unwrap();
        assert_eq!((s.min_prefix, s.argmin), (r.min_prefix, r.argmin));
        assert_eq!(s.mode, EngineMode::Streaming);
    }

    #[test]
    fn engines_agree_small_k() {
        for k in 3..=7 {
            let a = verify_prefix_stream(k).unwrap();
            let b = verify_prefix_materialized(k).unwrap();
            assert_eq!(a.min_prefix, b.min_prefix, "k={k}");
            assert_eq!(a.argmin, b.argmin, "k={k}");
            assert_eq!(a.verified, b.verified);
            let (m, at) = min_prefix_of(h_poly(k).unwrap().coeffs());
            assert_eq!((m, at), (a.min_prefix.clone(), a.argmin));
        }
    }

    #[test]
    fn state_independent_of_ell() {
        // ℓ grows by a factor of 19 from k = 10 to 11; the state grows by
        // one small Gaussian polynomial and one ring.
        let s10 = HCoefficients::new(10).unwrap().state_words();
        let s11 = HCoefficients::new(11).unwrap().state_words();
        assert!(s10 < 400 && s11 < 500, "{s10} {s11}");
    }

    #[test]
    fn exact_promotes_on_overflow() {
        let mut x = Exact::Small(i64::MAX - 1);
        x.add(5);
        assert_eq!(x.to_big(), BigInt::from(i64::MAX) + 4);
        assert!(Exact::Small(3).less_than(&x));
        let mut scan = MinPrefix::new();
        scan.push_small(i64::MAX);
        scan.push_small(i64::MAX);
        scan.push_big(&(BigInt::from(i64::MAX) * -4));
        assert_eq!(scan.min.to_big(), BigInt::from(i64::MAX) * -2);
        assert_eq!(scan.argmin, 2);
    }

    #[test]
    fn rejects_small_k_and_cap() {
        assert!(verify_prefix_stream(2).is_err());
        assert!(matches!(verify_prefix_materialized(11), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn min_prefix_first_occurrence() {
        let v: Vec<BigInt> = [0, -1, 1, -1, 0].iter().map(|&c| BigInt::from(c)).collect();
        assert_eq!(min_prefix_of(&v), (BigInt::from(-1), 1));
    }
}
