//! Finite-order scans for the positivity conjectures around `F_{k,m}` and
//! the summands `G_{k,n}`.
//!
//! A scan never proves anything: `NoCounterexampleToOrder` only records that
//! every coefficient through the truncation order behaved.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generating::{f_def, g_poch};
use crate::poly::IntPolynomial;
use crate::series::{Sign, TruncSeries};

/// Default truncation order for the `G` scans.
pub const DEFAULT_SCAN_ORDER: usize = 500;

/// Order at which the proved `G` symmetry is compared.
pub const LEMMA53_ORDER: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConjectureId {
    /// `c_{k,m}(n) > 0` for `m <= n <= N`.
    StrictPositivity,
    /// `G_{k,n} ⪰ 0`.
    GNonNegative,
    /// `G_{k,n} - G_{k+1,n-1} ⪰ 0` for `k >= n + 1`.
    GDifference,
    /// `G_{n+2-j,n} = G_{n+2,n-j}`, a theorem: failures are bugs.
    Lemma53,
}

impl ConjectureId {
    pub fn is_theorem(self) -> bool {
        self == ConjectureId::Lemma53
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ConjectureId::StrictPositivity => "strict-positivity",
            ConjectureId::GNonNegative => "g-nonnegative",
            ConjectureId::GDifference => "g-difference",
            ConjectureId::Lemma53 => "lemma53",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ScanStatus {
    NoCounterexampleToOrder,
    Counterexample,
}

/// One grid cell. Fields that do not apply to a conjecture are `None`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub k: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub j: Option<u32>,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={}", self.k)?;
        for (name, v) in [("m", self.m), ("n", self.n), ("j", self.j)] {
            if let Some(v) = v {
                write!(f, ", {name}={v}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub cell: Cell,
    pub exponent: usize,
    #[serde(with = "super::decimal")]
    pub coefficient: BigInt,
}

/// Inclusive bounds of a scanned grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub k_min: u32,
    pub k_max: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n_min: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n_max: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub conjecture: ConjectureId,
    pub grid: Grid,
    pub cells: usize,
    pub order: usize,
    pub counterexamples: Vec<Counterexample>,
    pub status: ScanStatus,
}

impl ConjectureReport {
    fn new(conjecture: ConjectureId, grid: Grid, cells: usize, order: usize, counterexamples: Vec<Counterexample>) -> Self {
        let status = if counterexamples.is_empty() {
            ScanStatus::NoCounterexampleToOrder
        } else {
            ScanStatus::Counterexample
        };
        ConjectureReport {
            conjecture,
            grid,
            cells,
            order,
            counterexamples,
            status,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == ScanStatus::NoCounterexampleToOrder
    }
}

impl fmt::Display for ConjectureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {} cells scanned to order {}",
            self.conjecture.as_str(),
            self.cells,
            self.order
        )?;
        match self.status {
            ScanStatus::NoCounterexampleToOrder => write!(f, "NO_COUNTEREXAMPLE_TO_ORDER"),
            ScanStatus::Counterexample => {
                if self.conjecture.is_theorem() {
                    writeln!(f, "INTERNAL ERROR: a proved identity failed; this is an implementation bug")?;
                } else {
                    writeln!(f, "COUNTEREXAMPLE FOUND ({} entries)", self.counterexamples.len())?;
                }
                for c in self.counterexamples.iter().take(20) {
                    writeln!(f, "  {}: coefficient of q^{} is {}", c.cell, c.exponent, c.coefficient)?;
                }
                if self.counterexamples.len() > 20 {
                    writeln!(f, "  ... {} more", self.counterexamples.len() - 20)?;
                }
                write!(f, "COUNTEREXAMPLE")
            }
        }
    }
}

fn collect<F>(cells: Vec<Cell>, check: F) -> Result<Vec<Counterexample>>
where
    F: Fn(&Cell) -> Result<Vec<Counterexample>> + Sync,
{
    let per_cell: Vec<Vec<Counterexample>> = cells.par_iter().map(&check).collect::<Result<_>>()?;
    Ok(per_cell.into_iter().flatten().collect())
}

fn entries_where(cell: Cell, s: &TruncSeries, from: usize, bad: impl Fn(&BigInt) -> bool) -> Vec<Counterexample> {
    s.coeffs()
        .iter()
        .enumerate()
        .skip(from)
        .filter(|(_, c)| bad(c))
        .map(|(exponent, c)| Counterexample {
            cell,
            exponent,
            coefficient: c.clone(),
        })
        .collect()
}

/// Checks `c_{k,m}(n) > 0` for `m <= n <= order`. Coefficients below `q^m`
/// vanish by construction and are not reported.
pub fn strict_positivity(k: u32, m: u32, order: usize) -> Result<ConjectureReport> {
    strict_positivity_scan(k, k, m, order)
}

pub fn strict_positivity_scan(k_min: u32, k_max: u32, m: u32, order: usize) -> Result<ConjectureReport> {
    if k_min == 0 || m == 0 || k_min > k_max {
        return Err(Error::InvalidParameter(format!(
            "strict positivity needs 1 <= k_min <= k_max and m >= 1 (got k {k_min}..={k_max}, m = {m})"
        )));
    }
    let cells: Vec<Cell> = (k_min..=k_max)
        .map(|k| Cell {
            k,
            m: Some(m),
            ..Cell::default()
        })
        .collect();
    let n = cells.len();
    let found = collect(cells, |cell| {
        let f = f_def(cell.k, m, order)?;
        Ok(entries_where(*cell, &f, m as usize, |c| !c.is_positive()))
    })?;
    let grid = Grid {
        k_min,
        k_max,
        n_min: None,
        n_max: None,
        m: Some(m),
    };
    Ok(ConjectureReport::new(ConjectureId::StrictPositivity, grid, n, order, found))
}

/// `G_{k,n} ⪰ 0` for `1 <= k <= k_max`, `0 <= n <= n_max`.
pub fn conj_g(k_max: u32, n_max: u32, order: usize) -> Result<ConjectureReport> {
    if k_max == 0 {
        return Err(Error::InvalidParameter("k_max must be at least 1".into()));
    }
    let cells: Vec<Cell> = (1..=k_max)
        .flat_map(|k| {
            (0..=n_max).map(move |n| Cell {
                k,
                n: Some(n),
                ..Cell::default()
            })
        })
        .collect();
    let count = cells.len();
    let found = collect(cells, |cell| {
        let g = g_poch(cell.k, cell.n.unwrap_or(0) as usize, order)?;
        Ok(entries_where(*cell, &g, 0, Signed::is_negative))
    })?;
    let grid = Grid {
        k_min: 1,
        k_max,
        n_min: Some(0),
        n_max: Some(n_max),
        m: None,
    };
    Ok(ConjectureReport::new(ConjectureId::GNonNegative, grid, count, order, found))
}

/// Cells `(k, n)` of the difference conjecture: `1 <= n <= n_max`,
/// `n + 1 <= k <= k_max`.
pub fn diff_cells(k_max: u32, n_max: u32) -> Vec<Cell> {
    (1..=n_max)
        .flat_map(|n| {
            (n + 1..=k_max).map(move |k| Cell {
                k,
                n: Some(n),
                ..Cell::default()
            })
        })
        .collect()
}

/// `G_{k,n} - G_{k+1,n-1} ⪰ 0` over [`diff_cells`].
pub fn conj_diff(k_max: u32, n_max: u32, order: usize) -> Result<ConjectureReport> {
    if k_max == 0 || n_max == 0 {
        return Err(Error::InvalidParameter("grid bounds must be at least 1".into()));
    }
    let cells = diff_cells(k_max, n_max);
    let count = cells.len();
    let found = collect(cells, |cell| {
        let n = cell.n.unwrap_or(1) as usize;
        let d = g_poch(cell.k, n, order)?.axpy_shift(&g_poch(cell.k + 1, n - 1, order)?, -1, 0);
        Ok(entries_where(*cell, &d, 0, Signed::is_negative))
    })?;
    let grid = Grid {
        k_min: 2,
        k_max,
        n_min: Some(1),
        n_max: Some(n_max),
        m: None,
    };
    Ok(ConjectureReport::new(ConjectureId::GDifference, grid, count, order, found))
}

/// `G_{n+2-j,n} = G_{n+2,n-j}` for `1 <= j <= n <= n_max`, to order 200.
/// Mismatches are reported with the first differing exponent and the
/// difference of the two coefficients there.
pub fn lemma53_check(n_max: u32) -> Result<ConjectureReport> {
    lemma53_check_to(n_max, LEMMA53_ORDER)
}

pub fn lemma53_check_to(n_max: u32, order: usize) -> Result<ConjectureReport> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let cells: Vec<Cell> = (1..=n_max)
        .flat_map(|n| {
            (1..=n).map(move |j| Cell {
                k: n + 2 - j,
                n: Some(n),
                j: Some(j),
                ..Cell::default()
            })
        })
        .collect();
    let count = cells.len();
    let found = collect(cells, |cell| {
        let (n, j) = (cell.n.unwrap_or(1), cell.j.unwrap_or(1));
        let lhs = g_poch(n + 2 - j, n as usize, order)?;
        let rhs = g_poch(n + 2, (n - j) as usize, order)?;
        let diff = lhs.axpy_shift(&rhs, -1, 0);
        Ok(diff
            .coeffs()
            .iter()
            .position(|c| !num_traits::Zero::is_zero(c))
            .map(|e| Counterexample {
                cell: *cell,
                exponent: e,
                coefficient: diff.coeff(e).clone(),
            })
            .into_iter()
            .collect())
    })?;
    let grid = Grid {
        k_min: 2,
        k_max: n_max + 1,
        n_min: Some(1),
        n_max: Some(n_max),
        m: None,
    };
    Ok(ConjectureReport::new(ConjectureId::Lemma53, grid, count, order, found))
}

/// Order used to compare a candidate decomposition against `G_{k,n}`.
pub fn decomposition_order(z: &[IntPolynomial]) -> usize {
    let total: usize = z.iter().filter_map(IntPolynomial::degree).sum();
    200.max(2 * total)
}

/// `sum_j z_j / (1 - q^{2j+1}) == G_{k,n}` through [`decomposition_order`],
/// ignoring signs of the `z_j`.
pub fn decomposition_sum_matches(k: u32, n: usize, z: &[IntPolynomial]) -> Result<bool> {
    if z.len() != n + 1 {
        return Err(Error::InvalidParameter(format!(
            "a decomposition of G_{{k,{n}}} needs {} numerators, got {}",
            n + 1,
            z.len()
        )));
    }
    let order = decomposition_order(z);
    let mut sum = TruncSeries::zero(order);
    for (j, zj) in z.iter().enumerate() {
        let mut t = zj.to_series(order);
        t.div_one_minus(Sign::Plus, 2 * j + 1)?;
        sum = &sum + &t;
    }
    Ok(sum == g_poch(k, n, order)?)
}

/// Whether `z` witnesses `G_{k,n} = sum_j z_j / (1 - q^{2j+1})` with every
/// `z_j ⪰ 0`. A checker only: no decomposition is searched for.
pub fn check_decomposition(k: u32, n: usize, z: &[IntPolynomial]) -> Result<bool> {
    let sum_ok = decomposition_sum_matches(k, n, z)?;
    Ok(sum_ok && z.iter().all(IntPolynomial::is_nonnegative))
}
