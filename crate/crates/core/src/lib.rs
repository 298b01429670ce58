//! Exact q-series arithmetic and machine verification of coefficient
//! positivity for the two-color partition generating functions `F_{k,m}(q)`.
//!
//! Module map:
//!
//! - [`series`], [`poly`]: truncated power series and exact polynomials over
//!   arbitrary-precision integers.
//! - [`qseries`]: q-Pochhammer symbols with signed-monomial parameters and
//!   Gaussian polynomials.
//! - [`generating`]: `F_{k,m}`, `ω`, `E_k`, `G_{k,n}` and `H_k`.
//! - [`verify`]: prefix-sum positivity certificates and conjecture scans.
//! - [`identities`]: finite-order checks of the classical transformations.
//! - [`cli`]: the `qposit` command-line front end.

pub mod cli;
pub mod error;
pub mod generating;
pub mod identities;
pub mod poly;
pub mod qseries;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use poly::{prefix_sums, IntPolynomial};
pub use series::{Sign, TruncSeries};
