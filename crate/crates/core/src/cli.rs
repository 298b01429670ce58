//! The `qposit` command-line front end.
//!
//! Exit codes are the machine contract: 0 verified or no counterexample,
//! 1 counterexample or failed identity, 2 inconclusive, 3 usage or
//! configuration error, 4 internal integrity failure. Everything on stdout
//! is for humans and may change.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::generating::{e_k, f_def, g_poch, omega, DEFAULT_MATERIALIZATION_CAP};
use crate::identities::{
    heine_check, heine_check_perturbed, mock_theta_gap_check, rogers_fine_check,
    rogers_fine_check_perturbed, HeineInstance, RogersFineInstance, DEFAULT_IDENTITY_ORDER,
};
use crate::series::TruncSeries;
use crate::verify::certificate::{timestamp_now, write_certificate, Certificate};
use crate::verify::conjecture::{
    conj_diff, conj_g, lemma53_check_to, strict_positivity_scan, ConjectureReport,
    DEFAULT_SCAN_ORDER, LEMMA53_ORDER,
};
use crate::verify::prefix::{verify_prefix_materialized_with_cap, verify_prefix_stream, PrefixReport};

/// Directory for certificates written without an explicit `--cert` path.
pub const OUT_DIR_ENV: &str = "QPOS_OUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(i32)]
pub enum ExitStatus {
    Ok = 0,
    Counterexample = 1,
    Inconclusive = 2,
    Usage = 3,
    Integrity = 4,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    fn for_error(e: &Error) -> Self {
        match e {
            Error::Integrity(_)
            | Error::NonUnitConstant(_)
            | Error::DigestMismatch { .. }
            | Error::MalformedCertificate { .. } => ExitStatus::Integrity,
            Error::InvalidParameter(_)
            | Error::CapExceeded { .. }
            | Error::EllOverflow(_)
            | Error::NonMonomial(_)
            | Error::Io { .. }
            | Error::Csv(_) => ExitStatus::Usage,
        }
    }

    fn worst(self, other: ExitStatus) -> ExitStatus {
        if other.code() > self.code() {
            other
        } else {
            self
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qposit", version, about = "Exact coefficient positivity checks for F_{k,m}(q)")]
pub struct RunConfig {
    /// Only print errors.
    #[arg(short, long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coefficients c_{k,m}(0..=N) of F_{k,m}.
    Coeffs {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        dump: Dump,
    },
    /// Prefix-sum positivity certificate for F_{k,1}.
    Verify(VerifyArgs),
    /// Finite scan of one of the positivity conjectures.
    Scan(ScanArgs),
    /// Heine, Rogers-Fine and mock theta gap checks.
    Identities {
        #[arg(long = "N", default_value_t = DEFAULT_IDENTITY_ORDER)]
        order: usize,
    },
    /// Coefficients of the third order mock theta function omega.
    Omega {
        #[command(flatten)]
        dump: Dump,
    },
    /// Coefficients of E_k.
    Ek {
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        dump: Dump,
    },
    /// Coefficients of G_{k,n}.
    G {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        dump: Dump,
    },
}

#[derive(Debug, Args)]
pub struct Dump {
    /// Truncation order.
    #[arg(long = "N")]
    pub order: usize,
    /// Write `n,coefficient` rows to this file instead of stdout.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub k: u32,
    /// Constant-memory streaming engine (the default).
    #[arg(long, conflicts_with = "materialize")]
    pub stream: bool,
    /// Build H_k explicitly; refused above the materialization cap.
    #[arg(long)]
    pub materialize: bool,
    #[arg(long, default_value_t = DEFAULT_MATERIALIZATION_CAP)]
    pub cap: u32,
    /// Certificate path; defaults to `$QPOS_OUT_DIR` or the working directory.
    #[arg(long)]
    pub cert: Option<PathBuf>,
    /// Skip writing a certificate.
    #[arg(long, conflicts_with = "cert")]
    pub no_cert: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScanKind {
    /// c_{k,m}(n) > 0 for m <= n <= N.
    Strict,
    /// G_{k,n} has non-negative coefficients.
    #[value(name = "G")]
    G,
    /// G_{k,n} - G_{k+1,n-1} has non-negative coefficients.
    Diff,
    /// The proved G_{n+2-j,n} = G_{n+2,n-j}.
    Lemma53,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, value_enum)]
    pub conjecture: ScanKind,
    #[arg(long, default_value_t = 1)]
    pub k_min: u32,
    #[arg(long)]
    pub k_max: Option<u32>,
    #[arg(long)]
    pub n_max: Option<u32>,
    /// Only used by `strict`.
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long = "N")]
    pub order: Option<usize>,
    /// Also write the report as a certificate.
    #[arg(long)]
    pub cert: Option<PathBuf>,
}

/// Parses `argv` (including the program name) and runs it.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitStatus::Usage.code() } else { 0 };
        }
    };
    match execute(&config) {
        Ok(status) => status.code(),
        Err(e) => {
            eprintln!("error: {e}");
            ExitStatus::for_error(&e).code()
        }
    }
}

pub fn execute(config: &RunConfig) -> Result<ExitStatus> {
    let quiet = config.quiet;
    match &config.command {
        Command::Coeffs { k, m, dump } => emit(&f_def(*k, *m, dump.order)?, dump),
        Command::Omega { dump } => emit(&omega(dump.order), dump),
        Command::Ek { k, dump } => emit(&e_k(*k, dump.order)?, dump),
        Command::G { k, n, dump } => emit(&g_poch(*k, *n, dump.order)?, dump),
        Command::Verify(args) => verify(args, quiet),
        Command::Scan(args) => scan(args, quiet),
        Command::Identities { order } => identities(*order, quiet),
    }
}

fn emit(series: &TruncSeries, dump: &Dump) -> Result<ExitStatus> {
    match &dump.csv {
        Some(path) => write_csv(series.coeffs(), path)?,
        None => {
            let stdout = io::stdout();
            let mut out = io::BufWriter::new(stdout.lock());
            for c in series.coeffs() {
                writeln!(out, "{c}").map_err(|e| Error::io("<stdout>", e))?;
            }
            out.flush().map_err(|e| Error::io("<stdout>", e))?;
        }
    }
    Ok(ExitStatus::Ok)
}

/// Writes coefficients as `n,coefficient` rows.
pub fn write_csv(coeffs: &[BigInt], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(["n", "coefficient"])?;
    for (n, c) in coeffs.iter().enumerate() {
        w.write_record([n.to_string(), c.to_string()])?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Reads a dump written by [`write_csv`], checking that rows are consecutive.
pub fn read_csv(path: &Path) -> Result<Vec<BigInt>> {
    let mut r = csv::Reader::from_path(path)?;
    let headers = r.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["n", "coefficient"] {
        return Err(Error::InvalidParameter(format!(
            "{}: expected header `n,coefficient`",
            path.display()
        )));
    }
    let mut out = Vec::new();
    for row in r.records() {
        let row = row?;
        let bad = || Error::InvalidParameter(format!("{}: bad row {:?}", path.display(), row));
        let n: usize = row.get(0).and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        let c: BigInt = row.get(1).and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        if n != out.len() {
            return Err(bad());
        }
        out.push(c);
    }
    Ok(out)
}

fn default_out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}

fn verify(args: &VerifyArgs, quiet: bool) -> Result<ExitStatus> {
    let report: PrefixReport = if args.materialize {
        verify_prefix_materialized_with_cap(args.k, args.cap)?
    } else {
        verify_prefix_stream(args.k)?
    };
    if !quiet {
        println!("{report}");
    }
    if !args.no_cert {
        let path = args.cert.clone().unwrap_or_else(|| {
            default_out_dir().join(format!("verify-k{}-{}.json", report.k, report.mode.as_str()))
        });
        write_certificate(&Certificate::for_prefix(&report, timestamp_now()), &path)?;
        if !quiet {
            println!("certificate: {}", path.display());
        }
    }
    Ok(if report.verified {
        ExitStatus::Ok
    } else {
        ExitStatus::Inconclusive
    })
}

fn require(v: Option<u32>, flag: &str, kind: ScanKind) -> Result<u32> {
    v.ok_or_else(|| Error::InvalidParameter(format!("scan {kind:?} needs --{flag}")))
}

fn scan(args: &ScanArgs, quiet: bool) -> Result<ExitStatus> {
    let kind = args.conjecture;
    let report: ConjectureReport = match kind {
        ScanKind::Strict => strict_positivity_scan(
            args.k_min,
            require(args.k_max, "k-max", kind)?,
            args.m,
            args.order.unwrap_or(DEFAULT_SCAN_ORDER),
        )?,
        ScanKind::G => conj_g(
            require(args.k_max, "k-max", kind)?,
            require(args.n_max, "n-max", kind)?,
            args.order.unwrap_or(DEFAULT_SCAN_ORDER),
        )?,
        ScanKind::Diff => conj_diff(
            require(args.k_max, "k-max", kind)?,
            require(args.n_max, "n-max", kind)?,
            args.order.unwrap_or(DEFAULT_SCAN_ORDER),
        )?,
        ScanKind::Lemma53 => lemma53_check_to(
            require(args.n_max, "n-max", kind)?,
            args.order.unwrap_or(LEMMA53_ORDER),
        )?,
    };
    if !quiet || !report.passed() {
        println!("{report}");
    }
    if let Some(path) = &args.cert {
        write_certificate(&Certificate::for_conjecture(&report, timestamp_now()), path)?;
    }
    Ok(match (report.passed(), report.conjecture.is_theorem()) {
        (true, _) => ExitStatus::Ok,
        (false, true) => ExitStatus::Integrity,
        (false, false) => ExitStatus::Counterexample,
    })
}

fn identities(order: usize, quiet: bool) -> Result<ExitStatus> {
    let mut status = ExitStatus::Ok;
    let mut line = |name: String, holds: bool, expected: bool| {
        let verdict = match (holds, expected) {
            (true, true) => "holds",
            (false, false) => "fails as expected",
            (false, true) => "FAILS",
            (true, false) => "HOLDS (negative control; checker is broken)",
        };
        if !quiet || holds != expected {
            println!("{name}: {verdict}");
        }
        status = status.worst(match (holds, expected) {
            (false, true) => ExitStatus::Counterexample,
            (true, false) => ExitStatus::Integrity,
            _ => ExitStatus::Ok,
        });
    };

    for k in 3..=8 {
        let inst = HeineInstance::for_finite_form(k, order);
        line(format!("heine k={k} N={order}"), heine_check(&inst)?, true);
        line(
            format!("heine k={k} N={order} perturbed"),
            heine_check_perturbed(&inst, 1)?,
            false,
        );
    }
    let rf = RogersFineInstance::for_omega(order);
    line(format!("rogers-fine N={order}"), rogers_fine_check(&rf)?, true);
    line(
        format!("rogers-fine N={order} perturbed"),
        rogers_fine_check_perturbed(&rf, 1)?,
        false,
    );
    for k in 1..=12u32 {
        if order < 2 * k as usize + 1 {
            if !quiet {
                println!("gap k={k}: skipped (needs N >= {})", 2 * k + 1);
            }
            continue;
        }
        line(format!("gap k={k} N={order}"), mock_theta_gap_check(k, order)?, true);
    }
    Ok(status)
}
