//! Persisted, digest-protected records of verification runs.
//!
//! A certificate is one JSON object with the fields `method`, `params`,
//! `result`, `digest`, `tool_version` and `timestamp`. The digest is the
//! SHA-256 of a canonical little-endian encoding of the mathematical content
//! only, so it is identical across machines and runs. Elapsed time is not
//! recorded. The timestamp honours `SOURCE_DATE_EPOCH` so that repeated runs
//! can produce byte-identical files.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::{DateTime, SecondsFormat, Utc};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::conjecture::{ConjectureReport, Counterexample};
use super::prefix::{EngineMode, PrefixReport};
use crate::error::{Error, Result};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const METHOD_PREFIX_STREAMING: &str = "prefix-sum/streaming/v1";
pub const METHOD_PREFIX_MATERIALIZED: &str = "prefix-sum/materialized/v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixResult {
    pub ell: u64,
    pub degree: u64,
    #[serde(with = "super::decimal")]
    pub min_prefix: BigInt,
    pub argmin: u64,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CertResult {
    PrefixSum(PrefixResult),
    Conjecture(ConjectureReport),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertParams {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub truncation: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub method: String,
    pub params: CertParams,
    pub result: CertResult,
    pub digest: String,
    pub tool_version: String,
    pub timestamp: String,
}

impl Certificate {
    pub fn for_prefix(report: &PrefixReport, timestamp: String) -> Self {
        let method = match report.mode {
            EngineMode::Streaming => METHOD_PREFIX_STREAMING,
            EngineMode::Materialized => METHOD_PREFIX_MATERIALIZED,
        };
        let params = CertParams {
            k: Some(report.k),
            truncation: None,
        };
        let result = CertResult::PrefixSum(PrefixResult {
            ell: report.ell,
            degree: report.degree,
            min_prefix: report.min_prefix.clone(),
            argmin: report.argmin,
            verified: report.verified,
        });
        Self::seal(method.to_string(), params, result, timestamp)
    }

    pub fn for_conjecture(report: &ConjectureReport, timestamp: String) -> Self {
        let method = format!("scan/{}/v1", report.conjecture.as_str());
        let params = CertParams {
            k: None,
            truncation: Some(report.order),
        };
        Self::seal(method, params, CertResult::Conjecture(report.clone()), timestamp)
    }

    fn seal(method: String, params: CertParams, result: CertResult, timestamp: String) -> Self {
        let mut cert = Certificate {
            method,
            params,
            result,
            digest: String::new(),
            tool_version: TOOL_VERSION.to_string(),
            timestamp,
        };
        cert.digest = cert.compute_digest();
        cert
    }

    /// Hex SHA-256 over the canonical encoding of the result.
    pub fn compute_digest(&self) -> String {
        let mut buf = Vec::new();
        match &self.result {
            CertResult::PrefixSum(r) => {
                buf.extend_from_slice(&self.params.k.unwrap_or(0).to_le_bytes());
                buf.extend_from_slice(&r.ell.to_le_bytes());
                buf.extend_from_slice(&r.degree.to_le_bytes());
                put_bigint(&mut buf, &r.min_prefix);
                buf.extend_from_slice(&r.argmin.to_le_bytes());
            }
            CertResult::Conjecture(r) => {
                put_str(&mut buf, r.conjecture.as_str());
                buf.extend_from_slice(&r.grid.k_min.to_le_bytes());
                buf.extend_from_slice(&r.grid.k_max.to_le_bytes());
                for v in [r.grid.n_min, r.grid.n_max, r.grid.m] {
                    put_opt(&mut buf, v);
                }
                buf.extend_from_slice(&(r.cells as u64).to_le_bytes());
                buf.extend_from_slice(&(r.order as u64).to_le_bytes());
                buf.extend_from_slice(&(r.counterexamples.len() as u64).to_le_bytes());
                for c in &r.counterexamples {
                    put_counterexample(&mut buf, c);
                }
            }
        }
        hex::encode(Sha256::digest(&buf))
    }

    /// Checks the digest and the internal consistency of the result.
    pub fn validate(&self, path: &Path) -> Result<()> {
        let computed = self.compute_digest();
        if computed != self.digest {
            return Err(Error::DigestMismatch {
                path: path.to_path_buf(),
                stored: self.digest.clone(),
                computed,
            });
        }
        let consistent = match &self.result {
            CertResult::PrefixSum(r) => r.verified == (r.min_prefix >= BigInt::from(0)),
            CertResult::Conjecture(r) => r.passed() == r.counterexamples.is_empty(),
        };
        if !consistent {
            return Err(Error::Integrity(format!(
                "{}: result status contradicts its own data",
                path.display()
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }
}

fn put_str(buf: &mut Vec<u8>, s: &str) {
    buf.extend_from_slice(&(s.len() as u64).to_le_bytes());
    buf.extend_from_slice(s.as_bytes());
}

fn put_bigint(buf: &mut Vec<u8>, v: &BigInt) {
    let bytes = v.to_signed_bytes_le();
    buf.extend_from_slice(&(bytes.len() as u64).to_le_bytes());
    buf.extend_from_slice(&bytes);
}

fn put_opt(buf: &mut Vec<u8>, v: Option<u32>) {
    match v {
        Some(v) => {
            buf.push(1);
            buf.extend_from_slice(&v.to_le_bytes());
        }
        None => buf.push(0),
    }
}

fn put_counterexample(buf: &mut Vec<u8>, c: &Counterexample) {
    buf.extend_from_slice(&c.cell.k.to_le_bytes());
    for v in [c.cell.m, c.cell.n, c.cell.j] {
        put_opt(buf, v);
    }
    buf.extend_from_slice(&(c.exponent as u64).to_le_bytes());
    put_bigint(buf, &c.coefficient);
}

/// RFC 3339 UTC timestamp; `SOURCE_DATE_EPOCH` (seconds) overrides the clock.
pub fn timestamp_now() -> String {
    let pinned = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| DateTime::<Utc>::from_timestamp(secs, 0));
    pinned
        .unwrap_or_else(Utc::now)
        .to_rfc3339_opts(SecondsFormat::Secs, true)
}

fn staging_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".partial");
    path.with_file_name(name)
}

/// Writes `cert` to `path`.
///
/// The file is staged next to the target with `create_new`, so a second
/// concurrent writer to the same path fails instead of interleaving, and
/// then renamed into place.
pub fn write_certificate(cert: &Certificate, path: &Path) -> Result<()> {
    let staging = staging_path(path);
    let mut file = OpenOptions::new()
        .write(true)
        .create_new(true)
        .open(&staging)
        .map_err(|e| Error::io(&staging, e))?;
    let written = file
        .write_all(cert.to_json().as_bytes())
        .and_then(|()| file.sync_all());
    drop(file);
    if let Err(e) = written.and_then(|()| fs::rename(&staging, path)) {
        let _ = fs::remove_file(&staging);
        return Err(Error::io(path, e));
    }
    Ok(())
}

/// Reads a certificate and re-derives its digest.
pub fn load_certificate(path: &Path) -> Result<Certificate> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let cert: Certificate = serde_json::from_str(&text).map_err(|source| Error::MalformedCertificate {
        path: path.to_path_buf(),
        source,
    })?;
    cert.validate(path)?;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::conjecture::lemma53_check;
    use crate::verify::prefix::verify_prefix_stream;

    const TS: &str = "2024-01-01T00:00:00Z";

    #[test]
    fn prefix_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("k8.json");
        let report = verify_prefix_stream(8).unwrap();
        let cert = Certificate::for_prefix(&report, TS.into());
        write_certificate(&cert, &path).unwrap();
        assert_eq!(load_certificate(&path).unwrap(), cert);
        assert!(!staging_path(&path).exists());
    }

    #[test]
    fn conjecture_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("l53.json");
        let cert = Certificate::for_conjecture(&lemma53_check(4).unwrap(), TS.into());
        write_certificate(&cert, &path).unwrap();
        assert_eq!(load_certificate(&path).unwrap(), cert);
    }

    #[test]
    fn flipped_digit_is_a_digest_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("k5.json");
        let cert = Certificate::for_prefix(&verify_prefix_stream(5).unwrap(), TS.into());
        write_certificate(&cert, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let needle = format!("\"argmin\": {}", cert_argmin(&cert));
        let replaced = format!("\"argmin\": {}", cert_argmin(&cert) + 1);
        assert!(text.contains(&needle));
        fs::write(&path, text.replacen(&needle, &replaced, 1)).unwrap();
        assert!(matches!(load_certificate(&path), Err(Error::DigestMismatch { .. })));
    }

    fn cert_argmin(c: &Certificate) -> u64 {
        match &c.result {
            CertResult::PrefixSum(r) => r.argmin,
            _ => unreachable!(),
        }
    }

    #[test]
    fn corrupt_json_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        fs::write(&path, "{ not json").unwrap();
        assert!(matches!(load_certificate(&path), Err(Error::MalformedCertificate { .. })));
    }

    #[test]
    fn second_writer_is_refused() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("busy.json");
        fs::write(staging_path(&path), "held").unwrap();
        let cert = Certificate::for_prefix(&verify_prefix_stream(3).unwrap(), TS.into());
        assert!(matches!(write_certificate(&cert, &path), Err(Error::Io { .. })));
    }

    #[test]
    fn digest_is_deterministic() {
        let a = Certificate::for_prefix(&verify_prefix_stream(9).unwrap(), TS.into());
        let b = Certificate::for_prefix(&verify_prefix_stream(9).unwrap(), "2030-01-01T00:00:00Z".into());
        assert_eq!(a.digest, b.digest);
        assert_eq!(a.digest.len(), 64);
    }

    #[test]
    fn inconsistent_verified_flag_is_rejected() {
        let mut cert = Certificate::for_prefix(&verify_prefix_stream(4).unwrap(), TS.into());
        if let CertResult::PrefixSum(r) = &mut cert.result {
            r.verified = !r.verified;
        }
        assert!(matches!(cert.validate(Path::new("x")), Err(Error::Integrity(_))));
    }
}
