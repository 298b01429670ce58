//! Positivity verification: prefix-sum certificates for `F_{k,1}`, finite
//! scans of the `G_{k,n}` conjectures, and persisted certificates.

pub mod certificate;
pub mod conjecture;
pub mod prefix;

pub use certificate::{load_certificate, write_certificate, Certificate};
pub use conjecture::{
    check_decomposition, conj_diff, conj_g, lemma53_check, strict_positivity, ConjectureId,
    ConjectureReport, ScanStatus,
};
pub use prefix::{
    verify_prefix_materialized, verify_prefix_materialized_with_cap, verify_prefix_stream,
    EngineMode, HCoefficients, Outcome, PrefixReport,
};

/// Serde adapter writing big integers as decimal strings.
pub(crate) mod decimal {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}
