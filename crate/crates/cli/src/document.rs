//! Machine-readable documents written by `--json`.

use isosieve::quadfield::Splitting;
use isosieve::sieve::IsogenySignature;
use isosieve::SieveReport;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

/// Bump on any change to the serialized fields.
pub const SCHEMA_VERSION: &str = "1.0.0";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Invocation {
    pub command: String,
    pub args: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimedStep {
    pub name: String,
    pub millis: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub invocation: Invocation,
    pub report: SieveReport,
    /// Only present with `--timing`, so that default output is reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Vec<TimedStep>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RqResult {
    pub d: i64,
    pub q: u64,
    pub splitting: Splitting,
    pub n_q: u64,
    pub r: u64,
    pub alpha: String,
    pub signature: IsogenySignature,
    #[serde(with = "isosieve::decimal")]
    pub r_q: BigInt,
    #[serde(with = "isosieve::decimal")]
    pub m_q: BigInt,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_q_factored: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_q_factored: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RqDocument {
    pub schema_version: String,
    pub invocation: Invocation,
    pub rq: RqResult,
}
