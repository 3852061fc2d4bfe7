//! Report types: per-prime outcomes with evidence, and the per-auxiliary-prime
//! intermediate integers they refer to.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::SieveConfig;
use crate::decimal;
use crate::quadfield::Splitting;
use crate::sieve::IsogenySignature;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Survives,
    Eliminated,
    Unresolved,
}

/// The criterion behind a verdict or a piece of evidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    /// `p ∤ R_q` (constant signature).
    RqGcd,
    /// No trace in `A_q^(p)` passes the mod-`𝔭₀` congruences.
    Pcrit,
    /// `p ∤ R_q·M_q` (non-constant signature).
    MqCheck,
    /// Split `p` not dividing `Norm(ε¹² − 1)`.
    EpsCondition,
    /// `p` does not split, so the signature cannot be non-constant.
    SplitCheck,
    /// `p ∤ 2^{12r} − 1`, ruling out multiplicative reduction at both primes above 2.
    Red2,
    OesterleBound,
    ExceptionalPointsTable,
    CuratedTable,
    KnownWitness,
}

/// Which branch of the strategy produced a piece of evidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Step {
    Base,
    Constant,
    NonConstant,
    Lookup,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub step: Step,
    pub criterion: Reason,
    /// Points at the intermediate record `(step, aux_prime)` holding the integers.
    pub aux_prime: Option<u64>,
    #[serde(with = "decimal::option")]
    pub value: Option<BigInt>,
    pub note: String,
}

impl Evidence {
    pub fn new(step: Step, criterion: Reason, note: impl Into<String>) -> Self {
        Evidence {
            step,
            criterion,
            aux_prime: None,
            value: None,
            note: note.into(),
        }
    }

    pub fn at(mut self, q: u64) -> Self {
        self.aux_prime = Some(q);
        self
    }

    pub fn with_value(mut self, v: BigInt) -> Self {
        self.value = Some(v);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationOutcome {
    pub p: u64,
    pub status: Status,
    pub reason: Option<Reason>,
    pub evidence: Vec<Evidence>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mode {
    FixedField { d: i64 },
    Family { exponent: u64, inert: Vec<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSummary {
    pub d: i64,
    pub disc: i64,
    pub integral_basis: String,
    pub class_number: u64,
    /// Invariant factors, ascending; empty for the trivial group.
    pub class_structure: Vec<u64>,
    pub class_exponent: u64,
    pub fundamental_unit: Option<String>,
    pub fundamental_unit_norm: Option<i64>,
    pub ramified_primes: Vec<u64>,
}

/// One possible `(n_q, r)` for an auxiliary prime. `split_capable` marks
/// `q = 2` when both primes above 2 could be multiplicative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Possibility {
    pub n_q: u64,
    pub r: u64,
    pub split_capable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntermediateRecord {
    pub step: Step,
    pub q: u64,
    pub splitting: Option<Splitting>,
    /// Set when there is a single possibility (fixed-field mode).
    pub n_q: Option<u64>,
    pub r: Option<u64>,
    pub possibilities: Vec<Possibility>,
    pub alpha: Option<String>,
    pub signature: IsogenySignature,
    /// `R_q`; for a split-capable `q = 2` this already includes `2^{12r} − 1`.
    #[serde(with = "decimal")]
    pub r_q: BigInt,
    #[serde(with = "decimal::option")]
    pub m_q: Option<BigInt>,
    #[serde(with = "decimal")]
    pub running_gcd: BigInt,
    pub running_gcd_factored: Option<String>,
    pub survivors: Option<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveReport {
    pub mode: Mode,
    pub field: Option<FieldSummary>,
    pub config: SieveConfig,
    pub base_set: Vec<u64>,
    /// Sorted by `p`; every prime not listed is eliminated (see `notes`).
    pub outcomes: Vec<EliminationOutcome>,
    pub intermediates: Vec<IntermediateRecord>,
    /// Classes of primes the mode cannot list explicitly.
    pub unresolved_classes: Vec<String>,
    pub notes: Vec<String>,
}

impl SieveReport {
    fn with_status(&self, s: Status) -> Vec<u64> {
        self.outcomes
            .iter()
            .filter(|o| o.status == s)
            .map(|o| o.p)
            .collect()
    }

    pub fn survivors(&self) -> Vec<u64> {
        self.with_status(Status::Survives)
    }

    pub fn unresolved(&self) -> Vec<u64> {
        self.with_status(Status::Unresolved)
    }

    pub fn eliminated(&self) -> Vec<u64> {
        self.with_status(Status::Eliminated)
    }

    pub fn outcome(&self, p: u64) -> Option<&EliminationOutcome> {
        self.outcomes.iter().find(|o| o.p == p)
    }

    pub fn record(&self, step: Step, q: u64) -> Option<&IntermediateRecord> {
        self.intermediates
            .iter()
            .find(|r| r.step == step && r.q == q)
    }
}
