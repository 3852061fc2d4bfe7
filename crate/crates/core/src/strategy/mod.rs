//! Three-step elimination over a fixed quadratic field, or over the family of
//! real quadratic fields with a given class-group exponent.
//!
//! Step 1 assumes a constant signature and sieves with `R_q` and the
//! congruence test; Step 2 handles non-constant signatures (fixed fields
//! only); Step 3 falls back to curated per-field data and the
//! exceptional-points lemma. A prime is eliminated only when every branch
//! that could apply to it is.

mod constant;
mod nonconstant;
pub mod report;
pub mod tables;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, is_prime};
use crate::error::StrategyError;
use crate::factor::factor;
use crate::quadfield::{make_field, QuadField, Splitting};
use crate::sieve::DEFAULT_Q2_LIMIT;
use constant::{build_stages, ConstantBranch, Verdict};
use nonconstant::NonConstantBranch;
pub use report::{
    EliminationOutcome, Evidence, FieldSummary, IntermediateRecord, Mode, Possibility, Reason,
    SieveReport, Status, Step,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveConfig {
    /// Odd auxiliary primes, ascending.
    pub aux_primes: Vec<u64>,
    pub use_q2: bool,
    pub q2_limit: u64,
    /// Trial-division bound when factoring gcds.
    pub max_step1_survivor_scan: u64,
    /// Count an empty `A_q^(p)` as elimination. Off by default: an empty set
    /// only says no trace was testable.
    pub empty_trace_set_eliminates: bool,
    /// Imaginary fields: exclusive bound on auxiliary primes for Step 2.
    pub step2_max_aux: u64,
    /// Imaginary fields: stop once the survivor set is unchanged this many times.
    pub step2_stable_rounds: usize,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            aux_primes: vec![3, 5, 7, 11, 13, 17, 19],
            use_q2: true,
            q2_limit: DEFAULT_Q2_LIMIT,
            max_step1_survivor_scan: 1 << 20,
            empty_trace_set_eliminates: false,
            step2_max_aux: 200,
            step2_stable_rounds: 3,
        }
    }
}

impl SieveConfig {
    /// Odd primes `3 ≤ q ≤ aux_max`.
    pub fn with_aux_max(aux_max: u64) -> Self {
        SieveConfig {
            aux_primes: crate::arith::primes_between(3, aux_max),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), StrategyError> {
        if self.aux_primes.is_empty() {
            return Err(StrategyError::NoAuxiliaryPrimes);
        }
        if let Some(q) = self.aux_primes.iter().find(|&&q| q == 2 || !is_prime(q)) {
            return Err(StrategyError::Config(format!("{q} is not an odd prime")));
        }
        if self.q2_limit < 23 {
            return Err(StrategyError::Config(format!(
                "q2_limit must be at least 23, got {}",
                self.q2_limit
            )));
        }
        if self.step2_stable_rounds == 0 {
            return Err(StrategyError::Config(
                "step2_stable_rounds must be positive".into(),
            ));
        }
        Ok(())
    }

    fn normalized(&self) -> Self {
        let mut c = self.clone();
        c.aux_primes.sort_unstable();
        c.aux_primes.dedup();
        c
    }
}

#[cfg(feature = "parallel")]
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.iter().map(f).collect()
}

/// Gcds above this size are recorded unfactored.
const FACTOR_BITS: u64 = 1024;

/// Factored form of `g` and its prime factors passing `keep`, when `g` is
/// small enough to factor completely.
pub(crate) fn factor_small(
    g: &BigInt,
    cfg: &SieveConfig,
    keep: impl Fn(u64) -> bool,
) -> (Option<String>, Option<Vec<u64>>) {
    if g.bits() > FACTOR_BITS || g.sign() == num_bigint::Sign::NoSign {
        return (None, None);
    }
    let f = factor(g, cfg.max_step1_survivor_scan);
    if !f.is_complete() {
        return (Some(f.to_string()), None);
    }
    let primes = f
        .primes
        .keys()
        .filter_map(num_traits::ToPrimitive::to_u64)
        .filter(|&p| keep(p))
        .collect();
    (Some(f.to_string()), Some(primes))
}

fn base_outcome(p: u64) -> EliminationOutcome {
    let w = tables::witness_curve(p).expect("base-set prime has a witness");
    EliminationOutcome {
        p,
        status: Status::Survives,
        reason: Some(Reason::KnownWitness),
        evidence: vec![Evidence::new(
            Step::Base,
            Reason::KnownWitness,
            format!(
                "base change of {} (conductor {}), which has a rational {p}-isogeny and is semistable at {p}",
                w.label, w.conductor
            ),
        )],
    }
}

/// Step 3 for one prime. `constant_only` says the non-constant branch is
/// already closed, which is what the exceptional-points lemma needs.
fn step3_lookup(
    d: Option<i64>,
    family_exponent: Option<u64>,
    p: u64,
    constant_only: bool,
    mut evidence: Vec<Evidence>,
) -> EliminationOutcome {
    if let Some(e) = d.and_then(|d| tables::step3_override(d, p)) {
        evidence.push(Evidence::new(
            Step::Lookup,
            Reason::CuratedTable,
            e.citation,
        ));
        return EliminationOutcome {
            p,
            status: e.status,
            reason: Some(Reason::CuratedTable),
            evidence,
        };
    }
    if let Some(n) = family_exponent {
        if tables::SMALL_LOOKUP_PRIMES.contains(&p) {
            let fields = tables::family_witness_fields(n);
            if !fields.is_empty() {
                let list: Vec<String> = fields.iter().map(|d| format!("Q(sqrt({d}))")).collect();
                evidence.push(Evidence::new(
                    Step::Lookup,
                    Reason::KnownWitness,
                    format!(
                        "X0(p) has positive rank over {} (class-group exponent {n}), giving a semistable curve",
                        list.join(" or ")
                    ),
                ));
                return EliminationOutcome {
                    p,
                    status: Status::Survives,
                    reason: Some(Reason::KnownWitness),
                    evidence,
                };
            }
        }
    }
    if constant_only && tables::exceptional_lemma_applies(d, p) {
        evidence.push(Evidence::new(
            Step::Lookup,
            Reason::ExceptionalPointsTable,
            tables::EXCEPTIONAL_CITATION,
        ));
        return EliminationOutcome {
            p,
            status: Status::Eliminated,
            reason: Some(Reason::ExceptionalPointsTable),
            evidence,
        };
    }
    evidence.push(Evidence::new(
        Step::Lookup,
        Reason::CuratedTable,
        "no curated entry; needs a direct study of X0(p)(K)",
    ));
    EliminationOutcome {
        p,
        status: Status::Unresolved,
        reason: None,
        evidence,
    }
}

fn field_summary(field: &QuadField, ramified: &[u64]) -> Result<FieldSummary, StrategyError> {
    let unit = if field.is_real() {
        Some(field.fundamental_unit()?.clone())
    } else {
        None
    };
    Ok(FieldSummary {
        d: field.d(),
        disc: field.disc(),
        integral_basis: match field.basis() {
            crate::quadfield::BasisKind::SqrtD => format!("1, sqrt({})", field.d()),
            crate::quadfield::BasisKind::HalfOnePlusSqrtD => {
                format!("1, (1 + sqrt({}))/2", field.d())
            }
        },
        class_number: field.class_order(),
        class_structure: field.class_structure().to_vec(),
        class_exponent: field.class_exponent(),
        fundamental_unit: unit.as_ref().map(|u| u.to_sqrt_string()),
        fundamental_unit_norm: unit
            .as_ref()
            .and_then(|u| num_traits::ToPrimitive::to_i64(&u.norm())),
        ramified_primes: ramified.to_vec(),
    })
}

fn ramified_primes(disc: i64) -> Vec<u64> {
    num_prime::nt_funcs::factorize64(disc.unsigned_abs())
        .into_keys()
        .collect()
}

/// Runs the full strategy over `Q(√d)`.
pub fn run_fixed_field(d: i64, cfg: &SieveConfig) -> Result<SieveReport, StrategyError> {
    cfg.validate()?;
    let cfg = cfg.normalized();
    let field = make_field(d)?;
    run_on_field(&field, &cfg)
}

pub fn run_on_field(field: &QuadField, cfg: &SieveConfig) -> Result<SieveReport, StrategyError> {
    cfg.validate()?;
    let cfg = cfg.normalized();
    let d = field.d();
    if !field.is_real() && field.class_order() == 1 {
        return Err(StrategyError::ImaginaryClassNumberOne(d));
    }
    let ramified = ramified_primes(field.disc());

    let mut specs = Vec::new();
    let mut qs = cfg.aux_primes.clone();
    if cfg.use_q2 {
        qs.push(2);
    }
    for q in qs {
        let data = field.aux_prime_data(q)?;
        specs.push((
            q,
            Some(data.splitting),
            Some(data.alpha.to_sqrt_string()),
            vec![Possibility {
                n_q: data.n_q,
                r: data.r,
                split_capable: q == 2 && data.splitting == Splitting::Split,
            }],
        ));
    }
    let real_exponent = field.is_real().then(|| field.class_exponent());
    let step1 = ConstantBranch::new(&cfg, build_stages(specs), real_exponent);
    let (const_candidates, unfactored) = step1.candidates();
    let step2 = NonConstantBranch::run(field, &cfg)?;

    let mut unresolved_classes = Vec::new();
    for c in &unfactored {
        unresolved_classes.push(format!(
            "constant signature: prime factors p >= 23 of the unfactored cofactor {c} of the R_q gcd"
        ));
    }
    if let Some(msg) = &step2.unbounded {
        unresolved_classes.push(format!("non-constant signature: {msg}"));
    }

    let mut primes: BTreeSet<u64> = tables::BASE_SET.iter().copied().collect();
    primes.extend(tables::SMALL_LOOKUP_PRIMES);
    primes.extend(&ramified);
    primes.extend(&const_candidates);
    primes.extend(&step2.candidates);
    for r in &step2.records {
        if let Some(s) = &r.survivors {
            primes.extend(s);
        }
    }
    if let Some(eps) = &step2.eps {
        for p in eps.factorization.primes.keys() {
            if let Some(p) = num_traits::ToPrimitive::to_u64(p) {
                if p >= 17 {
                    primes.insert(p);
                }
            }
        }
    }

    let mut outcomes = Vec::new();
    for &p in &primes {
        if tables::BASE_SET.contains(&p) {
            outcomes.push(base_outcome(p));
            continue;
        }
        if tables::SMALL_LOOKUP_PRIMES.contains(&p) || ramified.contains(&p) || p < 23 {
            let mut ev = Vec::new();
            if ramified.contains(&p) {
                ev.push(Evidence::new(
                    Step::Lookup,
                    Reason::SplitCheck,
                    "p ramifies; Steps 1 and 2 do not apply",
                ));
            }
            outcomes.push(step3_lookup(Some(d), None, p, false, ev));
            continue;
        }
        let c = step1.verdict(p);
        let n = step2.verdict(p)?;
        let nonconstant_first = step2.candidates.contains(&p)
            || step2
                .eps
                .as_ref()
                .is_some_and(|e| crate::sieve::divides(p, &e.norm));
        outcomes.push(match (c, n) {
            (Verdict::Eliminated(rc, ec), Verdict::Eliminated(rn, en)) => {
                let reason = if nonconstant_first { rn } else { rc };
                EliminationOutcome {
                    p,
                    status: Status::Eliminated,
                    reason: Some(reason),
                    evidence: ec.into_iter().chain(en).collect(),
                }
            }
            (Verdict::Open(ec), Verdict::Eliminated(_, en)) => {
                step3_lookup(Some(d), None, p, true, ec.into_iter().chain(en).collect())
            }
            (Verdict::Eliminated(_, ec), Verdict::Open(en))
            | (Verdict::Open(ec), Verdict::Open(en)) => {
                step3_lookup(Some(d), None, p, false, ec.into_iter().chain(en).collect())
            }
        });
    }

    let mut intermediates = step1.records();
    intermediates.extend(step2.records.iter().cloned());
    let mut notes = vec![
        "constant signature: every prime p >= 23, p != 37 not listed fails to divide the gcd of R_q over the odd auxiliary primes".to_string(),
    ];
    notes.push(if field.is_real() {
        "non-constant signature: every prime not listed is inert, ramified, or split without dividing Norm(eps^12 - 1)".to_string()
    } else {
        "non-constant signature: every prime p >= 17 not listed fails to divide some non-zero R_q*M_q".to_string()
    });
    Ok(SieveReport {
        mode: Mode::FixedField { d },
        field: Some(field_summary(field, &ramified)?),
        config: cfg.clone(),
        base_set: tables::BASE_SET.to_vec(),
        outcomes,
        intermediates,
        unresolved_classes,
        notes,
    })
}

/// Runs Step 1 over every real quadratic field whose class group has exponent
/// `n`, optionally restricted to fields where the primes in `inert` are inert.
pub fn run_family(n: u64, inert: &[u64], cfg: &SieveConfig) -> Result<SieveReport, StrategyError> {
    if n == 0 {
        return Err(StrategyError::InvalidExponent);
    }
    cfg.validate()?;
    let cfg = cfg.normalized();
    let mut inert: Vec<u64> = inert.to_vec();
    inert.sort_unstable();
    inert.dedup();
    if let Some(&q) = inert.iter().find(|&&q| !is_prime(q)) {
        return Err(StrategyError::Config(format!(
            "inert constraint {q} is not prime"
        )));
    }

    let divs = divisors(n);
    let possibilities = |q: u64| -> Vec<Possibility> {
        let mut v = vec![Possibility {
            n_q: q * q,
            r: 1,
            split_capable: false,
        }];
        if !inert.contains(&q) {
            v.extend(divs.iter().map(|&r| Possibility {
                n_q: q,
                r,
                split_capable: q == 2,
            }));
        }
        v
    };
    let spec = |q: u64| {
        let splitting = inert.contains(&q).then_some(Splitting::Inert);
        (q, splitting, None, possibilities(q))
    };

    // constrained primes first so their gcd shows up early in the chain
    let mut odd: BTreeSet<u64> = cfg.aux_primes.iter().copied().collect();
    odd.extend(inert.iter().filter(|&&q| q != 2));
    let mut order: Vec<u64> = inert.iter().copied().filter(|&q| q != 2).collect();
    if inert.contains(&2) {
        order.push(2);
    }
    order.extend(odd.iter().filter(|q| !inert.contains(q)));
    if cfg.use_q2 && !inert.contains(&2) {
        order.push(2);
    }
    let specs = order.iter().map(|&q| spec(q)).collect();
    let step1 = ConstantBranch::new(&cfg, build_stages(specs), Some(n));
    let (candidates, unfactored) = step1.candidates();

    let mut outcomes = Vec::new();
    let mut primes: BTreeSet<u64> = tables::BASE_SET.iter().copied().collect();
    primes.extend(tables::SMALL_LOOKUP_PRIMES);
    primes.extend(&candidates);
    for &p in &primes {
        if tables::BASE_SET.contains(&p) {
            outcomes.push(base_outcome(p));
        } else if tables::SMALL_LOOKUP_PRIMES.contains(&p) {
            outcomes.push(step3_lookup(None, Some(n), p, false, Vec::new()));
        } else {
            outcomes.push(match step1.verdict(p) {
                Verdict::Eliminated(reason, evidence) => EliminationOutcome {
                    p,
                    status: Status::Eliminated,
                    reason: Some(reason),
                    evidence,
                },
                Verdict::Open(ev) => step3_lookup(None, Some(n), p, true, ev),
            });
        }
    }

    let mut unresolved_classes = vec![
        "primes p >= 23, p != 37 that ramify in K".to_string(),
        "primes p >= 23, p != 37 that split in K and divide Norm(eps^12 - 1)".to_string(),
    ];
    for c in &unfactored {
        unresolved_classes.push(format!(
            "constant signature: prime factors p >= 23 of the unfactored cofactor {c} of the R_q gcd"
        ));
    }
    Ok(SieveReport {
        mode: Mode::Family {
            exponent: n,
            inert: inert.clone(),
        },
        field: None,
        config: cfg.clone(),
        base_set: tables::BASE_SET.to_vec(),
        outcomes,
        intermediates: step1.records(),
        unresolved_classes,
        notes: vec![
            "constant signature: every prime p >= 23, p != 37 not listed fails to divide the gcd of R_q over the odd auxiliary primes".to_string(),
            "each R_q is the lcm over all possible (n_q, r); for q = 2 it also absorbs 2^(12r) - 1 when 2 may split".to_string(),
        ],
    })
}
