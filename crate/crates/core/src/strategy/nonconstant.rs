//! Non-constant branch over a fixed field, with signature `(12,0)` (the other
//! non-constant signature is reached by conjugating or by the dual isogeny).

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;

use super::constant::Verdict;
use super::report::{Evidence, IntermediateRecord, Reason, Step};
use super::{factor_small, par_map, SieveConfig};
use crate::arith::{gcd_big, primes_between};
use crate::error::StrategyError;
use crate::quadfield::{AuxPrimeData, QuadField, Splitting};
use crate::sieve::{compute_mq, compute_rq, divides, eps_norm, EpsNorm, IsogenySignature};

const SIG: IsogenySignature = IsogenySignature::MIXED;

struct AuxValue {
    data: AuxPrimeData,
    rq: BigInt,
    mq: BigInt,
}

impl AuxValue {
    fn compute(field: &QuadField, q: u64) -> Result<Self, StrategyError> {
        let data = field.aux_prime_data(q)?;
        let rq = compute_rq(&data, SIG);
        let mq = compute_mq(&data, SIG);
        Ok(AuxValue { data, rq, mq })
    }

    fn product(&self) -> BigInt {
        &self.rq * &self.mq
    }
}

pub(crate) struct NonConstantBranch<'a> {
    field: &'a QuadField,
    values: Vec<AuxValue>,
    pub eps: Option<EpsNorm>,
    /// Split primes `p ≥ 17` not yet ruled out.
    pub candidates: BTreeSet<u64>,
    pub records: Vec<IntermediateRecord>,
    /// Set when no finite candidate list was reached.
    pub unbounded: Option<String>,
}

/// Primes `p ≥ 17` with `p | R_q·M_q` for every processed `q ≠ p` whose
/// product is non-zero; `None` while that set is not yet finite and factored.
fn survivors_of(values: &[AuxValue], cfg: &SieveConfig) -> Option<BTreeSet<u64>> {
    let products: Vec<(u64, BigInt)> = values
        .iter()
        .map(|v| (v.data.q, v.product()))
        .filter(|(_, x)| !x.is_zero())
        .collect();
    if products.is_empty() {
        return None;
    }
    let g = products
        .iter()
        .fold(BigInt::zero(), |g, (_, x)| gcd_big(&g, x));
    let (_, primes) = factor_small(&g, cfg, |p| p >= 17);
    let mut out: BTreeSet<u64> = primes?.into_iter().collect();
    // an auxiliary prime q never rules out p = q itself
    for (q, _) in &products {
        if *q >= 17 && products.iter().all(|(q2, x)| q2 == q || divides(*q, x)) {
            out.insert(*q);
        }
    }
    Some(out)
}

impl<'a> NonConstantBranch<'a> {
    pub fn run(field: &'a QuadField, cfg: &SieveConfig) -> Result<Self, StrategyError> {
        if field.is_real() {
            Self::run_real(field, cfg)
        } else {
            Self::run_imaginary(field, cfg)
        }
    }

    fn aux_list(cfg: &SieveConfig) -> Vec<u64> {
        let mut qs = cfg.aux_primes.clone();
        if cfg.use_q2 {
            qs.push(2);
        }
        qs.sort_unstable();
        qs
    }

    fn run_real(field: &'a QuadField, cfg: &SieveConfig) -> Result<Self, StrategyError> {
        let eps = eps_norm(field, cfg.max_step1_survivor_scan)?;
        let qs = Self::aux_list(cfg);
        let values = par_map(&qs, |&q| AuxValue::compute(field, q))
            .into_iter()
            .collect::<Result<Vec<_>, _>>()?;
        let mut unbounded = None;
        let mut candidates = BTreeSet::new();
        if eps.factorization.is_complete() {
            for p in eps.factorization.primes.keys() {
                match num_traits::ToPrimitive::to_u64(p) {
                    Some(p) if p >= 17 && field.splitting_type(p)? == Splitting::Split => {
                        candidates.insert(p);
                    }
                    Some(_) => {}
                    None => {
                        unbounded = Some(format!(
                            "prime factor {p} of Norm(eps^12 - 1) exceeds 64 bits"
                        ));
                    }
                }
            }
        } else {
            unbounded = Some(format!(
                "split prime factors of the unfactored part {} of Norm(eps^12 - 1)",
                eps.factorization
                    .unfactored
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
        }
        let mut branch = NonConstantBranch {
            field,
            values: Vec::new(),
            eps: Some(eps),
            candidates: BTreeSet::new(),
            records: Vec::new(),
            unbounded,
        };
        let mut alive = candidates.clone();
        let mut g = BigInt::zero();
        for v in values {
            let prod = v.product();
            g = gcd_big(&g, &prod);
            alive.retain(|&p| p == v.data.q || prod.is_zero() || divides(p, &prod));
            let (factored, _) = factor_small(&g, cfg, |p| p >= 17);
            branch.records.push(record(
                &v,
                &g,
                factored,
                Some(alive.iter().copied().collect()),
            ));
            branch.values.push(v);
        }
        branch.candidates = alive;
        Ok(branch)
    }

    fn run_imaginary(field: &'a QuadField, cfg: &SieveConfig) -> Result<Self, StrategyError> {
        let mut branch = NonConstantBranch {
            field,
            values: Vec::new(),
            eps: None,
            candidates: BTreeSet::new(),
            records: Vec::new(),
            unbounded: None,
        };
        let mut g = BigInt::zero();
        let mut last: Option<BTreeSet<u64>> = None;
        let mut stable = 0usize;
        for q in primes_between(2, cfg.step2_max_aux.saturating_sub(1)) {
            if q == 2 && !cfg.use_q2 {
                continue;
            }
            let v = AuxValue::compute(field, q)?;
            let prod = v.product();
            g = gcd_big(&g, &prod);
            branch.values.push(v);
            let current = survivors_of(&branch.values, cfg);
            let (factored, _) = factor_small(&g, cfg, |p| p >= 17);
            let v = branch.values.last().expect("just pushed");
            branch.records.push(record(
                v,
                &g,
                factored,
                current.as_ref().map(|s| s.iter().copied().collect()),
            ));
            if current.is_some() && current == last {
                stable += 1;
            } else {
                stable = 0;
            }
            last = current;
            if last.is_some() && stable >= cfg.step2_stable_rounds {
                break;
            }
        }
        match last {
            Some(s) if stable >= cfg.step2_stable_rounds => branch.candidates = s,
            Some(s) => {
                branch.unbounded = Some(format!(
                    "survivor set did not stabilise for auxiliary primes below {}",
                    cfg.step2_max_aux
                ));
                branch.candidates = s;
            }
            None => {
                branch.unbounded = Some(format!(
                    "every auxiliary prime below {} gave R_q*M_q = 0 or an unfactored gcd",
                    cfg.step2_max_aux
                ));
            }
        }
        Ok(branch)
    }

    /// Verdict for a prime `p` not ramified in the field.
    pub fn verdict(&self, p: u64) -> Result<Verdict, StrategyError> {
        let splitting = self.field.splitting_type(p)?;
        if splitting != Splitting::Split {
            return Ok(Verdict::Eliminated(
                Reason::SplitCheck,
                vec![Evidence::new(
                    Step::NonConstant,
                    Reason::SplitCheck,
                    format!("p is {splitting}; a non-constant signature needs p split"),
                )],
            ));
        }
        if let Some(eps) = &self.eps {
            if !divides(p, &eps.norm) {
                return Ok(Verdict::Eliminated(
                    Reason::EpsCondition,
                    vec![Evidence::new(
                        Step::NonConstant,
                        Reason::EpsCondition,
                        "p does not divide Norm(eps^12 - 1)",
                    )
                    .with_value(eps.norm.clone())],
                ));
            }
        }
        let ev: Vec<Evidence> = self
            .values
            .iter()
            .filter(|v| v.data.q != p)
            .filter(|v| {
                let prod = v.product();
                !prod.is_zero() && !divides(p, &prod)
            })
            .map(|v| {
                Evidence::new(
                    Step::NonConstant,
                    Reason::MqCheck,
                    "p divides neither R_q nor M_q",
                )
                .at(v.data.q)
            })
            .collect();
        if !ev.is_empty() {
            return Ok(Verdict::Eliminated(Reason::MqCheck, ev));
        }
        Ok(Verdict::Open(vec![Evidence::new(
            Step::NonConstant,
            Reason::MqCheck,
            "p splits and divides R_q*M_q for every auxiliary prime",
        )]))
    }
}

fn record(
    v: &AuxValue,
    g: &BigInt,
    factored: Option<String>,
    survivors: Option<Vec<u64>>,
) -> IntermediateRecord {
    IntermediateRecord {
        step: Step::NonConstant,
        q: v.data.q,
        splitting: Some(v.data.splitting),
        n_q: Some(v.data.n_q),
        r: Some(v.data.r),
        possibilities: vec![super::report::Possibility {
            n_q: v.data.n_q,
            r: v.data.r,
            split_capable: false,
        }],
        alpha: Some(v.data.alpha.to_sqrt_string()),
        signature: SIG,
        r_q: v.rq.clone(),
        m_q: Some(v.mq.clone()),
        running_gcd: g.clone(),
        running_gcd_factored: factored,
        survivors,
    }
}
