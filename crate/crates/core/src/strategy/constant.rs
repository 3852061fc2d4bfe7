//! Constant-signature branch: gcd chain of `R_q` over auxiliary primes, the
//! per-prime congruence test, the `q = 2` stage and the global bounds.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::report::{Evidence, IntermediateRecord, Possibility, Reason, Step};
use super::{factor_small, par_map, SieveConfig};
use crate::arith::{gcd_big, lcm_big};
use crate::factor::factor;
use crate::quadfield::Splitting;
use crate::sieve::{
    admissible_pair_with_limit, divides, n1_refinement, oesterle_bound, pcrit_constant, red2_holds,
    rq_constant, IsogenySignature, PcritOutcome,
};

#[derive(Debug, Clone)]
pub(crate) struct Stage {
    pub q: u64,
    pub splitting: Option<Splitting>,
    pub alpha: Option<String>,
    pub possibilities: Vec<Possibility>,
    pub rq: BigInt,
}

impl Stage {
    pub fn new(
        q: u64,
        splitting: Option<Splitting>,
        alpha: Option<String>,
        possibilities: Vec<Possibility>,
    ) -> Self {
        let rq = possibilities.iter().fold(BigInt::one(), |acc, poss| {
            let mut acc = lcm_big(&acc, &rq_constant(q, poss.n_q, poss.r));
            if poss.split_capable {
                let red2 = num_traits::pow::pow(BigInt::from(2), 12 * poss.r as usize) - 1;
                acc = lcm_big(&acc, &red2);
            }
            acc
        });
        Stage {
            q,
            splitting,
            alpha,
            possibilities,
            rq,
        }
    }
}

/// `(q, splitting, alpha, possibilities)` for one stage.
pub(crate) type StageSpec = (u64, Option<Splitting>, Option<String>, Vec<Possibility>);

/// Builds stages concurrently, keeping input order.
pub(crate) fn build_stages(specs: Vec<StageSpec>) -> Vec<Stage> {
    par_map(&specs, |(q, s, a, poss)| {
        Stage::new(*q, *s, a.clone(), poss.clone())
    })
}

pub(crate) struct ConstantBranch<'a> {
    pub cfg: &'a SieveConfig,
    /// Chain order, as recorded.
    pub stages: Vec<Stage>,
    /// `None` for imaginary fields, where the bound does not apply.
    pub real_exponent: Option<u64>,
    pub g_odd: BigInt,
}

pub(crate) enum Verdict {
    Eliminated(Reason, Vec<Evidence>),
    Open(Vec<Evidence>),
}

impl<'a> ConstantBranch<'a> {
    pub fn new(cfg: &'a SieveConfig, stages: Vec<Stage>, real_exponent: Option<u64>) -> Self {
        let g_odd = stages
            .iter()
            .filter(|s| s.q != 2)
            .fold(BigInt::zero(), |g, s| gcd_big(&g, &s.rq));
        ConstantBranch {
            cfg,
            stages,
            real_exponent,
            g_odd,
        }
    }

    /// The gcd chain in stage order, with factored gcds where cheap.
    pub fn records(&self) -> Vec<IntermediateRecord> {
        let mut g = BigInt::zero();
        self.stages
            .iter()
            .map(|s| {
                g = gcd_big(&g, &s.rq);
                let (factored, survivors) = factor_small(&g, self.cfg, |p| p >= 23 && p != 37);
                let single = (s.possibilities.len() == 1).then(|| s.possibilities[0]);
                IntermediateRecord {
                    step: Step::Constant,
                    q: s.q,
                    splitting: s.splitting,
                    n_q: single.map(|p| p.n_q),
                    r: single.map(|p| p.r),
                    possibilities: s.possibilities.clone(),
                    alpha: s.alpha.clone(),
                    signature: IsogenySignature::ZERO,
                    r_q: s.rq.clone(),
                    m_q: None,
                    running_gcd: g.clone(),
                    running_gcd_factored: factored,
                    survivors,
                }
            })
            .collect()
    }

    /// Primes `p ≥ 23`, `p ≠ 37` dividing every odd-stage `R_q`, plus any
    /// cofactor that could not be split.
    pub fn candidates(&self) -> (Vec<u64>, Vec<BigInt>) {
        let f = factor(&self.g_odd, self.cfg.max_step1_survivor_scan);
        let mut out = Vec::new();
        let mut rest: Vec<BigInt> = f
            .unfactored
            .iter()
            .map(|c| BigInt::from(c.clone()))
            .collect();
        for p in f.primes.keys() {
            match num_traits::ToPrimitive::to_u64(p) {
                Some(p) if p >= 23 && p != 37 => out.push(p),
                Some(_) => {}
                None => rest.push(BigInt::from(p.clone())),
            }
        }
        (out, rest)
    }

    fn stage_eliminates(&self, p: u64, stage: &Stage) -> Option<Vec<Evidence>> {
        let mut notes = Vec::new();
        let mut red2_used = Vec::new();
        for poss in &stage.possibilities {
            let out = pcrit_constant(p, poss.n_q, poss.r);
            let gone = match out {
                PcritOutcome::Eliminated => true,
                PcritOutcome::EmptyTraceSet => self.cfg.empty_trace_set_eliminates,
                PcritOutcome::Compatible { .. } => false,
            };
            if !gone {
                return None;
            }
            if poss.split_capable {
                if red2_holds(p, poss.r) {
                    return None;
                }
                red2_used.push(poss.r);
            }
            notes.push(match out {
                PcritOutcome::EmptyTraceSet => {
                    format!("(n_q, r) = ({}, {}): A_q^(p) empty", poss.n_q, poss.r)
                }
                _ => format!("(n_q, r) = ({}, {}): no compatible trace", poss.n_q, poss.r),
            });
        }
        let mut ev =
            vec![Evidence::new(Step::Constant, Reason::Pcrit, notes.join("; ")).at(stage.q)];
        if !red2_used.is_empty() {
            let rs: Vec<String> = red2_used.iter().map(|r| r.to_string()).collect();
            ev.push(
                Evidence::new(
                    Step::Constant,
                    Reason::Red2,
                    format!(
                        "p does not divide 2^(12r) - 1 for r in {{{}}}",
                        rs.join(",")
                    ),
                )
                .at(stage.q),
            );
        }
        Some(ev)
    }

    /// Verdict for `p ≥ 23`, `p ≠ 37`, unramified, under signature `(0,0)`.
    pub fn verdict(&self, p: u64) -> Verdict {
        let odd: Vec<&Stage> = self
            .stages
            .iter()
            .filter(|s| s.q != 2 && s.q != p)
            .collect();
        let gcd_ev: Vec<Evidence> = odd
            .iter()
            .filter(|s| !divides(p, &s.rq))
            .map(|s| Evidence::new(Step::Constant, Reason::RqGcd, "p does not divide R_q").at(s.q))
            .collect();
        if !gcd_ev.is_empty() {
            return Verdict::Eliminated(Reason::RqGcd, gcd_ev);
        }
        let pcrit_ev: Vec<Evidence> = odd
            .iter()
            .filter_map(|s| self.stage_eliminates(p, s))
            .flatten()
            .collect();
        if !pcrit_ev.is_empty() {
            return Verdict::Eliminated(Reason::Pcrit, pcrit_ev);
        }
        let mut open = Vec::new();
        if let Some(two) = self.stages.iter().find(|s| s.q == 2) {
            if admissible_pair_with_limit(2, p, self.cfg.q2_limit) {
                if !divides(p, &two.rq) {
                    let note = if two.possibilities.iter().any(|x| x.split_capable) {
                        "p divides neither R_2 nor 2^(12r) - 1"
                    } else {
                        "p does not divide R_2"
                    };
                    return Verdict::Eliminated(
                        Reason::RqGcd,
                        vec![Evidence::new(Step::Constant, Reason::RqGcd, note).at(2)],
                    );
                }
                if let Some(ev) = self.stage_eliminates(p, two) {
                    return Verdict::Eliminated(Reason::Pcrit, ev);
                }
            } else {
                open.push(Evidence::new(
                    Step::Constant,
                    Reason::Pcrit,
                    format!("(2, {p}) is not an admissible pair; q = 2 skipped"),
                ));
            }
        }
        if let Some(n) = self.real_exponent {
            let bound = oesterle_bound(n);
            if BigInt::from(p) >= bound {
                return Verdict::Eliminated(
                    Reason::OesterleBound,
                    vec![Evidence::new(
                        Step::Constant,
                        Reason::OesterleBound,
                        format!("p >= (1 + 3^(6n))^2 with n = {n}"),
                    )
                    .with_value(bound)],
                );
            }
            if n == 1 && !n1_refinement(p) {
                return Verdict::Eliminated(
                    Reason::OesterleBound,
                    vec![Evidence::new(
                        Step::Constant,
                        Reason::OesterleBound,
                        "n = 1 forces p = 1 mod 12",
                    )],
                );
            }
        }
        open.push(Evidence::new(
            Step::Constant,
            Reason::RqGcd,
            "p divides R_q and passes the congruence test for every auxiliary prime",
        ));
        Verdict::Open(open)
    }
}
