//! Elimination criteria attached to auxiliary primes: trace sets, the
//! resultant integers `R_q` and `M_q`, the residue-level congruence test,
//! admissibility of `(q, p)`, the unit condition, and global bounds.

pub mod residue;
pub mod signature;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{kronecker_prime, lcm_big, pow_mod};
use crate::error::FieldError;
use crate::factor::{factor, Factorization};
use crate::polyres::{lucas_v, res_power_parts, roots_mod_p, FrobeniusPoly};
use crate::quadfield::{AuxPrimeData, OkElement, QuadField, Splitting};
pub use residue::{Residue, ResidueMap};
pub use signature::IsogenySignature;

/// Default upper limit on `p` for the cusp-reduction argument at `q = 2`.
pub const DEFAULT_Q2_LIMIT: u64 = 2357;

/// `{a ∈ Z : a² ≤ 4·n_q}`, ascending.
pub fn trace_set(n_q: u64) -> Vec<i64> {
    let bound = (4 * n_q as u128).sqrt() as i64;
    (-bound..=bound).collect()
}

/// Traces `a` for which `a² − 4·n_q` is a square or zero modulo `p`.
pub fn trace_set_mod_p(n_q: u64, p: u64) -> Vec<i64> {
    trace_set(n_q)
        .into_iter()
        .filter(|&a| kronecker_prime(a as i128 * a as i128 - 4 * n_q as i128, p) >= 0)
        .collect()
}

/// `β = α^a · (α^τ)^b`.
pub fn signature_beta(alpha: &OkElement, sig: IsogenySignature) -> OkElement {
    &alpha.pow(sig.a()) * &alpha.conj().pow(sig.b())
}

/// `R_q` for the constant signature `(0,0)`, which depends only on `(q, n_q, r)`:
/// `q · lcm_{a ∈ A_q} |Res(X² − aX + n_q, X^{12r} − 1)|`.
pub fn rq_constant(q: u64, n_q: u64, r: u64) -> BigInt {
    rq_constant_terms(n_q, r)
        .iter()
        .fold(BigInt::one(), |acc, t| lcm_big(&acc, t))
        * q
}

/// The individual `|Res(X² − aX + n_q, X^{12r} − 1)|`, one per `a ∈ A_q`.
pub fn rq_constant_terms(n_q: u64, r: u64) -> Vec<BigInt> {
    let m = 12 * r;
    let n = BigInt::from(n_q);
    let nm = num_traits::pow::pow(n.clone(), m as usize);
    let one = BigInt::one();
    trace_set(n_q)
        .into_iter()
        .map(|a| {
            let v = lucas_v(&BigInt::from(a), &n, m);
            res_power_parts(&nm, &v, &one, &one).abs()
        })
        .collect()
}

/// The individual `|Norm(Res(X² − aX + n_q, X^{12r} − β))|` for a
/// signature-dependent `β ∈ O_K`.
pub fn rq_field_terms(data: &AuxPrimeData, sig: IsogenySignature) -> Vec<BigInt> {
    let m = 12 * data.r;
    let n = BigInt::from(data.n_q);
    let nm = num_traits::pow::pow(n.clone(), m as usize);
    let beta = signature_beta(&data.alpha, sig);
    let beta_sq = &beta * &beta;
    trace_set(data.n_q)
        .into_iter()
        .map(|a| {
            let v = lucas_v(&BigInt::from(a), &n, m);
            res_power_parts(&nm, &v, &beta, &beta_sq).norm().abs()
        })
        .collect()
}

/// `R_q`: `q` times the lcm over `a ∈ A_q` of the absolute resultants. The
/// `(0,0)` signature uses rational resultants, the others field norms.
pub fn compute_rq(data: &AuxPrimeData, sig: IsogenySignature) -> BigInt {
    if sig == IsogenySignature::ZERO {
        return rq_constant(data.q, data.n_q, data.r);
    }
    rq_field_terms(data, sig)
        .iter()
        .fold(BigInt::one(), |acc, t| lcm_big(&acc, t))
        * data.q
}

/// `M_q = q · |Norm((β − 1)(β − n_q^{12r}))|`; zero for constant signatures.
pub fn compute_mq(data: &AuxPrimeData, sig: IsogenySignature) -> BigInt {
    if sig.is_constant() {
        return BigInt::zero();
    }
    let beta = signature_beta(&data.alpha, sig);
    let ring = beta.ring();
    let t = num_traits::pow::pow(BigInt::from(data.n_q), 12 * data.r as usize);
    let prod = &(&beta - &ring.one()) * &(&beta - &ring.int(t));
    prod.norm().abs() * data.q
}

/// Result of the residue-level congruence test for one auxiliary prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PcritOutcome {
    /// Every trace in `A_q^(p)` fails under both labelings of its roots.
    Eliminated,
    /// `A_q^(p)` is empty, so no trace can even be tested.
    EmptyTraceSet,
    /// The first trace (ascending) whose roots satisfy the congruences.
    Compatible { a: i64 },
}

impl PcritOutcome {
    /// The strict reading, where an empty trace set eliminates vacuously.
    pub fn eliminates(&self) -> bool {
        !matches!(self, PcritOutcome::Compatible { .. })
    }
}

/// Congruence test for `(γ₁^{12r}, γ₂^{12r}) ≡ (T₁, T₂)` in either order,
/// over all `a ∈ A_q^(p)`, with targets `T₁ = α^a(α^τ)^b` and
/// `T₂ = α^{12−a}(α^τ)^{12−b}` reduced modulo `𝔭₀`.
pub fn pcrit_check(
    p: u64,
    data: &AuxPrimeData,
    sig: IsogenySignature,
    map: &ResidueMap,
) -> PcritOutcome {
    let alpha = map.reduce(&data.alpha);
    let alpha_conj = map.reduce(&data.alpha.conj());
    let target = |x: u64, y: u64| map.mul(map.pow(alpha, x), map.pow(alpha_conj, y));
    let t1 = target(sig.a(), sig.b());
    let t2 = target(12 - sig.a(), 12 - sig.b());
    pcrit_with_targets(p, data.n_q, data.r, map, t1, t2)
}

/// The `(0,0)` test, depending only on `(n_q, r)`: targets `1` and `n_q^{12r}`.
pub fn pcrit_constant(p: u64, n_q: u64, r: u64) -> PcritOutcome {
    let m = 12 * r;
    let t2 = pow_mod(n_q % p, m, p);
    let mut any = false;
    for a in trace_set_mod_p(n_q, p) {
        any = true;
        if let Some(pair) = roots_mod_p(&FrobeniusPoly::new(a, n_q), p) {
            let g1 = pow_mod(pair.gamma1, m, p);
            let g2 = pow_mod(pair.gamma2, m, p);
            if (g1 == 1 % p && g2 == t2) || (g2 == 1 % p && g1 == t2) {
                return PcritOutcome::Compatible { a };
            }
        }
    }
    if any {
        PcritOutcome::Eliminated
    } else {
        PcritOutcome::EmptyTraceSet
    }
}

fn pcrit_with_targets(
    p: u64,
    n_q: u64,
    r: u64,
    map: &ResidueMap,
    t1: Residue,
    t2: Residue,
) -> PcritOutcome {
    let m = 12 * r;
    let mut any = false;
    for a in trace_set_mod_p(n_q, p) {
        any = true;
        if let Some(pair) = roots_mod_p(&FrobeniusPoly::new(a, n_q), p) {
            let g1 = map.pow(map.int(pair.gamma1), m);
            let g2 = map.pow(map.int(pair.gamma2), m);
            if (g1 == t1 && g2 == t2) || (g2 == t1 && g1 == t2) {
                return PcritOutcome::Compatible { a };
            }
        }
    }
    if any {
        PcritOutcome::Eliminated
    } else {
        PcritOutcome::EmptyTraceSet
    }
}

/// Strict form of the congruence test: `true` iff no trace in `A_q^(p)` is
/// compatible (vacuously true for an empty set). Requires `q ≠ p`.
pub fn pcrit_eliminates(
    p: u64,
    data: &AuxPrimeData,
    sig: IsogenySignature,
    field: &QuadField,
) -> bool {
    let map = ResidueMap::new(field.ring(), p);
    pcrit_check(p, data, sig, &map).eliminates()
}

/// Whether the cusp-reduction argument applies to `(q, p)`.
pub fn admissible_pair(q: u64, p: u64) -> bool {
    admissible_pair_with_limit(q, p, DEFAULT_Q2_LIMIT)
}

pub fn admissible_pair_with_limit(q: u64, p: u64, q2_limit: u64) -> bool {
    if q == 2 {
        (23..=q2_limit).contains(&p) && p != 37 && p != 41
    } else {
        q != p && p >= 23 && p != 37
    }
}

/// `p | 2^{12r} − 1`.
pub fn red2_holds(p: u64, r: u64) -> bool {
    if p == 0 {
        return false;
    }
    pow_mod(2, 12 * r, p) == 1 % p
}

/// Exclusive upper bound `(1 + 3^{6n})²` for primes of a constant signature.
pub fn oesterle_bound(n: u64) -> BigInt {
    let t = num_traits::pow::pow(BigInt::from(3), 6 * n as usize) + 1;
    &t * &t
}

/// `true` iff `p` is still possible after the exponent-1 refinement.
pub fn n1_refinement(p: u64) -> bool {
    p % 12 == 1 || p <= 19
}

/// `Norm(ε¹² − 1)` and its factorization, with the content of `ε¹² − 1`
/// (gcd of its integral-basis coordinates) split off before factoring.
#[derive(Debug, Clone)]
pub struct EpsNorm {
    pub norm: BigInt,
    pub content: BigInt,
    pub factorization: Factorization,
}

pub fn eps_norm(field: &QuadField, trial_limit: u64) -> Result<EpsNorm, FieldError> {
    let eps = field.fundamental_unit()?;
    let x = &eps.pow(12) - &field.ring().one();
    let norm = x.norm();
    let content = x.u().gcd(x.v());
    let primitive = field
        .ring()
        .element(x.u() / &content, x.v() / &content)
        .norm();
    let mut factorization = factor(&content, trial_limit);
    for e in factorization.primes.values_mut() {
        *e *= 2;
    }
    let rest = factor(&primitive, trial_limit);
    for (p, e) in rest.primes {
        *factorization.primes.entry(p).or_insert(0) += e;
    }
    factorization.unfactored.extend(rest.unfactored);
    Ok(EpsNorm {
        norm,
        content,
        factorization,
    })
}

/// Primes `p ≥ floor_p` dividing `Norm(ε¹² − 1)` that split in the field:
/// only these can carry a non-constant signature over a real field.
pub fn eps_split_primes(field: &QuadField, floor_p: u64) -> Result<Vec<u64>, FieldError> {
    let en = eps_norm(field, 1 << 16)?;
    if !en.factorization.is_complete() {
        return Err(FieldError::Internal(format!(
            "could not fully factor Norm(eps^12 - 1) = {}",
            en.norm
        )));
    }
    let mut out = Vec::new();
    for p in en.factorization.primes.keys() {
        let Some(p) = num_traits::ToPrimitive::to_u64(p) else {
            return Err(FieldError::Internal(format!(
                "prime factor {p} of Norm(eps^12 - 1) exceeds 64 bits"
            )));
        };
        if p >= floor_p && field.splitting_type(p)? == Splitting::Split {
            out.push(p);
        }
    }
    Ok(out)
}

/// `p | x`; zero is divisible by everything.
pub fn divides(p: u64, x: &BigInt) -> bool {
    if x.is_zero() {
        return true;
    }
    crate::arith::big_rem(x, p) == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::make_field;

    fn factored(x: &BigInt) -> String {
        factor(x, 1 << 16).to_string()
    }

    #[test]
    fn trace_sets() {
        assert_eq!(trace_set(2), vec![-2, -1, 0, 1, 2]);
        assert_eq!(trace_set(9), (-6..=6).collect::<Vec<_>>());
        assert_eq!(trace_set(5), (-4..=4).collect::<Vec<_>>());
        assert_eq!(trace_set_mod_p(2, 23), vec![-1, 1]);
        let t = trace_set_mod_p(4, 29);
        assert!(t.contains(&4) && t.contains(&-4));
    }

    #[test]
    fn rq_and_mq_for_sqrt6() {
        let k = make_field(6).unwrap();
        let data = k.aux_prime_data(5).unwrap();
        let sig = IsogenySignature::MIXED;
        assert_eq!(
            factored(&compute_rq(&data, sig)),
            "2^10 * 3^10 * 5^15 * 13^2 * 17^2 * 19^4 * 23^2 * 41^2 * 73^2 * 241^2"
        );
        assert_eq!(
            factored(&compute_mq(&data, sig)),
            "2^10 * 3^8 * 5^15 * 43^2 * 433^2"
        );
        assert!(compute_mq(&data, IsogenySignature::ZERO).is_zero());
        let conj = data.conjugate();
        assert_eq!(compute_rq(&conj, sig), compute_rq(&data, sig));
        assert_eq!(compute_mq(&conj, sig), compute_mq(&data, sig));
    }

    #[test]
    fn rq_for_inert_three() {
        let r3 = rq_constant(3, 9, 1);
        let f = factor(&r3, 1 << 16);
        assert_eq!(f.primes.keys().last().unwrap(), &1489u32.into());
        assert!(!divides(41, &r3));
        assert!(divides(3, &r3));
    }

    #[test]
    fn small_predicates() {
        assert!(admissible_pair(3, 23));
        assert!(!admissible_pair(2, 41));
        assert!(!admissible_pair(5, 37));
        assert!(red2_holds(13, 1));
        assert!(!red2_holds(23, 1));
        assert!(red2_holds(241, 2));
        assert_eq!(oesterle_bound(1), BigInt::from(532_900));
        assert!(!n1_refinement(29));
        assert!(n1_refinement(13));
    }

    #[test]
    fn unit_condition_for_sqrt6() {
        let k = make_field(6).unwrap();
        let en = eps_norm(&k, 1 << 16).unwrap();
        assert_eq!(en.factorization.small_primes(), vec![2, 3, 5, 11, 97]);
        assert_eq!(eps_split_primes(&k, 23).unwrap(), vec![97]);
    }

    #[test]
    fn pcrit_refines_resultant() {
        for (n_q, r) in [(9u64, 1u64), (4, 1), (5, 1), (5, 2), (7, 3)] {
            let rq = rq_constant(2, n_q, r);
            for p in crate::arith::primes_between(11, 400) {
                if n_q % p == 0 {
                    continue;
                }
                if let PcritOutcome::Compatible { .. } = pcrit_constant(p, n_q, r) {
                    assert!(divides(p, &rq), "p={p} n_q={n_q} r={r}");
                }
            }
        }
    }
}
