//! Integer factorization: trial division up to a configurable bound, then
//! `num-prime` on the cofactor. Small cofactors are factored completely; large
//! ones get a primality test and a few fixed-seed Pollard rho runs, so the
//! result never depends on a random draw.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_prime::factor::pollard_rho;
use num_prime::nt_funcs::{factorize128, is_prime};
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::primes_between;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    pub primes: BTreeMap<BigUint, u32>,
    /// Composite cofactors that could not be split.
    pub unfactored: Vec<BigUint>,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.unfactored.is_empty()
    }

    /// Prime factors that fit in `u64`, ascending.
    pub fn small_primes(&self) -> Vec<u64> {
        self.primes.keys().filter_map(|p| p.to_u64()).collect()
    }

    pub fn primes_at_least(&self, floor: u64) -> Vec<BigUint> {
        self.primes
            .keys()
            .filter(|p| **p >= BigUint::from(floor))
            .cloned()
            .collect()
    }
}

impl fmt::Display for Factorization {
    /// `p1^e1 * p2^e2 * ...` ascending; exponent 1 is omitted, an
    /// unfactored cofactor is shown in brackets.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .primes
            .iter()
            .map(|(p, e)| {
                if *e == 1 {
                    p.to_string()
                } else {
                    format!("{p}^{e}")
                }
            })
            .collect();
        parts.extend(self.unfactored.iter().map(|c| format!("[{c}]")));
        if parts.is_empty() {
            return f.write_str("1");
        }
        f.write_str(&parts.join(" * "))
    }
}

/// Factors `|n|`; zero yields an empty factorization with `0` unfactored.
pub fn factor(n: &BigInt, trial_limit: u64) -> Factorization {
    let mut rest = n.magnitude().clone();
    let mut out = Factorization::default();
    if rest.is_zero() {
        out.unfactored.push(rest);
        return out;
    }
    for p in primes_between(2, trial_limit) {
        let bp = BigUint::from(p);
        if &bp * &bp > rest {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = rest.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            out.primes.insert(bp, e);
        }
    }
    split_cofactor(rest, &mut out);
    out.unfactored.sort();
    out
}

/// Cofactors up to this size are factored completely (rho on u128 is cheap).
const EXACT_BITS: u64 = 96;
const RHO_SEEDS: [(u32, u32); 3] = [(2, 1), (3, 7), (5, 11)];
const RHO_ITERS: usize = 1 << 14;

fn split_cofactor(n: BigUint, out: &mut Factorization) {
    let mut todo = vec![n];
    while let Some(m) = todo.pop() {
        if m.is_one() {
            continue;
        }
        if m.bits() <= EXACT_BITS {
            let small = m.to_u128().expect("fits in 96 bits");
            for (p, e) in factorize128(small) {
                *out.primes.entry(BigUint::from(p)).or_insert(0) += e as u32;
            }
            continue;
        }
        if is_prime(&m, None).probably() {
            *out.primes.entry(m).or_insert(0) += 1;
            continue;
        }
        let divisor = RHO_SEEDS.iter().find_map(|&(start, offset)| {
            pollard_rho(&m, BigUint::from(start), BigUint::from(offset), RHO_ITERS)
                .0
                .filter(|d| !d.is_one() && d != &m)
        });
        match divisor {
            Some(d) => {
                todo.push(&m / &d);
                todo.push(d);
            }
            None => out.unfactored.push(m),
        }
    }
}
