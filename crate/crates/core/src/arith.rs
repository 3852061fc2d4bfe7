//! Small-modulus arithmetic and integer helpers shared by every layer.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_traits::{Signed, ToPrimitive, Zero};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    result
}

/// Reduces a signed integer into `[0, m)`.
pub fn rem_i128(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

pub fn big_rem(x: &BigInt, m: u64) -> u64 {
    let r = (x % BigInt::from(m)).to_i128().expect("remainder fits");
    rem_i128(r, m)
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: i128, n: u64) -> i8 {
    assert!(n % 2 == 1, "jacobi symbol needs an odd modulus");
    let mut a = rem_i128(a, n);
    let mut n = n;
    let mut t = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Kronecker symbol `(a/p)` for a prime `p`.
pub fn kronecker_prime(a: i128, p: u64) -> i8 {
    if p == 2 {
        if a.rem_euclid(2) == 0 {
            return 0;
        }
        return match a.rem_euclid(8) {
            1 | 7 => 1,
            _ => -1,
        };
    }
    jacobi(a, p)
}

/// Square root of `a` modulo an odd prime `p` by Tonelli–Shanks, or `None`
/// when `a` is a non-residue. Returns the smaller of the two roots.
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if p == 2 || a == 0 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let root = if p % 4 == 3 {
        pow_mod(a, (p + 1) / 4, p)
    } else {
        let mut q = p - 1;
        let mut s = 0u32;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let mut z = 2u64;
        while pow_mod(z, (p - 1) / 2, p) != p - 1 {
            z += 1;
        }
        let mut m = s;
        let mut c = pow_mod(z, q, p);
        let mut t = pow_mod(a, q, p);
        let mut r = pow_mod(a, q.div_ceil(2), p);
        while t != 1 {
            let mut i = 0u32;
            let mut t2 = t;
            while t2 != 1 {
                t2 = mul_mod(t2, t2, p);
                i += 1;
            }
            let b = pow_mod(c, 1u64 << (m - i - 1), p);
            m = i;
            c = mul_mod(b, b, p);
            t = mul_mod(t, c, p);
            r = mul_mod(r, b, p);
        }
        r
    };
    Some(root.min(p - root))
}

pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(p as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(rem_i128(e.x, p))
}

pub fn is_prime(n: u64) -> bool {
    num_prime::nt_funcs::is_prime64(n)
}

/// Primes in the closed interval `[lo, hi]`, ascending.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&n| is_prime(n)).collect()
}

pub fn is_squarefree(n: i64) -> bool {
    let m = n.unsigned_abs();
    if m == 0 {
        return false;
    }
    num_prime::nt_funcs::factorize64(m)
        .values()
        .all(|&e| e == 1)
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n.sqrt())
        .filter(|d| n % d == 0)
        .flat_map(|d| [d, n / d])
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Natural logarithm of a non-negative big integer, accurate to f64 precision.
pub fn ln_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("finite");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ln_abs(x: &BigInt) -> f64 {
    ln_big(x.magnitude())
}

pub fn abs_big(x: &BigInt) -> BigInt {
    if x.sign() == Sign::Minus {
        -x
    } else {
        x.clone()
    }
}

pub fn lcm_big(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    a.lcm(b).abs()
}

pub fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}
