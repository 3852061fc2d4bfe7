//! Resultants of `P(X) = X² − aX + n` against `X^m − β`.
//!
//! With roots `θ₁, θ₂` of `P`, `Res(P, X^m − β) = (θ₁^m − β)(θ₂^m − β)
//! = n^m − β·V_m + β²`, where `V_m = θ₁^m + θ₂^m` is a Lucas sequence. The
//! Sylvester determinant is kept as an independent slow path.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{inv_mod, mul_mod, rem_i128, sqrt_mod_prime};
use crate::quadfield::OkElement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FrobeniusPoly {
    pub a: i64,
    pub n: u64,
}

impl FrobeniusPoly {
    pub fn new(a: i64, n: u64) -> Self {
        FrobeniusPoly { a, n }
    }

    /// Coefficients in ascending degree.
    pub fn coefficients(&self) -> Vec<BigInt> {
        vec![BigInt::from(self.n), BigInt::from(-self.a), BigInt::one()]
    }
}

/// Reductions `γ₁, γ₂` of the roots of a Frobenius polynomial modulo `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TraceRootPair {
    pub p: u64,
    pub gamma1: u64,
    pub gamma2: u64,
}

/// `V_m` for `V₀ = 2`, `V₁ = a`, `V_{k+1} = a·V_k − n·V_{k−1}`, by the doubling
/// rules `V_{2k} = V_k² − 2nᵏ` and `V_{2k+1} = V_k·V_{k+1} − a·nᵏ`.
pub fn lucas_v(a: &BigInt, n: &BigInt, m: u64) -> BigInt {
    if m == 0 {
        return BigInt::from(2);
    }
    // invariant: (vk, vk1, nk) = (V_k, V_{k+1}, n^k)
    let mut vk = BigInt::from(2);
    let mut vk1 = a.clone();
    let mut nk = BigInt::one();
    for bit in (0..64 - m.leading_zeros()).rev() {
        let v2k = &vk * &vk - &nk * 2;
        let v2k1 = &vk * &vk1 - a * &nk;
        let n2k = &nk * &nk;
        if (m >> bit) & 1 == 1 {
            // move to (V_{2k+1}, V_{2k+2}, n^{2k+1})
            let n2k1 = &n2k * n;
            let v2k2 = &vk1 * &vk1 - &nk * n * 2;
            vk = v2k1;
            vk1 = v2k2;
            nk = n2k1;
        } else {
            vk = v2k;
            vk1 = v2k1;
            nk = n2k;
        }
    }
    vk
}

pub fn lucas_v_i64(a: i64, n: i64, m: u64) -> BigInt {
    lucas_v(&BigInt::from(a), &BigInt::from(n), m)
}

/// Rings in which `n^m − β·V_m + β²` can be evaluated.
pub trait ResultantRing: Clone {
    fn mul_ref(&self, other: &Self) -> Self;
    fn scale(&self, k: &BigInt) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn add_int(&self, k: &BigInt) -> Self;
}

impl ResultantRing for BigInt {
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, k: &BigInt) -> Self {
        self * k
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn add_int(&self, k: &BigInt) -> Self {
        self + k
    }
}

impl ResultantRing for OkElement {
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, k: &BigInt) -> Self {
        OkElement::scale(self, k)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn add_int(&self, k: &BigInt) -> Self {
        self + &self.ring().int(k.clone())
    }
}

/// `Res(X² − aX + n, X^m − β) = n^m − β·V_m + β²`.
pub fn res_power<R: ResultantRing>(f: &FrobeniusPoly, m: u64, beta: &R) -> R {
    let n = BigInt::from(f.n);
    let nm = num_traits::pow::pow(n.clone(), m as usize);
    let v = lucas_v(&BigInt::from(f.a), &n, m);
    res_power_parts(&nm, &v, beta, &beta.mul_ref(beta))
}

/// The same resultant from precomputed `n^m`, `V_m`, `β` and `β²`.
pub fn res_power_parts<R: ResultantRing>(nm: &BigInt, v: &BigInt, beta: &R, beta_sq: &R) -> R {
    beta_sq.sub_ref(&beta.scale(v)).add_int(nm)
}

/// Determinant of the Sylvester matrix of `f` and `g` (coefficients in
/// ascending degree, leading coefficients non-zero), via Bareiss elimination.
pub fn sylvester_resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let f = trim(f);
    let g = trim(g);
    assert!(
        !f.is_empty() && !g.is_empty(),
        "resultant of the zero polynomial"
    );
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    // n shifted rows of f, then m shifted rows of g; descending coefficients.
    for i in 0..n {
        for (j, c) in f.iter().rev().enumerate() {
            mat[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in g.iter().rev().enumerate() {
            mat[n + i][i + j] = c.clone();
        }
    }
    bareiss_det(mat)
}

fn trim(p: &[BigInt]) -> Vec<BigInt> {
    let mut v = p.to_vec();
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn bareiss_det(mut mat: Vec<Vec<BigInt>>) -> BigInt {
    let size = mat.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..size {
        if mat[k][k].is_zero() {
            match (k + 1..size).find(|&i| !mat[i][k].is_zero()) {
                Some(i) => {
                    mat.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let val = &mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j];
                mat[i][j] = val / &prev;
            }
        }
        prev = mat[k][k].clone();
    }
    sign * &mat[size - 1][size - 1]
}

/// Roots of `X² − aX + n` modulo a prime `p ∤ n`, when `a² − 4n` is a square
/// (or zero) modulo `p`.
pub fn roots_mod_p(f: &FrobeniusPoly, p: u64) -> Option<TraceRootPair> {
    let a = rem_i128(f.a as i128, p);
    let n = f.n % p;
    if p == 2 {
        let roots: Vec<u64> = (0..2).filter(|&x| (x * x + a * x + n) % 2 == 0).collect();
        return match roots.as_slice() {
            [r] => Some(TraceRootPair {
                p,
                gamma1: *r,
                gamma2: *r,
            }),
            [r1, r2] => Some(TraceRootPair {
                p,
                gamma1: *r1,
                gamma2: *r2,
            }),
            _ => None,
        };
    }
    let disc = rem_i128(a as i128 * a as i128 - 4 * n as i128, p);
    let s = sqrt_mod_prime(disc, p)?;
    let half = inv_mod(2, p).expect("p is odd");
    let gamma1 = mul_mod((a + s) % p, half, p);
    let gamma2 = mul_mod((a + p - s) % p, half, p);
    Some(TraceRootPair { p, gamma1, gamma2 })
}
