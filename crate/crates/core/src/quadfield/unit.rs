//! Fundamental unit of a real quadratic field from the continued fraction of
//! the integral basis generator `ω`.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Zero};

use super::element::{BasisKind, OkElement, QuadRing};
use crate::error::FieldError;

pub const PERIOD_CAP: usize = 1_000_000;

/// Expands `ω = (P₀ + √d)/Q₀` until the complete quotient returns to
/// denominator `Q₀`; the convergent `p/q` reached there gives the smallest
/// unit `p − q·ω^τ > 1`.
pub fn fundamental_unit(ring: QuadRing, cap: usize) -> Result<OkElement, FieldError> {
    let d = ring.d();
    if d < 0 {
        return Err(FieldError::ImaginaryField(d));
    }
    let d = d as i128;
    let root = d.sqrt();
    let (p0, q0): (i128, i128) = match ring.basis() {
        BasisKind::SqrtD => (0, 1),
        BasisKind::HalfOnePlusSqrtD => (1, 2),
    };
    let (mut pp, mut qq) = (p0, q0);
    // convergents: (h_{k-1}, h_{k-2}) and (k_{k-1}, k_{k-2})
    let (mut h1, mut h2) = (BigInt::one(), BigInt::zero());
    let (mut k1, mut k2) = (BigInt::zero(), BigInt::one());
    for _ in 0..cap {
        let a = (pp + root).div_euclid(qq);
        let h = &h1 * a + &h2;
        let k = &k1 * a + &k2;
        h2 = std::mem::replace(&mut h1, h);
        k2 = std::mem::replace(&mut k1, k);
        pp = a * qq - pp;
        qq = (d - pp * pp) / qq;
        if qq == q0 {
            // unit = h − k·ω^τ
            let unit = match ring.basis() {
                BasisKind::SqrtD => ring.element(h1.clone(), k1.clone()),
                BasisKind::HalfOnePlusSqrtD => ring.element(&h1 - &k1, k1.clone()),
            };
            let n = unit.norm();
            if n != BigInt::one() && n != -BigInt::one() {
                return Err(FieldError::Internal(format!(
                    "continued fraction for d = {d} produced {unit} of norm {n}"
                )));
            }
            return Ok(unit);
        }
    }
    Err(FieldError::PeriodCap { d: d as i64, cap })
}
