use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{ln_abs, ln_big};
use crate::error::FieldError;

/// Which integral basis `{1, ω}` the ring of integers uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum BasisKind {
    /// `ω = √d`, for `d ≡ 2, 3 (mod 4)`.
    SqrtD,
    /// `ω = (1 + √d)/2`, for `d ≡ 1 (mod 4)`.
    HalfOnePlusSqrtD,
}

/// The ring of integers `O_K` of `Q(√d)`, identified by its squarefree radicand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadRing {
    d: i64,
}

impl QuadRing {
    /// Caller guarantees `d` is squarefree and not 0 or 1.
    pub(crate) fn new_unchecked(d: i64) -> Self {
        QuadRing { d }
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn basis(&self) -> BasisKind {
        if self.d.rem_euclid(4) == 1 {
            BasisKind::HalfOnePlusSqrtD
        } else {
            BasisKind::SqrtD
        }
    }

    pub fn disc(&self) -> i64 {
        match self.basis() {
            BasisKind::SqrtD => 4 * self.d,
            BasisKind::HalfOnePlusSqrtD => self.d,
        }
    }

    /// `ω² = s + t·ω`.
    fn omega_square(&self) -> (i64, i64) {
        match self.basis() {
            BasisKind::SqrtD => (self.d, 0),
            BasisKind::HalfOnePlusSqrtD => ((self.d - 1) / 4, 1),
        }
    }

    pub fn element(&self, u: impl Into<BigInt>, v: impl Into<BigInt>) -> OkElement {
        OkElement {
            ring: *self,
            u: u.into(),
            v: v.into(),
        }
    }

    pub fn int(&self, u: impl Into<BigInt>) -> OkElement {
        self.element(u, 0)
    }

    pub fn one(&self) -> OkElement {
        self.int(1)
    }

    pub fn omega(&self) -> OkElement {
        self.element(0, 1)
    }

    /// Builds `(x + y√d)/2`; errors unless it is integral.
    pub fn from_half_sqrt_coords(&self, x: &BigInt, y: &BigInt) -> Result<OkElement, FieldError> {
        let not_integral =
            || FieldError::Internal(format!("({x} + {y}*sqrt({}))/2 is not integral", self.d));
        match self.basis() {
            BasisKind::SqrtD => {
                if x.is_odd() || y.is_odd() {
                    return Err(not_integral());
                }
                Ok(self.element(x / 2, y / 2))
            }
            BasisKind::HalfOnePlusSqrtD => {
                // (x + y√d)/2 = (x - y)/2 + y·ω
                let diff = x - y;
                if diff.is_odd() {
                    return Err(not_integral());
                }
                Ok(self.element(diff / 2, y.clone()))
            }
        }
    }
}

/// An algebraic integer `u + v·ω` of a quadratic field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OkElement {
    ring: QuadRing,
    u: BigInt,
    v: BigInt,
}

impl OkElement {
    pub fn ring(&self) -> QuadRing {
        self.ring
    }

    pub fn u(&self) -> &BigInt {
        &self.u
    }

    pub fn v(&self) -> &BigInt {
        &self.v
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }

    fn same_ring(&self, other: &OkElement) -> Result<(), FieldError> {
        if self.ring != other.ring {
            return Err(FieldError::FieldMismatch(self.ring.d, other.ring.d));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &OkElement) -> Result<OkElement, FieldError> {
        self.same_ring(other)?;
        Ok(self.ring.element(&self.u + &other.u, &self.v + &other.v))
    }

    pub fn checked_sub(&self, other: &OkElement) -> Result<OkElement, FieldError> {
        self.same_ring(other)?;
        Ok(self.ring.element(&self.u - &other.u, &self.v - &other.v))
    }

    pub fn checked_mul(&self, other: &OkElement) -> Result<OkElement, FieldError> {
        self.same_ring(other)?;
        let (s, t) = self.ring.omega_square();
        let vv = &self.v * &other.v;
        let u = &self.u * &other.u + &vv * s;
        let v = &self.u * &other.v + &self.v * &other.u + vv * t;
        Ok(self.ring.element(u, v))
    }

    /// Galois conjugate `x^τ`.
    pub fn conj(&self) -> OkElement {
        match self.ring.basis() {
            BasisKind::SqrtD => self.ring.element(self.u.clone(), -&self.v),
            // ω^τ = 1 - ω
            BasisKind::HalfOnePlusSqrtD => self.ring.element(&self.u + &self.v, -&self.v),
        }
    }

    pub fn norm(&self) -> BigInt {
        match self.ring.basis() {
            BasisKind::SqrtD => &self.u * &self.u - &self.v * &self.v * self.ring.d,
            BasisKind::HalfOnePlusSqrtD => {
                &self.u * &self.u + &self.u * &self.v - &self.v * &self.v * ((self.ring.d - 1) / 4)
            }
        }
    }

    pub fn trace(&self) -> BigInt {
        match self.ring.basis() {
            BasisKind::SqrtD => &self.u * 2,
            BasisKind::HalfOnePlusSqrtD => &self.u * 2 + &self.v,
        }
    }

    /// Coordinates `(x, y)` with `2·self = x + y√d`.
    pub fn half_sqrt_coords(&self) -> (BigInt, BigInt) {
        match self.ring.basis() {
            BasisKind::SqrtD => (&self.u * 2, &self.v * 2),
            BasisKind::HalfOnePlusSqrtD => (&self.u * 2 + &self.v, self.v.clone()),
        }
    }

    pub fn pow(&self, mut exp: u64) -> OkElement {
        let mut result = self.ring.one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = &result * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Multiplies by a rational integer.
    pub fn scale(&self, k: &BigInt) -> OkElement {
        self.ring.element(&self.u * k, &self.v * k)
    }

    /// `(ln|x|, ln|x^τ|)` under the real embedding with `√d > 0`.
    /// Only meaningful for real fields and non-zero elements.
    pub fn ln_embeddings(&self) -> (f64, f64) {
        let (x, y) = self.half_sqrt_coords();
        let ln_sqrt_d = 0.5 * (self.ring.d as f64).ln();
        // |x| + |y|√d is twice the larger of the two embeddings.
        let ln_x = ln_abs(&x);
        let ln_y = ln_abs(&y) + ln_sqrt_d;
        let (hi, lo) = if ln_x >= ln_y {
            (ln_x, ln_y)
        } else {
            (ln_y, ln_x)
        };
        let ln_big_embedding = hi + (1.0 + (lo - hi).exp()).ln() - std::f64::consts::LN_2;
        let ln_small_embedding = ln_big(self.norm().magnitude()) - ln_big_embedding;
        let self_is_larger = x.is_zero() || y.is_zero() || (x.is_positive() == y.is_positive());
        if self_is_larger {
            (ln_big_embedding, ln_small_embedding)
        } else {
            (ln_small_embedding, ln_big_embedding)
        }
    }

    /// Sign of the real embedding with `√d > 0` (real fields only).
    pub fn real_sign(&self) -> i8 {
        let (x, y) = self.half_sqrt_coords();
        // sign of x + y√d
        match (x.sign(), y.sign()) {
            (num_bigint::Sign::NoSign, s) | (s, num_bigint::Sign::NoSign) => sign_to_i8(s),
            (sx, sy) if sx == sy => sign_to_i8(sx),
            (sx, _) => {
                // |x| vs |y|√d
                let lhs = &x * &x;
                let rhs = &y * &y * self.ring.d;
                if lhs > rhs {
                    sign_to_i8(sx)
                } else {
                    -sign_to_i8(sx)
                }
            }
        }
    }
}

fn sign_to_i8(s: num_bigint::Sign) -> i8 {
    match s {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

impl fmt::Display for OkElement {
    /// Renders as `u + v*w` in the integral basis.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let omega = match self.ring.basis() {
            BasisKind::SqrtD => format!("sqrt({})", self.ring.d),
            BasisKind::HalfOnePlusSqrtD => format!("(1+sqrt({}))/2", self.ring.d),
        };
        if self.v.is_zero() {
            return write!(f, "{}", self.u);
        }
        let coeff = if self.v.is_one() {
            String::new()
        } else if self.v == -BigInt::one() {
            "-".to_string()
        } else {
            format!("{}*", self.v)
        };
        if self.u.is_zero() {
            write!(f, "{coeff}{omega}")
        } else if self.v.is_negative() {
            let mag = if self.v == -BigInt::one() {
                String::new()
            } else {
                format!("{}*", -&self.v)
            };
            write!(f, "{} - {mag}{omega}", self.u)
        } else {
            write!(f, "{} + {coeff}{omega}", self.u)
        }
    }
}

impl OkElement {
    /// Renders as `x + y*sqrt(d)` or `(x + y*sqrt(d))/2`.
    pub fn to_sqrt_string(&self) -> String {
        let (x, y) = self.half_sqrt_coords();
        let d = self.ring.d;
        let body = |x: &BigInt, y: &BigInt| -> String {
            let mag = y.abs();
            let root = if mag.is_one() {
                format!("sqrt({d})")
            } else {
                format!("{mag}*sqrt({d})")
            };
            match (x.is_zero(), y.sign()) {
                (_, Sign::NoSign) => format!("{x}"),
                (true, Sign::Minus) => format!("-{root}"),
                (true, _) => root,
                (false, Sign::Minus) => format!("{x} - {root}"),
                (false, _) => format!("{x} + {root}"),
            }
        };
        if x.is_even() && y.is_even() {
            body(&(&x / 2), &(&y / 2))
        } else {
            format!("({})/2", body(&x, &y))
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&OkElement> for &OkElement {
            type Output = OkElement;
            /// Panics when the operands live in different fields; use the
            /// `checked_*` form to get a `FieldError` instead.
            fn $method(self, rhs: &OkElement) -> OkElement {
                self.$checked(rhs).expect("quadratic field mismatch")
            }
        }
        impl $tr<OkElement> for OkElement {
            type Output = OkElement;
            fn $method(self, rhs: OkElement) -> OkElement {
                (&self).$checked(&rhs).expect("quadratic field mismatch")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &OkElement {
    type Output = OkElement;
    fn neg(self) -> OkElement {
        self.ring.element(-&self.u, -&self.v)
    }
}

impl Neg for OkElement {
    type Output = OkElement;
    fn neg(self) -> OkElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_of_unit_and_conjugation() {
        let r6 = QuadRing::new_unchecked(6);
        let eps = r6.element(5, 2);
        assert_eq!(eps.norm(), BigInt::from(1));
        let x = r6.element(1, 1);
        assert_eq!(x.conj(), r6.element(1, -1));
        assert_eq!(&x * &x, r6.element(7, 2));
        assert_eq!(x.norm(), BigInt::from(-5));
    }

    #[test]
    fn half_integral_basis_arithmetic() {
        let r5 = QuadRing::new_unchecked(5);
        let w = r5.omega();
        // ω² = ω + 1 for d = 5
        assert_eq!(&w * &w, r5.element(1, 1));
        assert_eq!(w.norm(), BigInt::from(-1));
        assert_eq!(w.conj(), r5.element(1, -1));
        assert_eq!(&w * &w.conj(), r5.int(-1));
        assert_eq!(w.to_sqrt_string(), "(1 + sqrt(5))/2");
    }

    #[test]
    fn mixing_fields_is_an_error() {
        let a = QuadRing::new_unchecked(2).element(1, 1);
        let b = QuadRing::new_unchecked(3).element(1, 1);
        assert_eq!(a.checked_mul(&b), Err(FieldError::FieldMismatch(2, 3)));
    }

    #[test]
    fn embeddings_and_signs() {
        let r = QuadRing::new_unchecked(6);
        let eps = r.element(5, 2);
        let (a, b) = eps.ln_embeddings();
        let e = 5.0 + 2.0 * 6f64.sqrt();
        assert!((a - e.ln()).abs() < 1e-12);
        assert!((b + e.ln()).abs() < 1e-9);
        assert_eq!(r.element(1, -1).real_sign(), -1);
        assert_eq!(r.element(3, -1).real_sign(), 1);
        assert_eq!(r.element(-5, 2).real_sign(), -1);
    }

    #[test]
    fn display_forms() {
        let r = QuadRing::new_unchecked(318049);
        let eps = r
            .from_half_sqrt_coords(&BigInt::from(27070), &BigInt::from(48))
            .unwrap();
        assert_eq!(eps.to_sqrt_string(), "13535 + 24*sqrt(318049)");
        let r6 = QuadRing::new_unchecked(6);
        assert_eq!(r6.element(1, -1).to_string(), "1 - sqrt(6)");
        assert_eq!(r6.element(5, 2).to_string(), "5 + 2*sqrt(6)");
    }
}
