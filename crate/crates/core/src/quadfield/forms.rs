//! Binary quadratic forms `ax² + bxy + cy²`: reduction (definite and
//! indefinite), the rho operator, and Dirichlet composition.
//!
//! The code is generic over the integer type so the class-group tables can run
//! on `i128` while ideal powers with huge norms use `BigInt`.

use num_integer::Integer;
use num_traits::Signed;

pub trait FormInt: Integer + Signed + Clone + From<i64> + std::fmt::Debug {}
impl<T: Integer + Signed + Clone + From<i64> + std::fmt::Debug> FormInt for T {}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

/// A 2x2 integer matrix `[[m00, m01], [m10, m11]]` acting on `(x, y)` column vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transform<T> {
    pub m: [T; 4],
}

impl<T: FormInt> Transform<T> {
    pub fn identity() -> Self {
        Transform {
            m: [T::one(), T::zero(), T::zero(), T::one()],
        }
    }

    pub fn then(&self, o: &Transform<T>) -> Transform<T> {
        let [a, b, c, d] = self.m.clone();
        let [e, f, g, h] = o.m.clone();
        Transform {
            m: [
                a.clone() * e.clone() + b.clone() * g.clone(),
                a * f.clone() + b * h.clone(),
                c.clone() * e + d.clone() * g,
                c * f + d * h,
            ],
        }
    }

    /// Image of `(1, 0)`.
    pub fn first_column(&self) -> (T, T) {
        (self.m[0].clone(), self.m[2].clone())
    }
}

fn floor_div<T: FormInt>(n: T, d: T) -> T {
    n.div_floor(&d)
}

impl<T: FormInt> BinaryForm<T> {
    pub fn new(a: T, b: T, c: T) -> Self {
        BinaryForm { a, b, c }
    }

    /// Builds `(a, b, (b² − disc)/(4a))`; `None` if that is not integral.
    pub fn from_ab(a: T, b: T, disc: &T) -> Option<Self> {
        let four_a = a.clone() * T::from(4);
        let num = b.clone() * b.clone() - disc.clone();
        if four_a.is_zero() || !num.is_multiple_of(&four_a) {
            return None;
        }
        Some(BinaryForm::new(a, b, num / four_a))
    }

    pub fn disc(&self) -> T {
        self.b.clone() * self.b.clone() - T::from(4) * self.a.clone() * self.c.clone()
    }

    pub fn eval(&self, x: &T, y: &T) -> T {
        self.a.clone() * x.clone() * x.clone()
            + self.b.clone() * x.clone() * y.clone()
            + self.c.clone() * y.clone() * y.clone()
    }

    /// `(−a, b, −c)`: the same lattice with orientation reversed.
    pub fn negated(&self) -> Self {
        BinaryForm::new(-self.a.clone(), self.b.clone(), -self.c.clone())
    }

    /// `(a, −b, c)`, the inverse class.
    pub fn inverse(&self) -> Self {
        BinaryForm::new(self.a.clone(), -self.b.clone(), self.c.clone())
    }

    /// `(x, y) ↦ (x + ty, y)`.
    fn translate(&self, t: &T) -> (Self, Transform<T>) {
        let a = self.a.clone();
        let b = self.b.clone() + T::from(2) * a.clone() * t.clone();
        let c = self.eval(t, &T::one());
        (
            BinaryForm::new(a, b, c),
            Transform {
                m: [T::one(), t.clone(), T::zero(), T::one()],
            },
        )
    }

    /// `(a, b, c) ↦ (c, −b + 2ct, a − bt + ct²)`, via `(x, y) ↦ (−y, x + ty)`.
    pub fn rho_with(&self, t: &T) -> (Self, Transform<T>) {
        let c = self.c.clone();
        let nb = -self.b.clone() + T::from(2) * c.clone() * t.clone();
        let nc = self.a.clone() - self.b.clone() * t.clone() + c.clone() * t.clone() * t.clone();
        (
            BinaryForm::new(c, nb, nc),
            Transform {
                m: [T::zero(), -T::one(), T::one(), t.clone()],
            },
        )
    }

    // ---- definite forms (disc < 0, a > 0) ----

    pub fn is_reduced_definite(&self) -> bool {
        let (a, b, c) = (&self.a, &self.b, &self.c);
        b.abs() <= *a && a <= c && !((b.abs() == *a || a == c) && b.is_negative())
    }

    /// Gauss reduction of a positive definite form, with the accumulated
    /// substitution taking `self` to the result.
    pub fn reduce_definite(&self) -> (Self, Transform<T>) {
        debug_assert!(self.a.is_positive());
        let two = T::from(2);
        let t = floor_div(
            self.a.clone() - self.b.clone(),
            two.clone() * self.a.clone(),
        );
        let (mut f, mut m) = self.translate(&t);
        while f.a > f.c || (f.a == f.c && f.b.is_negative()) {
            // new b must land in (−c, c]
            let c = f.c.clone();
            let t = floor_div(c.clone() + f.b.clone(), two.clone() * c);
            let (g, step) = f.rho_with(&t);
            m = m.then(&step);
            f = g;
        }
        (f, m)
    }

    // ---- indefinite forms (disc > 0, not a square); `s` = isqrt(disc) ----

    pub fn is_reduced_indefinite(&self, s: &T) -> bool {
        let two_a = T::from(2) * self.a.abs();
        let b = &self.b;
        b.is_positive() && b <= s && *s < b.clone() + two_a.clone() && two_a - b.clone() <= *s
    }

    /// One normalised rho step: the new middle coefficient lands in
    /// `[s − 2|c| + 1, s]` when `|c| ≤ s`, otherwise in `(−|c|, |c|]`.
    pub fn rho_indefinite(&self, s: &T) -> (Self, Transform<T>) {
        let two = T::from(2);
        let abs_c = self.c.abs();
        let k = if abs_c <= *s {
            floor_div(s.clone() + self.b.clone(), two * abs_c)
        } else {
            floor_div(abs_c.clone() + self.b.clone(), two * abs_c)
        };
        let t = if self.c.is_negative() { -k } else { k };
        self.rho_with(&t)
    }

    pub fn reduce_indefinite(&self, s: &T) -> (Self, Transform<T>) {
        let mut f = self.clone();
        let mut m = Transform::identity();
        while !f.is_reduced_indefinite(s) {
            let (g, step) = f.rho_indefinite(s);
            m = m.then(&step);
            f = g;
        }
        (f, m)
    }

    /// Dirichlet composition (Cohen, Algorithm 5.4.7) without reduction.
    /// Both forms must share the discriminant and have `a > 0`.
    ///
    /// Returns the composite and the factor `d1` such that the product of the
    /// two primitive ideals equals `d1` times the composite's ideal.
    pub fn compose_unreduced(&self, other: &Self) -> (Self, T) {
        let disc = self.disc();
        let (f1, f2) = if self.a > other.a {
            (other, self)
        } else {
            (self, other)
        };
        let (a1, b1) = (f1.a.clone(), f1.b.clone());
        let (a2, b2, c2) = (f2.a.clone(), f2.b.clone(), f2.c.clone());
        let s = (b1 + b2.clone()) / T::from(2);
        let n = b2.clone() - s.clone();
        let (y1, d) = if a2.is_multiple_of(&a1) {
            (T::zero(), a1.clone())
        } else {
            let e = a2.extended_gcd(&a1);
            (e.x, e.gcd)
        };
        let (x2, y2, d1) = if s.is_multiple_of(&d) {
            (T::zero(), -T::one(), d.clone())
        } else {
            let e = s.extended_gcd(&d);
            (e.x, -e.y, e.gcd)
        };
        let v1 = a1 / d1.clone();
        let v2 = a2 / d1.clone();
        let r = (y1 * y2 * n - x2 * c2).mod_floor(&v1);
        let b3 = b2 + T::from(2) * v2.clone() * r;
        let a3 = v1 * v2;
        let c3 = (b3.clone() * b3.clone() - disc) / (T::from(4) * a3.clone());
        (BinaryForm::new(a3, b3, c3), d1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn reduction_of_prime_forms_disc_minus_20() {
        // disc −20 has reduced forms (1,0,5) and (2,2,3).
        let f = BinaryForm::<i128>::from_ab(3, 2, &-20).unwrap();
        let (g, m) = f.reduce_definite();
        assert!(g.is_reduced_definite());
        assert_eq!(g, BinaryForm::new(2, -2, 3).reduce_definite().0);
        let (x, y) = m.first_column();
        assert_eq!(f.eval(&x, &y), g.a);
    }

    #[test]
    fn indefinite_reduction_and_cycle() {
        let disc: i128 = 24;
        let s = 4;
        let f = BinaryForm::<i128>::from_ab(5, 2, &disc).unwrap();
        let (g, m) = f.reduce_indefinite(&s);
        assert!(g.is_reduced_indefinite(&s));
        assert_eq!(g.disc(), disc);
        let (x, y) = m.first_column();
        assert_eq!(f.eval(&x, &y), g.a);
    }

    #[test]
    fn composition_of_a_split_prime_with_itself_is_its_square_ideal() {
        let disc = BigInt::from(-20);
        let f = BinaryForm::from_ab(BigInt::from(3), BigInt::from(2), &disc).unwrap();
        let (g, d1) = f.compose_unreduced(&f);
        assert_eq!(d1, BigInt::from(1));
        assert_eq!(g.a, BigInt::from(9));
        assert_eq!(g.disc(), disc);
        // the inverse class composes to a multiple of the principal ideal
        let (h, d1) = f.compose_unreduced(&f.inverse());
        assert_eq!(d1, BigInt::from(3));
        assert_eq!(h.disc(), disc);
    }
}
