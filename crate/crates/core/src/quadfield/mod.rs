//! Quadratic fields `Q(√d)`: integral basis, element arithmetic, prime
//! splitting, class groups, fundamental units and generators of principal
//! powers of prime ideals.

pub mod classgroup;
pub mod element;
pub mod forms;
pub mod unit;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, is_squarefree, kronecker_prime};
use crate::error::FieldError;
pub use classgroup::ClassGroup;
pub use element::{BasisKind, OkElement, QuadRing};
use forms::BinaryForm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

impl fmt::Display for Splitting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Splitting::Split => "split",
            Splitting::Inert => "inert",
            Splitting::Ramified => "ramified",
        };
        f.write_str(s)
    }
}

/// A quadratic field with its class group and, for real fields, a
/// fundamental unit. Immutable once built.
#[derive(Debug, Clone)]
pub struct QuadField {
    ring: QuadRing,
    class_group: Arc<ClassGroup>,
    fundamental_unit: Option<OkElement>,
}

/// Per-auxiliary-prime data: a fixed prime `𝔮` above `q`, its residue norm,
/// the order `r` of its ideal class and a generator `α` of `𝔮^r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxPrimeData {
    pub q: u64,
    pub splitting: Splitting,
    pub n_q: u64,
    pub r: u64,
    pub alpha: OkElement,
    /// `b` with `𝔮 = [q, (b + √disc)/2]`, `0 ≤ b < 2q`; `None` when `q` is inert.
    pub ideal_root: Option<u64>,
}

impl AuxPrimeData {
    /// The same data for the conjugate prime `𝔮^τ`, generated by `α^τ`.
    pub fn conjugate(&self) -> AuxPrimeData {
        let ideal_root = self
            .ideal_root
            .map(|b| (2 * self.q - b % (2 * self.q)) % (2 * self.q));
        AuxPrimeData {
            alpha: self.alpha.conj(),
            ideal_root,
            ..self.clone()
        }
    }
}

pub fn make_field(d: i64) -> Result<QuadField, FieldError> {
    make_field_with_cap(d, unit::PERIOD_CAP)
}

pub fn make_field_with_cap(d: i64, period_cap: usize) -> Result<QuadField, FieldError> {
    if d == 0 || d == 1 || !is_squarefree(d) {
        return Err(FieldError::InvalidRadicand(d));
    }
    // keeps 4d and the form arithmetic comfortably inside i128
    if d.unsigned_abs() > (1u64 << 60) {
        return Err(FieldError::InvalidRadicand(d));
    }
    let ring = QuadRing::new_unchecked(d);
    let fundamental_unit = if d > 0 {
        Some(unit::fundamental_unit(ring, period_cap)?)
    } else {
        None
    };
    let class_group = Arc::new(ClassGroup::compute(ring.disc())?);
    Ok(QuadField {
        ring,
        class_group,
        fundamental_unit,
    })
}

impl QuadField {
    pub fn d(&self) -> i64 {
        self.ring.d()
    }

    pub fn disc(&self) -> i64 {
        self.ring.disc()
    }

    pub fn ring(&self) -> QuadRing {
        self.ring
    }

    pub fn basis(&self) -> BasisKind {
        self.ring.basis()
    }

    pub fn is_real(&self) -> bool {
        self.ring.d() > 0
    }

    pub fn class_order(&self) -> u64 {
        self.class_group.order()
    }

    pub fn class_exponent(&self) -> u64 {
        self.class_group.exponent()
    }

    /// Invariant factors, ascending; empty for the trivial group.
    pub fn class_structure(&self) -> &[u64] {
        self.class_group.structure()
    }

    pub fn class_group(&self) -> &ClassGroup {
        &self.class_group
    }

    pub fn fundamental_unit(&self) -> Result<&OkElement, FieldError> {
        self.fundamental_unit
            .as_ref()
            .ok_or(FieldError::ImaginaryField(self.d()))
    }

    pub fn splitting_type(&self, q: u64) -> Result<Splitting, FieldError> {
        if !is_prime(q) {
            return Err(FieldError::NotPrime(q));
        }
        Ok(match kronecker_prime(self.disc() as i128, q) {
            0 => Splitting::Ramified,
            1 => Splitting::Split,
            _ => Splitting::Inert,
        })
    }

    /// Smallest `b ∈ [0, 2q)` with `b ≡ disc (mod 2)` and `b² ≡ disc (mod 4q)`.
    fn prime_ideal_root(&self, q: u64) -> Result<u64, FieldError> {
        let disc = self.disc() as i128;
        let m = 4 * q as i128;
        (0..2 * q)
            .find(|&b| {
                let b = b as i128;
                (b - disc).rem_euclid(2) == 0 && (b * b - disc).rem_euclid(m) == 0
            })
            .ok_or_else(|| FieldError::Internal(format!("no prime ideal of norm {q}")))
    }

    pub fn aux_prime_data(&self, q: u64) -> Result<AuxPrimeData, FieldError> {
        let splitting = self.splitting_type(q)?;
        if splitting == Splitting::Inert {
            return Ok(AuxPrimeData {
                q,
                splitting,
                n_q: q * q,
                r: 1,
                alpha: self.ring.int(q),
                ideal_root: None,
            });
        }
        let b = self.prime_ideal_root(q)?;
        let disc = self.disc() as i128;
        let form = BinaryForm::<i128>::from_ab(q as i128, b as i128, &disc)
            .ok_or_else(|| FieldError::Internal(format!("prime form above {q} is not integral")))?;
        let r = self.class_group.order_of_form(&form)?;
        let alpha = if splitting == Splitting::Ramified && r == 2 {
            self.ring.int(q)
        } else {
            self.ideal_power_generator(q, b, r)?
        };
        // R_q does not depend on the prime chosen above q, so the canonical
        // generator may come from either conjugate; record which one it is.
        let own = self.canonical_generator_one_side(&alpha);
        let other = self.canonical_generator_one_side(&alpha.conj());
        let (alpha, ideal_root) = if canonical_key(&own) <= canonical_key(&other) {
            (own, b)
        } else {
            (other, (2 * q - b) % (2 * q))
        };
        let ideal_root = Some(ideal_root);
        let expected = BigInt::from(q).pow(r as u32);
        if alpha.norm().abs() != expected {
            return Err(FieldError::Internal(format!(
                "generator {alpha} of the {r}-th power of a prime above {q} has wrong norm"
            )));
        }
        Ok(AuxPrimeData {
            q,
            splitting,
            n_q: q,
            r,
            alpha,
            ideal_root,
        })
    }

    /// A generator of `[q, (b+√disc)/2]^r`, which must be principal.
    fn ideal_power_generator(&self, q: u64, b: u64, r: u64) -> Result<OkElement, FieldError> {
        let disc = BigInt::from(self.disc());
        let base = BinaryForm::from_ab(BigInt::from(q), BigInt::from(b), &disc)
            .ok_or_else(|| FieldError::Internal(format!("prime form above {q} is not integral")))?;
        let mut power = base.clone();
        for _ in 1..r {
            let (next, d1) = power.compose_unreduced(&base);
            if !d1.is_one() {
                return Err(FieldError::Internal(format!(
                    "powers of a prime above {q} are not primitive"
                )));
            }
            power = next;
        }
        self.principal_generator(&power)
    }

    /// Generator of the ideal `[A, (B+√disc)/2]` attached to a primitive form
    /// `(A, B, C)` with `A > 0`, found by reducing the form while tracking the
    /// substitution: a reduced form with leading coefficient `±1` pins a
    /// vector `(x, y)` with `N(xA + y(B+√disc)/2) = ±A`.
    pub fn principal_generator(&self, f: &BinaryForm<BigInt>) -> Result<OkElement, FieldError> {
        let not_principal = || {
            FieldError::Internal(format!(
                "ideal of form ({}, {}, {}) is not principal",
                f.a, f.b, f.c
            ))
        };
        let (x, y) = if self.is_real() {
            let s = BigInt::from(self.disc().sqrt());
            let (mut g, mut m) = f.reduce_indefinite(&s);
            // A reduced cycle has at most as many members as there are reduced forms.
            let cap = 2 * self.class_group.reps().len() * (self.disc().sqrt() as usize + 2) + 4;
            let mut steps = 0usize;
            while g.a.abs() != BigInt::one() {
                let (h, step) = g.rho_indefinite(&s);
                m = m.then(&step);
                g = h;
                steps += 1;
                if steps > cap {
                    return Err(not_principal());
                }
            }
            m.first_column()
        } else {
            let (g, m) = f.reduce_definite();
            if !g.a.is_one() {
                return Err(not_principal());
            }
            m.first_column()
        };
        // 2·(xA + y(B+√disc)/2) = (2xA + yB) + y√disc
        let big_x = BigInt::from(2) * &x * &f.a + &y * &f.b;
        let big_y = match self.basis() {
            BasisKind::SqrtD => &y * 2,
            BasisKind::HalfOnePlusSqrtD => y.clone(),
        };
        let alpha = self.ring.from_half_sqrt_coords(&big_x, &big_y)?;
        if alpha.norm().abs() != f.a.abs() {
            return Err(FieldError::Internal(format!(
                "tracked reduction of ({}, {}, {}) produced {alpha} of norm {}",
                f.a,
                f.b,
                f.c,
                alpha.norm()
            )));
        }
        Ok(alpha)
    }

    /// Canonical representative among the associates of `α` and of `α^τ`:
    /// minimal `|U|`, then minimal `|V|` in `2x = U + V√d`, with `U > 0` (or
    /// `U = 0 < V`), preferring `V > 0` on a remaining tie.
    pub fn canonical_generator(&self, alpha: &OkElement) -> OkElement {
        let a = self.canonical_generator_one_side(alpha);
        let b = self.canonical_generator_one_side(&alpha.conj());
        if canonical_key(&a) <= canonical_key(&b) {
            a
        } else {
            b
        }
    }

    /// Canonical representative among the associates of `α` only.
    pub fn canonical_generator_one_side(&self, alpha: &OkElement) -> OkElement {
        self.associates(alpha)
            .into_iter()
            .map(|x| sign_normalize(&x))
            .min_by(|x, y| canonical_key(x).cmp(&canonical_key(y)))
            .expect("associate list is never empty")
    }

    /// A finite window of associates of a non-zero `α` that is guaranteed to
    /// contain the canonical one.
    fn associates(&self, alpha: &OkElement) -> Vec<OkElement> {
        match &self.fundamental_unit {
            Some(eps) => {
                // Balance the two embeddings: |αε^k| ≈ |(αε^k)^τ|.
                let (l1, l2) = alpha.ln_embeddings();
                let ln_eps = eps.ln_embeddings().0;
                let k0 = (-(l1 - l2) / (2.0 * ln_eps)).round() as i64;
                let eps_inv = eps.conj().scale(&eps.norm());
                let start = if k0 - 6 >= 0 {
                    alpha * &eps.pow((k0 - 6) as u64)
                } else {
                    alpha * &eps_inv.pow((6 - k0) as u64)
                };
                let mut out = Vec::with_capacity(13);
                let mut cur = start;
                for _ in 0..13 {
                    let next = &cur * eps;
                    out.push(cur);
                    cur = next;
                }
                out
            }
            None => {
                let root_of_unity = match self.d() {
                    -1 => Some((self.ring.omega(), 4)),
                    -3 => Some((self.ring.omega(), 6)),
                    _ => None,
                };
                match root_of_unity {
                    Some((zeta, order)) => {
                        let mut out = vec![alpha.clone()];
                        for _ in 1..order {
                            let next = out.last().unwrap() * &zeta;
                            out.push(next);
                        }
                        out
                    }
                    None => vec![alpha.clone()],
                }
            }
        }
    }

    /// Bounded brute-force search for an element of norm `±target`; used only
    /// by tests and diagnostics. Returns every element with `|U|, |V| ≤ bound`.
    pub fn elements_of_norm(&self, target: &BigInt, bound: i64) -> Vec<OkElement> {
        let mut out = Vec::new();
        for big_u in -bound..=bound {
            for big_v in -bound..=bound {
                if let Ok(x) = self
                    .ring
                    .from_half_sqrt_coords(&BigInt::from(big_u), &BigInt::from(big_v))
                {
                    if x.norm().abs() == target.abs() {
                        out.push(x);
                    }
                }
            }
        }
        out
    }
}

fn sign_normalize(x: &OkElement) -> OkElement {
    let (u, v) = x.half_sqrt_coords();
    if u.is_negative() || (u.is_zero() && v.is_negative()) {
        -x
    } else {
        x.clone()
    }
}

fn canonical_key(x: &OkElement) -> (BigInt, BigInt, bool) {
    let (u, v) = x.half_sqrt_coords();
    (u.abs(), v.abs(), v.is_negative())
}
