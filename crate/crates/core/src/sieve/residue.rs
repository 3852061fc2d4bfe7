//! Reduction of `O_K` modulo a fixed prime `𝔭₀` above a rational prime `p`.
//!
//! When `p` splits or ramifies, `ω` goes to the smaller root of its minimal
//! polynomial mod `p`; when `p` is inert the residue field `F_{p²}` is kept as
//! pairs `x + yω`.

use crate::arith::{big_rem, inv_mod, mul_mod, pow_mod, rem_i128, sqrt_mod_prime};
use crate::quadfield::{BasisKind, OkElement, QuadRing};

/// An element `x + y·ω̄` of the residue field (`y = 0` in the degree-1 case).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    pub x: u64,
    pub y: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Degree1 {
        omega: u64,
    },
    /// `ω² = s + tω`.
    Degree2 {
        s: u64,
        t: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResidueMap {
    p: u64,
    kind: Kind,
}

impl ResidueMap {
    pub fn new(ring: QuadRing, p: u64) -> Self {
        let (s, t) = match ring.basis() {
            BasisKind::SqrtD => (rem_i128(ring.d() as i128, p), 0),
            BasisKind::HalfOnePlusSqrtD => (rem_i128(((ring.d() - 1) / 4) as i128, p), 1 % p),
        };
        // roots of X² − tX − s
        let roots: Vec<u64> = if p == 2 {
            (0..2).filter(|&x| (x * x + t * x + s) % 2 == 0).collect()
        } else {
            let disc = (mul_mod(t, t, p) + 4 * s) % p;
            match sqrt_mod_prime(disc, p) {
                Some(r) => {
                    let half = inv_mod(2, p).expect("odd prime");
                    let r1 = mul_mod((t + r) % p, half, p);
                    let r2 = mul_mod((t + p - r) % p, half, p);
                    vec![r1.min(r2), r1.max(r2)]
                }
                None => Vec::new(),
            }
        };
        let kind = match roots.first() {
            Some(&omega) => Kind::Degree1 { omega },
            None => Kind::Degree2 { s, t },
        };
        ResidueMap { p, kind }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn residue_degree(&self) -> u32 {
        match self.kind {
            Kind::Degree1 { .. } => 1,
            Kind::Degree2 { .. } => 2,
        }
    }

    pub fn int(&self, k: u64) -> Residue {
        Residue {
            x: k % self.p,
            y: 0,
        }
    }

    pub fn reduce(&self, e: &OkElement) -> Residue {
        let u = big_rem(e.u(), self.p);
        let v = big_rem(e.v(), self.p);
        match self.kind {
            Kind::Degree1 { omega } => Residue {
                x: (u + mul_mod(v, omega, self.p)) % self.p,
                y: 0,
            },
            Kind::Degree2 { .. } => Residue { x: u, y: v },
        }
    }

    pub fn mul(&self, a: Residue, b: Residue) -> Residue {
        let p = self.p;
        match self.kind {
            Kind::Degree1 { .. } => Residue {
                x: mul_mod(a.x, b.x, p),
                y: 0,
            },
            Kind::Degree2 { s, t } => {
                let yy = mul_mod(a.y, b.y, p);
                Residue {
                    x: (mul_mod(a.x, b.x, p) + mul_mod(s, yy, p)) % p,
                    y: (mul_mod(a.x, b.y, p) + mul_mod(a.y, b.x, p) + mul_mod(t, yy, p)) % p,
                }
            }
        }
    }

    pub fn pow(&self, base: Residue, mut e: u64) -> Residue {
        if let Kind::Degree1 { .. } = self.kind {
            return Residue {
                x: pow_mod(base.x, e, self.p),
                y: 0,
            };
        }
        let mut result = self.int(1);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::make_field;
    use num_bigint::BigInt;

    #[test]
    fn reduction_is_a_ring_homomorphism() {
        for d in [6i64, -5, 5, 13, -3, 318049] {
            let k = make_field(d).unwrap();
            for p in [2u64, 3, 5, 7, 11, 13, 23, 97] {
                let map = ResidueMap::new(k.ring(), p);
                for (u1, v1, u2, v2) in [(1, 1, 3, -2), (7, 5, -4, 9), (0, 1, 0, 1)] {
                    let a = k.ring().element(u1, v1);
                    let b = k.ring().element(u2, v2);
                    assert_eq!(
                        map.reduce(&(&a * &b)),
                        map.mul(map.reduce(&a), map.reduce(&b))
                    );
                    let n = a.norm() % BigInt::from(p);
                    let n = ((n + BigInt::from(p)) % BigInt::from(p)).to_string();
                    let prod = map.mul(map.reduce(&a), map.reduce(&a.conj()));
                    assert_eq!(prod.y, 0);
                    assert_eq!(prod.x.to_string(), n);
                }
            }
        }
    }
}
