use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::SieveError;

/// The pair `(a, b)`, `a, b ∈ {0, 12}`, recording the exponent of the
/// twelfth power of the isogeny character on inertia at the two primes above `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "(i64, i64)", into = "(i64, i64)")]
pub struct IsogenySignature {
    a: u8,
    b: u8,
}

impl IsogenySignature {
    pub const ZERO: IsogenySignature = IsogenySignature { a: 0, b: 0 };
    pub const TWELVE: IsogenySignature = IsogenySignature { a: 12, b: 12 };
    pub const MIXED: IsogenySignature = IsogenySignature { a: 12, b: 0 };
    pub const ALL: [IsogenySignature; 4] = [
        IsogenySignature { a: 0, b: 0 },
        IsogenySignature { a: 0, b: 12 },
        IsogenySignature { a: 12, b: 0 },
        IsogenySignature { a: 12, b: 12 },
    ];

    pub fn new(a: i64, b: i64) -> Result<Self, SieveError> {
        let ok = |x: i64| x == 0 || x == 12;
        if ok(a) && ok(b) {
            Ok(IsogenySignature {
                a: a as u8,
                b: b as u8,
            })
        } else {
            Err(SieveError::InvalidSignature(a, b))
        }
    }

    pub fn a(&self) -> u64 {
        self.a as u64
    }

    pub fn b(&self) -> u64 {
        self.b as u64
    }

    pub fn is_constant(&self) -> bool {
        self.a == self.b
    }

    /// Effect of conjugating the isogeny: `(a, b) ↦ (b, a)`.
    pub fn tau(&self) -> Self {
        IsogenySignature {
            a: self.b,
            b: self.a,
        }
    }

    /// Effect of passing to the quotient curve: `(a, b) ↦ (12 − a, 12 − b)`.
    pub fn atkin_lehner(&self) -> Self {
        IsogenySignature {
            a: 12 - self.a,
            b: 12 - self.b,
        }
    }
}

impl TryFrom<(i64, i64)> for IsogenySignature {
    type Error = SieveError;
    fn try_from((a, b): (i64, i64)) -> Result<Self, SieveError> {
        IsogenySignature::new(a, b)
    }
}

impl From<IsogenySignature> for (i64, i64) {
    fn from(s: IsogenySignature) -> (i64, i64) {
        (s.a as i64, s.b as i64)
    }
}

impl fmt::Display for IsogenySignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

impl std::str::FromStr for IsogenySignature {
    type Err = SieveError;
    /// Parses `a,b`.
    fn from_str(s: &str) -> Result<Self, SieveError> {
        let bad = || SieveError::InvalidSignature(-1, -1);
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        IsogenySignature::new(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra() {
        let s = IsogenySignature::new(12, 0).unwrap();
        assert_eq!(s.tau(), IsogenySignature::new(0, 12).unwrap());
        assert_eq!(
            IsogenySignature::ZERO.atkin_lehner(),
            IsogenySignature::TWELVE
        );
        for s in IsogenySignature::ALL {
            assert_eq!(s.tau().tau(), s);
            assert_eq!(s.atkin_lehner().atkin_lehner(), s);
            assert_eq!(s.tau().is_constant(), s.is_constant());
            assert_eq!(s.atkin_lehner().is_constant(), s.is_constant());
        }
        assert!(IsogenySignature::new(13, 0).is_err());
        assert!("12,0".parse::<IsogenySignature>().is_ok());
        assert!("12;0".parse::<IsogenySignature>().is_err());
    }
}
