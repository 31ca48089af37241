//! Surgery slopes and torus knots.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A primitive slope `p/q` with `q ≥ 0`. The meridian `1/0` is allowed as a
/// value but rejected by every surgery operation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slope {
    p: BigInt,
    q: BigInt,
}

impl Slope {
    /// Builds a slope from a primitive pair, flipping signs so that `q ≥ 0`.
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        let (mut p, mut q) = (p.into(), q.into());
        if p.gcd(&q) != BigInt::one() {
            return Err(Error::InvalidSlope(format!("{p}/{q} is not primitive")));
        }
        if q.is_negative() || (q.is_zero() && p.is_negative()) {
            p = -p;
            q = -q;
        }
        Ok(Slope { p, q })
    }

    pub fn infinity() -> Self {
        Slope { p: BigInt::one(), q: BigInt::zero() }
    }

    pub fn is_infinite(&self) -> bool {
        self.q.is_zero()
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub(crate) fn require_finite(&self) -> Result<()> {
        if self.is_infinite() {
            Err(Error::InfiniteSlope)
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = Error;

    /// Accepts `p/q` or a bare integer `p` (meaning `p/1`).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad slope `{s}`"));
        let (p, q) = match s.trim().split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let p: BigInt = p.parse().map_err(|_| bad())?;
        let q: BigInt = q.parse().map_err(|_| bad())?;
        Slope::new(p, q)
    }
}

/// A nontrivial torus knot `T(r,s)`, stored with `r < s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusKnot {
    r: u64,
    s: u64,
}

impl TorusKnot {
    pub fn new(r: u64, s: u64) -> Result<Self> {
        if r < 2 || s < 2 || r.gcd(&s) != 1 {
            return Err(Error::InvalidKnot(r, s));
        }
        Ok(TorusKnot { r: r.min(s), s: r.max(s) })
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    /// The signed quantity `rsq - p`, whose absolute value is the order of the
    /// third exceptional fiber.
    pub fn framing_defect(&self, slope: &Slope) -> BigInt {
        BigInt::from(self.r) * BigInt::from(self.s) * slope.q() - slope.p()
    }
}

impl fmt::Display for TorusKnot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T({},{})", self.r, self.s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_sign_normalized() {
        let s = Slope::new(-5, -3).unwrap();
        assert_eq!((s.p().clone(), s.q().clone()), (BigInt::from(5), BigInt::from(3)));
        let s = Slope::new(2, -3).unwrap();
        assert_eq!(s.to_string(), "-2/3");
    }

    #[test]
    fn slope_rejects_non_primitive() {
        assert!(Slope::new(4, 2).is_err());
        assert!(Slope::new(0, 0).is_err());
        assert!(Slope::new(0, 1).is_ok());
    }

    #[test]
    fn infinity_is_one_over_zero() {
        assert_eq!(Slope::new(-1, 0).unwrap(), Slope::infinity());
        assert!(Slope::infinity().require_finite().is_err());
    }

    #[test]
    fn parse_slopes() {
        assert_eq!("45/7".parse::<Slope>().unwrap(), Slope::new(45, 7).unwrap());
        assert_eq!("-22".parse::<Slope>().unwrap(), Slope::new(-22, 1).unwrap());
        assert!("x/2".parse::<Slope>().is_err());
    }

    #[test]
    fn torus_knot_validation() {
        assert!(TorusKnot::new(2, 4).is_err());
        assert!(TorusKnot::new(1, 4).is_err());
        assert_eq!(TorusKnot::new(7, 4).unwrap(), TorusKnot::new(4, 7).unwrap());
    }

    #[test]
    fn framing_defect_signed() {
        let k = TorusKnot::new(2, 3).unwrap();
        assert_eq!(k.framing_defect(&Slope::new(45, 7).unwrap()), BigInt::from(-3));
        assert_eq!(k.framing_defect(&Slope::new(6, 1).unwrap()), BigInt::from(0));
    }
}
