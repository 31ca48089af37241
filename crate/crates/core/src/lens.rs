//! Lens spaces up to unoriented homeomorphism.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// `L(p,q)` with `p ≥ 0`. The stored `q` is kept as given (up to the sign
/// flip for negative `p`); use [`LensSpace::canonical`] to compare.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LensSpace {
    p: BigInt,
    q: BigInt,
}

impl LensSpace {
    /// `L(-m, n)` is read as `L(m, -n)`.
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        let (mut p, mut q) = (p.into(), q.into());
        if p.is_negative() {
            p = -p;
            q = -q;
        }
        if p.gcd(&q) != BigInt::one() {
            return Err(Error::InvalidInput(format!("L({p},{q}): gcd(p,q) must be 1")));
        }
        Ok(LensSpace { p, q })
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    /// Smallest of `±q^{±1} mod p`; `L(0,1)` and `L(1,0)` for the degenerate
    /// orders.
    pub fn canonical(&self) -> LensSpace {
        if self.p.is_zero() {
            return LensSpace { p: BigInt::zero(), q: BigInt::one() };
        }
        if self.p.is_one() {
            return LensSpace { p: BigInt::one(), q: BigInt::zero() };
        }
        let p = &self.p;
        let q = self.q.mod_floor(p);
        let inv = mod_inverse(&q, p).expect("q is a unit mod p");
        let q = [q.clone(), (-&q).mod_floor(p), inv.clone(), (-&inv).mod_floor(p)]
            .into_iter()
            .min()
            .expect("nonempty");
        LensSpace { p: p.clone(), q }
    }
}

/// Inverse of `a` modulo `m > 1`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let eg = a.mod_floor(m).extended_gcd(m);
    if eg.gcd.abs().is_one() {
        Some((eg.x * eg.gcd.signum()).mod_floor(m))
    } else {
        None
    }
}

/// Unoriented homeomorphism of lens spaces.
pub fn lens_equivalent(a: &LensSpace, b: &LensSpace) -> bool {
    a.canonical() == b.canonical()
}

/// Degree of a cover `cover → base`, if one exists.
///
/// With `same_knot` set both spaces are surgeries on one torus knot and only
/// the orders need to divide. Otherwise the cover must also be the unique
/// cyclic cover `L(p_base/d, q_base)`.
pub fn lens_covers(cover: &LensSpace, base: &LensSpace, same_knot: bool) -> Option<BigInt> {
    if lens_equivalent(cover, base) {
        return Some(BigInt::one());
    }
    if cover.p.is_zero() || base.p.is_zero() {
        return None;
    }
    if !base.p.is_multiple_of(&cover.p) {
        return None;
    }
    let d = &base.p / &cover.p;
    if d.is_one() {
        // Equal orders but inequivalent spaces: a degree-one cover is a homeomorphism.
        return None;
    }
    if !same_knot {
        let induced = LensSpace::new(cover.p.clone(), base.q.mod_floor(&cover.p));
        match induced {
            Ok(l) if lens_equivalent(cover, &l) => {}
            _ => return None,
        }
    }
    Some(d)
}

impl fmt::Display for LensSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({},{})", self.p, self.q)
    }
}

impl FromStr for LensSpace {
    type Err = Error;

    /// Parses `L(p,q)`, ignoring whitespace.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("bad lens space `{s}`"));
        let body = compact
            .strip_prefix("L(")
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (p, q) = body.split_once(',').ok_or_else(bad)?;
        LensSpace::new(
            p.parse::<BigInt>().map_err(|_| bad())?,
            q.parse::<BigInt>().map_err(|_| bad())?,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(p: i64, q: i64) -> LensSpace {
        LensSpace::new(p, q).unwrap()
    }

    #[test]
    fn negative_order_flips_q() {
        assert_eq!(l(-5, 2), l(5, -2));
    }

    #[test]
    fn canonical_representatives() {
        assert_eq!(l(90, -29).canonical(), l(90, 29));
        assert_eq!(l(5, 4).canonical(), l(5, 1));
        assert_eq!(l(0, -1).canonical(), l(0, 1));
        assert_eq!(l(1, 7).canonical(), l(1, 0));
        assert_eq!(l(7, 3).canonical(), l(7, 2));
    }

    #[test]
    fn equivalence_examples() {
        assert!(lens_equivalent(&l(5, 4), &l(5, 1)));
        assert!(!lens_equivalent(&l(7, 1), &l(7, 2)));
        assert!(lens_equivalent(&l(7, 2), &l(7, 2)));
    }

    #[test]
    fn cover_examples() {
        assert_eq!(lens_covers(&l(5, 1), &l(90, -29), false), Some(BigInt::from(18)));
        assert_eq!(lens_covers(&l(7, 1), &l(5, 1), true), None);
        assert_eq!(lens_covers(&l(7, 2), &l(7, 2), false), Some(BigInt::one()));
        // L(5,2) is not the 18-fold cyclic cover of L(90,29).
        assert_eq!(lens_covers(&l(5, 2), &l(90, -29), false), None);
        assert_eq!(lens_covers(&l(5, 2), &l(90, -29), true), Some(BigInt::from(18)));
        // S³ covers everything with finite fundamental group.
        assert_eq!(lens_covers(&l(1, 0), &l(12, 5), false), Some(BigInt::from(12)));
    }

    #[test]
    fn parse_lens() {
        assert_eq!("L(90,-29)".parse::<LensSpace>().unwrap(), l(90, -29));
        assert!("L(4,2)".parse::<LensSpace>().is_err());
    }

    #[test]
    fn inverse_mod() {
        assert_eq!(mod_inverse(&BigInt::from(29), &BigInt::from(90)), Some(BigInt::from(59)));
        assert_eq!(mod_inverse(&BigInt::from(3), &BigInt::from(9)), None);
    }
}
