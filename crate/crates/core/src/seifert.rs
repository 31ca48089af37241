//! Seifert invariants of Seifert fiber spaces over S².

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lens::LensSpace;
use crate::orbifold::Orbifold2;

/// One fiber pair `(α, β)`. Pairs with `α = 1` are regular and can be
/// absorbed into `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fiber {
    pub alpha: u64,
    pub beta: BigInt,
}

impl Fiber {
    pub fn new(alpha: u64, beta: impl Into<BigInt>) -> Result<Self> {
        let beta = beta.into();
        if alpha == 0 || (alpha >= 2 && beta.gcd(&BigInt::from(alpha)) != BigInt::one()) {
            return Err(Error::InvalidFiber(alpha, beta.to_string()));
        }
        Ok(Fiber { alpha, beta })
    }
}

/// `{b; (α₁,β₁), …, (αₙ,βₙ)}`, possibly unnormalized.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeifertInvariants {
    b: BigInt,
    fibers: Vec<Fiber>,
}

impl SeifertInvariants {
    pub fn new(b: impl Into<BigInt>, fibers: Vec<Fiber>) -> Self {
        SeifertInvariants { b: b.into(), fibers }
    }

    /// Convenience constructor from machine integers; validates every pair.
    pub fn from_pairs(b: i64, pairs: &[(u64, i64)]) -> Result<Self> {
        let fibers = pairs
            .iter()
            .map(|&(a, be)| Fiber::new(a, be))
            .collect::<Result<Vec<_>>>()?;
        Ok(SeifertInvariants::new(b, fibers))
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn fibers(&self) -> &[Fiber] {
        &self.fibers
    }

    /// Fibers with `α ≥ 2`.
    pub fn exceptional(&self) -> impl Iterator<Item = &Fiber> {
        self.fibers.iter().filter(|f| f.alpha >= 2)
    }

    pub fn exceptional_count(&self) -> usize {
        self.exceptional().count()
    }

    /// The unique form with `0 ≤ β < α`, regular fibers absorbed into `b`,
    /// and fibers sorted.
    pub fn normalize(&self) -> SeifertInvariants {
        let mut b = self.b.clone();
        let mut fibers = Vec::with_capacity(self.fibers.len());
        for f in &self.fibers {
            let alpha = BigInt::from(f.alpha);
            let (shift, beta) = f.beta.div_mod_floor(&alpha);
            b += shift;
            if f.alpha >= 2 {
                fibers.push(Fiber { alpha: f.alpha, beta });
            }
        }
        fibers.sort();
        SeifertInvariants { b, fibers }
    }

    pub fn is_normalized(&self) -> bool {
        *self == self.normalize()
    }

    /// The orientation-reversed manifold, normalized.
    pub fn mirror(&self) -> SeifertInvariants {
        SeifertInvariants {
            b: -&self.b,
            fibers: self
                .fibers
                .iter()
                .map(|f| Fiber { alpha: f.alpha, beta: -&f.beta })
                .collect(),
        }
        .normalize()
    }

    /// `|H₁|`, with 0 standing for infinite first homology.
    pub fn h1_order(&self) -> BigInt {
        let alphas: Vec<BigInt> = self.fibers.iter().map(|f| BigInt::from(f.alpha)).collect();
        let total: BigInt = alphas.iter().product();
        let mut acc = &total * &self.b;
        for (j, f) in self.fibers.iter().enumerate() {
            let others: BigInt = alphas
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, a)| a)
                .product();
            acc += &f.beta * others;
        }
        acc.abs()
    }

    /// `e(M) = -(b + Σ βᵢ/αᵢ)`.
    pub fn euler_number(&self) -> BigRational {
        let mut sum = BigRational::from_integer(self.b.clone());
        for f in &self.fibers {
            sum += BigRational::new(f.beta.clone(), BigInt::from(f.alpha));
        }
        -sum
    }

    /// Base orbifold S²(α₁, …, αₙ).
    pub fn base_orbifold(&self) -> Orbifold2 {
        Orbifold2::from_orders(self.exceptional().map(|f| f.alpha))
            .expect("fiber orders are positive")
    }

    /// The representative of `{M, mirror(M)}` with non-positive Euler number.
    /// When `e = 0` the lexicographically smaller normal form is chosen.
    pub fn unoriented_form(&self) -> SeifertInvariants {
        let m = self.normalize();
        let e = m.euler_number();
        match e.cmp(&BigRational::zero()) {
            Ordering::Less => m,
            Ordering::Greater => m.mirror(),
            Ordering::Equal => {
                let mm = m.mirror();
                m.min(mm)
            }
        }
    }

    /// Reads off the lens space of a space with at most two exceptional
    /// fibers, as the canonical unoriented representative.
    pub fn to_lens(&self) -> Result<LensSpace> {
        sfs_to_lens(self)
    }
}

/// Whether `m1` and `m2` are the same manifold up to orientation.
///
/// Only meaningful with at least three exceptional fibers each; spaces with
/// fewer are lens spaces and must be compared with [`sfs_to_lens`].
pub fn sfs_equivalent(m1: &SeifertInvariants, m2: &SeifertInvariants) -> Result<bool> {
    for m in [m1, m2] {
        let n = m.normalize().exceptional_count();
        if n <= 2 {
            return Err(Error::LensRegime(n));
        }
    }
    let a = m1.normalize();
    Ok(a == m2.normalize() || a == m2.mirror())
}

/// Converts a space with at most two exceptional fibers to its lens space.
///
/// With the fibers `(α₁,β₁)`, `(α₂,β₂)` (padded by `(1,0)`) and `b` absorbed
/// into the first, the two solid-torus chains glue along
/// `p = |α₁β₂ + α₂β₁|` and `q = -(α₂y + β₂x)` where `α₁y - β₁x = 1`.
pub fn sfs_to_lens(m: &SeifertInvariants) -> Result<LensSpace> {
    let m = m.normalize();
    let count = m.exceptional_count();
    if count > 2 {
        return Err(Error::NotLens(count));
    }
    let mut pairs: Vec<(BigInt, BigInt)> = m
        .fibers
        .iter()
        .map(|f| (BigInt::from(f.alpha), f.beta.clone()))
        .collect();
    while pairs.len() < 2 {
        pairs.push((BigInt::one(), BigInt::zero()));
    }
    let (a1, b1) = (pairs[0].0.clone(), &pairs[0].1 + &m.b * &pairs[0].0);
    let (a2, b2) = pairs[1].clone();
    // Bezout for a1*y - b1*x = 1.
    let eg = a1.extended_gcd(&b1);
    let sign = eg.gcd.signum();
    let (y, x) = (eg.x * &sign, -eg.y * &sign);
    let p = (&a1 * &b2 + &a2 * &b1).abs();
    if p.is_zero() {
        return LensSpace::new(0, 1);
    }
    let q = (-(&a2 * &y + &b2 * &x)).mod_floor(&p);
    Ok(LensSpace::new(p, q)?.canonical())
}

impl fmt::Display for SeifertInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{};", self.b)?;
        for (i, fib) in self.fibers.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "({},{})", fib.alpha, fib.beta)?;
        }
        f.write_str("}")
    }
}

impl FromStr for SeifertInvariants {
    type Err = Error;

    /// Parses `{b;(a1,b1),...,(an,bn)}`, ignoring whitespace.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |why: &str| Error::Parse(format!("bad Seifert invariants `{s}`: {why}"));
        let body = compact
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| bad("expected braces"))?;
        let (b, rest) = body.split_once(';').ok_or_else(|| bad("missing `;`"))?;
        let b: BigInt = b.replace('−', "-").parse().map_err(|_| bad("bad b"))?;
        let mut fibers = Vec::new();
        let mut rest = rest.replace('−', "-");
        while !rest.is_empty() {
            let inner_end = rest.find(')').ok_or_else(|| bad("unclosed pair"))?;
            let pair = rest[..inner_end].strip_prefix('(').ok_or_else(|| bad("expected `(`"))?;
            let (a, be) = pair.split_once(',').ok_or_else(|| bad("pair needs two entries"))?;
            let alpha: u64 = a.parse().map_err(|_| bad("bad alpha"))?;
            let beta: BigInt = be.parse().map_err(|_| bad("bad beta"))?;
            fibers.push(Fiber::new(alpha, beta)?);
            rest = rest[inner_end + 1..].trim_start_matches([',', ';']).to_string();
        }
        Ok(SeifertInvariants { b, fibers })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn si(s: &str) -> SeifertInvariants {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print_round_trip() {
        for s in ["{1;(2,1),(3,1),(3,2)}", "{0;}", "{-2;(2,1),(5,3),(32,29)}"] {
            assert_eq!(si(s).to_string(), s);
        }
        assert_eq!(si(" { -1 ; (4 , 1) ,(7,5)} ").to_string(), "{-1;(4,1),(7,5)}");
        assert!("{1;(2,2)}".parse::<SeifertInvariants>().is_err());
        assert!("1;(2,1)".parse::<SeifertInvariants>().is_err());
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(
            si("{4;(1,1),(1,1),(1,1),(3,1),(1,2),(3,2)}").normalize(),
            si("{9;(3,1),(3,2)}")
        );
        assert_eq!(si("{0;}").normalize(), si("{0;}"));
        assert_eq!(
            si("{-2;(2,1),(5,-3),(32,29)}").normalize(),
            si("{-3;(2,1),(5,2),(32,29)}")
        );
    }

    #[test]
    fn mirror_examples() {
        assert_eq!(si("{-2;(2,1),(5,3),(32,29)}").mirror(), si("{-1;(2,1),(5,2),(32,3)}"));
        assert_eq!(si("{0;}").mirror(), si("{0;}"));
    }

    #[test]
    fn h1_examples() {
        assert_eq!(si("{1;(2,1),(3,1),(3,2)}").h1_order(), BigInt::from(45));
        assert_eq!(si("{-2;(2,1),(5,3),(32,29)}").h1_order(), BigInt::from(2));
        assert_eq!(si("{-1;(2,1),(3,1),(5,1)}").h1_order(), BigInt::from(1));
        assert_eq!(si("{0;}").h1_order(), BigInt::from(0));
    }

    #[test]
    fn euler_examples() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(si("{1;(2,1),(3,1),(3,2)}").euler_number(), r(-5, 2));
        assert_eq!(si("{0;}").euler_number(), r(0, 1));
        assert_eq!(si("{9;(3,1),(3,2)}").euler_number(), r(-10, 1));
    }

    #[test]
    fn equivalence_examples() {
        let a = si("{-2;(2,1),(5,3),(32,29)}");
        assert!(sfs_equivalent(&a, &si("{-1;(2,1),(5,2),(32,3)}")).unwrap());
        assert!(sfs_equivalent(&a, &a).unwrap());
        assert!(!sfs_equivalent(&si("{-1;(4,1),(7,5),(7,4)}"), &si("{-1;(4,1),(7,5),(7,1)}")).unwrap());
        assert!(sfs_equivalent(&si("{9;(3,1),(3,2)}"), &a).is_err());
    }

    #[test]
    fn lens_examples() {
        let l = sfs_to_lens(&si("{9;(3,1),(3,2)}")).unwrap();
        assert!(crate::lens::lens_equivalent(&l, &LensSpace::new(90, -29).unwrap()));
        assert_eq!(l.p(), &BigInt::from(90));
        assert_eq!(sfs_to_lens(&si("{7;}")).unwrap(), LensSpace::new(7, 1).unwrap());
        assert_eq!(sfs_to_lens(&si("{-4;}")).unwrap(), LensSpace::new(4, 1).unwrap());
        assert_eq!(sfs_to_lens(&si("{0;}")).unwrap(), LensSpace::new(0, 1).unwrap());
        assert!(sfs_to_lens(&si("{3;(3,1),(3,1),(2,1)}")).is_err());
    }

    #[test]
    fn unoriented_form_picks_negative_euler() {
        let m = si("{-4;(2,1),(3,1),(3,2)}");
        assert_eq!(m.unoriented_form(), si("{1;(2,1),(3,1),(3,2)}"));
        assert_eq!(m.mirror().unoriented_form(), si("{1;(2,1),(3,1),(3,2)}"));
    }
}
