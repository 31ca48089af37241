//! Classification of Dehn surgeries on torus knots.
//!
//! `p/q` surgery on `T(r,s)` is a Seifert fiber space over `S²(r,s,n)` with
//! `n = |rsq - p|` when `n ≥ 2`, the lens space `L(p, qs²)` when `n = 1`, and
//! `L(r,s) # L(s,r)` when `n = 0`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lens::{lens_equivalent, mod_inverse, LensSpace};
use crate::orbifold::Orbifold2;
use crate::seifert::{sfs_equivalent, sfs_to_lens, Fiber, SeifertInvariants};
use crate::slope::{Slope, TorusKnot};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SurgeryKind {
    Seifert { base: Orbifold2, invariants: SeifertInvariants },
    Lens(LensSpace),
    ConnectSum(LensSpace, LensSpace),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryClassification {
    /// `|rsq - p|`.
    pub n: BigInt,
    pub kind: SurgeryKind,
}

impl SurgeryClassification {
    pub fn is_reducible(&self) -> bool {
        matches!(self.kind, SurgeryKind::ConnectSum(..))
    }

    /// `|H₁|`, zero when infinite.
    pub fn h1_order(&self) -> BigInt {
        match &self.kind {
            SurgeryKind::Seifert { invariants, .. } => invariants.h1_order(),
            SurgeryKind::Lens(l) => l.p().clone(),
            SurgeryKind::ConnectSum(a, b) => a.p() * b.p(),
        }
    }
}

impl fmt::Display for SurgeryClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SurgeryKind::Seifert { base, invariants } => {
                write!(f, "SFS {base} {}", invariants.unoriented_form())
            }
            SurgeryKind::Lens(l) => write!(f, "{}", l.canonical()),
            SurgeryKind::ConnectSum(a, b) => write!(f, "{a} # {b}"),
        }
    }
}

/// Classifies `γ` surgery on `k`.
pub fn classify_surgery(k: &TorusKnot, slope: &Slope) -> Result<SurgeryClassification> {
    slope.require_finite()?;
    let defect = k.framing_defect(slope);
    let n = defect.abs();
    let (r, s) = (BigInt::from(k.r()), BigInt::from(k.s()));
    let kind = if n.is_zero() {
        SurgeryKind::ConnectSum(LensSpace::new(r.clone(), s.clone())?, LensSpace::new(s, r)?)
    } else if n.is_one() {
        let q = slope.q() * &s * &s;
        SurgeryKind::Lens(LensSpace::new(slope.p().clone(), q)?.canonical())
    } else {
        let invariants = surgery_fibration(k, slope)?;
        SurgeryKind::Seifert { base: invariants.base_orbifold(), invariants }
    };
    Ok(SurgeryClassification { n, kind })
}

/// Seifert invariants of `γ` surgery on `k` when `|rsq - p| ≥ 2`.
///
/// Fibers are `(r,β₁)`, `(s,β₂)`, `(n,β₃)` with `β₁ ≡ -s⁻¹ (mod r)`,
/// `β₂ ≡ -r⁻¹ (mod s)`, and `β₃`, `b` fixed by the Euler number
/// `-p/(rs(rsq - p))`. This representative has `|H₁| = |p|`; it may be the
/// mirror of other published forms.
pub fn surgery_seifert_invariants(k: &TorusKnot, slope: &Slope) -> Result<SeifertInvariants> {
    slope.require_finite()?;
    let n = k.framing_defect(slope).abs();
    if n <= BigInt::one() {
        return Err(Error::NotThreeFiber(n.to_string()));
    }
    surgery_fibration(k, slope)
}

/// Like [`surgery_seifert_invariants`] but also accepts `|rsq - p| = 1`, where
/// the third fiber is regular and the result is the lens space fibered over
/// `S²(r,s)`.
pub fn surgery_fibration(k: &TorusKnot, slope: &Slope) -> Result<SeifertInvariants> {
    slope.require_finite()?;
    let defect = k.framing_defect(slope);
    if defect.is_zero() {
        return Err(Error::NotThreeFiber("0".into()));
    }
    let (r, s) = (BigInt::from(k.r()), BigInt::from(k.s()));
    let n = defect.abs();
    let beta1 = &r - mod_inverse(&s, &r).expect("coprime");
    let beta2 = &s - mod_inverse(&r, &s).expect("coprime");
    // b + β₃/n = p/(rs·N) - β₁/r - β₂/s with N = rsq - p; scaled by n this is
    // t = (p·sign(N) - n(β₁s + β₂r))/(rs).
    let numer = slope.p() * defect.signum() - &n * (&beta1 * &s + &beta2 * &r);
    let rs = &r * &s;
    if !numer.is_multiple_of(&rs) {
        return Err(Error::InvalidInput(format!("non-integral Seifert data for {slope} on {k}")));
    }
    let t = numer / rs;
    let beta3 = t.mod_floor(&n);
    let b = (&t - &beta3) / &n;
    let mut fibers = vec![Fiber::new(k.r(), beta1)?, Fiber::new(k.s(), beta2)?];
    if n > BigInt::one() {
        let order = n.to_u64().ok_or_else(|| Error::OrderOverflow(n.to_string()))?;
        fibers.push(Fiber::new(order, beta3)?);
    }
    Ok(SeifertInvariants::new(b, fibers).normalize())
}

/// A manifold to realize as a surgery.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SurgeryTarget {
    Seifert(SeifertInvariants),
    Lens(LensSpace),
}

impl FromStr for SurgeryTarget {
    type Err = Error;

    /// `{b;(a1,b1),...}` or `L(p,q)`.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim_start().starts_with('L') {
            Ok(SurgeryTarget::Lens(s.parse()?))
        } else {
            Ok(SurgeryTarget::Seifert(s.parse()?))
        }
    }
}

/// All slopes on `k` whose surgery is `target` up to orientation.
///
/// For three-fiber targets the candidates are `|p| = |H₁|` with
/// `rsq = p ± n`, a finite list. Targets with at most two exceptional fibers
/// are lens spaces; for those `1 ≤ q ≤ bound` is searched.
pub fn find_surgery_slopes(k: &TorusKnot, target: &SurgeryTarget, bound: u64) -> Vec<Slope> {
    let lens = match target {
        SurgeryTarget::Lens(l) => l.clone(),
        SurgeryTarget::Seifert(m) => {
            let m = m.normalize();
            if m.exceptional_count() >= 3 {
                return find_seifert(k, &m);
            }
            match sfs_to_lens(&m) {
                Ok(l) => l,
                Err(_) => return Vec::new(),
            }
        }
    };
    find_lens(k, &lens, bound)
}

fn find_seifert(k: &TorusKnot, m: &SeifertInvariants) -> Vec<Slope> {
    let mut orders: Vec<u64> = m.exceptional().map(|f| f.alpha).collect();
    for knot_order in [k.r(), k.s()] {
        match orders.iter().position(|&o| o == knot_order) {
            Some(i) => {
                orders.remove(i);
            }
            None => return Vec::new(),
        }
    }
    let [n] = orders[..] else { return Vec::new() };
    let n = BigInt::from(n);
    let h = m.h1_order();
    let rs = BigInt::from(k.r() * k.s());
    let mut out = Vec::new();
    for p in [h.clone(), -h.clone()] {
        for rsq in [&p + &n, &p - &n] {
            if !rsq.is_multiple_of(&rs) {
                continue;
            }
            let q = &rsq / &rs;
            if q < BigInt::one() {
                continue;
            }
            let Ok(slope) = Slope::new(p.clone(), q) else { continue };
            if let Ok(SurgeryClassification { kind: SurgeryKind::Seifert { invariants, .. }, .. }) =
                classify_surgery(k, &slope)
            {
                if sfs_equivalent(&invariants, m).unwrap_or(false) && !out.contains(&slope) {
                    out.push(slope);
                }
            }
        }
        if h.is_zero() {
            break;
        }
    }
    out.sort();
    out
}

fn find_lens(k: &TorusKnot, l: &LensSpace, bound: u64) -> Vec<Slope> {
    let h = l.p().clone();
    let rs = BigInt::from(k.r() * k.s());
    let mut out = Vec::new();
    for q in 1..=bound {
        let q = BigInt::from(q);
        for p in [&rs * &q - BigInt::one(), &rs * &q + BigInt::one()] {
            if p.abs() != h {
                continue;
            }
            let Ok(slope) = Slope::new(p, q.clone()) else { continue };
            if let Ok(SurgeryClassification { kind: SurgeryKind::Lens(found), .. }) =
                classify_surgery(k, &slope)
            {
                if lens_equivalent(&found, l) {
                    out.push(slope);
                }
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn knot(r: u64, s: u64) -> TorusKnot {
        TorusKnot::new(r, s).unwrap()
    }

    fn sl(p: i64, q: i64) -> Slope {
        Slope::new(p, q).unwrap()
    }

    fn si(s: &str) -> SeifertInvariants {
        s.parse().unwrap()
    }

    #[test]
    fn poincare_type_example() {
        let c = classify_surgery(&knot(2, 3), &sl(45, 7)).unwrap();
        assert_eq!(c.n, BigInt::from(3));
        let SurgeryKind::Seifert { base, invariants } = &c.kind else { panic!("{c}") };
        assert_eq!(base.to_string(), "S2(2,3,3)");
        assert_eq!(invariants.unoriented_form(), si("{1;(2,1),(3,1),(3,2)}"));
        assert_eq!(c.to_string(), "SFS S2(2,3,3) {1;(2,1),(3,1),(3,2)}");
    }

    #[test]
    fn reducible_surgery() {
        let c = classify_surgery(&knot(2, 3), &sl(6, 1)).unwrap();
        assert!(c.is_reducible());
        assert_eq!(c.to_string(), "L(2,3) # L(3,2)");
    }

    #[test]
    fn lens_surgery() {
        let c = classify_surgery(&knot(2, 3), &sl(5, 1)).unwrap();
        let SurgeryKind::Lens(l) = &c.kind else { panic!() };
        assert!(lens_equivalent(l, &LensSpace::new(5, 1).unwrap()));
    }

    #[test]
    fn big_third_fiber() {
        let c = classify_surgery(&knot(2, 5), &sl(-2, 3)).unwrap();
        let SurgeryKind::Seifert { base, invariants } = &c.kind else { panic!() };
        assert_eq!(base.orders(), &[2, 5, 32]);
        assert_eq!(invariants.h1_order(), BigInt::from(2));
    }

    #[test]
    fn infinite_slope_rejected() {
        assert_eq!(classify_surgery(&knot(2, 3), &Slope::infinity()), Err(Error::InfiniteSlope));
    }

    #[test]
    fn invariants_match_published_forms() {
        let k47 = knot(4, 7);
        let a = surgery_seifert_invariants(&k47, &sl(105, 4)).unwrap();
        assert!(sfs_equivalent(&a, &si("{-1;(4,1),(7,5),(7,4)}")).unwrap());
        let b = surgery_seifert_invariants(&k47, &sl(21, 1)).unwrap();
        assert!(sfs_equivalent(&b, &si("{-1;(4,1),(7,5),(7,1)}")).unwrap());
        let c = surgery_seifert_invariants(&knot(2, 5), &sl(-2, 3)).unwrap();
        assert!(sfs_equivalent(&c, &si("{-2;(2,1),(5,3),(32,29)}")).unwrap());
        let d = surgery_seifert_invariants(&knot(2, 3), &sl(1, 1)).unwrap();
        assert_eq!(d, si("{-1;(2,1),(3,1),(5,1)}"));
        assert_eq!(d.h1_order(), BigInt::one());
    }

    #[test]
    fn invariants_need_three_fibers() {
        assert!(surgery_seifert_invariants(&knot(2, 3), &sl(5, 1)).is_err());
        assert!(surgery_seifert_invariants(&knot(2, 3), &sl(6, 1)).is_err());
    }

    #[test]
    fn realization_examples() {
        let k = knot(2, 5);
        let base = si("{-2;(2,1),(5,3),(32,29)}");
        let family = |d: i64| {
            SeifertInvariants::from_pairs(-2 * d, &[(2, d), (5, 3 * d), (32, 29 * d)])
        };
        assert_eq!(
            find_surgery_slopes(&k, &SurgeryTarget::Seifert(family(11).unwrap()), 0),
            vec![sl(-22, 1)]
        );
        // d = 6 would need the slope -12/2, which is not primitive.
        assert!(family(6).is_err());
        assert!(Slope::new(-12, 2).is_err());
        assert_eq!(find_surgery_slopes(&k, &SurgeryTarget::Seifert(base), 0), vec![sl(-2, 3)]);
    }

    #[test]
    fn lens_realization() {
        let k = knot(2, 3);
        let found = find_surgery_slopes(&k, &"L(5,1)".parse().unwrap(), 5);
        assert_eq!(found, vec![sl(5, 1)]);
        let found = find_surgery_slopes(&k, &"L(7,4)".parse().unwrap(), 5);
        assert_eq!(found, vec![sl(7, 1)]);
    }
}
