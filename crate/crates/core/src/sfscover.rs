//! Covers between Seifert fiber spaces and the surgery cover decision.
//!
//! Every cover between Seifert fiber spaces with hyperbolic or Euclidean
//! base factors as a pullback along an orbifold cover followed by a
//! fiberwise cover. The decision enumerates the orbifold covers allowed by
//! the tables, pulls the base back along each partition system, and checks
//! whether the candidate cover is a fiberwise cover of the result.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lens::{lens_covers, mod_inverse, LensSpace};
use crate::moser::{classify_surgery, SurgeryClassification, SurgeryKind};
use crate::orbifold::{
    classify_cover, find_perm_witness, partition_systems, riemann_hurwitz_degree, DegreeFamily,
    HurwitzDegree, Orbifold2, PartitionSystem, PermWitness, DEFAULT_BUDGET,
};
use crate::seifert::{sfs_equivalent, sfs_to_lens, Fiber, SeifertInvariants};
use crate::slope::{Slope, TorusKnot};

/// Evidence for a cover: a pullback of degree `orbifold_degree` followed by a
/// fiberwise cover of degree `fiberwise_degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverCertificate {
    pub total_degree: BigInt,
    pub fiberwise_degree: BigInt,
    pub orbifold_degree: u64,
    /// Base orbifold of the covering space.
    pub cover_orbifold: Orbifold2,
    pub partition_system: Option<PartitionSystem>,
    pub perm_witness: Option<PermWitness>,
    /// The pullback space between the two factors.
    pub intermediate: Option<SeifertInvariants>,
}

impl CoverCertificate {
    fn identity(orbifold: Orbifold2) -> Self {
        CoverCertificate {
            total_degree: BigInt::one(),
            fiberwise_degree: BigInt::one(),
            orbifold_degree: 1,
            partition_system: Some(PartitionSystem::trivial(&orbifold)),
            perm_witness: Some(PermWitness::identity(&orbifold)),
            cover_orbifold: orbifold,
            intermediate: None,
        }
    }
}

/// Why no cover exists, ordered by how far the search got.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Obstruction {
    /// One side is a connected sum of lens spaces.
    Reducible,
    /// Rational homology rank of the base exceeds that of the cover.
    Rank,
    /// A lens space is only covered by lens spaces.
    LensBase,
    /// Lens orders do not divide.
    LensDivisibility,
    /// Orbifold Euler characteristics admit no integral degree.
    ChiMismatch,
    /// The degree is allowed but the tables list no such orbifold cover.
    NoOrbifoldCover,
    /// `|H₁|` of the cover does not divide that of any pullback.
    H1Divisibility,
    /// The forced fiberwise degree shares a factor with a fiber order.
    GcdCondition,
    /// Every candidate pullback differs from the fiberwise quotient.
    RealizationFailure,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Obstruction::Reducible => "reducible",
            Obstruction::Rank => "rank of H1",
            Obstruction::LensBase => "only lens spaces cover a lens space",
            Obstruction::LensDivisibility => "lens order divisibility",
            Obstruction::ChiMismatch => "orbifold Euler characteristic",
            Obstruction::NoOrbifoldCover => "no orbifold cover",
            Obstruction::H1Divisibility => "H1 divisibility",
            Obstruction::GcdCondition => "gcd condition",
            Obstruction::RealizationFailure => "realization failure",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverDecision {
    Covers(CoverCertificate),
    NoCover(Obstruction),
}

impl CoverDecision {
    pub fn degree(&self) -> Option<&BigInt> {
        match self {
            CoverDecision::Covers(c) => Some(&c.total_degree),
            CoverDecision::NoCover(_) => None,
        }
    }
}

/// Search settings for [`decide_cover_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecideOptions {
    /// Largest orbifold degree for which a permutation witness is attached.
    pub witness_budget: u64,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions { witness_budget: DEFAULT_BUDGET }
    }
}

fn check_coprime(m: &SeifertInvariants, d: &BigInt) -> Result<()> {
    if !d.is_positive() {
        return Err(Error::InvalidInput(format!("degree {d} must be positive")));
    }
    for f in m.exceptional() {
        if !d.gcd(&BigInt::from(f.alpha)).is_one() {
            return Err(Error::NotCoprime { degree: d.to_string(), alpha: f.alpha });
        }
    }
    Ok(())
}

/// The quotient of `m` by the fiberwise `Z/d` action: `{d·b; (α, d·β)}`.
pub fn fiberwise_quotient(m: &SeifertInvariants, d: &BigInt) -> Result<SeifertInvariants> {
    check_coprime(m, d)?;
    let fibers = m
        .fibers()
        .iter()
        .map(|f| Fiber { alpha: f.alpha, beta: &f.beta * d })
        .collect();
    Ok(SeifertInvariants::new(m.b() * d, fibers).normalize())
}

/// The space whose degree-`d` fiberwise quotient is `m`, when it exists.
pub fn fiberwise_lift(m: &SeifertInvariants, d: &BigInt) -> Result<Option<SeifertInvariants>> {
    check_coprime(m, d)?;
    let m = m.normalize();
    let mut fibers = Vec::new();
    let mut rest = -m.euler_number() / BigRational::from_integer(d.clone());
    for f in m.fibers() {
        let alpha = BigInt::from(f.alpha);
        let inv = mod_inverse(d, &alpha).expect("coprime");
        let beta = (&inv * &f.beta).mod_floor(&alpha);
        rest -= BigRational::new(beta.clone(), alpha);
        fibers.push(Fiber { alpha: f.alpha, beta });
    }
    if !rest.is_integer() {
        return Ok(None);
    }
    Ok(Some(SeifertInvariants::new(rest.to_integer(), fibers).normalize()))
}

/// The pullback of `m` along the orbifold cover described by `sys`, whose
/// branch points must match the exceptional fibers of `m` in order.
pub fn pullback(m: &SeifertInvariants, sys: &PartitionSystem) -> Result<SeifertInvariants> {
    let m = m.normalize();
    let exc: Vec<&Fiber> = m.exceptional().collect();
    let pts = sys.points();
    if exc.len() != pts.len() || exc.iter().zip(pts).any(|(f, bd)| f.alpha != bd.order) {
        return Err(Error::MalformedPartition(format!(
            "branch points {sys} do not match the fibers of {m}"
        )));
    }
    let d = BigInt::from(sys.degree());
    let mut fibers = Vec::new();
    for (f, bd) in exc.iter().zip(pts) {
        for &part in &bd.parts {
            fibers.push(Fiber { alpha: f.alpha / part, beta: f.beta.clone() });
        }
    }
    Ok(SeifertInvariants::new(m.b() * d, fibers).normalize())
}

/// Does `γ_cover` surgery on `k` cover `γ_base` surgery?
pub fn decide_cover(k: &TorusKnot, cover: &Slope, base: &Slope) -> Result<CoverDecision> {
    decide_cover_with(k, cover, base, DecideOptions::default())
}

pub fn decide_cover_with(
    k: &TorusKnot,
    cover: &Slope,
    base: &Slope,
    opts: DecideOptions,
) -> Result<CoverDecision> {
    let cc = classify_surgery(k, cover)?;
    let cb = classify_surgery(k, base)?;
    if cover == base {
        let orb = match &cb.kind {
            SurgeryKind::Seifert { base, .. } => base.clone(),
            _ => Orbifold2::from_orders([k.r(), k.s()]).expect("positive"),
        };
        return Ok(CoverDecision::Covers(CoverCertificate::identity(orb)));
    }
    Ok(decide_classified(&cc, &cb, opts))
}

/// The decision on already classified surgeries on one torus knot.
pub fn decide_classified(
    cover: &SurgeryClassification,
    base: &SurgeryClassification,
    opts: DecideOptions,
) -> CoverDecision {
    if cover.is_reducible() || base.is_reducible() {
        return if cover == base {
            CoverDecision::Covers(CoverCertificate::identity(Orbifold2::sphere()))
        } else {
            CoverDecision::NoCover(Obstruction::Reducible)
        };
    }
    match (&cover.kind, &base.kind) {
        (SurgeryKind::Lens(lc), SurgeryKind::Lens(lb)) => match lens_covers(lc, lb, true) {
            Some(d) => CoverDecision::Covers(CoverCertificate {
                total_degree: d.clone(),
                fiberwise_degree: d,
                orbifold_degree: 1,
                cover_orbifold: Orbifold2::sphere(),
                partition_system: None,
                perm_witness: None,
                intermediate: None,
            }),
            None => CoverDecision::NoCover(Obstruction::LensDivisibility),
        },
        (_, SurgeryKind::Lens(_)) => CoverDecision::NoCover(Obstruction::LensBase),
        (SurgeryKind::Lens(lc), SurgeryKind::Seifert { invariants, .. }) => {
            if invariants.h1_order().is_zero() {
                return CoverDecision::NoCover(Obstruction::Rank);
            }
            lens_over_sfs(lc, invariants, opts)
        }
        (SurgeryKind::Seifert { invariants: mc, .. }, SurgeryKind::Seifert { invariants: mb, .. }) => {
            decide_sfs_cover_with(mc, mb, opts)
        }
        _ => unreachable!("reducible cases handled above"),
    }
}

/// Cover decision between two Seifert fiber spaces with at least three
/// exceptional fibers each.
pub fn decide_sfs_cover(cover: &SeifertInvariants, base: &SeifertInvariants) -> CoverDecision {
    decide_sfs_cover_with(cover, base, DecideOptions::default())
}

pub fn decide_sfs_cover_with(
    mc: &SeifertInvariants,
    mb: &SeifertInvariants,
    opts: DecideOptions,
) -> CoverDecision {
    let (c_orb, b_orb) = (mc.base_orbifold(), mb.base_orbifold());
    let rank = |mc: &SeifertInvariants, mb: &SeifertInvariants| {
        let (ec, eb) = (mc.h1_order(), mb.h1_order());
        if eb.is_zero() && !ec.is_zero() {
            Some(Obstruction::Rank)
        } else if ec.is_zero() && !eb.is_zero() {
            Some(Obstruction::H1Divisibility)
        } else {
            None
        }
    };
    let orbifold_fail = |o| CoverDecision::NoCover(rank(mc, mb).unwrap_or(o));
    let degrees: Vec<u64> = match riemann_hurwitz_degree(&c_orb, &b_orb) {
        None => return orbifold_fail(Obstruction::ChiMismatch),
        Some(HurwitzDegree::Exactly(r)) => {
            let Some(m) = r.is_integer().then(|| r.to_integer().to_u64()).flatten() else {
                return orbifold_fail(Obstruction::ChiMismatch);
            };
            if !classify_cover(&c_orb, &b_orb).contains(m) {
                return orbifold_fail(Obstruction::NoOrbifoldCover);
            }
            vec![m]
        }
        Some(HurwitzDegree::Unconstrained) => {
            let (hc, hb) = (mc.h1_order(), mb.h1_order());
            let table = classify_cover(&c_orb, &b_orb);
            let mut ds: Vec<u64> = table.finite.iter().copied().collect();
            for fam in &table.families {
                ds.extend(euclidean_degrees(*fam, &c_orb, &b_orb, &hc, &hb));
            }
            ds.sort_unstable();
            ds.dedup();
            if ds.is_empty() {
                return orbifold_fail(Obstruction::NoOrbifoldCover);
            }
            ds
        }
    };
    if let Some(o) = rank(mc, mb) {
        return CoverDecision::NoCover(o);
    }
    let (mc, mb) = (mc.normalize(), mb.unoriented_form());
    let hc = mc.h1_order();
    let mut worst = Obstruction::NoOrbifoldCover;
    for m in degrees {
        let mut best: Option<(BigInt, PartitionSystem, SeifertInvariants)> = None;
        for sys in partition_systems(&c_orb, &b_orb, m) {
            let mbar = pullback(&mb, &sys).expect("systems match the base fibers");
            let hbar = mbar.h1_order();
            let df = if hc.is_zero() {
                BigInt::one()
            } else if hbar.is_multiple_of(&hc) {
                &hbar / &hc
            } else {
                worst = worst.max(Obstruction::H1Divisibility);
                continue;
            };
            let Ok(quotient) = fiberwise_quotient(&mc, &df) else {
                worst = worst.max(Obstruction::GcdCondition);
                continue;
            };
            if sfs_equivalent(&quotient, &mbar).unwrap_or(false) {
                if best.as_ref().map_or(true, |(d, _, _)| df < *d) {
                    best = Some((df, sys, mbar));
                }
            } else {
                worst = worst.max(Obstruction::RealizationFailure);
            }
        }
        if let Some((df, sys, mbar)) = best {
            return CoverDecision::Covers(certificate(m, df, c_orb, &b_orb, sys, mbar, opts));
        }
    }
    CoverDecision::NoCover(worst)
}

fn certificate(
    m: u64,
    df: BigInt,
    c_orb: Orbifold2,
    b_orb: &Orbifold2,
    sys: PartitionSystem,
    mbar: SeifertInvariants,
    opts: DecideOptions,
) -> CoverCertificate {
    let perm_witness = if m == 1 {
        Some(PermWitness::identity(b_orb))
    } else if m <= opts.witness_budget {
        find_perm_witness(b_orb, &c_orb, m, opts.witness_budget).ok().flatten()
    } else {
        None
    };
    CoverCertificate {
        total_degree: &df * BigInt::from(m),
        fiberwise_degree: df,
        orbifold_degree: m,
        cover_orbifold: c_orb,
        partition_system: Some(sys),
        perm_witness,
        intermediate: Some(mbar),
    }
}

/// Candidate orbifold degrees for a Euclidean self-cover family.
///
/// The fiberwise degree is `m·K` for a fixed rational `K`, so `m` is a
/// multiple of `g = denom(K)`. Writing `m = factor·g'·t₀·L` with `t₀` the
/// least cofactor making `g'·t₀` representable, `m` lies in the family iff
/// `L` does. Whether a certificate exists depends on `L` only through its
/// residue modulo the lcm `A` of the cone orders, and every residue the form
/// attains is attained below `A²`, so scanning `L ≤ A²` is exhaustive.
fn euclidean_degrees(
    fam: DegreeFamily,
    c_orb: &Orbifold2,
    b_orb: &Orbifold2,
    hc: &BigInt,
    hb: &BigInt,
) -> Vec<u64> {
    if hc.is_zero() {
        return Vec::new();
    }
    let prod = |o: &Orbifold2| o.orders().iter().map(|&x| BigInt::from(x)).product::<BigInt>();
    let k = BigRational::new(hb * prod(c_orb), hc * prod(b_orb));
    let Some(g) = k.denom().to_u64() else { return Vec::new() };
    let (factor, bad_residue, modulus) = match fam {
        DegreeFamily::Loeschian { factor } => (factor, 2, 3),
        DegreeFamily::TwoSquare { factor } => (factor, 3, 4),
    };
    let g1 = g / g.gcd(&factor);
    let mut t0 = 1u64;
    let mut rest = g1;
    let mut p = 2u64;
    while p * p <= rest {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if e % 2 == 1 && p % modulus == bad_residue {
            t0 *= p;
        }
        p += 1;
    }
    if rest > 1 && rest % modulus == bad_residue {
        t0 *= rest;
    }
    let a = c_orb.orders().iter().chain(b_orb.orders()).fold(1u64, |acc, &x| acc.lcm(&x));
    let base = factor * g1 * t0;
    (1..=a * a)
        .filter(|&l| fam.contains(factor * l))
        .map(|l| base * l)
        .collect()
}

fn lens_over_sfs(lc: &LensSpace, mb: &SeifertInvariants, opts: DecideOptions) -> CoverDecision {
    let mb = mb.unoriented_form();
    let b_orb = mb.base_orbifold();
    let max_order = b_orb.orders().iter().copied().max().unwrap_or(1);
    let mut candidates: Vec<(u64, Orbifold2)> = Vec::new();
    let mut push = |c: Orbifold2| {
        for m in classify_cover(&c, &b_orb).finite {
            candidates.push((m, c.clone()));
        }
    };
    push(Orbifold2::sphere());
    for d in 2..=max_order {
        push(Orbifold2::from_orders([d, d]).expect("positive"));
        push(Orbifold2::from_orders([2, 2, d]).expect("positive"));
    }
    candidates.sort();
    candidates.dedup();
    let mut worst = Obstruction::NoOrbifoldCover;
    for (m, c_orb) in candidates {
        let mut best: Option<(BigInt, PartitionSystem, SeifertInvariants)> = None;
        for sys in partition_systems(&c_orb, &b_orb, m) {
            let mbar = pullback(&mb, &sys).expect("systems match the base fibers");
            let Ok(lbar) = sfs_to_lens(&mbar) else {
                worst = worst.max(Obstruction::RealizationFailure);
                continue;
            };
            if lc.p().is_zero() || !lbar.p().is_multiple_of(lc.p()) {
                worst = worst.max(Obstruction::H1Divisibility);
                continue;
            }
            match lens_covers(lc, &lbar, false) {
                Some(df) if best.as_ref().map_or(true, |(d, _, _)| df < *d) => {
                    best = Some((df, sys, mbar));
                }
                Some(_) => {}
                None => worst = worst.max(Obstruction::RealizationFailure),
            }
        }
        if let Some((df, sys, mbar)) = best {
            return CoverDecision::Covers(certificate(m, df, c_orb, &b_orb, sys, mbar, opts));
        }
    }
    CoverDecision::NoCover(worst)
}

/// Knots excluded from the closed-form criterion.
pub const FASTPATH_EXCLUDED: &[(u64, u64)] = &[(3, 4), (3, 5), (4, 5), (3, 7), (3, 8)];

/// Whether the closed-form criterion applies to `k`.
pub fn fastpath_admits(k: &TorusKnot) -> bool {
    k.r() > 2 && !FASTPATH_EXCLUDED.contains(&(k.r(), k.s()))
}

/// The closed-form cover criterion for torus knots with hyperbolic-type
/// surgeries.
///
/// With `N = rsq - p` and the slope signs normalized so that `N ≥ 0`
/// (`P = sign(N)·p`), the surgery along `γ_cover` covers the one along
/// `γ_base` iff `|N| = |N'|`, `P | P'`, and `d = P'/P` is coprime to both
/// `|N|` and `rs`; the degree is then `d`. The quotient is taken as `P'/P`,
/// the only integral reading given `P | P'`.
pub fn torus_main_fastpath(k: &TorusKnot, cover: &Slope, base: &Slope) -> Result<Option<BigInt>> {
    if !fastpath_admits(k) {
        return Err(Error::ExcludedKnot(k.r(), k.s()));
    }
    cover.require_finite()?;
    base.require_finite()?;
    let (nc, nb) = (k.framing_defect(cover), k.framing_defect(base));
    if nc.abs() != nb.abs() {
        return Ok(None);
    }
    let sign = |n: &BigInt| if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let pc = cover.p() * sign(&nc);
    let pb = base.p() * sign(&nb);
    if pc.is_zero() {
        return Ok(pb.is_zero().then(BigInt::one));
    }
    if !pb.is_multiple_of(&pc) {
        return Ok(None);
    }
    let d = &pb / &pc;
    if !d.is_positive() {
        return Ok(None);
    }
    let rs = BigInt::from(k.r() * k.s());
    if d.gcd(&nc.abs()).is_one() && d.gcd(&rs).is_one() {
        Ok(Some(d))
    } else {
        Ok(None)
    }
}
