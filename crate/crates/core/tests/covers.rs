use knotcover::moser::{classify_surgery, find_surgery_slopes, SurgeryClassification, SurgeryKind, SurgeryTarget};
use knotcover::orbifold::Orbifold2;
use knotcover::par::{IntoParallelRefIterator, ParallelIterator};
use knotcover::seifert::sfs_to_lens;
use knotcover::sfscover::{
    decide_classified, decide_cover, decide_sfs_cover, fastpath_admits, pullback, torus_main_fastpath,
    CoverDecision, DecideOptions, Obstruction,
};
use knotcover::{SeifertInvariants, Slope, TorusKnot};
use num_bigint::BigInt;
use num_integer::Integer;

fn knot(r: u64, s: u64) -> TorusKnot {
    TorusKnot::new(r, s).unwrap()
}

fn slopes(pmax: i64, qmax: i64) -> Vec<Slope> {
    let mut out = Vec::new();
    for p in -pmax..=pmax {
        for q in 1..=qmax {
            if p.gcd(&q) == 1 {
                out.push(Slope::new(p, q).unwrap());
            }
        }
    }
    out
}

fn classified(k: &TorusKnot, pmax: i64, qmax: i64) -> Vec<(Slope, SurgeryClassification)> {
    slopes(pmax, qmax).into_iter().map(|s| (s.clone(), classify_surgery(k, &s).unwrap())).collect()
}

#[test]
fn same_slope_is_degree_one() {
    for k in [knot(2, 3), knot(2, 5), knot(3, 4), knot(4, 7)] {
        for s in slopes(30, 3) {
            let d = decide_cover(&k, &s, &s).unwrap();
            assert_eq!(d.degree(), Some(&BigInt::from(1)), "{k} {s}");
        }
    }
}

#[test]
fn reducible_surgery_is_never_covered() {
    let k = knot(2, 3);
    let six = Slope::new(6, 1).unwrap();
    for s in slopes(40, 4) {
        if s == six {
            continue;
        }
        assert_eq!(
            decide_cover(&k, &s, &six).unwrap(),
            CoverDecision::NoCover(Obstruction::Reducible),
            "{s}"
        );
    }
}

fn base_invariants(c: &SurgeryClassification) -> Option<SeifertInvariants> {
    match &c.kind {
        SurgeryKind::Seifert { invariants, .. } => Some(invariants.unoriented_form()),
        _ => None,
    }
}

#[test]
fn certificates_are_consistent() {
    let mut certified = 0;
    for k in [knot(2, 3), knot(2, 5), knot(3, 4), knot(3, 5)] {
        let list = classified(&k, 40, 4);
        let found: Vec<usize> = list
            .par_iter()
            .map(|(a, ca)| {
                let mut n = 0;
                for (b, cb) in &list {
                    if a == b {
                        continue;
                    }
                    let CoverDecision::Covers(c) = decide_classified(ca, cb, DecideOptions::default()) else {
                        continue;
                    };
                    n += 1;
                    assert_eq!(c.total_degree, &c.fiberwise_degree * BigInt::from(c.orbifold_degree));
                    let Some(mbar) = &c.intermediate else { continue };
                    let mb = base_invariants(cb).expect("pullbacks only over Seifert bases");
                    let sys = c.partition_system.as_ref().unwrap();
                    assert_eq!(&pullback(&mb, sys).unwrap(), mbar, "{k} {a} -> {b}");
                    assert_eq!(mbar.base_orbifold(), c.cover_orbifold);
                    assert_eq!(mbar.h1_order(), &c.fiberwise_degree * ca.h1_order(), "{k} {a} -> {b}");
                    if let Some(w) = &c.perm_witness {
                        assert!(w.is_valid());
                        assert_eq!(w.degree() as u64, c.orbifold_degree);
                    }
                }
                n
            })
            .collect();
        certified += found.iter().sum::<usize>();
    }
    assert!(certified > 0);
}

#[test]
fn dihedral_sphere_pullbacks_are_not_surgeries() {
    // Certificates may pass through S²(d,d) -> S²(2,2,s), but the pulled
    // back lens space itself is never a surgery on T(2,s).
    for s in [3u64, 5, 7, 9] {
        let k = knot(2, s);
        let dihedral = Orbifold2::from_orders([2, 2, s]).unwrap();
        let list = classified(&k, 40, 6);
        for (a, ca) in &list {
            for (b, cb) in &list {
                if a == b {
                    continue;
                }
                let SurgeryKind::Seifert { base, .. } = &cb.kind else { continue };
                if base != &dihedral {
                    continue;
                }
                let CoverDecision::Covers(c) = decide_classified(ca, cb, DecideOptions::default()) else {
                    continue;
                };
                let orders = c.cover_orbifold.orders();
                let d = orders.first().copied().unwrap_or(1);
                if orders.len() > 2 || orders.iter().any(|&o| o != d) || s % d != 0 {
                    continue;
                }
                let mbar = c.intermediate.expect("pullback certificate");
                let lens = sfs_to_lens(&mbar).unwrap();
                let bound = lens.p().to_u64_digits().1.first().copied().unwrap_or(0) + 2;
                let realized = find_surgery_slopes(&k, &SurgeryTarget::Lens(lens.clone()), bound);
                assert!(realized.is_empty(), "{k} {a} -> {b}: {lens} realized by {realized:?}");
            }
        }
    }
}

#[test]
fn chi_fixture_knots_do_not_cover() {
    let a: SeifertInvariants = "{-1;(3,1),(4,1),(5,2)}".parse().unwrap();
    let b: SeifertInvariants = "{-1;(2,1),(4,1),(9,2)}".parse().unwrap();
    assert_eq!(decide_sfs_cover(&a, &b), CoverDecision::NoCover(Obstruction::ChiMismatch));
}

#[test]
fn fastpath_agrees_with_general_procedure() {
    let mut knots = Vec::new();
    for s in 4..=11u64 {
        for r in 3..s {
            if r.gcd(&s) == 1 && fastpath_admits(&knot(r, s)) {
                knots.push(knot(r, s));
            }
        }
    }
    let mut disagreements = Vec::new();
    let mut pairs = 0usize;
    for k in &knots {
        let list = classified(k, 80, 4);
        pairs += list.len() * list.len();
        let found: Vec<Vec<String>> = list
            .par_iter()
            .map(|(a, ca)| {
                let mut v = Vec::new();
                for (b, cb) in &list {
                    let general = if a == b {
                        Some(BigInt::from(1))
                    } else {
                        decide_classified(ca, cb, DecideOptions::default()).degree().cloned()
                    };
                    let fast = torus_main_fastpath(k, a, b).unwrap();
                    if general != fast {
                        v.push(format!("{k} {a} -> {b}: general {general:?}, closed form {fast:?}"));
                    }
                }
                v
            })
            .collect();
        disagreements.extend(found.into_iter().flatten());
    }
    assert!(
        disagreements.is_empty(),
        "{} of {pairs} pairs disagree, e.g.\n{}",
        disagreements.len(),
        disagreements.iter().take(10).cloned().collect::<Vec<_>>().join("\n")
    );
}
