//! Closed-form classification of covers `S²(a,b,c) → S²(a',b',c')`.
//!
//! Each row is a pattern `(cover) → (base)` with a degree, matched against
//! every reordering of the base padded to three cone points. Parametrized
//! rows are instantiated for all positive parameters; whether an instance
//! falls in the Euler-characteristic regime its row was stated for is kept
//! as metadata so that reports can point out such instances.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};

use super::Orbifold2;
use crate::forms::{is_loeschian, is_two_square};

/// Sign of the orbifold Euler characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regime {
    Hyperbolic,
    Euclidean,
    Spherical,
    /// The identity cover, valid everywhere.
    Any,
}

impl Regime {
    pub fn of(o: &Orbifold2) -> Regime {
        let chi = o.chi();
        if chi.is_zero() {
            Regime::Euclidean
        } else if chi.is_negative() {
            Regime::Hyperbolic
        } else {
            Regime::Spherical
        }
    }
}

type Instances = fn([u64; 3]) -> Vec<([u64; 3], u64)>;

/// One row of the cover tables.
#[derive(Clone, Copy)]
pub struct Rule {
    pub id: u8,
    pub cover: &'static str,
    pub base: &'static str,
    pub degree: &'static str,
    pub regime: Regime,
    /// False for spherical rows missing from the condensed summary table
    /// (they appear only in the full spherical list).
    pub in_summary: bool,
    instances: Instances,
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rule({self})")
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{} @{}", self.cover, self.base, self.degree)
    }
}

impl PartialEq for Rule {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}
impl Eq for Rule {}
impl PartialOrd for Rule {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Rule {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.id.cmp(&other.id)
    }
}

fn exact(base: [u64; 3], want: [u64; 3], cover: [u64; 3], n: u64) -> Vec<([u64; 3], u64)> {
    if base == want {
        vec![(cover, n)]
    } else {
        Vec::new()
    }
}

fn divisors(v: u64) -> impl Iterator<Item = u64> {
    (1..=v).filter(move |d| v % d == 0)
}

macro_rules! rule {
    ($id:expr, $c:expr, $b:expr, $d:expr, $reg:ident, $summary:expr, $f:expr) => {
        Rule {
            id: $id,
            cover: $c,
            base: $b,
            degree: $d,
            regime: Regime::$reg,
            in_summary: $summary,
            instances: $f,
        }
    };
}

/// All finite rows. Each closure receives one ordering `[t0,t1,t2]` of the
/// padded base.
pub static RULES: &[Rule] = &[
    rule!(0, "(a,b,c)", "(a,b,c)", "1", Any, true, |t| vec![(t, 1)]),
    // Hyperbolic families.
    rule!(1, "(x,x,y)", "(2,x,2y)", "2", Hyperbolic, true, |[a, b, c]| {
        if a == 2 && c % 2 == 0 { vec![([b, b, c / 2], 2)] } else { vec![] }
    }),
    rule!(2, "(2,x,2x)", "(2,3,2x)", "3", Hyperbolic, true, |[a, b, c]| {
        if a == 2 && b == 3 && c % 2 == 0 { vec![([2, c / 2, c], 3)] } else { vec![] }
    }),
    rule!(3, "(x,x,x)", "(3,3,x)", "3", Hyperbolic, true, |[a, b, c]| {
        if a == 3 && b == 3 { vec![([c, c, c], 3)] } else { vec![] }
    }),
    rule!(4, "(3,x,3x)", "(2,3,3x)", "4", Hyperbolic, true, |[a, b, c]| {
        if a == 2 && b == 3 && c % 3 == 0 { vec![([3, c / 3, c], 4)] } else { vec![] }
    }),
    rule!(5, "(x,2x,2x)", "(2,4,2x)", "4", Hyperbolic, true, |[a, b, c]| {
        if a == 2 && b == 4 && c % 2 == 0 { vec![([c / 2, c, c], 4)] } else { vec![] }
    }),
    rule!(6, "(x,x,x)", "(2,3,2x)", "6", Hyperbolic, true, |[a, b, c]| {
        if a == 2 && b == 3 && c % 2 == 0 { vec![([c / 2, c / 2, c / 2], 6)] } else { vec![] }
    }),
    rule!(7, "(x,4x,4x)", "(2,3,4x)", "6", Hyperbolic, true, |[a, b, c]| {
        if a == 2 && b == 3 && c % 4 == 0 { vec![([c / 4, c, c], 6)] } else { vec![] }
    }),
    rule!(8, "(4,4,5)", "(2,4,5)", "6", Hyperbolic, true, |t| exact(t, [2, 4, 5], [4, 4, 5], 6)),
    rule!(9, "(3,3,7)", "(2,3,7)", "8", Hyperbolic, true, |t| exact(t, [2, 3, 7], [3, 3, 7], 8)),
    rule!(10, "(2,7,7)", "(2,3,7)", "9", Hyperbolic, true, |t| exact(t, [2, 3, 7], [2, 7, 7], 9)),
    rule!(11, "(3,8,8)", "(2,3,8)", "10", Hyperbolic, true, |t| exact(t, [2, 3, 8], [3, 8, 8], 10)),
    rule!(12, "(4,8,8)", "(2,3,8)", "12", Hyperbolic, true, |t| exact(t, [2, 3, 8], [4, 8, 8], 12)),
    rule!(13, "(9,9,9)", "(2,3,9)", "12", Hyperbolic, true, |t| exact(t, [2, 3, 9], [9, 9, 9], 12)),
    // Spherical rows.
    rule!(20, "(1,x,y)", "(1,nx,ny)", "n", Spherical, true, |[a, b, c]| {
        if a != 1 {
            return vec![];
        }
        divisors(num_integer::gcd(b, c)).map(|n| ([1, b / n, c / n], n)).collect()
    }),
    rule!(21, "(1,d,d)", "(2,2,x)", "2x/d, d|x", Spherical, true, |[a, b, c]| {
        if a == 2 && b == 2 { divisors(c).map(|d| ([1, d, d], 2 * c / d)).collect() } else { vec![] }
    }),
    rule!(22, "(2,2,d)", "(2,2,x)", "x/d, d|x", Spherical, true, |[a, b, c]| {
        if a == 2 && b == 2 { divisors(c).map(|d| ([2, 2, d], c / d)).collect() } else { vec![] }
    }),
    rule!(23, "(1,d,d)", "(2,3,3)", "12/d, d in {1,2,3}", Spherical, true, |t| {
        if t == [2, 3, 3] { [1, 2, 3].iter().map(|&d| ([1, d, d], 12 / d)).collect() } else { vec![] }
    }),
    rule!(24, "(2,2,2)", "(2,3,3)", "3", Spherical, false, |t| exact(t, [2, 3, 3], [2, 2, 2], 3)),
    rule!(25, "(1,d,d)", "(2,3,4)", "24/d, d in {1,2,3,4}", Spherical, true, |t| {
        if t == [2, 3, 4] { [1, 2, 3, 4].iter().map(|&d| ([1, d, d], 24 / d)).collect() } else { vec![] }
    }),
    rule!(26, "(1,d,d)", "(2,3,5)", "60/d, d in {1,2,3,5}", Spherical, true, |t| {
        if t == [2, 3, 5] { [1, 2, 3, 5].iter().map(|&d| ([1, d, d], 60 / d)).collect() } else { vec![] }
    }),
    rule!(27, "(2,3,3)", "(2,3,4)", "2", Spherical, true, |t| exact(t, [2, 3, 4], [2, 3, 3], 2)),
    rule!(28, "(2,2,4)", "(2,3,4)", "3", Spherical, false, |t| exact(t, [2, 3, 4], [2, 2, 4], 3)),
    rule!(29, "(2,2,3)", "(2,3,4)", "4", Spherical, true, |t| exact(t, [2, 3, 4], [2, 2, 3], 4)),
    rule!(30, "(2,2,2)", "(2,3,4)", "6", Spherical, false, |t| exact(t, [2, 3, 4], [2, 2, 2], 6)),
    rule!(31, "(2,3,3)", "(2,3,5)", "5", Spherical, true, |t| exact(t, [2, 3, 5], [2, 3, 3], 5)),
    rule!(32, "(2,2,5)", "(2,3,5)", "6", Spherical, true, |t| exact(t, [2, 3, 5], [2, 2, 5], 6)),
    rule!(33, "(2,2,3)", "(2,3,5)", "10", Spherical, true, |t| exact(t, [2, 3, 5], [2, 2, 3], 10)),
    rule!(34, "(2,2,2)", "(2,3,5)", "15", Spherical, false, |t| exact(t, [2, 3, 5], [2, 2, 2], 15)),
];

/// The Euclidean rows, whose degree sets are infinite.
pub static EUCLIDEAN_RULES: &[Rule] = &[
    rule!(40, "(2,3,6)", "(2,3,6)", "x^2+xy+y^2", Euclidean, true, |_| vec![]),
    rule!(41, "(2,4,4)", "(2,4,4)", "x^2+y^2", Euclidean, true, |_| vec![]),
    rule!(42, "(3,3,3)", "(3,3,3)", "x^2+xy+y^2", Euclidean, true, |_| vec![]),
    rule!(43, "(3,3,3)", "(2,3,6)", "2(x^2+xy+y^2)", Euclidean, true, |_| vec![]),
];

/// An infinite degree family `{factor·k : k represented by the form}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DegreeFamily {
    Loeschian { factor: u64 },
    TwoSquare { factor: u64 },
}

impl DegreeFamily {
    pub fn contains(&self, n: u64) -> bool {
        match *self {
            DegreeFamily::Loeschian { factor } => n % factor == 0 && is_loeschian(n / factor),
            DegreeFamily::TwoSquare { factor } => n % factor == 0 && is_two_square(n / factor),
        }
    }
}

impl fmt::Display for DegreeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (factor, form) = match self {
            DegreeFamily::Loeschian { factor } => (factor, "x^2+xy+y^2"),
            DegreeFamily::TwoSquare { factor } => (factor, "x^2+y^2"),
        };
        if *factor == 1 {
            write!(f, "{form}")
        } else {
            write!(f, "{factor}({form})")
        }
    }
}

/// A possibly infinite set of degrees.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DegreeSet {
    pub finite: BTreeSet<u64>,
    pub families: BTreeSet<DegreeFamily>,
}

impl DegreeSet {
    pub fn contains(&self, n: u64) -> bool {
        self.finite.contains(&n) || self.families.iter().any(|f| f.contains(n))
    }

    pub fn is_empty(&self) -> bool {
        self.finite.is_empty() && self.families.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.families.is_empty()
    }

    /// Members up to `max`, ascending.
    pub fn up_to(&self, max: u64) -> Vec<u64> {
        (1..=max).filter(|&n| self.contains(n)).collect()
    }
}

impl fmt::Display for DegreeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut items: Vec<String> = self.finite.iter().map(|n| n.to_string()).collect();
        items.extend(self.families.iter().map(|fam| format!("n = {fam}")));
        write!(f, "{{{}}}", items.join(", "))
    }
}

/// One instantiated table row.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TableHit {
    pub cover: Orbifold2,
    pub degree: u64,
    pub rule: &'static Rule,
}

impl TableHit {
    /// Whether the instance lies in the regime its row was stated for.
    pub fn in_stated_regime(&self) -> bool {
        self.rule.regime == Regime::Any || self.rule.regime == Regime::of(&self.cover)
    }
}

fn orderings(base: &Orbifold2) -> BTreeSet<[u64; 3]> {
    let p = base.padded(3);
    let (a, b, c) = (p[0], p[1], p[2]);
    [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]].into_iter().collect()
}

fn orb(t: [u64; 3]) -> Orbifold2 {
    Orbifold2::from_orders(t).expect("positive orders")
}

/// Every finite-row instance over `base`, deduplicated.
fn finite_hits(base: &Orbifold2) -> BTreeSet<TableHit> {
    let mut hits = BTreeSet::new();
    if base.cone_count() > 3 {
        return hits;
    }
    for t in orderings(base) {
        for rule in RULES {
            for (cover, degree) in (rule.instances)(t) {
                hits.insert(TableHit { cover: orb(cover), degree, rule });
            }
        }
    }
    hits
}

fn euclidean_families(cover: &Orbifold2, base: &Orbifold2) -> Vec<(&'static Rule, DegreeFamily)> {
    let (c, b) = (cover.padded(3), base.padded(3));
    let mut out = Vec::new();
    match (&c[..], &b[..]) {
        ([2, 3, 6], [2, 3, 6]) => out.push((&EUCLIDEAN_RULES[0], DegreeFamily::Loeschian { factor: 1 })),
        ([2, 4, 4], [2, 4, 4]) => out.push((&EUCLIDEAN_RULES[1], DegreeFamily::TwoSquare { factor: 1 })),
        ([3, 3, 3], [3, 3, 3]) => out.push((&EUCLIDEAN_RULES[2], DegreeFamily::Loeschian { factor: 1 })),
        ([3, 3, 3], [2, 3, 6]) => out.push((&EUCLIDEAN_RULES[3], DegreeFamily::Loeschian { factor: 2 })),
        _ => {}
    }
    out
}

/// Degrees in which `cover` covers `base` according to the tables.
pub fn classify_cover(cover: &Orbifold2, base: &Orbifold2) -> DegreeSet {
    let mut set = DegreeSet::default();
    if cover.cone_count() > 3 || base.cone_count() > 3 {
        return set;
    }
    for hit in finite_hits(base) {
        if &hit.cover == cover {
            set.finite.insert(hit.degree);
        }
    }
    for (_, fam) in euclidean_families(cover, base) {
        set.families.insert(fam);
    }
    // Finite entries already implied by a family add nothing.
    let fams = set.families.clone();
    set.finite.retain(|&n| !fams.iter().any(|f| f.contains(n)));
    set
}

/// Covers of `base` in degree `n` predicted by the tables, each with the
/// rows that produce it.
pub fn table_covers(base: &Orbifold2, n: u64) -> BTreeMap<Orbifold2, Vec<TableHit>> {
    let mut out: BTreeMap<Orbifold2, Vec<TableHit>> = BTreeMap::new();
    for hit in finite_hits(base) {
        if hit.degree == n {
            out.entry(hit.cover.clone()).or_default().push(hit);
        }
    }
    let euclid: [Orbifold2; 3] = [orb([2, 3, 6]), orb([2, 4, 4]), orb([3, 3, 3])];
    for cover in euclid {
        for (rule, fam) in euclidean_families(&cover, base) {
            if fam.contains(n) {
                out.entry(cover.clone()).or_default().push(TableHit { cover: cover.clone(), degree: n, rule });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(v: &[u64]) -> Orbifold2 {
        Orbifold2::from_orders(v.iter().copied()).unwrap()
    }

    fn finite(v: &[u64]) -> BTreeSet<u64> {
        v.iter().copied().collect()
    }

    #[test]
    fn sporadic_rows() {
        assert_eq!(classify_cover(&o(&[9, 9, 9]), &o(&[2, 3, 9])).finite, finite(&[12]));
        assert_eq!(classify_cover(&o(&[2, 3, 3]), &o(&[2, 3, 5])).finite, finite(&[5]));
        assert_eq!(classify_cover(&o(&[2, 2, 3]), &o(&[2, 3, 5])).finite, finite(&[10]));
        assert_eq!(classify_cover(&o(&[3, 3, 7]), &o(&[2, 3, 7])).finite, finite(&[8]));
    }

    #[test]
    fn euclidean_families_symbolic() {
        let s = classify_cover(&o(&[3, 3, 3]), &o(&[2, 3, 6]));
        assert!(s.contains(14));
        assert!(!s.contains(7));
        assert!(!s.is_finite());
        assert_eq!(s.to_string(), "{n = 2(x^2+xy+y^2)}");
        let t = classify_cover(&o(&[2, 4, 4]), &o(&[2, 4, 4]));
        assert_eq!(t.up_to(9), vec![1, 2, 4, 5, 8, 9]);
    }

    #[test]
    fn no_cover_is_empty() {
        assert!(classify_cover(&o(&[2, 3, 7]), &o(&[3, 3, 3])).is_empty());
        assert!(classify_cover(&o(&[2, 2, 2, 2]), &o(&[2, 4, 4])).is_empty());
    }

    #[test]
    fn identity_always_present() {
        for b in [o(&[2, 3, 7]), o(&[5]), Orbifold2::sphere(), o(&[2, 2, 9])] {
            assert!(classify_cover(&b, &b).contains(1));
        }
    }

    #[test]
    fn lens_type_covers() {
        assert_eq!(classify_cover(&o(&[3, 3]), &o(&[2, 3, 3])).finite, finite(&[4]));
        assert_eq!(classify_cover(&Orbifold2::sphere(), &o(&[2, 3, 5])).finite, finite(&[60]));
    }

    #[test]
    fn table_covers_lists_rows() {
        let covers = table_covers(&o(&[2, 3, 7]), 8);
        assert!(covers.contains_key(&o(&[3, 3, 7])));
        let covers = table_covers(&o(&[2, 3, 6]), 7);
        assert!(covers.contains_key(&o(&[2, 3, 6])));
        assert!(!covers.contains_key(&o(&[3, 3, 3])));
        let covers = table_covers(&o(&[2, 3, 6]), 14);
        assert!(covers.contains_key(&o(&[3, 3, 3])));
    }
}
