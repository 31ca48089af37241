//! Branching data of candidate orbifold covers.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::Orbifold2;
use crate::error::{Error, Result};

/// Local degrees of the sheets over one base cone point of order `order`.
/// Each part divides `order`; a part `λ` yields a cover cone point of order
/// `order/λ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BranchData {
    pub order: u64,
    pub parts: Vec<u64>,
}

impl BranchData {
    /// Cone orders upstairs, including 1s for regular preimages.
    pub fn preimage_orders(&self) -> impl Iterator<Item = u64> + '_ {
        self.parts.iter().map(move |&p| self.order / p)
    }
}

/// One partition of the degree per base cone point, in the base's order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionSystem {
    degree: u64,
    points: Vec<BranchData>,
}

impl PartitionSystem {
    pub fn new(degree: u64, points: Vec<BranchData>) -> Result<Self> {
        for bd in &points {
            if bd.parts.iter().sum::<u64>() != degree {
                return Err(Error::MalformedPartition(format!(
                    "parts over order {} do not sum to {degree}",
                    bd.order
                )));
            }
            if bd.parts.iter().any(|&p| p == 0 || bd.order % p != 0) {
                return Err(Error::MalformedPartition(format!(
                    "a part over order {} does not divide it",
                    bd.order
                )));
            }
        }
        let mut points = points;
        for bd in &mut points {
            bd.parts.sort_unstable_by(|a, b| b.cmp(a));
        }
        Ok(PartitionSystem { degree, points })
    }

    /// The identity cover of `base`.
    pub fn trivial(base: &Orbifold2) -> Self {
        PartitionSystem {
            degree: 1,
            points: base.orders().iter().map(|&o| BranchData { order: o, parts: vec![1] }).collect(),
        }
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn points(&self) -> &[BranchData] {
        &self.points
    }

    pub fn base(&self) -> Orbifold2 {
        Orbifold2::from_orders(self.points.iter().map(|bd| bd.order)).expect("positive orders")
    }

    pub fn cover(&self) -> Orbifold2 {
        Orbifold2::from_orders(self.points.iter().flat_map(|bd| bd.preimage_orders()))
            .expect("positive orders")
    }
}

impl fmt::Display for PartitionSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, bd) in self.points.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{}:", bd.order)?;
            for (j, p) in bd.parts.iter().enumerate() {
                if j > 0 {
                    f.write_str("+")?;
                }
                write!(f, "{p}")?;
            }
        }
        Ok(())
    }
}

/// All partition systems of degree `n` from the cone points of `base` onto a
/// cover with cone points `cover`.
///
/// Base cone points are treated as labeled: when two have the same order,
/// swapping their branching gives a separate system. Systems whose degree is
/// incompatible with `χ(cover) = n·χ(base)` are not produced.
pub fn partition_systems(cover: &Orbifold2, base: &Orbifold2, n: u64) -> Vec<PartitionSystem> {
    if n == 0 {
        return Vec::new();
    }
    if cover.chi() != BigRational::from_integer(BigInt::from(n)) * base.chi() {
        return Vec::new();
    }
    let base_pts = base.orders();
    let cover_pts = cover.orders();
    let mut assigned: Vec<Vec<u64>> = vec![Vec::new(); base_pts.len()];
    let mut used = vec![0u64; base_pts.len()];
    let mut out = BTreeSet::new();
    assign(0, cover_pts, base_pts, n, &mut assigned, &mut used, &mut out);
    out.into_iter().collect()
}

fn assign(
    i: usize,
    cover_pts: &[u64],
    base_pts: &[u64],
    n: u64,
    assigned: &mut Vec<Vec<u64>>,
    used: &mut Vec<u64>,
    out: &mut BTreeSet<PartitionSystem>,
) {
    if i == cover_pts.len() {
        let mut points = Vec::with_capacity(base_pts.len());
        for (j, &v) in base_pts.iter().enumerate() {
            let rem = n - used[j];
            if rem % v != 0 {
                return;
            }
            let mut parts = assigned[j].clone();
            parts.extend(std::iter::repeat(v).take((rem / v) as usize));
            points.push(BranchData { order: v, parts });
        }
        out.insert(PartitionSystem::new(n, points).expect("constructed valid"));
        return;
    }
    let c = cover_pts[i];
    for (j, &v) in base_pts.iter().enumerate() {
        if v % c != 0 {
            continue;
        }
        let part = v / c;
        if used[j] + part > n {
            continue;
        }
        used[j] += part;
        assigned[j].push(part);
        assign(i + 1, cover_pts, base_pts, n, assigned, used, out);
        assigned[j].pop();
        used[j] -= part;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(v: &[u64]) -> Orbifold2 {
        Orbifold2::from_orders(v.iter().copied()).unwrap()
    }

    #[test]
    fn degree_four_cover_of_two_three_three() {
        let systems = partition_systems(&o(&[3, 3]), &o(&[2, 3, 3]), 4);
        assert_eq!(systems.len(), 1);
        assert_eq!(systems[0].to_string(), "2:2+2 | 3:3+1 | 3:3+1");
        assert_eq!(systems[0].cover(), o(&[3, 3]));
    }

    #[test]
    fn two_two_over_two_two_four_has_several() {
        let systems = partition_systems(&o(&[2, 2]), &o(&[2, 2, 4]), 4);
        assert!(systems.len() >= 2, "{systems:?}");
        for s in &systems {
            assert_eq!(s.cover(), o(&[2, 2]));
        }
    }

    #[test]
    fn identity_system() {
        let b = o(&[2, 3, 7]);
        assert_eq!(partition_systems(&b, &b, 1), vec![PartitionSystem::trivial(&b)]);
    }

    #[test]
    fn chi_mismatch_gives_nothing() {
        assert!(partition_systems(&o(&[3, 3, 7]), &o(&[2, 3, 7]), 7).is_empty());
        assert_eq!(partition_systems(&o(&[3, 3, 7]), &o(&[2, 3, 7]), 8).len(), 1);
    }

    #[test]
    fn malformed_rejected() {
        assert!(PartitionSystem::new(3, vec![BranchData { order: 2, parts: vec![2, 2] }]).is_err());
        assert!(PartitionSystem::new(3, vec![BranchData { order: 2, parts: vec![3] }]).is_err());
    }
}
