//! Covers between 2-orbifolds with underlying space S².

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

mod partition;
mod perm;
mod table;
mod verify;

pub use partition::{partition_systems, BranchData, PartitionSystem};
pub use perm::{
    find_perm_witness, find_perm_witness_with, perm_cover_oracle, perm_cover_oracle_with,
    OracleCover, PermWitness, Permutation, DEFAULT_BUDGET,
};
pub use table::{classify_cover, table_covers, DegreeFamily, DegreeSet, Regime, Rule, TableHit};
pub use verify::{verify_tables, verify_tables_with, TableReport, TableRow, TARGETED_CASES};

/// S² with cone points. Orders are sorted ascending with order-1 points
/// removed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Orbifold2 {
    orders: Vec<u64>,
}

impl Orbifold2 {
    pub fn from_orders(orders: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut orders: Vec<u64> = orders.into_iter().collect();
        if orders.contains(&0) {
            return Err(Error::InvalidInput("cone order 0".into()));
        }
        orders.retain(|&o| o > 1);
        orders.sort_unstable();
        Ok(Orbifold2 { orders })
    }

    pub fn sphere() -> Self {
        Orbifold2::default()
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn cone_count(&self) -> usize {
        self.orders.len()
    }

    /// Orders padded at the front with 1s up to length `k`.
    pub fn padded(&self, k: usize) -> Vec<u64> {
        let mut v = vec![1; k.saturating_sub(self.orders.len())];
        v.extend_from_slice(&self.orders);
        v
    }

    pub fn chi(&self) -> BigRational {
        chi_orb(self)
    }
}

fn hurwitz_small(cover: &Orbifold2, base: &Orbifold2) -> Option<Option<HurwitzDegree>> {
    let (cc, cb) = (chi_small(cover)?, chi_small(base)?);
    Some(match (cc.0 == 0, cb.0 == 0) {
        (true, true) => Some(HurwitzDegree::Unconstrained),
        (false, false) => {
            let r = Ratio::new(cc.0.checked_mul(cb.1)?, cc.1.checked_mul(cb.0)?);
            (r > Ratio::from_integer(0)).then(|| {
                HurwitzDegree::Exactly(BigRational::new((*r.numer()).into(), (*r.denom()).into()))
            })
        }
        _ => None,
    })
}

/// χ as `(numerator, lcm)` in machine integers, when nothing overflows.
fn chi_small(o: &Orbifold2) -> Option<(i128, i128)> {
    let mut l: i128 = 1;
    for &m in &o.orders {
        let m = i128::from(m);
        l = l.checked_mul(m / l.gcd(&m))?;
    }
    let mut n = l.checked_mul(2)?;
    for &m in &o.orders {
        n -= l - l / i128::from(m);
    }
    Some((n, l))
}

/// `2 - Σ (1 - 1/m)`.
pub fn chi_orb(o: &Orbifold2) -> BigRational {
    let mut chi = BigRational::from_integer(BigInt::from(2));
    for &m in &o.orders {
        chi -= BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(m));
    }
    chi
}

/// What Euler characteristics say about the degree of a cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HurwitzDegree {
    /// The only possible degree (not necessarily an integer).
    Exactly(BigRational),
    /// Both orbifolds are Euclidean; any degree is possible a priori.
    Unconstrained,
}

/// `χ(cover)/χ(base)`, or `None` when no cover can exist.
pub fn riemann_hurwitz_degree(cover: &Orbifold2, base: &Orbifold2) -> Option<HurwitzDegree> {
    if let Some(d) = hurwitz_small(cover, base) {
        return d;
    }
    let (cc, cb) = (cover.chi(), base.chi());
    match (cc.is_zero(), cb.is_zero()) {
        (true, true) => Some(HurwitzDegree::Unconstrained),
        (false, false) => {
            let d = cc / cb;
            d.is_positive().then_some(HurwitzDegree::Exactly(d))
        }
        _ => None,
    }
}

impl fmt::Display for Orbifold2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("S2(")?;
        for (i, o) in self.orders.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{o}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for Orbifold2 {
    type Err = Error;

    /// Accepts `a,b,c`, `(a,b,c)` or `S2(a,b,c)`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = compact.strip_prefix("S2").unwrap_or(&compact);
        let body = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')).unwrap_or(body);
        if body.is_empty() {
            return Ok(Orbifold2::sphere());
        }
        let orders = body
            .split(',')
            .map(|t| t.parse::<u64>().map_err(|_| Error::Parse(format!("bad orbifold `{s}`"))))
            .collect::<Result<Vec<_>>>()?;
        Orbifold2::from_orders(orders)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(v: &[u64]) -> Orbifold2 {
        Orbifold2::from_orders(v.iter().copied()).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn ones_are_dropped_and_sorted() {
        assert_eq!(o(&[7, 1, 3, 2]).orders(), &[2, 3, 7]);
        assert_eq!(o(&[3, 3]).padded(3), vec![1, 3, 3]);
        assert!(Orbifold2::from_orders([0]).is_err());
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(chi_orb(&o(&[2, 3, 7])), q(-1, 42));
        assert_eq!(chi_orb(&o(&[3, 3, 3])), q(0, 1));
        assert_eq!(chi_orb(&Orbifold2::sphere()), q(2, 1));
    }

    #[test]
    fn hurwitz_degrees() {
        assert_eq!(
            riemann_hurwitz_degree(&o(&[3, 3, 7]), &o(&[2, 3, 7])),
            Some(HurwitzDegree::Exactly(q(8, 1)))
        );
        assert_eq!(
            riemann_hurwitz_degree(&o(&[3, 3, 3]), &o(&[2, 3, 6])),
            Some(HurwitzDegree::Unconstrained)
        );
        assert_eq!(riemann_hurwitz_degree(&o(&[2, 3, 7]), &o(&[3, 3, 3])), None);
        assert_eq!(riemann_hurwitz_degree(&o(&[2, 3, 7]), &o(&[2, 3, 5])), None);
    }

    #[test]
    fn parse_display() {
        assert_eq!("2,3,7".parse::<Orbifold2>().unwrap(), o(&[2, 3, 7]));
        assert_eq!("S2(1,3,3)".parse::<Orbifold2>().unwrap().to_string(), "S2(3,3)");
        assert_eq!("S2()".parse::<Orbifold2>().unwrap(), Orbifold2::sphere());
    }
}
