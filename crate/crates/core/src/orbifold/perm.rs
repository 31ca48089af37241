//! Existence of orbifold covers via permutation triples.
//!
//! A degree-`n` branched cover of S²(a,b,c) by a connected orbifold is the
//! same as a triple of permutations `σ_a σ_b σ_c = 1` generating a transitive
//! group, with the cycle lengths of each `σ_v` dividing `v`. Cycle lengths
//! give the local degrees, and the cover has genus 0 exactly when the total
//! number of cycles is `n + 2`.

use std::collections::BTreeMap;
use std::fmt;

use super::Orbifold2;
use crate::error::{Error, Result};
use crate::par::{map_collect, Exec};

/// Default cap on the degree the oracle will enumerate.
pub const DEFAULT_BUDGET: u64 = 12;

/// A permutation of `0..n`, stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u8>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u8).collect())
    }

    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in images {
            if i >= n || seen[i] || n > u8::MAX as usize {
                return Err(Error::InvalidInput(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Permutation(images.iter().map(|&i| i as u8).collect()))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// Cycle lengths, longest first.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.0.len()];
        let mut lens = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] as usize;
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation on `1..=n`, fixed points omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut any = false;
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            any = true;
            f.write_str("(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    f.write_str(" ")?;
                }
                write!(f, "{}", x + 1)?;
                first = false;
                x = self.0[x] as usize;
            }
            f.write_str(")")?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

/// Monodromy of a branched cover of S²(v₀,v₁,v₂): `σ₀σ₁σ₂ = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PermWitness {
    base: [u64; 3],
    sigmas: [Permutation; 3],
}

impl PermWitness {
    pub fn new(base: [u64; 3], sigmas: [Permutation; 3]) -> Self {
        PermWitness { base, sigmas }
    }

    pub fn identity(base: &Orbifold2) -> Self {
        let p = base.padded(3);
        PermWitness {
            base: [p[0], p[1], p[2]],
            sigmas: [Permutation::identity(1), Permutation::identity(1), Permutation::identity(1)],
        }
    }

    pub fn degree(&self) -> usize {
        self.sigmas[0].degree()
    }

    pub fn base_orders(&self) -> [u64; 3] {
        self.base
    }

    pub fn sigmas(&self) -> &[Permutation; 3] {
        &self.sigmas
    }

    /// Product relation, divisibility of cycle lengths and transitivity.
    pub fn is_valid(&self) -> bool {
        let n = self.degree();
        if self.sigmas.iter().any(|s| s.degree() != n) {
            return false;
        }
        let prod = self.sigmas[0].compose(&self.sigmas[1]).compose(&self.sigmas[2]);
        if !prod.is_identity() {
            return false;
        }
        for (s, &v) in self.sigmas.iter().zip(&self.base) {
            if s.cycle_lengths().iter().any(|&l| v % l as u64 != 0) {
                return false;
            }
        }
        transitive(n, &self.sigmas[0].0, &self.sigmas[1].0)
    }

    /// Genus of the underlying surface of the cover.
    pub fn genus(&self) -> i64 {
        let n = self.degree() as i64;
        let cycles: i64 = self.sigmas.iter().map(|s| s.cycle_lengths().len() as i64).sum();
        (n + 2 - cycles) / 2
    }

    /// Cone points upstairs: `v/ℓ` for each cycle of length `ℓ` of `σ_v`.
    pub fn cover(&self) -> Orbifold2 {
        Orbifold2::from_orders(
            self.sigmas
                .iter()
                .zip(&self.base)
                .flat_map(|(s, &v)| s.cycle_lengths().into_iter().map(move |l| v / l as u64)),
        )
        .expect("positive orders")
    }
}

impl fmt::Display for PermWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (s, v)) in self.sigmas.iter().zip(&self.base).enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "s{v}={s}")?;
        }
        Ok(())
    }
}

/// A cover type found by the oracle, with one witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleCover {
    pub cover: Orbifold2,
    pub witness: PermWitness,
}

impl OracleCover {
    /// Whether the closed-form tables speak about this cover at all.
    pub fn in_classification(&self) -> bool {
        self.cover.cone_count() <= 3
    }
}

/// Every genus-0 connected degree-`n` cover of `base`, one witness per cover
/// orbifold, sorted by cover.
pub fn perm_cover_oracle(base: &Orbifold2, n: u64, budget: u64) -> Result<Vec<OracleCover>> {
    perm_cover_oracle_with(base, n, budget, Exec::default())
}

pub fn perm_cover_oracle_with(
    base: &Orbifold2,
    n: u64,
    budget: u64,
    exec: Exec,
) -> Result<Vec<OracleCover>> {
    let search = Search::new(base, n, budget)?;
    let found = search.run(exec, None);
    Ok(found.into_iter().map(|(cover, witness)| OracleCover { cover, witness }).collect())
}

/// A witness that `cover → base` exists in degree `n`, if it does.
pub fn find_perm_witness(
    base: &Orbifold2,
    cover: &Orbifold2,
    n: u64,
    budget: u64,
) -> Result<Option<PermWitness>> {
    find_perm_witness_with(base, cover, n, budget, Exec::default())
}

pub fn find_perm_witness_with(
    base: &Orbifold2,
    cover: &Orbifold2,
    n: u64,
    budget: u64,
    exec: Exec,
) -> Result<Option<PermWitness>> {
    let search = Search::new(base, n, budget)?;
    Ok(search.run(exec, Some(cover)).remove(cover))
}

fn transitive(n: usize, a: &[u8], b: &[u8]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = n;
    for perm in [a, b] {
        for (x, &y) in perm.iter().enumerate() {
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y as usize));
            if rx != ry {
                parent[rx] = ry;
                components -= 1;
            }
        }
    }
    components == 1
}

fn divisors(v: u64) -> Vec<usize> {
    (1..=v).filter(|d| v % d == 0).map(|d| d as usize).collect()
}

/// Partitions of `n` into parts from `allowed`, parts non-increasing.
fn divisor_partitions(n: usize, allowed: &[usize]) -> Vec<Vec<usize>> {
    fn go(rem: usize, max: usize, allowed: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for &d in allowed.iter().rev() {
            if d <= max && d <= rem {
                cur.push(d);
                go(rem - d, d, allowed, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, n, allowed, &mut Vec::new(), &mut out);
    out
}

/// Number of permutations of `n` points whose cycle lengths divide `v`
/// (as a float; only used to pick the cheapest enumeration).
fn class_size(n: usize, v: u64) -> f64 {
    let divs = divisors(v);
    let mut a = vec![0f64; n + 1];
    a[0] = 1.0;
    for m in 1..=n {
        let mut total = 0.0;
        for &l in &divs {
            if l > m {
                break;
            }
            // (m-1)!/(m-l)! ways to close the cycle through a fixed point.
            let ways: f64 = ((m - l + 1)..m).map(|x| x as f64).product();
            total += ways * a[m - l];
        }
        a[m] = total;
    }
    a[n]
}

struct Search {
    n: usize,
    base: [u64; 3],
    /// Index enumerated exhaustively.
    e: usize,
    /// Index fixed to one representative per cycle type.
    f: usize,
    /// Index solved for.
    t: usize,
}

impl Search {
    fn new(base: &Orbifold2, n: u64, budget: u64) -> Result<Self> {
        if base.cone_count() > 3 {
            return Err(Error::InvalidInput(format!(
                "the oracle handles at most three cone points, got {base}"
            )));
        }
        if n == 0 {
            return Err(Error::InvalidInput("degree must be positive".into()));
        }
        if n > budget || n > u8::MAX as u64 {
            return Err(Error::BudgetExceeded { degree: n, budget });
        }
        let p = base.padded(3);
        let base = [p[0], p[1], p[2]];
        let n = n as usize;
        let sizes: Vec<f64> = base.iter().map(|&v| class_size(n, v)).collect();
        let types: Vec<f64> =
            base.iter().map(|&v| divisor_partitions(n, &divisors(v)).len() as f64).collect();
        let mut best = (f64::INFINITY, 0, 1);
        for e in 0..3 {
            for f in 0..3 {
                if e != f && sizes[e] * types[f] < best.0 {
                    best = (sizes[e] * types[f], e, f);
                }
            }
        }
        let (_, e, f) = best;
        let t = 3 - e - f;
        Ok(Search { n, base, e, f, t })
    }

    /// Runs the enumeration; with a target, stops at the first witness for it.
    fn run(&self, exec: Exec, target: Option<&Orbifold2>) -> BTreeMap<Orbifold2, PermWitness> {
        let n = self.n;
        let f_reps: Vec<Vec<u8>> = divisor_partitions(n, &divisors(self.base[self.f]))
            .into_iter()
            .map(|parts| {
                let mut img = vec![0u8; n];
                let mut start = 0;
                for l in parts {
                    for i in 0..l {
                        img[start + i] = (start + (i + 1) % l) as u8;
                    }
                    start += l;
                }
                img
            })
            .collect();
        // Split the work by the cycle of σ_e through 0: its length and, when
        // longer than 1, the image of 0.
        let mut tasks = Vec::new();
        for (ti, _) in f_reps.iter().enumerate() {
            for l in divisors(self.base[self.e]) {
                if l > n {
                    continue;
                }
                if l == 1 {
                    tasks.push((ti, 1, 0));
                } else {
                    for second in 1..n {
                        tasks.push((ti, l, second));
                    }
                }
            }
        }
        // Each task stops at its own first hit on a target, and tasks are
        // merged in order, so the reported witness does not depend on scheduling.
        let results = map_collect(exec, tasks, |(ti, l, second)| {
            let mut w = Worker::new(self, &f_reps[ti], target);
            w.start(l, second);
            w.found
        });
        let mut merged = BTreeMap::new();
        for found in results {
            for (k, v) in found {
                merged.entry(k).or_insert(v);
            }
        }
        merged
    }
}

struct Worker<'a> {
    s: &'a Search,
    f_img: &'a [u8],
    f_cycles: usize,
    target: Option<&'a Orbifold2>,
    stop: bool,
    e_img: Vec<u8>,
    used: Vec<bool>,
    e_divs: Vec<usize>,
    t_img: Vec<u8>,
    seen: Vec<bool>,
    found: BTreeMap<Orbifold2, PermWitness>,
}

impl<'a> Worker<'a> {
    fn new(s: &'a Search, f_img: &'a [u8], target: Option<&'a Orbifold2>) -> Self {
        let f_cycles = Permutation(f_img.to_vec()).cycle_lengths().len();
        Worker {
            s,
            f_img,
            f_cycles,
            target,
            stop: false,
            e_img: vec![0; s.n],
            used: vec![false; s.n],
            e_divs: divisors(s.base[s.e]),
            t_img: vec![0; s.n],
            seen: vec![false; s.n],
            found: BTreeMap::new(),
        }
    }

    fn start(&mut self, l: usize, second: usize) {
        self.used[0] = true;
        if l == 1 {
            self.e_img[0] = 0;
            self.fill(1);
        } else {
            self.used[second] = true;
            self.e_img[0] = second as u8;
            self.grow(0, second, l - 2, 1);
            self.used[second] = false;
        }
        self.used[0] = false;
    }

    /// Extends a cycle that starts at `head` and currently ends at `last`,
    /// with `left` more elements to place.
    fn grow(&mut self, head: usize, last: usize, left: usize, cycles: usize) {
        if self.stop {
            return;
        }
        if left == 0 {
            self.e_img[last] = head as u8;
            self.fill(cycles);
            return;
        }
        for next in (head + 1)..self.s.n {
            if self.used[next] {
                continue;
            }
            self.used[next] = true;
            self.e_img[last] = next as u8;
            self.grow(head, next, left - 1, cycles);
            self.used[next] = false;
        }
    }

    /// Starts a new cycle at the smallest unused point, or checks the
    /// completed permutation.
    fn fill(&mut self, cycles: usize) {
        let Some(head) = self.used.iter().position(|&u| !u) else {
            self.check(cycles);
            return;
        };
        let remaining = self.used.iter().filter(|&&u| !u).count();
        self.used[head] = true;
        for i in 0..self.e_divs.len() {
            let l = self.e_divs[i];
            if l > remaining {
                break;
            }
            if l == 1 {
                self.e_img[head] = head as u8;
                self.fill(cycles + 1);
            } else {
                self.grow(head, head, l - 1, cycles + 1);
            }
        }
        self.used[head] = false;
    }

    fn check(&mut self, e_cycles: usize) {
        let s = self.s;
        let n = s.n;
        // σ₀σ₁σ₂ = 1 is invariant under cyclic rotation, so σ_t is the inverse
        // of the product of the other two taken in cyclic order after t.
        let t_first = (s.t + 1) % 3 == s.e;
        for x in 0..n {
            let w = if t_first {
                self.e_img[self.f_img[x] as usize]
            } else {
                self.f_img[self.e_img[x] as usize]
            };
            self.t_img[w as usize] = x as u8;
        }
        let vt = s.base[s.t];
        let mut t_cycles = 0;
        self.seen.iter_mut().for_each(|b| *b = false);
        for start in 0..n {
            if self.seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !self.seen[x] {
                self.seen[x] = true;
                x = self.t_img[x] as usize;
                len += 1;
            }
            if vt % len != 0 {
                return;
            }
            t_cycles += 1;
        }
        if e_cycles + self.f_cycles + t_cycles != n + 2 {
            return;
        }
        if !transitive(n, &self.e_img, self.f_img) {
            return;
        }
        let mut sigmas = [Permutation(Vec::new()), Permutation(Vec::new()), Permutation(Vec::new())];
        sigmas[s.e] = Permutation(self.e_img.clone());
        sigmas[s.f] = Permutation(self.f_img.to_vec());
        sigmas[s.t] = Permutation(self.t_img.clone());
        let witness = PermWitness { base: s.base, sigmas };
        let cover = witness.cover();
        if let Some(target) = self.target {
            if &cover != target {
                return;
            }
            self.stop = true;
        }
        self.found.entry(cover).or_insert(witness);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(v: &[u64]) -> Orbifold2 {
        Orbifold2::from_orders(v.iter().copied()).unwrap()
    }

    fn covers(base: &[u64], n: u64) -> Vec<Orbifold2> {
        perm_cover_oracle(&o(base), n, DEFAULT_BUDGET)
            .unwrap()
            .into_iter()
            .map(|c| c.cover)
            .collect()
    }

    #[test]
    fn permutation_basics() {
        let a = Permutation::from_images(&[1, 2, 0]).unwrap();
        assert_eq!(a.compose(&a.inverse()), Permutation::identity(3));
        assert_eq!(a.cycle_lengths(), vec![3]);
        assert_eq!(a.to_string(), "(1 2 3)");
        assert_eq!(Permutation::identity(2).to_string(), "()");
        assert!(Permutation::from_images(&[0, 0]).is_err());
    }

    #[test]
    fn class_sizes_match_brute_force() {
        // Involutions in S_5: 1 + 10 + 15 = 26.
        assert_eq!(class_size(5, 2), 26.0);
        assert_eq!(class_size(4, 12), 24.0);
        assert_eq!(class_size(3, 1), 1.0);
    }

    #[test]
    fn degree_one_is_identity() {
        let found = perm_cover_oracle(&o(&[2, 3, 7]), 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].cover, o(&[2, 3, 7]));
        assert!(found[0].witness.is_valid());
    }

    #[test]
    fn sporadic_degree_eight() {
        assert!(covers(&[2, 3, 7], 8).contains(&o(&[3, 3, 7])));
    }

    #[test]
    fn no_degree_three_self_cover_of_two_four_four() {
        assert!(!covers(&[2, 4, 4], 3).contains(&o(&[2, 4, 4])));
        assert!(covers(&[2, 4, 4], 2).contains(&o(&[2, 4, 4])));
    }

    #[test]
    fn witnesses_are_valid_and_genus_zero() {
        for c in perm_cover_oracle(&o(&[2, 3, 5]), 6, DEFAULT_BUDGET).unwrap() {
            assert!(c.witness.is_valid());
            assert_eq!(c.witness.genus(), 0);
            assert_eq!(c.witness.cover(), c.cover);
        }
    }

    #[test]
    fn budget_enforced() {
        assert_eq!(
            perm_cover_oracle(&o(&[2, 3, 7]), 13, 12).unwrap_err(),
            Error::BudgetExceeded { degree: 13, budget: 12 }
        );
        assert!(perm_cover_oracle(&o(&[2, 2, 2, 2]), 2, 12).is_err());
    }

    #[test]
    fn targeted_witness() {
        let w = find_perm_witness(&o(&[2, 3, 3]), &o(&[3, 3]), 4, 12).unwrap().unwrap();
        assert!(w.is_valid());
        assert_eq!(w.cover(), o(&[3, 3]));
        assert!(find_perm_witness(&o(&[2, 3, 3]), &o(&[3, 3]), 5, 12).unwrap().is_none());
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let b = o(&[2, 3, 8]);
        let a = perm_cover_oracle_with(&b, 6, 12, Exec::Sequential).unwrap();
        let p = perm_cover_oracle_with(&b, 6, 12, Exec::Parallel).unwrap();
        assert_eq!(a, p);
    }
}
