//! Finite posets on `0..len` with bitset up- and down-sets.
//!
//! Elements are plain indices; callers keep their own element tables and use
//! [`SubPoset::members`] to translate after taking intervals.

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Transitivity is checked on every comparable pair up to this size and on a
/// deterministic sample above it.
pub const EXHAUSTIVE_CHECK_LIMIT: usize = 4096;

#[derive(Clone, Debug)]
pub struct Poset {
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    covers: Vec<Vec<usize>>,
    cocovers: Vec<Vec<usize>>,
    bottom: Option<usize>,
    top: Option<usize>,
}

/// An induced subposet together with the original index of each element.
///
/// `None` marks an artificial element (an adjoined bottom).
#[derive(Clone, Debug)]
pub struct SubPoset {
    pub poset: Poset,
    pub members: Vec<Option<usize>>,
}

impl SubPoset {
    pub fn local_index(&self, global: usize) -> Option<usize> {
        self.members.iter().position(|&m| m == Some(global))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NotGraded {
    pub lower: usize,
    pub upper: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ThinViolation {
    NotGraded(NotGraded),
    Interval { lower: usize, upper: usize, size: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemimodularViolation {
    pub z: usize,
    pub u: usize,
    pub v: usize,
    pub above: usize,
}

/// Builds a poset from a relation, computing all comparabilities first.
pub fn build_poset<F>(len: usize, leq: F) -> Result<Poset>
where
    F: Fn(usize, usize) -> bool + Sync,
{
    let up: Vec<FixedBitSet> = (0..len)
        .into_par_iter()
        .map(|x| {
            let mut row = FixedBitSet::with_capacity(len);
            for y in 0..len {
                if leq(x, y) {
                    row.insert(y);
                }
            }
            row
        })
        .collect();
    Poset::from_up_sets(up)
}

fn transpose(rows: &[FixedBitSet]) -> Vec<FixedBitSet> {
    let len = rows.len();
    let mut cols = vec![FixedBitSet::with_capacity(len); len];
    for (x, row) in rows.iter().enumerate() {
        for y in row.ones() {
            cols[y].insert(x);
        }
    }
    cols
}

impl Poset {
    /// Validates `up[x] = { y : x <= y }` as a partial order and derives the Hasse diagram.
    pub fn from_up_sets(up: Vec<FixedBitSet>) -> Result<Poset> {
        let len = up.len();
        if up.iter().any(|r| r.len() != len) {
            return Err(Error::NotAPartialOrder("relation rows have the wrong width".into()));
        }
        for (x, row) in up.iter().enumerate() {
            if !row.contains(x) {
                return Err(Error::NotAPartialOrder(format!("not reflexive at {x}")));
            }
        }
        let down = transpose(&up);
        for x in 0..len {
            if let Some(y) = up[x].intersection(&down[x]).find(|&y| y != x) {
                return Err(Error::NotAPartialOrder(format!("antisymmetry fails for ({x}, {y})")));
            }
        }
        let failure = (0..len).into_par_iter().find_map_any(|x| {
            let ys: Vec<usize> = up[x].ones().collect();
            let stride = if len <= EXHAUSTIVE_CHECK_LIMIT { 1 } else { ys.len() / 8 + 1 };
            ys.iter().step_by(stride).find_map(|&y| {
                up[y].difference(&up[x]).next().map(|z| (x, y, z))
            })
        });
        if let Some((x, y, z)) = failure {
            return Err(Error::NotAPartialOrder(format!(
                "transitivity fails: {x} <= {y} <= {z} but not {x} <= {z}"
            )));
        }
        Ok(Poset::from_valid(up, down))
    }

    fn from_valid(up: Vec<FixedBitSet>, down: Vec<FixedBitSet>) -> Poset {
        let len = up.len();
        let down_size: Vec<usize> = down.iter().map(|d| d.count_ones(..)).collect();
        let covers: Vec<Vec<usize>> = (0..len)
            .into_par_iter()
            .map(|x| {
                // Minimal elements of the strict up-set, found in a linear
                // extension order: anything above a chosen cover is dominated.
                let mut cand: Vec<usize> = up[x].ones().filter(|&y| y != x).collect();
                cand.sort_by_key(|&y| (down_size[y], y));
                let mut dominated = FixedBitSet::with_capacity(len);
                let mut out = Vec::new();
                for y in cand {
                    if !dominated.contains(y) {
                        out.push(y);
                        dominated.union_with(&up[y]);
                    }
                }
                out.sort_unstable();
                out
            })
            .collect();
        let mut cocovers = vec![Vec::new(); len];
        for (x, cs) in covers.iter().enumerate() {
            for &y in cs {
                cocovers[y].push(x);
            }
        }
        let bottom = (0..len).find(|&x| up[x].count_ones(..) == len);
        let top = (0..len).find(|&x| down[x].count_ones(..) == len);
        Poset { up, down, covers, cocovers, bottom, top }
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn up_set(&self, x: usize) -> &FixedBitSet {
        &self.up[x]
    }

    pub fn down_set(&self, x: usize) -> &FixedBitSet {
        &self.down[x]
    }

    /// Elements covering `x`, ascending.
    pub fn covers(&self, x: usize) -> &[usize] {
        &self.covers[x]
    }

    /// Elements covered by `x`.
    pub fn cocovers(&self, x: usize) -> &[usize] {
        &self.cocovers[x]
    }

    pub fn bottom(&self) -> Option<usize> {
        self.bottom
    }

    pub fn top(&self) -> Option<usize> {
        self.top
    }

    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        self.covers.iter().enumerate().flat_map(|(x, cs)| cs.iter().map(move |&y| (x, y))).collect()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.cocovers[x].is_empty()).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.covers[x].is_empty()).collect()
    }

    /// Atoms: the covers of the bottom element (empty without a bottom).
    pub fn atoms(&self) -> Vec<usize> {
        self.bottom.map(|b| self.covers[b].clone()).unwrap_or_default()
    }

    /// Atoms of the interval `[b, t]`.
    pub fn atoms_between(&self, b: usize, t: usize) -> Vec<usize> {
        self.covers[b].iter().copied().filter(|&a| self.leq(a, t)).collect()
    }

    /// `{ z : x <= z <= y }` as a bitset.
    pub fn interval_set(&self, x: usize, y: usize) -> FixedBitSet {
        let mut s = self.up[x].clone();
        s.intersect_with(&self.down[y]);
        s
    }

    /// The closed interval `[x, y]`, with `x` as bottom and `y` as top.
    pub fn interval(&self, x: usize, y: usize) -> Result<SubPoset> {
        if !self.leq(x, y) {
            return Err(Error::NotComparable(x, y));
        }
        let members: Vec<usize> = self.interval_set(x, y).ones().collect();
        Ok(self.convex_subposet(&members))
    }

    /// Induced subposet on a convex set (covers restrict directly; not checked).
    pub fn convex_subposet(&self, members: &[usize]) -> SubPoset {
        let len = self.len();
        let mut local = vec![usize::MAX; len];
        for (k, &g) in members.iter().enumerate() {
            local[g] = k;
        }
        let m = members.len();
        let restrict = |row: &FixedBitSet| {
            let mut r = FixedBitSet::with_capacity(m);
            for g in row.ones() {
                if local[g] != usize::MAX {
                    r.insert(local[g]);
                }
            }
            r
        };
        let up: Vec<FixedBitSet> = members.iter().map(|&g| restrict(&self.up[g])).collect();
        let down: Vec<FixedBitSet> = members.iter().map(|&g| restrict(&self.down[g])).collect();
        let covers: Vec<Vec<usize>> = members
            .iter()
            .map(|&g| self.covers[g].iter().filter(|&&c| local[c] != usize::MAX).map(|&c| local[c]).collect())
            .collect();
        let cocovers: Vec<Vec<usize>> = members
            .iter()
            .map(|&g| self.cocovers[g].iter().filter(|&&c| local[c] != usize::MAX).map(|&c| local[c]).collect())
            .collect();
        let bottom = (0..m).find(|&x| up[x].count_ones(..) == m);
        let top = (0..m).find(|&x| down[x].count_ones(..) == m);
        SubPoset {
            poset: Poset { up, down, covers, cocovers, bottom, top },
            members: members.iter().map(|&g| Some(g)).collect(),
        }
    }

    /// The subposet induced on an arbitrary set; covers are recomputed.
    pub fn induced(&self, members: &[usize]) -> SubPoset {
        let mut local = vec![usize::MAX; self.len()];
        for (k, &g) in members.iter().enumerate() {
            local[g] = k;
        }
        let m = members.len();
        let up: Vec<FixedBitSet> = members
            .iter()
            .map(|&g| {
                let mut r = FixedBitSet::with_capacity(m);
                for y in self.up[g].ones() {
                    if local[y] != usize::MAX {
                        r.insert(local[y]);
                    }
                }
                r
            })
            .collect();
        let down = transpose(&up);
        SubPoset { poset: Poset::from_valid(up, down), members: members.iter().map(|&g| Some(g)).collect() }
    }

    /// A copy with a new least element at index 0; old index `i` becomes `i + 1`.
    pub fn with_bottom_adjoined(&self) -> Poset {
        let len = self.len() + 1;
        let mut up = Vec::with_capacity(len);
        let mut all = FixedBitSet::with_capacity(len);
        all.insert_range(..);
        up.push(all);
        for row in &self.up {
            let mut r = FixedBitSet::with_capacity(len);
            for y in row.ones() {
                r.insert(y + 1);
            }
            up.push(r);
        }
        let down = transpose(&up);
        Poset::from_valid(up, down)
    }

    /// Everything except the bottom and top (whichever exist).
    pub fn proper_part(&self) -> SubPoset {
        let members: Vec<usize> =
            (0..self.len()).filter(|&x| Some(x) != self.bottom && Some(x) != self.top).collect();
        self.convex_subposet(&members)
    }

    /// Length of a longest chain from a minimal element, or the first cover
    /// whose ends differ in length by more than one.
    pub fn height_ranks(&self) -> std::result::Result<Vec<usize>, NotGraded> {
        let len = self.len();
        let mut order: Vec<usize> = (0..len).collect();
        order.sort_by_key(|&x| self.down[x].count_ones(..));
        let mut rank = vec![0usize; len];
        for &y in &order {
            rank[y] = self.cocovers[y].iter().map(|&x| rank[x] + 1).max().unwrap_or(0);
        }
        for x in 0..len {
            for &y in &self.covers[x] {
                if rank[y] != rank[x] + 1 {
                    return Err(NotGraded { lower: x, upper: y });
                }
            }
        }
        Ok(rank)
    }

    /// Every interval of length two has exactly four elements.
    pub fn is_thin(&self) -> std::result::Result<(), ThinViolation> {
        self.height_ranks().map_err(ThinViolation::NotGraded)?;
        let violation = (0..self.len()).into_par_iter().find_map_first(|x| {
            let mut seen = FixedBitSet::with_capacity(self.len());
            for &c in &self.covers[x] {
                for &y in &self.covers[c] {
                    if seen.put(y) {
                        continue;
                    }
                    let middle = self.cocovers[y].iter().filter(|&&m| self.covers[x].binary_search(&m).is_ok()).count();
                    if middle != 2 {
                        return Some(ThinViolation::Interval { lower: x, upper: y, size: middle + 2 });
                    }
                }
            }
            None
        });
        violation.map_or(Ok(()), Err)
    }

    /// Every interval is semimodular.
    pub fn is_totally_semimodular(&self) -> std::result::Result<(), SemimodularViolation> {
        let zs: Vec<usize> = (0..self.len()).collect();
        self.semimodular_scan(&zs, None)
    }

    /// Total semimodularity of the interval `[b, t]`, without building it.
    pub fn is_totally_semimodular_between(&self, b: usize, t: usize) -> std::result::Result<(), SemimodularViolation> {
        let zs: Vec<usize> = self.interval_set(b, t).ones().collect();
        self.semimodular_scan(&zs, Some(t))
    }

    /// Total semimodularity of every interval `[w, t]` with `w <= t`.
    pub fn is_totally_semimodular_below(&self, t: usize) -> std::result::Result<(), SemimodularViolation> {
        let zs: Vec<usize> = self.down[t].ones().collect();
        self.semimodular_scan(&zs, Some(t))
    }

    fn semimodular_scan(&self, zs: &[usize], cap: Option<usize>) -> std::result::Result<(), SemimodularViolation> {
        let within = |x: usize| cap.is_none_or(|t| self.leq(x, t));
        let check = |z: usize| -> Option<SemimodularViolation> {
            let cs: Vec<usize> = self.covers[z].iter().copied().filter(|&c| within(c)).collect();
            for (a, &u) in cs.iter().enumerate() {
                for &v in &cs[a + 1..] {
                    let mut above = self.up[u].clone();
                    above.intersect_with(&self.up[v]);
                    if let Some(t) = cap {
                        above.intersect_with(&self.down[t]);
                    }
                    if above.is_clear() {
                        continue;
                    }
                    let mut reach = FixedBitSet::with_capacity(self.len());
                    for &w in &self.covers[u] {
                        if within(w) && self.cocovers[w].contains(&v) {
                            reach.union_with(&self.up[w]);
                        }
                    }
                    if let Some(y) = above.difference(&reach).next() {
                        return Some(SemimodularViolation { z, u, v, above: y });
                    }
                }
            }
            None
        };
        let violation = if zs.len() > 256 {
            zs.par_iter().find_map_first(|&z| check(z))
        } else {
            zs.iter().find_map(|&z| check(z))
        };
        violation.map_or(Ok(()), Err)
    }

    /// Expands the Hasse diagram by transitivity and compares with `leq`.
    pub fn hasse_reproduces_order(&self) -> bool {
        let len = self.len();
        let mut order: Vec<usize> = (0..len).collect();
        order.sort_by_key(|&x| std::cmp::Reverse(self.down[x].count_ones(..)));
        let mut closure = vec![FixedBitSet::with_capacity(len); len];
        for &x in &order {
            let mut row = FixedBitSet::with_capacity(len);
            row.insert(x);
            for &c in &self.covers[x] {
                row.union_with(&closure[c]);
            }
            closure[x] = row;
        }
        (0..len).all(|x| closure[x] == self.up[x])
    }

    /// Index-preserving isomorphism test against `other` under `map`.
    pub fn is_isomorphism(&self, other: &Poset, map: &[usize]) -> bool {
        if self.len() != other.len() || map.len() != self.len() {
            return false;
        }
        let mut hit = vec![false; other.len()];
        for &m in map {
            if m >= other.len() || std::mem::replace(&mut hit[m], true) {
                return false;
            }
        }
        (0..self.len()).all(|x| (0..self.len()).all(|y| self.leq(x, y) == other.leq(map[x], map[y])))
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn from_pairs(len: usize, lt: &[(usize, usize)]) -> Poset {
        let mut up = vec![FixedBitSet::with_capacity(len); len];
        for (x, row) in up.iter_mut().enumerate() {
            row.insert(x);
        }
        for &(a, b) in lt {
            up[a].insert(b);
        }
        // Close under transitivity.
        loop {
            let mut changed = false;
            for x in 0..len {
                let row = up[x].clone();
                for y in row.ones() {
                    let before = up[x].count_ones(..);
                    let other = up[y].clone();
                    up[x].union_with(&other);
                    changed |= up[x].count_ones(..) != before;
                }
            }
            if !changed {
                break;
            }
        }
        Poset::from_up_sets(up).unwrap()
    }

    pub fn boolean(k: usize) -> Poset {
        build_poset(1 << k, |x, y| x & !y == 0).unwrap()
    }

    #[test]
    fn chain_and_antichain() {
        let chain = build_poset(3, |x, y| x <= y).unwrap();
        assert_eq!(chain.hasse_edges(), vec![(0, 1), (1, 2)]);
        let anti = build_poset(2, |x, y| x == y).unwrap();
        assert!(anti.hasse_edges().is_empty());
    }

    #[test]
    fn rejects_non_orders() {
        assert!(build_poset(2, |_, _| true).is_err());
        assert!(build_poset(3, |x, y| x == y || (x, y) == (0, 1) || (x, y) == (1, 2)).is_err());
        assert!(build_poset(2, |x, y| x < y).is_err());
    }

    #[test]
    fn boolean_ranks_and_thinness() {
        let b2 = boolean(2);
        assert_eq!(b2.height_ranks().unwrap(), vec![0, 1, 1, 2]);
        assert!(boolean(3).is_thin().is_ok());
        assert!(boolean(3).is_totally_semimodular().is_ok());
        assert!(boolean(3).hasse_reproduces_order());
    }

    #[test]
    fn long_and_short_paths_are_not_graded() {
        let p = from_pairs(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]);
        assert!(p.height_ranks().is_err());
    }

    #[test]
    fn chain_of_length_two_is_not_thin() {
        let chain = build_poset(3, |x, y| x <= y).unwrap();
        assert_eq!(chain.is_thin(), Err(ThinViolation::Interval { lower: 0, upper: 2, size: 3 }));
    }

    #[test]
    fn pentagon_is_not_semimodular() {
        // 0 < a < b < 1 and 0 < c < 1.
        let n5 = from_pairs(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]);
        assert!(n5.is_totally_semimodular().is_err());
    }

    #[test]
    fn intervals() {
        let b3 = boolean(3);
        let iv = b3.interval(1, 7).unwrap();
        assert_eq!(iv.poset.len(), 4);
        assert_eq!(iv.poset.bottom(), Some(0));
        assert_eq!(b3.interval(3, 3).unwrap().poset.len(), 1);
        assert_eq!(b3.interval(1, 2).unwrap_err(), Error::NotComparable(1, 2));
        let chain = build_poset(4, |x, y| x <= y).unwrap();
        let sub = chain.interval(1, 3).unwrap();
        assert_eq!(sub.poset.hasse_edges(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn adjoined_bottom_and_proper_part() {
        let anti = build_poset(2, |x, y| x == y).unwrap();
        let with = anti.with_bottom_adjoined();
        assert_eq!(with.bottom(), Some(0));
        assert_eq!(with.atoms(), vec![1, 2]);
        assert_eq!(boolean(2).proper_part().poset.len(), 2);
    }
}
