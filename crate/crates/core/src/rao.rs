//! Recursive atom orderings.
//!
//! An ordering `a_1, ..., a_t` of the atoms of a bounded graded poset is
//! recursive when
//!
//! 1. each upper interval `[a_j, 1]` admits a recursive atom ordering that
//!    lists first the atoms covering some earlier `a_i`, and
//! 2. whenever `a_i, a_j < y` with `i < j`, some `z <= y` covers `a_j` and an
//!    earlier `a_k`.
//!
//! Condition 1 is existential, so verification is a search. The search state
//! is the set of atoms placed so far, since both conditions at the next
//! position depend only on that set. Results are memoized per interval and
//! forced prefix, and a node budget bounds the work.

use std::collections::{HashMap, HashSet};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::poset::Poset;

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug)]
pub struct RaoOptions {
    /// Maximum number of search nodes before giving up with `BudgetExceeded`.
    pub budget: u64,
    /// Accept any ordering of a totally semimodular interval without search.
    pub semimodular_shortcut: bool,
}

impl Default for RaoOptions {
    fn default() -> Self {
        RaoOptions { budget: DEFAULT_BUDGET, semimodular_shortcut: true }
    }
}

struct Search<'a> {
    p: &'a Poset,
    rank: Vec<usize>,
    opts: RaoOptions,
    nodes: u64,
    exists: HashMap<(usize, usize, FixedBitSet), bool>,
    semimodular: HashMap<(usize, usize), bool>,
}

impl<'a> Search<'a> {
    fn new(p: &'a Poset, opts: RaoOptions) -> Option<Search<'a>> {
        let rank = p.height_ranks().ok()?;
        Some(Search { p, rank, opts, nodes: 0, exists: HashMap::new(), semimodular: HashMap::new() })
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.opts.budget {
            return Err(Error::BudgetExceeded(self.opts.budget));
        }
        Ok(())
    }

    fn length(&self, b: usize, t: usize) -> usize {
        self.rank[t] - self.rank[b]
    }

    fn totally_semimodular(&mut self, b: usize, t: usize) -> bool {
        let p = self.p;
        *self.semimodular.entry((b, t)).or_insert_with(|| p.is_totally_semimodular_between(b, t).is_ok())
    }

    /// Condition 2 for placing `a` after the atoms in `placed`.
    fn condition_ii(&self, t: usize, placed: &FixedBitSet, a: usize) -> bool {
        let p = self.p;
        let mut above_earlier = FixedBitSet::with_capacity(p.len());
        for i in placed.ones() {
            above_earlier.union_with(p.up_set(i));
        }
        above_earlier.intersect_with(p.up_set(a));
        above_earlier.intersect_with(p.down_set(t));
        if above_earlier.is_clear() {
            return true;
        }
        let mut reach = FixedBitSet::with_capacity(p.len());
        for &z in p.covers(a) {
            if p.leq(z, t) && p.cocovers(z).iter().any(|&k| placed.contains(k)) {
                reach.union_with(p.up_set(z));
            }
        }
        above_earlier.is_subset(&reach)
    }

    /// Atoms of `[a, t]` covering some atom in `placed`.
    fn forced_prefix(&self, a: usize, t: usize, placed: &FixedBitSet) -> FixedBitSet {
        let p = self.p;
        let mut f = FixedBitSet::with_capacity(p.len());
        for c in p.atoms_between(a, t) {
            if p.cocovers(c).iter().any(|&k| placed.contains(k)) {
                f.insert(c);
            }
        }
        f
    }

    fn condition_i(&mut self, t: usize, placed: &FixedBitSet, a: usize) -> Result<bool> {
        let f = self.forced_prefix(a, t, placed);
        self.exists_rao(a, t, f)
    }

    /// Does `[b, t]` admit a recursive atom ordering starting with the atoms in `forced`?
    fn exists_rao(&mut self, b: usize, t: usize, forced: FixedBitSet) -> Result<bool> {
        if self.length(b, t) <= 1 {
            return Ok(true);
        }
        if self.opts.semimodular_shortcut && self.totally_semimodular(b, t) {
            return Ok(true);
        }
        let key = (b, t, forced);
        if let Some(&r) = self.exists.get(&key) {
            return Ok(r);
        }
        let atoms = self.p.atoms_between(b, t);
        let mut failed = HashSet::new();
        let mut order = Vec::new();
        let r = self.extend(t, &atoms, &key.2, FixedBitSet::with_capacity(self.p.len()), &mut order, &mut failed)?;
        self.exists.insert(key, r);
        Ok(r)
    }

    /// Depth-first extension of a partial ordering; `order` holds the result on success.
    fn extend(
        &mut self,
        t: usize,
        atoms: &[usize],
        forced: &FixedBitSet,
        placed: FixedBitSet,
        order: &mut Vec<usize>,
        failed: &mut HashSet<FixedBitSet>,
    ) -> Result<bool> {
        self.tick()?;
        if order.len() == atoms.len() {
            return Ok(true);
        }
        if failed.contains(&placed) {
            return Ok(false);
        }
        let forced_left: Vec<usize> =
            atoms.iter().copied().filter(|&a| forced.contains(a) && !placed.contains(a)).collect();
        let candidates: Vec<usize> = if forced_left.is_empty() {
            atoms.iter().copied().filter(|&a| !placed.contains(a)).collect()
        } else {
            forced_left
        };
        for a in candidates {
            if !self.condition_ii(t, &placed, a) || !self.condition_i(t, &placed, a)? {
                continue;
            }
            let mut next = placed.clone();
            next.insert(a);
            order.push(a);
            if self.extend(t, atoms, forced, next, order, failed)? {
                return Ok(true);
            }
            order.pop();
        }
        failed.insert(placed);
        Ok(false)
    }
}

fn bounds(p: &Poset) -> Result<(usize, usize)> {
    match (p.bottom(), p.top()) {
        (Some(b), Some(t)) => Ok((b, t)),
        _ => Err(Error::NotAPartialOrder("a bounded poset is required".into())),
    }
}

/// Checks both conditions for the given ordering of the atoms of `p`.
///
/// Returns `Ok(false)` for a poset that is not graded. `Err(BudgetExceeded)`
/// means the search for the sub-orderings ran out of nodes, not that the
/// ordering is invalid.
pub fn verify_recursive_atom_ordering(p: &Poset, ordering: &[usize], opts: RaoOptions) -> Result<bool> {
    let (b, t) = bounds(p)?;
    let mut atoms = p.atoms();
    let mut sorted = ordering.to_vec();
    atoms.sort_unstable();
    sorted.sort_unstable();
    if atoms != sorted {
        return Err(Error::NotAnAtomOrdering(format!("{ordering:?} is not a permutation of {atoms:?}")));
    }
    let Some(mut s) = Search::new(p, opts) else {
        return Ok(false);
    };
    if s.length(b, t) <= 1 {
        return Ok(true);
    }
    let mut placed = FixedBitSet::with_capacity(p.len());
    for &a in ordering {
        s.tick()?;
        if !s.condition_ii(t, &placed, a) || !s.condition_i(t, &placed, a)? {
            return Ok(false);
        }
        placed.insert(a);
    }
    Ok(true)
}

/// Searches for a recursive atom ordering of `p`.
///
/// With the shortcut enabled, a totally semimodular poset gets its atoms in
/// index order straight away.
pub fn find_recursive_atom_ordering(p: &Poset, opts: RaoOptions) -> Result<Option<Vec<usize>>> {
    let (b, t) = bounds(p)?;
    let Some(mut s) = Search::new(p, opts) else {
        return Ok(None);
    };
    let atoms = p.atoms();
    if s.length(b, t) <= 1 || (opts.semimodular_shortcut && s.totally_semimodular(b, t)) {
        return Ok(Some(atoms));
    }
    let mut order = Vec::new();
    let mut failed = HashSet::new();
    let empty = FixedBitSet::with_capacity(p.len());
    let found = s.extend(t, &atoms, &empty, FixedBitSet::with_capacity(p.len()), &mut order, &mut failed)?;
    Ok(found.then_some(order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::tests::{boolean, from_pairs};

    /// Face lattice of a square: 0 | v1..v4 = 1..4 | edges 5..8 | 9.
    fn square() -> Poset {
        let edges = [(1, 2), (2, 3), (3, 4), (4, 1)];
        let mut rel = vec![];
        for v in 1..=4 {
            rel.push((0, v));
        }
        for (k, &(a, b)) in edges.iter().enumerate() {
            rel.push((a, 5 + k));
            rel.push((b, 5 + k));
            rel.push((5 + k, 9));
        }
        from_pairs(10, &rel)
    }

    fn exact() -> RaoOptions {
        RaoOptions { semimodular_shortcut: false, ..RaoOptions::default() }
    }

    #[test]
    fn length_one_accepts_anything() {
        let p = build_two();
        assert!(verify_recursive_atom_ordering(&p, &[1], exact()).unwrap());
    }

    fn build_two() -> Poset {
        from_pairs(2, &[(0, 1)])
    }

    #[test]
    fn square_orderings() {
        let sq = square();
        assert!(verify_recursive_atom_ordering(&sq, &[1, 2, 3, 4], exact()).unwrap());
        assert!(!verify_recursive_atom_ordering(&sq, &[1, 3, 2, 4], exact()).unwrap());
        let found = find_recursive_atom_ordering(&sq, exact()).unwrap().unwrap();
        assert!(verify_recursive_atom_ordering(&sq, &found, exact()).unwrap());
    }

    #[test]
    fn two_chains_have_no_ordering() {
        let p = from_pairs(6, &[(0, 1), (1, 2), (2, 5), (0, 3), (3, 4), (4, 5)]);
        assert_eq!(find_recursive_atom_ordering(&p, exact()).unwrap(), None);
        assert!(!verify_recursive_atom_ordering(&p, &[1, 3], exact()).unwrap());
    }

    #[test]
    fn boolean_lattice_with_and_without_shortcut() {
        let b3 = boolean(3);
        let atoms = b3.atoms();
        assert!(verify_recursive_atom_ordering(&b3, &atoms, exact()).unwrap());
        assert_eq!(find_recursive_atom_ordering(&b3, RaoOptions::default()).unwrap(), Some(atoms.clone()));
        let searched = find_recursive_atom_ordering(&b3, exact()).unwrap().unwrap();
        assert!(verify_recursive_atom_ordering(&b3, &searched, exact()).unwrap());
    }

    #[test]
    fn rejects_non_permutations() {
        let sq = square();
        assert!(matches!(
            verify_recursive_atom_ordering(&sq, &[1, 2, 3], exact()),
            Err(Error::NotAnAtomOrdering(_))
        ));
    }

    #[test]
    fn tiny_budget_is_reported() {
        let sq = square();
        let opts = RaoOptions { budget: 2, semimodular_shortcut: false };
        assert_eq!(verify_recursive_atom_ordering(&sq, &[1, 2, 3, 4], opts), Err(Error::BudgetExceeded(2)));
    }
}
