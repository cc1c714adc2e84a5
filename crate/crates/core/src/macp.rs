//! The MacPhersonian `MacP(2, n)`: enumeration, weak maps, covers and atom orderings.

use std::collections::{HashMap, HashSet};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::om::{mu_config, Rank2OM};
use crate::poset::Poset;
use crate::rational::{det2, is_zero_vec, VectorConfig, Q};
use crate::sign::{Sign, SignVector};
use num_traits::{Signed, Zero};

pub const DEFAULT_LIMIT: usize = 6;

/// Which weak-map test to use when building the poset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparator {
    /// Every covector of `N` is dominated by a covector of `M`.
    Covector,
    /// `chi_N` agrees with `+chi_M` or `-chi_M` wherever it is nonzero.
    Chirotope,
}

impl Comparator {
    /// The covector test up to `n = 4`, the chirotope test beyond.
    pub fn default_for(n: usize) -> Comparator {
        if n <= 4 {
            Comparator::Covector
        } else {
            Comparator::Chirotope
        }
    }

    pub fn leq(self, lower: &Rank2OM, upper: &Rank2OM) -> bool {
        match self {
            Comparator::Covector => weak_leq(lower, upper),
            Comparator::Chirotope => weak_leq_chirotope(lower, upper),
        }
    }
}

/// Literal weak map test: every covector of `lower` lies below some covector of `upper`.
pub fn weak_leq(lower: &Rank2OM, upper: &Rank2OM) -> bool {
    let ups = upper.covectors();
    lower.covectors().iter().all(|x| ups.iter().any(|y| x.leq(y)))
}

/// Chirotope comparator for weak maps between rank-2 matroids.
pub fn weak_leq_chirotope(lower: &Rank2OM, upper: &Rank2OM) -> bool {
    lower.chirotope().weakly_below(upper.chirotope())
}

/// How a coatom arises from its cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverKind {
    /// The element became a loop.
    Loop { element: usize },
    /// Two cyclically adjacent classes (indices in the cover's angular order) merged.
    Merge { first: usize, second: usize },
}

/// Coatoms of `[0, M]` from the two cover rules, each with how it arises.
pub fn coatoms_with_kind(m: &Rank2OM) -> Vec<(Rank2OM, CoverKind)> {
    let n = m.n();
    let classes = m.signed_classes();
    let mut out: Vec<(Rank2OM, CoverKind)> = Vec::new();
    let mut seen = HashSet::new();
    let mut push = |om: Rank2OM, kind: CoverKind, out: &mut Vec<(Rank2OM, CoverKind)>| {
        if seen.insert(om.key().to_string()) {
            out.push((om, kind));
        }
    };
    for (k, class) in classes.iter().enumerate() {
        if class.len() < 2 {
            continue;
        }
        for &(i, _) in class {
            let mut cs = classes.clone();
            cs[k].retain(|&(j, _)| j != i);
            let om = Rank2OM::from_classes(n, &cs).expect("removing from a large class keeps rank 2");
            push(om, CoverKind::Loop { element: i }, &mut out);
        }
    }
    let p = classes.len();
    if p >= 3 {
        for k in 0..p {
            let next = (k + 1) % p;
            let mut cs = classes.clone();
            let moved = cs[next].clone();
            if next == 0 {
                // Crossing the antipode reverses the wrapped class.
                cs[k].extend(moved.iter().map(|&(j, s)| (j, -s)));
            } else {
                cs[k].extend(moved);
            }
            cs.remove(next);
            let om = Rank2OM::from_classes(n, &cs).expect("merging keeps at least two classes");
            push(om, CoverKind::Merge { first: k, second: next }, &mut out);
        }
    }
    out
}

/// Coatoms of `[0, M]`: loop one element of a class of size at least two, or
/// merge two cyclically adjacent classes.
pub fn coatoms_cr(m: &Rank2OM) -> Vec<Rank2OM> {
    coatoms_with_kind(m).into_iter().map(|(om, _)| om).collect()
}

pub fn rank_h(m: &Rank2OM) -> usize {
    m.rank_h()
}

/// The atom of `M` supported on the basis `{a, b}`.
pub fn atom_for_pair(m: &Rank2OM, a: usize, b: usize) -> Result<Rank2OM> {
    let s = m.chi(a, b);
    if s.is_zero() {
        return Err(Error::RankDeficient(format!("{{{}, {}}} is not a basis", a + 1, b + 1)));
    }
    Rank2OM::from_classes(m.n(), &[vec![(a, Sign::Pos)], vec![(b, s)]])
}

/// All elements below `M`, found by closing under the cover rules.
pub fn down_set(m: &Rank2OM) -> Vec<Rank2OM> {
    let mut seen: HashSet<Rank2OM> = HashSet::new();
    let mut stack = vec![m.clone()];
    seen.insert(m.clone());
    while let Some(x) = stack.pop() {
        for c in coatoms_cr(&x) {
            if seen.insert(c.clone()) {
                stack.push(c);
            }
        }
    }
    let mut out: Vec<Rank2OM> = seen.into_iter().collect();
    out.sort_by(|a, b| (a.rank_h(), a.key()).cmp(&(b.rank_h(), b.key())));
    out
}

fn raw_configurations(nonloops: &[usize]) -> Vec<Vec<Vec<(usize, Sign)>>> {
    let l = nonloops.len();
    let mut out = Vec::new();
    // Restricted growth strings give set partitions; block 0 holds nonloops[0].
    let mut rgs = vec![0usize; l];
    loop {
        let p = rgs.iter().max().map_or(0, |m| m + 1);
        if p >= 2 {
            let blocks: Vec<Vec<usize>> =
                (0..p).map(|b| (0..l).filter(|&i| rgs[i] == b).map(|i| nonloops[i]).collect()).collect();
            let mut rest: Vec<usize> = (1..p).collect();
            permutations(&mut rest, 0, &mut |perm| {
                let order: Vec<usize> = std::iter::once(0).chain(perm.iter().copied()).collect();
                for signs in 0u32..(1 << (l - 1)) {
                    let sign_of = |e: usize| {
                        let pos = nonloops.iter().position(|&x| x == e).unwrap();
                        if pos == 0 || signs >> (pos - 1) & 1 == 0 {
                            Sign::Pos
                        } else {
                            Sign::Neg
                        }
                    };
                    let classes: Vec<Vec<(usize, Sign)>> =
                        order.iter().map(|&b| blocks[b].iter().map(|&e| (e, sign_of(e))).collect()).collect();
                    out.push(classes);
                }
            });
        }
        // Next restricted growth string.
        let mut i = l - 1;
        loop {
            if i == 0 {
                return out;
            }
            let max_prefix = rgs[..i].iter().max().copied().unwrap_or(0);
            if rgs[i] <= max_prefix {
                rgs[i] += 1;
                for r in rgs.iter_mut().skip(i + 1) {
                    *r = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

fn permutations(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, f);
        v.swap(k, i);
    }
}

/// Every rank-2 oriented matroid on `[n]`, sorted by `(h, key)`.
pub fn all_rank2(n: usize) -> Vec<Rank2OM> {
    let masks: Vec<u32> = (0u32..(1 << n)).filter(|m| n as u32 - m.count_ones() >= 2).collect();
    let mut all: Vec<Rank2OM> = masks
        .par_iter()
        .flat_map_iter(|&loops| {
            let nonloops: Vec<usize> = (0..n).filter(|&i| loops >> i & 1 == 0).collect();
            let mut seen = HashSet::new();
            let mut out = Vec::new();
            for classes in raw_configurations(&nonloops) {
                let om = Rank2OM::from_classes(n, &classes).expect("angular data is always valid");
                if seen.insert(om.key().to_string()) {
                    out.push(om);
                }
            }
            out
        })
        .collect();
    all.sort_by(|a, b| (a.rank_h(), a.key()).cmp(&(b.rank_h(), b.key())));
    all.dedup();
    all
}

/// `MacP(2, n)` with its weak-map order.
#[derive(Clone, Debug)]
pub struct MacP2Poset {
    pub n: usize,
    pub elements: Vec<Rank2OM>,
    pub poset: Poset,
    pub heights: Vec<usize>,
    index: HashMap<String, usize>,
}

/// An interval `[0, M]` with an artificial bottom at index 0.
#[derive(Clone, Debug)]
pub struct LowerInterval {
    /// `None` at index 0 for the adjoined bottom.
    pub elements: Vec<Option<Rank2OM>>,
    pub poset: Poset,
}

impl LowerInterval {
    pub fn index_of(&self, om: &Rank2OM) -> Option<usize> {
        self.elements.iter().position(|e| e.as_ref() == Some(om))
    }

    /// Translates an ordering of atoms to local indices.
    pub fn atom_indices(&self, atoms: &[Rank2OM]) -> Result<Vec<usize>> {
        atoms
            .iter()
            .map(|a| self.index_of(a).ok_or_else(|| Error::ElementNotFound(a.to_string())))
            .collect()
    }

    pub fn top(&self) -> &Rank2OM {
        self.elements[self.poset.top().expect("an interval has a top")].as_ref().unwrap()
    }
}

/// `[0, M]` built from `M` alone, using the cover rules and the given comparator.
pub fn lower_interval(m: &Rank2OM, comparator: Comparator) -> LowerInterval {
    let below = down_set(m);
    let elements: Vec<Option<Rank2OM>> = std::iter::once(None).chain(below.into_iter().map(Some)).collect();
    let poset = crate::poset::build_poset(elements.len(), |x, y| match (&elements[x], &elements[y]) {
        (None, _) => true,
        (_, None) => false,
        (Some(a), Some(b)) => a == b || comparator.leq(a, b),
    })
    .expect("weak maps form a partial order");
    LowerInterval { elements, poset }
}

/// Enumerates `MacP(2, n)` with the default comparator for `n`.
pub fn enumerate_macp2(n: usize) -> Result<MacP2Poset> {
    enumerate_macp2_with(n, DEFAULT_LIMIT, Comparator::default_for(n))
}

pub fn enumerate_macp2_with(n: usize, limit: usize, comparator: Comparator) -> Result<MacP2Poset> {
    if n > limit {
        return Err(Error::LimitExceeded { n, limit });
    }
    if n < 2 {
        return Err(Error::RankDeficient("rank 2 needs at least two elements".into()));
    }
    let elements = all_rank2(n);
    let len = elements.len();
    let heights: Vec<usize> = elements.iter().map(Rank2OM::rank_h).collect();
    let loops: Vec<u32> = elements.iter().map(Rank2OM::loop_mask).collect();
    // Elements are sorted by height, so only later indices can lie above.
    let up: Vec<FixedBitSet> = (0..len)
        .into_par_iter()
        .map(|x| {
            let mut row = FixedBitSet::with_capacity(len);
            row.insert(x);
            for y in 0..len {
                if y != x
                    && heights[y] >= heights[x]
                    && loops[y] & !loops[x] == 0
                    && comparator.leq(&elements[x], &elements[y])
                {
                    row.insert(y);
                }
            }
            row
        })
        .collect();
    let poset = Poset::from_up_sets(up)?;
    let index = elements.iter().enumerate().map(|(i, e)| (e.key().to_string(), i)).collect();
    Ok(MacP2Poset { n, elements, poset, heights, index })
}

impl MacP2Poset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, m: &Rank2OM) -> Option<usize> {
        self.index.get(m.key()).copied()
    }

    pub fn lower_interval(&self, m: &Rank2OM) -> Result<LowerInterval> {
        let x = self.index_of(m).ok_or_else(|| Error::ElementNotFound(m.to_string()))?;
        let members: Vec<usize> = self.poset.down_set(x).ones().collect();
        let sub = self.poset.convex_subposet(&members);
        let poset = sub.poset.with_bottom_adjoined();
        let elements = std::iter::once(None)
            .chain(members.iter().map(|&g| Some(self.elements[g].clone())))
            .collect();
        Ok(LowerInterval { elements, poset })
    }

    /// Covers of `M` computed from the order relation alone.
    pub fn lower_covers(&self, m: &Rank2OM) -> Result<Vec<Rank2OM>> {
        let x = self.index_of(m).ok_or_else(|| Error::ElementNotFound(m.to_string()))?;
        Ok(self.poset.cocovers(x).iter().map(|&i| self.elements[i].clone()).collect())
    }
}

/// Direction of `v` flipped into the half-open upper half-plane.
pub(crate) fn upper_direction(v: &[Q; 2]) -> [Q; 2] {
    if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
        v.clone()
    } else {
        [-v[0].clone(), -v[1].clone()]
    }
}

/// Angular positions of the non-loop lines of a configuration, `0` for the
/// line closest to angle `0`. Loops get `None`.
pub(crate) fn angular_positions(config: &VectorConfig) -> Vec<Option<usize>> {
    let dirs: Vec<Option<[Q; 2]>> =
        config.cols.iter().map(|v| (!is_zero_vec(v)).then(|| upper_direction(v))).collect();
    let mut reps: Vec<[Q; 2]> = Vec::new();
    for d in dirs.iter().flatten() {
        if !reps.iter().any(|r| det2(r, d).is_zero()) {
            reps.push(d.clone());
        }
    }
    // In the upper half-plane, u comes before w exactly when det(u, w) > 0.
    reps.sort_by(|u, w| {
        let d = det2(u, w);
        if d.is_positive() {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    dirs.iter()
        .map(|d| d.as_ref().map(|d| reps.iter().position(|r| det2(r, d).is_zero()).unwrap()))
        .collect()
}

/// Element labels read off an affine line crossing the lines in angular
/// order; parallel elements are tie-broken by index.
pub fn affine_labels(config: &VectorConfig) -> Vec<Option<usize>> {
    let pos = angular_positions(config);
    let mut nonloops: Vec<usize> = (0..pos.len()).filter(|&i| pos[i].is_some()).collect();
    nonloops.sort_by_key(|&i| (pos[i], i));
    let mut labels = vec![None; pos.len()];
    for (rank, &i) in nonloops.iter().enumerate() {
        labels[i] = Some(rank);
    }
    labels
}

/// Atoms of `[0, M]` in dictionary order of their label pairs.
pub fn rao_ordering(m: &Rank2OM, realization: &VectorConfig) -> Result<Vec<Rank2OM>> {
    let realized = mu_config(realization)?;
    if &realized != m {
        return Err(Error::RealizationMismatch(format!("realizes {realized}, expected {m}")));
    }
    let labels = affine_labels(realization);
    let mut pairs: Vec<(usize, usize, usize, usize)> = Vec::new();
    for a in 0..m.n() {
        for b in a + 1..m.n() {
            if m.is_basis(a, b) {
                let (la, lb) = (labels[a].unwrap(), labels[b].unwrap());
                let (lo, hi) = if la < lb { (a, b) } else { (b, a) };
                pairs.push((la.min(lb), la.max(lb), lo, hi));
            }
        }
    }
    pairs.sort();
    pairs.iter().map(|&(_, _, lo, hi)| atom_for_pair(m, lo, hi)).collect()
}

/// The pair of elements of an atom, ordered by the realization's labels.
pub fn atom_pair(atom: &Rank2OM) -> (usize, usize) {
    let nl: Vec<usize> = (0..atom.n()).filter(|&i| !atom.is_loop(i)).collect();
    assert_eq!(nl.len(), 2, "not an atom");
    (nl[0], nl[1])
}

/// Sign vector helper used by the flag code.
pub(crate) fn restrict(z: &SignVector, keep: &[usize]) -> SignVector {
    let mut out = SignVector::zero(z.len());
    for &i in keep {
        out.set(i, z.get(i));
    }
    out
}
