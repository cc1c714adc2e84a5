//! Flags `(N, M)`: a rank-1 strong map image `N = {0, +-z}` inside a rank-2
//! oriented matroid `M`, the flag poset `MacP(1, 2, n)`, the maps `nu` and
//! `iota`, and samplers for flag cells.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::chart::{eps_ladder, perturb_toward, random_radius, sample_rng, CellChart};
use crate::chirotope::{Chirotope2, MAX_N};
use crate::error::{Error, Result};
use crate::macp::{
    all_rank2, angular_positions, coatoms_with_kind, down_set, rao_ordering, upper_direction, weak_leq_chirotope,
};
use crate::om::{canonical_form, mu, Rank1OM, Rank2OM};
use crate::poset::{build_poset, Poset};
use crate::rational::{det2, rank, rot90, sign_of, solve_in_rowspace2, Matrix, VectorConfig, Q};
use crate::sign::{Sign, SignVector};

pub const DEFAULT_FLAG_LIMIT: usize = 5;

/// A flag of oriented matroids: `N` is a rank-1 strong map image of `M`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlagOM {
    n: Rank1OM,
    m: Rank2OM,
}

impl FlagOM {
    /// Fails with `InvalidFlag` unless `z` is a nonzero covector of `m`.
    pub fn new(z: SignVector, m: Rank2OM) -> Result<FlagOM> {
        if z.len() != m.n() || z.is_zero() || !m.is_covector(&z) {
            return Err(Error::InvalidFlag(format!("{z} is not a nonzero covector of {m}")));
        }
        Ok(FlagOM { n: Rank1OM::new(z)?, m })
    }

    /// `z` with first nonzero entry `+`.
    pub fn z(&self) -> SignVector {
        self.n.z()
    }

    pub fn rank1(&self) -> &Rank1OM {
        &self.n
    }

    pub fn m(&self) -> &Rank2OM {
        &self.m
    }

    /// `h_M(N)`: 0 for a cocircuit, 1 for a tope.
    pub fn h_n(&self) -> usize {
        usize::from(self.z().support_mask() == !self.m.loop_mask() & crate::sign::full_mask(self.m.n()))
    }

    /// `h(M) + h_M(N)`.
    pub fn height(&self) -> usize {
        self.m.rank_h() + self.h_n()
    }

    pub fn is_cocircuit(&self) -> bool {
        self.h_n() == 0
    }
}

impl fmt::Display for FlagOM {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "flag;z={};M={}", self.z(), self.m)
    }
}

impl FromStr for FlagOM {
    type Err = Error;

    fn from_str(s: &str) -> Result<FlagOM> {
        let bad = || Error::Parse(format!("flag {s:?}: expected flag;z=<word>;M=<om>"));
        let rest = s.trim().strip_prefix("flag;z=").ok_or_else(bad)?;
        let (word, om) = rest.split_once(";M=").ok_or_else(bad)?;
        let z = SignVector::parse(word).ok_or_else(bad)?;
        let m: Rank2OM = om.parse()?;
        FlagOM::new(z, m)
    }
}

/// Product order on flags, with the chirotope test for the rank-2 parts.
pub fn flag_leq(f1: &FlagOM, f2: &FlagOM) -> bool {
    f1.n.weak_leq(&f2.n) && (f1.m == f2.m || weak_leq_chirotope(&f1.m, &f2.m))
}

/// `G(1, M)`: the rank-1 strong map images of `M` under the weak order.
#[derive(Clone, Debug)]
pub struct G1Poset {
    pub m: Rank2OM,
    pub elements: Vec<Rank1OM>,
    pub poset: Poset,
    pub heights: Vec<usize>,
}

/// Nonzero covectors of `m` up to sign, cocircuits first.
fn rank1_list(m: &Rank2OM) -> Vec<Rank1OM> {
    let mut out: Vec<Rank1OM> = m.cocircuits().into_iter().chain(m.topes()).filter_map(|z| Rank1OM::new(z).ok()).collect();
    let mut seen = HashSet::new();
    out.retain(|x| seen.insert(*x));
    out
}

pub fn rank1_images(m: &Rank2OM) -> G1Poset {
    let elements = rank1_list(m);
    let poset = build_poset(elements.len(), |a, b| elements[a].weak_leq(&elements[b])).expect("sign order");
    let heights = poset.height_ranks().expect("two levels");
    G1Poset { m: m.clone(), elements, poset, heights }
}

pub fn is_strong_image(n: &Rank1OM, m: &Rank2OM) -> bool {
    n.n() == m.n() && m.is_covector(&n.z())
}

/// The largest nonzero covector of `m1` below `z2`.
pub fn max_covector_below(m1: &Rank2OM, z2: &SignVector) -> Result<SignVector> {
    let below: Vec<SignVector> = m1.covectors().into_iter().filter(|x| !x.is_zero() && x.leq(z2)).collect();
    if below.is_empty() {
        return Err(Error::EmptyBelowSet(format!("{z2} in {m1}")));
    }
    below
        .iter()
        .find(|x| below.iter().all(|y| y.leq(x)))
        .copied()
        .ok_or_else(|| Error::NonUniqueMax(format!("{z2} in {m1}")))
}

/// Rank checks and row-space containment for a `1 x n` row `y` and a `2 x n` matrix `x`.
fn alpha_of(y: &[Q], x: &Matrix) -> Result<[Q; 2]> {
    if x.len() != 2 || x.iter().any(|r| r.len() != y.len()) {
        return Err(Error::Parse("Y must be 1 x n and X must be 2 x n".into()));
    }
    if y.iter().all(Zero::is_zero) {
        return Err(Error::RankDeficient("Y is zero".into()));
    }
    if rank(x) < 2 {
        return Err(Error::RankDeficient("X has rank below 2".into()));
    }
    solve_in_rowspace2(x, y).ok_or(Error::NotContained)
}

/// `nu`: the flag of oriented matroids of the subspace flag `rowspace(Y) < rowspace(X)`.
pub fn nu(y: &[Q], x: &Matrix) -> Result<FlagOM> {
    alpha_of(y, x)?;
    let z = SignVector::from_signs(&y.iter().map(sign_of).collect::<Vec<_>>());
    FlagOM::new(z, mu(x)?)
}

/// A realization of a flag: `y = alpha . x` for some `alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagRealization {
    pub y: Vec<Q>,
    pub x: VectorConfig,
}

impl FlagRealization {
    pub fn alpha(&self) -> Result<[Q; 2]> {
        alpha_of(&self.y, &self.x.to_matrix())
    }

    pub fn flag(&self) -> Result<FlagOM> {
        nu(&self.y, &self.x.to_matrix())
    }
}

/// Extends `g * chi_M` by an element `n + 1` with `chi'(n + 1, i) = -w(i)`.
fn extension(m: &Rank2OM, g: Sign, w: &SignVector) -> Result<Rank2OM> {
    let n = m.n();
    if n + 1 > MAX_N {
        return Err(Error::LimitExceeded { n: n + 1, limit: MAX_N });
    }
    let chi = Chirotope2::from_fn(n + 1, |i, j| {
        if j == n {
            w.get(i)
        } else if i == n {
            -w.get(j)
        } else {
            g * m.chi(i, j)
        }
    });
    if let Some(t) = chi.grassmann_plucker_violation() {
        return Err(Error::InvalidFlag(format!("extension by {w} violates Grassmann-Plucker at {t:?}")));
    }
    canonical_form(&chi)
}

/// The representative of `z` fixed by the basis `(a, b)`: `+` at `a`, or `0`
/// at `a` and `-` at `b`. It is the sign pattern of `alpha` when `v_a` points
/// along the positive axis and the line `J alpha` has argument in `[0, pi)`.
fn representative(z: &SignVector, a: usize, b: usize) -> SignVector {
    let s = match z.get(a) {
        Sign::Zero => -z.get(b),
        s => s,
    };
    if s == Sign::Neg {
        -*z
    } else {
        *z
    }
}

/// Lexicographically first basis of `m`.
pub fn base_pair(m: &Rank2OM) -> (usize, usize) {
    let n = m.n();
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).find(|&(a, b)| m.is_basis(a, b)).expect("rank 2")
}

/// `iota` with the argument normalization `0 <= Arg < pi` relative to `v_1 = e_1`.
///
/// Requires `{1, 2}` to be a basis of `M`. The normalization jumps where the
/// line of `N` passes through the direction of `v_1`, so this map is only
/// order-preserving on upper intervals of flags whose `z` is nonzero at 1;
/// use [`iota_relative`] for a general upper interval.
pub fn iota_embed(flag: &FlagOM) -> Result<Rank2OM> {
    let m = flag.m();
    if m.n() < 2 || !m.is_basis(0, 1) {
        return Err(Error::InvalidFlag(format!("{{1, 2}} is not a basis of {m}")));
    }
    extension(m, m.chi(0, 1), &representative(&flag.z(), 0, 1))
}

/// `iota` on the upper interval above `base`: the normalization is taken from
/// `base`, and every `z` above it is used with the sign that dominates it.
pub fn iota_relative(flag: &FlagOM, base: &FlagOM) -> Result<Rank2OM> {
    if !flag_leq(base, flag) {
        return Err(Error::InvalidFlag(format!("{flag} is not above {base}")));
    }
    let (a, b) = base_pair(base.m());
    let w0 = representative(&base.z(), a, b);
    let z = flag.z();
    let w = if w0.leq(&z) { z } else { -z };
    extension(flag.m(), flag.m().chi(a, b), &w)
}

/// `MacP(1, 2, n)` with the product order.
#[derive(Clone, Debug)]
pub struct FlagPoset {
    pub n: usize,
    pub elements: Vec<FlagOM>,
    pub poset: Poset,
    pub heights: Vec<usize>,
    index: HashMap<FlagOM, usize>,
}

impl FlagPoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, f: &FlagOM) -> Option<usize> {
        self.index.get(f).copied()
    }

    /// Flags covering `f`.
    pub fn upper_covers(&self, f: &FlagOM) -> Result<Vec<FlagOM>> {
        let x = self.index_of(f).ok_or_else(|| Error::ElementNotFound(f.to_string()))?;
        Ok(self.poset.covers(x).iter().map(|&i| self.elements[i].clone()).collect())
    }

    /// Flags covered by `f`.
    pub fn lower_covers(&self, f: &FlagOM) -> Result<Vec<FlagOM>> {
        let x = self.index_of(f).ok_or_else(|| Error::ElementNotFound(f.to_string()))?;
        Ok(self.poset.cocovers(x).iter().map(|&i| self.elements[i].clone()).collect())
    }

    /// `[0, f]` with an artificial bottom at index 0.
    pub fn lower_interval(&self, f: &FlagOM) -> Result<FlagLowerInterval> {
        let x = self.index_of(f).ok_or_else(|| Error::ElementNotFound(f.to_string()))?;
        let members: Vec<usize> = self.poset.down_set(x).ones().collect();
        let poset = self.poset.convex_subposet(&members).poset.with_bottom_adjoined();
        let elements =
            std::iter::once(None).chain(members.iter().map(|&g| Some(self.elements[g].clone()))).collect();
        Ok(FlagLowerInterval { elements, poset })
    }

    /// Elements of the upper interval above `f`.
    pub fn upper_set(&self, f: &FlagOM) -> Result<Vec<FlagOM>> {
        let x = self.index_of(f).ok_or_else(|| Error::ElementNotFound(f.to_string()))?;
        Ok(self.poset.up_set(x).ones().map(|i| self.elements[i].clone()).collect())
    }
}

fn sort_flags(v: &mut [FlagOM]) {
    v.sort_by_cached_key(|f| (f.height(), f.to_string()));
}

pub fn enumerate_macp12(n: usize) -> Result<FlagPoset> {
    enumerate_macp12_with(n, DEFAULT_FLAG_LIMIT)
}

pub fn enumerate_macp12_with(n: usize, limit: usize) -> Result<FlagPoset> {
    if n > limit {
        return Err(Error::LimitExceeded { n, limit });
    }
    if n < 2 {
        return Err(Error::RankDeficient("rank 2 needs at least two elements".into()));
    }
    let mut elements: Vec<FlagOM> = all_rank2(n)
        .into_iter()
        .flat_map(|m| rank1_list(&m).into_iter().map(move |r| FlagOM { n: r, m: m.clone() }))
        .collect();
    sort_flags(&mut elements);
    let len = elements.len();
    let heights: Vec<usize> = elements.iter().map(FlagOM::height).collect();
    let loops: Vec<u32> = elements.iter().map(|f| f.m.loop_mask()).collect();
    let up: Vec<FixedBitSet> = (0..len)
        .into_par_iter()
        .map(|x| {
            let mut row = FixedBitSet::with_capacity(len);
            row.insert(x);
            for y in 0..len {
                if y != x
                    && heights[y] >= heights[x]
                    && loops[y] & !loops[x] == 0
                    && flag_leq(&elements[x], &elements[y])
                {
                    row.insert(y);
                }
            }
            row
        })
        .collect();
    let poset = Poset::from_up_sets(up)?;
    let index = elements.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
    Ok(FlagPoset { n, elements, poset, heights, index })
}

/// `[0, f]` with an artificial bottom at index 0.
#[derive(Clone, Debug)]
pub struct FlagLowerInterval {
    pub elements: Vec<Option<FlagOM>>,
    pub poset: Poset,
}

impl FlagLowerInterval {
    pub fn index_of(&self, f: &FlagOM) -> Option<usize> {
        self.elements.iter().position(|e| e.as_ref() == Some(f))
    }

    pub fn atom_indices(&self, atoms: &[FlagOM]) -> Result<Vec<usize>> {
        atoms.iter().map(|a| self.index_of(a).ok_or_else(|| Error::ElementNotFound(a.to_string()))).collect()
    }
}

/// All flags below `f`, built from `f` alone.
pub fn flag_down_set(f: &FlagOM) -> Vec<FlagOM> {
    let mut out: Vec<FlagOM> = down_set(f.m())
        .into_iter()
        .flat_map(|m| {
            rank1_list(&m).into_iter().filter(|r| r.weak_leq(f.rank1())).map(move |r| FlagOM { n: r, m: m.clone() })
        })
        .collect();
    sort_flags(&mut out);
    out
}

pub fn flag_lower_interval(f: &FlagOM) -> FlagLowerInterval {
    let elements: Vec<Option<FlagOM>> = std::iter::once(None).chain(flag_down_set(f).into_iter().map(Some)).collect();
    let poset = build_poset(elements.len(), |x, y| match (&elements[x], &elements[y]) {
        (None, _) => true,
        (_, None) => false,
        (Some(a), Some(b)) => flag_leq(a, b),
    })
    .expect("product of partial orders");
    FlagLowerInterval { elements, poset }
}

/// Flags covered by `f`, read off its lower interval.
pub fn flag_coatoms(f: &FlagOM) -> Vec<FlagOM> {
    let li = flag_lower_interval(f);
    let top = li.poset.top().expect("f is the top");
    li.poset.cocovers(top).iter().filter_map(|&i| li.elements[i].clone()).collect()
}

/// Position of the line spanned by `d` among the classes of `x`, doubled:
/// `2c` on class `c`, `2c + 1` strictly between classes `c` and `c + 1`,
/// `-1` before the first class.
fn doubled_position(x: &VectorConfig, d: &[Q; 2]) -> i64 {
    let pos = angular_positions(x);
    let mut reps: Vec<Option<[Q; 2]>> = vec![None; pos.iter().flatten().count()];
    for (i, p) in pos.iter().enumerate() {
        if let Some(c) = *p {
            if c >= reps.len() {
                reps.resize(c + 1, None);
            }
            reps[c].get_or_insert_with(|| upper_direction(&x.cols[i]));
        }
    }
    let d = upper_direction(d);
    let mut before = 0i64;
    for (c, r) in reps.iter().flatten().enumerate() {
        let s = det2(r, &d);
        if s.is_zero() {
            return 2 * c as i64;
        }
        if s.is_positive() {
            before += 1;
        }
    }
    2 * before - 1
}

/// Atoms of `[0, (N, M)]` in the order built from the atom ordering of `M`.
///
/// For each atom `A = (i, j)` of `M`, `i` before `j` on the affine line: when
/// `z` restricted to `{i, j}` is a cocircuit of `A` there is one flag atom;
/// otherwise the atom vanishing at `i` comes first exactly when the line of
/// `N` meets the affine line no later than `i`.
pub fn flag_rao_ordering(flag: &FlagOM, real: &FlagRealization) -> Result<Vec<FlagOM>> {
    let realized = real.flag()?;
    if &realized != flag {
        return Err(Error::RealizationMismatch(format!("realizes {realized}, expected {flag}")));
    }
    let pos = angular_positions(&real.x);
    let labels = crate::macp::affine_labels(&real.x);
    let alpha = real.alpha()?;
    let l_z = doubled_position(&real.x, &rot90(&alpha));
    let z = flag.z();
    let mut out = Vec::new();
    for atom in rao_ordering(flag.m(), &real.x)? {
        let (a, b) = crate::macp::atom_pair(&atom);
        let (i, j) = if labels[a] < labels[b] { (a, b) } else { (b, a) };
        let star = max_covector_below(&atom, &z)?;
        if star.get(i).is_zero() || star.get(j).is_zero() {
            out.push(FlagOM::new(star, atom)?);
            continue;
        }
        let zero_at_i = FlagOM::new(crate::macp::restrict(&z, &[j]), atom.clone())?;
        let zero_at_j = FlagOM::new(crate::macp::restrict(&z, &[i]), atom)?;
        if l_z <= 2 * pos[i].unwrap() as i64 {
            out.extend([zero_at_i, zero_at_j]);
        } else {
            out.extend([zero_at_j, zero_at_i]);
        }
    }
    Ok(out)
}

/// Number of free parameters of the flag cell: `h(M)` plus one for a tope.
pub fn flag_chart_dimension(flag: &FlagOM) -> usize {
    CellChart::new(flag.m()).dimension() + flag.h_n()
}

/// `count` deterministic realizations of `flag`.
pub fn sample_flag_realizations(flag: &FlagOM, count: usize, seed: u64) -> Vec<FlagRealization> {
    let chart = CellChart::new(flag.m());
    let key = flag.to_string();
    let z = flag.z();
    (0..count)
        .map(|k| {
            let mut rng = sample_rng(seed, &key, k);
            let x = chart.random_point(&mut rng);
            let pos = angular_positions(&x);
            let p = flag.m().p();
            let mut dirs: Vec<Option<[Q; 2]>> = vec![None; p];
            for (i, c) in pos.iter().enumerate() {
                if let Some(c) = *c {
                    dirs[c].get_or_insert_with(|| upper_direction(&x.cols[i]));
                }
            }
            let dirs: Vec<[Q; 2]> = dirs.into_iter().map(Option::unwrap).collect();
            let candidates: Vec<[Q; 2]> = if flag.is_cocircuit() {
                dirs.clone()
            } else {
                let lambda = random_radius(&mut rng);
                (0..p)
                    .map(|c| {
                        let (u, w) = if c + 1 < p {
                            (dirs[c].clone(), dirs[c + 1].clone())
                        } else {
                            (dirs[p - 1].clone(), [-dirs[0][0].clone(), -dirs[0][1].clone()])
                        };
                        [&u[0] + &lambda * &w[0], &u[1] + &lambda * &w[1]]
                    })
                    .collect()
            };
            let y = candidates
                .iter()
                .map(|d| x.evaluate(&rot90(d)))
                .find(|y| {
                    let s = SignVector::from_signs(&y.iter().map(sign_of).collect::<Vec<_>>());
                    s == z || s == -z
                })
                .expect("every covector labels a cell of the circle");
            FlagRealization { y, x }
        })
        .collect()
}

/// `count` deterministic points `(Y, X)` of `nu^{-1}(flag)`.
pub fn sample_flag_cell(flag: &FlagOM, count: usize, seed: u64) -> Vec<(Vec<Q>, Matrix)> {
    sample_flag_realizations(flag, count, seed).into_iter().map(|r| (r.y, r.x.to_matrix())).collect()
}

/// A boundary point of a flag cell and its perturbations back into the cell.
#[derive(Clone, Debug)]
pub struct FlagBoundarySample {
    pub point: FlagRealization,
    pub perturbed: Vec<FlagRealization>,
    pub recovered: Vec<bool>,
}

impl FlagBoundarySample {
    pub fn all_recover(&self) -> bool {
        self.recovered.iter().all(|&r| r)
    }
}

/// Samples the cell of a coatom `face` of `flag` and perturbs each sample
/// back into the cell of `flag`.
///
/// The perturbation happens in `MacP(2, n + 1)`: the sample becomes a
/// realization of `iota(face)` by adjoining the line of `N` as `v_{n+1}`, is
/// moved into `iota(flag)` there, and is read back as a flag.
pub fn sample_flag_boundary(
    flag: &FlagOM,
    face: &FlagOM,
    count: usize,
    seed: u64,
) -> Result<Vec<FlagBoundarySample>> {
    if !flag_coatoms(flag).contains(face) {
        return Err(Error::NotACoatom(format!("{face} is not covered by {flag}")));
    }
    let big = iota_relative(flag, face)?;
    let small = iota_relative(face, face)?;
    let kind = coatoms_with_kind(&big)
        .into_iter()
        .find(|(c, _)| c == &small)
        .map(|(_, k)| k)
        .ok_or_else(|| Error::NotACoatom(format!("embedded {small} is not covered by {big}")))?;
    let (a, b) = base_pair(face.m());
    let w0 = representative(&face.z(), a, b);
    let n = flag.m().n();
    let ladder = eps_ladder();
    sample_flag_realizations(face, count, seed)
        .into_iter()
        .map(|r| {
            let mut x = r.x.clone();
            if x.det(a, b).is_negative() {
                for c in &mut x.cols {
                    c[1] = -c[1].clone();
                }
            }
            let mut y = r.y.clone();
            let s = SignVector::from_signs(&y.iter().map(sign_of).collect::<Vec<_>>());
            if s != w0 {
                y.iter_mut().for_each(|v| *v = -v.clone());
            }
            let point = FlagRealization { y, x };
            let alpha = point.alpha()?;
            let mut cols = point.x.cols.clone();
            cols.push(rot90(&alpha));
            let lifted = VectorConfig::new(cols);
            let perturbed: Vec<FlagRealization> = ladder
                .iter()
                .map(|e| {
                    let w = perturb_toward(&lifted, &big, &kind, e);
                    let v = &w.cols[n];
                    let alpha = [-v[1].clone(), v[0].clone()].map(|c| -c);
                    let x = VectorConfig::new(w.cols[..n].to_vec());
                    FlagRealization { y: x.evaluate(&alpha), x }
                })
                .collect();
            let recovered = perturbed.iter().map(|r| r.flag().as_ref() == Ok(flag)).collect();
            Ok(FlagBoundarySample { point, perturbed, recovered })
        })
        .collect()
}

/// `MacP(1, n)`: rank-1 oriented matroids on `[n]` under weak maps.
pub fn enumerate_macp1(n: usize) -> (Vec<Rank1OM>, Poset) {
    let mut elements = Vec::new();
    for code in 1..3usize.pow(n as u32) {
        let mut c = code;
        let signs: Vec<Sign> = (0..n)
            .map(|_| {
                let s = [Sign::Zero, Sign::Pos, Sign::Neg][c % 3];
                c /= 3;
                s
            })
            .collect();
        let r = Rank1OM::new(SignVector::from_signs(&signs)).expect("nonzero");
        if r.z() == SignVector::from_signs(&signs) {
            elements.push(r);
        }
    }
    let poset = build_poset(elements.len(), |a, b| elements[a].weak_leq(&elements[b])).expect("sign order");
    (elements, poset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn om(s: &str) -> Rank2OM {
        s.parse().unwrap()
    }

    fn sv(s: &str) -> SignVector {
        SignVector::parse(s).unwrap()
    }

    fn m3() -> Rank2OM {
        om("n=3;loops=;classes=[+1][+3][+2]")
    }

    fn row(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn rank1_images_of_three_lines() {
        let g = rank1_images(&m3());
        assert_eq!(g.elements.len(), 6);
        for (k, r) in g.elements.iter().enumerate() {
            let cocircuit = r.z().support().len() == 2;
            assert_eq!(g.heights[k] == 0, cocircuit);
        }
        assert!(is_strong_image(&Rank1OM::new(sv("+++")).unwrap(), &m3()));
        // (+,-,+) is the negation of the covector (-,+,-), so it is an image.
        assert!(is_strong_image(&Rank1OM::new(sv("+-+")).unwrap(), &m3()));
        assert!(!is_strong_image(&Rank1OM::new(sv("++-")).unwrap(), &m3()));
    }

    #[test]
    fn max_below_examples() {
        let small = om("n=3;loops=3;classes=[+1][+2]");
        assert_eq!(max_covector_below(&small, &sv("+++")).unwrap(), sv("++0"));
        assert_eq!(max_covector_below(&m3(), &sv("+++")).unwrap(), sv("+++"));
        let only3 = om("n=3;loops=3;classes=[+1][+2]");
        assert!(matches!(max_covector_below(&only3, &sv("00+")), Err(Error::EmptyBelowSet(_))));
    }

    #[test]
    fn nu_examples() {
        let x = vec![row(&[1, 0, 1]), row(&[0, 1, 1])];
        let f = nu(&row(&[1, 0, 1]), &x).unwrap();
        assert_eq!(f.to_string(), format!("flag;z=+0+;M={}", m3()));
        assert_eq!(nu(&row(&[1, 1, 2]), &x).unwrap().z(), sv("+++"));
        assert_eq!(nu(&row(&[1, 0, 0]), &x), Err(Error::NotContained));
        assert!(matches!(nu(&row(&[0, 0, 0]), &x), Err(Error::RankDeficient(_))));
        let parsed: FlagOM = f.to_string().parse().unwrap();
        assert_eq!(parsed, f);
    }

    #[test]
    fn iota_examples() {
        let f = FlagOM::new(sv("+0+"), m3()).unwrap();
        let e = iota_embed(&f).unwrap();
        assert!(e.chi(3, 1).is_zero());
        let g = FlagOM::new(sv("+++"), m3()).unwrap();
        let e = iota_embed(&g).unwrap();
        assert!((0..3).all(|i| !e.chi(3, i).is_zero()));
        assert_eq!(e.p(), 4);
        // Deleting the new element gives M back.
        let classes: Vec<Vec<(usize, Sign)>> = e
            .signed_classes()
            .into_iter()
            .map(|c| c.into_iter().filter(|&(i, _)| i < 3).collect::<Vec<_>>())
            .filter(|c| !c.is_empty())
            .collect();
        assert_eq!(Rank2OM::from_classes(3, &classes).unwrap(), m3());
    }

    #[test]
    fn geometric_iota_matches() {
        // v_4 = J alpha for Y = alpha . X.
        let x = VectorConfig::from_ints(&[(1, 0), (0, 1), (1, 1)]);
        for alpha in [[q(1), q(0)], [q(1), q(1)], [q(2), q(-1)], [q(0), q(1)]] {
            let real = FlagRealization { y: x.evaluate(&alpha), x: x.clone() };
            let f = real.flag().unwrap();
            let mut cols = x.cols.clone();
            let line = rot90(&alpha);
            cols.push(upper_direction(&line));
            let geometric = crate::om::mu_config(&VectorConfig::new(cols)).unwrap();
            assert_eq!(iota_embed(&f).unwrap(), geometric, "{f}");
        }
    }

    #[test]
    fn flag_counts() {
        assert_eq!(enumerate_macp12(2).unwrap().len(), 4);
        let p3 = enumerate_macp12(3).unwrap();
        let expected: usize = all_rank2(3).iter().map(|m| 2 * m.p()).sum();
        assert_eq!(p3.len(), expected);
        assert!(matches!(enumerate_macp12(6), Err(Error::LimitExceeded { .. })));
    }

    #[test]
    fn flag_cells_round_trip() {
        for f in enumerate_macp12(3).unwrap().elements {
            for r in sample_flag_realizations(&f, 4, 9) {
                assert_eq!(r.flag().unwrap(), f);
            }
            assert_eq!(flag_chart_dimension(&f), f.height());
        }
    }

    #[test]
    fn flag_ordering_on_three_lines() {
        let x = VectorConfig::from_ints(&[(1, 0), (0, 1), (1, 1)]);
        let real = FlagRealization { y: x.evaluate(&[q(1), q(1)]), x };
        let f = real.flag().unwrap();
        let order = flag_rao_ordering(&f, &real).unwrap();
        let li = flag_lower_interval(&f);
        let idx = li.atom_indices(&order).unwrap();
        let mut atoms = li.poset.atoms();
        atoms.sort_unstable();
        let mut sorted = idx.clone();
        sorted.sort_unstable();
        assert_eq!(atoms, sorted);
        let opts = crate::rao::RaoOptions { semimodular_shortcut: false, ..Default::default() };
        assert!(crate::rao::verify_recursive_atom_ordering(&li.poset, &idx, opts).unwrap());
    }

    #[test]
    fn boundary_of_a_tope_flag() {
        let f = FlagOM::new(sv("+++"), m3()).unwrap();
        for face in flag_coatoms(&f) {
            let s = sample_flag_boundary(&f, &face, 2, 1).unwrap();
            assert!(s.iter().all(FlagBoundarySample::all_recover), "{face}");
        }
    }

    #[test]
    fn macp1_sizes() {
        let (e, p) = enumerate_macp1(3);
        assert_eq!(e.len(), 13);
        assert_eq!(p.minimal_elements().len(), 3);
    }
}
