//! Rank-2 and rank-1 oriented matroids.
//!
//! A rank-2 oriented matroid on `[n]` is stored in its angular form: a loop
//! set and a cyclic sequence of parallel classes `C_0, ..., C_{p-1}`, each
//! element carrying a sign `sigma_i`. The induced chirotope is
//!
//! ```text
//! chi(i, j) = sigma_i * sigma_j * sign(class(j) - class(i))
//! ```
//!
//! with `chi(i, j) = 0` when `i` and `j` share a class or either is a loop.
//! Every constructor canonicalizes, so two values compare equal exactly when
//! they describe the same pair `{chi, -chi}`.
//!
//! Elements are 0-based in the API and 1-based in the text format.

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use crate::chirotope::{Chirotope2, MAX_N};
use crate::error::{Error, Result};
use crate::rational::{Matrix, VectorConfig};
use crate::sign::{bits, Sign, SignVector};

#[derive(Clone, Debug)]
pub struct Rank2OM {
    n: usize,
    class_of: Vec<Option<usize>>,
    sigma: Vec<Sign>,
    p: usize,
    chi: Chirotope2,
    key: String,
}

impl PartialEq for Rank2OM {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for Rank2OM {}

impl Hash for Rank2OM {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

impl PartialOrd for Rank2OM {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rank2OM {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key.cmp(&other.key)
    }
}

/// A class-by-class description: `classes[k]` lists `(element, sigma)` pairs.
type Classes = Vec<Vec<(usize, Sign)>>;

fn serialize(n: usize, loops: &[usize], classes: &Classes) -> String {
    let mut s = format!("n={n};loops=");
    let loops: Vec<String> = loops.iter().map(|i| (i + 1).to_string()).collect();
    s.push_str(&loops.join(","));
    s.push_str(";classes=");
    for class in classes {
        s.push('[');
        let parts: Vec<String> =
            class.iter().map(|&(i, sg)| format!("{}{}", sg.to_char(), i + 1)).collect();
        s.push_str(&parts.join(" "));
        s.push(']');
    }
    s
}

/// The unique angular representation of `chi` (not `-chi`) whose first class
/// holds the smallest non-loop `e` with `sigma_e = +`.
fn normalized_classes(chi: &Chirotope2) -> (Vec<usize>, Classes) {
    let n = chi.n();
    let nonloops: Vec<usize> = (0..n).filter(|&i| !chi.is_loop(i)).collect();
    let loops: Vec<usize> = (0..n).filter(|&i| chi.is_loop(i)).collect();
    let e = nonloops[0];
    let mut sigma = vec![Sign::Zero; n];
    sigma[e] = Sign::Pos;
    let (first, rest): (Vec<usize>, Vec<usize>) =
        nonloops.iter().partition(|&&j| chi.get(e, j).is_zero());
    for &j in &rest {
        sigma[j] = chi.get(e, j);
    }
    let witness = rest[0];
    for &j in &first {
        if j != e {
            sigma[j] = -(sigma[witness] * chi.get(witness, j));
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &j in &rest {
        match groups.iter_mut().find(|g| chi.get(g[0], j).is_zero()) {
            Some(g) => g.push(j),
            None => groups.push(vec![j]),
        }
    }
    // chi(a, b) * sigma_a * sigma_b = + exactly when a's class comes first.
    groups.sort_by(|a, b| {
        let (x, y) = (a[0], b[0]);
        match chi.get(x, y) * sigma[x] * sigma[y] {
            Sign::Pos => std::cmp::Ordering::Less,
            Sign::Neg => std::cmp::Ordering::Greater,
            Sign::Zero => std::cmp::Ordering::Equal,
        }
    });
    let mut classes: Classes = vec![first.iter().map(|&j| (j, sigma[j])).collect()];
    classes.extend(groups.into_iter().map(|g| g.into_iter().map(|j| (j, sigma[j])).collect()));
    (loops, classes)
}

fn chirotope_of_classes(n: usize, classes: &Classes) -> Chirotope2 {
    let mut class_of = vec![None; n];
    let mut sigma = vec![Sign::Zero; n];
    for (k, class) in classes.iter().enumerate() {
        for &(i, s) in class {
            class_of[i] = Some(k);
            sigma[i] = s;
        }
    }
    Chirotope2::from_fn(n, |i, j| match (class_of[i], class_of[j]) {
        (Some(a), Some(b)) => sigma[i] * sigma[j] * Sign::of_ordering(b.cmp(&a)),
        _ => Sign::Zero,
    })
}

/// Canonical oriented matroid of a chirotope; `chi` and `-chi` give equal values.
pub fn canonical_form(chi: &Chirotope2) -> Result<Rank2OM> {
    chi.validate()?;
    let candidates = [*chi, chi.negated()].map(|c| {
        let (loops, classes) = normalized_classes(&c);
        let key = serialize(c.n(), &loops, &classes);
        (key, classes)
    });
    let (key, classes) = candidates.into_iter().min_by(|a, b| a.0.cmp(&b.0)).unwrap();
    Ok(Rank2OM::assemble(chi.n(), &classes, key))
}

/// `mu`: the oriented matroid of the column configuration of a `2 x n` matrix.
pub fn mu(matrix: &Matrix) -> Result<Rank2OM> {
    let config = VectorConfig::from_matrix(matrix)?;
    canonical_form(&Chirotope2::from_vectors(&config)?)
}

pub fn mu_config(config: &VectorConfig) -> Result<Rank2OM> {
    canonical_form(&Chirotope2::from_vectors(config)?)
}

/// A failed covector axiom with its witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CovectorViolation {
    LengthMismatch,
    MissingZero,
    Negation { x: SignVector },
    Composition { x: SignVector, y: SignVector },
    Elimination { x: SignVector, y: SignVector, e: usize },
}

impl fmt::Display for CovectorViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CovectorViolation::LengthMismatch => write!(f, "sign vectors of different lengths"),
            CovectorViolation::MissingZero => write!(f, "zero vector missing"),
            CovectorViolation::Negation { x } => write!(f, "negation closure: {} missing", -*x),
            CovectorViolation::Composition { x, y } => {
                write!(f, "composition: {} missing ({x} o {y})", x.compose(y))
            }
            CovectorViolation::Elimination { x, y, e } => {
                write!(f, "elimination of {} between {x} and {y}", e + 1)
            }
        }
    }
}

/// Checks the four covector axioms; the first failure in axiom order is reported.
pub fn validate_covector_axioms(vs: &[SignVector]) -> std::result::Result<(), CovectorViolation> {
    let Some(first) = vs.first() else {
        return Err(CovectorViolation::MissingZero);
    };
    let n = first.len();
    if vs.iter().any(|v| v.len() != n) {
        return Err(CovectorViolation::LengthMismatch);
    }
    let set: HashSet<SignVector> = vs.iter().copied().collect();
    if !set.contains(&SignVector::zero(n)) {
        return Err(CovectorViolation::MissingZero);
    }
    let mut sorted: Vec<SignVector> = set.iter().copied().collect();
    sorted.sort();
    for x in &sorted {
        if !set.contains(&-*x) {
            return Err(CovectorViolation::Negation { x: *x });
        }
    }
    for x in &sorted {
        for y in &sorted {
            if !set.contains(&x.compose(y)) {
                return Err(CovectorViolation::Composition { x: *x, y: *y });
            }
        }
    }
    for x in &sorted {
        for y in &sorted {
            if *x == -*y {
                continue;
            }
            let sep = x.separation_mask(y);
            if sep == 0 {
                continue;
            }
            // Outside the separating set, Z must equal X o Y exactly.
            let target = x.compose(y);
            let free = sep;
            for e in bits(sep) {
                let found = sorted.iter().any(|z| {
                    z.get(e).is_zero()
                        && (z.plus_mask() & !free) == (target.plus_mask() & !free)
                        && (z.minus_mask() & !free) == (target.minus_mask() & !free)
                });
                if !found {
                    return Err(CovectorViolation::Elimination { x: *x, y: *y, e });
                }
            }
        }
    }
    Ok(())
}

/// A failure of the rank-2 basis orientation property at non-loop `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisOrientationViolation {
    pub x: usize,
    pub cocircuit: Option<SignVector>,
}

impl Rank2OM {
    fn assemble(n: usize, classes: &Classes, key: String) -> Rank2OM {
        let mut class_of = vec![None; n];
        let mut sigma = vec![Sign::Zero; n];
        for (k, class) in classes.iter().enumerate() {
            for &(i, s) in class {
                class_of[i] = Some(k);
                sigma[i] = s;
            }
        }
        let chi = chirotope_of_classes(n, classes);
        Rank2OM { n, class_of, sigma, p: classes.len(), chi, key }
    }

    /// Builds an oriented matroid from classes listed in angular order.
    ///
    /// Elements not mentioned are loops. Fails unless there are at least two
    /// classes, the classes are disjoint, and every sign is nonzero.
    pub fn from_classes(n: usize, classes: &[Vec<(usize, Sign)>]) -> Result<Rank2OM> {
        if n > MAX_N {
            return Err(Error::LimitExceeded { n, limit: MAX_N });
        }
        if classes.len() < 2 {
            return Err(Error::RankDeficient("fewer than two parallel classes".into()));
        }
        let mut seen = vec![false; n];
        for class in classes {
            if class.is_empty() {
                return Err(Error::Parse("empty class".into()));
            }
            for &(i, s) in class {
                if i >= n || seen[i] || s.is_zero() {
                    return Err(Error::Parse(format!("bad class entry for element {}", i + 1)));
                }
                seen[i] = true;
            }
        }
        canonical_form(&chirotope_of_classes(n, &classes.to_vec()))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of parallel classes, `p_M`.
    pub fn p(&self) -> usize {
        self.p
    }

    /// Number of non-loops, `l_M`.
    pub fn l(&self) -> usize {
        self.class_of.iter().filter(|c| c.is_some()).count()
    }

    /// `h(M) = l_M + p_M - 4`.
    pub fn rank_h(&self) -> usize {
        self.l() + self.p - 4
    }

    pub fn chirotope(&self) -> &Chirotope2 {
        &self.chi
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn loops(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.class_of[i].is_none()).collect()
    }

    pub fn loop_mask(&self) -> u32 {
        self.loops().iter().fold(0, |m, &i| m | 1 << i)
    }

    pub fn is_loop(&self, i: usize) -> bool {
        self.class_of[i].is_none()
    }

    /// Class index of `i` in the stored angular order.
    pub fn class_of(&self, i: usize) -> Option<usize> {
        self.class_of[i]
    }

    pub fn sigma(&self, i: usize) -> Sign {
        self.sigma[i]
    }

    /// The classes in angular order, elements ascending.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.p];
        for i in 0..self.n {
            if let Some(k) = self.class_of[i] {
                out[k].push(i);
            }
        }
        out
    }

    pub fn signed_classes(&self) -> Classes {
        self.classes()
            .into_iter()
            .map(|c| c.into_iter().map(|i| (i, self.sigma[i])).collect())
            .collect()
    }

    pub fn chi(&self, i: usize, j: usize) -> Sign {
        self.chi.get(i, j)
    }

    pub fn is_basis(&self, i: usize, j: usize) -> bool {
        !self.chi(i, j).is_zero()
    }

    /// Cocircuit vanishing exactly on class `k` and the loops.
    pub fn class_cocircuit(&self, k: usize) -> SignVector {
        let mut v = SignVector::zero(self.n);
        for i in 0..self.n {
            if let Some(c) = self.class_of[i] {
                v.set(i, self.sigma[i] * Sign::of_ordering(c.cmp(&k)));
            }
        }
        v
    }

    /// Tope on the arc after class `k`: positive exactly on classes beyond `k`.
    pub fn gap_tope(&self, k: usize) -> SignVector {
        let mut v = SignVector::zero(self.n);
        for i in 0..self.n {
            if let Some(c) = self.class_of[i] {
                let s = if c > k { Sign::Pos } else { Sign::Neg };
                v.set(i, self.sigma[i] * s);
            }
        }
        v
    }

    /// All covectors: zero, then `+-` each cocircuit and `+-` each tope.
    pub fn covectors(&self) -> Vec<SignVector> {
        let mut out = vec![SignVector::zero(self.n)];
        for k in 0..self.p {
            let d = self.class_cocircuit(k);
            let t = self.gap_tope(k);
            out.extend([d, -d, t, -t]);
        }
        out
    }

    pub fn cocircuits(&self) -> Vec<SignVector> {
        (0..self.p).flat_map(|k| {
            let d = self.class_cocircuit(k);
            [d, -d]
        })
        .collect()
    }

    /// Topes, i.e. the covectors of maximal support.
    pub fn topes(&self) -> Vec<SignVector> {
        (0..self.p).flat_map(|k| {
            let t = self.gap_tope(k);
            [t, -t]
        })
        .collect()
    }

    pub fn is_covector(&self, z: &SignVector) -> bool {
        z.len() == self.n && self.covectors().contains(z)
    }

    /// Checks `chi(e, x) = eps * D(e)` over non-loops `e` outside `class(x)`,
    /// where `D` is the cocircuit vanishing on `class(x)`.
    pub fn check_basis_orientation(&self) -> std::result::Result<(), BasisOrientationViolation> {
        let cocircuits = self.cocircuits();
        for x in 0..self.n {
            let Some(kx) = self.class_of[x] else { continue };
            let class_mask = (0..self.n)
                .filter(|&i| self.class_of[i] == Some(kx))
                .fold(0u32, |m, i| m | 1 << i);
            let vanish = class_mask | self.loop_mask();
            let d = cocircuits.iter().find(|d| d.zero_mask() == vanish).copied();
            let Some(d) = d else {
                return Err(BasisOrientationViolation { x, cocircuit: None });
            };
            let others: Vec<usize> =
                (0..self.n).filter(|&e| self.class_of[e].is_some() && self.class_of[e] != Some(kx)).collect();
            let ok = [Sign::Pos, Sign::Neg]
                .iter()
                .any(|&eps| others.iter().all(|&e| self.chi(e, x) == eps * d.get(e)));
            if !ok {
                return Err(BasisOrientationViolation { x, cocircuit: Some(d) });
            }
        }
        Ok(())
    }

    /// Flips the orientation of every non-loop in `a` (a bitmask).
    pub fn reorient(&self, a: u32) -> Rank2OM {
        let chi = Chirotope2::from_fn(self.n, |i, j| {
            let flip = ((a >> i) & 1) ^ ((a >> j) & 1) == 1;
            if flip {
                -self.chi(i, j)
            } else {
                self.chi(i, j)
            }
        });
        canonical_form(&chi).expect("reorientation preserves validity")
    }

    /// Transports along `perm`: `chi_new(perm[i], perm[j]) = chi(i, j)`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Rank2OM> {
        let mut inv = vec![usize::MAX; self.n];
        if perm.len() != self.n {
            return Err(Error::Parse("permutation has the wrong length".into()));
        }
        for (i, &pi) in perm.iter().enumerate() {
            if pi >= self.n || inv[pi] != usize::MAX {
                return Err(Error::Parse("not a permutation".into()));
            }
            inv[pi] = i;
        }
        let chi = Chirotope2::from_fn(self.n, |a, b| self.chi(inv[a], inv[b]));
        canonical_form(&chi)
    }

    /// `P_M(i)`: the parallel and anti-parallel class of a non-loop.
    pub fn parallel_class(&self, i: usize) -> Result<Vec<usize>> {
        match self.class_of[i] {
            None => Err(Error::LoopElement(i)),
            Some(k) => Ok((0..self.n).filter(|&j| self.class_of[j] == Some(k)).collect()),
        }
    }

    /// Literal reading: `i` is in the hull when every nonzero covector that is
    /// `-` at `i` is also `-` somewhere on `s`.
    pub fn convex_hull(&self, s: u32) -> u32 {
        let covectors = self.covectors();
        (0..self.n)
            .filter(|&i| {
                covectors
                    .iter()
                    .filter(|c| c.get(i) == Sign::Neg)
                    .all(|c| c.minus_mask() & s != 0)
            })
            .fold(0, |m, i| m | 1 << i)
    }

    /// A copy whose stored sign at `i` is flipped while the chirotope and key
    /// are kept. The result is internally inconsistent on purpose; it exists
    /// to exercise [`Rank2OM::check_basis_orientation`].
    #[doc(hidden)]
    pub fn with_corrupted_sign(&self, i: usize) -> Rank2OM {
        let mut out = self.clone();
        out.sigma[i] = -out.sigma[i];
        out
    }

    /// A realization with class `k` along `(1 - t^2, 2t)` at `t = k`, which
    /// places the classes at strictly increasing angles in `[0, pi)`.
    pub fn standard_realization(&self) -> VectorConfig {
        use crate::rational::q;
        let cols = (0..self.n)
            .map(|i| match self.class_of[i] {
                None => [q(0), q(0)],
                Some(k) => {
                    let t = k as i64;
                    let s = if self.sigma[i] == Sign::Pos { 1 } else { -1 };
                    [q(s * (1 - t * t)), q(s * 2 * t)]
                }
            })
            .collect();
        VectorConfig::new(cols)
    }
}

impl fmt::Display for Rank2OM {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key)
    }
}

impl FromStr for Rank2OM {
    type Err = Error;

    /// Parses the text format `n=<n>;loops=<list>;classes=[+1 -3][+2]`.
    /// Any class order and sign choice describing the same matroid is accepted.
    fn from_str(s: &str) -> Result<Rank2OM> {
        let bad = |why: &str| Error::Parse(format!("oriented matroid {s:?}: {why}"));
        let mut parts = s.trim().split(';');
        let n: usize = parts
            .next()
            .and_then(|p| p.strip_prefix("n="))
            .ok_or_else(|| bad("missing n="))?
            .parse()
            .map_err(|_| bad("bad n"))?;
        let loops_part = parts.next().and_then(|p| p.strip_prefix("loops=")).ok_or_else(|| bad("missing loops="))?;
        let classes_part =
            parts.next().and_then(|p| p.strip_prefix("classes=")).ok_or_else(|| bad("missing classes="))?;
        if parts.next().is_some() {
            return Err(bad("trailing fields"));
        }
        let mut mentioned = vec![false; n];
        for tok in loops_part.split(',').filter(|t| !t.is_empty()) {
            let i: usize = tok.trim().parse().map_err(|_| bad("bad loop"))?;
            if i == 0 || i > n || mentioned[i - 1] {
                return Err(bad("loop out of range"));
            }
            mentioned[i - 1] = true;
        }
        let body = classes_part.strip_prefix('[').and_then(|b| b.strip_suffix(']')).ok_or_else(|| bad("classes"))?;
        let mut classes: Classes = Vec::new();
        for chunk in body.split("][") {
            let mut class = Vec::new();
            for tok in chunk.split_whitespace() {
                let mut chars = tok.chars();
                let sg = chars.next().and_then(Sign::from_char).filter(|s| !s.is_zero()).ok_or_else(|| bad("sign"))?;
                let i: usize = chars.as_str().parse().map_err(|_| bad("element"))?;
                if i == 0 || i > n || mentioned[i - 1] {
                    return Err(bad("element out of range or repeated"));
                }
                mentioned[i - 1] = true;
                class.push((i - 1, sg));
            }
            classes.push(class);
        }
        if mentioned.iter().any(|m| !m) {
            return Err(bad("every element must be a loop or in a class"));
        }
        Rank2OM::from_classes(n, &classes)
    }
}

/// A rank-1 oriented matroid `{0, z, -z}`, stored with `z` normalized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rank1OM {
    z: SignVector,
}

impl Rank1OM {
    pub fn new(z: SignVector) -> Result<Rank1OM> {
        if z.is_zero() {
            return Err(Error::RankDeficient("rank-1 covector must be nonzero".into()));
        }
        Ok(Rank1OM { z: z.normalized() })
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    /// The representative whose first nonzero entry is `+`.
    pub fn z(&self) -> SignVector {
        self.z
    }

    pub fn covectors(&self) -> [SignVector; 3] {
        [SignVector::zero(self.n()), self.z, -self.z]
    }

    /// Weak order of rank-1 matroids: `z <= w` or `z <= -w`.
    pub fn weak_leq(&self, other: &Rank1OM) -> bool {
        self.z.leq(&other.z) || self.z.leq(&-other.z)
    }
}
