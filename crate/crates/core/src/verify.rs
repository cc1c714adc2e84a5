//! Exhaustive property suites with machine-readable reports.
//!
//! A suite either passes, fails with witnesses, or returns an error when it
//! runs out of resources (`LimitExceeded`, `BudgetExceeded`).

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::chart::{sample_boundary, sample_cell, CellChart};
use crate::complex::order_complex;
use crate::error::{Error, Result};
use crate::flags::{
    base_pair, enumerate_macp1, enumerate_macp12, flag_chart_dimension, flag_coatoms, flag_leq, flag_rao_ordering,
    iota_embed, iota_relative, sample_flag_boundary, sample_flag_realizations, FlagOM, FlagPoset,
};
use crate::homology::{betti_gf2, is_sphere_profile};
use crate::macp::{coatoms_cr, enumerate_macp2, rao_ordering, weak_leq, weak_leq_chirotope, MacP2Poset};
use crate::om::{mu, mu_config, validate_covector_axioms, Rank2OM};
use crate::rao::{verify_recursive_atom_ordering, RaoOptions, DEFAULT_BUDGET};
use crate::sign::SignVector;

/// Witnesses kept per report.
const MAX_WITNESSES: usize = 20;
const RP_LIMIT: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Covers,
    Rank,
    Thin,
    Semimodular,
    Rao,
    Spheres,
    Rp,
    FlagsAll,
    Axioms,
    Cells,
    Embedding,
    Comparator,
    Grassmannian,
}

impl Suite {
    pub const ALL: [Suite; 13] = [
        Suite::Covers,
        Suite::Rank,
        Suite::Thin,
        Suite::Semimodular,
        Suite::Rao,
        Suite::Spheres,
        Suite::Rp,
        Suite::FlagsAll,
        Suite::Axioms,
        Suite::Cells,
        Suite::Embedding,
        Suite::Comparator,
        Suite::Grassmannian,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Covers => "covers",
            Suite::Rank => "rank",
            Suite::Thin => "thin",
            Suite::Semimodular => "semimodular",
            Suite::Rao => "rao",
            Suite::Spheres => "spheres",
            Suite::Rp => "rp",
            Suite::FlagsAll => "flags-all",
            Suite::Axioms => "axioms",
            Suite::Cells => "cells",
            Suite::Embedding => "embedding",
            Suite::Comparator => "comparator",
            Suite::Grassmannian => "grassmannian",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub budget: u64,
    pub seed: u64,
    /// Samples per cell for the round-trip checks.
    pub samples: usize,
    /// Samples per boundary face.
    pub boundary_samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { budget: DEFAULT_BUDGET, seed: 0, samples: 25, boundary_samples: 5 }
    }
}

impl VerifyOptions {
    fn rao(&self) -> RaoOptions {
        RaoOptions { budget: self.budget, semimodular_shortcut: false }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub n: usize,
    pub passed: bool,
    pub checked: usize,
    pub failure_count: usize,
    pub failures: Vec<String>,
    pub data: Value,
}

impl SuiteReport {
    fn new(suite: &str, n: usize, checked: usize, failures: Vec<String>, data: Value) -> SuiteReport {
        let failure_count = failures.len();
        SuiteReport {
            suite: suite.to_string(),
            n,
            passed: failures.is_empty(),
            checked,
            failure_count,
            failures: failures.into_iter().take(MAX_WITNESSES).collect(),
            data,
        }
    }

    /// Combines sub-reports into one named report.
    fn merge(suite: &str, n: usize, parts: Vec<SuiteReport>) -> SuiteReport {
        let checked = parts.iter().map(|p| p.checked).sum();
        let failure_count = parts.iter().map(|p| p.failure_count).sum();
        let failures: Vec<String> = parts
            .iter()
            .flat_map(|p| p.failures.iter().map(move |w| format!("{}: {w}", p.suite)))
            .take(MAX_WITNESSES)
            .collect();
        let data = Value::Object(parts.iter().map(|p| (p.suite.clone(), serde_json::to_value(p).unwrap())).collect());
        SuiteReport { suite: suite.into(), n, passed: failure_count == 0, checked, failure_count, failures, data }
    }
}

/// Runs one suite on `n`.
pub fn run_suite(suite: Suite, n: usize, opts: &VerifyOptions) -> Result<SuiteReport> {
    match suite {
        Suite::Covers => check_covers(&enumerate_macp2(n)?),
        Suite::Rank => check_rank(&enumerate_macp2(n)?),
        Suite::Thin => check_thin(&enumerate_macp2(n)?),
        Suite::Semimodular => check_semimodular(&enumerate_macp2(n)?),
        Suite::Rao => check_rao(&enumerate_macp2(n)?, opts),
        Suite::Spheres => {
            let mut parts = vec![check_spheres(&enumerate_macp2(n)?, 4)?];
            if n <= 4 {
                parts.push(check_flag_spheres(&enumerate_macp12(n)?)?);
            }
            Ok(SuiteReport::merge("spheres", n, parts))
        }
        Suite::Rp => check_rp(n),
        Suite::FlagsAll => {
            let fp = enumerate_macp12(n)?;
            let parts = vec![
                check_flag_rank(&fp),
                check_flag_thin(&fp)?,
                check_flag_semimodular(&fp)?,
                check_flag_rao(&fp, opts)?,
                check_embedding(&fp)?,
                check_flag_cells(&fp, opts)?,
            ];
            Ok(SuiteReport::merge("flags-all", n, parts))
        }
        Suite::Axioms => check_axioms(&enumerate_macp2(n)?),
        Suite::Cells => check_cells(&enumerate_macp2(n)?, opts),
        Suite::Embedding => check_embedding(&enumerate_macp12(n)?),
        Suite::Comparator => check_comparator(&crate::macp::all_rank2(n)),
        Suite::Grassmannian => check_grassmannian(&enumerate_macp2(n)?),
    }
}

fn witnesses<T: Sync>(items: &[T], f: impl Fn(&T) -> Result<Option<String>> + Sync + Send) -> Result<Vec<String>> {
    let found: Vec<Option<String>> = items.par_iter().map(f).collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// Lower covers from the order relation against the two cover rules.
pub fn check_covers(p: &MacP2Poset) -> Result<SuiteReport> {
    let fails = witnesses(&p.elements, |m| {
        let brute: HashSet<Rank2OM> = p.lower_covers(m)?.into_iter().collect();
        let rules: HashSet<Rank2OM> = coatoms_cr(m).into_iter().collect();
        Ok((brute != rules).then(|| format!("{m}: {} covers by order, {} by rules", brute.len(), rules.len())))
    })?;
    let edges = p.poset.hasse_edges().len();
    Ok(SuiteReport::new("covers", p.n, p.len(), fails, json!({ "elements": p.len(), "hasse_edges": edges })))
}

/// `h(M) = l + p - 4` against heights in the poset.
pub fn check_rank(p: &MacP2Poset) -> Result<SuiteReport> {
    let mut fails = Vec::new();
    match p.poset.height_ranks() {
        Err(e) => fails.push(format!("not graded at cover {:?}", (e.lower, e.upper))),
        Ok(r) => {
            for (k, m) in p.elements.iter().enumerate() {
                if r[k] != m.rank_h() {
                    fails.push(format!("{m}: height {} but h = {}", r[k], m.rank_h()));
                }
            }
        }
    }
    let mut f_vector = vec![0usize; p.heights.iter().max().map_or(0, |h| h + 1)];
    for &h in &p.heights {
        f_vector[h] += 1;
    }
    Ok(SuiteReport::new("rank", p.n, p.len(), fails, json!({ "elements_per_rank": f_vector })))
}

pub fn check_thin(p: &MacP2Poset) -> Result<SuiteReport> {
    let fails = witnesses(&p.elements, |m| {
        let li = p.lower_interval(m)?;
        Ok(li.poset.is_thin().err().map(|v| format!("{m}: {v:?}")))
    })?;
    Ok(SuiteReport::new("thin", p.n, p.len(), fails, json!({})))
}

/// Every interval `[W, T]` is totally semimodular.
pub fn check_semimodular(p: &MacP2Poset) -> Result<SuiteReport> {
    let idx: Vec<usize> = (0..p.len()).collect();
    let fails = witnesses(&idx, |&t| {
        Ok(p.poset.is_totally_semimodular_below(t).err().map(|v| {
            format!("below {}: {} covers {} and {}", p.elements[t], p.elements[v.z], p.elements[v.u], p.elements[v.v])
        }))
    })?;
    let pairs: usize = (0..p.len()).map(|t| p.poset.down_set(t).count_ones(..)).sum();
    Ok(SuiteReport::new("semimodular", p.n, pairs, fails, json!({ "comparable_pairs": pairs })))
}

/// The affine-line atom ordering of every lower interval, verified without the semimodular shortcut.
pub fn check_rao(p: &MacP2Poset, opts: &VerifyOptions) -> Result<SuiteReport> {
    let fails = witnesses(&p.elements, |m| {
        let real = m.standard_realization();
        let li = p.lower_interval(m)?;
        let order = li.atom_indices(&rao_ordering(m, &real)?)?;
        Ok((!verify_recursive_atom_ordering(&li.poset, &order, opts.rao())?).then(|| m.to_string()))
    })?;
    Ok(SuiteReport::new("rao", p.n, p.len(), fails, json!({ "shortcut": false, "budget": opts.budget })))
}

/// Proper parts of `[0, M]` against the sphere `S^{h(M)-1}` for `1 <= h(M) <= max_h`.
pub fn check_spheres(p: &MacP2Poset, max_h: usize) -> Result<SuiteReport> {
    let targets: Vec<&Rank2OM> = p.elements.iter().filter(|m| (1..=max_h).contains(&m.rank_h())).collect();
    let fails = witnesses(&targets, |m| {
        let li = p.lower_interval(m)?;
        let k = order_complex(&li.poset.proper_part().poset);
        let d = m.rank_h() - 1;
        Ok((!is_sphere_profile(&k, d)).then(|| format!("{m}: betti {:?}, expected S^{d}", betti_gf2(&k).betti)))
    })?;
    let mut per_h: HashMap<usize, usize> = HashMap::new();
    for m in &targets {
        *per_h.entry(m.rank_h()).or_default() += 1;
    }
    let mut per_h: Vec<(usize, usize)> = per_h.into_iter().collect();
    per_h.sort_unstable();
    Ok(SuiteReport::new("spheres", p.n, targets.len(), fails, json!({ "max_h": max_h, "per_h": per_h })))
}

pub fn check_flag_spheres(fp: &FlagPoset) -> Result<SuiteReport> {
    let targets: Vec<&FlagOM> = fp.elements.iter().filter(|f| f.height() >= 1).collect();
    let fails = witnesses(&targets, |f| {
        let li = fp.lower_interval(f)?;
        let k = order_complex(&li.poset.proper_part().poset);
        let d = f.height() - 1;
        Ok((!is_sphere_profile(&k, d)).then(|| format!("{f}: betti {:?}, expected S^{d}", betti_gf2(&k).betti)))
    })?;
    Ok(SuiteReport::new("flag-spheres", fp.n, targets.len(), fails, json!({})))
}

/// `MacP(1, n)` against the GF(2) Betti numbers of `RP^{n-1}`.
pub fn check_rp(n: usize) -> Result<SuiteReport> {
    if n == 0 || n > RP_LIMIT {
        return Err(Error::LimitExceeded { n, limit: RP_LIMIT });
    }
    let (elements, poset) = enumerate_macp1(n);
    let b = betti_gf2(&order_complex(&poset));
    let mut fails = Vec::new();
    if b.betti != vec![1; n] {
        fails.push(format!("betti {:?}", b.betti));
    }
    Ok(SuiteReport::new(
        "rp",
        n,
        elements.len(),
        fails,
        json!({ "elements": elements.len(), "f_vector": b.f_vector, "betti": b.betti, "euler": b.euler }),
    ))
}

/// Covector axioms, cocircuit count, basis orientation and realization round trips.
pub fn check_axioms(p: &MacP2Poset) -> Result<SuiteReport> {
    let fails = witnesses(&p.elements, |m| {
        let cov = m.covectors();
        let mut why = Vec::new();
        if let Err(v) = validate_covector_axioms(&cov) {
            why.push(format!("covector axioms: {v}"));
        }
        let nonzero: Vec<SignVector> = cov.iter().copied().filter(|x| !x.is_zero()).collect();
        if nonzero.len() != 4 * m.p() {
            why.push(format!("{} nonzero covectors for p = {}", nonzero.len(), m.p()));
        }
        let minimal: HashSet<SignVector> = nonzero
            .iter()
            .copied()
            .filter(|x| !nonzero.iter().any(|y| y.support_mask() & !x.support_mask() == 0 && y.support_mask() != x.support_mask()))
            .collect();
        if minimal != m.cocircuits().into_iter().collect() {
            why.push("cocircuits are not the minimal supports".into());
        }
        if let Err(v) = m.check_basis_orientation() {
            why.push(format!("basis orientation: {v:?}"));
        }
        if m.chirotope().validate().is_err() {
            why.push("Grassmann-Plucker".into());
        }
        if mu_config(&m.standard_realization()).as_ref() != Ok(m) {
            why.push("realization round trip".into());
        }
        Ok((!why.is_empty()).then(|| format!("{m}: {}", why.join("; "))))
    })?;
    Ok(SuiteReport::new("axioms", p.n, p.len(), fails, json!({})))
}

/// Chart samples, chart dimension and boundary recovery for every element and coatom.
pub fn check_cells(p: &MacP2Poset, opts: &VerifyOptions) -> Result<SuiteReport> {
    let faces = std::sync::atomic::AtomicUsize::new(0);
    let fails = witnesses(&p.elements, |m| {
        let mut why = Vec::new();
        if CellChart::new(m).dimension() != m.rank_h() {
            why.push("chart dimension".to_string());
        }
        for x in sample_cell(m, opts.samples, opts.seed) {
            if mu(&x).as_ref() != Ok(m) {
                why.push("sample outside the cell".into());
                break;
            }
        }
        for face in coatoms_cr(m) {
            faces.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            let s = sample_boundary(m, &face, opts.boundary_samples, opts.seed)?;
            if !s.iter().all(|b| b.all_recover()) {
                why.push(format!("boundary {face} not recovered"));
            }
        }
        Ok((!why.is_empty()).then(|| format!("{m}: {}", why.join("; "))))
    })?;
    let faces = faces.into_inner();
    Ok(SuiteReport::new(
        "cells",
        p.n,
        p.len(),
        fails,
        json!({ "samples": opts.samples, "boundary_faces": faces, "boundary_samples": opts.boundary_samples, "eps_steps": crate::chart::EPS_STEPS }),
    ))
}

/// Flag heights against `h(M) + h_M(N)`.
pub fn check_flag_rank(fp: &FlagPoset) -> SuiteReport {
    let mut fails = Vec::new();
    match fp.poset.height_ranks() {
        Err(e) => fails.push(format!("not graded at cover {:?}", (e.lower, e.upper))),
        Ok(r) => {
            for (k, f) in fp.elements.iter().enumerate() {
                if r[k] != f.height() {
                    fails.push(format!("{f}: height {} but h(M) + h_M(N) = {}", r[k], f.height()));
                }
            }
        }
    }
    SuiteReport::new("flag-rank", fp.n, fp.len(), fails, json!({ "elements": fp.len() }))
}

pub fn check_flag_thin(fp: &FlagPoset) -> Result<SuiteReport> {
    let fails = witnesses(&fp.elements, |f| {
        let li = fp.lower_interval(f)?;
        Ok(li.poset.is_thin().err().map(|v| format!("{f}: {v:?}")))
    })?;
    Ok(SuiteReport::new("flag-thin", fp.n, fp.len(), fails, json!({})))
}

pub fn check_flag_semimodular(fp: &FlagPoset) -> Result<SuiteReport> {
    let idx: Vec<usize> = (0..fp.len()).collect();
    let fails = witnesses(&idx, |&t| {
        Ok(fp.poset.is_totally_semimodular_below(t).err().map(|v| format!("below {}: at {}", fp.elements[t], fp.elements[v.z])))
    })?;
    Ok(SuiteReport::new("flag-semimodular", fp.n, fp.len(), fails, json!({})))
}

pub fn check_flag_rao(fp: &FlagPoset, opts: &VerifyOptions) -> Result<SuiteReport> {
    let fails = witnesses(&fp.elements, |f| {
        let real = sample_flag_realizations(f, 1, opts.seed).remove(0);
        let li = fp.lower_interval(f)?;
        let order = flag_rao_ordering(f, &real)?;
        let idx = li.atom_indices(&order)?;
        let mut atoms = li.poset.atoms();
        let mut sorted = idx.clone();
        atoms.sort_unstable();
        sorted.sort_unstable();
        if atoms != sorted {
            return Ok(Some(format!("{f}: ordering does not list the atoms")));
        }
        Ok((!verify_recursive_atom_ordering(&li.poset, &idx, opts.rao())?).then(|| f.to_string()))
    })?;
    Ok(SuiteReport::new("flag-rao", fp.n, fp.len(), fails, json!({ "shortcut": false })))
}

/// Flag samples, flag chart dimension and boundary recovery for every flag coatom.
pub fn check_flag_cells(fp: &FlagPoset, opts: &VerifyOptions) -> Result<SuiteReport> {
    let fails = witnesses(&fp.elements, |f| {
        let mut why = Vec::new();
        if flag_chart_dimension(f) != f.height() {
            why.push("chart dimension".to_string());
        }
        if sample_flag_realizations(f, opts.samples, opts.seed).iter().any(|r| r.flag().as_ref() != Ok(f)) {
            why.push("sample outside the cell".into());
        }
        for face in flag_coatoms(f) {
            let s = sample_flag_boundary(f, &face, opts.boundary_samples, opts.seed)?;
            if !s.iter().all(|b| b.all_recover()) {
                why.push(format!("boundary {face} not recovered"));
            }
        }
        Ok((!why.is_empty()).then(|| format!("{f}: {}", why.join("; "))))
    })?;
    Ok(SuiteReport::new("flag-cells", fp.n, fp.len(), fails, json!({ "samples": opts.samples })))
}

/// Upper intervals of flags against upper intervals of `MacP(2, n + 1)`.
///
/// For every base flag `f0`: `iota` relative to `f0` is injective on flags
/// above `f0`, preserves and reflects the order, and its image is exactly the
/// set of elements above `iota(f0)`. The argument-normalized `iota` is
/// compared with the relative one on the bases where they should agree, and
/// its global behavior is reported as data.
pub fn check_embedding(fp: &FlagPoset) -> Result<SuiteReport> {
    let big = enumerate_macp2(fp.n + 1)?;
    let idx_of = |m: &Rank2OM| big.index_of(m).ok_or_else(|| Error::ElementNotFound(m.to_string()));
    let fails = witnesses(&fp.elements, |f0| {
        let above = fp.upper_set(f0)?;
        let images: Vec<usize> = above.iter().map(|f| idx_of(&iota_relative(f, f0)?)).collect::<Result<_>>()?;
        let distinct: HashSet<usize> = images.iter().copied().collect();
        if distinct.len() != images.len() {
            return Ok(Some(format!("{f0}: not injective above")));
        }
        let base = idx_of(&iota_relative(f0, f0)?)?;
        let target: HashSet<usize> = big.poset.up_set(base).ones().collect();
        if distinct != target {
            return Ok(Some(format!("{f0}: image has {} elements, interval has {}", distinct.len(), target.len())));
        }
        for (a, fa) in above.iter().enumerate() {
            for (b, fb) in above.iter().enumerate() {
                if flag_leq(fa, fb) != big.poset.leq(images[a], images[b]) {
                    return Ok(Some(format!("{f0}: order differs for {fa} and {fb}")));
                }
            }
        }
        let m0 = f0.m();
        if m0.is_basis(0, 1) && base_pair(m0) == (0, 1) && !f0.z().get(0).is_zero() {
            for f in &above {
                if iota_embed(f)? != iota_relative(f, f0)? {
                    return Ok(Some(format!("{f0}: argument-normalized iota differs at {f}")));
                }
            }
        }
        Ok(None)
    })?;
    // Global behavior of the argument-normalized map on flags with {1, 2} a basis.
    let with_basis: Vec<&FlagOM> = fp.elements.iter().filter(|f| f.m().is_basis(0, 1)).collect();
    let arg: Vec<Rank2OM> = with_basis.iter().map(|f| iota_embed(f)).collect::<Result<_>>()?;
    let arg_injective = arg.iter().collect::<HashSet<_>>().len() == arg.len();
    let mut mismatches = 0usize;
    for (a, fa) in with_basis.iter().enumerate() {
        for (b, fb) in with_basis.iter().enumerate() {
            if flag_leq(fa, fb) != weak_leq_chirotope(&arg[a], &arg[b]) && a != b {
                mismatches += 1;
            }
        }
    }
    let mut fails = fails;
    if !arg_injective {
        fails.push("argument-normalized iota is not injective".into());
    }
    Ok(SuiteReport::new(
        "embedding",
        fp.n,
        fp.len(),
        fails,
        json!({
            "flags": fp.len(),
            "target_elements": big.len(),
            "arg_iota_injective": arg_injective,
            "arg_iota_global_order_mismatches": mismatches,
        }),
    ))
}

/// `weak_leq` against `weak_leq_chirotope` on all ordered pairs.
pub fn check_comparator(elements: &[Rank2OM]) -> Result<SuiteReport> {
    let n = elements.first().map_or(0, Rank2OM::n);
    let fails = witnesses(elements, |a| {
        Ok(elements
            .iter()
            .find(|b| weak_leq(a, b) != weak_leq_chirotope(a, b))
            .map(|b| format!("{a} vs {b}")))
    })?;
    let pairs = elements.len() * elements.len();
    Ok(SuiteReport::new("comparator", n, pairs, fails, json!({ "pairs": pairs })))
}

/// GF(2) Schubert cell counts of `Gr(2, R^n)` by dimension.
///
/// Cells are partitions in a `2 x (n - 2)` box. Every incidence number of
/// the real Schubert cell complex is `0` or `+-2`, so the GF(2) cellular
/// boundary vanishes and the cell counts are the Betti numbers.
pub fn schubert_cell_counts(n: usize) -> Vec<usize> {
    let w = n.saturating_sub(2);
    let mut counts = vec![0usize; 2 * w + 1];
    for a in 0..=w {
        for b in 0..=a {
            counts[a + b] += 1;
        }
    }
    counts
}

/// `||MacP(2, n)||` against the Schubert cell oracle.
pub fn check_grassmannian(p: &MacP2Poset) -> Result<SuiteReport> {
    let b = betti_gf2(&order_complex(&p.poset));
    let expected = schubert_cell_counts(p.n);
    let mut fails = Vec::new();
    if b.betti != expected {
        fails.push(format!("betti {:?}, expected {expected:?}", b.betti));
    }
    Ok(SuiteReport::new(
        "grassmannian",
        p.n,
        p.len(),
        fails,
        json!({ "f_vector": b.f_vector, "betti": b.betti, "euler": b.euler, "expected": expected }),
    ))
}
