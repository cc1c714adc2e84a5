//! Runs every acceptance criterion and prints one PASS or FAIL line each.
//! Every criterion is exact: the pinned tolerance is zero mismatches.
//! Exits nonzero when any criterion fails.

mod common;

use std::collections::HashSet;

use macp::chart::EPS_STEPS;
use macp::flags::{enumerate_macp12, enumerate_macp1};
use macp::macp::{coatoms_cr, enumerate_macp2, enumerate_macp2_with, Comparator};
use macp::om::Rank2OM;
use macp::rao::DEFAULT_BUDGET;
use macp::verify::{
    check_cells, check_comparator, check_embedding, check_flag_cells, check_flag_rao, check_flag_semimodular,
    check_flag_spheres, check_grassmannian, check_rao, check_rp, check_semimodular, check_spheres, check_thin,
    SuiteReport, VerifyOptions,
};

use common::{gaussian_binomial_2, oracle_h, to_om, OraclePoset};

/// Allowed mismatches for every criterion.
const TOLERANCE: usize = 0;
/// Round-trip samples per cell.
const SAMPLES: usize = 25;
/// Boundary samples per cover.
const BOUNDARY_SAMPLES: usize = 5;
/// Largest height certified as a sphere.
const SPHERE_MAX_H: usize = 4;
const SEED: u64 = 0;

fn opts() -> VerifyOptions {
    VerifyOptions { budget: DEFAULT_BUDGET, seed: SEED, samples: SAMPLES, boundary_samples: BOUNDARY_SAMPLES }
}

/// Failure count and a one-line summary.
type Outcome = (usize, String);

type Criterion = (u32, &'static str, fn() -> Outcome);

fn suite_failures(reports: &[SuiteReport]) -> (usize, String) {
    let total = reports.iter().map(|r| r.failure_count).sum();
    let detail = reports
        .iter()
        .map(|r| {
            let first = r.failures.first().map(|w| format!(" first: {w}")).unwrap_or_default();
            format!("{} n={} checked={} failed={}{first}", r.suite, r.n, r.checked, r.failure_count)
        })
        .collect::<Vec<_>>()
        .join("; ");
    (total, detail)
}

fn criterion_01_covers() -> Outcome {
    let mut failures = 0;
    let mut detail = Vec::new();
    for n in 3..=5 {
        let oracle = OraclePoset::new(n);
        let oms: Vec<Rank2OM> = oracle.chis.iter().map(|c| to_om(c, n)).collect();
        let lib = enumerate_macp2(n).unwrap();
        if lib.len() != oracle.len() {
            failures += 1;
        }
        for m in 0..oracle.len() {
            let brute: HashSet<&Rank2OM> = oracle.lower_covers(m).into_iter().map(|x| &oms[x]).collect();
            let rules = coatoms_cr(&oms[m]);
            let rules_set: HashSet<&Rank2OM> = rules.iter().collect();
            if brute != rules_set || rules.len() != rules_set.len() {
                failures += 1;
            }
        }
        detail.push(format!("n={n}: {} elements", oracle.len()));
    }
    (failures, detail.join(", "))
}

fn criterion_02_rank() -> Outcome {
    let mut failures = 0;
    for n in 2..=5 {
        let oracle = OraclePoset::new(n);
        let heights = oracle.heights();
        for (i, chi) in oracle.chis.iter().enumerate() {
            let m = to_om(chi, n);
            if m.rank_h() as isize != heights[i] as isize || oracle_h(chi, n) != heights[i] as isize {
                failures += 1;
            }
        }
    }
    (failures, "n=2..5".to_string())
}

fn criterion_03_thin() -> Outcome {
    let mut reports = Vec::new();
    let mut failures = 0;
    for n in 3..=5 {
        let p = enumerate_macp2(n).unwrap();
        reports.push(check_thin(&p).unwrap());
        // Length-2 intervals of the brute-force order, with the bottom adjoined.
        let o = OraclePoset::new(n);
        let h = o.heights();
        for y in 0..o.len() {
            let below: Vec<usize> = (0..o.len()).filter(|&x| o.leq[x][y]).collect();
            for &x in &below {
                if h[y] == h[x] + 2 {
                    let mid = below.iter().filter(|&&k| o.leq[x][k] && h[k] == h[x] + 1).count();
                    failures += usize::from(mid != 2);
                }
            }
            if h[y] == 1 {
                failures += usize::from(below.len() - 1 != 2);
            }
        }
    }
    let (lib, detail) = suite_failures(&reports);
    (failures + lib, detail)
}

fn criterion_04_semimodular() -> Outcome {
    let mut reports = Vec::new();
    for n in 3..=4 {
        reports.push(check_semimodular(&enumerate_macp2(n).unwrap()).unwrap());
    }
    reports.push(check_flag_semimodular(&enumerate_macp12(3).unwrap()).unwrap());
    suite_failures(&reports)
}

fn criterion_05_recursive_atom_ordering() -> Outcome {
    let o = opts();
    let mut reports = Vec::new();
    for n in 3..=4 {
        reports.push(check_rao(&enumerate_macp2(n).unwrap(), &o).unwrap());
    }
    reports.push(check_flag_rao(&enumerate_macp12(3).unwrap(), &o).unwrap());
    suite_failures(&reports)
}

fn criterion_06_spheres() -> Outcome {
    let mut reports = Vec::new();
    for n in 3..=5 {
        reports.push(check_spheres(&enumerate_macp2(n).unwrap(), SPHERE_MAX_H).unwrap());
    }
    for n in 3..=4 {
        reports.push(check_flag_spheres(&enumerate_macp12(n).unwrap()).unwrap());
    }
    suite_failures(&reports)
}

fn criterion_07_projective_space() -> Outcome {
    let mut failures = 0;
    let mut reports = Vec::new();
    for n in 3..=5 {
        let r = check_rp(n).unwrap();
        let betti: Vec<usize> = serde_json::from_value(r.data["betti"].clone()).unwrap();
        failures += usize::from(betti != vec![1; n]);
        // Normalized nonzero sign vectors: (3^n - 1) / 2 of them.
        failures += usize::from(enumerate_macp1(n).0.len() != (3usize.pow(n as u32) - 1) / 2);
        reports.push(r);
    }
    let (lib, detail) = suite_failures(&reports);
    (failures + lib, detail)
}

fn criterion_08_grassmannian() -> Outcome {
    let mut failures = 0;
    let mut detail = Vec::new();
    for n in 3..=4 {
        let expected = gaussian_binomial_2(n);
        let r = check_grassmannian(&enumerate_macp2(n).unwrap()).unwrap();
        let betti: Vec<usize> = serde_json::from_value(r.data["betti"].clone()).unwrap();
        failures += usize::from(betti != expected) + r.failure_count;
        detail.push(format!("n={n} betti={betti:?} oracle={expected:?}"));
    }
    failures += usize::from(gaussian_binomial_2(3) != vec![1, 1, 1]);
    (failures, detail.join(", "))
}

fn criterion_09_cell_round_trips() -> Outcome {
    let o = opts();
    let mut reports = Vec::new();
    for n in 2..=4 {
        reports.push(check_cells(&enumerate_macp2(n).unwrap(), &o).unwrap());
        reports.push(check_flag_cells(&enumerate_macp12(n).unwrap(), &o).unwrap());
    }
    suite_failures(&reports)
}

fn criterion_10_embedding() -> Outcome {
    let r = check_embedding(&enumerate_macp12(3).unwrap()).unwrap();
    suite_failures(&[r])
}

fn criterion_11_comparators() -> Outcome {
    let mut reports = Vec::new();
    for n in 2..=4 {
        let p = enumerate_macp2_with(n, n, Comparator::Chirotope).unwrap();
        reports.push(check_comparator(&p.elements).unwrap());
    }
    suite_failures(&reports)
}

/// Perturbation steps per boundary sample, `eps = 2^-k` for `k = 1..=10`.
const EPS_PINNED: u32 = 10;

fn main() {
    assert_eq!(EPS_STEPS, EPS_PINNED);
    let criteria: [Criterion; 11] = [
        (1, "cover rules against brute force", criterion_01_covers),
        (2, "h = l + p - 4 is the graded height", criterion_02_rank),
        (3, "thin lower intervals", criterion_03_thin),
        (4, "total semimodularity of intervals", criterion_04_semimodular),
        (5, "recursive atom orderings", criterion_05_recursive_atom_ordering),
        (6, "sphere profiles of lower intervals", criterion_06_spheres),
        (7, "MacP(1,n) has the GF(2) homology of RP^(n-1)", criterion_07_projective_space),
        (8, "MacP(2,n) against the Schubert cell oracle", criterion_08_grassmannian),
        (9, "cell samples and boundary perturbations", criterion_09_cell_round_trips),
        (10, "upper intervals of flags embed as upper intervals", criterion_10_embedding),
        (11, "covector and chirotope comparators agree", criterion_11_comparators),
    ];
    let mut failed = Vec::new();
    for (k, title, run) in criteria {
        let start = std::time::Instant::now();
        let (failures, detail) = match std::panic::catch_unwind(run) {
            Ok(outcome) => outcome,
            Err(_) => (usize::MAX, "panicked".to_string()),
        };
        let pass = failures.saturating_sub(TOLERANCE) == 0;
        println!(
            "criterion {k} [{title}]: {} (failures={failures}, tolerance={TOLERANCE}, {:.1}s) {detail}",
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        if !pass {
            failed.push(k);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
