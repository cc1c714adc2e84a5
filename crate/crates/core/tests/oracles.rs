//! Library results against brute-force references.

mod common;

use std::collections::HashSet;

use macp::flags::enumerate_macp12;
use macp::macp::enumerate_macp2;
use macp::om::{mu, Rank2OM};
use macp::rational::q;
use proptest::prelude::*;

use common::{chirotope_covectors, gaussian_binomial_2, gp_chirotopes, sweep_covectors, to_om, OraclePoset};

#[test]
fn element_counts_match_the_relation_filter() {
    assert_eq!(gp_chirotopes(2).len(), 1);
    // All 26 nonzero sign maps on three pairs satisfy the relations vacuously.
    assert_eq!(gp_chirotopes(3).len(), 13);
    for n in 2..=5 {
        let brute: HashSet<Rank2OM> = gp_chirotopes(n).iter().map(|c| to_om(c, n)).collect();
        let lib = enumerate_macp2(n).unwrap();
        let lib_set: HashSet<Rank2OM> = lib.elements.iter().cloned().collect();
        assert_eq!(brute.len(), gp_chirotopes(n).len(), "distinct canonical forms at n={n}");
        assert_eq!(brute, lib_set, "n={n}");
    }
}

#[test]
fn library_order_matches_weak_maps() {
    for n in 3..=4 {
        let o = OraclePoset::new(n);
        let lib = enumerate_macp2(n).unwrap();
        let idx: Vec<usize> = o.chis.iter().map(|c| lib.index_of(&to_om(c, n)).unwrap()).collect();
        for a in 0..o.len() {
            for b in 0..o.len() {
                assert_eq!(o.leq[a][b], lib.poset.leq(idx[a], idx[b]), "n={n}");
            }
        }
    }
}

#[test]
fn flag_count_is_half_the_nonzero_covectors() {
    for n in 2..=4 {
        let expected: usize = gp_chirotopes(n).iter().map(|c| chirotope_covectors(c, n).len() - 1).sum::<usize>() / 2;
        assert_eq!(enumerate_macp12(n).unwrap().len(), expected, "n={n}");
    }
}

#[test]
fn covector_count_is_four_per_class() {
    for n in 2..=4 {
        for c in gp_chirotopes(n) {
            let m = to_om(&c, n);
            assert_eq!(chirotope_covectors(&c, n).len(), 4 * m.p() + 1);
            let lib: HashSet<Vec<i8>> = m
                .covectors()
                .iter()
                .map(|z| z.to_string().chars().map(|ch| match ch { '+' => 1, '-' => -1, _ => 0 }).collect())
                .collect();
            let brute: HashSet<Vec<i8>> = chirotope_covectors(&c, n).into_iter().collect();
            assert_eq!(lib, brute, "{m}");
        }
    }
}

#[test]
fn gaussian_binomials() {
    assert_eq!(gaussian_binomial_2(2), vec![1]);
    assert_eq!(gaussian_binomial_2(3), vec![1, 1, 1]);
    assert_eq!(gaussian_binomial_2(4), vec![1, 1, 2, 1, 1]);
    assert_eq!(gaussian_binomial_2(5), vec![1, 1, 2, 2, 2, 1, 1]);
}

/// An interval `[W, T]` at n = 4 whose two atoms have no common cover inside
/// it, found with the brute-force order alone.
#[test]
fn interval_without_common_cover_at_four() {
    let o = OraclePoset::new(4);
    let h = o.heights();
    let find = |s: &str| {
        let target: Rank2OM = s.parse().unwrap();
        o.chis.iter().position(|c| to_om(c, 4) == target).unwrap()
    };
    let w = find("n=4;loops=1,2;classes=[+3][+4]");
    let t = find("n=4;loops=;classes=[+1 +2][+3][+4]");
    let u = find("n=4;loops=1;classes=[+2 +3][+4]");
    let v = find("n=4;loops=2;classes=[+1 -4][+3]");
    for x in [u, v] {
        assert!(o.leq[w][x] && o.leq[x][t] && h[x] == h[w] + 1);
    }
    let common_in_interval =
        (0..o.len()).filter(|&z| o.leq[z][t] && o.leq[u][z] && o.leq[v][z] && h[z] == h[u] + 1).count();
    assert_eq!(common_in_interval, 0);
    // Outside the interval the two atoms have exactly one common cover.
    let common: Vec<usize> = (0..o.len()).filter(|&z| o.leq[u][z] && o.leq[v][z] && h[z] == h[u] + 1).collect();
    assert_eq!(common, vec![find("n=4;loops=;classes=[+1 -4][+2 +3]")]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mu_matches_the_functional_sweep(cols in prop::collection::vec((-4i64..=4, -4i64..=4), 2..=6)) {
        let m = vec![cols.iter().map(|c| q(c.0)).collect(), cols.iter().map(|c| q(c.1)).collect()];
        let brute = sweep_covectors(&cols);
        match mu(&m) {
            Ok(om) => {
                let lib: std::collections::BTreeSet<String> = om.covectors().iter().map(|z| z.to_string()).collect();
                prop_assert_eq!(lib, brute);
            }
            // Rank below two leaves only zero and one pair of opposite sign vectors.
            Err(_) => prop_assert!(brute.len() <= 3),
        }
    }
}
