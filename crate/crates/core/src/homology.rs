//! Simplicial homology with GF(2) coefficients.

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::SimplicialComplex;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiProfile {
    pub f_vector: Vec<usize>,
    pub betti: Vec<usize>,
    pub euler: i64,
}

/// Report emitted by the command line tool.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub f_vector: Vec<usize>,
    pub betti: Vec<usize>,
    pub euler: i64,
    pub sphere_check: bool,
}

fn alternating_sum(v: &[usize]) -> i64 {
    v.iter().enumerate().map(|(k, &x)| if k % 2 == 0 { x as i64 } else { -(x as i64) }).sum()
}

pub fn euler_characteristic(k: &SimplicialComplex) -> i64 {
    alternating_sum(&k.f_vector())
}

/// Rank over GF(2) of a matrix given by columns of sorted row indices.
pub fn gf2_rank(columns: Vec<Vec<u32>>, n_rows: usize) -> usize {
    let mut owner: Vec<Option<Vec<u32>>> = vec![None; n_rows];
    let mut rank = 0;
    for mut col in columns {
        while let Some(&pivot) = col.last() {
            match &owner[pivot as usize] {
                Some(other) => col = xor_sorted(&col, other),
                None => break,
            }
        }
        if let Some(&pivot) = col.last() {
            owner[pivot as usize] = Some(col);
            rank += 1;
        }
    }
    rank
}

fn xor_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Rank of the boundary map from `k`-faces to `(k-1)`-faces.
fn boundary_rank(kc: &SimplicialComplex, k: usize) -> usize {
    if k == 0 || k >= kc.f_vector().len() {
        return 0;
    }
    let columns: Vec<Vec<u32>> = kc
        .faces(k)
        .par_iter()
        .map(|f| {
            let mut col: Vec<u32> = (0..f.len())
                .map(|drop| {
                    let sub: Vec<u32> = f.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &v)| v).collect();
                    kc.index_of(&sub).expect("complex is closed under faces") as u32
                })
                .collect();
            col.sort_unstable();
            col
        })
        .collect();
    gf2_rank(columns, kc.faces(k - 1).len())
}

/// Betti numbers `b_k = f_k - rank d_k - rank d_{k+1}`; panics if the
/// Euler-Poincare identity fails, which would mean an arithmetic bug.
pub fn betti_gf2(kc: &SimplicialComplex) -> BettiProfile {
    let f = kc.f_vector();
    let d = f.len();
    let ranks: Vec<usize> = (0..=d).into_par_iter().map(|k| boundary_rank(kc, k)).collect();
    let betti: Vec<usize> = (0..d).map(|k| f[k] - ranks[k] - ranks[k + 1]).collect();
    let euler = alternating_sum(&f);
    assert_eq!(euler, alternating_sum(&betti), "Euler-Poincare identity violated");
    BettiProfile { f_vector: f, betti, euler }
}

/// Pure of dimension `d` with every `(d-1)`-face in exactly two facets.
pub fn is_pseudomanifold(kc: &SimplicialComplex, d: usize) -> bool {
    if kc.dim() != d as isize || !kc.is_pure() {
        return false;
    }
    if d == 0 {
        return kc.faces(0).len() == 2;
    }
    let mut count = vec![0u32; kc.faces(d - 1).len()];
    for f in kc.faces(d) {
        for drop in 0..f.len() {
            let sub: Vec<u32> = f.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &v)| v).collect();
            count[kc.index_of(&sub).unwrap()] += 1;
        }
    }
    count.iter().all(|&c| c == 2)
}

/// Expected GF(2) Betti numbers of the `d`-sphere.
pub fn sphere_betti(d: usize) -> Vec<usize> {
    if d == 0 {
        return vec![2];
    }
    let mut b = vec![0; d + 1];
    b[0] = 1;
    b[d] = 1;
    b
}

/// Betti profile of `S^d` together with the pseudomanifold condition.
pub fn is_sphere_profile(kc: &SimplicialComplex, d: usize) -> bool {
    is_pseudomanifold(kc, d) && betti_gf2(kc).betti == sphere_betti(d)
}

pub fn report(kc: &SimplicialComplex) -> HomologyReport {
    let b = betti_gf2(kc);
    let sphere_check = kc.dim() >= 0 && is_sphere_profile(kc, kc.dim() as usize);
    HomologyReport { f_vector: b.f_vector, betti: b.betti, euler: b.euler, sphere_check }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hexagon() -> SimplicialComplex {
        let edges: Vec<Vec<u32>> = (0..6).map(|i| vec![i, (i + 1) % 6]).collect();
        SimplicialComplex::from_facets(6, &edges)
    }

    #[test]
    fn triangle_boundary_is_a_circle() {
        let k = SimplicialComplex::from_facets(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert_eq!(betti_gf2(&k).betti, vec![1, 1]);
        assert!(is_sphere_profile(&k, 1));
    }

    #[test]
    fn full_simplex_is_contractible() {
        let k = SimplicialComplex::from_facets(4, &[vec![0, 1, 2, 3]]);
        assert_eq!(betti_gf2(&k).betti, vec![1, 0, 0, 0]);
        let solid = SimplicialComplex::from_facets(3, &[vec![0, 1, 2]]);
        assert!(!is_sphere_profile(&solid, 1));
    }

    #[test]
    fn hexagon_and_points() {
        let h = hexagon();
        assert!(is_sphere_profile(&h, 1));
        assert_eq!(euler_characteristic(&h), 0);
        let s0 = SimplicialComplex::from_facets(2, &[vec![0], vec![1]]);
        assert!(is_sphere_profile(&s0, 0));
        assert_eq!(euler_characteristic(&s0), 2);
        let pt = SimplicialComplex::from_facets(1, &[vec![0]]);
        assert_eq!(euler_characteristic(&pt), 1);
    }

    #[test]
    fn octahedron_is_a_two_sphere() {
        // Vertices +-e_i: 0,1 / 2,3 / 4,5; facets pick one from each pair.
        let mut facets = vec![];
        for a in 0..2 {
            for b in 2..4 {
                for c in 4..6 {
                    facets.push(vec![a, b, c]);
                }
            }
        }
        let k = SimplicialComplex::from_facets(6, &facets);
        assert_eq!(betti_gf2(&k).betti, vec![1, 0, 1]);
        assert!(is_sphere_profile(&k, 2));
    }

    #[test]
    fn two_circles_fail_the_sphere_check() {
        let mut edges: Vec<Vec<u32>> = (0..3).map(|i| vec![i, (i + 1) % 3]).collect();
        edges.extend((0..3).map(|i| vec![3 + i, 3 + (i + 1) % 3]));
        let k = SimplicialComplex::from_facets(6, &edges);
        assert!(is_pseudomanifold(&k, 1));
        assert!(!is_sphere_profile(&k, 1));
    }
}
