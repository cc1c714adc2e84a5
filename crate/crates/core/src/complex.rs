//! Abstract simplicial complexes and order complexes of posets.

use std::collections::HashSet;

use crate::poset::Poset;

/// A finite simplicial complex on vertices `0..n_vertices`.
///
/// Every face is stored, grouped by dimension and sorted, so membership is a
/// binary search and boundary matrices index faces directly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    n_vertices: usize,
    faces: Vec<Vec<Vec<u32>>>,
    facets: Vec<Vec<u32>>,
}

impl SimplicialComplex {
    /// Downward closure of the given faces; non-maximal inputs are dropped from the facet list.
    pub fn from_facets(n_vertices: usize, facets: &[Vec<u32>]) -> SimplicialComplex {
        let mut by_dim: Vec<HashSet<Vec<u32>>> = Vec::new();
        for f in facets {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            if f.is_empty() {
                continue;
            }
            assert!(f.iter().all(|&v| (v as usize) < n_vertices), "vertex out of range");
            let k = f.len();
            if by_dim.len() < k {
                by_dim.resize_with(k, HashSet::new);
            }
            for mask in 1u64..(1u64 << k) {
                let sub: Vec<u32> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                by_dim[sub.len() - 1].insert(sub);
            }
        }
        let faces: Vec<Vec<Vec<u32>>> = by_dim
            .into_iter()
            .map(|s| {
                let mut v: Vec<Vec<u32>> = s.into_iter().collect();
                v.sort();
                v
            })
            .collect();
        let mut out = SimplicialComplex { n_vertices, faces, facets: Vec::new() };
        out.facets = out.compute_facets();
        out
    }

    fn from_faces(n_vertices: usize, faces: Vec<Vec<Vec<u32>>>, facets: Vec<Vec<u32>>) -> SimplicialComplex {
        SimplicialComplex { n_vertices, faces, facets }
    }

    fn compute_facets(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        for (k, layer) in self.faces.iter().enumerate() {
            for f in layer {
                let extendable = self.faces.get(k + 1).is_some_and(|next| {
                    (0..self.n_vertices as u32).any(|v| {
                        if f.binary_search(&v).is_ok() {
                            return false;
                        }
                        let mut g = f.clone();
                        let pos = g.binary_search(&v).unwrap_err();
                        g.insert(pos, v);
                        next.binary_search(&g).is_ok()
                    })
                });
                if !extendable {
                    out.push(f.clone());
                }
            }
        }
        out.sort();
        out
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Largest face dimension; `-1` for the empty complex.
    pub fn dim(&self) -> isize {
        self.faces.len() as isize - 1
    }

    /// Faces of dimension `k`, sorted.
    pub fn faces(&self, k: usize) -> &[Vec<u32>] {
        self.faces.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn facets(&self) -> &[Vec<u32>] {
        &self.facets
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    pub fn contains(&self, simplex: &[u32]) -> bool {
        let mut s = simplex.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.is_empty() {
            return true;
        }
        self.faces(s.len() - 1).binary_search(&s).is_ok()
    }

    /// Index of a sorted face within its dimension.
    pub fn index_of(&self, face: &[u32]) -> Option<usize> {
        if face.is_empty() {
            return None;
        }
        self.faces(face.len() - 1).binary_search_by(|f| f.as_slice().cmp(face)).ok()
    }

    pub fn is_pure(&self) -> bool {
        let d = self.faces.len();
        self.facets.iter().all(|f| f.len() == d)
    }
}

/// The complex of chains of `p`; its facets are the maximal chains.
pub fn order_complex(p: &Poset) -> SimplicialComplex {
    let n = p.len();
    let mut faces: Vec<Vec<Vec<u32>>> = Vec::new();
    let mut stack: Vec<u32> = Vec::new();
    fn chains(p: &Poset, x: usize, stack: &mut Vec<u32>, faces: &mut Vec<Vec<Vec<u32>>>) {
        stack.push(x as u32);
        let k = stack.len();
        if faces.len() < k {
            faces.resize_with(k, Vec::new);
        }
        let mut face = stack.clone();
        face.sort_unstable();
        faces[k - 1].push(face);
        for y in p.up_set(x).ones() {
            if y != x {
                chains(p, y, stack, faces);
            }
        }
        stack.pop();
    }
    for x in 0..n {
        chains(p, x, &mut stack, &mut faces);
    }
    for layer in &mut faces {
        layer.sort();
    }
    let mut facets = Vec::new();
    fn maximal(p: &Poset, x: usize, stack: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        stack.push(x as u32);
        if p.covers(x).is_empty() {
            let mut f = stack.clone();
            f.sort_unstable();
            out.push(f);
        }
        for &y in p.covers(x) {
            maximal(p, y, stack, out);
        }
        stack.pop();
    }
    for x in p.minimal_elements() {
        maximal(p, x, &mut stack, &mut facets);
    }
    facets.sort();
    SimplicialComplex::from_faces(n, faces, facets)
}
