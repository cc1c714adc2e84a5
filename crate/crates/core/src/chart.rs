//! Charts of the open cells `mu^{-1}(M)` and samplers for cells and their boundaries.
//!
//! A chart fixes two reference elements `b1`, `b2` from different classes and
//! puts them at `e1` and `e2`. Every other class gets a direction strictly
//! inside one of the two open quadrants of the upper half-plane, and every
//! non-reference non-loop gets a positive radius. The free coordinates are one
//! angle per class other than the reference classes and one radius per
//! non-reference non-loop, `h(M)` numbers in total.

use num_traits::{Signed, Zero};
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::macp::{coatoms_with_kind, CoverKind};
use crate::om::{mu_config, Rank2OM};
use crate::rational::{det2, dot2, q, q_frac, rot90, sign_of, Matrix, VectorConfig, Q};
use crate::sign::Sign;

/// Angles are drawn as `u = k / 2^ANGLE_BITS` in `(0, 1)`.
const ANGLE_BITS: u32 = 20;
/// Radii are drawn as `k / 2^RADIUS_BITS` in `(0, RADIUS_MAX]`.
const RADIUS_BITS: u32 = 10;
const RADIUS_MAX: u64 = 4;
/// Boundary perturbations use `eps = 2^-k` for `k = 1..=EPS_STEPS`.
pub const EPS_STEPS: u32 = 10;

/// Deterministic generator for sample `index` of the object named `key`.
pub(crate) fn sample_rng(seed: u64, key: &str, index: usize) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(key.as_bytes());
    let mut rng = ChaCha8Rng::from_seed(h.finalize().into());
    rng.set_stream(index as u64);
    rng
}

pub(crate) fn random_radius(rng: &mut ChaCha8Rng) -> Q {
    let k = rng.random_range(1..=RADIUS_MAX << RADIUS_BITS);
    q_frac(k as i64, 1 << RADIUS_BITS)
}

/// Sorted distinct values in `(0, 1)`.
fn random_u(rng: &mut ChaCha8Rng, count: usize) -> Vec<Q> {
    let range = (1usize << ANGLE_BITS) - 1;
    let mut ks: Vec<usize> = index::sample(rng, range, count).into_iter().map(|k| k + 1).collect();
    ks.sort_unstable();
    ks.into_iter().map(|k| q_frac(k as i64, 1 << ANGLE_BITS)).collect()
}

/// Coordinates of the open cell of one oriented matroid.
#[derive(Clone, Debug)]
pub struct CellChart {
    om: Rank2OM,
    /// Reference elements placed at `e1` and `e2`.
    pub basis: (usize, usize),
    /// Chart sign of each non-loop: `v_i = s_i * r_i * direction(class)`.
    pub signs: Vec<Sign>,
    /// Free classes with angle in `(0, pi/2)`, in angular order.
    pub block_a: Vec<Vec<usize>>,
    /// Free classes with angle in `(pi/2, pi)`, in angular order.
    pub block_b: Vec<Vec<usize>>,
    /// Elements of the two reference classes other than `b1`, `b2`.
    pub on_axes: Vec<usize>,
}

impl CellChart {
    pub fn new(m: &Rank2OM) -> CellChart {
        let n = m.n();
        let nonloops: Vec<usize> = (0..n).filter(|&i| !m.is_loop(i)).collect();
        let b1 = nonloops[0];
        let b2 = *nonloops.iter().find(|&&j| m.is_basis(b1, j)).expect("rank 2");
        // The representative of chi with chi(b1, b2) = +.
        let g = m.chi(b1, b2);
        let chi = |i: usize, j: usize| g * m.chi(i, j);
        let (c1, c2) = (m.class_of(b1), m.class_of(b2));
        let mut signs = vec![Sign::Zero; n];
        let mut on_axes = Vec::new();
        let mut free: Vec<usize> = Vec::new();
        for &i in &nonloops {
            if m.class_of(i) == c1 {
                signs[i] = if i == b1 { Sign::Pos } else { chi(i, b2) };
            } else if m.class_of(i) == c2 {
                signs[i] = if i == b2 { Sign::Pos } else { chi(b1, i) };
            } else {
                signs[i] = chi(b1, i);
                free.push(i);
            }
            if i != b1 && i != b2 && (m.class_of(i) == c1 || m.class_of(i) == c2) {
                on_axes.push(i);
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for &i in &free {
            match groups.iter_mut().find(|g| m.class_of(g[0]) == m.class_of(i)) {
                Some(g) => g.push(i),
                None => groups.push(vec![i]),
            }
        }
        let (mut block_a, mut block_b): (Vec<Vec<usize>>, Vec<Vec<usize>>) =
            groups.into_iter().partition(|g| chi(b1, g[0]) * chi(g[0], b2) == Sign::Pos);
        let angular = |x: &Vec<usize>, y: &Vec<usize>| {
            let (i, j) = (x[0], y[0]);
            if chi(i, j) * signs[i] * signs[j] == Sign::Pos {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        };
        block_a.sort_by(angular);
        block_b.sort_by(angular);
        CellChart { om: m.clone(), basis: (b1, b2), signs, block_a, block_b, on_axes }
    }

    pub fn om(&self) -> &Rank2OM {
        &self.om
    }

    /// Number of free real parameters.
    pub fn dimension(&self) -> usize {
        self.block_a.len() + self.block_b.len() + self.radial_elements().len()
    }

    /// Elements that carry a radius coordinate, in index order.
    pub fn radial_elements(&self) -> Vec<usize> {
        let (b1, b2) = self.basis;
        (0..self.om.n()).filter(|&i| !self.om.is_loop(i) && i != b1 && i != b2).collect()
    }

    /// The configuration at the given coordinates.
    ///
    /// `u_a` and `u_b` must be strictly increasing in `(0, 1)`, one value per
    /// class of the respective block; `radii` follow `radial_elements`.
    pub fn point(&self, u_a: &[Q], u_b: &[Q], radii: &[Q]) -> VectorConfig {
        let n = self.om.n();
        let one = q(1);
        let mut dir: Vec<Option<[Q; 2]>> = vec![None; n];
        let (b1, b2) = self.basis;
        for (i, d) in dir.iter_mut().enumerate() {
            if self.om.is_loop(i) {
                continue;
            }
            if self.om.class_of(i) == self.om.class_of(b1) {
                *d = Some([q(1), q(0)]);
            } else if self.om.class_of(i) == self.om.class_of(b2) {
                *d = Some([q(0), q(1)]);
            }
        }
        for (class, u) in self.block_a.iter().zip(u_a) {
            let d = [&one - u * u, u * q(2)];
            for &i in class {
                dir[i] = Some(d.clone());
            }
        }
        // In the second quadrant the angle decreases as u grows.
        for (class, u) in self.block_b.iter().zip(u_b.iter().rev()) {
            let d = [u * u - &one, u * q(2)];
            for &i in class {
                dir[i] = Some(d.clone());
            }
        }
        let mut radius = vec![q(1); n];
        for (&i, r) in self.radial_elements().iter().zip(radii) {
            radius[i] = r.clone();
        }
        let cols = (0..n)
            .map(|i| match &dir[i] {
                None => [q(0), q(0)],
                Some(d) => {
                    let s = if self.signs[i] == Sign::Neg { -&radius[i] } else { radius[i].clone() };
                    [&d[0] * &s, &d[1] * &s]
                }
            })
            .collect();
        VectorConfig::new(cols)
    }

    pub(crate) fn random_point(&self, rng: &mut ChaCha8Rng) -> VectorConfig {
        let u_a = random_u(rng, self.block_a.len());
        let u_b = random_u(rng, self.block_b.len());
        let radii: Vec<Q> = self.radial_elements().iter().map(|_| random_radius(rng)).collect();
        self.point(&u_a, &u_b, &radii)
    }
}

/// `count` deterministic points of `mu^{-1}(M)`, as `2 x n` matrices.
pub fn sample_cell(m: &Rank2OM, count: usize, seed: u64) -> Vec<Matrix> {
    sample_cell_configs(m, count, seed).iter().map(VectorConfig::to_matrix).collect()
}

pub(crate) fn sample_cell_configs(m: &Rank2OM, count: usize, seed: u64) -> Vec<VectorConfig> {
    let chart = CellChart::new(m);
    (0..count)
        .map(|k| {
            let mut rng = sample_rng(seed, m.key(), k);
            chart.random_point(&mut rng)
        })
        .collect()
}

/// Moves a configuration realizing a coatom of `target` into `mu^{-1}(target)`.
///
/// For a loop cover the lost element is re-inflated as `eps` times a class
/// mate. For a merge cover the second class is turned by the small rotation
/// `I + delta J` with `|delta| <= eps / 2` times the gap to every other line,
/// so no other sign can change.
pub fn perturb_toward(config: &VectorConfig, target: &Rank2OM, kind: &CoverKind, eps: &Q) -> VectorConfig {
    let mut cols = config.cols.clone();
    match *kind {
        CoverKind::Loop { element: i } => {
            let class = target.class_of(i).expect("loop cover of a non-loop");
            let j = (0..target.n()).find(|&j| j != i && target.class_of(j) == Some(class)).expect("class of size two");
            let s = target.sigma(i) * target.sigma(j);
            let f = if s == Sign::Neg { -eps } else { eps.clone() };
            cols[i] = [&cols[j][0] * &f, &cols[j][1] * &f];
        }
        CoverKind::Merge { first, second } => {
            let classes = target.signed_classes();
            let p = classes[first][0].0;
            let merged: Vec<usize> = classes[first].iter().chain(&classes[second]).map(|&(e, _)| e).collect();
            let qs: Vec<usize> = classes[second].iter().map(|&(e, _)| e).collect();
            // Global sign between the configuration and target's stored chirotope.
            let n = target.n();
            let g = (0..n)
                .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                .find_map(|(a, b)| {
                    let c = sign_of(&config.det(a, b));
                    (!c.is_zero()).then(|| c * target.chi(a, b))
                })
                .expect("configuration has rank 2");
            let lambda = sign_of(&dot2(&cols[qs[0]], &cols[p]));
            let dir = g * target.chi(p, qs[0]) * lambda;
            let mut delta0 = q(1);
            for &qq in &qs {
                for k in 0..n {
                    if target.is_loop(k) || merged.contains(&k) {
                        continue;
                    }
                    let dt = det2(&cols[qq], &cols[k]).abs();
                    let dp = dot2(&cols[qq], &cols[k]).abs();
                    if !dp.is_zero() {
                        let bound = dt / dp / q(2);
                        if bound < delta0 {
                            delta0 = bound;
                        }
                    }
                }
            }
            let delta = if dir == Sign::Neg { -(eps * &delta0) } else { eps * &delta0 };
            for &qq in &qs {
                let j = rot90(&cols[qq]);
                cols[qq] = [&cols[qq][0] + &delta * &j[0], &cols[qq][1] + &delta * &j[1]];
            }
        }
    }
    VectorConfig::new(cols)
}

/// One boundary point and its perturbations back into the open cell.
#[derive(Clone, Debug)]
pub struct BoundarySample {
    pub point: Matrix,
    /// The perturbation at `eps = 2^-k`, `k = 1..=EPS_STEPS`.
    pub perturbed: Vec<Matrix>,
    pub recovered: Vec<bool>,
}

impl BoundarySample {
    pub fn all_recover(&self) -> bool {
        self.recovered.iter().all(|&r| r)
    }
}

pub(crate) fn eps_ladder() -> Vec<Q> {
    (1..=EPS_STEPS).map(|k| q_frac(1, 1 << k)).collect()
}

/// Samples `mu^{-1}(face)` and pushes every sample back into `mu^{-1}(M)`.
pub fn sample_boundary(m: &Rank2OM, face: &Rank2OM, count: usize, seed: u64) -> Result<Vec<BoundarySample>> {
    let kind = coatoms_with_kind(m)
        .into_iter()
        .find(|(c, _)| c == face)
        .map(|(_, k)| k)
        .ok_or_else(|| Error::NotACoatom(format!("{face} is not covered by {m}")))?;
    let ladder = eps_ladder();
    sample_cell_configs(face, count, seed)
        .into_iter()
        .map(|x| {
            let perturbed: Vec<VectorConfig> = ladder.iter().map(|e| perturb_toward(&x, m, &kind, e)).collect();
            let recovered = perturbed.iter().map(|y| mu_config(y).as_ref() == Ok(m)).collect();
            Ok(BoundarySample {
                point: x.to_matrix(),
                perturbed: perturbed.iter().map(VectorConfig::to_matrix).collect(),
                recovered,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::macp::all_rank2;
    use crate::om::mu;

    fn om(s: &str) -> Rank2OM {
        s.parse().unwrap()
    }

    #[test]
    fn samples_round_trip_and_dimension_matches_rank() {
        for m in all_rank2(4) {
            let chart = CellChart::new(&m);
            assert_eq!(chart.dimension(), m.rank_h(), "{m}");
            for x in sample_cell(&m, 5, 3) {
                assert_eq!(mu(&x).unwrap(), m);
            }
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let m = om("n=4;loops=;classes=[+1][-3][+2][+4]");
        assert_eq!(sample_cell(&m, 4, 11), sample_cell(&m, 4, 11));
        assert_ne!(sample_cell(&m, 4, 11), sample_cell(&m, 4, 12));
    }

    #[test]
    fn loop_and_merge_faces_recover() {
        let m = om("n=3;loops=;classes=[+1 +3][+2]");
        let face = om("n=3;loops=3;classes=[+1][+2]");
        let s = sample_boundary(&m, &face, 3, 0).unwrap();
        assert!(s.iter().all(BoundarySample::all_recover));
        let m3 = om("n=3;loops=;classes=[+1][+3][+2]");
        for face in crate::macp::coatoms_cr(&m3) {
            assert!(sample_boundary(&m3, &face, 3, 0).unwrap().iter().all(BoundarySample::all_recover));
        }
        let not = om("n=3;loops=2;classes=[+1][+3]");
        assert!(matches!(sample_boundary(&m3, &not, 1, 0), Err(Error::NotACoatom(_))));
    }
}
