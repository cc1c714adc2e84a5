//! Brute-force references built without the library's cover rules or
//! canonical forms. Shared by several test targets, so not every item is
//! used by each of them.
#![allow(dead_code)]

use std::collections::BTreeSet;

use macp::chirotope::Chirotope2;
use macp::om::{canonical_form, Rank2OM};
use macp::sign::Sign;

/// Index of the pair `i < j` in lexicographic order.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

fn get(chi: &[i8], n: usize, i: usize, j: usize) -> i8 {
    match i.cmp(&j) {
        std::cmp::Ordering::Less => chi[pair_index(n, i, j)],
        std::cmp::Ordering::Greater => -chi[pair_index(n, j, i)],
        std::cmp::Ordering::Equal => 0,
    }
}

/// The three-term Grassmann-Pluecker relations on every 4-subset.
fn satisfies_gp(chi: &[i8], n: usize) -> bool {
    for x in 0..n {
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    if [a, b, c].contains(&x) {
                        continue;
                    }
                    let terms = [
                        get(chi, n, x, a) * get(chi, n, b, c),
                        -get(chi, n, x, b) * get(chi, n, a, c),
                        get(chi, n, x, c) * get(chi, n, a, b),
                    ];
                    let pos = terms.iter().any(|&t| t > 0);
                    let neg = terms.iter().any(|&t| t < 0);
                    if pos != neg {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Every nonzero alternating sign map on pairs satisfying the relations,
/// one per `{chi, -chi}` (first nonzero value positive).
pub fn gp_chirotopes(n: usize) -> Vec<Vec<i8>> {
    let m = n * (n - 1) / 2;
    let mut out = Vec::new();
    for code in 1..3u64.pow(m as u32) {
        let mut c = code;
        let chi: Vec<i8> = (0..m)
            .map(|_| {
                let v = [0i8, 1, -1][(c % 3) as usize];
                c /= 3;
                v
            })
            .collect();
        if chi.iter().find(|&&v| v != 0) == Some(&1) && satisfies_gp(&chi, n) {
            out.push(chi);
        }
    }
    out
}

/// Weak map test: some global sign makes `lower` a zeroing of `upper`.
pub fn oracle_leq(lower: &[i8], upper: &[i8]) -> bool {
    [1i8, -1].iter().any(|&s| lower.iter().zip(upper).all(|(&a, &b)| a == 0 || a == s * b))
}

pub fn to_om(chi: &[i8], n: usize) -> Rank2OM {
    let c = Chirotope2::from_fn(n, |i, j| Sign::of_i32(get(chi, n, i, j) as i32));
    canonical_form(&c).expect("relations hold")
}

/// Non-loop count plus the number of classes of mutually dependent non-loops.
pub fn oracle_h(chi: &[i8], n: usize) -> isize {
    let nonloops: Vec<usize> = (0..n).filter(|&i| (0..n).any(|j| get(chi, n, i, j) != 0)).collect();
    let mut reps: Vec<usize> = Vec::new();
    for &i in &nonloops {
        if reps.iter().all(|&r| get(chi, n, r, i) != 0) {
            reps.push(i);
        }
    }
    (nonloops.len() + reps.len()) as isize - 4
}

/// Order relation of the brute-force poset: `leq[a][b]`.
pub struct OraclePoset {
    pub n: usize,
    pub chis: Vec<Vec<i8>>,
    pub leq: Vec<Vec<bool>>,
}

impl OraclePoset {
    pub fn new(n: usize) -> OraclePoset {
        let chis = gp_chirotopes(n);
        let leq = chis.iter().map(|a| chis.iter().map(|b| oracle_leq(a, b)).collect()).collect();
        OraclePoset { n, chis, leq }
    }

    pub fn len(&self) -> usize {
        self.chis.len()
    }

    /// Lower covers of `m`: elements strictly below with an empty open interval.
    pub fn lower_covers(&self, m: usize) -> Vec<usize> {
        let below: Vec<usize> = (0..self.len()).filter(|&x| x != m && self.leq[x][m]).collect();
        below
            .iter()
            .copied()
            .filter(|&x| !below.iter().any(|&k| k != x && self.leq[x][k]))
            .collect()
    }

    /// Longest chain ending at `m`, counted in covers from a minimal element.
    pub fn heights(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        // A strictly larger element has strictly more nonzero pairs.
        let weight = |i: usize| self.chis[i].iter().filter(|&&v| v != 0).count();
        order.sort_by_key(|&i| weight(i));
        let mut h = vec![0usize; self.len()];
        for (pos, &y) in order.iter().enumerate() {
            for &x in &order[..pos] {
                if x != y && self.leq[x][y] {
                    h[y] = h[y].max(h[x] + 1);
                }
            }
        }
        h
    }
}

/// Covectors of an integer vector configuration, read off from functionals.
///
/// Candidates are `0`, the normals of each vector and both of their signs,
/// and sums of two normals; every tope sits between two adjacent normals.
pub fn sweep_covectors(cols: &[(i64, i64)]) -> BTreeSet<String> {
    let mut dirs: Vec<(i64, i64)> = vec![(0, 0)];
    let normals: Vec<(i64, i64)> =
        cols.iter().filter(|&&c| c != (0, 0)).flat_map(|&(x, y)| [(-y, x), (y, -x)]).collect();
    dirs.extend(&normals);
    dirs.extend(cols.iter().flat_map(|&(x, y)| [(x, y), (-x, -y)]));
    for a in &normals {
        for b in &normals {
            dirs.push((a.0 + b.0, a.1 + b.1));
        }
    }
    dirs.iter()
        .map(|&(ax, ay)| {
            cols.iter()
                .map(|&(x, y)| match (ax * x + ay * y).signum() {
                    1 => '+',
                    -1 => '-',
                    _ => '0',
                })
                .collect()
        })
        .collect()
}

/// Covectors from a chirotope: cocircuits `chi(i, .)` and their compositions.
pub fn chirotope_covectors(chi: &[i8], n: usize) -> BTreeSet<Vec<i8>> {
    let mut cocircuits: Vec<Vec<i8>> = Vec::new();
    for i in 0..n {
        let c: Vec<i8> = (0..n).map(|j| get(chi, n, i, j)).collect();
        if c.iter().any(|&v| v != 0) {
            cocircuits.push(c.iter().map(|v| -v).collect());
            cocircuits.push(c);
        }
    }
    let mut out: BTreeSet<Vec<i8>> = BTreeSet::new();
    out.insert(vec![0; n]);
    for a in &cocircuits {
        for b in &cocircuits {
            out.insert(a.iter().zip(b).map(|(&x, &y)| if x != 0 { x } else { y }).collect());
        }
    }
    out
}

/// Coefficients of the Gaussian binomial `[n choose 2]_q`.
pub fn gaussian_binomial_2(n: usize) -> Vec<usize> {
    // table[m][k] = coefficients of [m choose k]_q
    let mut table: Vec<Vec<Vec<usize>>> = vec![vec![vec![1]]];
    for m in 1..=n {
        let mut row = vec![vec![1usize]];
        for k in 1..=m.min(2) {
            let mut poly = vec![0usize; k * (m - k) + 1];
            if let Some(p) = table[m - 1].get(k - 1) {
                for (d, &c) in p.iter().enumerate() {
                    poly[d] += c;
                }
            }
            if let Some(p) = table[m - 1].get(k).filter(|_| k < m) {
                for (d, &c) in p.iter().enumerate() {
                    poly[d + k] += c;
                }
            }
            row.push(poly);
        }
        table.push(row);
    }
    table[n][2].clone()
}
