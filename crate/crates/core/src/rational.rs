//! Exact rational linear algebra on small dense matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::sign::Sign;

pub type Q = BigRational;

/// A dense matrix of rationals stored row by row.
pub type Matrix = Vec<Vec<Q>>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn sign_of(x: &Q) -> Sign {
    if x.is_zero() {
        Sign::Zero
    } else if x.is_positive() {
        Sign::Pos
    } else {
        Sign::Neg
    }
}

/// Parses `"p/q"`, `"p"` or a decimal-free integer literal.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Always `p/q` with `q >= 1`, so that output parses back without ambiguity.
pub fn format_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// A planar vector configuration: column `i` is the vector `v_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorConfig {
    pub cols: Vec<[Q; 2]>,
}

impl VectorConfig {
    pub fn new(cols: Vec<[Q; 2]>) -> VectorConfig {
        VectorConfig { cols }
    }

    pub fn from_ints(cols: &[(i64, i64)]) -> VectorConfig {
        VectorConfig { cols: cols.iter().map(|&(x, y)| [q(x), q(y)]).collect() }
    }

    /// Reads the columns of a `2 x n` matrix.
    pub fn from_matrix(m: &Matrix) -> Result<VectorConfig> {
        if m.len() != 2 || m[0].len() != m[1].len() {
            return Err(Error::Parse("expected a 2 x n matrix".into()));
        }
        Ok(VectorConfig {
            cols: m[0].iter().zip(&m[1]).map(|(a, b)| [a.clone(), b.clone()]).collect(),
        })
    }

    pub fn to_matrix(&self) -> Matrix {
        vec![
            self.cols.iter().map(|c| c[0].clone()).collect(),
            self.cols.iter().map(|c| c[1].clone()).collect(),
        ]
    }

    pub fn len(&self) -> usize {
        self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn det(&self, i: usize, j: usize) -> Q {
        det2(&self.cols[i], &self.cols[j])
    }

    /// The values `alpha . v_i`.
    pub fn evaluate(&self, alpha: &[Q; 2]) -> Vec<Q> {
        self.cols.iter().map(|v| dot2(alpha, v)).collect()
    }
}

pub fn det2(a: &[Q; 2], b: &[Q; 2]) -> Q {
    &a[0] * &b[1] - &a[1] * &b[0]
}

pub fn dot2(a: &[Q; 2], b: &[Q; 2]) -> Q {
    &a[0] * &b[0] + &a[1] * &b[1]
}

/// Quarter turn counterclockwise: `(x, y) -> (-y, x)`.
pub fn rot90(a: &[Q; 2]) -> [Q; 2] {
    [-a[1].clone(), a[0].clone()]
}

pub fn is_zero_vec(a: &[Q; 2]) -> bool {
    a[0].is_zero() && a[1].is_zero()
}

/// Row-reduces a copy of `m` and returns its rank.
pub fn rank(m: &Matrix) -> usize {
    let mut a: Matrix = m.clone();
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot = a[r][c].clone();
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = &a[i][c] / &pivot;
                let pivot_row = a[r].clone();
                for (x, y) in a[i][c..].iter_mut().zip(&pivot_row[c..]) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Solves `coeffs . rows = target` for a full-rank two-row matrix, if possible.
pub fn solve_in_rowspace2(rows: &Matrix, target: &[Q]) -> Option<[Q; 2]> {
    let n = target.len();
    // Find two columns forming an invertible 2x2 minor.
    for i in 0..n {
        for j in i + 1..n {
            let d = &rows[0][i] * &rows[1][j] - &rows[1][i] * &rows[0][j];
            if d.is_zero() {
                continue;
            }
            // coeffs (a, b): a*r0 + b*r1 = target on columns i, j (Cramer).
            let a = (&target[i] * &rows[1][j] - &target[j] * &rows[1][i]) / &d;
            let b = (&rows[0][i] * &target[j] - &rows[0][j] * &target[i]) / &d;
            let ok = (0..n).all(|k| &a * &rows[0][k] + &b * &rows[1][k] == target[k]);
            return ok.then_some([a, b]);
        }
    }
    None
}

pub fn one() -> Q {
    Q::one()
}
