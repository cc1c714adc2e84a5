//! Rank-2 chirotopes as packed sign tables on unordered pairs.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rational::{sign_of, VectorConfig};
use crate::sign::Sign;

/// Largest ground set a [`Chirotope2`] can hold (120 pairs fit in a `u128`).
pub const MAX_N: usize = 16;

/// An alternating map `(i, j) -> {-, 0, +}` on `[n]`.
///
/// Only the strict upper triangle is stored, row-major, as two bitmasks.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Chirotope2 {
    n: u8,
    plus: u128,
    minus: u128,
}

#[inline]
fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl Chirotope2 {
    pub fn zero(n: usize) -> Chirotope2 {
        assert!(n <= MAX_N, "chirotopes hold at most {MAX_N} elements");
        Chirotope2 { n: n as u8, plus: 0, minus: 0 }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Sign) -> Chirotope2 {
        let mut c = Chirotope2::zero(n);
        for i in 0..n {
            for j in i + 1..n {
                c.set(i, j, f(i, j));
            }
        }
        c
    }

    /// Signs of the 2x2 determinants `det(v_i, v_j)`.
    pub fn from_vectors(config: &VectorConfig) -> Result<Chirotope2> {
        let n = config.len();
        if n > MAX_N {
            return Err(Error::LimitExceeded { n, limit: MAX_N });
        }
        let c = Chirotope2::from_fn(n, |i, j| sign_of(&config.det(i, j)));
        if c.is_zero() {
            return Err(Error::RankDeficient("every 2x2 determinant vanishes".into()));
        }
        Ok(c)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn plus_mask(&self) -> u128 {
        self.plus
    }

    pub fn minus_mask(&self) -> u128 {
        self.minus
    }

    pub fn get(&self, i: usize, j: usize) -> Sign {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => Sign::Zero,
            Greater => -self.get(j, i),
            Less => {
                let bit = 1u128 << pair_index(self.n(), i, j);
                if self.plus & bit != 0 {
                    Sign::Pos
                } else if self.minus & bit != 0 {
                    Sign::Neg
                } else {
                    Sign::Zero
                }
            }
        }
    }

    /// Sets `chi(i, j) = s` and therefore `chi(j, i) = -s`.
    pub fn set(&mut self, i: usize, j: usize, s: Sign) {
        assert!(i != j, "chi(i, i) is always 0");
        let (i, j, s) = if i < j { (i, j, s) } else { (j, i, -s) };
        let bit = 1u128 << pair_index(self.n(), i, j);
        self.plus &= !bit;
        self.minus &= !bit;
        match s {
            Sign::Pos => self.plus |= bit,
            Sign::Neg => self.minus |= bit,
            Sign::Zero => {}
        }
    }

    pub fn negated(&self) -> Chirotope2 {
        Chirotope2 { n: self.n, plus: self.minus, minus: self.plus }
    }

    pub fn is_zero(&self) -> bool {
        self.plus | self.minus == 0
    }

    /// An element is a loop when every pair containing it has sign 0.
    pub fn is_loop(&self, i: usize) -> bool {
        (0..self.n()).all(|j| self.get(i, j).is_zero())
    }

    /// Returns the first `(x2, y0, y1, y2)` violating a rank-2
    /// Grassmann-Plucker relation, or `None`.
    pub fn grassmann_plucker_violation(&self) -> Option<[usize; 4]> {
        let n = self.n();
        for x2 in 0..n {
            for y0 in 0..n {
                for y1 in 0..n {
                    for y2 in 0..n {
                        let terms = [
                            self.get(y0, x2) * self.get(y1, y2),
                            -(self.get(y1, x2) * self.get(y0, y2)),
                            self.get(y2, x2) * self.get(y0, y1),
                        ];
                        let has_pos = terms.contains(&Sign::Pos);
                        let has_neg = terms.contains(&Sign::Neg);
                        if has_pos != has_neg {
                            return Some([x2, y0, y1, y2]);
                        }
                    }
                }
            }
        }
        None
    }

    /// Nonzero and satisfying every Grassmann-Plucker relation.
    pub fn validate(&self) -> Result<()> {
        if self.is_zero() {
            return Err(Error::RankDeficient("the zero assignment has no basis".into()));
        }
        match self.grassmann_plucker_violation() {
            Some(t) => Err(Error::InvalidChirotope(t)),
            None => Ok(()),
        }
    }

    /// `chi_self(i,j)` lies in `{0, e * chi_other(i,j)}` for every pair, with `e = +`.
    pub fn conforms_to(&self, other: &Chirotope2) -> bool {
        self.plus & !other.plus == 0 && self.minus & !other.minus == 0
    }

    /// The chirotope comparator: there is a global sign `e` with
    /// `chi_self in {0, e * chi_other}`.
    pub fn weakly_below(&self, other: &Chirotope2) -> bool {
        self.conforms_to(other) || self.conforms_to(&other.negated())
    }

    /// Number of pairs with nonzero sign.
    pub fn basis_count(&self) -> u32 {
        (self.plus | self.minus).count_ones()
    }
}

impl fmt::Display for Chirotope2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={};chi=", self.n)?;
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                write!(f, "{}", self.get(i, j).to_char())?;
            }
        }
        Ok(())
    }
}

impl FromStr for Chirotope2 {
    type Err = Error;

    /// Parses `n=<n>;chi=<upper triangle>`.
    fn from_str(s: &str) -> Result<Chirotope2> {
        let bad = |why: &str| Error::Parse(format!("chirotope {s:?}: {why}"));
        let (head, tail) = s.trim().split_once(';').ok_or_else(|| bad("missing ';'"))?;
        let n: usize = head
            .strip_prefix("n=")
            .ok_or_else(|| bad("missing n="))?
            .parse()
            .map_err(|_| bad("bad n"))?;
        if n > MAX_N {
            return Err(bad("n too large"));
        }
        let word = tail.strip_prefix("chi=").ok_or_else(|| bad("missing chi="))?;
        let signs: Vec<Sign> = word
            .chars()
            .map(|c| Sign::from_char(c).ok_or_else(|| bad("bad sign character")))
            .collect::<Result<_>>()?;
        if signs.len() != n * n.saturating_sub(1) / 2 {
            return Err(bad("wrong number of pairs"));
        }
        let mut it = signs.into_iter();
        Ok(Chirotope2::from_fn(n, |_, _| it.next().unwrap()))
    }
}
