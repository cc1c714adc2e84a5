//! Signs and sign vectors over `{-, 0, +}`.
//!
//! A [`SignVector`] packs its positive and negative supports into two `u32`
//! masks, so ground sets are limited to 32 elements. Everything in this crate
//! stays far below that.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, Neg};

/// Largest ground set a [`SignVector`] can hold.
pub const MAX_ELEMENTS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of_i32(v: i32) -> Sign {
        match v.cmp(&0) {
            Ordering::Less => Sign::Neg,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Pos,
        }
    }

    pub fn of_ordering(o: Ordering) -> Sign {
        match o {
            Ordering::Less => Sign::Neg,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Pos,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }

    pub fn to_char(self) -> char {
        match self {
            Sign::Neg => '-',
            Sign::Zero => '0',
            Sign::Pos => '+',
        }
    }

    pub fn from_char(c: char) -> Option<Sign> {
        match c {
            '-' => Some(Sign::Neg),
            '0' => Some(Sign::Zero),
            '+' => Some(Sign::Pos),
            _ => None,
        }
    }

    /// The partial order `0 < -` and `0 < +`.
    pub fn leq(self, other: Sign) -> bool {
        self == Sign::Zero || self == other
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
            Sign::Pos => Sign::Neg,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        match (self, rhs) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Pos,
            _ => Sign::Neg,
        }
    }
}

/// A word of length `len` over `{-, 0, +}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignVector {
    len: u8,
    plus: u32,
    minus: u32,
}

impl SignVector {
    pub fn zero(len: usize) -> SignVector {
        assert!(len <= MAX_ELEMENTS, "sign vectors hold at most {MAX_ELEMENTS} entries");
        SignVector { len: len as u8, plus: 0, minus: 0 }
    }

    pub fn from_masks(len: usize, plus: u32, minus: u32) -> SignVector {
        assert!(len <= MAX_ELEMENTS);
        assert_eq!(plus & minus, 0, "an entry cannot be both + and -");
        let full = full_mask(len);
        assert!(plus & !full == 0 && minus & !full == 0, "mask exceeds length");
        SignVector { len: len as u8, plus, minus }
    }

    pub fn from_signs(signs: &[Sign]) -> SignVector {
        let mut v = SignVector::zero(signs.len());
        for (i, &s) in signs.iter().enumerate() {
            v.set(i, s);
        }
        v
    }

    /// Unit vector with `s` at position `i`.
    pub fn unit(len: usize, i: usize, s: Sign) -> SignVector {
        let mut v = SignVector::zero(len);
        v.set(i, s);
        v
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn plus_mask(&self) -> u32 {
        self.plus
    }

    pub fn minus_mask(&self) -> u32 {
        self.minus
    }

    pub fn support_mask(&self) -> u32 {
        self.plus | self.minus
    }

    pub fn zero_mask(&self) -> u32 {
        full_mask(self.len()) & !self.support_mask()
    }

    pub fn support(&self) -> Vec<usize> {
        bits(self.support_mask()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.support_mask() == 0
    }

    pub fn get(&self, i: usize) -> Sign {
        debug_assert!(i < self.len());
        let bit = 1u32 << i;
        if self.plus & bit != 0 {
            Sign::Pos
        } else if self.minus & bit != 0 {
            Sign::Neg
        } else {
            Sign::Zero
        }
    }

    pub fn set(&mut self, i: usize, s: Sign) {
        assert!(i < self.len());
        let bit = 1u32 << i;
        self.plus &= !bit;
        self.minus &= !bit;
        match s {
            Sign::Pos => self.plus |= bit,
            Sign::Neg => self.minus |= bit,
            Sign::Zero => {}
        }
    }

    pub fn signs(&self) -> Vec<Sign> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    /// `X ∘ Y`: take `X(e)` where it is nonzero, `Y(e)` otherwise.
    pub fn compose(&self, other: &SignVector) -> SignVector {
        debug_assert_eq!(self.len, other.len);
        let free = !self.support_mask();
        SignVector {
            len: self.len,
            plus: self.plus | (other.plus & free),
            minus: self.minus | (other.minus & free),
        }
    }

    /// Componentwise `0 < ±` order.
    pub fn leq(&self, other: &SignVector) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.plus & !other.plus == 0 && self.minus & !other.minus == 0
    }

    /// Positions where `self` and `other` are nonzero with opposite signs.
    pub fn separation_mask(&self, other: &SignVector) -> u32 {
        (self.plus & other.minus) | (self.minus & other.plus)
    }

    /// Representative of `{X, -X}`: the first nonzero entry is `+`.
    pub fn normalized(&self) -> SignVector {
        let s = self.support_mask();
        if s == 0 {
            return *self;
        }
        let first = s.trailing_zeros();
        if self.minus & (1 << first) != 0 {
            -*self
        } else {
            *self
        }
    }

    /// Restriction to the first `len` positions.
    pub fn truncated(&self, len: usize) -> SignVector {
        assert!(len <= self.len());
        let m = full_mask(len);
        SignVector { len: len as u8, plus: self.plus & m, minus: self.minus & m }
    }

    /// Parses a word such as `+0-`.
    pub fn parse(word: &str) -> Option<SignVector> {
        let signs: Option<Vec<Sign>> = word.chars().map(Sign::from_char).collect();
        let signs = signs?;
        if signs.len() > MAX_ELEMENTS {
            return None;
        }
        Some(SignVector::from_signs(&signs))
    }
}

impl Neg for SignVector {
    type Output = SignVector;
    fn neg(self) -> SignVector {
        SignVector { len: self.len, plus: self.minus, minus: self.plus }
    }
}

impl PartialOrd for SignVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic by position with `- < 0 < +`; used only for deterministic output.
impl Ord for SignVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            for i in 0..self.len() {
                match self.get(i).cmp(&other.get(i)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            write!(f, "{}", self.get(i).to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

pub(crate) fn full_mask(len: usize) -> u32 {
    if len >= 32 {
        u32::MAX
    } else {
        (1u32 << len) - 1
    }
}

/// Iterates the set bits of a mask, lowest first.
pub(crate) fn bits(mut mask: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}
