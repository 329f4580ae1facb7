use std::fmt;
use std::ops::{BitAnd, BitOr, Not};

use crate::error::{Error, Result};

/// The ground set `{1, ..., n}`. Element `i` lives in bit `i - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Universe {
    n: u32,
}

impl Universe {
    /// Largest universe supported by pure set algebra.
    pub const MAX_N: u32 = 62;
    /// Largest universe for which `2^n`-sized tables may be allocated.
    pub const MAX_TABLE_N: u32 = 30;

    pub fn new(n: u32) -> Result<Self> {
        if n == 0 || n > Self::MAX_N {
            return Err(Error::UniverseSize { n, max: Self::MAX_N });
        }
        Ok(Universe { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn full(&self) -> SetMask {
        SetMask((1u64 << self.n) - 1)
    }

    /// Fails unless the universe is small enough for a `2^n` table capped at `limit`.
    pub fn require_table(&self, limit: u32) -> Result<()> {
        let limit = limit.min(Self::MAX_TABLE_N);
        if self.n > limit {
            return Err(Error::UniverseSize { n: self.n, max: limit });
        }
        Ok(())
    }

    /// Number of subsets, `2^n`.
    pub fn subset_count(&self) -> u64 {
        1u64 << self.n
    }

    pub fn contains(&self, m: SetMask) -> bool {
        m.0 >> self.n == 0
    }

    pub fn check(&self, m: SetMask) -> Result<SetMask> {
        if self.contains(m) {
            Ok(m)
        } else {
            Err(Error::MaskOutOfRange { mask: m.0, n: self.n })
        }
    }

    pub fn complement(&self, m: SetMask) -> SetMask {
        SetMask(!m.0 & self.full().0)
    }

    pub fn set(&self, elems: impl IntoIterator<Item = u32>) -> Result<SetMask> {
        let mut bits = 0u64;
        for e in elems {
            if e == 0 || e > self.n {
                return Err(Error::ElementOutOfRange { elem: e as u64, n: self.n });
            }
            bits |= 1 << (e - 1);
        }
        Ok(SetMask(bits))
    }

    /// All masks of the universe in ascending order.
    pub fn masks(&self) -> impl Iterator<Item = SetMask> {
        (0..self.subset_count()).map(SetMask)
    }
}

/// A subset of `[n]` stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetMask(pub u64);

impl SetMask {
    pub const EMPTY: SetMask = SetMask(0);

    pub fn bits(self) -> u64 {
        self.0
    }

    /// Builds a mask from 1-based elements without checking them against a
    /// universe; use [`Universe::set`] for validated input.
    pub fn from_elements(elems: impl IntoIterator<Item = u32>) -> SetMask {
        SetMask(elems.into_iter().fold(0, |acc, e| acc | 1 << (e - 1)))
    }

    pub fn singleton(elem: u32) -> SetMask {
        SetMask(1 << (elem - 1))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, elem: u32) -> bool {
        (1..=64).contains(&elem) && self.0 >> (elem - 1) & 1 == 1
    }

    pub fn is_subset(self, other: SetMask) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset(self, other: SetMask) -> bool {
        self != other && self.is_subset(other)
    }

    pub fn union(self, other: SetMask) -> SetMask {
        SetMask(self.0 | other.0)
    }

    pub fn intersection(self, other: SetMask) -> SetMask {
        SetMask(self.0 & other.0)
    }

    pub fn difference(self, other: SetMask) -> SetMask {
        SetMask(self.0 & !other.0)
    }

    pub fn without(self, elem: u32) -> SetMask {
        SetMask(self.0 & !(1 << (elem - 1)))
    }

    pub fn with(self, elem: u32) -> SetMask {
        SetMask(self.0 | 1 << (elem - 1))
    }

    /// Smallest element, if any.
    pub fn first(self) -> Option<u32> {
        (self.0 != 0).then(|| self.0.trailing_zeros() + 1)
    }

    /// Elements in ascending order, 1-based.
    pub fn elements(self) -> Elements {
        Elements(self.0)
    }

    /// All submasks of `self`, from `self` down to the empty set.
    pub fn submasks(self) -> Submasks {
        Submasks { full: self.0, cur: Some(self.0) }
    }
}

impl BitOr for SetMask {
    type Output = SetMask;
    fn bitor(self, rhs: SetMask) -> SetMask {
        self.union(rhs)
    }
}

impl BitAnd for SetMask {
    type Output = SetMask;
    fn bitand(self, rhs: SetMask) -> SetMask {
        self.intersection(rhs)
    }
}

/// Bitwise complement in all 64 bits; intersect with a universe before use.
impl Not for SetMask {
    type Output = SetMask;
    fn not(self) -> SetMask {
        SetMask(!self.0)
    }
}

impl fmt::Debug for SetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for SetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Debug)]
pub struct Elements(u64);

impl Iterator for Elements {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(e + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Elements {}

#[derive(Clone, Debug)]
pub struct Submasks {
    full: u64,
    cur: Option<u64>,
}

impl Iterator for Submasks {
    type Item = SetMask;

    fn next(&mut self) -> Option<SetMask> {
        let cur = self.cur?;
        self.cur = (cur != 0).then(|| (cur - 1) & self.full);
        Some(SetMask(cur))
    }
}
