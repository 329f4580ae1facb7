use std::collections::HashSet;

use super::mask::{SetMask, Universe};
use crate::error::Result;

/// Universes up to this size get a materialized `2^n` membership bit table.
pub const INDEX_TABLE_MAX_N: u32 = 24;

#[derive(Clone, Debug)]
enum Index {
    /// One bit per mask.
    Table(Vec<u64>),
    /// Binary search over the sorted member list.
    Sorted,
}

/// A deduplicated family of subsets of a fixed universe.
///
/// Members are kept strictly increasing by mask value.
#[derive(Clone, Debug)]
pub struct Family {
    universe: Universe,
    members: Vec<SetMask>,
    index: Index,
}

impl PartialEq for Family {
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe && self.members == other.members
    }
}

impl Eq for Family {}

impl Family {
    pub fn new(universe: Universe, masks: impl IntoIterator<Item = SetMask>) -> Result<Self> {
        let mut members = Vec::new();
        for m in masks {
            members.push(universe.check(m)?);
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self::from_sorted(universe, members))
    }

    /// `members` must be strictly increasing and valid in `universe`.
    pub(crate) fn from_sorted(universe: Universe, members: Vec<SetMask>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(members.iter().all(|&m| universe.contains(m)));
        let index = if universe.n() <= INDEX_TABLE_MAX_N {
            let words = (universe.subset_count() as usize).div_ceil(64);
            let mut table = vec![0u64; words];
            for m in &members {
                table[(m.0 >> 6) as usize] |= 1 << (m.0 & 63);
            }
            Index::Table(table)
        } else {
            Index::Sorted
        };
        Family { universe, members, index }
    }

    pub(crate) fn from_unsorted(universe: Universe, mut members: Vec<SetMask>) -> Self {
        members.sort_unstable();
        members.dedup();
        Self::from_sorted(universe, members)
    }

    /// Family built from a `2^n` indicator table.
    pub(crate) fn from_indicator(universe: Universe, marked: &[bool]) -> Self {
        let members = marked
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(m, _)| SetMask(m as u64))
            .collect();
        Self::from_sorted(universe, members)
    }

    pub fn empty(universe: Universe) -> Self {
        Self::from_sorted(universe, Vec::new())
    }

    /// All subsets of `base`.
    pub fn cube(universe: Universe, base: SetMask) -> Result<Self> {
        universe.check(base)?;
        Ok(Self::from_unsorted(universe, base.submasks().collect()))
    }

    pub fn powerset(universe: Universe) -> Self {
        Self::from_sorted(universe, universe.masks().collect())
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn members(&self) -> &[SetMask] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = SetMask> + '_ {
        self.members.iter().copied()
    }

    pub fn contains(&self, m: SetMask) -> bool {
        if !self.universe.contains(m) {
            return false;
        }
        match &self.index {
            Index::Table(table) => table[(m.0 >> 6) as usize] >> (m.0 & 63) & 1 == 1,
            Index::Sorted => self.members.binary_search(&m).is_ok(),
        }
    }

    pub fn is_subfamily(&self, other: &Family) -> bool {
        self.universe == other.universe && self.iter().all(|m| other.contains(m))
    }

    pub fn union(&self, other: &Family) -> Result<Family> {
        Family::new(self.universe, self.iter().chain(other.iter()))
    }

    /// `{ [n] \ X : X in self }`.
    pub fn complement(&self) -> Family {
        let u = self.universe;
        Self::from_unsorted(u, self.iter().map(|m| u.complement(m)).collect())
    }

    /// Whether every subset of every member is a member.
    pub fn is_downset(&self) -> bool {
        // Closure under removing single elements implies closure under subsets.
        self.iter()
            .all(|m| m.elements().all(|e| self.contains(m.without(e))))
    }

    /// Whether every superset of every member is a member.
    pub fn is_upset(&self) -> bool {
        let full = self.universe.full();
        self.iter().all(|m| {
            full.difference(m)
                .elements()
                .all(|e| self.contains(m.with(e)))
        })
    }

    /// Smallest down-set containing the family.
    pub fn downset_closure(&self) -> Family {
        let u = self.universe;
        if u.n() <= INDEX_TABLE_MAX_N {
            let size = u.subset_count() as usize;
            let mut marked = vec![false; size];
            for m in &self.members {
                marked[m.0 as usize] = true;
            }
            for bit in 0..u.n() {
                let b = 1usize << bit;
                for m in 0..size {
                    if m & b != 0 && marked[m] {
                        marked[m ^ b] = true;
                    }
                }
            }
            return Self::from_indicator(u, &marked);
        }
        let mut seen: HashSet<SetMask> = self.iter().collect();
        let mut stack: Vec<SetMask> = self.members.clone();
        while let Some(m) = stack.pop() {
            for e in m.elements() {
                let sub = m.without(e);
                if seen.insert(sub) {
                    stack.push(sub);
                }
            }
        }
        Self::from_unsorted(u, seen.into_iter().collect())
    }

    /// Members not strictly contained in another member.
    pub fn maximal_elements(&self) -> Family {
        let u = self.universe;
        let quadratic_work = (self.len() as u64).saturating_mul(self.len() as u64);
        let table_work = u.subset_count().saturating_mul(u.n() as u64);
        if u.n() <= INDEX_TABLE_MAX_N && table_work < quadratic_work {
            // above[s]: some member contains s.
            let size = u.subset_count() as usize;
            let mut above = vec![false; size];
            for m in &self.members {
                above[m.0 as usize] = true;
            }
            for bit in 0..u.n() {
                let b = 1usize << bit;
                for m in 0..size {
                    if m & b != 0 && above[m] {
                        above[m ^ b] = true;
                    }
                }
            }
            let full = u.full();
            let tops = self
                .iter()
                .filter(|m| {
                    full.difference(*m)
                        .elements()
                        .all(|e| !above[m.with(e).0 as usize])
                })
                .collect();
            return Self::from_sorted(u, tops);
        }
        let mut by_size = self.members.clone();
        by_size.sort_unstable_by_key(|m| std::cmp::Reverse(m.len()));
        let mut tops: Vec<SetMask> = Vec::new();
        for m in by_size {
            if !tops.iter().any(|t| m.is_subset(*t)) {
                tops.push(m);
            }
        }
        Self::from_unsorted(u, tops)
    }
}

/// All `2^(n-1)` subsets containing element 1.
pub fn make_star(universe: Universe) -> Family {
    let members = universe.masks().filter(|m| m.contains(1)).collect();
    Family::from_sorted(universe, members)
}
