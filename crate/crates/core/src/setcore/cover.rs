//! Cover queries: can a target be reached as a union of at most `j` members?
//!
//! Two independent engines answer the same question.
//!
//! [`CoverTable`] counts, for every mask `m`, the `j`-tuples of members whose
//! union is exactly `m`. With `cnt[s]` the number of members inside `s`, the
//! number of tuples with union inside `s` is `cnt[s]^j`; Möbius inversion over
//! the subset lattice recovers the exact-union counts. Only the zero/nonzero
//! pattern matters, so the arithmetic must never produce a false zero.
//!
//! [`CoverSearch`] is a branch-and-bound over the maximal members: it always
//! branches on the smallest uncovered element, so every pick adds coverage.

use super::family::Family;
use super::mask::{SetMask, Universe};
use crate::error::{Error, Result};

/// `min_cover` value for masks that are not a union of at most `limit` members.
pub const NONE: u8 = u8::MAX;
pub const MAX_COVER_LIMIT: u32 = 8;
pub const MAX_COVER_N: u32 = 24;

const PRIME_A: u64 = (1 << 61) - 1;
const PRIME_B: u64 = (1 << 62) - 57;

/// Number system used for the transform-domain counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arithmetic {
    /// Exact: every count is below `2^64`.
    Wrapping64,
    /// Exact: every count is below `2^128`.
    Wrapping128,
    /// Two prime-modulus runs; a count is zero only if it vanishes in both.
    DualPrime,
}

impl Arithmetic {
    /// Narrowest exact width for `members^limit`, falling back to two primes.
    pub fn for_bound(members: usize, limit: u32) -> Arithmetic {
        let bit_len = usize::BITS - members.leading_zeros();
        match bit_len * limit {
            0..=64 => Arithmetic::Wrapping64,
            65..=128 => Arithmetic::Wrapping128,
            _ => Arithmetic::DualPrime,
        }
    }
}

trait Ring: Copy {
    fn from_count(c: u32) -> Self;
    fn sub(self, o: Self) -> Self;
    fn mul(self, o: Self) -> Self;
    fn is_zero(self) -> bool;

    fn pow(self, e: u32) -> Self {
        let mut acc = self;
        for _ in 1..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl Ring for u64 {
    fn from_count(c: u32) -> Self {
        c as u64
    }
    fn sub(self, o: Self) -> Self {
        self.wrapping_sub(o)
    }
    fn mul(self, o: Self) -> Self {
        self.wrapping_mul(o)
    }
    fn is_zero(self) -> bool {
        self == 0
    }
}

impl Ring for u128 {
    fn from_count(c: u32) -> Self {
        c as u128
    }
    fn sub(self, o: Self) -> Self {
        self.wrapping_sub(o)
    }
    fn mul(self, o: Self) -> Self {
        self.wrapping_mul(o)
    }
    fn is_zero(self) -> bool {
        self == 0
    }
}

#[derive(Clone, Copy)]
struct ModP<const P: u64>(u64);

impl<const P: u64> Ring for ModP<P> {
    fn from_count(c: u32) -> Self {
        ModP(c as u64 % P)
    }
    fn sub(self, o: Self) -> Self {
        ModP(if self.0 >= o.0 { self.0 - o.0 } else { self.0 + P - o.0 })
    }
    fn mul(self, o: Self) -> Self {
        ModP(((self.0 as u128 * o.0 as u128) % P as u128) as u64)
    }
    fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// In-place subset Möbius transform.
fn mobius<R: Ring>(a: &mut [R]) {
    let mut half = 1;
    while half < a.len() {
        for block in a.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (l, h) in lo.iter().zip(hi.iter_mut()) {
                *h = h.sub(*l);
            }
        }
        half *= 2;
    }
}

/// Records `j` for every mask that is first seen as an exact union of `j` members.
fn mark_layer<R: Ring>(counts: &[u32], j: u32, min_cover: &mut [u8]) {
    let mut work: Vec<R> = counts.iter().map(|&c| R::from_count(c).pow(j)).collect();
    mobius(&mut work);
    for (slot, v) in min_cover.iter_mut().zip(&work) {
        if *slot == NONE && !v.is_zero() {
            *slot = j as u8;
        }
    }
}

/// For every mask, the least number of members whose union is exactly that mask.
#[derive(Clone, Debug)]
pub struct CoverTable {
    universe: Universe,
    limit: u32,
    arithmetic: Arithmetic,
    has_empty: bool,
    min_cover: Vec<u8>,
}

impl CoverTable {
    pub fn build(f: &Family, limit: u32) -> Result<Self> {
        Self::build_with(f, limit, Arithmetic::for_bound(f.len(), limit))
    }

    /// Like [`CoverTable::build`] with a caller-chosen number system. Choosing
    /// a width narrower than [`Arithmetic::for_bound`] is not exact.
    pub fn build_with(f: &Family, limit: u32, arithmetic: Arithmetic) -> Result<Self> {
        let u = f.universe();
        u.require_table(MAX_COVER_N)?;
        if !(1..=MAX_COVER_LIMIT).contains(&limit) {
            return Err(Error::CoverLimit(limit));
        }
        if f.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let size = u.subset_count() as usize;

        // zeta: counts[s] = #members inside s
        let mut counts = vec![0u32; size];
        for m in f.iter() {
            counts[m.0 as usize] += 1;
        }
        let mut half = 1;
        while half < size {
            for block in counts.chunks_exact_mut(2 * half) {
                let (lo, hi) = block.split_at_mut(half);
                for (l, h) in lo.iter().zip(hi.iter_mut()) {
                    *h += *l;
                }
            }
            half *= 2;
        }

        let mut min_cover = vec![NONE; size];
        for j in 1..=limit {
            match arithmetic {
                Arithmetic::Wrapping64 => mark_layer::<u64>(&counts, j, &mut min_cover),
                Arithmetic::Wrapping128 => mark_layer::<u128>(&counts, j, &mut min_cover),
                Arithmetic::DualPrime => {
                    mark_layer::<ModP<PRIME_A>>(&counts, j, &mut min_cover);
                    mark_layer::<ModP<PRIME_B>>(&counts, j, &mut min_cover);
                }
            }
        }
        let has_empty = f.contains(SetMask::EMPTY);
        min_cover[0] = if has_empty { 0 } else { NONE };

        Ok(CoverTable { universe: u, limit, arithmetic, has_empty, min_cover })
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn limit(&self) -> u32 {
        self.limit
    }

    pub fn arithmetic(&self) -> Arithmetic {
        self.arithmetic
    }

    /// Raw per-mask values: `0..=limit`, or [`NONE`].
    pub fn as_slice(&self) -> &[u8] {
        &self.min_cover
    }

    pub fn min_cover(&self, m: SetMask) -> Option<u32> {
        match self.min_cover[m.0 as usize] {
            NONE => None,
            v => Some(v as u32),
        }
    }

    /// Whether `r` is the union of exactly `t` members (repetition allowed).
    fn reaches(&self, r: SetMask, t: u32) -> bool {
        if r.is_empty() {
            return t == 0 || self.has_empty;
        }
        match self.min_cover[r.0 as usize] {
            NONE => false,
            v => v as u32 <= t,
        }
    }

    /// Distinct members of `f` whose union is exactly `m`, using the fewest
    /// possible. `f` must be the family the table was built from.
    pub fn decompose(&self, f: &Family, m: SetMask) -> Option<Vec<SetMask>> {
        let t = self.min_cover(m)?;
        let mut picks = self.decompose_exact(f, m, t)?;
        picks.sort_unstable();
        picks.dedup();
        Some(picks)
    }

    fn decompose_exact(&self, f: &Family, m: SetMask, t: u32) -> Option<Vec<SetMask>> {
        if t == 0 {
            return m.is_empty().then(Vec::new);
        }
        for member in f.iter().filter(|x| x.is_subset(m)) {
            let need = m.difference(member);
            for s in m.intersection(member).submasks() {
                let rest = need | s;
                if self.reaches(rest, t - 1) {
                    let mut picks = self.decompose_exact(f, rest, t - 1)?;
                    picks.push(member);
                    return Some(picks);
                }
            }
        }
        None
    }

    /// Upward closure: for every target, the least `j` such that some union of
    /// `j` members contains it.
    pub fn bound(&self) -> CoverBound {
        let mut best = self.min_cover.clone();
        let mut half = 1;
        while half < best.len() {
            for block in best.chunks_exact_mut(2 * half) {
                let (lo, hi) = block.split_at_mut(half);
                for (l, h) in lo.iter_mut().zip(hi.iter()) {
                    *l = (*l).min(*h);
                }
            }
            half *= 2;
        }
        CoverBound { universe: self.universe, limit: self.limit, best }
    }
}

pub fn build_cover_table(f: &Family, limit: u32) -> Result<CoverTable> {
    CoverTable::build(f, limit)
}

/// Superset-minimum of a [`CoverTable`]; answers `union ⊇ target` queries in O(1).
#[derive(Clone, Debug)]
pub struct CoverBound {
    universe: Universe,
    limit: u32,
    best: Vec<u8>,
}

impl CoverBound {
    pub fn limit(&self) -> u32 {
        self.limit
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    /// Whether at most `j` members have union containing `target`.
    ///
    /// Panics if `j` exceeds the table limit.
    pub fn can_cover(&self, target: SetMask, j: u32) -> bool {
        assert!(j <= self.limit, "query depth {j} exceeds cover table limit {}", self.limit);
        if target.is_empty() {
            return true;
        }
        match self.best[target.0 as usize] {
            NONE => false,
            v => v as u32 <= j,
        }
    }
}

/// Branch-and-bound cover search over the maximal members of a family.
#[derive(Clone, Debug)]
pub struct CoverSearch {
    universe: Universe,
    tops: Vec<SetMask>,
    by_element: Vec<Vec<SetMask>>,
    widest: u32,
}

impl CoverSearch {
    pub fn new(f: &Family) -> Self {
        Self::from_tops(f.universe(), f.maximal_elements().members().to_vec())
    }

    /// `tops` must be an antichain.
    fn from_tops(universe: Universe, tops: Vec<SetMask>) -> Self {
        let mut search = CoverSearch {
            universe,
            tops,
            by_element: Vec::new(),
            widest: 0,
        };
        search.reindex();
        search
    }

    fn reindex(&mut self) {
        let mut order = self.tops.clone();
        order.sort_unstable_by_key(|m| (std::cmp::Reverse(m.len()), *m));
        self.by_element = (1..=self.universe.n())
            .map(|e| order.iter().copied().filter(|m| m.contains(e)).collect())
            .collect();
        self.widest = self.tops.iter().map(|m| m.len()).max().unwrap_or(0);
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn tops(&self) -> &[SetMask] {
        &self.tops
    }

    /// Adds a member, keeping only maximal ones. Returns whether the tops changed.
    pub fn insert(&mut self, m: SetMask) -> bool {
        if self.tops.iter().any(|t| m.is_subset(*t)) {
            return false;
        }
        self.tops.retain(|t| !t.is_subset(m));
        self.tops.push(m);
        self.tops.sort_unstable();
        self.reindex();
        true
    }

    pub fn can_cover(&self, target: SetMask, j: u32) -> bool {
        self.find(target, j).is_some()
    }

    /// At most `j` maximal members whose union contains `target`.
    pub fn find(&self, target: SetMask, j: u32) -> Option<Vec<SetMask>> {
        let mut picks = Vec::with_capacity(j as usize);
        self.dfs(target, SetMask::EMPTY, j, &mut picks).then_some(picks)
    }

    fn dfs(&self, target: SetMask, covered: SetMask, j: u32, picks: &mut Vec<SetMask>) -> bool {
        let rest = target.difference(covered);
        let Some(e) = rest.first() else {
            return true;
        };
        if j == 0 || rest.len() > j * self.widest {
            return false;
        }
        for &top in &self.by_element[(e - 1) as usize] {
            picks.push(top);
            if self.dfs(target, covered | top, j - 1, picks) {
                return true;
            }
            picks.pop();
        }
        false
    }
}

/// Whether at most `j` members of `f` have union containing `target`.
pub fn can_cover(f: &Family, target: SetMask, j: u32) -> bool {
    CoverSearch::new(f).can_cover(target, j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setcore::make_star;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn u(n: u32) -> Universe {
        Universe::new(n).unwrap()
    }

    fn fam(n: u32, sets: &[&[u32]]) -> Family {
        let uni = u(n);
        Family::new(uni, sets.iter().map(|s| uni.set(s.iter().copied()).unwrap())).unwrap()
    }

    fn random_downset(rng: &mut ChaCha8Rng, n: u32) -> Family {
        let uni = u(n);
        let gens = rng.gen_range(1..=6);
        let seeds: Vec<SetMask> = (0..gens)
            .map(|_| SetMask(rng.gen_range(0..uni.subset_count()) & rng.gen::<u64>()))
            .collect();
        Family::new(uni, seeds).unwrap().downset_closure()
    }

    /// Least j such that some j-multiset of tops has union exactly m, by
    /// enumerating all multisets of size up to `limit`.
    fn naive_min_cover(f: &Family, limit: u32) -> Vec<u8> {
        let uni = f.universe();
        let mut out = vec![NONE; uni.subset_count() as usize];
        let members = f.members();
        fn rec(members: &[SetMask], start: usize, acc: SetMask, depth: u32, limit: u32, out: &mut [u8]) {
            if depth > 0 {
                let slot = &mut out[acc.0 as usize];
                if (depth as u8) < *slot {
                    *slot = depth as u8;
                }
            }
            if depth == limit {
                return;
            }
            for i in start..members.len() {
                rec(members, i, acc | members[i], depth + 1, limit, out);
            }
        }
        rec(members, 0, SetMask::EMPTY, 0, limit, &mut out);
        out[0] = if f.contains(SetMask::EMPTY) { 0 } else { NONE };
        out
    }

    #[test]
    fn small_example() {
        let f = fam(2, &[&[], &[1], &[2]]);
        let t = CoverTable::build(&f, 2).unwrap();
        assert_eq!(t.min_cover(SetMask(0b11)), Some(2));
        assert_eq!(t.min_cover(SetMask(0b01)), Some(1));
        assert_eq!(t.min_cover(SetMask::EMPTY), Some(0));
        let t1 = CoverTable::build(&f, 1).unwrap();
        assert_eq!(t1.min_cover(SetMask(0b11)), None);
    }

    #[test]
    fn powerset_is_one_cover() {
        let f = Family::powerset(u(6));
        let t = CoverTable::build(&f, 1).unwrap();
        for m in u(6).masks().skip(1) {
            assert_eq!(t.min_cover(m), Some(1));
        }
    }

    #[test]
    fn empty_mask_without_empty_member() {
        let f = fam(3, &[&[1], &[2, 3]]);
        let t = CoverTable::build(&f, 3).unwrap();
        assert_eq!(t.min_cover(SetMask::EMPTY), None);
        assert_eq!(t.min_cover(SetMask(0b111)), Some(2));
        assert_eq!(t.min_cover(SetMask(0b011)), None);
        assert!(t.bound().can_cover(SetMask(0b011), 2));
        assert!(t.bound().can_cover(SetMask::EMPTY, 1));
    }

    #[test]
    fn preconditions() {
        assert!(matches!(CoverTable::build(&Family::empty(u(3)), 2), Err(Error::EmptyFamily)));
        assert!(matches!(CoverTable::build(&make_star(u(3)), 0), Err(Error::CoverLimit(0))));
        assert!(matches!(CoverTable::build(&make_star(u(3)), 9), Err(Error::CoverLimit(9))));
        assert!(matches!(
            CoverTable::build(&make_star(u(25)), 2),
            Err(Error::UniverseSize { .. })
        ));
    }

    #[test]
    fn width_selection() {
        assert_eq!(Arithmetic::for_bound(255, 8), Arithmetic::Wrapping64);
        assert_eq!(Arithmetic::for_bound(256, 8), Arithmetic::Wrapping128);
        assert_eq!(Arithmetic::for_bound(1 << 16, 7), Arithmetic::Wrapping128);
        assert_eq!(Arithmetic::for_bound(1 << 24, 8), Arithmetic::DualPrime);
    }

    fn is_prime(p: u64) -> bool {
        // deterministic Miller-Rabin for 64-bit inputs
        let mul = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
        let pow = |mut b: u64, mut e: u64| {
            let mut r = 1u64;
            while e > 0 {
                if e & 1 == 1 {
                    r = mul(r, b);
                }
                b = mul(b, b);
                e >>= 1;
            }
            r
        };
        let (mut d, mut s) = (p - 1, 0);
        while d % 2 == 0 {
            d /= 2;
            s += 1;
        }
        [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37].iter().all(|&a| {
            let mut x = pow(a, d);
            if x == 1 || x == p - 1 {
                return true;
            }
            for _ in 1..s {
                x = mul(x, x);
                if x == p - 1 {
                    return true;
                }
            }
            false
        })
    }

    #[test]
    fn moduli_are_prime() {
        assert!(is_prime(PRIME_A));
        assert!(is_prime(PRIME_B));
    }

    #[test]
    fn dp_matches_tuple_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = rng.gen_range(3..=9);
            let f = random_downset(&mut rng, n);
            let limit = rng.gen_range(1..=4);
            let t = CoverTable::build(&f, limit).unwrap();
            assert_eq!(t.as_slice(), &naive_min_cover(&f, limit)[..], "n={n} limit={limit}");
        }
    }

    #[test]
    fn arithmetics_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let f = random_downset(&mut rng, 9);
            for limit in [2, 5, 8] {
                let a = CoverTable::build_with(&f, limit, Arithmetic::Wrapping128).unwrap();
                let b = CoverTable::build_with(&f, limit, Arithmetic::DualPrime).unwrap();
                assert_eq!(a.as_slice(), b.as_slice());
            }
        }
    }

    #[test]
    fn decompose_gives_exact_unions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let f = random_downset(&mut rng, 8);
            let t = CoverTable::build(&f, 4).unwrap();
            for m in u(8).masks() {
                match t.min_cover(m) {
                    Some(j) => {
                        let picks = t.decompose(&f, m).unwrap();
                        assert_eq!(picks.len() as u32, j);
                        assert!(picks.iter().all(|p| f.contains(*p)));
                        assert_eq!(picks.iter().fold(SetMask::EMPTY, |a, &b| a | b), m);
                    }
                    None => assert!(t.decompose(&f, m).is_none()),
                }
            }
        }
    }

    #[test]
    fn star_search_example() {
        let uni = u(4);
        let star = make_star(uni);
        assert!(can_cover(&star, uni.set([2, 3, 4]).unwrap(), 3));
        assert!(can_cover(&star, uni.set([2, 3, 4]).unwrap(), 1));
        let only_empty = fam(4, &[&[]]);
        for j in 1..=4 {
            assert!(!can_cover(&only_empty, SetMask::singleton(1), j));
        }
        assert!(can_cover(&only_empty, SetMask::EMPTY, 1));
    }

    #[test]
    fn search_insert_keeps_antichain() {
        let uni = u(4);
        let mut s = CoverSearch::new(&Family::empty(uni));
        assert!(s.insert(SetMask(0b0011)));
        assert!(!s.insert(SetMask(0b0001)));
        assert!(s.insert(SetMask(0b0111)));
        assert_eq!(s.tops(), &[SetMask(0b0111)]);
        assert!(s.insert(SetMask(0b1000)));
        assert!(s.can_cover(uni.full(), 2));
        assert!(!s.can_cover(uni.full(), 1));
    }

    #[test]
    fn search_agrees_with_table_on_random_queries() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let uni = u(9);
        let f = Family::new(uni, (0..40).map(|_| SetMask(rng.gen_range(0..512)))).unwrap();
        let bound = CoverTable::build(&f, 8).unwrap().bound();
        let search = CoverSearch::new(&f);
        for _ in 0..1000 {
            let target = SetMask(rng.gen_range(0..512));
            let j = rng.gen_range(1..=8);
            assert_eq!(search.can_cover(target, j), bound.can_cover(target, j), "{target} {j}");
            assert_eq!(can_cover(&f, target, j), bound.can_cover(target, j));
        }
    }

    proptest! {
        #[test]
        fn can_cover_monotone(
            seeds in proptest::collection::vec(0u64..256, 1..12),
            target in 0u64..256,
            drop in 0u64..256,
            j in 1u32..4,
        ) {
            let f = Family::new(u(8), seeds.into_iter().map(SetMask)).unwrap();
            let t = SetMask(target);
            if can_cover(&f, t, j) {
                prop_assert!(can_cover(&f, t, j + 1));
                prop_assert!(can_cover(&f, t.difference(SetMask(drop)), j));
            }
        }
    }
}
