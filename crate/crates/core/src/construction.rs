//! Block construction of small maximal k-wise intersecting families.
//!
//! `[n]` is split into `k - 1` near-equal blocks `A_1..A_{k-1}`, each with a
//! special element `a_i`. Block indices wrap, so the predecessor of block 1 is
//! block `k - 1`. The complement-world family is the union over `i` of
//!
//! - `F1(i)`: proper subsets of `A_i`;
//! - `F2(i)`: `X ∪ Y` with `X ⊆ A_i`, `X ∉ {A_i, A_i \ {a_i}}`, and `Y` any set
//!   of specials avoiding `a_{i-1}` and `a_i`.
//!
//! Complementing every member gives the direct-world maximal family.

use crate::error::{Error, Result};
use crate::setcore::{Family, SetMask, Universe};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstructionParams {
    k: u32,
    n: u32,
}

impl ConstructionParams {
    pub fn new(k: u32, n: u32) -> Result<Self> {
        if k < 3 {
            return Err(Error::Params { k, n, reason: "construction requires k >= 3" });
        }
        if n < 2 * (k - 1) {
            return Err(Error::Params { k, n, reason: "construction requires n >= 2(k-1)" });
        }
        if n > Universe::MAX_N {
            return Err(Error::Params { k, n, reason: "universe too large" });
        }
        Ok(ConstructionParams { k, n })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn universe(&self) -> Universe {
        Universe::new(self.n).expect("validated")
    }
}

/// Disjoint blocks covering the universe, each with a chosen special element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPartition {
    universe: Universe,
    blocks: Vec<SetMask>,
    specials: Vec<u32>,
}

impl BlockPartition {
    pub fn new(universe: Universe, blocks: Vec<SetMask>, specials: Vec<u32>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Partition("no blocks".into()));
        }
        if blocks.len() != specials.len() {
            return Err(Error::Partition(format!(
                "{} blocks but {} special elements",
                blocks.len(),
                specials.len()
            )));
        }
        let mut seen = SetMask::EMPTY;
        for (i, (&b, &a)) in blocks.iter().zip(&specials).enumerate() {
            universe.check(b)?;
            if b.is_empty() {
                return Err(Error::Partition(format!("block {} is empty", i + 1)));
            }
            if !seen.intersection(b).is_empty() {
                return Err(Error::Partition(format!("block {} overlaps an earlier block", i + 1)));
            }
            if !b.contains(a) {
                return Err(Error::Partition(format!("special {a} is not in block {}", i + 1)));
            }
            seen = seen | b;
        }
        if seen != universe.full() {
            return Err(Error::Partition("blocks do not cover the universe".into()));
        }
        Ok(BlockPartition { universe, blocks, specials })
    }

    /// Partition into the given blocks, taking each block's least element as special.
    pub fn with_min_specials(universe: Universe, blocks: Vec<SetMask>) -> Result<Self> {
        let specials = blocks.iter().map(|b| b.first().unwrap_or(0)).collect();
        Self::new(universe, blocks, specials)
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    /// Number of blocks, `k - 1` for the construction.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[SetMask] {
        &self.blocks
    }

    pub fn specials(&self) -> &[u32] {
        &self.specials
    }

    pub fn block_sizes(&self) -> Vec<u32> {
        self.blocks.iter().map(|b| b.len()).collect()
    }

    fn check_index(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.len() {
            return Err(Error::BlockIndex { index: i, max: self.len() });
        }
        Ok(i - 1)
    }

    /// Block `A_i`, 1-based.
    pub fn block(&self, i: usize) -> Result<SetMask> {
        Ok(self.blocks[self.check_index(i)?])
    }

    /// Special element `a_i`, 1-based.
    pub fn special(&self, i: usize) -> Result<u32> {
        Ok(self.specials[self.check_index(i)?])
    }

    /// Cyclic predecessor: block 1 follows block `len`.
    pub fn pred(&self, i: usize) -> usize {
        if i == 1 {
            self.len()
        } else {
            i - 1
        }
    }

    pub fn specials_mask(&self) -> SetMask {
        SetMask::from_elements(self.specials.iter().copied())
    }
}

/// Contiguous runs, larger blocks first; `a_i = min A_i`.
pub fn make_partition(p: ConstructionParams) -> BlockPartition {
    let parts = p.k - 1;
    let (q, r) = (p.n / parts, p.n % parts);
    let mut blocks = Vec::with_capacity(parts as usize);
    let mut next = 1;
    for i in 0..parts {
        let size = if i < r { q + 1 } else { q };
        blocks.push(SetMask::from_elements(next..next + size));
        next += size;
    }
    BlockPartition::with_min_specials(p.universe(), blocks).expect("contiguous runs partition [n]")
}

/// `F1(i)`: every proper subset of `A_i`.
pub fn build_f1(bp: &BlockPartition, i: usize) -> Result<Family> {
    let block = bp.block(i)?;
    Family::new(bp.universe(), block.submasks().filter(|&x| x != block))
}

/// `F2(i)`: `X ∪ Y` with `X ⊆ A_i` not in `{A_i, A_i \ {a_i}}` and
/// `Y ⊆ specials \ {a_{i-1}, a_i}`.
pub fn build_f2(bp: &BlockPartition, i: usize) -> Result<Family> {
    let block = bp.block(i)?;
    let special = bp.special(i)?;
    let pred_special = bp.special(bp.pred(i))?;
    let free = bp.specials_mask().without(special).without(pred_special);
    let excluded = block.without(special);
    let mut members = Vec::new();
    for x in block.submasks().filter(|&x| x != block && x != excluded) {
        for y in free.submasks() {
            members.push(x | y);
        }
    }
    Family::new(bp.universe(), members)
}

/// The complement-world family `F`, its direct-world counterpart, and the
/// partition they were built from.
#[derive(Clone, Debug)]
pub struct Construction {
    pub params: ConstructionParams,
    pub partition: BlockPartition,
    /// Complement world: no `k` members have union `[n]`.
    pub family: Family,
    /// Direct world: the maximal k-wise intersecting family.
    pub complement: Family,
}

pub fn build_family(p: ConstructionParams) -> Construction {
    let bp = make_partition(p);
    let mut members = Vec::new();
    for i in 1..=bp.len() {
        members.extend(build_f1(&bp, i).expect("index in range").iter());
        members.extend(build_f2(&bp, i).expect("index in range").iter());
    }
    let family = Family::new(p.universe(), members).expect("members lie in the universe");
    let complement = family.complement();
    Construction { params: p, partition: bp, family, complement }
}

/// Closed-form size of the construction, defined when `(k - 1) | n` and
/// `n >= 2(k - 1)`.
pub fn expected_size(k: u32, n: u32) -> Option<u64> {
    if k < 3 || n < 2 * (k - 1) || !n.is_multiple_of(k - 1) {
        return None;
    }
    let exp = n / (k - 1) + k - 3;
    if exp >= 64 {
        return None;
    }
    let k = k as u64;
    Some((1u64 << exp) * (k - 1) - ((1u64 << (k - 1)) - 1) * (k - 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(k: u32, n: u32) -> ConstructionParams {
        ConstructionParams::new(k, n).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(ConstructionParams::new(2, 10).is_err());
        assert!(ConstructionParams::new(4, 5).is_err());
        assert!(ConstructionParams::new(4, 6).is_ok());
    }

    #[test]
    fn partition_examples() {
        let bp = make_partition(params(3, 6));
        let u = bp.universe();
        assert_eq!(bp.blocks(), &[u.set([1, 2, 3]).unwrap(), u.set([4, 5, 6]).unwrap()]);
        assert_eq!(bp.specials(), &[1, 4]);
        assert_eq!(make_partition(params(4, 7)).block_sizes(), vec![3, 2, 2]);
        assert_eq!(bp.pred(1), 2);
        assert_eq!(bp.pred(2), 1);
    }

    #[test]
    fn partition_rejects_bad_blocks() {
        let u = Universe::new(4).unwrap();
        let b = |s: &[u32]| u.set(s.iter().copied()).unwrap();
        assert!(BlockPartition::new(u, vec![b(&[1, 2]), b(&[2, 3, 4])], vec![1, 3]).is_err());
        assert!(BlockPartition::new(u, vec![b(&[1, 2]), b(&[3])], vec![1, 3]).is_err());
        assert!(BlockPartition::new(u, vec![b(&[1, 2]), b(&[3, 4])], vec![1, 2]).is_err());
        assert!(BlockPartition::new(u, vec![b(&[1, 2]), b(&[3, 4])], vec![2, 4]).is_ok());
    }

    #[test]
    fn partition_is_balanced() {
        for k in 3..=8 {
            for n in 2 * (k - 1)..=30 {
                let sizes = make_partition(params(k, n)).block_sizes();
                let (lo, hi) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
                assert!(hi - lo <= 1);
                assert!(sizes.windows(2).all(|w| w[0] >= w[1]));
            }
        }
    }

    #[test]
    fn f1_examples() {
        let bp = make_partition(params(4, 6));
        let f = build_f1(&bp, 1).unwrap();
        assert_eq!(f.len(), 3);
        let bp = make_partition(params(3, 6));
        let f = build_f1(&bp, 1).unwrap();
        assert_eq!(f.len(), 7);
        assert!(!f.contains(bp.block(1).unwrap()));
        assert!(build_f1(&bp, 0).is_err());
        assert!(build_f1(&bp, 3).is_err());
    }

    #[test]
    fn f1_matches_definition_predicate() {
        let bp = make_partition(params(5, 12));
        for i in 1..=4 {
            let f = build_f1(&bp, i).unwrap();
            let a = bp.block(i).unwrap();
            for m in bp.universe().masks() {
                assert_eq!(f.contains(m), m.is_proper_subset(a));
            }
        }
    }

    #[test]
    fn f2_examples() {
        let bp = make_partition(params(4, 6));
        let f = build_f2(&bp, 1).unwrap();
        assert_eq!(f.len(), 4);
        assert!(build_f2(&bp, 4).is_err());
        for n in 4..=10 {
            let bp = make_partition(params(3, n));
            for i in 1..=2 {
                let f2 = build_f2(&bp, i).unwrap();
                assert!(f2.is_subfamily(&build_f1(&bp, i).unwrap()));
            }
        }
    }

    #[test]
    fn f2_matches_definition_predicate() {
        let bp = make_partition(params(4, 9));
        let specials = bp.specials_mask();
        for i in 1..=3 {
            let f = build_f2(&bp, i).unwrap();
            let a = bp.block(i).unwrap();
            let ai = bp.special(i).unwrap();
            let ap = bp.special(bp.pred(i)).unwrap();
            let allowed_y = specials.without(ai).without(ap);
            let mut count = 0;
            for m in bp.universe().masks() {
                let x = m & a;
                let y = m.difference(a);
                let expected = y.is_subset(allowed_y) && x != a && x != a.without(ai);
                assert_eq!(f.contains(m), expected, "i={i} m={m}");
                count += expected as usize;
            }
            assert_eq!(f.len(), count);
            assert_eq!(count, ((1 << a.len()) - 2) * (1 << (4 - 3)));
        }
    }

    #[test]
    fn family_examples() {
        let c = build_family(params(3, 6));
        assert_eq!(c.family.len(), 13);
        let bp = &c.partition;
        let u = bp.universe();
        let mut expected = Family::cube(u, bp.block(1).unwrap())
            .unwrap()
            .union(&Family::cube(u, bp.block(2).unwrap()).unwrap())
            .unwrap()
            .members()
            .to_vec();
        expected.retain(|&m| m != bp.block(1).unwrap() && m != bp.block(2).unwrap());
        assert_eq!(c.family.members(), &expected[..]);
        assert_eq!(build_family(params(4, 6)).family.len(), 10);
        assert_eq!(build_family(params(5, 8)).family.len(), 19);
    }

    #[test]
    fn family_shape() {
        for (k, n) in [(3, 7), (4, 9), (4, 10), (5, 12), (6, 13)] {
            let c = build_family(params(k, n));
            let full = c.family.universe().full();
            assert!(c.family.is_downset());
            assert!(!c.family.contains(full));
            assert!(c.complement.is_upset());
            assert!(!c.complement.contains(SetMask::EMPTY));
            assert_eq!(c.complement.complement(), c.family);
        }
    }

    #[test]
    fn expected_size_examples() {
        assert_eq!(expected_size(3, 8), Some(29));
        assert_eq!(expected_size(4, 9), Some(34));
        assert_eq!(expected_size(4, 7), None);
        assert_eq!(expected_size(3, 6), Some(13));
        assert_eq!(expected_size(3, 4), Some(5));
        assert_eq!(expected_size(4, 3), None);
        assert_eq!(expected_size(2, 8), None);
    }

    #[test]
    fn size_matches_formula_for_divisible_n() {
        for k in 3..=6u32 {
            for n in (2 * (k - 1)..=24).filter(|n| n % (k - 1) == 0) {
                let c = build_family(params(k, n));
                assert_eq!(Some(c.family.len() as u64), expected_size(k, n), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn three_part_count_decomposition() {
        for k in 3..=6u32 {
            for n in (2 * (k - 1)..=24).filter(|n| n % (k - 1) == 0) {
                let c = build_family(params(k, n));
                let bp = &c.partition;
                let specials = bp.specials_mask();
                let near_blocks: Vec<SetMask> = (1..=bp.len())
                    .map(|i| bp.block(i).unwrap().without(bp.special(i).unwrap()))
                    .collect();
                let (mut only_specials, mut f2_rest, mut near) = (0u64, 0u64, 0u64);
                for m in c.family.iter() {
                    if m.is_subset(specials) {
                        only_specials += 1;
                    } else if near_blocks.contains(&m) {
                        near += 1;
                    } else {
                        assert!((1..=bp.len()).any(|i| build_f2(bp, i).unwrap().contains(m)));
                        f2_rest += 1;
                    }
                }
                let s = n / (k - 1);
                assert_eq!(only_specials, (1 << (k - 1)) - 1);
                assert_eq!(f2_rest, (k as u64 - 1) * ((1 << s) - 4) * (1 << (k - 3)));
                assert_eq!(near, k as u64 - 1);
            }
        }
    }

    #[test]
    fn size_within_growth_bound() {
        // |F| <= C_k * 2^(n/(k-1)), compared after raising both sides to k-1.
        for k in 3..=6u32 {
            let c_k = (k as u128 - 1) * (1 << (k - 3)) + 1;
            for n in 2 * (k - 1)..=24 {
                let size = build_family(params(k, n)).family.len() as u128;
                assert!(size.pow(k - 1) <= c_k.pow(k - 1) << n, "k={k} n={n}");
            }
        }
    }
}
