use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::setcore::{CoverSearch, Family, SetMask, Universe};
use crate::verifier::check_kwise;

pub const MAX_GREEDY_N: u32 = 20;

/// Order in which candidate masks are offered.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GreedyOrder {
    /// Seeded Fisher–Yates shuffle of all masks.
    Seeded(u64),
    /// Larger masks first, ties by ascending mask value.
    Popcount,
}

pub fn candidate_order(universe: Universe, order: GreedyOrder) -> Vec<SetMask> {
    let mut masks: Vec<SetMask> = universe.masks().collect();
    match order {
        GreedyOrder::Seeded(seed) => masks.shuffle(&mut ChaCha8Rng::seed_from_u64(seed)),
        GreedyOrder::Popcount => masks.sort_by_key(|m| (std::cmp::Reverse(m.len()), *m)),
    }
    masks
}

/// Grows a complement-world family by adding every offered mask that keeps
/// it k-wise intersecting, until a full pass adds nothing.
///
/// A mask `m` can join iff no at most `k - 1` members cover `[n] \ m`.
pub fn greedy_saturate(g0: &Family, k: u32, order: GreedyOrder) -> Result<Family> {
    let u = g0.universe();
    if u.n() > MAX_GREEDY_N {
        return Err(Error::UniverseSize { n: u.n(), max: MAX_GREEDY_N });
    }
    if !check_kwise(g0, k)?.ok {
        return Err(Error::NotKwise { k });
    }
    let full = u.full();
    let mut member = vec![false; u.subset_count() as usize];
    for m in g0.iter() {
        member[m.0 as usize] = true;
    }
    let mut search = CoverSearch::new(g0);
    let candidates = candidate_order(u, order);
    loop {
        let mut added = false;
        for &m in &candidates {
            if member[m.0 as usize] {
                continue;
            }
            if !search.can_cover(full.difference(m), k - 1) {
                member[m.0 as usize] = true;
                search.insert(m);
                added = true;
            }
        }
        if !added {
            break;
        }
    }
    Ok(Family::from_indicator(u, &member))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build_family, ConstructionParams};
    use crate::verifier::{is_maximal_kwise, World};

    fn u(n: u32) -> Universe {
        Universe::new(n).unwrap()
    }

    #[test]
    fn pairwise_from_empty_reaches_half() {
        for seed in 0..10 {
            let g = greedy_saturate(&Family::empty(u(6)), 2, GreedyOrder::Seeded(seed)).unwrap();
            assert_eq!(g.len(), 32);
            assert!(is_maximal_kwise(&g, 2, World::Complement).unwrap().ok);
        }
    }

    #[test]
    fn construction_is_a_fixed_point() {
        let c = build_family(ConstructionParams::new(4, 9).unwrap());
        for seed in [0, 1, 99] {
            let g = greedy_saturate(&c.family, 4, GreedyOrder::Seeded(seed)).unwrap();
            assert_eq!(g, c.family);
        }
        assert_eq!(greedy_saturate(&c.family, 4, GreedyOrder::Popcount).unwrap(), c.family);
    }

    #[test]
    fn seeded_runs_are_reproducible_and_maximal() {
        let empty = Family::empty(u(8));
        for seed in 0..50 {
            let a = greedy_saturate(&empty, 3, GreedyOrder::Seeded(seed)).unwrap();
            let b = greedy_saturate(&empty, 3, GreedyOrder::Seeded(seed)).unwrap();
            assert_eq!(a, b);
            let v = is_maximal_kwise(&a, 3, World::Complement).unwrap();
            assert!(v.ok, "seed {seed}");
            assert_eq!(v.downset, Some(true));
        }
        let p = greedy_saturate(&empty, 3, GreedyOrder::Popcount).unwrap();
        assert!(is_maximal_kwise(&p, 3, World::Complement).unwrap().ok);
    }

    #[test]
    fn rejects_non_kwise_start() {
        let uni = u(4);
        let g0 = Family::new(uni, [uni.full()]).unwrap();
        assert!(matches!(
            greedy_saturate(&g0, 3, GreedyOrder::Popcount),
            Err(Error::NotKwise { k: 3 })
        ));
        assert!(greedy_saturate(&Family::empty(u(21)), 3, GreedyOrder::Popcount).is_err());
    }
}
