use crate::construction::BlockPartition;
use crate::error::{Error, Result};
use crate::setcore::{Family, SetMask};

/// Largest universe for which the partition minimization is attempted.
pub const MAX_MINIMIZE_N: u32 = 8;

/// How far a family sits from the union of block cubes `Q = P(X_1) ∪ ... ∪ P(X_m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeReport {
    pub partition: BlockPartition,
    /// `|Q|`.
    pub q_size: u64,
    /// `|F \ Q|`: members not inside any single block.
    pub distance: usize,
    /// `|F ∩ Q|`.
    pub inside: usize,
}

pub fn cube_distance(f: &Family, bp: &BlockPartition) -> Result<CubeReport> {
    if f.universe() != bp.universe() {
        return Err(Error::Partition(format!(
            "partition is over n={}, family over n={}",
            bp.universe().n(),
            f.universe().n()
        )));
    }
    let inside = f
        .iter()
        .filter(|m| bp.blocks().iter().any(|b| m.is_subset(*b)))
        .count();
    // the empty set lies in every cube
    let q_size = bp.blocks().iter().map(|b| (1u64 << b.len()) - 1).sum::<u64>() + 1;
    Ok(CubeReport {
        partition: bp.clone(),
        q_size,
        distance: f.len() - inside,
        inside,
    })
}

/// Minimum cube distance over all partitions of the universe into `parts`
/// nonempty blocks. Ties go to the first partition in restricted-growth order.
pub fn minimize_cube_distance(f: &Family, parts: usize) -> Result<CubeReport> {
    let u = f.universe();
    if u.n() > MAX_MINIMIZE_N {
        return Err(Error::UniverseSize { n: u.n(), max: MAX_MINIMIZE_N });
    }
    if parts == 0 || parts > u.n() as usize {
        return Err(Error::Partition(format!("cannot split {} elements into {parts} blocks", u.n())));
    }
    let mut best: Option<CubeReport> = None;
    let mut labels = vec![0usize; u.n() as usize];
    let mut visit = |labels: &[usize]| -> Result<()> {
        let mut blocks = vec![SetMask::EMPTY; parts];
        for (i, &l) in labels.iter().enumerate() {
            blocks[l] = blocks[l].with(i as u32 + 1);
        }
        let bp = BlockPartition::with_min_specials(u, blocks)?;
        let report = cube_distance(f, &bp)?;
        if best.as_ref().is_none_or(|b| report.distance < b.distance) {
            best = Some(report);
        }
        Ok(())
    };
    restricted_growth(&mut labels, 1, 1, parts, &mut visit)?;
    Ok(best.expect("at least one partition exists"))
}

/// Enumerates labelings where element `i` gets a label at most one above the
/// largest label so far; each set partition appears once.
fn restricted_growth(
    labels: &mut [usize],
    pos: usize,
    used: usize,
    parts: usize,
    visit: &mut impl FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if pos == labels.len() {
        return if used == parts { visit(labels) } else { Ok(()) };
    }
    // not enough positions left to open the remaining blocks
    if used + (labels.len() - pos) < parts {
        return Ok(());
    }
    for l in 0..(used + 1).min(parts) {
        labels[pos] = l;
        restricted_growth(labels, pos + 1, used.max(l + 1), parts, visit)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build_family, make_partition, ConstructionParams};
    use crate::setcore::Universe;

    #[test]
    fn own_cube_has_distance_zero() {
        let bp = make_partition(ConstructionParams::new(4, 9).unwrap());
        let cube = Family::cube(bp.universe(), bp.block(1).unwrap()).unwrap();
        let r = cube_distance(&cube, &bp).unwrap();
        assert_eq!(r.distance, 0);
        assert_eq!(r.inside, 8);
        assert_eq!(r.q_size, 3 * 7 + 1);
    }

    #[test]
    fn k3_construction_lies_in_the_cubes() {
        for n in 4..=20 {
            let c = build_family(ConstructionParams::new(3, n).unwrap());
            assert_eq!(cube_distance(&c.family, &c.partition).unwrap().distance, 0);
        }
    }

    #[test]
    fn construction_distance_by_classification() {
        for k in 4..=5u32 {
            for n in (2 * (k - 1)..=20).filter(|n| n % (k - 1) == 0) {
                let c = build_family(ConstructionParams::new(k, n).unwrap());
                let r = cube_distance(&c.family, &c.partition).unwrap();
                assert_eq!(r.distance + r.inside, c.family.len());
                // direct count: members meeting at least two blocks
                let direct = c
                    .family
                    .iter()
                    .filter(|m| c.partition.blocks().iter().filter(|b| !m.intersection(**b).is_empty()).count() >= 2)
                    .count();
                assert_eq!(r.distance, direct);
                let s = n / (k - 1);
                let (k, s) = (k as usize, s as usize);
                let spread = (k - 1) * ((1 << s) - 4) * ((1 << (k - 3)) - 1);
                let specials_spanning = (1 << (k - 1)) - k - 1;
                assert_eq!(r.distance, spread + specials_spanning, "k={k} n={n}");
            }
        }
    }

    #[test]
    fn minimization_finds_block_structure() {
        let u = Universe::new(6).unwrap();
        let c = build_family(ConstructionParams::new(3, 6).unwrap());
        let r = minimize_cube_distance(&c.family, 2).unwrap();
        assert_eq!(r.distance, 0);
        assert_eq!(r.partition.blocks(), c.partition.blocks());
        assert!(minimize_cube_distance(&Family::empty(u), 7).is_err());
        assert!(minimize_cube_distance(&Family::empty(Universe::new(9).unwrap()), 2).is_err());
    }

    #[test]
    fn partition_count_is_stirling() {
        let mut count = 0;
        let mut labels = vec![0; 6];
        restricted_growth(&mut labels, 1, 1, 3, &mut |_| {
            count += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(count, 90);
    }

    #[test]
    fn universe_mismatch() {
        let bp = make_partition(ConstructionParams::new(3, 6).unwrap());
        assert!(cube_distance(&Family::empty(Universe::new(5).unwrap()), &bp).is_err());
    }
}
