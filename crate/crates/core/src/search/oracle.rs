use super::downsets::enumerate_downsets;
use crate::error::{Error, Result};
use crate::setcore::{Family, Universe};
use crate::verifier::{Verifier, World};

/// Exact saturation number at a tiny universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub k: u32,
    pub n: u32,
    /// Minimum size of a maximal k-wise intersecting family over `[n]`.
    pub f_k_n: usize,
    /// Number of maximal families attaining the minimum.
    pub extremal_count: usize,
    /// Number of maximal families of any size.
    pub maximal_count: usize,
    /// First achiever in enumeration order, direct world.
    pub sample_extremal: Family,
}

/// Every maximal k-wise intersecting family over `[n]`, in direct world.
///
/// Only complement-world down-sets are examined: a family whose complement
/// world misses a subset of a member can take that subset without creating a
/// new cover, so it is never maximal.
pub fn maximal_families(k: u32, universe: Universe) -> Result<Vec<Family>> {
    if k < 2 {
        return Err(Error::Arity(k));
    }
    let verifier = Verifier::default();
    let mut out = Vec::new();
    for g in enumerate_downsets(universe)? {
        if verifier.is_maximal_kwise(&g, k, World::Complement)?.ok {
            out.push(g.complement());
        }
    }
    Ok(out)
}

pub fn oracle_min_size(k: u32, universe: Universe) -> Result<OracleResult> {
    let all = maximal_families(k, universe)?;
    let f_k_n = all.iter().map(Family::len).min().expect("the star is always maximal");
    let extremal_count = all.iter().filter(|f| f.len() == f_k_n).count();
    let sample_extremal = all
        .iter()
        .find(|f| f.len() == f_k_n)
        .cloned()
        .expect("minimum is attained");
    Ok(OracleResult {
        k,
        n: universe.n(),
        f_k_n,
        extremal_count,
        maximal_count: all.len(),
        sample_extremal,
    })
}
