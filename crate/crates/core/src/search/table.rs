use std::fmt::Write;
use std::ops::RangeInclusive;

use super::downsets::MAX_DOWNSET_N;
use super::greedy::{greedy_saturate, GreedyOrder};
use super::oracle::oracle_min_size;
use crate::construction::{build_family, expected_size, ConstructionParams};
use crate::error::Result;
use crate::setcore::{Family, Universe};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableOptions {
    /// Greedy runs per cell; seeds are `seed, seed + 1, ...`.
    pub runs: u32,
    pub seed: u64,
    /// Cells with larger `n` leave the greedy column blank.
    pub greedy_max_n: u32,
    /// Cells with larger `n` leave the oracle column blank.
    pub oracle_max_n: u32,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions { runs: 5, seed: 0, greedy_max_n: 12, oracle_max_n: MAX_DOWNSET_N }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SizeRow {
    pub k: u32,
    pub n: u32,
    pub construction: Option<u64>,
    pub expected: Option<u64>,
    pub oracle: Option<u64>,
    pub greedy_min: Option<u64>,
}

pub fn size_table(
    ks: RangeInclusive<u32>,
    ns: RangeInclusive<u32>,
    opts: &TableOptions,
) -> Result<Vec<SizeRow>> {
    let mut rows = Vec::new();
    for k in ks.filter(|&k| k >= 2) {
        for n in ns.clone() {
            let Ok(universe) = Universe::new(n) else { continue };
            let construction = ConstructionParams::new(k, n)
                .ok()
                .map(|p| build_family(p).family.len() as u64);
            let oracle = if n <= opts.oracle_max_n.min(MAX_DOWNSET_N) {
                Some(oracle_min_size(k, universe)?.f_k_n as u64)
            } else {
                None
            };
            let greedy_min = if n <= opts.greedy_max_n && opts.runs > 0 {
                let empty = Family::empty(universe);
                let mut best = u64::MAX;
                for r in 0..opts.runs {
                    let seed = opts.seed.wrapping_add(r as u64);
                    let g = greedy_saturate(&empty, k, GreedyOrder::Seeded(seed))?;
                    best = best.min(g.len() as u64);
                }
                Some(best)
            } else {
                None
            };
            rows.push(SizeRow { k, n, construction, expected: expected_size(k, n), oracle, greedy_min });
        }
    }
    Ok(rows)
}

pub const TSV_HEADER: &str = "k\tn\tconstruction\texpected\toracle\tgreedy_min";

/// One header line plus one line per row; missing cells are empty.
pub fn format_tsv(rows: &[SizeRow]) -> String {
    let cell = |v: Option<u64>| v.map(|v| v.to_string()).unwrap_or_default();
    let mut out = String::new();
    out.push_str(TSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            r.k,
            r.n,
            cell(r.construction),
            cell(r.expected),
            cell(r.oracle),
            cell(r.greedy_min)
        );
    }
    out
}
