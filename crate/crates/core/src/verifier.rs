//! Witness-producing checks of the k-wise intersecting and maximality properties.
//!
//! Every check runs in the complement world: a direct-world family is k-wise
//! intersecting iff no at most `k` complemented members have union `[n]`, and
//! it is maximal iff additionally every non-member `X` of the complement world
//! is completed to `[n]` by at most `k - 1` members.

use std::sync::atomic::{AtomicU64, Ordering};
use std::thread;

use crate::error::{Error, Result};
use crate::setcore::cover::{CoverBound, CoverSearch, CoverTable, MAX_COVER_LIMIT, MAX_COVER_N};
use crate::setcore::{Family, SetMask};

/// Largest universe for which saturation is decided (it scans all `2^n` masks).
pub const MAX_SATURATION_N: u32 = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum World {
    /// Members are the sets of the k-wise intersecting family itself.
    Direct,
    /// Members are complements of the k-wise intersecting family's sets.
    Complement,
}

/// Which cover engine answers queries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Backend {
    /// Zeta/Möbius cover table.
    Dp,
    /// Branch-and-bound search over maximal members.
    Tuples,
    /// Run both and fail loudly on any disagreement.
    Both,
    /// Pick by estimated cost.
    #[default]
    Auto,
}

/// Evidence attached to a verdict. Masks are complement-world.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// At most `k` members whose union is `[n]`: the family is not k-wise intersecting.
    Cover(Vec<SetMask>),
    /// A non-member `set`. With a completion, at most `k - 1` members that
    /// cover `[n]` together with `set`, so it cannot be added. Without one, no
    /// completion exists and `set` can be added: the family is not maximal.
    Gap { set: SetMask, completion: Option<Vec<SetMask>> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Failure {
    NotKwise,
    NotSaturated,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub ok: bool,
    pub witness: Option<Witness>,
    /// Whether the complement-world family is a down-set. Informational; only
    /// filled in by maximality checks.
    pub downset: Option<bool>,
}

impl Verdict {
    fn pass() -> Self {
        Verdict { ok: true, witness: None, downset: None }
    }

    fn fail(witness: Witness) -> Self {
        Verdict { ok: false, witness: Some(witness), downset: None }
    }

    pub fn failure(&self) -> Option<Failure> {
        if self.ok {
            return None;
        }
        match self.witness {
            Some(Witness::Cover(_)) => Some(Failure::NotKwise),
            Some(Witness::Gap { .. }) => Some(Failure::NotSaturated),
            None => None,
        }
    }
}

fn union_of(masks: &[SetMask]) -> SetMask {
    masks.iter().fold(SetMask::EMPTY, |acc, &m| acc | m)
}

/// The engines selected for one family, built once and shared by all queries.
struct Engines {
    table: Option<(CoverTable, CoverBound)>,
    search: Option<CoverSearch>,
}

impl Engines {
    /// Whether at most `j` members have union containing `target`.
    fn covers(&self, target: SetMask, j: u32) -> Result<bool> {
        match (&self.table, &self.search) {
            (Some((_, bound)), Some(search)) => {
                let a = bound.can_cover(target, j);
                let b = search.can_cover(target, j);
                if a != b {
                    return Err(Error::BackendMismatch(format!(
                        "cover of {target:#x} with {j} members: table says {a}, search says {b}",
                        target = target.0
                    )));
                }
                Ok(a)
            }
            (Some((_, bound)), None) => Ok(bound.can_cover(target, j)),
            (None, Some(search)) => Ok(search.can_cover(target, j)),
            (None, None) => unreachable!("no cover engine selected"),
        }
    }

    /// At most `j` members with union exactly `[n]`, if any.
    fn full_cover(&self, g: &Family, j: u32) -> Result<Option<Vec<SetMask>>> {
        let full = g.universe().full();
        let from_table = self.table.as_ref().map(|(table, _)| {
            table
                .min_cover(full)
                .filter(|&c| c <= j)
                .and_then(|_| table.decompose(g, full))
        });
        let from_search = self.search.as_ref().map(|s| s.find(full, j));
        match (from_table, from_search) {
            (Some(a), Some(b)) => {
                if a.is_some() != b.is_some() {
                    return Err(Error::BackendMismatch(format!(
                        "union [n] with {j} members: table says {}, search says {}",
                        a.is_some(),
                        b.is_some()
                    )));
                }
                Ok(b)
            }
            (Some(a), None) => Ok(a),
            (None, Some(b)) => Ok(b),
            (None, None) => unreachable!("no cover engine selected"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verifier {
    backend: Backend,
    threads: usize,
}

impl Default for Verifier {
    fn default() -> Self {
        Verifier::new(Backend::Auto)
    }
}

impl Verifier {
    pub fn new(backend: Backend) -> Self {
        Verifier { backend, threads: 1 }
    }

    /// Worker threads for the saturation scan; `0` uses all available cores.
    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    fn worker_count(&self) -> usize {
        match self.threads {
            0 => thread::available_parallelism().map_or(1, |n| n.get()),
            t => t,
        }
    }

    /// Builds engines able to answer queries up to depth `limit`, for `queries`
    /// expected cover queries.
    fn engines(&self, g: &Family, limit: u32, queries: u64) -> Result<Engines> {
        let u = g.universe();
        // An empty family has no tables; the search answers trivially.
        if g.is_empty() {
            return Ok(Engines { table: None, search: Some(CoverSearch::new(g)) });
        }
        let dp_possible = u.n() <= MAX_COVER_N && limit <= MAX_COVER_LIMIT;
        let (want_table, want_search) = match self.backend {
            Backend::Dp => (true, false),
            Backend::Tuples => (false, true),
            Backend::Both => (true, true),
            Backend::Auto => {
                let search = CoverSearch::new(g);
                let use_dp = dp_possible && dp_cheaper(g, &search, limit, queries);
                if use_dp {
                    (true, false)
                } else {
                    return Ok(Engines { table: None, search: Some(search) });
                }
            }
        };
        let table = if want_table {
            if u.n() > MAX_COVER_N {
                return Err(Error::UniverseSize { n: u.n(), max: MAX_COVER_N });
            }
            if limit > MAX_COVER_LIMIT {
                return Err(Error::CoverLimit(limit));
            }
            let table = CoverTable::build(g, limit)?;
            let bound = table.bound();
            Some((table, bound))
        } else {
            None
        };
        let search = want_search.then(|| CoverSearch::new(g));
        Ok(Engines { table, search })
    }

    /// Whether no at most `k` members of the complement-world family `g` have union `[n]`.
    pub fn check_kwise(&self, g: &Family, k: u32) -> Result<Verdict> {
        if k < 2 {
            return Err(Error::Arity(k));
        }
        let engines = self.engines(g, k, 1)?;
        self.kwise_with(g, k, &engines)
    }

    fn kwise_with(&self, g: &Family, k: u32, engines: &Engines) -> Result<Verdict> {
        Ok(match engines.full_cover(g, k)? {
            Some(cover) => Verdict::fail(Witness::Cover(cover)),
            None => Verdict::pass(),
        })
    }

    /// Whether every non-member of the complement-world family `g` is
    /// completed to `[n]` by at most `k - 1` members. The witness of a failure
    /// is the smallest addable mask.
    pub fn check_saturated(&self, g: &Family, k: u32) -> Result<Verdict> {
        if k < 2 {
            return Err(Error::Arity(k));
        }
        g.universe().require_table(MAX_SATURATION_N)?;
        let engines = self.engines(g, k - 1, g.universe().subset_count())?;
        self.saturated_with(g, k, &engines)
    }

    fn saturated_with(&self, g: &Family, k: u32, engines: &Engines) -> Result<Verdict> {
        Ok(match self.first_gap(g, k - 1, engines)? {
            Some(set) => Verdict::fail(Witness::Gap { set, completion: None }),
            None => Verdict::pass(),
        })
    }

    fn first_gap(&self, g: &Family, j: u32, engines: &Engines) -> Result<Option<SetMask>> {
        let full = g.universe().full();
        let total = g.universe().subset_count();
        let best = AtomicU64::new(u64::MAX);
        let scan = |lo: u64, hi: u64| -> Result<Option<SetMask>> {
            for x in lo..hi {
                if x & 0xfff == 0 && x > best.load(Ordering::Relaxed) {
                    break;
                }
                let x = SetMask(x);
                if g.contains(x) {
                    continue;
                }
                if !engines.covers(full.difference(x), j)? {
                    best.fetch_min(x.0, Ordering::Relaxed);
                    return Ok(Some(x));
                }
            }
            Ok(None)
        };

        let workers = (self.worker_count() as u64).clamp(1, total.div_ceil(1 << 12).max(1));
        if workers == 1 {
            return scan(0, total);
        }
        let chunk = total.div_ceil(workers);
        let results: Vec<Result<Option<SetMask>>> = thread::scope(|s| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let scan = &scan;
                    let lo = w * chunk;
                    let hi = ((w + 1) * chunk).min(total);
                    s.spawn(move || scan(lo, hi))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("saturation worker panicked"))
                .collect()
        });
        let mut first = None;
        for r in results {
            if let Some(x) = r? {
                first = Some(first.map_or(x, |f: SetMask| f.min(x)));
            }
        }
        Ok(first)
    }

    /// Whether `f` is maximal k-wise intersecting.
    pub fn is_maximal_kwise(&self, f: &Family, k: u32, world: World) -> Result<Verdict> {
        if k < 2 {
            return Err(Error::Arity(k));
        }
        f.universe().require_table(MAX_SATURATION_N)?;
        let g = match world {
            World::Direct => f.complement(),
            World::Complement => f.clone(),
        };
        let engines = self.engines(&g, k, g.universe().subset_count())?;
        let mut verdict = self.kwise_with(&g, k, &engines)?;
        if verdict.ok {
            verdict = self.saturated_with(&g, k, &engines)?;
        }
        verdict.downset = Some(g.is_downset());
        Ok(verdict)
    }
}

/// Cost model: the table costs about `limit * n * 2^n` to build and O(1) per
/// query; the search costs roughly `branch^limit` per query, where `branch` is
/// the mean number of maximal members containing an element.
fn dp_cheaper(g: &Family, search: &CoverSearch, limit: u32, queries: u64) -> bool {
    let u = g.universe();
    let n = u.n() as f64;
    let incidences: u32 = search.tops().iter().map(|t| t.len()).sum();
    let branch = (incidences as f64 / n).max(1.0);
    let dp = limit as f64 * n * u.subset_count() as f64 + queries as f64;
    let tuples = queries as f64 * branch.powi(limit as i32);
    dp < tuples
}

pub fn check_kwise(g: &Family, k: u32) -> Result<Verdict> {
    Verifier::default().check_kwise(g, k)
}

pub fn check_saturated(g: &Family, k: u32) -> Result<Verdict> {
    Verifier::default().check_saturated(g, k)
}

pub fn is_maximal_kwise(f: &Family, k: u32, world: World) -> Result<Verdict> {
    Verifier::default().is_maximal_kwise(f, k, world)
}

/// At most `k - 1` members of `g` that cover `[n]` together with `x`.
pub fn find_completion(g: &Family, x: SetMask, k: u32) -> Option<Vec<SetMask>> {
    let target = g.universe().full().difference(x);
    CoverSearch::new(g).find(target, k.saturating_sub(1))
}

/// Re-checks a verdict's witness against `g` (complement world) by direct mask
/// arithmetic and, for uncompletable gaps, by plain enumeration of member
/// multisets, independently of the engines that produced it.
pub fn verify_witness(v: &Verdict, g: &Family, k: u32) -> Result<bool> {
    let u = g.universe();
    let full = u.full();
    let witness = v
        .witness
        .as_ref()
        .ok_or_else(|| Error::Witness("verdict carries no witness".into()))?;
    let check_all = |masks: &[SetMask]| -> Result<()> {
        for &m in masks {
            u.check(m).map_err(|e| Error::Witness(e.to_string()))?;
        }
        Ok(())
    };
    match witness {
        Witness::Cover(masks) => {
            check_all(masks)?;
            Ok(!masks.is_empty()
                && masks.len() <= k as usize
                && masks.iter().all(|&m| g.contains(m))
                && union_of(masks) == full)
        }
        Witness::Gap { set, completion } => {
            check_all(std::slice::from_ref(set))?;
            if g.contains(*set) {
                return Ok(false);
            }
            let target = full.difference(*set);
            match completion {
                Some(masks) => {
                    check_all(masks)?;
                    Ok(masks.len() < k as usize
                        && masks.iter().all(|&m| g.contains(m))
                        && (*set | union_of(masks)) == full)
                }
                None => {
                    let tops = g.maximal_elements();
                    Ok(!multiset_covers(tops.members(), 0, SetMask::EMPTY, target, k - 1))
                }
            }
        }
    }
}

/// Plain enumeration of all multisets of at most `depth` items from `items[start..]`.
fn multiset_covers(
    items: &[SetMask],
    start: usize,
    acc: SetMask,
    target: SetMask,
    depth: u32,
) -> bool {
    if target.is_subset(acc) {
        return true;
    }
    if depth == 0 {
        return false;
    }
    (start..items.len()).any(|i| multiset_covers(items, i, acc | items[i], target, depth - 1))
}

/// Reads the `KWISE_THREADS` worker cap; unset, empty or `0` means all cores.
pub fn threads_from_env() -> usize {
    std::env::var("KWISE_THREADS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(0)
}
