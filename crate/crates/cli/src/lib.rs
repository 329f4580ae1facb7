//! `kwise` command line: construct, verify, oracle, greedy, distance, table.
//!
//! Exit codes: 0 success (or maximal), 1 usage or runtime error, 2 family is
//! not k-wise intersecting, 3 family is k-wise intersecting but not maximal.

use std::fs;
use std::io::{self, Read, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kwise_core::construction::{build_family, expected_size, make_partition, ConstructionParams};
use kwise_core::search::greedy::MAX_GREEDY_N;
use kwise_core::search::table::format_tsv;
use kwise_core::search::{
    cube_distance, greedy_saturate, minimize_cube_distance, oracle_min_size, size_table,
    GreedyOrder, TableOptions,
};
use kwise_core::setcore::{format_family, parse_family, Family, SetMask, Universe};
use kwise_core::verifier::{threads_from_env, Backend, Failure, Verdict, Verifier, Witness, World};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_KWISE: i32 = 2;
pub const EXIT_NOT_SATURATED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "kwise", version, about = "Maximal k-wise intersecting families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Eq)]
pub enum Command {
    /// Build the block construction and print it as a family file.
    Construct(ConstructArgs),
    /// Decide whether a family is maximal k-wise intersecting.
    Verify(VerifyArgs),
    /// Exact minimum size of a maximal family (n <= 5).
    Oracle(OracleArgs),
    /// Randomized greedy saturation from the empty family.
    Greedy(GreedyArgs),
    /// Distance of a family from the union of its block cubes.
    Distance(DistanceArgs),
    /// Size table over ranges of k and n.
    Table(TableArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum WorldArg {
    Direct,
    Complement,
}

impl From<WorldArg> for World {
    fn from(w: WorldArg) -> World {
        match w {
            WorldArg::Direct => World::Direct,
            WorldArg::Complement => World::Complement,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Dp,
    Tuples,
    Both,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Backend {
        match b {
            BackendArg::Dp => Backend::Dp,
            BackendArg::Tuples => Backend::Tuples,
            BackendArg::Both => Backend::Both,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    Random,
    Popcount,
}

#[derive(Args, Debug, Clone, PartialEq, Eq)]
pub struct ConstructArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub n: u32,
    /// World of the emitted sets.
    #[arg(long, value_enum, default_value = "complement")]
    pub world: WorldArg,
    /// Write to a file instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Omit the `# {...}` JSON header line.
    #[arg(long)]
    pub no_header: bool,
}

#[derive(Args, Debug, Clone, PartialEq, Eq)]
pub struct VerifyArgs {
    /// Family file; stdin when absent or `-`.
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub k: u32,
    /// World the file's sets live in.
    #[arg(long, value_enum, default_value = "complement")]
    pub world: WorldArg,
    #[arg(long, value_enum, default_value = "both")]
    pub backend: BackendArg,
}

#[derive(Args, Debug, Clone, PartialEq, Eq)]
pub struct OracleArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub n: u32,
    #[arg(long, value_enum, default_value = "tsv")]
    pub format: Format,
}

#[derive(Args, Debug, Clone, PartialEq, Eq)]
pub struct GreedyArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub n: u32,
    /// Seed of the first run; run `r` uses `seed + r`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub runs: u32,
    #[arg(long, value_enum, default_value = "random")]
    pub order: OrderArg,
    /// Write each result as a family file (suffixed `.<run>` when runs > 1).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "tsv")]
    pub format: Format,
}

#[derive(Args, Debug, Clone, PartialEq, Eq)]
pub struct DistanceArgs {
    #[arg(long)]
    pub k: u32,
    /// Universe size; taken from the input file when one is given.
    #[arg(long)]
    pub n: Option<u32>,
    /// Family file (complement world); defaults to the construction.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Minimize over all partitions into k-1 blocks (n <= 8).
    #[arg(long)]
    pub minimize: bool,
    #[arg(long, value_enum, default_value = "tsv")]
    pub format: Format,
}

#[derive(Args, Debug, Clone, PartialEq, Eq)]
pub struct TableArgs {
    /// `a..b`, `a..=b` or a single value; bounds inclusive.
    #[arg(long, value_parser = parse_range)]
    pub k: RangeInclusive<u32>,
    #[arg(long, value_parser = parse_range)]
    pub n: RangeInclusive<u32>,
    #[arg(long, default_value_t = 5)]
    pub runs: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest n with a greedy column.
    #[arg(long, default_value_t = 12)]
    pub greedy_max_n: u32,
    #[arg(long, value_enum, default_value = "tsv")]
    pub format: Format,
}

fn parse_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let parse = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("bad integer `{t}`"));
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (parse(lo)?, parse(hi.strip_prefix('=').unwrap_or(hi))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range `{s}`"));
    }
    Ok(lo..=hi)
}

/// Validated command plus environment-derived settings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    /// Saturation worker cap from `KWISE_THREADS`; 0 means all cores.
    pub threads: usize,
}

/// A usage problem, or a help/version request (exit code 0).
#[derive(Debug)]
pub struct UsageError {
    pub message: String,
    pub exit_code: i32,
}

impl UsageError {
    fn new(message: impl Into<String>) -> Self {
        UsageError { message: message.into(), exit_code: EXIT_ERROR }
    }
}

pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, UsageError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| UsageError {
        message: e.render().to_string(),
        exit_code: if e.use_stderr() { EXIT_ERROR } else { EXIT_OK },
    })?;
    validate(&cli.command)?;
    Ok(RunConfig { command: cli.command, threads: threads_from_env() })
}

fn check_n(n: u32, max: u32, what: &str) -> Result<(), UsageError> {
    if n == 0 || n > max {
        return Err(UsageError::new(format!("{what} requires 1 <= n <= {max}, got {n}")));
    }
    Ok(())
}

fn check_input(path: &Option<PathBuf>) -> Result<(), UsageError> {
    match path {
        Some(p) if p.as_os_str() != "-" && !p.is_file() => {
            Err(UsageError::new(format!("input file {} not found", p.display())))
        }
        _ => Ok(()),
    }
}

fn validate(cmd: &Command) -> Result<(), UsageError> {
    match cmd {
        Command::Construct(a) => {
            ConstructionParams::new(a.k, a.n).map_err(|e| UsageError::new(e.to_string()))?;
        }
        Command::Verify(a) => {
            if a.k < 2 {
                return Err(UsageError::new("verify requires k >= 2"));
            }
            check_input(&a.input)?;
        }
        Command::Oracle(a) => {
            if a.k < 2 {
                return Err(UsageError::new("oracle requires k >= 2"));
            }
            check_n(a.n, 5, "oracle")?;
        }
        Command::Greedy(a) => {
            if a.k < 2 {
                return Err(UsageError::new("greedy requires k >= 2"));
            }
            check_n(a.n, MAX_GREEDY_N, "greedy")?;
            if a.runs == 0 {
                return Err(UsageError::new("greedy requires --runs >= 1"));
            }
        }
        Command::Distance(a) => {
            if a.k < 3 {
                return Err(UsageError::new("distance requires k >= 3"));
            }
            check_input(&a.input)?;
            match (&a.input, a.n) {
                (None, None) => return Err(UsageError::new("distance needs --n or --input")),
                (None, Some(n)) => {
                    ConstructionParams::new(a.k, n).map_err(|e| UsageError::new(e.to_string()))?;
                }
                _ => {}
            }
        }
        Command::Table(a) => {
            if *a.k.start() < 2 {
                return Err(UsageError::new("table requires k >= 2"));
            }
            check_n(*a.n.start(), Universe::MAX_N, "table")?;
            check_n(*a.n.end(), 24, "table")?;
        }
    }
    Ok(())
}

fn hex(m: SetMask) -> String {
    format!("{:#x}", m.0)
}

fn sets_json(masks: &[SetMask]) -> Value {
    Value::Array(masks.iter().map(|m| json!(m.elements().collect::<Vec<_>>())).collect())
}

fn read_family(path: &Option<PathBuf>) -> Result<Family> {
    let text = match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?
        }
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).context("reading stdin")?;
            s
        }
    };
    Ok(parse_family(&text)?)
}

fn witness_json(w: &Option<Witness>) -> Value {
    match w {
        None => Value::Null,
        Some(Witness::Cover(masks)) => json!({
            "kind": "cover",
            "masks": masks.iter().map(|&m| hex(m)).collect::<Vec<_>>(),
        }),
        Some(Witness::Gap { set, completion }) => json!({
            "kind": "gap",
            "set": hex(*set),
            "completion": completion.as_ref().map(|c| c.iter().map(|&m| hex(m)).collect::<Vec<_>>()),
        }),
    }
}

pub fn verdict_json(v: &Verdict, k: u32, n: u32, size: usize, world: WorldArg, backend: BackendArg) -> Value {
    let failure = v.failure();
    json!({
        "schema": SCHEMA_VERSION,
        "k": k,
        "n": n,
        "size": size,
        "world": format!("{world:?}").to_lowercase(),
        "backend": format!("{backend:?}").to_lowercase(),
        "maximal": v.ok,
        "kwise": failure != Some(Failure::NotKwise),
        "saturated": match failure {
            None => Some(true),
            Some(Failure::NotSaturated) => Some(false),
            Some(Failure::NotKwise) => None,
        },
        "downset": v.downset,
        "witness": witness_json(&v.witness),
    })
}

/// Runs a validated configuration, writing results to `out`. Returns the exit code.
pub fn run(config: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    match &config.command {
        Command::Construct(a) => construct(a, out),
        Command::Verify(a) => verify(a, config.threads, out),
        Command::Oracle(a) => oracle(a, out),
        Command::Greedy(a) => greedy(a, config.threads, out),
        Command::Distance(a) => distance(a, out),
        Command::Table(a) => table(a, out),
    }
}

fn construct(a: &ConstructArgs, out: &mut dyn Write) -> Result<i32> {
    let c = build_family(ConstructionParams::new(a.k, a.n)?);
    let family = match a.world {
        WorldArg::Complement => &c.family,
        WorldArg::Direct => &c.complement,
    };
    let mut text = String::new();
    if !a.no_header {
        let header = json!({
            "schema": SCHEMA_VERSION,
            "k": a.k,
            "n": a.n,
            "world": format!("{:?}", a.world).to_lowercase(),
            "block_sizes": c.partition.block_sizes(),
            "specials": c.partition.specials(),
            "size": family.len(),
            "expected_size": expected_size(a.k, a.n),
        });
        text.push_str(&format!("# {header}\n"));
    }
    text.push_str(&format_family(family));
    match &a.output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn verify(a: &VerifyArgs, threads: usize, out: &mut dyn Write) -> Result<i32> {
    let family = read_family(&a.input)?;
    let verifier = Verifier::new(a.backend.into()).with_threads(threads);
    let v = verifier.is_maximal_kwise(&family, a.k, a.world.into())?;
    let json = verdict_json(&v, a.k, family.universe().n(), family.len(), a.world, a.backend);
    writeln!(out, "{json}")?;
    Ok(match v.failure() {
        None => EXIT_OK,
        Some(Failure::NotKwise) => EXIT_NOT_KWISE,
        Some(Failure::NotSaturated) => EXIT_NOT_SATURATED,
    })
}

fn oracle(a: &OracleArgs, out: &mut dyn Write) -> Result<i32> {
    let r = oracle_min_size(a.k, Universe::new(a.n)?)?;
    match a.format {
        Format::Json => writeln!(
            out,
            "{}",
            json!({
                "schema": SCHEMA_VERSION,
                "k": r.k,
                "n": r.n,
                "f_k_n": r.f_k_n,
                "extremal_count": r.extremal_count,
                "maximal_count": r.maximal_count,
                "sample_extremal": sets_json(r.sample_extremal.members()),
            })
        )?,
        Format::Tsv => {
            writeln!(out, "k\tn\tf_k_n\textremal_count\tmaximal_count\tsample_extremal")?;
            let sample: Vec<String> = r.sample_extremal.iter().map(|m| m.to_string()).collect();
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                r.k,
                r.n,
                r.f_k_n,
                r.extremal_count,
                r.maximal_count,
                sample.join(" ")
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn greedy(a: &GreedyArgs, threads: usize, out: &mut dyn Write) -> Result<i32> {
    let universe = Universe::new(a.n)?;
    let empty = Family::empty(universe);
    let verifier = Verifier::default().with_threads(threads);
    let mut rows = Vec::new();
    for run in 0..a.runs {
        let seed = a.seed.wrapping_add(run as u64);
        let order = match a.order {
            OrderArg::Random => GreedyOrder::Seeded(seed),
            OrderArg::Popcount => GreedyOrder::Popcount,
        };
        let g = greedy_saturate(&empty, a.k, order)?;
        let maximal = verifier.is_maximal_kwise(&g, a.k, World::Complement)?.ok;
        if !maximal {
            bail!("greedy run {run} (seed {seed}) produced a non-maximal family");
        }
        if let Some(path) = &a.output {
            let path = if a.runs == 1 {
                path.clone()
            } else {
                PathBuf::from(format!("{}.{run}", path.display()))
            };
            fs::write(&path, format_family(&g)).with_context(|| format!("writing {}", path.display()))?;
        }
        rows.push((run, seed, g.len(), maximal));
    }
    match a.format {
        Format::Tsv => {
            writeln!(out, "k\tn\trun\tseed\tsize\tmaximal")?;
            for (run, seed, size, maximal) in &rows {
                writeln!(out, "{}\t{}\t{run}\t{seed}\t{size}\t{maximal}", a.k, a.n)?;
            }
        }
        Format::Json => {
            let runs: Vec<Value> = rows
                .iter()
                .map(|(run, seed, size, maximal)| json!({"run": run, "seed": seed, "size": size, "maximal": maximal}))
                .collect();
            writeln!(out, "{}", json!({"schema": SCHEMA_VERSION, "k": a.k, "n": a.n, "runs": runs}))?;
        }
    }
    Ok(EXIT_OK)
}

fn distance(a: &DistanceArgs, out: &mut dyn Write) -> Result<i32> {
    let family = match &a.input {
        Some(_) => read_family(&a.input)?,
        None => build_family(ConstructionParams::new(a.k, a.n.expect("validated"))?).family,
    };
    let n = family.universe().n();
    if let Some(flag_n) = a.n {
        if flag_n != n {
            bail!("--n {flag_n} does not match the input universe n={n}");
        }
    }
    let report = if a.minimize {
        minimize_cube_distance(&family, (a.k - 1) as usize)?
    } else {
        cube_distance(&family, &make_partition(ConstructionParams::new(a.k, n)?))?
    };
    let blocks: Vec<String> = report.partition.blocks().iter().map(|b| b.to_string()).collect();
    match a.format {
        Format::Tsv => {
            writeln!(out, "k\tn\tsize\tq_size\tdistance\tinside\tblocks")?;
            writeln!(
                out,
                "{}\t{n}\t{}\t{}\t{}\t{}\t{}",
                a.k,
                family.len(),
                report.q_size,
                report.distance,
                report.inside,
                blocks.join("|")
            )?;
        }
        Format::Json => writeln!(
            out,
            "{}",
            json!({
                "schema": SCHEMA_VERSION,
                "k": a.k,
                "n": n,
                "size": family.len(),
                "q_size": report.q_size,
                "distance": report.distance,
                "inside": report.inside,
                "blocks": sets_json(report.partition.blocks()),
            })
        )?,
    }
    Ok(EXIT_OK)
}

fn table(a: &TableArgs, out: &mut dyn Write) -> Result<i32> {
    let opts = TableOptions {
        runs: a.runs,
        seed: a.seed,
        greedy_max_n: a.greedy_max_n.min(MAX_GREEDY_N),
        ..TableOptions::default()
    };
    let rows = size_table(a.k.clone(), a.n.clone(), &opts)?;
    match a.format {
        Format::Tsv => out.write_all(format_tsv(&rows).as_bytes())?,
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "k": r.k,
                        "n": r.n,
                        "construction": r.construction,
                        "expected": r.expected,
                        "oracle": r.oracle,
                        "greedy_min": r.greedy_min,
                    })
                })
                .collect();
            writeln!(out, "{}", json!({"schema": SCHEMA_VERSION, "rows": rows}))?;
        }
    }
    Ok(EXIT_OK)
}
