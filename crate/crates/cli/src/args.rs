use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gsched_core::{GraphSpec, KargerBudget, MapperKind, MisOrder, SchedulerKind, VerifyMode};

use crate::error::CliError;

const GEN_HELP: &str = "Generated input as kind:n[:m]. Kinds: path, star, complete, \
tree (uniform random tree), gnm (uniform connected G(n,m), needs m). \
Example: gnm:100:495";

#[derive(Debug, Parser)]
#[command(
    name = "gsched",
    version,
    about = "Schedule graph-state preparation on a two-row surface-code layout"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile one graph and write the result as JSON.
    Compile(CompileArgs),
    /// Run an experiment sweep and write one CSV row per compilation.
    Bench(BenchArgs),
    /// Check a stored compilation result against its graph.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct GraphSource {
    /// Graph file: adjacency matrix (.adj), edge list (.edges) or JSON (.json).
    #[arg(long = "in", value_name = "PATH")]
    pub input: Option<PathBuf>,
    #[arg(long = "gen", value_name = "SPEC", help = GEN_HELP)]
    pub generate: Option<String>,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[arg(long, value_enum, default_value_t = MapperArg::Natural)]
    pub mapper: MapperArg,
    #[arg(long, value_enum, default_value_t = SchedulerArg::Paper)]
    pub scheduler: SchedulerArg,
    /// Vertex order for the greedy independent set.
    #[arg(long, value_enum, default_value_t = MisOrderArg::Degree)]
    pub mis_order: MisOrderArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Karger runs per cut: a number, or `auto` for ceil(k^2 ln k) capped by
    /// the contraction budget.
    #[arg(long, default_value = "auto", value_parser = parse_budget)]
    pub karger_budget: KargerBudget,
    #[arg(long, value_enum, default_value_t = VerifyArg::Auto)]
    pub verify: VerifyArg,
    /// Largest n verified under `--verify auto`.
    #[arg(long, default_value_t = gsched_core::compiler::DEFAULT_VERIFY_CAP)]
    pub verify_cap: usize,
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    #[command(flatten)]
    pub source: GraphSource,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    /// Seed for generated inputs (defaults to --seed).
    #[arg(long)]
    pub graph_seed: Option<u64>,
    /// Result JSON path. Without it the JSON goes to stdout and the summary
    /// to stderr.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Append compile wall time to the summary line.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: GraphSource,
    /// Seed for generated inputs.
    #[arg(long, default_value_t = 0)]
    pub graph_seed: u64,
    /// Result JSON written by `compile`.
    #[arg(long, value_name = "PATH")]
    pub result: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Graph classes for the types suite, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "path,star,tree,complete")]
    pub kind: Vec<KindArg>,
    /// Graph families for the scaling suite.
    #[arg(long, value_enum, default_value_t = Family::Both)]
    pub family: Family,
    /// Sizes: a comma list (10,50,100) or a range a..b, expanded over the
    /// 1-2-5 series. Defaults: types 10..1000, density 100, scaling 10..1000.
    #[arg(long, value_name = "SIZES")]
    pub n: Option<String>,
    /// Density grid for the density suite, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0.02,0.05,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0"
    )]
    pub densities: Vec<f64>,
    /// Instances per grid point.
    #[arg(long, default_value_t = 10)]
    pub seeds: u64,
    /// First instance seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Mappers, comma separated. Defaults: types and scaling mincut,random;
    /// density random.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub mapper: Vec<MapperArg>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "paper,first-fit")]
    pub scheduler: Vec<SchedulerArg>,
    /// Largest n run with the mincut mapper.
    #[arg(long, default_value_t = 300)]
    pub mincut_cap: usize,
    #[arg(long, default_value = "auto", value_parser = parse_budget)]
    pub karger_budget: KargerBudget,
    #[arg(long, value_enum, default_value_t = VerifyArg::Auto)]
    pub verify: VerifyArg,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Fill wall_time_ms; otherwise it is 0 and the CSV is reproducible.
    #[arg(long)]
    pub timing: bool,
    /// CSV path; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MapperArg {
    Natural,
    Random,
    Mincut,
}

impl From<MapperArg> for MapperKind {
    fn from(m: MapperArg) -> Self {
        match m {
            MapperArg::Natural => MapperKind::Natural,
            MapperArg::Random => MapperKind::Random,
            MapperArg::Mincut => MapperKind::MinCut,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchedulerArg {
    Paper,
    FirstFit,
}

impl From<SchedulerArg> for SchedulerKind {
    fn from(s: SchedulerArg) -> Self {
        match s {
            SchedulerArg::Paper => SchedulerKind::Paper,
            SchedulerArg::FirstFit => SchedulerKind::FirstFit,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MisOrderArg {
    /// Lowest degree first.
    Degree,
    /// Seeded shuffle.
    Random,
}

impl From<MisOrderArg> for MisOrder {
    fn from(o: MisOrderArg) -> Self {
        match o {
            MisOrderArg::Degree => MisOrder::DegreeAscending,
            MisOrderArg::Random => MisOrder::SeededRandom,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyArg {
    Auto,
    Always,
    Never,
}

impl From<VerifyArg> for VerifyMode {
    fn from(v: VerifyArg) -> Self {
        match v {
            VerifyArg::Auto => VerifyMode::Auto,
            VerifyArg::Always => VerifyMode::Always,
            VerifyArg::Never => VerifyMode::Never,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Types,
    Density,
    Scaling,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Path,
    Star,
    Tree,
    Complete,
}

impl KindArg {
    pub fn spec(self, n: usize) -> GraphSpec {
        match self {
            KindArg::Path => GraphSpec::Path(n),
            KindArg::Star => GraphSpec::Star(n),
            KindArg::Tree => GraphSpec::RandomTree(n),
            KindArg::Complete => GraphSpec::Complete(n),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// m = ceil(n log2 n)
    Sparse,
    /// m = ceil(n^2 / log2 n)
    Dense,
    Both,
}

pub fn parse_budget(s: &str) -> Result<KargerBudget, String> {
    if s == "auto" {
        return Ok(KargerBudget::default());
    }
    match s.parse::<usize>() {
        Ok(r) if r >= 1 => Ok(KargerBudget::fixed(r)),
        _ => Err(format!("expected `auto` or a positive integer, got '{s}'")),
    }
}

/// Expands `10,50,100` or `a..b`. A range keeps the members of the 1-2-5
/// series inside `[a, b]` plus both ends.
pub fn parse_sizes(s: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Usage(format!("invalid size list '{s}'"));
    let mut sizes = if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if a == 0 || a > b {
            return Err(bad());
        }
        let mut out = vec![a];
        let mut decade = 1usize;
        while decade <= b {
            for step in [1, 2, 5] {
                let v = decade.saturating_mul(step);
                if v > a && v < b {
                    out.push(v);
                }
            }
            decade = decade.saturating_mul(10);
        }
        out.push(b);
        out
    } else {
        s.split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?
    };
    if sizes.contains(&0) {
        return Err(bad());
    }
    sizes.sort_unstable();
    sizes.dedup();
    Ok(sizes)
}
