//! Experiment sweeps. Rows come out in instance order whatever the worker
//! count, so the CSV is reproducible unless wall times are requested.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use gsched_core::compiler::DEFAULT_VERIFY_CAP;
use gsched_core::{
    compile, generate, CompileOptions, GraphSpec, KargerBudget, MapperKind, MisOrder, SchedulerKind, VerifyMode,
};
use rayon::prelude::*;

use crate::args::{parse_sizes, BenchArgs, Family, MapperArg, Suite};
use crate::error::CliError;

pub const CSV_HEADER: &str = "graph_kind,n,edge_count,density,mapper,scheduler,seed,mis_size,measured_count,tocks,lower_bound,tiles_reduced,volume,wall_time_ms";

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub graph_kind: String,
    pub n: usize,
    pub edge_count: usize,
    pub density: f64,
    pub mapper: &'static str,
    pub scheduler: &'static str,
    pub seed: u64,
    pub mis_size: usize,
    pub measured_count: usize,
    pub tocks: usize,
    pub lower_bound: usize,
    pub tiles_reduced: usize,
    pub volume: usize,
    pub wall_time_ms: f64,
}

impl BenchRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{:.6},{},{},{},{},{},{},{},{},{},{:.3}",
            self.graph_kind,
            self.n,
            self.edge_count,
            self.density,
            self.mapper,
            self.scheduler,
            self.seed,
            self.mis_size,
            self.measured_count,
            self.tocks,
            self.lower_bound,
            self.tiles_reduced,
            self.volume,
            self.wall_time_ms,
        )
    }
}

/// One generated graph, compiled once per mapper and scheduler.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub graph_kind: String,
    pub spec: GraphSpec,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct BenchPlan {
    pub instances: Vec<Instance>,
    pub mappers: Vec<MapperKind>,
    pub schedulers: Vec<SchedulerKind>,
    pub mincut_cap: usize,
    pub karger: KargerBudget,
    pub verify: VerifyMode,
    pub timing: bool,
}

pub fn density(n: usize, m: usize) -> f64 {
    if n < 2 {
        0.0
    } else {
        2.0 * m as f64 / (n as f64 * (n as f64 - 1.0))
    }
}

/// Edge count clamped to the connected simple range `[n - 1, n(n - 1)/2]`.
fn clamp_edges(n: usize, m: f64) -> usize {
    let max = n * (n - 1) / 2;
    (m.max(0.0) as usize).clamp(n - 1, max)
}

pub fn edges_for_density(n: usize, d: f64) -> usize {
    clamp_edges(n, (d * (n * (n - 1) / 2) as f64).round())
}

pub fn sparse_edges(n: usize) -> usize {
    let nf = n as f64;
    clamp_edges(n, (nf * nf.log2()).ceil())
}

pub fn dense_edges(n: usize) -> usize {
    let nf = n as f64;
    clamp_edges(n, (nf * nf / nf.log2()).ceil())
}

pub fn plan(args: &BenchArgs) -> Result<BenchPlan, CliError> {
    let seeds: Vec<u64> = (0..args.seeds).map(|i| args.seed + i).collect();
    if seeds.is_empty() {
        return Err(CliError::Usage("--seeds must be at least 1".into()));
    }
    let sizes_or = |default: &str| parse_sizes(args.n.as_deref().unwrap_or(default));
    let need_two = |sizes: &[usize]| {
        if sizes.iter().any(|&n| n < 2) {
            Err(CliError::Usage("random families need n >= 2".into()))
        } else {
            Ok(())
        }
    };

    let mut instances = Vec::new();
    let mut push = |graph_kind: &str, spec: GraphSpec| {
        for &seed in &seeds {
            instances.push(Instance {
                graph_kind: graph_kind.to_string(),
                spec,
                seed,
            });
        }
    };
    let default_mappers: &[MapperArg] = match args.suite {
        Suite::Types => {
            let sizes = sizes_or("10..1000")?;
            for &kind in &args.kind {
                for &n in &sizes {
                    let spec = kind.spec(n);
                    push(spec.kind(), spec);
                }
            }
            &[MapperArg::Mincut, MapperArg::Random]
        }
        Suite::Density => {
            let sizes = sizes_or("100")?;
            need_two(&sizes)?;
            if args.densities.is_empty() || args.densities.iter().any(|d| !(*d > 0.0 && *d <= 1.0)) {
                return Err(CliError::Usage("densities must lie in (0, 1]".into()));
            }
            for &n in &sizes {
                for &d in &args.densities {
                    push(
                        "gnm",
                        GraphSpec::Gnm {
                            n,
                            m: edges_for_density(n, d),
                        },
                    );
                }
            }
            &[MapperArg::Random]
        }
        Suite::Scaling => {
            let sizes = sizes_or("10..1000")?;
            need_two(&sizes)?;
            for &n in &sizes {
                if matches!(args.family, Family::Sparse | Family::Both) {
                    push("sparse", GraphSpec::Gnm { n, m: sparse_edges(n) });
                }
                if matches!(args.family, Family::Dense | Family::Both) {
                    push("dense", GraphSpec::Gnm { n, m: dense_edges(n) });
                }
            }
            &[MapperArg::Mincut, MapperArg::Random]
        }
    };
    let mappers = if args.mapper.is_empty() {
        default_mappers
    } else {
        &args.mapper[..]
    };

    Ok(BenchPlan {
        instances,
        mappers: mappers.iter().map(|&m| m.into()).collect(),
        schedulers: args.scheduler.iter().map(|&s| s.into()).collect(),
        mincut_cap: args.mincut_cap,
        karger: args.karger_budget,
        verify: args.verify.into(),
        timing: args.timing,
    })
}

fn run_instance(plan: &BenchPlan, inst: &Instance) -> Result<Vec<BenchRow>, CliError> {
    let g = generate(inst.spec, inst.seed)?;
    let n = g.n();
    let mut rows = Vec::new();
    for &mapper in &plan.mappers {
        if mapper == MapperKind::MinCut && n > plan.mincut_cap {
            continue;
        }
        for &scheduler in &plan.schedulers {
            let options = CompileOptions {
                mapper,
                scheduler,
                mis_order: MisOrder::default(),
                seed: inst.seed,
                karger: plan.karger,
                verify: plan.verify,
                verify_cap: DEFAULT_VERIFY_CAP,
            };
            let start = Instant::now();
            let r = compile(&g, &options)?;
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            rows.push(BenchRow {
                graph_kind: inst.graph_kind.clone(),
                n,
                edge_count: g.edge_count(),
                density: density(n, g.edge_count()),
                mapper: mapper.name(),
                scheduler: scheduler.name(),
                seed: inst.seed,
                mis_size: r.mis_size(),
                measured_count: r.plan.measured.len(),
                tocks: r.tocks,
                lower_bound: r.schedule.lower_bound,
                tiles_reduced: r.tiles_reduced,
                volume: r.spacetime_volume,
                wall_time_ms: if plan.timing { elapsed } else { 0.0 },
            });
        }
    }
    Ok(rows)
}

/// Runs every instance on a pool of `jobs` workers (`None`: one per core).
pub fn run(plan: &BenchPlan, jobs: Option<usize>) -> Result<Vec<BenchRow>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("worker pool: {e}")))?;
    let per_instance: Vec<Result<Vec<BenchRow>, CliError>> =
        pool.install(|| plan.instances.par_iter().map(|inst| run_instance(plan, inst)).collect());
    let mut rows = Vec::new();
    for r in per_instance {
        rows.extend(r?);
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_line());
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupStats {
    pub graph_kind: String,
    pub n: usize,
    pub edge_count: usize,
    pub mapper: &'static str,
    pub scheduler: &'static str,
    pub runs: usize,
    pub tocks_mean: f64,
    /// Sample standard deviation; 0 for a single run.
    pub tocks_std: f64,
}

/// Mean and spread of Tocks per grid point, in first-appearance order.
pub fn summarize(rows: &[BenchRow]) -> Vec<GroupStats> {
    let mut order = Vec::new();
    let mut groups: BTreeMap<(String, usize, usize, &str, &str), Vec<f64>> = BTreeMap::new();
    for r in rows {
        let key = (r.graph_kind.clone(), r.n, r.edge_count, r.mapper, r.scheduler);
        if !groups.contains_key(&key) {
            order.push(key.clone());
        }
        groups.entry(key).or_default().push(r.tocks as f64);
    }
    order
        .into_iter()
        .map(|key| {
            let xs = &groups[&key];
            let k = xs.len() as f64;
            let mean = xs.iter().sum::<f64>() / k;
            let var = if xs.len() > 1 {
                xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0)
            } else {
                0.0
            };
            GroupStats {
                graph_kind: key.0,
                n: key.1,
                edge_count: key.2,
                mapper: key.3,
                scheduler: key.4,
                runs: xs.len(),
                tocks_mean: mean,
                tocks_std: var.sqrt(),
            }
        })
        .collect()
}

pub fn summary_text(stats: &[GroupStats]) -> String {
    let mut out = String::new();
    for s in stats {
        let _ = writeln!(
            out,
            "{} n={} m={} density={:.6} mapper={} scheduler={} runs={} tocks_mean={:.3} tocks_std={:.3}",
            s.graph_kind,
            s.n,
            s.edge_count,
            density(s.n, s.edge_count),
            s.mapper,
            s.scheduler,
            s.runs,
            s.tocks_mean,
            s.tocks_std
        );
    }
    out
}
