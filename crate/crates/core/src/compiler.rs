//! End-to-end compilation: reduce, map, schedule, then check the result.
//!
//! Cost accounting follows the tile model of the two-row layout: `n`
//! two-tile logical patches over a bus of equal length occupy `4n` tiles.
//! Qubits initialized in `|+>` never take part in an X-type measurement and
//! fit in a single tile, which gives `4n - |S|` for an independent set `S`.
//! Initialization and single-patch operations cost 0 Tocks; every round of
//! multi-patch measurements costs 1 Tock.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::mapping::{basic_mapping, mincut_mapping, BasicMapper, KargerBudget, Mapping};
use crate::rng::derive_seed;
use crate::scheduler::{build_blocks, validate_schedule, Schedule, SchedulerKind, ValidationReport};
use crate::stabilizer::{greedy_maximal_independent_set, reduce_generators, MisOrder, ReductionPlan};
use crate::verify::{verify_compilation, VerifyError, VerifyReport};

pub use crate::baseline::{cz_baseline_depth, edge_coloring, CzBaseline};

/// Graphs up to this size are verified by default.
pub const DEFAULT_VERIFY_CAP: usize = 200;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MapperKind {
    #[default]
    Natural,
    Random,
    MinCut,
}

impl MapperKind {
    pub fn name(self) -> &'static str {
        match self {
            MapperKind::Natural => "natural",
            MapperKind::Random => "random",
            MapperKind::MinCut => "mincut",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum VerifyMode {
    /// Verify when `n` is within the verification cap.
    #[default]
    Auto,
    Always,
    Never,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompileOptions {
    pub mapper: MapperKind,
    pub scheduler: SchedulerKind,
    pub mis_order: MisOrder,
    pub seed: u64,
    pub karger: KargerBudget,
    pub verify: VerifyMode,
    pub verify_cap: usize,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            mapper: MapperKind::default(),
            scheduler: SchedulerKind::default(),
            mis_order: MisOrder::default(),
            seed: 0,
            karger: KargerBudget::default(),
            verify: VerifyMode::default(),
            verify_cap: DEFAULT_VERIFY_CAP,
        }
    }
}

#[derive(Debug, Error)]
pub enum CompileError {
    #[error("input graph is not connected")]
    Disconnected,
    #[error("internal error: schedule failed validation: {}", join_violations(.0))]
    InvalidSchedule(ValidationReport),
    #[error("internal error: verification failed: {}", .0.failure.as_deref().unwrap_or("unknown"))]
    VerificationFailed(VerifyReport),
    #[error("internal error: {0}")]
    Verify(#[from] VerifyError),
    #[error("independent set of size {mis_size} exceeds n = {n}")]
    MisTooLarge { n: usize, mis_size: usize },
}

fn join_violations(report: &ValidationReport) -> String {
    report
        .violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompilationResult {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub plan: ReductionPlan,
    pub mapping: Mapping,
    pub schedule: Schedule,
    pub tocks: usize,
    pub tiles_full: usize,
    pub tiles_reduced: usize,
    pub spacetime_volume: usize,
    pub verified: bool,
}

impl CompilationResult {
    pub fn mis_size(&self) -> usize {
        self.plan.independent_set.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result json")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    /// Two-tile patches for every qubit.
    Full,
    /// Single-tile patches for qubits initialized in `|+>`.
    Reduced,
}

pub fn space_tiles(n: usize, mis_size: usize, layout: Layout) -> Result<usize, CompileError> {
    if mis_size > n {
        return Err(CompileError::MisTooLarge { n, mis_size });
    }
    Ok(match layout {
        Layout::Full => 4 * n,
        Layout::Reduced => 4 * n - mis_size,
    })
}

pub fn spacetime_volume(result: &CompilationResult) -> usize {
    result.tiles_reduced * result.tocks
}

pub fn map_vertices(g: &Graph, options: &CompileOptions) -> Mapping {
    let seed = derive_seed(options.seed, 1);
    match options.mapper {
        MapperKind::Natural => basic_mapping(g, BasicMapper::Natural, seed),
        MapperKind::Random => basic_mapping(g, BasicMapper::Random, seed),
        MapperKind::MinCut => mincut_mapping(g, &options.karger, seed),
    }
}

pub fn compile(g: &Graph, options: &CompileOptions) -> Result<CompilationResult, CompileError> {
    if !g.is_connected() {
        return Err(CompileError::Disconnected);
    }
    let n = g.n();

    let set = greedy_maximal_independent_set(g, options.mis_order, derive_seed(options.seed, 0));
    let plan = reduce_generators(g, &set).expect("greedy set is independent and maximal");
    let mapping = map_vertices(g, options);
    let blocks = build_blocks(g, &plan.measured, &mapping);
    let schedule = options.scheduler.schedule(&blocks);

    let report = validate_schedule(&schedule, &blocks);
    if !report.ok {
        return Err(CompileError::InvalidSchedule(report));
    }

    let run_verify = match options.verify {
        VerifyMode::Always => true,
        VerifyMode::Never => false,
        VerifyMode::Auto => n <= options.verify_cap,
    };
    if run_verify {
        let report = verify_compilation(g, &plan, &schedule)?;
        if !report.pass {
            return Err(CompileError::VerificationFailed(report));
        }
    }

    let tocks = schedule.tocks;
    let mis_size = plan.independent_set.len();
    let tiles_reduced = space_tiles(n, mis_size, Layout::Reduced)?;
    let mut result = CompilationResult {
        n,
        labels: g.labels().map(<[String]>::to_vec),
        plan,
        mapping,
        schedule,
        tocks,
        tiles_full: space_tiles(n, mis_size, Layout::Full)?,
        tiles_reduced,
        spacetime_volume: 0,
        verified: run_verify,
    };
    result.spacetime_volume = spacetime_volume(&result);
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphSpec};

    fn opts(mapper: MapperKind) -> CompileOptions {
        CompileOptions {
            mapper,
            seed: 3,
            ..CompileOptions::default()
        }
    }

    #[test]
    fn class_tocks_at_one_hundred() {
        let path = generate(GraphSpec::Path(100), 0).unwrap();
        assert_eq!(compile(&path, &opts(MapperKind::MinCut)).unwrap().tocks, 2);
        let star = generate(GraphSpec::Star(100), 0).unwrap();
        assert_eq!(compile(&star, &opts(MapperKind::Random)).unwrap().tocks, 1);
        let k = generate(GraphSpec::Complete(100), 0).unwrap();
        assert_eq!(compile(&k, &opts(MapperKind::Natural)).unwrap().tocks, 99);
    }

    #[test]
    fn tile_accounting() {
        assert_eq!(space_tiles(100, 50, Layout::Full).unwrap(), 400);
        assert_eq!(space_tiles(100, 50, Layout::Reduced).unwrap(), 350);
        assert_eq!(space_tiles(1, 1, Layout::Reduced).unwrap(), 3);
        assert!(matches!(
            space_tiles(3, 4, Layout::Reduced),
            Err(CompileError::MisTooLarge { .. })
        ));
    }

    #[test]
    fn volumes() {
        let star = generate(GraphSpec::Star(100), 0).unwrap();
        let r = compile(&star, &opts(MapperKind::Natural)).unwrap();
        assert_eq!((r.tiles_reduced, r.tocks, r.spacetime_volume), (301, 1, 301));
        let k4 = generate(GraphSpec::Complete(4), 0).unwrap();
        let r = compile(&k4, &opts(MapperKind::Natural)).unwrap();
        assert_eq!((r.tiles_reduced, r.tocks, r.spacetime_volume), (15, 3, 45));
        let single = generate(GraphSpec::Path(1), 0).unwrap();
        let r = compile(&single, &opts(MapperKind::MinCut)).unwrap();
        assert_eq!((r.tiles_reduced, r.tocks, r.spacetime_volume), (3, 0, 0));
        assert!(r.verified);
    }

    #[test]
    fn disconnected_input_is_rejected() {
        let g = Graph::from_edge_list(3, &[(0, 1)]).unwrap();
        assert!(matches!(
            compile(&g, &CompileOptions::default()),
            Err(CompileError::Disconnected)
        ));
    }

    #[test]
    fn verification_cap() {
        let g = generate(GraphSpec::Path(250), 0).unwrap();
        assert!(!compile(&g, &CompileOptions::default()).unwrap().verified);
        let always = CompileOptions {
            verify: VerifyMode::Always,
            ..CompileOptions::default()
        };
        assert!(compile(&g, &always).unwrap().verified);
        let never = CompileOptions {
            verify: VerifyMode::Never,
            ..CompileOptions::default()
        };
        assert!(
            !compile(&generate(GraphSpec::Path(5), 0).unwrap(), &never)
                .unwrap()
                .verified
        );
    }

    #[test]
    fn json_is_reproducible() {
        let g = generate(GraphSpec::Gnm { n: 30, m: 80 }, 5).unwrap();
        let o = CompileOptions {
            mapper: MapperKind::MinCut,
            seed: 17,
            ..CompileOptions::default()
        };
        let a = compile(&g, &o).unwrap().to_json();
        let b = compile(&g, &o).unwrap().to_json();
        assert_eq!(a, b);
        let back: CompilationResult = serde_json::from_str(&a).unwrap();
        assert_eq!(back.to_json(), a);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        for key in [
            "plan",
            "mapping",
            "schedule",
            "tocks",
            "tiles_full",
            "tiles_reduced",
            "spacetime_volume",
            "verified",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }
}
