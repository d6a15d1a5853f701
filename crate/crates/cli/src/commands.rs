use std::io::Write;
use std::path::Path;
use std::time::Instant;

use gsched_core::compiler::{space_tiles, Layout};
use gsched_core::scheduler::{build_blocks, validate_schedule};
use gsched_core::stabilizer::reduce_generators;
use gsched_core::verify::verify_compilation;
use gsched_core::{compile, generate, CompilationResult, CompileOptions, Graph, GraphSpec};

use crate::args::{BenchArgs, CompileArgs, GraphSource, PipelineArgs, VerifyArgs};
use crate::bench;
use crate::error::CliError;

pub fn load_graph(source: &GraphSource, seed: u64) -> Result<Graph, CliError> {
    match (&source.input, &source.generate) {
        (Some(path), None) => Ok(Graph::read(path)?),
        (None, Some(spec)) => {
            let spec: GraphSpec = spec.parse()?;
            Ok(generate(spec, seed)?)
        }
        _ => Err(CliError::Usage("give exactly one of --in and --gen".into())),
    }
}

pub fn options(p: &PipelineArgs) -> CompileOptions {
    CompileOptions {
        mapper: p.mapper.into(),
        scheduler: p.scheduler.into(),
        mis_order: p.mis_order.into(),
        seed: p.seed,
        karger: p.karger_budget,
        verify: p.verify.into(),
        verify_cap: p.verify_cap,
    }
}

pub fn summary_line(g: &Graph, r: &CompilationResult) -> String {
    format!(
        "n={} edges={} mis={} measured={} tocks={} lower_bound={} tiles_full={} tiles_reduced={} volume={} verified={}",
        r.n,
        g.edge_count(),
        r.mis_size(),
        r.plan.measured.len(),
        r.tocks,
        r.schedule.lower_bound,
        r.tiles_full,
        r.tiles_reduced,
        r.spacetime_volume,
        r.verified
    )
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn emit(w: &mut dyn Write, text: &str) -> Result<(), CliError> {
    w.write_all(text.as_bytes())
        .map_err(|e| CliError::Io(format!("write failed: {e}")))
}

pub fn compile_cmd(args: &CompileArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let g = load_graph(&args.source, args.graph_seed.unwrap_or(args.pipeline.seed))?;
    let start = Instant::now();
    let r = compile(&g, &options(&args.pipeline))?;
    let mut summary = summary_line(&g, &r);
    if args.timing {
        summary.push_str(&format!(" wall_time_ms={:.3}", start.elapsed().as_secs_f64() * 1e3));
    }
    summary.push('\n');
    let mut json = r.to_json();
    json.push('\n');
    match &args.out {
        Some(path) => {
            write_file(path, &json)?;
            emit(out, &summary)
        }
        None => {
            emit(out, &json)?;
            emit(err, &summary)
        }
    }
}

pub fn bench_cmd(args: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let plan = bench::plan(args)?;
    let rows = bench::run(&plan, args.jobs)?;
    let csv = bench::to_csv(&rows);
    let summary = bench::summary_text(&bench::summarize(&rows));
    match &args.out {
        Some(path) => {
            write_file(path, &csv)?;
            emit(out, &summary)
        }
        None => {
            emit(out, &csv)?;
            emit(err, &summary)
        }
    }
}

/// Everything wrong with a stored result. Size disagreements between the
/// graph and the result are reported as an error instead.
pub fn audit(g: &Graph, r: &CompilationResult) -> Result<Vec<String>, CliError> {
    let n = g.n();
    let sizes = [("result", r.n), ("plan", r.plan.n()), ("mapping", r.mapping.n())];
    for (what, size) in sizes {
        if size != n {
            return Err(CliError::Dimension(format!(
                "graph has {n} vertices, {what} has {size}"
            )));
        }
    }

    let mut problems = Vec::new();
    match reduce_generators(g, &r.plan.independent_set) {
        Ok(expected) if expected == r.plan => {}
        Ok(_) => problems.push("plan does not match its independent set".to_string()),
        Err(e) => problems.push(format!("plan: {e}")),
    }

    let in_range = r.plan.measured.iter().all(|&v| v < n) && r.schedule.generators().all(|v| v < n);
    if in_range {
        let blocks = build_blocks(g, &r.plan.measured, &r.mapping);
        let report = validate_schedule(&r.schedule, &blocks);
        problems.extend(report.violations.iter().map(|v| format!("schedule: {v}")));
        match verify_compilation(g, &r.plan, &r.schedule) {
            Ok(rep) if rep.pass => {}
            Ok(rep) => problems.push(format!("verification: {}", rep.failure.unwrap_or_default())),
            Err(e) => problems.push(format!("verification: {e}")),
        }
    } else {
        problems.push("plan or schedule names a vertex outside the graph".to_string());
    }

    let mis = r.plan.independent_set.len();
    let tiles_full = space_tiles(n, mis, Layout::Full).ok();
    let tiles_reduced = space_tiles(n, mis, Layout::Reduced).ok();
    let checks = [
        ("tocks", r.tocks, Some(r.schedule.rounds.len())),
        ("schedule.tocks", r.schedule.tocks, Some(r.schedule.rounds.len())),
        ("tiles_full", r.tiles_full, tiles_full),
        ("tiles_reduced", r.tiles_reduced, tiles_reduced),
        ("spacetime_volume", r.spacetime_volume, Some(r.tiles_reduced * r.tocks)),
    ];
    for (field, got, want) in checks {
        if Some(got) != want {
            let want = want.map_or("undefined".to_string(), |w| w.to_string());
            problems.push(format!("{field} is {got}, expected {want}"));
        }
    }
    Ok(problems)
}

pub fn read_result(path: &Path) -> Result<CompilationResult, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn verify_cmd(args: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let g = load_graph(&args.source, args.graph_seed)?;
    let r = read_result(&args.result)?;
    let problems = audit(&g, &r)?;
    if problems.is_empty() {
        return emit(
            out,
            &format!("PASS n={} measured={} tocks={}\n", r.n, r.plan.measured.len(), r.tocks),
        );
    }
    let mut text = format!("FAIL {} problem(s)\n", problems.len());
    for p in &problems {
        text.push_str(&format!("  {p}\n"));
    }
    emit(out, &text)?;
    Err(CliError::Verify(format!(
        "{} problem(s) in {}",
        problems.len(),
        args.result.display()
    )))
}
