//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use clap::Parser;
use gsched_cli::args::{Cli, Command as CliCommand};
use gsched_cli::bench::{self, BenchRow};
use gsched_core::baseline::cz_baseline_depth;
use gsched_core::mapping::karger_min_cut;
use gsched_core::rng::seeded;
use gsched_core::scheduler::{max_overlap_depth, schedule_first_fit, schedule_paper_greedy, AncillaBlock};
use gsched_core::verify::{oracle_min_cut, oracle_min_rounds, verify_compilation};
use gsched_core::{
    compile, generate, CompilationResult, CompileOptions, Graph, GraphSpec, MapperKind, SchedulerKind, VerifyMode,
};
use rand::Rng;

const SIZES: [usize; 5] = [10, 50, 100, 500, 1000];
const MAPPERS: [MapperKind; 3] = [MapperKind::Natural, MapperKind::Random, MapperKind::MinCut];
const SCHEDULERS: [SchedulerKind; 2] = [SchedulerKind::Paper, SchedulerKind::FirstFit];
/// Largest n at which the min-cut mapper is held to the per-instance time limit.
const MINCUT_TIMED_CAP: usize = 300;
const INSTANCE_SECONDS: f64 = 10.0;

type Check = fn() -> Outcome;
/// Arguments, plus two output files when the command writes one.
type Invocation = (Vec<String>, Option<(String, String)>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: &[String], summary: String) -> Outcome {
    if failures.is_empty() {
        Outcome {
            pass: true,
            detail: summary,
        }
    } else {
        let shown: Vec<&str> = failures.iter().take(5).map(String::as_str).collect();
        Outcome {
            pass: false,
            detail: format!("{summary}; {} failure(s): {}", failures.len(), shown.join(" | ")),
        }
    }
}

fn options(mapper: MapperKind, scheduler: SchedulerKind, seed: u64) -> CompileOptions {
    CompileOptions {
        mapper,
        scheduler,
        seed,
        ..CompileOptions::default()
    }
}

fn timed_compile(g: &Graph, o: &CompileOptions) -> (CompilationResult, f64) {
    let start = Instant::now();
    let r = compile(g, o).expect("compiles");
    (r, start.elapsed().as_secs_f64())
}

/// Uniform connected `G(n, m)` with `m` drawn from the connected range.
/// Falls back to a random tree when resampling runs out, which only
/// happens for `m` just above `n - 1`.
fn random_connected(n: usize, seed: u64) -> Graph {
    let mut rng = seeded(seed ^ 0x5eed);
    let m = rng.gen_range(n - 1..=n * (n - 1) / 2);
    generate(GraphSpec::Gnm { n, m }, seed).unwrap_or_else(|_| generate(GraphSpec::RandomTree(n), seed).unwrap())
}

fn analytic_classes() -> Outcome {
    let mut failures = Vec::new();
    let mut slowest: f64 = 0.0;
    let mut count = 0;
    for n in SIZES {
        let cases = [
            (GraphSpec::Star(n), 1, &MAPPERS[..]),
            (GraphSpec::Complete(n), n - 1, &MAPPERS[..]),
            (GraphSpec::Path(n), 2, &[MapperKind::MinCut][..]),
        ];
        for (spec, expected, mappers) in cases {
            let g = generate(spec, 0).unwrap();
            for &mapper in mappers {
                // Complete graphs at n > 300 exceed the min-cut mapper's range.
                if mapper == MapperKind::MinCut && n > MINCUT_TIMED_CAP && spec.kind() == "complete" {
                    continue;
                }
                let (r, secs) = timed_compile(&g, &options(mapper, SchedulerKind::Paper, 11));
                count += 1;
                let exempt = mapper == MapperKind::MinCut && n > MINCUT_TIMED_CAP;
                if !exempt {
                    slowest = slowest.max(secs);
                    if secs > INSTANCE_SECONDS {
                        failures.push(format!("{spec} {} took {secs:.1}s", mapper.name()));
                    }
                }
                if r.tocks != expected {
                    failures.push(format!(
                        "{spec} {}: {} Tocks, expected {expected}",
                        mapper.name(),
                        r.tocks
                    ));
                }
            }
        }
    }
    outcome(
        &failures,
        format!("{count} compilations, slowest timed instance {slowest:.2}s"),
    )
}

fn reduction_counts() -> Outcome {
    let mut failures = Vec::new();
    for n in SIZES {
        let checks = [
            (GraphSpec::Star(n), 1, true),
            (GraphSpec::Complete(n), n - 1, true),
            (GraphSpec::Path(n), n.div_ceil(2), false),
        ];
        for (spec, bound, exact) in checks {
            let g = generate(spec, 0).unwrap();
            let r = compile(&g, &options(MapperKind::Natural, SchedulerKind::Paper, 0)).unwrap();
            let measured = r.plan.measured.len();
            let ok = if exact { measured == bound } else { measured <= bound };
            if !ok {
                failures.push(format!("{spec}: {measured} measured, bound {bound}"));
            }
        }
    }
    outcome(&failures, "star 1, complete n-1, path <= ceil(n/2)".into())
}

fn cz_baseline() -> Outcome {
    let mut failures = Vec::new();
    for n in SIZES {
        let path = cz_baseline_depth(&generate(GraphSpec::Path(n), 0).unwrap()).colors;
        let star = cz_baseline_depth(&generate(GraphSpec::Star(n), 0).unwrap()).colors;
        let k = cz_baseline_depth(&generate(GraphSpec::Complete(n), 0).unwrap()).colors;
        let k_expected = if n % 2 == 0 { n - 1 } else { n };
        for (what, got, want) in [("path", path, 2), ("star", star, n - 1), ("complete", k, k_expected)] {
            if got != want {
                failures.push(format!("{what}:{n} colors {got}, expected {want}"));
            }
        }
    }
    let mut rng = seeded(3);
    let mut hits = 0;
    for seed in 0..100u64 {
        let n = rng.gen_range(2..=200);
        let t = generate(GraphSpec::RandomTree(n), seed).unwrap();
        if cz_baseline_depth(&t).colors == t.max_degree() {
            hits += 1;
        }
    }
    if hits < 95 {
        failures.push(format!("random trees reached Delta in {hits}/100"));
    }
    outcome(&failures, format!("random trees colored with Delta colors: {hits}/100"))
}

fn verification_oracle() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut runs = 0;
    let mut rng = seeded(4);
    let mut graphs: Vec<Graph> = (0..200u64)
        .map(|seed| random_connected(rng.gen_range(2..=12), seed))
        .collect();
    graphs.push(random_connected(50, 1000));
    graphs.push(random_connected(100, 1001));
    for (i, g) in graphs.iter().enumerate() {
        for mapper in MAPPERS {
            for scheduler in SCHEDULERS {
                let o = CompileOptions {
                    verify: VerifyMode::Never,
                    ..options(mapper, scheduler, i as u64)
                };
                let r = compile(g, &o).unwrap();
                runs += 1;
                match verify_compilation(g, &r.plan, &r.schedule) {
                    Ok(rep) if rep.pass => {}
                    Ok(rep) => failures.push(format!("graph {i}: {}", rep.failure.unwrap_or_default())),
                    Err(e) => failures.push(format!("graph {i}: {e}")),
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 60.0 {
        failures.push(format!("took {secs:.1}s"));
    }
    outcome(&failures, format!("{runs} verified compilations in {secs:.1}s"))
}

fn scheduler_optimality() -> Outcome {
    let mut failures = Vec::new();
    let mut rng = seeded(5);
    let mut greedy_above_optimum = 0;
    for set in 0..500 {
        let k = rng.gen_range(0..=10);
        let blocks: Vec<AncillaBlock> = (0..k)
            .map(|gen| {
                let l = rng.gen_range(0..12);
                AncillaBlock::new(gen, l, rng.gen_range(l..12))
            })
            .collect();
        let depth = max_overlap_depth(&blocks);
        let oracle = oracle_min_rounds(&blocks).unwrap();
        let ff = schedule_first_fit(&blocks).tocks;
        let paper = schedule_paper_greedy(&blocks).tocks;
        if ff != oracle || oracle != depth {
            failures.push(format!("set {set}: first-fit {ff}, oracle {oracle}, depth {depth}"));
        }
        if paper < depth {
            failures.push(format!("set {set}: paper greedy {paper} below bound {depth}"));
        }
        if paper > oracle {
            greedy_above_optimum += 1;
        }
    }
    let counter: Vec<AncillaBlock> = [(1, 4), (4, 6), (7, 8), (5, 9)]
        .iter()
        .enumerate()
        .map(|(i, &(l, r))| AncillaBlock::new(i, l, r))
        .collect();
    let (paper, ff) = (
        schedule_paper_greedy(&counter).tocks,
        schedule_first_fit(&counter).tocks,
    );
    if (paper, ff) != (3, 2) {
        failures.push(format!("counterexample: paper {paper}, first-fit {ff}"));
    }
    outcome(
        &failures,
        format!("500 sets; paper greedy above optimum on {greedy_above_optimum}; counterexample paper {paper} vs first-fit {ff}"),
    )
}

fn karger_statistics() -> Outcome {
    let mut rng = seeded(6);
    let mut exact = 0;
    let mut total = 0;
    let mut below = Vec::new();
    for seed in 0..100u64 {
        let n = rng.gen_range(2..=10);
        let g = random_connected(n, 10_000 + seed);
        let reps = ((n * n) as f64 * (n as f64).ln()).ceil() as usize;
        let truth = oracle_min_cut(&g).unwrap();
        for run in 0..10u64 {
            let cut = karger_min_cut(&g, reps, seed * 100 + run).unwrap().cut_size;
            total += 1;
            if cut == truth {
                exact += 1;
            }
            if cut < truth {
                below.push(format!("seed {seed}: {cut} < {truth}"));
            }
        }
    }
    let rate = exact as f64 / total as f64;
    let mut failures = below;
    if rate < 0.99 {
        failures.push(format!("exact rate {rate:.3}"));
    }
    outcome(
        &failures,
        format!("exact in {exact}/{total} runs ({:.1}%)", 100.0 * rate),
    )
}

fn bench_rows(argv: &[&str]) -> Vec<BenchRow> {
    let mut full = vec!["gsched", "bench"];
    full.extend_from_slice(argv);
    let CliCommand::Bench(args) = Cli::try_parse_from(full).unwrap().command else {
        unreachable!()
    };
    bench::run(&bench::plan(&args).unwrap(), args.jobs).unwrap()
}

fn density_trend() -> Outcome {
    let rows = bench_rows(&[
        "--suite",
        "density",
        "--n",
        "100",
        "--seeds",
        "10",
        "--mapper",
        "random",
        "--scheduler",
        "paper",
    ]);
    let stats = bench::summarize(&rows);
    let mut failures = Vec::new();
    if stats.len() != 12 || stats.iter().any(|s| s.runs != 10) {
        failures.push(format!("expected 12 points of 10 runs, got {}", stats.len()));
    }
    let mut inversions = Vec::new();
    for w in stats.windows(2) {
        if w[1].tocks_mean < w[0].tocks_mean {
            let drop = w[0].tocks_mean - w[1].tocks_mean;
            let slack = w[0].tocks_std.max(w[1].tocks_std);
            inversions.push((drop, slack, w[1].edge_count));
        }
    }
    match inversions.as_slice() {
        [] => {}
        [(drop, slack, m)] if drop <= slack => {}
        _ => failures.push(format!("inversions {inversions:?}")),
    }
    let full: Vec<usize> = rows.iter().filter(|r| r.edge_count == 4950).map(|r| r.tocks).collect();
    if full.len() != 10 || full.iter().any(|&t| t != 99) {
        failures.push(format!("density 1.0 Tocks {full:?}"));
    }
    let means: Vec<String> = stats.iter().map(|s| format!("{:.1}", s.tocks_mean)).collect();
    outcome(
        &failures,
        format!("mean Tocks [{}], {} inversion(s)", means.join(", "), inversions.len()),
    )
}

fn scalability() -> Outcome {
    let rows = bench_rows(&[
        "--suite",
        "scaling",
        "--family",
        "sparse",
        "--seeds",
        "10",
        "--mapper",
        "random",
        "--scheduler",
        "paper",
        "--timing",
    ]);
    let mut failures = Vec::new();
    let slowest = rows
        .iter()
        .filter(|r| r.n == 1000)
        .map(|r| r.wall_time_ms)
        .fold(0.0, f64::max);
    if !rows.iter().any(|r| r.n == 1000) || slowest >= 10_000.0 {
        failures.push(format!("n=1000 slowest {slowest:.0} ms"));
    }
    let below_reduced = rows.iter().filter(|r| r.tocks < r.measured_count).count();
    let below_n = rows.iter().filter(|r| r.tocks < r.n).count();
    let rate = below_reduced as f64 / rows.len() as f64;
    if rate < 0.9 {
        failures.push(format!(
            "Tocks < n - |MIS| on {below_reduced}/{} instances ({:.0}%)",
            rows.len(),
            100.0 * rate
        ));
    }
    let start = Instant::now();
    let mincut = bench_rows(&[
        "--suite",
        "scaling",
        "--family",
        "sparse",
        "--n",
        "300",
        "--seeds",
        "1",
        "--mapper",
        "mincut",
        "--scheduler",
        "paper",
    ]);
    let mincut_secs = start.elapsed().as_secs_f64();
    if mincut.len() != 1 {
        failures.push("mincut mapper produced no row at n=300".into());
    }
    outcome(
        &failures,
        format!(
            "{} instances, n=1000 slowest {slowest:.1} ms, Tocks < n - |MIS| on {below_reduced}, Tocks < n on {below_n}, mincut n=300 in {mincut_secs:.1}s",
            rows.len()
        ),
    )
}

fn space_accounting() -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    let mut specs = Vec::new();
    for n in [1, 2, 3, 10, 57] {
        specs.extend([
            GraphSpec::Path(n),
            GraphSpec::Star(n),
            GraphSpec::Complete(n),
            GraphSpec::RandomTree(n),
        ]);
    }
    specs.extend([GraphSpec::Gnm { n: 40, m: 200 }, GraphSpec::Gnm { n: 300, m: 2500 }]);
    for spec in specs {
        let g = generate(spec, 8).unwrap();
        for mapper in MAPPERS {
            for scheduler in SCHEDULERS {
                let r = compile(&g, &options(mapper, scheduler, 8)).unwrap();
                count += 1;
                let n = g.n();
                let mis = r.plan.independent_set.len();
                if r.tiles_full != 4 * n
                    || r.tiles_reduced != 4 * n - mis
                    || r.spacetime_volume != r.tiles_reduced * r.tocks
                {
                    failures.push(format!(
                        "{spec} {}: full {} reduced {} volume {}",
                        mapper.name(),
                        r.tiles_full,
                        r.tiles_reduced,
                        r.spacetime_volume
                    ));
                }
            }
        }
    }
    outcome(&failures, format!("{count} compilations"))
}

fn run_cli(args: &[&str]) -> (Vec<u8>, Option<i32>) {
    let o = Command::new(env!("CARGO_BIN_EXE_gsched")).args(args).output().unwrap();
    (o.stdout, o.status.code())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let (a, b) = (path("a.json"), path("b.json"));
    let commands: Vec<Invocation> = vec![
        (
            "compile --gen gnm:60:200 --mapper mincut --scheduler first-fit --seed 3 --out"
                .split(' ')
                .map(String::from)
                .collect(),
            Some((a.clone(), b.clone())),
        ),
        (
            "compile --gen tree:80 --mapper random --mis-order random --seed 9"
                .split(' ')
                .map(String::from)
                .collect(),
            None,
        ),
        (
            "bench --suite density --n 30 --seeds 3 --mapper random,mincut"
                .split(' ')
                .map(String::from)
                .collect(),
            None,
        ),
        (
            "bench --suite scaling --n 10..100 --seeds 2 --jobs 2"
                .split(' ')
                .map(String::from)
                .collect(),
            None,
        ),
        (
            "bench --suite types --n 5..50 --seeds 2"
                .split(' ')
                .map(String::from)
                .collect(),
            None,
        ),
    ];
    let mut failures = Vec::new();
    for (args, files) in &commands {
        let run = |extra: Option<&String>| {
            let mut argv: Vec<&str> = args.iter().map(String::as_str).collect();
            if let Some(f) = extra {
                argv.push(f);
            }
            let (stdout, code) = run_cli(&argv);
            let file = extra.map(|f| std::fs::read(f).unwrap()).unwrap_or_default();
            (stdout, file, code)
        };
        let (first, second) = match files {
            Some((fa, fb)) => (run(Some(fa)), run(Some(fb))),
            None => (run(None), run(None)),
        };
        if first.2 != Some(0) || first != second || (first.0.is_empty() && first.1.is_empty()) {
            failures.push(args.join(" "));
        }
    }
    let verify = ["verify", "--gen", "gnm:60:200", "--graph-seed", "3", "--result", &a];
    if run_cli(&verify) != run_cli(&verify) || run_cli(&verify).1 != Some(0) {
        failures.push("verify".into());
    }
    outcome(
        &failures,
        format!("{} commands run twice, outputs byte-identical", commands.len() + 1),
    )
}

fn main() {
    let criteria: [(&str, Check); 10] = [
        ("analytic classes", analytic_classes),
        ("reduction counts", reduction_counts),
        ("CZ baseline", cz_baseline),
        ("verification oracle", verification_oracle),
        ("scheduler optimality", scheduler_optimality),
        ("Karger min cut", karger_statistics),
        ("density trend", density_trend),
        ("scalability", scalability),
        ("space accounting", space_accounting),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| Outcome {
            pass: false,
            detail: format!(
                "panicked: {}",
                e.downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default()
            ),
        });
        failed += usize::from(!result.pass);
        println!(
            "criterion {:>2} {:<22} {} ({}; {:.1}s)",
            i + 1,
            name,
            if result.pass { "PASS" } else { "FAIL" },
            result.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
