use std::path::PathBuf;
use std::time::Instant;

use mrf_ptas::decomp::{build_grid_band, build_heuristic, BranchDecomposition, DecompositionDump};
use mrf_ptas::mrf::{brute_force_solve, shift_nonnegative, AssignmentFile, ModelFile, MrfInstance};
use mrf_ptas::ptas::{solve_ptas, PtasConfig, PtasDiagnostics};
use mrf_ptas::solver::{with_workers, ExactSolver};
use serde::Serialize;

use crate::failure::{internal, read_text, usage, write_atomic, write_json, CmdResult, Stage};
use crate::{SolveArgs, SolverOpts};

#[derive(Debug, Serialize)]
struct Verification {
    oracle: f64,
    required: f64,
    passed: bool,
}

#[derive(Debug, Serialize)]
struct Report {
    mode: &'static str,
    score: f64,
    shift_offset: Option<f64>,
    epsilon: Option<f64>,
    width: usize,
    solve_ms: f64,
    ptas: Option<PtasDiagnostics>,
    verification: Option<Verification>,
}

pub fn ptas_config(opts: &SolverOpts) -> CmdResult<PtasConfig> {
    let mut cfg = PtasConfig::from_epsilon(opts.epsilon).stage("choosing k")?.width_cap(opts.width_cap).workers(opts.workers);
    if let Some(r) = opts.root {
        cfg = cfg.root(r);
    }
    Ok(cfg)
}

/// Narrowest of the available builders; the grid band is tried with a
/// depth covering the whole graph so it never refuses.
fn whole_graph_decomposition(inst: &MrfInstance) -> CmdResult<BranchDecomposition> {
    let g = inst.graph();
    if g.num_edges() == 0 {
        return Ok(BranchDecomposition::from_parts(Vec::new(), Vec::new()));
    }
    let mut best = build_heuristic(g).stage("building a branch decomposition")?;
    if g.coords().is_some() {
        let band = build_grid_band(g, g.num_vertices()).stage("building a grid-band decomposition")?;
        if band.width(g) < best.width(g) {
            best = band;
        }
    }
    Ok(best)
}

fn dump(d: &BranchDecomposition) -> DecompositionDump {
    if d.num_nodes() >= 2 {
        return d.root(0).dump();
    }
    DecompositionDump {
        root: 0,
        parent: vec![None; d.num_nodes()],
        leaf_edge: (0..d.num_nodes()).map(|n| d.leaf_edge(n)).collect(),
    }
}

pub fn run(args: SolveArgs) -> CmdResult {
    if args.dump_decomp.is_some() && !args.exact {
        return Err(usage("--dump-decomp needs --exact"));
    }
    if args.csv.is_some() && args.exact {
        return Err(usage("--csv reports PTAS slabs and cannot be combined with --exact"));
    }
    let original = ModelFile::parse(&read_text(&args.model)?).stage("parsing the model")?;

    let (instance, offset) = if args.shift {
        let (s, off) = shift_nonnegative(&original);
        println!("shift offset {off}");
        (s, Some(off))
    } else {
        (original.clone(), None)
    };

    let started = Instant::now();
    let (assignment, width, diagnostics) = if args.exact {
        let d = whole_graph_decomposition(&instance)?;
        if let Some(path) = &args.dump_decomp {
            write_json(path, &dump(&d))?;
        }
        let solver = ExactSolver { width_cap: args.opts.width_cap, ..ExactSolver::default() };
        let s = with_workers(args.opts.workers, || solver.solve(&instance, &d)).and_then(|r| r).stage("exact solve")?;
        (s.assignment, s.width, None)
    } else {
        if !instance.is_nonnegative() {
            return Err(usage(
                "the approximation guarantee needs every phi and psi entry to be >= 0; \
                 rerun with --shift to subtract each table's minimum first",
            ));
        }
        let cfg = ptas_config(&args.opts)?;
        let s = solve_ptas(&instance, &cfg).stage("PTAS solve")?;
        let width = s.diagnostics.max_width();
        (s.assignment, width, Some(s.diagnostics))
    };
    let solve_ms = started.elapsed().as_secs_f64() * 1e3;
    let score = mrf_ptas::evaluate(&original, &assignment).stage("scoring the result")?;

    let verification = if args.verify { Some(verify(&original, score, &args)?) } else { None };

    write_json(&args.out, &AssignmentFile::from_assignment(&assignment))?;
    if let (Some(path), Some(d)) = (&args.csv, &diagnostics) {
        write_atomic(path, d.to_csv().as_bytes())?;
    }
    let report = Report {
        mode: if args.exact { "exact" } else { "ptas" },
        score,
        shift_offset: offset,
        epsilon: (!args.exact).then_some(args.opts.epsilon),
        width,
        solve_ms,
        ptas: diagnostics,
        verification,
    };
    let diag_path = args.diagnostics.clone().unwrap_or_else(|| sibling(&args.out, "diag.json"));
    write_json(&diag_path, &report)?;

    println!("score {score}");
    println!("width {width}");
    if let Some(v) = &report.verification {
        println!("oracle {} (required {}): {}", v.oracle, v.required, if v.passed { "ok" } else { "FAILED" });
        if !v.passed {
            return Err(internal("result does not meet the verified bound"));
        }
    }
    Ok(())
}

fn verify(original: &MrfInstance, score: f64, args: &SolveArgs) -> CmdResult<Verification> {
    let (_, oracle) = brute_force_solve(original).stage("brute-force verification")?;
    let required = if args.exact {
        oracle
    } else {
        // the guarantee is on the shifted objective, which differs by the offset
        let offset = if args.shift { shift_nonnegative(original).1 } else { 0.0 };
        (1.0 - args.opts.epsilon) * (oracle - offset) + offset
    };
    Ok(Verification { oracle, required, passed: score >= required - 1e-9 * required.abs().max(1.0) })
}

pub fn sibling(path: &std::path::Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}
