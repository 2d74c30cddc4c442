//! `verify` and `bench`: many generated instances, one CSV row each.

use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use doap::instances::{generate, Family, GeneratorSpec, SplitMix64};
use doap::oracle::{brute_profile, brute_solve_capped};
use doap::solve;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::{oracle_cap, CliResult, Report};

/// Relative agreement required between solver and oracle.
pub const VERIFY_TOL: f64 = 1e-9;

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Sizes are drawn uniformly from 2..=N.
    #[arg(long, default_value_t = 30)]
    n_max: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the per-trial CSV here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
pub struct BenchArgs {
    /// Comma-separated instance sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the CSV here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct TrialRow {
    trial: usize,
    kind: &'static str,
    n: usize,
    seed: u64,
    solve_lambda: f64,
    oracle_lambda: f64,
    edge_i: usize,
    edge_j: usize,
    /// Oracle diameter of the solver's edge.
    edge_diameter: f64,
    agree: bool,
}

const TRIAL_HEADER: &str =
    "trial,kind,n,seed,solve_lambda,oracle_lambda,edge_i,edge_j,edge_diameter,agree";

impl TrialRow {
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.trial,
            self.kind,
            self.n,
            self.seed,
            self.solve_lambda,
            self.oracle_lambda,
            self.edge_i,
            self.edge_j,
            self.edge_diameter,
            self.agree
        )
    }
}

/// Parameters with no engineered ties: jittered polygons, offset metrics.
fn verify_family(kind: &str) -> Family {
    match kind {
        "euclidean_uniform" => Family::EuclideanUniform { side: 10.0 },
        "collinear" => Family::Collinear { spacing: 1.5 },
        "convex_polygon" => Family::ConvexPolygon {
            radius: 3.0,
            jitter: 0.6,
        },
        "clustered" => Family::Clustered {
            clusters: 3,
            side: 10.0,
            spread: 0.8,
        },
        _ => Family::RandomMetric {
            max_weight: 10.0,
            integral: false,
            offset: 1.5,
        },
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= VERIFY_TOL * a.abs().max(b.abs()).max(1.0)
}

fn run_trial(
    trial: usize,
    kind: &'static str,
    n: usize,
    seed: u64,
    cap: usize,
) -> CliResult<TrialRow> {
    let spec = GeneratorSpec {
        family: verify_family(kind),
        n,
        dim: 2,
        seed,
    };
    let path = generate(&spec).map_err(|e| format!("trial {trial}: {e}"))?;
    let r = solve(&path);
    let (oracle_lambda, _) =
        brute_solve_capped(&path, cap).map_err(|e| format!("trial {trial}: {e}"))?;
    let edge_diameter = brute_profile(&path, r.edge)
        .map_err(|e| e.to_string())?
        .diameter;
    Ok(TrialRow {
        trial,
        kind,
        n,
        seed,
        solve_lambda: r.lambda_star,
        oracle_lambda,
        edge_i: r.edge.i,
        edge_j: r.edge.j,
        edge_diameter,
        agree: close(r.lambda_star, oracle_lambda) && close(edge_diameter, r.lambda_star),
    })
}

fn write_csv(file: &Option<PathBuf>, body: &str) -> CliResult<()> {
    match file {
        Some(f) => std::fs::write(f, body).map_err(|e| format!("{}: {e}", f.display())),
        None => Ok(()),
    }
}

pub fn cmd_verify(args: VerifyArgs, json: bool) -> CliResult<Report> {
    let cap = oracle_cap()?;
    if args.n_max < 2 {
        return Err(format!("--n-max must be at least 2, got {}", args.n_max));
    }
    if args.n_max > cap {
        return Err(format!(
            "--n-max {} exceeds the oracle cap {cap} (DOAP_ORACLE_CAP)",
            args.n_max
        ));
    }
    let start = Instant::now();
    let mut rng = SplitMix64::new(args.seed);
    let plan: Vec<(usize, &'static str, usize, u64)> = (0..args.trials)
        .map(|t| {
            let n = 2 + rng.below(args.n_max as u64 - 1) as usize;
            (t, Family::KINDS[t % Family::KINDS.len()], n, rng.next_u64())
        })
        .collect();
    let rows = plan
        .into_par_iter()
        .map(|(t, kind, n, seed)| run_trial(t, kind, n, seed, cap))
        .collect::<CliResult<Vec<_>>>()?;

    let disagree = rows.iter().filter(|r| !r.agree).count();
    let mut csv = String::from(TRIAL_HEADER);
    csv.push('\n');
    for r in &rows {
        csv.push_str(&r.csv());
        csv.push('\n');
    }
    write_csv(&args.csv, &csv)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    if !json {
        eprintln!(
            "verify: {} trials, {} agree, {disagree} disagree ({wall_ms:.0} ms)",
            rows.len(),
            rows.len() - disagree
        );
    }
    let report = json!({
        "command": "verify",
        "params": { "trials": args.trials, "n_max": args.n_max, "seed": args.seed, "tolerance": VERIFY_TOL },
        "result": { "agree": rows.len() - disagree, "disagree": disagree, "all_agree": disagree == 0 },
        "trials": rows,
        "wall_ms": wall_ms,
    });
    Ok(Report {
        code: if disagree == 0 { 0 } else { 1 },
        json: report,
        text: csv,
    })
}

#[derive(Debug, Serialize)]
struct BenchRow {
    size: usize,
    /// Median over the repetitions.
    time_ms: f64,
    decision_calls: usize,
    evals: usize,
}

pub fn cmd_bench(args: BenchArgs, json: bool) -> CliResult<Report> {
    if args.reps == 0 {
        return Err("--reps must be at least 1".into());
    }
    let start = Instant::now();
    let mut rows = Vec::new();
    // Sequential on purpose: parallel runs would disturb the timings.
    for &size in &args.sizes {
        let spec = GeneratorSpec {
            family: Family::EuclideanUniform { side: 1.0 },
            n: size,
            dim: 2,
            seed: args.seed,
        };
        let path = generate(&spec).map_err(|e| e.to_string())?;
        let mut times = Vec::with_capacity(args.reps);
        let mut last = None;
        for _ in 0..args.reps {
            let t = Instant::now();
            let r = solve(&path);
            times.push(t.elapsed().as_secs_f64() * 1e3);
            last = Some(r.stats);
        }
        times.sort_by(f64::total_cmp);
        let stats = last.expect("reps >= 1");
        let row = BenchRow {
            size,
            time_ms: times[times.len() / 2],
            decision_calls: stats.decision_calls,
            evals: stats.matrix_evaluations,
        };
        if !json {
            eprintln!("bench: n = {size} median {:.3} ms", row.time_ms);
        }
        rows.push(row);
    }
    let mut csv = String::from("size,time_ms,decision_calls,evals\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            r.size, r.time_ms, r.decision_calls, r.evals
        ));
    }
    write_csv(&args.csv, &csv)?;
    let report = json!({
        "command": "bench",
        "params": { "sizes": args.sizes, "reps": args.reps, "seed": args.seed, "kind": "euclidean_uniform", "dim": 2 },
        "result": rows,
        "wall_ms": start.elapsed().as_secs_f64() * 1e3,
    });
    Ok(Report {
        code: 0,
        json: report,
        text: csv,
    })
}
