//! `doap`: generate instances, decide thresholds, solve, and check the
//! solver against the brute-force oracle.

mod trials;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use doap::instances::{generate, read_instance, to_json, Family, GeneratorSpec};
use doap::oracle::{brute_profile, brute_solve_capped, DEFAULT_ORACLE_CAP};
use doap::{decide, solve, Path64};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "doap",
    version,
    about = "Best single edge to add to a metric path"
)]
struct Cli {
    /// Print one JSON report on stdout instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Is some edge good enough for diameter LAMBDA? Exit 0 if so, 1 if not.
    Decide {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        lambda: f64,
    },
    /// Optimal diameter and an edge attaining it.
    Solve {
        #[command(flatten)]
        input: Input,
    },
    /// Brute-force optimum (refuses n above DOAP_ORACLE_CAP, default 200).
    Oracle {
        #[command(flatten)]
        input: Input,
    },
    /// Solve random instances and compare with the oracle; CSV per trial.
    Verify(trials::VerifyArgs),
    /// Time the solver on random Euclidean instances; CSV per size.
    Bench(trials::BenchArgs),
}

#[derive(Args)]
struct Input {
    /// Instance JSON file.
    file: PathBuf,
    /// Also check the triangle inequality, O(n^3).
    #[arg(long)]
    check_triangle: bool,
}

#[derive(Args)]
struct GenArgs {
    /// One of euclidean_uniform, collinear, convex_polygon, clustered,
    /// random_metric.
    #[arg(long)]
    kind: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long)]
    side: Option<f64>,
    #[arg(long)]
    spacing: Option<f64>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    jitter: Option<f64>,
    #[arg(long)]
    clusters: Option<usize>,
    #[arg(long)]
    spread: Option<f64>,
    #[arg(long)]
    max_weight: Option<f64>,
    #[arg(long)]
    integral: bool,
    #[arg(long)]
    offset: Option<f64>,
}

pub(crate) type CliResult<T> = Result<T, String>;

/// Exit code plus what to print: a JSON report and its text rendering.
pub(crate) struct Report {
    code: u8,
    json: Value,
    text: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let written = if json {
                writeln!(out, "{}", report.json)
            } else {
                write!(out, "{}", report.text)
            };
            // A closed pipe is not worth a panic.
            let _ = written.and_then(|_| out.flush());
            ExitCode::from(report.code)
        }
        Err(msg) => {
            eprintln!("doap: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> CliResult<Report> {
    match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Decide { input, lambda } => cmd_decide(&input, lambda),
        Command::Solve { input } => cmd_solve(&input),
        Command::Oracle { input } => cmd_oracle(&input),
        Command::Verify(args) => trials::cmd_verify(args, cli.json),
        Command::Bench(args) => trials::cmd_bench(args, cli.json),
    }
}

fn load(input: &Input) -> CliResult<Path64> {
    read_instance(&input.file, input.check_triangle).map_err(|e| e.to_string())
}

fn instance_digest(file: &Path, path: &Path64) -> Value {
    json!({ "file": file.display().to_string(), "n": path.n(), "kind": path.kind() })
}

fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("reports serialise")
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

pub(crate) fn oracle_cap() -> CliResult<usize> {
    match std::env::var("DOAP_ORACLE_CAP") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| format!("DOAP_ORACLE_CAP must be a non-negative integer, got `{s}`")),
        Err(_) => Ok(DEFAULT_ORACLE_CAP),
    }
}

fn family_from(args: &GenArgs) -> CliResult<Family> {
    let mut family = Family::by_name(&args.kind).map_err(|e| e.to_string())?;
    let mut used = Vec::new();
    let mut set = |slot: &mut f64, name: &'static str, v: Option<f64>| {
        if let Some(v) = v {
            *slot = v;
            used.push(name);
        }
    };
    match &mut family {
        Family::EuclideanUniform { side } => set(side, "side", args.side),
        Family::Collinear { spacing } => set(spacing, "spacing", args.spacing),
        Family::ConvexPolygon { radius, jitter } => {
            set(radius, "radius", args.radius);
            set(jitter, "jitter", args.jitter);
        }
        Family::Clustered {
            clusters,
            side,
            spread,
        } => {
            set(side, "side", args.side);
            set(spread, "spread", args.spread);
            if let Some(c) = args.clusters {
                *clusters = c;
                used.push("clusters");
            }
        }
        Family::RandomMetric {
            max_weight,
            integral,
            offset,
        } => {
            set(max_weight, "max-weight", args.max_weight);
            set(offset, "offset", args.offset);
            if args.integral {
                *integral = true;
                used.push("integral");
            }
        }
    }
    let given = [
        ("side", args.side.is_some()),
        ("spacing", args.spacing.is_some()),
        ("radius", args.radius.is_some()),
        ("jitter", args.jitter.is_some()),
        ("clusters", args.clusters.is_some()),
        ("spread", args.spread.is_some()),
        ("max-weight", args.max_weight.is_some()),
        ("integral", args.integral),
        ("offset", args.offset.is_some()),
    ];
    if let Some((name, _)) = given.iter().find(|(name, on)| *on && !used.contains(name)) {
        return Err(format!("--{name} does not apply to {}", args.kind));
    }
    Ok(family)
}

fn cmd_gen(args: GenArgs) -> CliResult<Report> {
    let start = Instant::now();
    let spec = GeneratorSpec {
        family: family_from(&args)?,
        n: args.n,
        dim: args.dim,
        seed: args.seed,
    };
    let path = generate(&spec).map_err(|e| e.to_string())?;
    let body = to_json(&path);
    let (json, text) = match &args.out {
        Some(file) => {
            std::fs::write(file, format!("{body}\n"))
                .map_err(|e| format!("{}: {e}", file.display()))?;
            let json = json!({
                "command": "gen",
                "spec": to_value(&spec),
                "instance": instance_digest(file, &path),
                "wall_ms": ms(start),
            });
            (
                json,
                format!(
                    "wrote {} ({} n = {})\n",
                    file.display(),
                    spec.family.name(),
                    path.n()
                ),
            )
        }
        // The instance itself is the output.
        None => {
            let json: Value = serde_json::from_str(&body).expect("instance JSON");
            (json, format!("{body}\n"))
        }
    };
    Ok(Report {
        code: 0,
        json,
        text,
    })
}

fn cmd_decide(input: &Input, lambda: f64) -> CliResult<Report> {
    let path = load(input)?;
    let start = Instant::now();
    let out = decide(&path, lambda).map_err(|e| e.to_string())?;
    let wall_ms = ms(start);
    let feasible = out.feasible();
    let text = match out.witness {
        Some(e) => format!(
            "feasible at lambda = {lambda}: witness ({}, {})\n",
            e.i, e.j
        ),
        None => format!("infeasible at lambda = {lambda}\n"),
    };
    let json = json!({
        "command": "decide",
        "instance": instance_digest(&input.file, &path),
        "result": { "lambda": lambda, "feasible": feasible, "witness": out.witness },
        "stats": { "tests": out.tests },
        "wall_ms": wall_ms,
    });
    Ok(Report {
        code: if feasible { 0 } else { 1 },
        json,
        text,
    })
}

fn cmd_solve(input: &Input) -> CliResult<Report> {
    let path = load(input)?;
    let start = Instant::now();
    let r = solve(&path);
    let wall_ms = ms(start);
    let text = format!(
        "lambda* = {} with edge ({}, {})\ndecide calls {}, matrix evaluations {}, {wall_ms:.3} ms\n",
        r.lambda_star, r.edge.i, r.edge.j, r.stats.decision_calls, r.stats.matrix_evaluations
    );
    let json = json!({
        "command": "solve",
        "instance": instance_digest(&input.file, &path),
        "result": {
            "lambda_star": r.lambda_star,
            "edge": r.edge,
            "lambda_alpha": r.lambda_alpha,
            "lambda_beta": r.lambda_beta,
            "lambda_delta": r.lambda_delta,
            "lambda_1": r.lambda_1,
            "lambda_p": r.lambda_p,
            "lambda_prime": r.lambda_prime,
        },
        "stats": to_value(&r.stats),
        "wall_ms": wall_ms,
    });
    Ok(Report {
        code: 0,
        json,
        text,
    })
}

fn cmd_oracle(input: &Input) -> CliResult<Report> {
    let path = load(input)?;
    let cap = oracle_cap()?;
    let start = Instant::now();
    let (lambda, edge) = brute_solve_capped(&path, cap).map_err(|e| e.to_string())?;
    let profile = brute_profile(&path, edge).map_err(|e| e.to_string())?;
    let wall_ms = ms(start);
    let text = format!(
        "oracle lambda* = {lambda} with edge ({}, {})\n",
        edge.i, edge.j
    );
    let json = json!({
        "command": "oracle",
        "instance": instance_digest(&input.file, &path),
        "result": { "lambda_star": lambda, "edge": edge, "profile": to_value(&profile) },
        "stats": { "cap": cap },
        "wall_ms": wall_ms,
    });
    Ok(Report {
        code: 0,
        json,
        text,
    })
}
