//! Command line front end for the pdo-core toolkit.
//!
//! Exit codes: 0 on success, 1 on usage or computation errors, 2 when a
//! verification run completes but a check fails.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use pdo_core::{
    cp_constraint, estimate_chain, run_verification, teleport, theory_curve, BlochVector,
    ChainMode, ChannelParams, CurvePoint, DensityMatrix, Tolerances,
};

/// Environment variable consulted for the Monte Carlo seed when --seed is
/// not given.
const SEED_ENV: &str = "PDO_LAB_SEED";

#[derive(Parser)]
#[command(
    name = "pdo-lab",
    version,
    about = "Two-time pseudo-density operators, temporal teleportation, and chained Bell curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the built-in self checks.
    Verify(VerifyArgs),
    /// Send a qubit state through a contraction resource.
    Teleport(TeleportArgs),
    /// Tabulate chain statistics over a range of chain lengths.
    Curve(CurveArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Uniform numerical threshold for every check (default: per-check
    /// thresholds).
    #[arg(long)]
    tolerance: Option<f64>,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct TeleportArgs {
    /// Input Bloch vector, comma separated: X,Y,Z.
    #[arg(long)]
    bloch: String,
    /// Contraction coefficients, comma separated: EX,EY,EZ.
    #[arg(long)]
    eta: String,
    /// Projection branch, 1..=4.
    #[arg(long, default_value_t = 1)]
    projector: usize,
    /// Proceed even when the contraction is not completely positive.
    #[arg(long)]
    allow_non_cp: bool,
    /// Emit the outcome as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CurveArgs {
    /// Chain mode: spatial, temporal, or hybrid.
    #[arg(long)]
    mode: String,
    /// Smallest chain length.
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    /// Largest chain length.
    #[arg(long, default_value_t = 20)]
    n_max: usize,
    /// Singlet visibility for spatial terms.
    #[arg(long, default_value_t = 1.0)]
    visibility: f64,
    /// analytic (trace formulas) or montecarlo (sampled shots).
    #[arg(long, default_value = "analytic")]
    method: String,
    /// Shots per chain term for the montecarlo method.
    #[arg(long, default_value_t = 100_000)]
    shots: u64,
    /// RNG seed for the montecarlo method (default: $PDO_LAB_SEED, else 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(1);
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Verify(args) => run_verify(args),
        Command::Teleport(args) => run_teleport(args),
        Command::Curve(args) => run_curve(args),
    }
}

fn run_verify(args: VerifyArgs) -> Result<i32> {
    let tolerances = match args.tolerance {
        Some(t) => {
            if !t.is_finite() || t <= 0.0 {
                bail!("--tolerance must be a positive finite number, got {t}");
            }
            Tolerances::uniform(t)
        }
        None => Tolerances::default(),
    };
    let report = run_verification(&tolerances);
    if args.json {
        let checks: Vec<serde_json::Value> = report
            .checks
            .iter()
            .map(|c| {
                serde_json::json!({
                    "name": c.name,
                    "ok": c.ok,
                    "passed": c.passed,
                    "total": c.total,
                    "detail": c.detail,
                })
            })
            .collect();
        let doc = serde_json::json!({ "ok": report.all_ok(), "checks": checks });
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        for c in &report.checks {
            let status = if c.ok { "ok  " } else { "FAIL" };
            println!("{status} {:<28} {:>5}/{:<5} {}", c.name, c.passed, c.total, c.detail);
        }
    }
    Ok(if report.all_ok() { 0 } else { 2 })
}

fn parse_triple(text: &str, what: &str) -> Result<[f64; 3]> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        bail!("{what} must be three comma separated numbers, got `{text}`");
    }
    let mut out = [0.0; 3];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = f64::from_str(part.trim())
            .with_context(|| format!("{what}: `{part}` is not a number"))?;
    }
    Ok(out)
}

fn run_teleport(args: TeleportArgs) -> Result<i32> {
    let [x, y, z] = parse_triple(&args.bloch, "--bloch")?;
    let [ex, ey, ez] = parse_triple(&args.eta, "--eta")?;
    let bloch = BlochVector::new(x, y, z)?;
    let eta = ChannelParams::new(ex, ey, ez)?;
    if !cp_constraint(eta) {
        if args.allow_non_cp {
            eprintln!("warning: eta {eta} is not completely positive");
        } else {
            bail!("eta {eta} is not completely positive (pass --allow-non-cp to proceed)");
        }
    }
    let rho = DensityMatrix::from_bloch(bloch);
    let resource = pdo_core::channel_pdo(eta);
    let outcome = teleport(&rho, args.projector, &resource)?;
    let out = outcome.state.bloch();
    if args.json {
        let doc = serde_json::json!({
            "input": [x, y, z],
            "eta": [ex, ey, ez],
            "projector": args.projector,
            "weight": outcome.weight,
            "output": [out.x, out.y, out.z],
        });
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        println!("branch    {}", args.projector);
        println!("weight    {}", outcome.weight);
        println!("output    {},{},{}", out.x, out.y, out.z);
    }
    Ok(0)
}

fn format_curve(mode: ChainMode, method: &str, points: &[CurvePoint]) -> String {
    let mut csv = String::from("mode,n,method,S,delta_S,stderr\n");
    for p in points {
        writeln!(csv, "{mode},{},{method},{},{},{}", p.n, p.s, p.delta_s, p.stderr)
            .expect("writing to a String cannot fail");
    }
    csv
}

fn run_curve(args: CurveArgs) -> Result<i32> {
    let mode = ChainMode::from_str(&args.mode).map_err(anyhow::Error::msg)?;
    let points = match args.method.as_str() {
        "analytic" => theory_curve(mode, args.n_min, args.n_max, args.visibility)?,
        "montecarlo" => {
            let seed = match args.seed {
                Some(seed) => seed,
                None => match std::env::var(SEED_ENV) {
                    Ok(text) => u64::from_str(text.trim()).with_context(|| {
                        format!("{SEED_ENV}: `{text}` is not an unsigned integer")
                    })?,
                    Err(_) => 0,
                },
            };
            if args.n_min < 2 || args.n_max > 20 || args.n_min > args.n_max {
                // Surface the same range error the analytic path gets from
                // the curve constructor.
                theory_curve(mode, args.n_min, args.n_max, args.visibility)?;
            }
            let mut points = Vec::with_capacity(args.n_max - args.n_min + 1);
            for n in args.n_min..=args.n_max {
                let est = estimate_chain(mode, n, args.visibility, args.shots, seed)?;
                points.push(CurvePoint {
                    n,
                    s: est.s,
                    delta_s: est.delta_s,
                    stderr: est.stderr,
                });
            }
            points
        }
        other => bail!("unknown method `{other}` (expected analytic or montecarlo)"),
    };
    let csv = format_curve(mode, &args.method, &points);
    match &args.out {
        Some(path) => fs::write(path, csv)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => {
            std::io::stdout().write_all(csv.as_bytes()).context("cannot write to stdout")?;
        }
    }
    Ok(0)
}
