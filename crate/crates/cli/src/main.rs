//! Command-line harness: run experiments, verify the inequality layer, merge
//! traces into plot data, and emit problem instances.
//!
//! Exit codes: 0 success; 1 a solver hit a numeric failure or a verification
//! check failed; 2 invalid input (config, unknown check, schema mismatch).

mod config;
mod plotcmd;
mod runcmd;
mod verifycmd;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use config::ExperimentConfig;
use dada::ProblemSpec;

#[derive(Parser)]
#[command(name = "dada", version, about = "Parameter-free convex optimization experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute every (problem, solver) cell of an experiment config
    Run {
        /// Path to the experiment JSON
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides the config's output_dir)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Retain all iterates and subgradients (desk scale only)
        #[arg(long)]
        retain_full: bool,
    },
    /// Numerically check the inequality and complexity layer
    Verify {
        /// Run a single named check instead of the whole suite
        #[arg(long)]
        check: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Merge trace CSVs into long-format plot data plus a quick-look SVG
    Plotdata {
        /// Trace CSV files
        #[arg(required = true)]
        traces: Vec<PathBuf>,
        /// Output CSV path (the SVG lands next to it)
        #[arg(long)]
        out: PathBuf,
        /// Known optimal value; when given, residuals are plotted
        #[arg(long)]
        fstar: Option<f64>,
    },
    /// Emit a problem instance JSON without solving
    Gen {
        /// Problem spec: inline JSON or a path to a JSON file
        #[arg(long)]
        problem: String,
        /// Override the spec's generation seed
        #[arg(long)]
        seed: Option<u64>,
        /// Output path (stdout when absent)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<u8> {
    match command {
        Command::Run { config, out, retain_full } => {
            let text = fs::read_to_string(&config)
                .with_context(|| format!("reading config {}", config.display()))?;
            // serde_json reports line/column on failure.
            let parsed: ExperimentConfig = serde_json::from_str(&text)
                .with_context(|| format!("parsing config {}", config.display()))?;
            let resolved = parsed.resolve()?;
            let out_dir = out
                .or_else(|| parsed.output_dir.clone())
                .unwrap_or_else(|| PathBuf::from("dada-out"));
            let retain = retain_full || parsed.retain_full;
            let code = runcmd::execute(&resolved, &out_dir, retain)?;
            Ok(code as u8)
        }
        Command::Verify { check, seed } => {
            let reports = verifycmd::run_checks(check.as_deref(), seed)?;
            let mut all_pass = true;
            for report in &reports {
                all_pass &= report.pass;
                eprintln!(
                    "{:20} {}  max violation {:.3e}  ({:.2}s)  {}",
                    report.name,
                    if report.pass { "PASS" } else { "FAIL" },
                    report.max_violation,
                    report.runtime_s,
                    report.detail
                );
            }
            let summary = runcmd::RunSummary {
                config: serde_json::json!({
                    "scope": check.as_deref().unwrap_or("all"),
                    "seed": seed,
                }),
                results: Vec::new(),
                checks: reports,
                fingerprint: runcmd::fingerprint(Some(seed)),
            };
            println!("{}", serde_json::to_string_pretty(&summary)?);
            Ok(if all_pass { 0 } else { 1 })
        }
        Command::Plotdata { traces, out, fstar } => {
            plotcmd::execute(&traces, &out, fstar)?;
            Ok(0)
        }
        Command::Gen { problem, seed, out } => {
            let text = if problem.trim_start().starts_with('{') {
                problem
            } else {
                fs::read_to_string(&problem)
                    .with_context(|| format!("reading problem spec {problem}"))?
            };
            let mut spec: ProblemSpec =
                serde_json::from_str(&text).context("parsing problem spec")?;
            if let Some(seed) = seed {
                match &mut spec {
                    ProblemSpec::Softmax { seed: s, .. }
                    | ProblemSpec::Polyhedron { seed: s, .. } => *s = seed,
                    ProblemSpec::WorstCase { .. } | ProblemSpec::Quadratic { .. } => {
                        bail!("--seed given, but {} instances are not randomized", spec.kind_name())
                    }
                }
            }
            let instance = spec.build().context("generating instance")?;
            let json = serde_json::to_string_pretty(&instance)?;
            match out {
                Some(path) => fs::write(&path, json)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => println!("{json}"),
            }
            Ok(0)
        }
    }
}
