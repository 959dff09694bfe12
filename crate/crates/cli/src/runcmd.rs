//! `dada run`: execute every (problem, solver) cell of a config, writing one
//! trace CSV per solver, a combined plot-data CSV, and a self-describing
//! summary JSON.

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use dada::solvers::{run_dada, run_dog_simplified, run_wda, RunOptions, Termination};
use dada::RunTrace;

use crate::config::{known_fstar, ResolvedExperiment, SolverRun};

#[derive(Debug, Serialize, Deserialize)]
pub struct RunSummary {
    pub config: serde_json::Value,
    pub results: Vec<SolverResult>,
    pub checks: Vec<CheckReport>,
    pub fingerprint: Fingerprint,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SolverResult {
    pub solver: String,
    pub best_f: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_f_minus_fstar: Option<f64>,
    pub oracle_calls: usize,
    pub termination: Termination,
    pub wall_time_s: f64,
    pub trace_file: String,
    pub v_clamp_count: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    pub max_violation: f64,
    pub runtime_s: f64,
    pub detail: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Fingerprint {
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

pub fn fingerprint(seed: Option<u64>) -> Fingerprint {
    Fingerprint { version: env!("CARGO_PKG_VERSION").to_string(), seed }
}

fn problem_seed(spec: &dada::ProblemSpec) -> Option<u64> {
    match *spec {
        dada::ProblemSpec::Softmax { seed, .. } | dada::ProblemSpec::Polyhedron { seed, .. } => {
            Some(seed)
        }
        _ => None,
    }
}

/// Run all cells and write artifacts. Returns the process exit code:
/// 0 on success, 1 when any solver hit a numeric failure (partial artifacts
/// are still written).
pub fn execute(exp: &ResolvedExperiment, out_dir: &Path, retain_full: bool) -> Result<i32> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let opts = RunOptions { retain_full };

    // Cells share nothing mutable; run them concurrently.
    let outcomes: Vec<(String, Result<(RunTrace, f64)>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = exp
            .cells
            .iter()
            .map(|(label, run)| {
                let label = label.clone();
                scope.spawn(move || {
                    let started = Instant::now();
                    let trace = match run {
                        SolverRun::Dada(cfg) => {
                            run_dada(&exp.problem, &exp.ctx, &exp.set, cfg, opts)
                        }
                        SolverRun::Wda(cfg) => run_wda(&exp.problem, &exp.ctx, &exp.set, cfg, opts),
                        SolverRun::Dog(cfg) => {
                            run_dog_simplified(&exp.problem, &exp.ctx, &exp.set, cfg, opts)
                        }
                    };
                    let elapsed = started.elapsed().as_secs_f64();
                    (label, trace.map(|t| (t, elapsed)).map_err(Into::into))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("solver thread panicked")).collect()
    });

    let fstar = known_fstar(&exp.problem);
    let mut results = Vec::new();
    let mut traces = Vec::new();
    let mut failed = false;
    for (label, outcome) in outcomes {
        let (trace, wall_time_s) = outcome.with_context(|| format!("running {label}"))?;
        let trace_file = format!("trace_{label}.csv");
        let mut writer = BufWriter::new(
            File::create(out_dir.join(&trace_file))
                .with_context(|| format!("creating {trace_file}"))?,
        );
        trace.write_csv(&mut writer)?;
        writer.flush()?;
        if trace.termination == Termination::NumericFailure {
            failed = true;
        }
        results.push(SolverResult {
            solver: label.clone(),
            best_f: trace.best_value,
            best_f_minus_fstar: fstar.map(|f| trace.best_value - f),
            oracle_calls: trace.oracle_calls(),
            termination: trace.termination,
            wall_time_s,
            trace_file,
            v_clamp_count: trace.v_clamp_count,
        });
        traces.push((label, trace));
    }

    write_plotdata(&traces, fstar, &out_dir.join("plotdata.csv"))?;

    let summary = RunSummary {
        config: serde_json::to_value(&exp.echo)?,
        results,
        checks: Vec::new(),
        fingerprint: fingerprint(problem_seed(&exp.echo.problem)),
    };
    let file = File::create(out_dir.join("summary.json"))?;
    serde_json::to_writer_pretty(BufWriter::new(file), &summary)?;

    Ok(if failed { 1 } else { 0 })
}

/// Long-format CSV of the best-value curves: `solver,k,best_f_minus_fstar`
/// when f* is known, `solver,k,best_f` otherwise.
fn write_plotdata(traces: &[(String, RunTrace)], fstar: Option<f64>, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    match fstar {
        Some(f) => {
            writeln!(w, "solver,k,best_f_minus_fstar")?;
            for (label, trace) in traces {
                for k in 0..trace.len() {
                    writeln!(w, "{label},{k},{}", trace.best_f[k] - f)?;
                }
            }
        }
        None => {
            writeln!(w, "solver,k,best_f")?;
            for (label, trace) in traces {
                for k in 0..trace.len() {
                    writeln!(w, "{label},{k},{}", trace.best_f[k])?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}
