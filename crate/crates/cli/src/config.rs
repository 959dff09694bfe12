//! Experiment configuration: one JSON document per experiment. Every default
//! (x₀ all-ones, the r̄ formula, c = 2√2) is materialized into the resolved
//! form that gets echoed into the summary, so artifacts are self-describing
//! and replayable.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

use dada::problems::{FirstOrderOracle, Problem, ProblemSpec};
use dada::solvers::{default_rbar, DadaConfig, DogConfig, WdaConfig};
use dada::{FeasibleSet, NormContext};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemSpec,
    pub solvers: Vec<SolverSpec>,
    pub budget: usize,
    /// `"ones"` (the default) or an explicit coordinate vector.
    #[serde(default)]
    pub x0: X0Policy,
    /// Fallback r̄ for solvers that take one; absent means `10⁻⁶(1 + ‖x₀‖)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rbar: Option<f64>,
    /// Fallback schedule constant; absent means `2√2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feasible_set: Option<FeasibleSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub retain_full: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum X0Policy {
    Preset(String),
    Explicit(Vec<f64>),
}

impl Default for X0Policy {
    fn default() -> Self {
        X0Policy::Preset("ones".to_string())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SolverSpec {
    Dada {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rbar: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        c: Option<f64>,
    },
    Wda {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        d0_estimate: Option<f64>,
    },
    SimplifiedDog {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rbar: Option<f64>,
    },
}

/// One fully resolved solver cell, ready to run.
pub enum SolverRun {
    Dada(DadaConfig),
    Wda(WdaConfig),
    Dog(DogConfig),
}

impl SolverRun {
    pub fn kind_label(&self) -> &'static str {
        match self {
            SolverRun::Dada(_) => "dada",
            SolverRun::Wda(_) => "wda",
            SolverRun::Dog(_) => "simplified-dog",
        }
    }

    /// The explicit spec this run corresponds to, for the summary echo.
    pub fn resolved_spec(&self) -> SolverSpec {
        match self {
            SolverRun::Dada(cfg) => SolverSpec::Dada { rbar: Some(cfg.rbar), c: Some(cfg.c) },
            SolverRun::Wda(cfg) => SolverSpec::Wda { d0_estimate: Some(cfg.d0_estimate) },
            SolverRun::Dog(cfg) => SolverSpec::SimplifiedDog { rbar: Some(cfg.rbar) },
        }
    }
}

pub struct ResolvedExperiment {
    pub problem: Problem,
    pub ctx: NormContext,
    pub set: FeasibleSet,
    /// (file label, run) pairs; labels are unique even with repeated kinds.
    pub cells: Vec<(String, SolverRun)>,
    /// The config with every default filled in, echoed into the summary.
    pub echo: ExperimentConfig,
}

impl ExperimentConfig {
    pub fn resolve(&self) -> Result<ResolvedExperiment> {
        if self.solvers.is_empty() {
            bail!("config lists no solvers");
        }
        if self.budget == 0 {
            bail!("budget must be at least 1");
        }
        let problem = self.problem.build().context("building problem instance")?;
        let d = problem.dim();
        let ctx = NormContext::identity(d);
        let x0 = match &self.x0 {
            X0Policy::Preset(name) if name == "ones" => vec![1.0; d],
            X0Policy::Preset(name) => bail!("unknown x0 preset {name:?}; expected \"ones\""),
            X0Policy::Explicit(v) => {
                if v.len() != d {
                    bail!("x0 has length {}, problem dimension is {d}", v.len());
                }
                v.clone()
            }
        };
        let set = self.feasible_set.clone().unwrap_or(FeasibleSet::WholeSpace);
        set.validate(&ctx).context("validating feasible set")?;

        let x0_norm = ctx.primal_norm(&x0)?;
        let rbar_fallback = self.rbar.unwrap_or_else(|| default_rbar(x0_norm));
        let c_fallback = self.c.unwrap_or(DadaConfig::OPTIMAL_C);

        let mut cells = Vec::with_capacity(self.solvers.len());
        for spec in &self.solvers {
            let run = match spec {
                SolverSpec::Dada { rbar, c } => SolverRun::Dada(
                    DadaConfig::new(rbar.unwrap_or(rbar_fallback), self.budget, x0.clone())?
                        .with_c(c.unwrap_or(c_fallback))?,
                ),
                SolverSpec::Wda { d0_estimate } => SolverRun::Wda(WdaConfig::new(
                    d0_estimate.unwrap_or(x0_norm),
                    self.budget,
                    x0.clone(),
                )?),
                SolverSpec::SimplifiedDog { rbar } => SolverRun::Dog(DogConfig::new(
                    rbar.unwrap_or(rbar_fallback),
                    self.budget,
                    x0.clone(),
                )?),
            };
            cells.push(run);
        }

        // Unique file labels: kind, then kind-2, kind-3 for repeats.
        let mut labeled = Vec::with_capacity(cells.len());
        for (i, run) in cells.into_iter().enumerate() {
            let base = run.kind_label();
            let repeats = self.solvers[..i]
                .iter()
                .filter(|s| kind_of(s) == base)
                .count();
            let label = if repeats == 0 {
                base.to_string()
            } else {
                format!("{base}-{}", repeats + 1)
            };
            labeled.push((label, run));
        }

        let echo = ExperimentConfig {
            problem: self.problem.clone(),
            solvers: labeled.iter().map(|(_, run)| run.resolved_spec()).collect(),
            budget: self.budget,
            x0: X0Policy::Explicit(x0.clone()),
            rbar: None,
            c: None,
            feasible_set: Some(set.clone()),
            output_dir: self.output_dir.clone(),
            retain_full: self.retain_full,
        };

        Ok(ResolvedExperiment { problem, ctx, set, cells: labeled, echo })
    }
}

fn kind_of(spec: &SolverSpec) -> &'static str {
    match spec {
        SolverSpec::Dada { .. } => "dada",
        SolverSpec::Wda { .. } => "wda",
        SolverSpec::SimplifiedDog { .. } => "simplified-dog",
    }
}

/// f* for the resolved problem, when the construction pins one down.
pub fn known_fstar(problem: &Problem) -> Option<f64> {
    problem.known_optimum()
}
