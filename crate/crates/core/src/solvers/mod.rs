//! The solvers: dual averaging with distance adaptation (DADA), the weighted
//! dual averaging baseline (WDA), and a simplified DoG-style baseline. Each
//! run produces a full [`RunTrace`].
//!
//! All three share one loop skeleton. At step `k` the current point `x_k` is
//! queried, the distance bookkeeping `r_k = ‖x_k - x₀‖`,
//! `r̄_k = max{r̄_{k-1}, r_k}` is updated, a row is recorded, and the next
//! point is produced:
//!
//! * DADA/WDA accumulate `s ← s + a_k g_k` and set
//!   `x_{k+1} = argmin_Q ⟨s, x⟩ + (β_{k+1}/2)‖x - x₀‖²`, with
//!   `a_k = r̄_k/‖g_k‖_*`, `β_k = c√(k+1)` for DADA and `a_k = D̂₀/‖g_k‖_*`,
//!   `β_k = √k` for WDA.
//! * The simplified DoG takes a projected gradient step with step size
//!   `r̄_k / √(Σ_{i≤k} ‖g_i‖_*²)`.
//!
//! An exactly (or numerically, below `1e-300`) zero subgradient means the
//! current point is optimal and the run stops as a success. A non-finite
//! oracle output stops the run with the partial trace preserved.

mod checks;
mod trace;

pub use checks::{check_coefficient_placing, check_da_convergence, check_r_upper_d, CheckError, RUpperDReport};
pub use trace::{Retained, RunTrace, SolverKind, Termination, TRACE_CSV_HEADER};

use thiserror::Error;

use crate::problems::FirstOrderOracle;
use crate::sets::{da_argmin, FeasibleSet, SetError};
use crate::space::{axpy, dot, sub, NormContext, SpaceError};
use crate::theory::v_from_parts;

use std::f64::consts::SQRT_2;

/// Dual norms below this trigger the zero-gradient exit; anything larger is
/// safe to divide by without overflowing `a_k`.
pub const ZERO_GRAD_TOL: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error("iteration budget must be at least 1")]
    ZeroBudget,
    #[error("rbar must be positive and finite, got {0}")]
    BadRbar(f64),
    #[error("c must strictly exceed sqrt(2), got {0}")]
    BadC(f64),
    #[error("d0 estimate must be positive and finite, got {0}")]
    BadD0Estimate(f64),
    #[error("x0 entry {0} is not finite")]
    NonFiniteStart(usize),
    #[error("x0 must not be empty")]
    EmptyStart,
    #[error("oracle dimension {oracle} does not match x0 length {x0}")]
    DimensionMismatch { oracle: usize, x0: usize },
}

/// The distance-guess policy of the experiments: `r̄ = 10⁻⁶ (1 + ‖x₀‖)`.
pub fn default_rbar(x0_norm: f64) -> f64 {
    1e-6 * (1.0 + x0_norm)
}

fn validate_start(budget: usize, x0: &[f64]) -> Result<(), SolverError> {
    if budget == 0 {
        return Err(SolverError::ZeroBudget);
    }
    if x0.is_empty() {
        return Err(SolverError::EmptyStart);
    }
    if let Some(i) = x0.iter().position(|v| !v.is_finite()) {
        return Err(SolverError::NonFiniteStart(i));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DadaConfig {
    /// Initial guess r̄ for the distance to the solution.
    pub rbar: f64,
    /// Schedule constant, strictly above √2. Defaults to the optimal 2√2.
    pub c: f64,
    pub budget: usize,
    pub x0: Vec<f64>,
}

impl DadaConfig {
    /// The constant minimizing the rate's leading factor.
    pub const OPTIMAL_C: f64 = 2.0 * SQRT_2;

    pub fn new(rbar: f64, budget: usize, x0: Vec<f64>) -> Result<Self, SolverError> {
        validate_start(budget, &x0)?;
        if !(rbar.is_finite() && rbar > 0.0) {
            return Err(SolverError::BadRbar(rbar));
        }
        Ok(DadaConfig { rbar, c: Self::OPTIMAL_C, budget, x0 })
    }

    pub fn with_c(mut self, c: f64) -> Result<Self, SolverError> {
        if !(c.is_finite() && c > SQRT_2) {
            return Err(SolverError::BadC(c));
        }
        self.c = c;
        Ok(self)
    }

    /// Bypass the `c > √2` validation. Exists so the verification suite can
    /// run negative controls; never use it to solve anything.
    #[doc(hidden)]
    pub fn with_c_unchecked(mut self, c: f64) -> Self {
        self.c = c;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WdaConfig {
    /// User guess of `D₀ = ‖x₀ - x*‖`.
    pub d0_estimate: f64,
    pub budget: usize,
    pub x0: Vec<f64>,
}

impl WdaConfig {
    pub fn new(d0_estimate: f64, budget: usize, x0: Vec<f64>) -> Result<Self, SolverError> {
        validate_start(budget, &x0)?;
        if !(d0_estimate.is_finite() && d0_estimate > 0.0) {
            return Err(SolverError::BadD0Estimate(d0_estimate));
        }
        Ok(WdaConfig { d0_estimate, budget, x0 })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DogConfig {
    pub rbar: f64,
    pub budget: usize,
    pub x0: Vec<f64>,
}

impl DogConfig {
    pub fn new(rbar: f64, budget: usize, x0: Vec<f64>) -> Result<Self, SolverError> {
        validate_start(budget, &x0)?;
        if !(rbar.is_finite() && rbar > 0.0) {
            return Err(SolverError::BadRbar(rbar));
        }
        Ok(DogConfig { rbar, budget, x0 })
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Keep every iterate and subgradient so the per-iteration lemma checks
    /// can run afterwards. Desk-scale only.
    pub retain_full: bool,
}

enum Engine {
    /// Dual averaging; `scheme` picks the coefficient rule.
    DualAveraging { s: Vec<f64>, scheme: Scheme },
    /// Projected gradient steps normalized by accumulated gradient norms.
    Dog { sum_g2: f64 },
}

enum Scheme {
    Dada { c: f64 },
    Wda { d0_estimate: f64 },
}

impl Engine {
    fn recorded_beta(&self, k: usize) -> f64 {
        match self {
            Engine::DualAveraging { scheme: Scheme::Dada { c }, .. } => {
                c * ((k + 1) as f64).sqrt()
            }
            // The schedule starts at β₁ = 1; row 0 records that same value,
            // the β₀ ∈ (0, β₁] convention of the convergence lemma.
            Engine::DualAveraging { scheme: Scheme::Wda { .. }, .. } => {
                if k == 0 {
                    1.0
                } else {
                    (k as f64).sqrt()
                }
            }
            Engine::Dog { .. } => 0.0,
        }
    }
}

/// DADA: `a_k = r̄_k/‖g_k‖_*`, `β_k = c√(k+1)`, `r̄_k` the running max of
/// distances from `x₀` floored at `r̄`.
pub fn run_dada(
    oracle: &dyn FirstOrderOracle,
    ctx: &NormContext,
    set: &FeasibleSet,
    cfg: &DadaConfig,
    opts: RunOptions,
) -> Result<RunTrace, SolverError> {
    let engine = Engine::DualAveraging {
        s: vec![0.0; cfg.x0.len()],
        scheme: Scheme::Dada { c: cfg.c },
    };
    drive(
        oracle,
        ctx,
        set,
        &cfg.x0,
        cfg.budget,
        cfg.rbar,
        SolverKind::Dada,
        Some(cfg.c),
        engine,
        opts,
    )
}

/// WDA baseline: `a_k = D̂₀/‖g_k‖_*`, `β_k = √k`.
pub fn run_wda(
    oracle: &dyn FirstOrderOracle,
    ctx: &NormContext,
    set: &FeasibleSet,
    cfg: &WdaConfig,
    opts: RunOptions,
) -> Result<RunTrace, SolverError> {
    let engine = Engine::DualAveraging {
        s: vec![0.0; cfg.x0.len()],
        scheme: Scheme::Wda { d0_estimate: cfg.d0_estimate },
    };
    // WDA carries no distance floor; the trace's rbar column is then the
    // plain running max of r_k, recorded for diagnostics only.
    drive(
        oracle,
        ctx,
        set,
        &cfg.x0,
        cfg.budget,
        0.0,
        SolverKind::Wda,
        None,
        engine,
        opts,
    )
}

/// Simplified DoG-style baseline: normalizes the current gradient by the
/// accumulated norms of all gradients seen so far. A reconstruction for
/// comparison purposes, not a faithful port of the published method.
pub fn run_dog_simplified(
    oracle: &dyn FirstOrderOracle,
    ctx: &NormContext,
    set: &FeasibleSet,
    cfg: &DogConfig,
    opts: RunOptions,
) -> Result<RunTrace, SolverError> {
    drive(
        oracle,
        ctx,
        set,
        &cfg.x0,
        cfg.budget,
        cfg.rbar,
        SolverKind::SimplifiedDog,
        None,
        Engine::Dog { sum_g2: 0.0 },
        opts,
    )
}

#[allow(clippy::too_many_arguments)]
fn drive(
    oracle: &dyn FirstOrderOracle,
    ctx: &NormContext,
    set: &FeasibleSet,
    x0: &[f64],
    budget: usize,
    rbar_floor: f64,
    kind: SolverKind,
    c: Option<f64>,
    mut engine: Engine,
    opts: RunOptions,
) -> Result<RunTrace, SolverError> {
    if oracle.dim() != x0.len() {
        return Err(SolverError::DimensionMismatch { oracle: oracle.dim(), x0: x0.len() });
    }
    if ctx.dim() != x0.len() {
        return Err(SpaceError::DimensionMismatch { expected: ctx.dim(), got: x0.len() }.into());
    }
    set.validate(ctx)?;
    if !set.contains(ctx, x0)? {
        return Err(SetError::AnchorOutsideSet.into());
    }
    let xstar = oracle.known_solution();

    let mut trace = RunTrace {
        solver: kind,
        c,
        rbar0: rbar_floor,
        f: Vec::with_capacity(budget),
        best_f: Vec::with_capacity(budget),
        gnorm: Vec::with_capacity(budget),
        a: Vec::with_capacity(budget),
        beta: Vec::with_capacity(budget),
        r: Vec::with_capacity(budget),
        rbar: Vec::with_capacity(budget),
        v: xstar.map(|_| Vec::with_capacity(budget)),
        dist: xstar.map(|_| Vec::with_capacity(budget)),
        v_clamp_count: 0,
        best_point: x0.to_vec(),
        best_value: f64::INFINITY,
        termination: Termination::Budget,
        retained: opts.retain_full.then(|| Retained {
            xs: vec![x0.to_vec()],
            gs: Vec::new(),
            betas: vec![engine.recorded_beta(0)],
        }),
    };

    let mut x = x0.to_vec();
    let mut rbar = rbar_floor;

    for k in 0..budget {
        let eval = match oracle.eval(&x) {
            Ok(e) if e.value.is_finite() && e.subgrad.iter().all(|g| g.is_finite()) => e,
            _ => {
                trace.termination = Termination::NumericFailure;
                break;
            }
        };
        let gnorm = ctx.dual_norm(&eval.subgrad)?;
        if !gnorm.is_finite() {
            trace.termination = Termination::NumericFailure;
            break;
        }

        if eval.value < trace.best_value {
            trace.best_value = eval.value;
            trace.best_point.copy_from_slice(&x);
        }
        let r_k = ctx.primal_norm(&sub(&x, x0))?;
        rbar = rbar.max(r_k);

        if let Some(xs) = xstar {
            let diff = sub(&x, xs);
            let dist_k = ctx.primal_norm(&diff)?;
            let v_k = if gnorm < ZERO_GRAD_TOL {
                0.0
            } else {
                let (v, clamped) = v_from_parts(dot(&eval.subgrad, &diff), gnorm, dist_k);
                if clamped {
                    trace.v_clamp_count += 1;
                }
                v
            };
            trace.v.as_mut().unwrap().push(v_k);
            trace.dist.as_mut().unwrap().push(dist_k);
        }

        let stop = gnorm < ZERO_GRAD_TOL;
        let a_k = if stop {
            0.0
        } else {
            match &engine {
                Engine::DualAveraging { scheme: Scheme::Dada { .. }, .. } => rbar / gnorm,
                Engine::DualAveraging { scheme: Scheme::Wda { d0_estimate }, .. } => {
                    d0_estimate / gnorm
                }
                Engine::Dog { sum_g2 } => rbar / (sum_g2 + gnorm * gnorm).sqrt(),
            }
        };

        trace.f.push(eval.value);
        trace.best_f.push(trace.best_value);
        trace.gnorm.push(gnorm);
        trace.a.push(a_k);
        trace.beta.push(engine.recorded_beta(k));
        trace.r.push(r_k);
        trace.rbar.push(rbar);
        if let Some(retained) = trace.retained.as_mut() {
            retained.gs.push(eval.subgrad.clone());
        }

        if stop {
            trace.termination = Termination::ZeroGradient;
            break;
        }

        match &mut engine {
            Engine::DualAveraging { s, .. } => {
                axpy(a_k, &eval.subgrad, s);
            }
            Engine::Dog { sum_g2 } => {
                *sum_g2 += gnorm * gnorm;
            }
        }
        let beta_next = engine.recorded_beta(k + 1);
        x = match &engine {
            Engine::DualAveraging { s, .. } => da_argmin(ctx, set, s, beta_next, x0)?,
            Engine::Dog { .. } => {
                // Steepest-descent direction in the B geometry; plain
                // x - a_k g for the identity metric.
                let step = ctx.apply_b_inverse(&eval.subgrad)?;
                let shifted: Vec<f64> = x
                    .iter()
                    .zip(&step)
                    .map(|(&xi, &si)| xi - a_k * si)
                    .collect();
                set.project(ctx, &shifted)?
            }
        };
        if let Some(retained) = trace.retained.as_mut() {
            retained.xs.push(x.clone());
            retained.betas.push(beta_next);
        }
    }

    if trace.is_empty() {
        // Nothing was evaluated successfully; report the anchor.
        trace.best_value = f64::NAN;
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{Eval, OracleError, QuadraticProblem};

    fn identity_setup(d: usize) -> (NormContext, FeasibleSet, Vec<f64>) {
        (NormContext::identity(d), FeasibleSet::WholeSpace, vec![1.0; d])
    }

    #[test]
    fn dada_config_validation() {
        assert!(DadaConfig::new(1e-6, 10, vec![1.0]).is_ok());
        assert!(DadaConfig::new(0.0, 10, vec![1.0]).is_err());
        assert!(DadaConfig::new(1e-6, 0, vec![1.0]).is_err());
        assert!(DadaConfig::new(1e-6, 10, vec![f64::NAN]).is_err());
        assert!(DadaConfig::new(1e-6, 10, vec![]).is_err());
        let cfg = DadaConfig::new(1e-6, 10, vec![1.0]).unwrap();
        assert_eq!(cfg.c, 2.0 * SQRT_2);
        assert!(cfg.clone().with_c(SQRT_2).is_err());
        assert!(cfg.clone().with_c(3.0).is_ok());
        assert_eq!(cfg.with_c_unchecked(0.5).c, 0.5);
    }

    #[test]
    fn budget_one_returns_the_anchor() {
        let (ctx, set, x0) = identity_setup(3);
        let oracle = QuadraticProblem::new(3).unwrap();
        let cfg = DadaConfig::new(1e-6, 1, x0.clone()).unwrap();
        let trace = run_dada(&oracle, &ctx, &set, &cfg, RunOptions::default()).unwrap();
        assert_eq!(trace.len(), 1);
        assert_eq!(trace.best_point, x0);
        assert_eq!(trace.best_value, 1.5);
        assert_eq!(trace.termination, Termination::Budget);
    }

    #[test]
    fn zero_gradient_at_start_terminates_immediately() {
        let (ctx, set, _) = identity_setup(2);
        let oracle = QuadraticProblem::new(2).unwrap();
        let x0 = vec![0.0, 0.0];
        for kind in 0..3 {
            let trace = match kind {
                0 => run_dada(
                    &oracle,
                    &ctx,
                    &set,
                    &DadaConfig::new(1e-6, 50, x0.clone()).unwrap(),
                    RunOptions::default(),
                ),
                1 => run_wda(
                    &oracle,
                    &ctx,
                    &set,
                    &WdaConfig::new(1.0, 50, x0.clone()).unwrap(),
                    RunOptions::default(),
                ),
                _ => run_dog_simplified(
                    &oracle,
                    &ctx,
                    &set,
                    &DogConfig::new(1e-6, 50, x0.clone()).unwrap(),
                    RunOptions::default(),
                ),
            }
            .unwrap();
            assert_eq!(trace.len(), 1);
            assert_eq!(trace.termination, Termination::ZeroGradient);
            assert_eq!(trace.best_value, 0.0);
            assert_eq!(trace.a[0], 0.0);
        }
    }

    #[test]
    fn rbar_bookkeeping_is_a_floored_running_max() {
        let (ctx, set, x0) = identity_setup(4);
        let oracle = QuadraticProblem::new(4).unwrap();
        let cfg = DadaConfig::new(1e-3, 200, x0).unwrap();
        let trace = run_dada(&oracle, &ctx, &set, &cfg, RunOptions::default()).unwrap();
        assert_eq!(trace.rbar[0], 1e-3);
        assert_eq!(trace.r[0], 0.0);
        for k in 1..trace.len() {
            assert!(trace.rbar[k] >= trace.rbar[k - 1]);
            assert_eq!(trace.rbar[k], trace.rbar[k - 1].max(trace.r[k]));
            assert!(trace.beta[k] >= trace.beta[k - 1]);
            assert!(trace.best_f[k] <= trace.best_f[k - 1]);
        }
    }

    #[test]
    fn dada_beta_schedule_is_c_sqrt_k_plus_one() {
        let (ctx, set, x0) = identity_setup(2);
        let oracle = QuadraticProblem::new(2).unwrap();
        let cfg = DadaConfig::new(1e-6, 5, x0).unwrap();
        let trace = run_dada(&oracle, &ctx, &set, &cfg, RunOptions { retain_full: true }).unwrap();
        for k in 0..trace.len() {
            assert_eq!(trace.beta[k], cfg.c * ((k + 1) as f64).sqrt());
        }
        let retained = trace.retained.as_ref().unwrap();
        assert_eq!(retained.xs.len(), 6);
        assert_eq!(retained.gs.len(), 5);
        assert_eq!(retained.betas.len(), 6);
    }

    #[test]
    fn wda_beta_schedule_starts_at_one() {
        let (ctx, set, x0) = identity_setup(2);
        let oracle = QuadraticProblem::new(2).unwrap();
        let cfg = WdaConfig::new(2.0, 4, x0).unwrap();
        let trace = run_wda(&oracle, &ctx, &set, &cfg, RunOptions::default()).unwrap();
        assert_eq!(trace.beta[0], 1.0);
        assert_eq!(trace.beta[1], 1.0);
        assert_eq!(trace.beta[2], 2.0f64.sqrt());
        assert_eq!(trace.rbar0, 0.0);
    }

    #[test]
    fn dog_decreases_on_quadratic_after_burn_in() {
        let ctx = NormContext::identity(1);
        let set = FeasibleSet::WholeSpace;
        let oracle = QuadraticProblem::new(1).unwrap();
        let cfg = DogConfig::new(1e-3, 400, vec![1.0]).unwrap();
        let trace =
            run_dog_simplified(&oracle, &ctx, &set, &cfg, RunOptions::default()).unwrap();
        assert_eq!(trace.termination, Termination::Budget);
        // After burn-in the distance to the optimum shrinks monotonically.
        let d = trace.dist.as_ref().unwrap();
        let tail = &d[100..];
        for w in tail.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12));
        }
        assert!(trace.best_value < 1e-4);
    }

    struct ExplodingOracle {
        after: usize,
    }

    impl FirstOrderOracle for ExplodingOracle {
        fn dim(&self) -> usize {
            1
        }
        fn eval(&self, x: &[f64]) -> Result<Eval, OracleError> {
            if x[0] < 1.0 - 1e-9 * self.after as f64 {
                Ok(Eval { value: f64::NAN, subgrad: vec![f64::NAN] })
            } else {
                Ok(Eval { value: x[0] * x[0], subgrad: vec![2.0 * x[0]] })
            }
        }
    }

    #[test]
    fn numeric_failure_preserves_partial_trace() {
        let ctx = NormContext::identity(1);
        let set = FeasibleSet::WholeSpace;
        let oracle = ExplodingOracle { after: 1 };
        let cfg = DadaConfig::new(1e-2, 100, vec![1.0]).unwrap();
        let trace = run_dada(&oracle, &ctx, &set, &cfg, RunOptions::default()).unwrap();
        assert_eq!(trace.termination, Termination::NumericFailure);
        assert!(trace.len() >= 1);
        assert!(trace.len() < 100);
        assert!(trace.best_value.is_finite());
    }

    #[test]
    fn dimension_mismatch_is_rejected_up_front() {
        let ctx = NormContext::identity(3);
        let set = FeasibleSet::WholeSpace;
        let oracle = QuadraticProblem::new(2).unwrap();
        let cfg = DadaConfig::new(1e-6, 5, vec![1.0, 1.0, 1.0]).unwrap();
        assert!(matches!(
            run_dada(&oracle, &ctx, &set, &cfg, RunOptions::default()),
            Err(SolverError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn trace_csv_has_exact_schema() {
        let (ctx, set, x0) = identity_setup(2);
        let oracle = QuadraticProblem::new(2).unwrap();
        let cfg = DadaConfig::new(1e-6, 3, x0).unwrap();
        let trace = run_dada(&oracle, &ctx, &set, &cfg, RunOptions::default()).unwrap();
        let csv = trace.to_csv_string();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "k,f,best_f,gnorm,a,beta,r,rbar,v,D");
        assert_eq!(csv.lines().count(), 4);
        // known solution: v and D populated
        assert!(!csv.lines().nth(1).unwrap().ends_with(",,"));
    }

    #[test]
    fn determinism_identical_configs_identical_traces() {
        let (ctx, set, x0) = identity_setup(5);
        let oracle = crate::problems::SoftmaxProblem::generate(6, 5, 0.3, 42).unwrap();
        let cfg = DadaConfig::new(1e-6, 300, x0).unwrap();
        let t1 = run_dada(&oracle, &ctx, &set, &cfg, RunOptions::default()).unwrap();
        let t2 = run_dada(&oracle, &ctx, &set, &cfg, RunOptions::default()).unwrap();
        assert_eq!(t1.to_csv_string(), t2.to_csv_string());
    }
}
