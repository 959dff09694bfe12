//! Numeric checks of the per-iteration inequalities behind the convergence
//! proof, evaluated on recorded traces. Each returns the worst signed
//! relative violation `(LHS - RHS) / max(1, |RHS|)` over all iterations;
//! a proved inequality must come out at rounding level (≤ 1e-8).

use thiserror::Error;

use super::{RunTrace, SolverKind};
use crate::space::{dot, sub, NormContext, SpaceError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CheckError {
    #[error("check requires a full-retention trace; rerun with retain_full")]
    MissingRetention,
    #[error("{check} applies to {expected} traces, got {got}")]
    KindMismatch {
        check: &'static str,
        expected: &'static str,
        got: &'static str,
    },
    #[error("beta0 = {beta0} must lie in (0, beta1] with beta1 = {beta1}")]
    BadBeta0 { beta0: f64, beta1: f64 },
    #[error("trace records no v/D diagnostics; run against an oracle with a known solution")]
    MissingDiagnostics,
    #[error("d0 must be nonnegative and finite, got {0}")]
    BadD0(f64),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// The dual-averaging energy inequality, valid for any coefficient choice:
/// for every `k`,
/// `Σ_{i<k} a_i⟨g_i, x_i - x*⟩ + (β_k/2)‖x_k - x*‖²
///  ≤ (β_k/2)‖x₀ - x*‖² + Σ_{i<k} (a_i²/2β_i)‖g_i‖_*²`,
/// where `β₀` may be anything in `(0, β₁]` (defaults to the trace's recorded
/// row-0 value).
pub fn check_da_convergence(
    trace: &RunTrace,
    ctx: &NormContext,
    xstar: &[f64],
    beta0: Option<f64>,
) -> Result<f64, CheckError> {
    match trace.solver {
        SolverKind::Dada | SolverKind::Wda => {}
        other => {
            return Err(CheckError::KindMismatch {
                check: "da-convergence",
                expected: "dual-averaging (dada or wda)",
                got: other.label(),
            })
        }
    }
    let retained = trace.retained.as_ref().ok_or(CheckError::MissingRetention)?;
    if retained.xs.len() < 2 {
        return Ok(0.0);
    }
    let beta1 = retained.betas[1];
    let beta0 = beta0.unwrap_or(retained.betas[0]);
    if !(beta0 > 0.0 && beta0 <= beta1) {
        return Err(CheckError::BadBeta0 { beta0, beta1 });
    }

    let x0 = &retained.xs[0];
    let d0 = ctx.primal_norm(&sub(x0, xstar))?;
    let d0_sq = d0 * d0;
    let mut lhs_sum = 0.0;
    let mut rhs_sum = 0.0;
    let mut worst = f64::NEG_INFINITY;
    for k in 1..retained.xs.len() {
        let i = k - 1;
        lhs_sum += trace.a[i] * dot(&retained.gs[i], &sub(&retained.xs[i], xstar));
        let beta_i = if i == 0 { beta0 } else { retained.betas[i] };
        rhs_sum += trace.a[i] * trace.a[i] / (2.0 * beta_i) * trace.gnorm[i] * trace.gnorm[i];
        let beta_k = retained.betas[k];
        let dk = ctx.primal_norm(&sub(&retained.xs[k], xstar))?;
        let lhs = lhs_sum + 0.5 * beta_k * dk * dk;
        let rhs = 0.5 * beta_k * d0_sq + rhs_sum;
        worst = worst.max((lhs - rhs) / rhs.abs().max(1.0));
    }
    Ok(worst)
}

/// The coefficient-specific refinement for DADA's `a_k = r̄_k/‖g_k‖_*`,
/// `β_k = c√(k+1)`: for every `k`,
/// `Σ_{i<k} r̄_i v_i + (c√(k+1)/2) D_k² ≤ (c√(k+1)/2) D₀² + (√k/c) r̄²_{k-1}`.
pub fn check_coefficient_placing(
    trace: &RunTrace,
    ctx: &NormContext,
    xstar: &[f64],
) -> Result<f64, CheckError> {
    let c = match (trace.solver, trace.c) {
        (SolverKind::Dada, Some(c)) => c,
        (other, _) => {
            return Err(CheckError::KindMismatch {
                check: "coefficient-placing",
                expected: "dada",
                got: other.label(),
            })
        }
    };
    let retained = trace.retained.as_ref().ok_or(CheckError::MissingRetention)?;
    if retained.xs.len() < 2 {
        return Ok(0.0);
    }

    let x0 = &retained.xs[0];
    let d0 = ctx.primal_norm(&sub(x0, xstar))?;
    let mut sum_rv = 0.0;
    let mut worst = f64::NEG_INFINITY;
    for k in 1..retained.xs.len() {
        let i = k - 1;
        // Raw v_i, unclamped: the inequality is exact for any reference point.
        let v_i = dot(&retained.gs[i], &sub(&retained.xs[i], xstar)) / trace.gnorm[i];
        sum_rv += trace.rbar[i] * v_i;
        let half_c_root = 0.5 * c * ((k + 1) as f64).sqrt();
        let dk = ctx.primal_norm(&sub(&retained.xs[k], xstar))?;
        let lhs = sum_rv + half_c_root * dk * dk;
        let rhs = half_c_root * d0 * d0 + (k as f64).sqrt() / c * trace.rbar[i] * trace.rbar[i];
        worst = worst.max((lhs - rhs) / rhs.abs().max(1.0));
    }
    Ok(worst)
}

/// Result of [`check_r_upper_d`]: signed relative margins against the
/// distance bounds `r̄_k ≤ D̄` and `D_k ≤ D₀ + (√2/c) D̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct RUpperDReport {
    pub d_bar: f64,
    /// `max_k (r̄_k - D̄) / D̄`; nonpositive (up to 1e-10) when the bound holds.
    pub max_rbar_violation: f64,
    /// `max_k (D_k - D₀ - (√2/c)D̄) / bound`; `None` when the trace has no
    /// distance diagnostics.
    pub max_dist_violation: Option<f64>,
}

/// The boundedness invariant of the distance estimates, with
/// `D̄ = max{r̄, 2c/(c - √2) · D₀}`.
pub fn check_r_upper_d(trace: &RunTrace, d0: f64) -> Result<RUpperDReport, CheckError> {
    let c = match (trace.solver, trace.c) {
        (SolverKind::Dada, Some(c)) => c,
        (other, _) => {
            return Err(CheckError::KindMismatch {
                check: "r-upper-d",
                expected: "dada",
                got: other.label(),
            })
        }
    };
    if !(d0.is_finite() && d0 >= 0.0) {
        return Err(CheckError::BadD0(d0));
    }
    let d_bar = trace.rbar0.max(2.0 * c / (c - std::f64::consts::SQRT_2) * d0);
    let max_rbar_violation = trace
        .rbar
        .iter()
        .map(|&rb| (rb - d_bar) / d_bar)
        .fold(f64::NEG_INFINITY, f64::max);
    let max_dist_violation = trace.dist.as_ref().map(|dist| {
        let bound = d0 + std::f64::consts::SQRT_2 / c * d_bar;
        dist.iter()
            .map(|&dk| (dk - bound) / bound)
            .fold(f64::NEG_INFINITY, f64::max)
    });
    Ok(RUpperDReport { d_bar, max_rbar_violation, max_dist_violation })
}
