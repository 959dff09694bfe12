//! Feasible sets and the per-iteration dual-averaging subproblem
//! `argmin_{x ∈ Q} ⟨s, x⟩ + (β/2) ‖x - x₀‖²`.
//!
//! Completing the square turns the subproblem into a projection: the
//! objective equals `(β/2) ‖x - u‖²` up to a constant, with
//! `u = x₀ - B⁻¹s/β`, so the minimizer is the B-metric projection of `u`
//! onto `Q`. For the shipped shapes this projection is closed-form:
//! radial scaling for balls, a componentwise clamp for boxes (exact for
//! diagonal `B` because the quadratic separates per coordinate).
//!
//! Constrained shapes with dense `B` are rejected outright — that projection
//! would need an iterative QP, and none of the benchmarks wants it.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::space::{NormContext, SpaceError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SetError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("set dimension {set} does not match context dimension {ctx}")]
    DimensionMismatch { set: usize, ctx: usize },
    #[error("ball radius must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("box bounds violate lower <= upper at coordinate {index}")]
    BadBounds { index: usize },
    #[error("constrained sets support only identity or diagonal B; dense B is rejected")]
    UnsupportedMetric,
    #[error("beta must be positive and finite, got {0}")]
    BadBeta(f64),
    #[error("anchor point x0 lies outside the feasible set")]
    AnchorOutsideSet,
}

/// Membership slack, relative to the local scale of the constraint.
const CONTAINS_SLACK: f64 = 1e-12;

/// A simple constraint set `Q`, tied to a [`NormContext`] at call time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum FeasibleSet {
    WholeSpace,
    Ball { center: Vec<f64>, radius: f64 },
    Box { lower: Vec<f64>, upper: Vec<f64> },
}

impl FeasibleSet {
    /// Check the descriptor against a context: dimensions, bound ordering,
    /// radius positivity, and the supported (shape, B-shape) combinations.
    pub fn validate(&self, ctx: &NormContext) -> Result<(), SetError> {
        match self {
            FeasibleSet::WholeSpace => Ok(()),
            FeasibleSet::Ball { center, radius } => {
                if ctx.is_dense() {
                    return Err(SetError::UnsupportedMetric);
                }
                if center.len() != ctx.dim() {
                    return Err(SetError::DimensionMismatch { set: center.len(), ctx: ctx.dim() });
                }
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(SetError::BadRadius(*radius));
                }
                Ok(())
            }
            FeasibleSet::Box { lower, upper } => {
                if ctx.is_dense() {
                    return Err(SetError::UnsupportedMetric);
                }
                if lower.len() != ctx.dim() || upper.len() != ctx.dim() {
                    return Err(SetError::DimensionMismatch { set: lower.len(), ctx: ctx.dim() });
                }
                for (index, (lo, hi)) in lower.iter().zip(upper).enumerate() {
                    if !(lo <= hi) {
                        return Err(SetError::BadBounds { index });
                    }
                }
                Ok(())
            }
        }
    }

    /// Membership test with a `1e-12` relative slack on each constraint.
    pub fn contains(&self, ctx: &NormContext, x: &[f64]) -> Result<bool, SetError> {
        self.validate(ctx)?;
        match self {
            FeasibleSet::WholeSpace => Ok(true),
            FeasibleSet::Ball { center, radius } => {
                let dist = ctx.primal_norm(&crate::space::sub(x, center))?;
                Ok(dist <= radius * (1.0 + CONTAINS_SLACK) + CONTAINS_SLACK)
            }
            FeasibleSet::Box { lower, upper } => {
                if x.len() != ctx.dim() {
                    return Err(SetError::DimensionMismatch { set: x.len(), ctx: ctx.dim() });
                }
                Ok(x.iter().zip(lower.iter().zip(upper)).all(|(&xi, (&lo, &hi))| {
                    let slack = CONTAINS_SLACK * lo.abs().max(hi.abs()).max(1.0);
                    xi >= lo - slack && xi <= hi + slack
                }))
            }
        }
    }

    /// B-metric projection of `y` onto the set. Closed-form for every
    /// supported (shape, B) combination.
    pub fn project(&self, ctx: &NormContext, y: &[f64]) -> Result<Vec<f64>, SetError> {
        self.validate(ctx)?;
        if y.len() != ctx.dim() {
            return Err(SetError::DimensionMismatch { set: y.len(), ctx: ctx.dim() });
        }
        match self {
            FeasibleSet::WholeSpace => Ok(y.to_vec()),
            FeasibleSet::Ball { center, radius } => {
                let offset = crate::space::sub(y, center);
                let dist = ctx.primal_norm(&offset)?;
                if dist <= *radius {
                    Ok(y.to_vec())
                } else {
                    let scale = radius / dist;
                    Ok(center
                        .iter()
                        .zip(&offset)
                        .map(|(&ci, &oi)| ci + scale * oi)
                        .collect())
                }
            }
            FeasibleSet::Box { lower, upper } => Ok(y
                .iter()
                .zip(lower.iter().zip(upper))
                .map(|(&yi, (&lo, &hi))| yi.clamp(lo, hi))
                .collect()),
        }
    }
}

/// Exact minimizer of `⟨s, x⟩ + (β/2) ‖x - x₀‖²` over `Q`.
///
/// Requires `β > 0` and `x0 ∈ Q`. Unsupported (shape, B) combinations error
/// instead of silently approximating.
pub fn da_argmin(
    ctx: &NormContext,
    set: &FeasibleSet,
    s: &[f64],
    beta: f64,
    x0: &[f64],
) -> Result<Vec<f64>, SetError> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(SetError::BadBeta(beta));
    }
    if !set.contains(ctx, x0)? {
        return Err(SetError::AnchorOutsideSet);
    }
    let step = ctx.apply_b_inverse(s)?;
    let unconstrained: Vec<f64> = x0
        .iter()
        .zip(&step)
        .map(|(&x0i, &si)| x0i - si / beta)
        .collect();
    set.project(ctx, &unconstrained)
}
