//! Executable forms of the convergence theory: per-class accuracy thresholds
//! `δ(ε)`, oracle-complexity estimates `T(ε)`, growth-function majorants
//! `ω(t)`, the suboptimality measure `v(x)`, and the auxiliary sequence
//! lemmas. These double as a diagnostics library and as the oracle for the
//! verification suite.

use rand::Rng;
use thiserror::Error;

use crate::problems::seeded_rng;
use crate::solvers::RunTrace;
use crate::space::{dot, sub, NormContext, SpaceError};

use std::f64::consts::{E, SQRT_2};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TheoryError {
    #[error("zero gradient: v(x) is undefined; handle termination before measuring")]
    ZeroGradient,
    #[error("sequence must be positive and nondecreasing; violated at index {0}")]
    BadSequence(usize),
    #[error("sequence of length {len} is too short for T = {t}")]
    SequenceTooShort { len: usize, t: usize },
    #[error("T must be at least 1")]
    ZeroT,
    #[error("gamma must lie in [0, 1), got {0}")]
    BadGamma(f64),
    #[error("{name} must be nonnegative and finite, got {got}")]
    BadConstant { name: &'static str, got: f64 },
    #[error("c must strictly exceed sqrt(2), got {0}")]
    BadC(f64),
    #[error("trace has no v diagnostics; rerun against an oracle with a known solution")]
    MissingV,
    #[error("invalid class spec: {0}")]
    BadClassSpec(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// A function class together with the constants its `δ(ε)` / `T(ε)` / `ω(t)`
/// formulas need. `grad_star` is `‖∇f(x*)‖_*`; a zero constant drops the
/// corresponding term (treated as +∞ inside minima).
#[derive(Debug, Clone, PartialEq)]
pub enum ClassSpec {
    /// `|f(x) - f(y)| ≤ L₀ ‖x - y‖`.
    Lipschitz { l0: f64 },
    /// `‖∇f(x) - ∇f(y)‖_* ≤ L₁ ‖x - y‖`.
    LipschitzSmooth { l1: f64, grad_star: f64 },
    /// `‖∇f(x) - ∇f(y)‖_* ≤ H_ν ‖x - y‖^ν`, `ν ∈ [0, 1]`.
    HolderSmooth { nu: f64, h_nu: f64, grad_star: f64 },
    /// `L_p`-Lipschitz `p`-th derivative, `p ≥ 2`. `derivative_norms[i - 2]`
    /// holds `‖∇^i f(x*)‖` for `i = 2..=p`.
    HighOrder {
        p: u32,
        l_p: f64,
        derivative_norms: Vec<f64>,
        grad_star: f64,
    },
    /// Quasi-self-concordant with parameter `M`; `hess_norm = ‖∇²f(x*)‖`.
    Qsc { m: f64, hess_norm: f64, grad_star: f64 },
    /// `‖∇²f(x)‖ ≤ L₀ + L₁ ‖∇f(x)‖_*`.
    L0L1 { l0: f64, l1: f64, grad_star: f64 },
}

impl ClassSpec {
    pub fn validate(&self) -> Result<(), TheoryError> {
        let nonneg = |name: &'static str, v: f64| {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(TheoryError::BadConstant { name, got: v })
            }
        };
        match self {
            ClassSpec::Lipschitz { l0 } => nonneg("l0", *l0),
            ClassSpec::LipschitzSmooth { l1, grad_star } => {
                nonneg("l1", *l1)?;
                nonneg("grad_star", *grad_star)
            }
            ClassSpec::HolderSmooth { nu, h_nu, grad_star } => {
                if !(0.0..=1.0).contains(nu) {
                    return Err(TheoryError::BadClassSpec(format!("nu = {nu} not in [0, 1]")));
                }
                nonneg("h_nu", *h_nu)?;
                nonneg("grad_star", *grad_star)
            }
            ClassSpec::HighOrder { p, l_p, derivative_norms, grad_star } => {
                if *p < 2 {
                    return Err(TheoryError::BadClassSpec(format!("p = {p} must be >= 2")));
                }
                if derivative_norms.len() != (*p as usize) - 1 {
                    return Err(TheoryError::BadClassSpec(format!(
                        "expected {} derivative norms for i = 2..={p}, got {}",
                        *p - 1,
                        derivative_norms.len()
                    )));
                }
                for &v in derivative_norms {
                    nonneg("derivative_norm", v)?;
                }
                nonneg("l_p", *l_p)?;
                nonneg("grad_star", *grad_star)
            }
            ClassSpec::Qsc { m, hess_norm, grad_star } => {
                nonneg("m", *m)?;
                nonneg("hess_norm", *hess_norm)?;
                nonneg("grad_star", *grad_star)
            }
            ClassSpec::L0L1 { l0, l1, grad_star } => {
                nonneg("l0", *l0)?;
                nonneg("l1", *l1)?;
                nonneg("grad_star", *grad_star)
            }
        }
    }
}

/// `num / den`, with a zero denominator meaning "this term is absent".
#[inline]
fn term(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        f64::INFINITY
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Largest `t` guaranteeing `ω(t) ≤ ε` for the class: the threshold each
/// per-class lemma provides. Returns +∞ iff every term drops (all relevant
/// constants zero), meaning any accuracy is free.
pub fn delta_eps(spec: &ClassSpec, eps: f64) -> f64 {
    debug_assert!(eps > 0.0);
    match spec {
        ClassSpec::Lipschitz { l0 } => term(eps, *l0),
        ClassSpec::LipschitzSmooth { l1, grad_star } => {
            term(eps, *l1).sqrt().min(term(eps, 2.0 * grad_star))
        }
        ClassSpec::HolderSmooth { nu, h_nu, grad_star } => {
            let power = if *h_nu > 0.0 {
                ((1.0 + nu) * eps / (2.0 * h_nu)).powf(1.0 / (1.0 + nu))
            } else {
                f64::INFINITY
            };
            power.min(term(eps, 2.0 * grad_star))
        }
        ClassSpec::HighOrder { p, l_p, derivative_norms, grad_star } => {
            let pf = *p as f64;
            let mut best = term(eps, (pf + 1.0) * grad_star);
            for i in 2..=*p {
                let norm = derivative_norms[(i - 2) as usize];
                if norm > 0.0 {
                    let base = factorial(i) * eps / ((pf + 1.0) * norm);
                    best = best.min(base.powf(1.0 / i as f64));
                }
            }
            if *l_p > 0.0 {
                best = best.min((factorial(*p) * eps / l_p).powf(1.0 / (pf + 1.0)));
            }
            best
        }
        ClassSpec::Qsc { m, hess_norm, grad_star } => term(1.0, *m)
            .min(term(eps, 2.0 * (E - 2.0) * hess_norm).sqrt())
            .min(term(eps, 2.0 * grad_star)),
        ClassSpec::L0L1 { l0, l1, grad_star } => {
            let s = l0 + l1 * grad_star;
            term(1.0, *l1)
                .min(term(2.0 * eps, 3.0 * s).sqrt())
                .min(term(eps, 2.0 * grad_star))
        }
    }
}

/// The class-specific factor of `T(ε)`; multiplying by `e²D²log²(eD̄/r̄)`
/// gives the corollary's bound. Algebraically equal to `1/δ(ε)²`.
fn complexity_factor(spec: &ClassSpec, eps: f64) -> f64 {
    match spec {
        ClassSpec::Lipschitz { l0 } => (l0 / eps).powi(2),
        ClassSpec::LipschitzSmooth { l1, grad_star } => {
            (l1 / eps).max((2.0 * grad_star / eps).powi(2))
        }
        ClassSpec::HolderSmooth { nu, h_nu, grad_star } => {
            let power = if *h_nu > 0.0 {
                (2.0 * h_nu / ((1.0 + nu) * eps)).powf(2.0 / (1.0 + nu))
            } else {
                0.0
            };
            power.max((2.0 * grad_star / eps).powi(2))
        }
        ClassSpec::HighOrder { p, l_p, derivative_norms, grad_star } => {
            let pf = *p as f64;
            let mut worst = ((pf + 1.0) * grad_star / eps).powi(2);
            for i in 2..=*p {
                let norm = derivative_norms[(i - 2) as usize];
                if norm > 0.0 {
                    worst =
                        worst.max(((pf + 1.0) * norm / (factorial(i) * eps)).powf(2.0 / i as f64));
                }
            }
            if *l_p > 0.0 {
                worst = worst.max((l_p / (factorial(*p) * eps)).powf(2.0 / (pf + 1.0)));
            }
            worst
        }
        ClassSpec::Qsc { m, hess_norm, grad_star } => (m * m)
            .max(2.0 * (E - 2.0) * hess_norm / eps)
            .max((2.0 * grad_star / eps).powi(2)),
        ClassSpec::L0L1 { l0, l1, grad_star } => (l1 * l1)
            .max(3.0 * (l0 + l1 * grad_star) / (2.0 * eps))
            .max((2.0 * grad_star / eps).powi(2)),
    }
}

/// Oracle-call bound `T(ε)` from the class's corollary. Returns 0 when every
/// term drops (`δ(ε) = +∞`): any budget suffices.
pub fn complexity_t(spec: &ClassSpec, eps: f64, rc: &RateConstants) -> f64 {
    complexity_factor(spec, eps) * rc.rate_base()
}

/// `φ(t) = (e^t - t - 1)/t²`, continuously extended with `φ(0) = 1/2`;
/// evaluated by a 6-term series below 1e-4 to dodge cancellation.
pub fn phi(t: f64) -> f64 {
    if t.abs() < 1e-4 {
        phi_series(t)
    } else {
        (t.exp_m1() - t) / (t * t)
    }
}

/// `ξ(t) = e^t - t - 1`, with the same series guard; `ξ(0) = 0`.
pub fn xi(t: f64) -> f64 {
    if t.abs() < 1e-4 {
        t * t * phi_series(t)
    } else {
        t.exp_m1() - t
    }
}

/// Six terms of `Σ_{j≥0} t^j / (j+2)!`, evaluated by Horner's rule.
fn phi_series(t: f64) -> f64 {
    let mut sum = 1.0 / factorial(7);
    for j in (2..=6).rev() {
        sum = 1.0 / factorial(j) + t * sum;
    }
    sum
}

/// The class's majorant of the growth function
/// `ω(t) = max { f(x) - f* : ‖x - x*‖ ≤ t }`.
pub fn growth_upper_bound(spec: &ClassSpec, t: f64) -> f64 {
    debug_assert!(t >= 0.0);
    match spec {
        ClassSpec::Lipschitz { l0 } => l0 * t,
        ClassSpec::LipschitzSmooth { l1, grad_star } => 0.5 * l1 * t * t + grad_star * t,
        ClassSpec::HolderSmooth { nu, h_nu, grad_star } => {
            grad_star * t + h_nu / (1.0 + nu) * t.powf(1.0 + nu)
        }
        ClassSpec::HighOrder { p, l_p, derivative_norms, grad_star } => {
            let mut sum = grad_star * t;
            for i in 2..=*p {
                sum += derivative_norms[(i - 2) as usize] / factorial(i) * t.powi(i as i32);
            }
            sum + l_p / factorial(p + 1) * t.powi(*p as i32 + 1)
        }
        ClassSpec::Qsc { m, hess_norm, grad_star } => {
            grad_star * t + hess_norm * t * t * phi(m * t)
        }
        ClassSpec::L0L1 { l0, l1, grad_star } => {
            if *l1 > 0.0 {
                grad_star * t + (l0 + l1 * grad_star) / (l1 * l1) * xi(l1 * t)
            } else {
                // Limit of ξ(L₁t)/L₁² as L₁ -> 0.
                grad_star * t + 0.5 * l0 * t * t
            }
        }
    }
}

/// `log₊ t = 1 + log t`, the form the big-O summaries are reported in.
pub fn log_plus(t: f64) -> f64 {
    1.0 + t.ln()
}

/// The constants of the main convergence rate: given `D₀ = ‖x₀ - x*‖`, the
/// initial guess `r̄`, and the schedule constant `c > √2`,
/// `D̄ = max{r̄, 2c/(c-√2)·D₀}` and `D = √2(cD₀ + D̄/c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateConstants {
    pub d0: f64,
    pub rbar: f64,
    pub c: f64,
    pub d_bar: f64,
    pub d: f64,
}

impl RateConstants {
    pub fn new(d0: f64, rbar: f64, c: f64) -> Result<Self, TheoryError> {
        if !(d0.is_finite() && d0 >= 0.0) {
            return Err(TheoryError::BadConstant { name: "d0", got: d0 });
        }
        if !(rbar.is_finite() && rbar > 0.0) {
            return Err(TheoryError::BadConstant { name: "rbar", got: rbar });
        }
        if !(c.is_finite() && c > SQRT_2) {
            return Err(TheoryError::BadC(c));
        }
        let d_bar = rbar.max(2.0 * c / (c - SQRT_2) * d0);
        let d = SQRT_2 * (c * d0 + d_bar / c);
        Ok(RateConstants { d0, rbar, c, d_bar, d })
    }

    /// `log(e·D̄/r̄)`.
    pub fn log_factor(&self) -> f64 {
        (E * self.d_bar / self.rbar).ln()
    }

    /// `e²D² log²(eD̄/r̄)`, the class-independent part of every `T(ε)`.
    pub fn rate_base(&self) -> f64 {
        let root = E * self.d * self.log_factor();
        root * root
    }

    /// The bound of the main rate: `eD/√T · log(eD̄/r̄)`.
    pub fn envelope(&self, t: usize) -> f64 {
        debug_assert!(t >= 1);
        E * self.d / (t as f64).sqrt() * self.log_factor()
    }

    /// Iterations guaranteeing `v_T^* ≤ δ`; zero when `δ = +∞`.
    pub fn t_v(&self, delta: f64) -> f64 {
        if delta.is_infinite() {
            0.0
        } else {
            self.rate_base() / (delta * delta)
        }
    }
}

pub(crate) const V_CLAMP_RTOL: f64 = 1e-12;

/// Shared kernel for the suboptimality measure: `inner/gnorm`, with tiny
/// negative rounding artifacts (relative to `max(1, ‖x - x*‖)`) clamped to
/// zero. Returns the value and whether it was clamped.
pub(crate) fn v_from_parts(inner: f64, gnorm: f64, dist: f64) -> (f64, bool) {
    let raw = inner / gnorm;
    if raw < 0.0 && raw >= -V_CLAMP_RTOL * dist.max(1.0) {
        (0.0, true)
    } else {
        (raw, false)
    }
}

/// Suboptimality measure `v(x) = ⟨g, x - x*⟩ / ‖g‖_*`: the distance from
/// `x*` to the supporting hyperplane at `x`. Nonnegative whenever `g` is a
/// subgradient of a convex `f` and `x*` a minimizer; a `-1e-12`-sized
/// rounding artifact is clamped to zero, anything more negative is returned
/// as-is so the caller can see the inconsistent input.
pub fn v_measure(
    ctx: &NormContext,
    g: &[f64],
    x: &[f64],
    xstar: &[f64],
) -> Result<f64, TheoryError> {
    let gnorm = ctx.dual_norm(g)?;
    if gnorm <= 0.0 {
        return Err(TheoryError::ZeroGradient);
    }
    let diff = sub(x, xstar);
    let dist = ctx.primal_norm(&diff)?;
    Ok(v_from_parts(dot(g, &diff), gnorm, dist).0)
}

/// Both sides of the running-minimum bound for a positive nondecreasing
/// sequence: `min_{1≤k≤T} d_k / Σ_{i<k} d_i ≤ (d_T/d_0)^{1/T} log(e d_T/d_0) / T`.
pub fn seq_min_sum_bound(d: &[f64], t: usize) -> Result<(f64, f64), TheoryError> {
    if t < 1 {
        return Err(TheoryError::ZeroT);
    }
    if d.len() < t + 1 {
        return Err(TheoryError::SequenceTooShort { len: d.len(), t });
    }
    for k in 0..=t {
        if !(d[k].is_finite() && d[k] > 0.0) || (k > 0 && d[k] < d[k - 1]) {
            return Err(TheoryError::BadSequence(k));
        }
    }
    let mut prefix = 0.0;
    let mut lhs = f64::INFINITY;
    for k in 1..=t {
        prefix += d[k - 1];
        lhs = lhs.min(d[k] / prefix);
    }
    let ratio = d[t] / d[0];
    let rhs = ratio.powf(1.0 / t as f64) * (E * ratio).ln() / t as f64;
    Ok((lhs, rhs))
}

/// Adversarial probe of the recurrence `d_{k+1} ≤ max{d_k, R + γ d_k}`:
/// saturates it with uniform draws and asserts the induction bound
/// `d_k ≤ max{R/(1-γ), d_0}` at every step.
pub fn bound_induction_check(
    d0: f64,
    r: f64,
    gamma: f64,
    steps: usize,
    seed: u64,
) -> Result<bool, TheoryError> {
    if !(d0.is_finite() && d0 >= 0.0) {
        return Err(TheoryError::BadConstant { name: "d0", got: d0 });
    }
    if !(r.is_finite() && r >= 0.0) {
        return Err(TheoryError::BadConstant { name: "r", got: r });
    }
    if !(0.0..1.0).contains(&gamma) {
        return Err(TheoryError::BadGamma(gamma));
    }
    let bound = (r / (1.0 - gamma)).max(d0);
    let mut rng = seeded_rng(seed);
    let mut d = d0;
    for _ in 0..steps {
        let cap = d.max(r + gamma * d);
        d = rng.random_range(0.0..=cap);
        if d > bound {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Margin of every trace prefix against the main-rate envelope:
/// `margin(T') = eD/√T'·log(eD̄/r̄) - v*_{T'}` for `T' = 1..len`. All margins
/// nonnegative (up to `1e-10` of the envelope) is the rate certificate.
pub fn rate_envelope(trace: &RunTrace, rc: &RateConstants) -> Result<Vec<f64>, TheoryError> {
    let v = trace.v.as_ref().ok_or(TheoryError::MissingV)?;
    let mut best = f64::INFINITY;
    let mut margins = Vec::with_capacity(v.len());
    for (i, &vi) in v.iter().enumerate() {
        best = best.min(vi);
        margins.push(rc.envelope(i + 1) - best);
    }
    Ok(margins)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn all_specs() -> Vec<ClassSpec> {
        vec![
            ClassSpec::Lipschitz { l0: 2.0 },
            ClassSpec::LipschitzSmooth { l1: 2.0, grad_star: 0.5 },
            ClassSpec::HolderSmooth { nu: 0.5, h_nu: 1.3, grad_star: 0.7 },
            ClassSpec::HighOrder {
                p: 3,
                l_p: 2.0,
                derivative_norms: vec![1.5, 0.8],
                grad_star: 0.4,
            },
            ClassSpec::Qsc { m: 0.8, hess_norm: 1.2, grad_star: 0.3 },
            ClassSpec::L0L1 { l0: 1.1, l1: 0.6, grad_star: 0.2 },
        ]
    }

    #[test]
    fn delta_eps_examples() {
        assert_eq!(delta_eps(&ClassSpec::Lipschitz { l0: 2.0 }, 1.0), 0.5);
        // g* term drops: sqrt(0.5/2) = 0.5
        assert_eq!(
            delta_eps(&ClassSpec::LipschitzSmooth { l1: 2.0, grad_star: 0.0 }, 0.5),
            0.5
        );
        // min{sqrt(1), 1/2} = 0.5
        assert_eq!(
            delta_eps(&ClassSpec::LipschitzSmooth { l1: 1.0, grad_star: 1.0 }, 1.0),
            0.5
        );
        // M = 0 drops the 1/M term
        let qsc = ClassSpec::Qsc { m: 0.0, hess_norm: 0.0, grad_star: 0.0 };
        assert_eq!(delta_eps(&qsc, 1.0), f64::INFINITY);
    }

    #[test]
    fn holder_at_nu_one_matches_lipschitz_smooth() {
        for eps in [1e-6, 1e-3, 0.25, 1.0] {
            for (l1, g) in [(2.0, 0.0), (1.0, 1.0), (0.3, 2.5)] {
                let holder = ClassSpec::HolderSmooth { nu: 1.0, h_nu: l1, grad_star: g };
                let smooth = ClassSpec::LipschitzSmooth { l1, grad_star: g };
                let dh = delta_eps(&holder, eps);
                let ds = delta_eps(&smooth, eps);
                assert_relative_eq!(dh, ds, max_relative = 1e-12);
                assert_relative_eq!(
                    growth_upper_bound(&holder, dh),
                    growth_upper_bound(&smooth, ds),
                    max_relative = 1e-12
                );
            }
        }
    }

    #[test]
    fn growth_examples() {
        assert_eq!(growth_upper_bound(&ClassSpec::Lipschitz { l0: 3.0 }, 2.0), 6.0);
        // smooth {L1=2, g*=0}: delta(0.5) = 0.5 and omega(0.5) = 0.25 <= eps
        let spec = ClassSpec::LipschitzSmooth { l1: 2.0, grad_star: 0.0 };
        let d = delta_eps(&spec, 0.5);
        assert_eq!(growth_upper_bound(&spec, d), 0.25);
        // QSC at t = 0
        let qsc = ClassSpec::Qsc { m: 0.8, hess_norm: 1.2, grad_star: 0.3 };
        assert_eq!(growth_upper_bound(&qsc, 0.0), 0.0);
    }

    #[test]
    fn phi_and_xi_series_agree_with_direct_formula() {
        // At the series/direct crossover the two evaluations must be
        // indistinguishable at working precision.
        for t in [1e-4, 1.2e-4, 2e-4, 1e-3] {
            let direct = (f64::exp_m1(t) - t) / (t * t);
            assert_relative_eq!(phi_series(t), direct, max_relative = 1e-10);
        }
        assert_eq!(phi(0.0), 0.5);
        assert_eq!(xi(0.0), 0.0);
        // Reference values from a 50-digit evaluation of (e^t - t - 1)/t^2.
        assert_relative_eq!(
            phi(1e-5),
            0.5000016666708333416666805555753968,
            max_relative = 1e-15
        );
        assert_relative_eq!(phi(1.0), E - 2.0, max_relative = 1e-14);
        assert_relative_eq!(xi(1.0), E - 2.0, max_relative = 1e-14);
        assert_relative_eq!(xi(1e-5), 5.0000166667083334e-11, max_relative = 1e-14);
    }

    #[test]
    fn delta_growth_consistency_across_classes() {
        for spec in all_specs() {
            spec.validate().unwrap();
            for i in 0..25 {
                let eps = 10f64.powf(-6.0 + 6.0 * i as f64 / 24.0);
                let d = delta_eps(&spec, eps);
                assert!(d > 0.0);
                let w = growth_upper_bound(&spec, d);
                assert!(
                    w <= eps * (1.0 + 1e-9),
                    "{spec:?}: omega({d}) = {w} > {eps}"
                );
            }
        }
    }

    #[test]
    fn delta_eps_is_monotone_in_eps() {
        for spec in all_specs() {
            let mut prev = 0.0;
            for i in 0..40 {
                let eps = 10f64.powf(-6.0 + 7.0 * i as f64 / 39.0);
                let d = delta_eps(&spec, eps);
                assert!(d >= prev, "{spec:?} not monotone at eps = {eps}");
                prev = d;
            }
        }
    }

    #[test]
    fn complexity_matches_composition_identity() {
        let rc = RateConstants::new(3.0, 1e-6, 2.0 * SQRT_2).unwrap();
        for spec in all_specs() {
            for i in 0..10 {
                let eps = 10f64.powf(-5.0 + 5.0 * i as f64 / 9.0);
                let direct = complexity_t(&spec, eps, &rc);
                let composed = rc.t_v(delta_eps(&spec, eps));
                assert_relative_eq!(direct, composed, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn complexity_example_nonsmooth() {
        // L0 = 1, eps = 0.1, D = 1, D_bar/rbar = 1: T = e^2 * 100.
        let rc = RateConstants { d0: 0.0, rbar: 1.0, c: 2.0 * SQRT_2, d_bar: 1.0, d: 1.0 };
        let t = complexity_t(&ClassSpec::Lipschitz { l0: 1.0 }, 0.1, &rc);
        assert_relative_eq!(t, E * E * 100.0, max_relative = 1e-12);
        // smooth with g* = 0: T = (L1/eps) * base
        let t = complexity_t(&ClassSpec::LipschitzSmooth { l1: 2.0, grad_star: 0.0 }, 0.1, &rc);
        assert_relative_eq!(t, 20.0 * E * E, max_relative = 1e-12);
        // all constants zero: any T suffices
        let t = complexity_t(&ClassSpec::Lipschitz { l0: 0.0 }, 0.1, &rc);
        assert_eq!(t, 0.0);
    }

    #[test]
    fn rate_constants_at_optimal_c() {
        let rc = RateConstants::new(2.0, 1e-6, 2.0 * SQRT_2).unwrap();
        assert_relative_eq!(rc.d_bar, 8.0, max_relative = 1e-15); // max{r, 4 D0}
        assert_relative_eq!(rc.d, 4.0 * 2.0 + 0.5 * 8.0, max_relative = 1e-15);
        assert!(RateConstants::new(2.0, 1e-6, SQRT_2).is_err());
        assert!(RateConstants::new(2.0, 0.0, 3.0).is_err());
        // rbar dominates when D0 is tiny
        let rc = RateConstants::new(0.0, 0.5, 3.0).unwrap();
        assert_eq!(rc.d_bar, 0.5);
    }

    #[test]
    fn v_measure_examples() {
        let ctx = NormContext::identity(2);
        // f = ||x||^2/2 at x = (0,2), x* = 0, g = x: v = 2
        assert_eq!(
            v_measure(&ctx, &[0.0, 2.0], &[0.0, 2.0], &[0.0, 0.0]).unwrap(),
            2.0
        );
        // x = x* with nonzero g
        assert_eq!(
            v_measure(&ctx, &[1.0, 0.0], &[3.0, 1.0], &[3.0, 1.0]).unwrap(),
            0.0
        );
        // diagonal B: <g, x-x*> = 1, ||g||_* = 1/2, v = 2
        let ctx = NormContext::diagonal(vec![4.0, 1.0]).unwrap();
        assert_eq!(
            v_measure(&ctx, &[1.0, 0.0], &[1.0, 0.0], &[0.0, 0.0]).unwrap(),
            2.0
        );
        // zero gradient errors
        assert!(matches!(
            v_measure(&ctx, &[0.0, 0.0], &[1.0, 0.0], &[0.0, 0.0]),
            Err(TheoryError::ZeroGradient)
        ));
        // tiny negative artifact clamps, larger negatives pass through
        assert_eq!(v_from_parts(-1e-14, 1.0, 0.5), (0.0, true));
        let (raw, clamped) = v_from_parts(-0.5, 1.0, 0.5);
        assert_eq!(raw, -0.5);
        assert!(!clamped);
    }

    #[test]
    fn seq_min_sum_examples() {
        // constant sequence: equality at 1/T
        let d = vec![1.0; 9];
        let (lhs, rhs) = seq_min_sum_bound(&d, 8).unwrap();
        assert_eq!(lhs, 1.0 / 8.0);
        assert!((rhs - 1.0 / 8.0).abs() <= 1e-12 / 8.0);

        // d = (1, 2, 4), T = 2: lhs = 4/3, rhs = 1 + log 4
        let (lhs, rhs) = seq_min_sum_bound(&[1.0, 2.0, 4.0], 2).unwrap();
        assert_relative_eq!(lhs, 4.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(rhs, 1.0 + 4.0f64.ln(), max_relative = 1e-15);
        assert!(lhs <= rhs * (1.0 + 1e-12));

        assert!(matches!(
            seq_min_sum_bound(&[1.0, 0.5], 1),
            Err(TheoryError::BadSequence(1))
        ));
        assert!(matches!(
            seq_min_sum_bound(&[1.0, -1.0], 1),
            Err(TheoryError::BadSequence(1))
        ));
        assert!(seq_min_sum_bound(&[1.0], 1).is_err());
        assert!(seq_min_sum_bound(&[1.0, 2.0], 0).is_err());
    }

    #[test]
    fn seq_min_sum_on_geometric_families() {
        for rho in [1.0f64, 1.1, 2.0, 10.0] {
            let d: Vec<f64> = (0..33).map(|k| rho.powi(k)).collect();
            let (lhs, rhs) = seq_min_sum_bound(&d, 32).unwrap();
            assert!(lhs <= rhs * (1.0 + 1e-12), "rho = {rho}: {lhs} > {rhs}");
        }
    }

    #[test]
    fn bound_induction_examples() {
        assert!(bound_induction_check(0.0, 1.0, 0.5, 2000, 1).unwrap());
        assert!(bound_induction_check(3.0, 0.0, 0.9, 2000, 2).unwrap()); // contraction only
        assert!(bound_induction_check(0.5, 2.0, 0.0, 2000, 3).unwrap()); // max{R, d0}
        assert!(bound_induction_check(1.0, 1.0, 1.0, 10, 0).is_err());
        assert!(bound_induction_check(-1.0, 1.0, 0.5, 10, 0).is_err());
    }

    #[test]
    fn log_plus_definition() {
        assert_eq!(log_plus(1.0), 1.0);
        assert_relative_eq!(log_plus(E), 2.0, max_relative = 1e-15);
    }
}
