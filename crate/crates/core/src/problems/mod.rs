//! First-order oracles for the benchmark problems, their data-generation
//! procedures, and a finite-difference gradient checker.
//!
//! A problem is immutable after construction and its evaluation is pure, so
//! oracles can be shared across concurrently running solvers. Every instance
//! serializes to JSON with its data (matrices row-major) and the generation
//! parameters plus seed, so a recorded run can be replayed.

mod polyhedron;
mod quadratic;
mod softmax;
mod worst_case;

pub use polyhedron::PolyhedronProblem;
pub use quadratic::QuadraticProblem;
pub use softmax::SoftmaxProblem;
pub use worst_case::WorstCaseProblem;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::theory::ClassSpec;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("dimension mismatch: oracle is {expected}-dimensional, point has length {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite intermediate in row {row}")]
    NonFiniteRow { row: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("{name} must be at least {min}, got {got}")]
    TooSmall {
        name: &'static str,
        min: usize,
        got: usize,
    },
    #[error("{name} must be positive and finite, got {got}")]
    BadPositive { name: &'static str, got: f64 },
    #[error("q must lie in [1, 2], got {0}")]
    BadExponent(f64),
    #[error("p must be at least 2, got {0}")]
    BadPower(f64),
    #[error("planted point violates constraint {row}: slack {slack} > 0")]
    InfeasiblePlant { row: usize, slack: f64 },
    #[error("c_min = {0} is nonnegative after the sign flip; planted point is degenerate")]
    DegeneratePlant(f64),
    #[error("data shape mismatch: {0}")]
    BadShape(String),
}

/// A function value together with one subgradient.
#[derive(Debug, Clone, PartialEq)]
pub struct Eval {
    pub value: f64,
    pub subgrad: Vec<f64>,
}

/// Evaluates `f(x)` and one element of the subdifferential at `x`.
///
/// When the construction pins down a minimizer, `known_solution` /
/// `known_optimum` expose it so the diagnostics (`v_k`, `D_k`) and the rate
/// checks can run.
pub trait FirstOrderOracle: Sync {
    fn dim(&self) -> usize;

    fn eval(&self, x: &[f64]) -> Result<Eval, OracleError>;

    fn known_solution(&self) -> Option<&[f64]> {
        None
    }

    fn known_optimum(&self) -> Option<f64> {
        None
    }

    /// Function-class constants, when known exactly.
    fn class_info(&self) -> Option<ClassSpec> {
        None
    }
}

/// The generator used by every data-generation procedure in this crate:
/// seedable, portable, and fast. Each `generate` documents its draw order, so
/// instances are reproducible within one implementation.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn check_dim(expected: usize, x: &[f64]) -> Result<(), OracleError> {
    if x.len() != expected {
        Err(OracleError::DimensionMismatch {
            expected,
            got: x.len(),
        })
    } else {
        Ok(())
    }
}

/// Generation parameters for a benchmark problem; `build` runs the matching
/// procedure. This is the form problems take in experiment-config JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProblemSpec {
    Softmax { n: usize, d: usize, mu: f64, seed: u64 },
    Polyhedron { n: usize, d: usize, radius: f64, q: f64, seed: u64 },
    WorstCase { d: usize, p: f64 },
    Quadratic { d: usize },
}

impl ProblemSpec {
    pub fn build(&self) -> Result<Problem, GenError> {
        Ok(match *self {
            ProblemSpec::Softmax { n, d, mu, seed } => {
                Problem::Softmax(SoftmaxProblem::generate(n, d, mu, seed)?)
            }
            ProblemSpec::Polyhedron { n, d, radius, q, seed } => {
                Problem::Polyhedron(PolyhedronProblem::generate(n, d, radius, q, seed)?)
            }
            ProblemSpec::WorstCase { d, p } => Problem::WorstCase(WorstCaseProblem::new(d, p)?),
            ProblemSpec::Quadratic { d } => Problem::Quadratic(QuadraticProblem::new(d)?),
        })
    }

    pub fn dim(&self) -> usize {
        match *self {
            ProblemSpec::Softmax { d, .. }
            | ProblemSpec::Polyhedron { d, .. }
            | ProblemSpec::WorstCase { d, .. }
            | ProblemSpec::Quadratic { d } => d,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ProblemSpec::Softmax { .. } => "softmax",
            ProblemSpec::Polyhedron { .. } => "polyhedron",
            ProblemSpec::WorstCase { .. } => "worst_case",
            ProblemSpec::Quadratic { .. } => "quadratic",
        }
    }
}

/// A fully materialized problem instance. Serialization carries both the data
/// and the generation parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Problem {
    Softmax(SoftmaxProblem),
    Polyhedron(PolyhedronProblem),
    WorstCase(WorstCaseProblem),
    Quadratic(QuadraticProblem),
}

impl FirstOrderOracle for Problem {
    fn dim(&self) -> usize {
        match self {
            Problem::Softmax(p) => p.dim(),
            Problem::Polyhedron(p) => p.dim(),
            Problem::WorstCase(p) => p.dim(),
            Problem::Quadratic(p) => p.dim(),
        }
    }

    fn eval(&self, x: &[f64]) -> Result<Eval, OracleError> {
        match self {
            Problem::Softmax(p) => p.eval(x),
            Problem::Polyhedron(p) => p.eval(x),
            Problem::WorstCase(p) => p.eval(x),
            Problem::Quadratic(p) => p.eval(x),
        }
    }

    fn known_solution(&self) -> Option<&[f64]> {
        match self {
            Problem::Softmax(p) => p.known_solution(),
            Problem::Polyhedron(p) => p.known_solution(),
            Problem::WorstCase(p) => p.known_solution(),
            Problem::Quadratic(p) => p.known_solution(),
        }
    }

    fn known_optimum(&self) -> Option<f64> {
        match self {
            Problem::Softmax(p) => p.known_optimum(),
            Problem::Polyhedron(p) => p.known_optimum(),
            Problem::WorstCase(p) => p.known_optimum(),
            Problem::Quadratic(p) => p.known_optimum(),
        }
    }

    fn class_info(&self) -> Option<ClassSpec> {
        match self {
            Problem::Softmax(p) => p.class_info(),
            Problem::Polyhedron(p) => p.class_info(),
            Problem::WorstCase(p) => p.class_info(),
            Problem::Quadratic(p) => p.class_info(),
        }
    }
}

/// Central finite differences against the reported subgradient; returns the
/// maximum over coordinates of `|fd_i - g_i| / max(1, |g_i|)`.
///
/// Only meaningful where the oracle is differentiable; choosing such an `x`
/// is the caller's job.
pub fn fd_gradient_check(
    oracle: &dyn FirstOrderOracle,
    x: &[f64],
    h: f64,
) -> Result<f64, OracleError> {
    check_dim(oracle.dim(), x)?;
    let g = oracle.eval(x)?.subgrad;
    let mut probe = x.to_vec();
    let mut worst = 0.0f64;
    for i in 0..x.len() {
        probe[i] = x[i] + h;
        let up = oracle.eval(&probe)?.value;
        probe[i] = x[i] - h;
        let down = oracle.eval(&probe)?.value;
        probe[i] = x[i];
        let fd = (up - down) / (2.0 * h);
        worst = worst.max((fd - g[i]).abs() / g[i].abs().max(1.0));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_build_dispatch_and_serde() {
        let spec = ProblemSpec::Softmax {
            n: 3,
            d: 4,
            mu: 0.5,
            seed: 9,
        };
        let p = spec.build().unwrap();
        assert_eq!(p.dim(), 4);
        let json = serde_json::to_string(&spec).unwrap();
        assert!(json.contains("\"kind\":\"softmax\""));
        let back: ProblemSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);

        // instance JSON records data and generation parameters
        let inst = serde_json::to_value(&p).unwrap();
        assert_eq!(inst["seed"], 9);
        assert_eq!(inst["a"].as_array().unwrap().len(), 12);
    }

    #[test]
    fn fd_check_on_quadratic_is_tight() {
        let p = QuadraticProblem::new(6).unwrap();
        let x: Vec<f64> = (0..6).map(|i| 0.3 * i as f64 - 1.0).collect();
        let err = fd_gradient_check(&p, &x, 1e-6).unwrap();
        assert!(err <= 1e-7, "fd error {err}");
    }
}
