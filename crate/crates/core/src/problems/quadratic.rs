//! Synthetic quadratic `f(x) = ½ ‖x‖₂²` — the oracle with every class
//! constant known exactly (`L₁ = 1`, `∇f(x*) = 0`), used throughout the
//! verification layer.

use serde::{Deserialize, Serialize};

use super::{check_dim, Eval, FirstOrderOracle, GenError, OracleError};
use crate::theory::ClassSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticProblem {
    pub d: usize,
    solution: Vec<f64>,
}

impl QuadraticProblem {
    pub fn new(d: usize) -> Result<Self, GenError> {
        if d < 1 {
            return Err(GenError::TooSmall { name: "d", min: 1, got: d });
        }
        Ok(QuadraticProblem { d, solution: vec![0.0; d] })
    }

    pub fn dim(&self) -> usize {
        self.d
    }
}

impl FirstOrderOracle for QuadraticProblem {
    fn dim(&self) -> usize {
        self.d
    }

    fn eval(&self, x: &[f64]) -> Result<Eval, OracleError> {
        check_dim(self.d, x)?;
        let value = 0.5 * x.iter().map(|&xi| xi * xi).sum::<f64>();
        Ok(Eval { value, subgrad: x.to_vec() })
    }

    fn known_solution(&self) -> Option<&[f64]> {
        Some(&self.solution)
    }

    fn known_optimum(&self) -> Option<f64> {
        Some(0.0)
    }

    fn class_info(&self) -> Option<ClassSpec> {
        Some(ClassSpec::LipschitzSmooth { l1: 1.0, grad_star: 0.0 })
    }
}
