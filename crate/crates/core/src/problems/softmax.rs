//! The log-sum-exp test problem: `f(x) = μ log Σ_i exp[(⟨a_i, x⟩ - b_i)/μ]`,
//! a smooth approximation of `max_i [⟨a_i, x⟩ - b_i]`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{check_dim, seeded_rng, Eval, FirstOrderOracle, GenError, OracleError};
use crate::space::dot;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoftmaxProblem {
    pub n: usize,
    pub d: usize,
    pub mu: f64,
    /// Generation seed; `None` for hand-constructed data.
    pub seed: Option<u64>,
    /// Row-major `n x d`.
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// Set by `generate`, which recenters the data so that `x* = 0`.
    pub solution: Option<Vec<f64>>,
    /// `f(0)` of a generated instance, the optimal value up to rounding.
    pub optimum: Option<f64>,
}

impl SoftmaxProblem {
    /// Wrap explicit data. No solution is assumed known.
    pub fn new(n: usize, d: usize, a: Vec<f64>, b: Vec<f64>, mu: f64) -> Result<Self, GenError> {
        if n < 1 {
            return Err(GenError::TooSmall { name: "n", min: 1, got: n });
        }
        if d < 1 {
            return Err(GenError::TooSmall { name: "d", min: 1, got: d });
        }
        if !(mu.is_finite() && mu > 0.0) {
            return Err(GenError::BadPositive { name: "mu", got: mu });
        }
        if a.len() != n * d {
            return Err(GenError::BadShape(format!(
                "a has {} entries, expected {}",
                a.len(),
                n * d
            )));
        }
        if b.len() != n {
            return Err(GenError::BadShape(format!(
                "b has {} entries, expected {}",
                b.len(),
                n
            )));
        }
        Ok(SoftmaxProblem { n, d, mu, seed: None, a, b, solution: None, optimum: None })
    }

    /// Random instance with `x* = 0` planted by recentering.
    ///
    /// Draw order (ChaCha8 from `seed`): the `n*d` entries of `Â` row by row,
    /// each uniform in [-1, 1]; then the `n` entries of `b`, uniform in
    /// [-1, 1]. The rows are then recentered, `a_i = â_i - ∇f̂(0)`, which
    /// makes the gradient at the origin vanish.
    pub fn generate(n: usize, d: usize, mu: f64, seed: u64) -> Result<Self, GenError> {
        let mut rng = seeded_rng(seed);
        let a_hat: Vec<f64> = (0..n * d).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let b: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();

        let mut prob = SoftmaxProblem::new(n, d, a_hat, b, mu)?;
        let grad0 = prob.eval(&vec![0.0; d]).expect("finite generated data").subgrad;
        for i in 0..n {
            for j in 0..d {
                prob.a[i * d + j] -= grad0[j];
            }
        }
        prob.seed = Some(seed);
        prob.solution = Some(vec![0.0; d]);
        prob.optimum = Some(prob.eval(&vec![0.0; d]).expect("finite generated data").value);
        Ok(prob)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.a[i * self.d..(i + 1) * self.d]
    }

    /// `max_i ‖a_i‖₂`, the natural scale of the data.
    pub fn max_row_norm(&self) -> f64 {
        (0..self.n)
            .map(|i| dot(self.row(i), self.row(i)).sqrt())
            .fold(0.0, f64::max)
    }
}

impl FirstOrderOracle for SoftmaxProblem {
    fn dim(&self) -> usize {
        self.d
    }

    /// Log-sum-exp with max-subtraction; the softmax weights are computed in
    /// the shifted domain, so no exponential can overflow.
    fn eval(&self, x: &[f64]) -> Result<Eval, OracleError> {
        check_dim(self.d, x)?;
        let mut t = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let ti = (dot(self.row(i), x) - self.b[i]) / self.mu;
            if !ti.is_finite() {
                return Err(OracleError::NonFiniteRow { row: i });
            }
            t.push(ti);
        }
        let m = t.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut weights: Vec<f64> = t.iter().map(|&ti| (ti - m).exp()).collect();
        let sum: f64 = weights.iter().sum();
        let value = self.mu * (m + sum.ln());
        for w in weights.iter_mut() {
            *w /= sum;
        }
        // subgradient = Aᵀ π
        let mut g = vec![0.0; self.d];
        for i in 0..self.n {
            let w = weights[i];
            for (gj, &aj) in g.iter_mut().zip(self.row(i)) {
                *gj += w * aj;
            }
        }
        Ok(Eval { value, subgrad: g })
    }

    fn known_solution(&self) -> Option<&[f64]> {
        self.solution.as_deref()
    }

    fn known_optimum(&self) -> Option<f64> {
        self.optimum
    }
}
