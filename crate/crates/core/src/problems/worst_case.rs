//! The chained-difference worst-case function
//! `f(x) = (1/p) Σ_{i<d} |x^(i) - x^(i+1)|^p + (1/p) |x^(d)|^p` with `p ≥ 2`,
//! an instance with Lipschitz (p-1)-th derivative and minimizer `x* = 0`.

use serde::{Deserialize, Serialize};

use super::{check_dim, Eval, FirstOrderOracle, GenError, OracleError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorstCaseProblem {
    pub d: usize,
    pub p: f64,
    solution: Vec<f64>,
}

/// `|t|^e * sign(t)` with fast paths for the benchmark powers.
#[inline]
fn signed_pow(t: f64, e: f64) -> f64 {
    if e == 1.0 {
        t
    } else if e == 2.0 {
        t.abs() * t
    } else if e == 3.0 {
        t * t * t
    } else {
        t.abs().powf(e) * t.signum()
    }
}

#[inline]
fn abs_pow(t: f64, e: f64) -> f64 {
    if e == 2.0 {
        t * t
    } else if e == 3.0 {
        let a = t.abs();
        a * a * a
    } else if e == 4.0 {
        let s = t * t;
        s * s
    } else {
        t.abs().powf(e)
    }
}

impl WorstCaseProblem {
    pub fn new(d: usize, p: f64) -> Result<Self, GenError> {
        if d < 1 {
            return Err(GenError::TooSmall { name: "d", min: 1, got: d });
        }
        if !(p.is_finite() && p >= 2.0) {
            return Err(GenError::BadPower(p));
        }
        Ok(WorstCaseProblem { d, p, solution: vec![0.0; d] })
    }

    pub fn dim(&self) -> usize {
        self.d
    }
}

impl FirstOrderOracle for WorstCaseProblem {
    fn dim(&self) -> usize {
        self.d
    }

    fn eval(&self, x: &[f64]) -> Result<Eval, OracleError> {
        check_dim(self.d, x)?;
        let p = self.p;
        let mut value = 0.0;
        let mut g = vec![0.0; self.d];
        for i in 0..self.d - 1 {
            let delta = x[i] - x[i + 1];
            value += abs_pow(delta, p);
            let dpow = signed_pow(delta, p - 1.0);
            g[i] += dpow;
            g[i + 1] -= dpow;
        }
        let last = x[self.d - 1];
        value += abs_pow(last, p);
        g[self.d - 1] += signed_pow(last, p - 1.0);
        Ok(Eval { value: value / p, subgrad: g })
    }

    fn known_solution(&self) -> Option<&[f64]> {
        Some(&self.solution)
    }

    fn known_optimum(&self) -> Option<f64> {
        Some(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn all_ones_leaves_only_the_tail_term() {
        for p in [2.0, 3.0, 4.0, 2.5] {
            let prob = WorstCaseProblem::new(6, p).unwrap();
            let e = prob.eval(&vec![1.0; 6]).unwrap();
            assert_relative_eq!(e.value, 1.0 / p, max_relative = 1e-15);
            // Only the last coordinate carries gradient.
            assert!(e.subgrad[..5].iter().all(|&g| g == 0.0));
            assert_eq!(e.subgrad[5], 1.0);
        }
    }

    #[test]
    fn origin_is_stationary() {
        let prob = WorstCaseProblem::new(4, 3.0).unwrap();
        let e = prob.eval(&[0.0; 4]).unwrap();
        assert_eq!(e.value, 0.0);
        assert_eq!(e.subgrad, vec![0.0; 4]);
    }

    #[test]
    fn one_dimensional_quadratic() {
        // d=1, p=2, x=3 -> f = 4.5, gradient = 3
        let prob = WorstCaseProblem::new(1, 2.0).unwrap();
        let e = prob.eval(&[3.0]).unwrap();
        assert_eq!(e.value, 4.5);
        assert_eq!(e.subgrad, vec![3.0]);
    }

    #[test]
    fn gradient_matches_hand_expansion_d2() {
        // f = (1/p)(|x1-x2|^p + |x2|^p)
        let prob = WorstCaseProblem::new(2, 4.0).unwrap();
        let e = prob.eval(&[2.0, -1.0]).unwrap();
        assert_relative_eq!(e.value, (3.0f64.powi(4) + 1.0) / 4.0, max_relative = 1e-15);
        assert_relative_eq!(e.subgrad[0], 27.0, max_relative = 1e-15);
        assert_relative_eq!(e.subgrad[1], -27.0 - 1.0, max_relative = 1e-15);
    }

    #[test]
    fn rejects_p_below_two() {
        assert!(WorstCaseProblem::new(3, 1.5).is_err());
        assert!(WorstCaseProblem::new(0, 2.0).is_err());
    }
}
