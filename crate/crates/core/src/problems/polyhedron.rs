//! The polyhedron feasibility problem
//! `f(x) = (1/n) Σ_i [⟨a_i, x⟩ - b_i]_+^q` with `q ∈ [1, 2]`.
//!
//! `f` is Hölder-smooth with parameter `ν = q - 1`, so sweeping `q` probes a
//! solver's robustness to the smoothness level. A point of the polyhedron is
//! planted during generation, hence `f* = 0`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{check_dim, seeded_rng, Eval, FirstOrderOracle, GenError, OracleError};
use crate::space::dot;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyhedronProblem {
    pub n: usize,
    pub d: usize,
    pub q: f64,
    /// Sphere radius parameter `R` used at generation time.
    pub radius: Option<f64>,
    pub seed: Option<u64>,
    /// Row-major `n x d`.
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// Planted feasible point with `f(x*) = 0`.
    pub solution: Vec<f64>,
}

/// `s^q` with fast paths for the exponents the benchmarks sweep.
#[inline]
fn pow_q(s: f64, q: f64) -> f64 {
    if q == 1.0 {
        s
    } else if q == 2.0 {
        s * s
    } else if q == 1.5 {
        s * s.sqrt()
    } else {
        s.powf(q)
    }
}

impl PolyhedronProblem {
    /// Wrap explicit data; validates that the planted point is feasible, which
    /// is what makes `f(solution) = 0` exact.
    pub fn new(
        n: usize,
        d: usize,
        a: Vec<f64>,
        b: Vec<f64>,
        q: f64,
        solution: Vec<f64>,
    ) -> Result<Self, GenError> {
        if n < 1 {
            return Err(GenError::TooSmall { name: "n", min: 1, got: n });
        }
        if d < 1 {
            return Err(GenError::TooSmall { name: "d", min: 1, got: d });
        }
        if !(1.0..=2.0).contains(&q) {
            return Err(GenError::BadExponent(q));
        }
        if a.len() != n * d || b.len() != n || solution.len() != d {
            return Err(GenError::BadShape(format!(
                "a: {} (want {}), b: {} (want {n}), solution: {} (want {d})",
                a.len(),
                n * d,
                b.len(),
                solution.len()
            )));
        }
        for i in 0..n {
            let slack = dot(&a[i * d..(i + 1) * d], &solution) - b[i];
            if slack > 0.0 {
                return Err(GenError::InfeasiblePlant { row: i, slack });
            }
        }
        Ok(PolyhedronProblem { n, d, q, radius: None, seed: None, a, b, solution })
    }

    /// Random instance with a solution planted on the sphere of radius
    /// `0.95 * radius`.
    ///
    /// Draw order (ChaCha8 from `seed`): `d` standard normal components for
    /// `x*` (redrawn in the probability-zero event the vector underflows),
    /// then the `n*d` entries of `A` row by row uniform in [-1, 1], then the
    /// `n` slacks `s_i` uniform in [0, -0.1*c_min]. The sign of the last row
    /// is flipped if `⟨a_n, x*⟩ ≥ 0`, which forces `c_min < 0`; finally
    /// `b_i = ⟨a_i, x*⟩ + s_i`.
    ///
    /// The sampler for "uniform on the sphere" is normalized Gaussians.
    pub fn generate(n: usize, d: usize, radius: f64, q: f64, seed: u64) -> Result<Self, GenError> {
        if n < 2 {
            return Err(GenError::TooSmall { name: "n", min: 2, got: n });
        }
        if d < 1 {
            return Err(GenError::TooSmall { name: "d", min: 1, got: d });
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(GenError::BadPositive { name: "radius", got: radius });
        }
        if !(1.0..=2.0).contains(&q) {
            return Err(GenError::BadExponent(q));
        }
        let mut rng = seeded_rng(seed);

        let xstar: Vec<f64> = loop {
            let z: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            let norm = dot(&z, &z).sqrt();
            if norm > 1e-12 {
                let scale = 0.95 * radius / norm;
                break z.into_iter().map(|zi| scale * zi).collect();
            }
        };

        let mut a: Vec<f64> = (0..n * d).map(|_| rng.random_range(-1.0..=1.0)).collect();
        if dot(&a[(n - 1) * d..], &xstar) >= 0.0 {
            for v in a[(n - 1) * d..].iter_mut() {
                *v = -*v;
            }
        }
        let c: Vec<f64> = (0..n).map(|i| dot(&a[i * d..(i + 1) * d], &xstar)).collect();
        let c_min = c.iter().cloned().fold(f64::INFINITY, f64::min);
        if c_min >= 0.0 {
            return Err(GenError::DegeneratePlant(c_min));
        }
        let b: Vec<f64> = c
            .iter()
            .map(|&ci| ci + rng.random_range(0.0..=(-0.1 * c_min)))
            .collect();

        let mut prob = PolyhedronProblem::new(n, d, a, b, q, xstar)?;
        prob.radius = Some(radius);
        prob.seed = Some(seed);
        Ok(prob)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.a[i * self.d..(i + 1) * self.d]
    }

    /// `(2/n) Σ ‖a_i‖₂²`, a Lipschitz constant for the gradient when `q = 2`.
    pub fn smoothness_bound_q2(&self) -> f64 {
        (0..self.n).map(|i| dot(self.row(i), self.row(i))).sum::<f64>() * 2.0 / self.n as f64
    }
}

impl FirstOrderOracle for PolyhedronProblem {
    fn dim(&self) -> usize {
        self.d
    }

    fn eval(&self, x: &[f64]) -> Result<Eval, OracleError> {
        check_dim(self.d, x)?;
        let inv_n = 1.0 / self.n as f64;
        let mut value = 0.0;
        let mut g = vec![0.0; self.d];
        for i in 0..self.n {
            let slack = dot(self.row(i), x) - self.b[i];
            if slack > 0.0 {
                value += pow_q(slack, self.q);
                // q = 1 on the boundary contributes 0, a valid subgradient.
                let w = if self.q == 1.0 {
                    inv_n
                } else {
                    self.q * pow_q(slack, self.q - 1.0) * inv_n
                };
                for (gj, &aj) in g.iter_mut().zip(self.row(i)) {
                    *gj += w * aj;
                }
            }
        }
        Ok(Eval { value: value * inv_n, subgrad: g })
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

    #[test]
    fn single_constraint_quadratic_penalty() {
        // q=2, n=1, d=1, a=1, b=0, x=3 -> (9, 6)
        let p = PolyhedronProblem::new(1, 1, vec![1.0], vec![0.0], 2.0, vec![-1.0]).unwrap();
        let e = p.eval(&[3.0]).unwrap();
        assert_eq!(e.value, 9.0);
        assert_eq!(e.subgrad, vec![6.0]);
    }

    #[test]
    fn inactive_constraints_vanish() {
        let p = PolyhedronProblem::new(
            2,
            2,
            vec![1.0, 0.0, 0.0, 1.0],
            vec![1.0, 1.0],
            1.0,
            vec![0.0, 0.0],
        )
        .unwrap();
        let e = p.eval(&[0.5, -2.0]).unwrap();
        assert_eq!(e.value, 0.0);
        assert_eq!(e.subgrad, vec![0.0, 0.0]);
    }

    #[test]
    fn planted_point_is_exactly_optimal() {
        for seed in 0..50u64 {
            let p = PolyhedronProblem::generate(20, 8, 5.0, 1.5, seed).unwrap();
            let e = p.eval(&p.solution.clone()).unwrap();
            assert_eq!(e.value, 0.0, "seed {seed}");
            assert!(e.subgrad.iter().all(|&g| g == 0.0), "seed {seed}");
        }
    }

    #[test]
    fn planted_point_lies_on_the_scaled_sphere() {
        let p = PolyhedronProblem::generate(10, 6, 4.0, 1.0, 3).unwrap();
        let norm = dot(&p.solution, &p.solution).sqrt();
        assert!((norm - 0.95 * 4.0).abs() < 1e-9);
    }

    #[test]
    fn c_min_is_negative_by_construction() {
        for seed in 0..20u64 {
            let p = PolyhedronProblem::generate(5, 3, 2.0, 2.0, seed).unwrap();
            let c_min = (0..p.n)
                .map(|i| dot(p.row(i), &p.solution))
                .fold(f64::INFINITY, f64::min);
            assert!(c_min < 0.0, "seed {seed}: c_min = {c_min}");
        }
    }

    #[test]
    fn generation_is_deterministic_per_seed() {
        let p1 = PolyhedronProblem::generate(6, 4, 3.0, 1.5, 123).unwrap();
        let p2 = PolyhedronProblem::generate(6, 4, 3.0, 1.5, 123).unwrap();
        assert_eq!(p1, p2);
    }

    #[test]
    fn q1_boundary_subgradient_is_valid() {
        // Constraint active with slack exactly 0 at x: the chosen subgradient
        // must still satisfy f(y) >= f(x) + <g, y-x>.
        let p = PolyhedronProblem::new(2, 1, vec![1.0, -1.0], vec![0.0, 5.0], 1.0, vec![-1.0])
            .unwrap();
        let x = [0.0];
        let ex = p.eval(&x).unwrap();
        assert_eq!(ex.value, 0.0);
        for y in [-2.0, -0.5, 0.0, 0.5, 2.0] {
            let ey = p.eval(&[y]).unwrap();
            assert!(ey.value >= ex.value + ex.subgrad[0] * (y - x[0]) - 1e-15);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(PolyhedronProblem::generate(1, 3, 1.0, 1.5, 0).is_err());
        assert!(PolyhedronProblem::generate(3, 3, 0.0, 1.5, 0).is_err());
        assert!(PolyhedronProblem::generate(3, 3, 1.0, 2.5, 0).is_err());
        assert!(PolyhedronProblem::generate(3, 3, 1.0, 0.5, 0).is_err());
    }
}
