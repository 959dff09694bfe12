//! Parameter-free convex optimization built around dual averaging with
//! distance adaptation, plus the baselines, benchmark problems, and numeric
//! verification layer used to exercise it.
//!
//! * [`space`] — primal/dual norms induced by an SPD matrix `B`.
//! * [`problems`] — first-order oracles (softmax, polyhedron feasibility,
//!   worst-case chained powers, a synthetic quadratic) with reproducible
//!   generators and a finite-difference gradient checker.
//! * [`sets`] — simple feasible sets and the closed-form dual-averaging
//!   subproblem.
//! * [`solvers`] — the distance-adaptive solver, the weighted dual-averaging
//!   baseline, a simplified DoG-style baseline, run traces, and the
//!   per-iteration inequality checks.
//! * [`theory`] — executable `δ(ε)` / `T(ε)` / `ω(t)` formulas for six
//!   function classes, the suboptimality measure, sequence lemmas, and the
//!   convergence-rate envelope.

pub mod problems;
pub mod sets;
pub mod solvers;
pub mod space;
pub mod theory;

pub use problems::{FirstOrderOracle, Problem, ProblemSpec};
pub use sets::FeasibleSet;
pub use solvers::{run_dada, run_dog_simplified, run_wda, DadaConfig, DogConfig, RunTrace, WdaConfig};
pub use space::NormContext;
