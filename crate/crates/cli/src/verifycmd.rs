//! `dada verify`: run the numeric verification suite — every inequality and
//! complexity bound the solvers are supposed to satisfy, checked at desk
//! scale. Prints one line per check to stderr and a machine-readable report
//! to stdout; exits 0 iff everything passes.

use anyhow::{bail, Result};
use std::time::Instant;

use dada::problems::{
    fd_gradient_check, seeded_rng, FirstOrderOracle, Problem, ProblemSpec, QuadraticProblem,
};
use dada::solvers::{
    check_coefficient_placing, check_da_convergence, check_r_upper_d, default_rbar, run_dada,
    run_wda, DadaConfig, RunOptions, WdaConfig,
};
use dada::theory::{
    bound_induction_check, complexity_t, delta_eps, growth_upper_bound, rate_envelope,
    seq_min_sum_bound, ClassSpec, RateConstants,
};
use dada::{FeasibleSet, NormContext, RunTrace};
use rand::Rng;

use crate::runcmd::CheckReport;

pub const CHECK_NAMES: &[&str] = &[
    "da-convergence",
    "coefficient-placing",
    "r-upper-d",
    "seq-min-sum",
    "bound-induction",
    "delta-omega",
    "rate-envelope",
    "gradient-check",
];

/// Environment hook for negative controls: when set to a float, the battery
/// behind `r-upper-d` and `rate-envelope` runs with that schedule constant
/// instead of 2√2, bypassing the `c > √2` validation. The distance bounds are
/// then expected to break and the checks to fail.
pub const CORRUPT_C_ENV: &str = "DADA_VERIFY_CORRUPT_C";

struct BatteryRun {
    name: &'static str,
    trace: RunTrace,
    d0: f64,
    rbar: f64,
}

fn battery_problems(seed: u64) -> Vec<(&'static str, Problem)> {
    let s = seed * 1000;
    let mut cases: Vec<(&'static str, Problem)> = vec![(
        "quadratic d=50",
        Problem::Quadratic(QuadraticProblem::new(50).unwrap()),
    )];
    cases.push((
        "softmax mu=0.1",
        ProblemSpec::Softmax { n: 100, d: 200, mu: 0.1, seed: s + 101 }.build().unwrap(),
    ));
    cases.push((
        "softmax mu=0.01",
        ProblemSpec::Softmax { n: 100, d: 200, mu: 0.01, seed: s + 102 }.build().unwrap(),
    ));
    for (p, name) in [(2.0, "worst-case p=2"), (3.0, "worst-case p=3"), (4.0, "worst-case p=4")] {
        cases.push((name, ProblemSpec::WorstCase { d: 100, p }.build().unwrap()));
    }
    for (q, off, name) in [
        (1.0, 201, "polyhedron q=1"),
        (1.5, 202, "polyhedron q=1.5"),
        (2.0, 203, "polyhedron q=2"),
    ] {
        cases.push((
            name,
            ProblemSpec::Polyhedron { n: 100, d: 50, radius: 10.0, q, seed: s + off }
                .build()
                .unwrap(),
        ));
    }
    cases
}

fn run_battery(seed: u64, budget: usize, retain: bool) -> Vec<BatteryRun> {
    let corrupt_c: Option<f64> = std::env::var(CORRUPT_C_ENV)
        .ok()
        .and_then(|v| v.parse().ok());
    battery_problems(seed)
        .into_iter()
        .map(|(name, problem)| {
            let d = problem.dim();
            let ctx = NormContext::identity(d);
            let x0 = vec![1.0; d];
            let rbar = default_rbar(ctx.primal_norm(&x0).unwrap());
            let xstar = problem.known_solution().unwrap();
            let d0 = ctx.primal_norm(&dada::space::sub(&x0, xstar)).unwrap();
            let mut cfg = DadaConfig::new(rbar, budget, x0).unwrap();
            if let Some(c) = corrupt_c {
                cfg = cfg.with_c_unchecked(c);
            }
            let trace = run_dada(
                &problem,
                &ctx,
                &FeasibleSet::WholeSpace,
                &cfg,
                RunOptions { retain_full: retain },
            )
            .unwrap();
            BatteryRun { name, trace, d0, rbar }
        })
        .collect()
}

struct Outcome {
    pass: bool,
    max_violation: f64,
    detail: String,
}

fn check_da_convergence_suite(seed: u64) -> Outcome {
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut details = Vec::new();
    let set = FeasibleSet::WholeSpace;
    let retain = RunOptions { retain_full: true };
    for (name, problem) in retention_problems(seed) {
        let d = problem.dim();
        let ctx = NormContext::identity(d);
        let x0 = vec![1.0; d];
        let rbar = default_rbar(ctx.primal_norm(&x0).unwrap());
        let xstar = problem.known_solution().unwrap().to_vec();
        let d0 = ctx.primal_norm(&dada::space::sub(&x0, &xstar)).unwrap();

        let cfg = DadaConfig::new(rbar, 2000, x0.clone()).unwrap();
        let trace = run_dada(&problem, &ctx, &set, &cfg, retain).unwrap();
        let v = check_da_convergence(&trace, &ctx, &xstar, None).unwrap();
        worst = worst.max(v);
        details.push(format!("dada/{name}: {v:.2e}"));

        let cfg = WdaConfig::new(d0, 2000, x0).unwrap();
        let trace = run_wda(&problem, &ctx, &set, &cfg, retain).unwrap();
        let v = check_da_convergence(&trace, &ctx, &xstar, None).unwrap();
        worst = worst.max(v);
        details.push(format!("wda/{name}: {v:.2e}"));
    }
    Outcome { pass: worst <= 1e-8, max_violation: worst, detail: details.join("; ") }
}

fn check_coefficient_placing_suite(seed: u64) -> Outcome {
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut details = Vec::new();
    let set = FeasibleSet::WholeSpace;
    let retain = RunOptions { retain_full: true };
    for (name, problem) in retention_problems(seed) {
        let d = problem.dim();
        let ctx = NormContext::identity(d);
        let x0 = vec![1.0; d];
        let rbar = default_rbar(ctx.primal_norm(&x0).unwrap());
        let xstar = problem.known_solution().unwrap().to_vec();
        let cfg = DadaConfig::new(rbar, 2000, x0).unwrap();
        let trace = run_dada(&problem, &ctx, &set, &cfg, retain).unwrap();
        let v = check_coefficient_placing(&trace, &ctx, &xstar).unwrap();
        worst = worst.max(v);
        details.push(format!("{name}: {v:.2e}"));
    }
    Outcome { pass: worst <= 1e-8, max_violation: worst, detail: details.join("; ") }
}

fn retention_problems(seed: u64) -> Vec<(&'static str, Problem)> {
    let s = seed * 1000;
    vec![
        ("quadratic d=50", Problem::Quadratic(QuadraticProblem::new(50).unwrap())),
        (
            "softmax",
            ProblemSpec::Softmax { n: 100, d: 200, mu: 0.1, seed: s + 101 }.build().unwrap(),
        ),
        ("worst-case p=4", ProblemSpec::WorstCase { d: 100, p: 4.0 }.build().unwrap()),
        (
            "polyhedron q=1.5",
            ProblemSpec::Polyhedron { n: 100, d: 50, radius: 10.0, q: 1.5, seed: s + 202 }
                .build()
                .unwrap(),
        ),
    ]
}

fn check_r_upper_d_suite(battery: &[BatteryRun]) -> Outcome {
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut worst_name = "";
    for run in battery {
        let report = check_r_upper_d(&run.trace, run.d0).unwrap();
        let v = report
            .max_rbar_violation
            .max(report.max_dist_violation.unwrap_or(f64::NEG_INFINITY));
        if v > worst {
            worst = v;
            worst_name = run.name;
        }
    }
    Outcome {
        pass: worst <= 1e-10,
        max_violation: worst,
        detail: format!("worst case {worst_name}"),
    }
}

fn check_rate_envelope_suite(battery: &[BatteryRun]) -> Outcome {
    let mut worst_ratio: f64 = f64::INFINITY;
    let mut worst_name = "";
    for run in battery {
        let rc = match RateConstants::new(run.d0, run.rbar, run.trace.c.unwrap()) {
            Ok(rc) => rc,
            // A corrupted c <= sqrt(2) has no valid rate constants at all.
            Err(_) => {
                return Outcome {
                    pass: false,
                    max_violation: f64::INFINITY,
                    detail: format!("invalid schedule constant c = {:?}", run.trace.c),
                }
            }
        };
        let margins = rate_envelope(&run.trace, &rc).unwrap();
        for (i, margin) in margins.iter().enumerate() {
            let ratio = margin / rc.envelope(i + 1);
            if ratio < worst_ratio {
                worst_ratio = ratio;
                worst_name = run.name;
            }
        }
    }
    // The omega-upper relation applied to the quadratic, where L1 = 1 and
    // grad_star = 0 are exact: f(x_T^*) - f* <= omega(v_T^*).
    let quad = &battery[0];
    let vstar = quad
        .trace
        .v
        .as_ref()
        .unwrap()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let bound = growth_upper_bound(&ClassSpec::LipschitzSmooth { l1: 1.0, grad_star: 0.0 }, vstar);
    let omega_ok = quad.trace.best_value <= bound * (1.0 + 1e-9) + 1e-300;
    Outcome {
        pass: worst_ratio >= -1e-10 && omega_ok,
        max_violation: (-worst_ratio).max(0.0),
        detail: format!(
            "min margin/envelope {worst_ratio:.2e} ({worst_name}); omega-upper residual {:.2e} <= bound {:.2e}",
            quad.trace.best_value, bound
        ),
    }
}

fn check_seq_min_sum_suite(seed: u64) -> Outcome {
    let mut rng = seeded_rng(seed ^ 0x5e9);
    let mut worst: f64 = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let t = rng.random_range(1..=63usize);
        let mut d = Vec::with_capacity(t + 1);
        let mut value = 10f64.powf(rng.random_range(-3.0..3.0));
        let decades = rng.random_range(0.0..6.0);
        for _ in 0..=t {
            d.push(value);
            value *= 10f64.powf(rng.random_range(0.0..decades / t as f64));
        }
        let (lhs, rhs) = seq_min_sum_bound(&d, t).unwrap();
        worst = worst.max(lhs / rhs - 1.0);
    }
    for rho in [1.0f64, 1.1, 2.0, 10.0] {
        let d: Vec<f64> = (0..41).map(|k| rho.powi(k)).collect();
        let (lhs, rhs) = seq_min_sum_bound(&d, 40).unwrap();
        worst = worst.max(lhs / rhs - 1.0);
    }
    let d = vec![2.0; 17];
    let (lhs, rhs) = seq_min_sum_bound(&d, 16).unwrap();
    let equality_gap = (lhs - rhs).abs() / rhs;
    Outcome {
        pass: worst <= 1e-12 && equality_gap <= 1e-12,
        max_violation: worst.max(equality_gap),
        detail: format!("constant-sequence equality gap {equality_gap:.2e}"),
    }
}

fn check_bound_induction_suite(seed: u64) -> Outcome {
    let mut failures = 0usize;
    let mut total = 0usize;
    let mut rng = seeded_rng(seed ^ 0xb0b);
    let mut probe_seed = seed.wrapping_mul(1_000_003);
    for r in [0.0, 0.5, 1.0, 10.0] {
        for gamma in [0.0, 0.3, 0.9] {
            for _ in 0..500 {
                let d0 = rng.random_range(0.0..20.0);
                probe_seed = probe_seed.wrapping_add(1);
                total += 1;
                if !bound_induction_check(d0, r, gamma, 200, probe_seed).unwrap() {
                    failures += 1;
                }
            }
        }
    }
    Outcome {
        pass: failures == 0,
        max_violation: failures as f64,
        detail: format!("{failures}/{total} sequences exceeded the bound"),
    }
}

fn class_grid() -> Vec<ClassSpec> {
    vec![
        ClassSpec::Lipschitz { l0: 2.0 },
        ClassSpec::LipschitzSmooth { l1: 2.0, grad_star: 0.5 },
        ClassSpec::HolderSmooth { nu: 0.5, h_nu: 1.3, grad_star: 0.7 },
        ClassSpec::HighOrder { p: 3, l_p: 2.0, derivative_norms: vec![1.5, 0.8], grad_star: 0.4 },
        ClassSpec::Qsc { m: 0.8, hess_norm: 1.2, grad_star: 0.3 },
        ClassSpec::L0L1 { l0: 1.1, l1: 0.6, grad_star: 0.2 },
    ]
}

fn check_delta_omega_suite() -> Outcome {
    let rc = RateConstants::new(3.0, 1e-6, DadaConfig::OPTIMAL_C).unwrap();
    let mut growth_excess: f64 = f64::NEG_INFINITY;
    let mut comp_gap: f64 = f64::NEG_INFINITY;
    for spec in class_grid() {
        for i in 0..40 {
            let eps = 10f64.powf(-6.0 + 6.0 * i as f64 / 39.0);
            let delta = delta_eps(&spec, eps);
            growth_excess = growth_excess.max(growth_upper_bound(&spec, delta) / eps - 1.0);
            let direct = complexity_t(&spec, eps, &rc);
            let composed = rc.t_v(delta);
            comp_gap = comp_gap.max((direct - composed).abs() / composed.abs().max(1e-300));
        }
    }
    let mut holder_gap: f64 = f64::NEG_INFINITY;
    for eps in [1e-6, 1e-3, 1.0] {
        let dh = delta_eps(&ClassSpec::HolderSmooth { nu: 1.0, h_nu: 2.0, grad_star: 0.5 }, eps);
        let ds = delta_eps(&ClassSpec::LipschitzSmooth { l1: 2.0, grad_star: 0.5 }, eps);
        holder_gap = holder_gap.max((dh - ds).abs() / ds);
    }
    Outcome {
        pass: growth_excess <= 1e-9 && comp_gap <= 1e-9 && holder_gap <= 1e-12,
        max_violation: growth_excess.max(comp_gap).max(holder_gap),
        detail: format!(
            "growth excess {growth_excess:.2e}, composition gap {comp_gap:.2e}, Hölder(ν=1) gap {holder_gap:.2e}"
        ),
    }
}

fn check_gradient_suite(seed: u64) -> Outcome {
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut rng = seeded_rng(seed ^ 0xfd);
    let mut probe = |oracle: &dyn FirstOrderOracle, span: f64, rng: &mut rand_chacha::ChaCha8Rng| {
        for _ in 0..20 {
            let x: Vec<f64> =
                (0..oracle.dim()).map(|_| rng.random_range(-span..span)).collect();
            worst = worst.max(fd_gradient_check(oracle, &x, 1e-6).unwrap());
        }
    };
    let s = seed * 1000;
    let softmax = ProblemSpec::Softmax { n: 50, d: 40, mu: 0.1, seed: s + 301 }.build().unwrap();
    probe(&softmax, 1.0, &mut rng);
    for p in [2.0, 4.0] {
        let w = ProblemSpec::WorstCase { d: 50, p }.build().unwrap();
        probe(&w, 1.5, &mut rng);
    }
    let poly =
        ProblemSpec::Polyhedron { n: 100, d: 50, radius: 10.0, q: 2.0, seed: s + 302 }.build().unwrap();
    probe(&poly, 2.0, &mut rng);
    Outcome {
        pass: worst <= 1e-5,
        max_violation: worst,
        detail: "20 central-difference probes per oracle, h = 1e-6".to_string(),
    }
}

fn check_names_contains(name: &str) -> bool {
    CHECK_NAMES.contains(&name)
}

/// Run the requested checks. Returns the reports; the caller decides the exit
/// code from the pass flags.
pub fn run_checks(scope: Option<&str>, seed: u64) -> Result<Vec<CheckReport>> {
    if let Some(name) = scope {
        if !check_names_contains(name) {
            bail!("unknown check {name:?}; available: {}", CHECK_NAMES.join(", "));
        }
    }
    let wanted: Vec<&str> = match scope {
        Some(name) => vec![name],
        None => CHECK_NAMES.to_vec(),
    };

    let needs_battery = wanted.iter().any(|n| *n == "r-upper-d" || *n == "rate-envelope");
    let battery = if needs_battery { run_battery(seed, 10_000, false) } else { Vec::new() };

    let mut reports = Vec::with_capacity(wanted.len());
    for name in wanted {
        let started = Instant::now();
        let outcome = match name {
            "da-convergence" => check_da_convergence_suite(seed),
            "coefficient-placing" => check_coefficient_placing_suite(seed),
            "r-upper-d" => check_r_upper_d_suite(&battery),
            "seq-min-sum" => check_seq_min_sum_suite(seed),
            "bound-induction" => check_bound_induction_suite(seed),
            "delta-omega" => check_delta_omega_suite(),
            "rate-envelope" => check_rate_envelope_suite(&battery),
            "gradient-check" => check_gradient_suite(seed),
            _ => unreachable!("scope validated above"),
        };
        reports.push(CheckReport {
            name: name.to_string(),
            pass: outcome.pass,
            max_violation: outcome.max_violation,
            runtime_s: started.elapsed().as_secs_f64(),
            detail: outcome.detail,
        });
    }
    Ok(reports)
}
