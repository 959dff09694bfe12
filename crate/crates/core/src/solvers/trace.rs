//! Per-iteration run records and their CSV form.

use serde::{Deserialize, Serialize};
use std::io::{self, Write};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    Dada,
    Wda,
    SimplifiedDog,
}

impl SolverKind {
    pub fn label(&self) -> &'static str {
        match self {
            SolverKind::Dada => "dada",
            SolverKind::Wda => "wda",
            SolverKind::SimplifiedDog => "simplified-dog",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    /// Ran the full iteration budget.
    Budget,
    /// Hit a (numerically) zero subgradient: the exact solution was found.
    ZeroGradient,
    /// The oracle produced a non-finite value; the trace holds the iterations
    /// completed before the failure.
    NumericFailure,
}

/// Exact header of the trace CSV. The `v` and `D` columns stay empty when the
/// oracle's solution is unknown.
pub const TRACE_CSV_HEADER: &str = "k,f,best_f,gnorm,a,beta,r,rbar,v,D";

/// Full-retention payload: every iterate and subgradient, plus the β of every
/// subproblem actually solved (`betas[k]` built `xs[k]`; `betas[0]` is the
/// row-0 convention). Opt-in — the lemma checks need it, plain runs do not.
#[derive(Debug, Clone)]
pub struct Retained {
    pub xs: Vec<Vec<f64>>,
    pub gs: Vec<Vec<f64>>,
    pub betas: Vec<f64>,
}

/// The record of one solver run. Row `k` describes the `k`-th queried point:
/// `f_k`, `‖g_k‖_*`, the coefficients `a_k`, `β_k`, the distances
/// `r_k = ‖x_k - x₀‖` and `r̄_k = max{r̄, max_{t≤k} r_t}`, the running best
/// value, and — when the oracle knows `x*` — the diagnostics `v_k`, `D_k`.
#[derive(Debug, Clone)]
pub struct RunTrace {
    pub solver: SolverKind,
    /// Schedule constant for DADA traces.
    pub c: Option<f64>,
    /// Initial distance floor r̄ (zero for WDA, which has none).
    pub rbar0: f64,
    pub f: Vec<f64>,
    pub best_f: Vec<f64>,
    pub gnorm: Vec<f64>,
    pub a: Vec<f64>,
    pub beta: Vec<f64>,
    pub r: Vec<f64>,
    pub rbar: Vec<f64>,
    pub v: Option<Vec<f64>>,
    pub dist: Option<Vec<f64>>,
    /// How many v values were clamped up from a tiny negative rounding
    /// artifact.
    pub v_clamp_count: usize,
    pub best_point: Vec<f64>,
    pub best_value: f64,
    pub termination: Termination,
    pub retained: Option<Retained>,
}

impl RunTrace {
    /// Number of recorded iterations, which equals the number of oracle calls.
    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    pub fn oracle_calls(&self) -> usize {
        self.len()
    }

    /// Write the trace in the fixed CSV schema. Floats are printed with
    /// Rust's shortest round-trip formatting, so replays compare bit-exactly.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "{TRACE_CSV_HEADER}")?;
        for k in 0..self.len() {
            let v = match &self.v {
                Some(col) => col[k].to_string(),
                None => String::new(),
            };
            let dist = match &self.dist {
                Some(col) => col[k].to_string(),
                None => String::new(),
            };
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{}",
                k,
                self.f[k],
                self.best_f[k],
                self.gnorm[k],
                self.a[k],
                self.beta[k],
                self.r[k],
                self.rbar[k],
                v,
                dist
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }
}
