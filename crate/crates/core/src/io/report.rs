//! Benchmark reports and singular-value spectra.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::config::RunConfig;
use crate::linalg::{singular_values, CsrMatrix};
use crate::solvers::{build_preconditioner, PreconditionerKind, SketchConfig, SolveReport, StopReason};

/// Largest `m * n` that diagnostics are allowed to densify.
pub const DENSE_GUARD: usize = 50_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub method: String,
    pub m: usize,
    pub n: usize,
    /// Preprocessing seconds: sketch, factorization, forming `B`.
    pub pcpu: f64,
    /// Iteration (or direct factorization) seconds.
    pub cpu: f64,
    pub tcpu: f64,
    pub it: Option<usize>,
    /// `||b - A x||^2 / ||b||^2`
    pub rel_ls_error: f64,
    /// `||b - A x|| / ||b||`
    pub rel_residual: f64,
    pub kappa_b: Option<f64>,
    pub effective_rank: Option<usize>,
    pub stop_reason: Option<StopReason>,
    pub pde_error: Option<f64>,
    pub residual_history: Option<Vec<f64>>,
}

/// Column order of the CSV form; `residual_history` is JSON only.
pub const CSV_FIELDS: [&str; 13] = [
    "method",
    "m",
    "n",
    "pcpu",
    "cpu",
    "tcpu",
    "it",
    "rel_ls_error",
    "rel_residual",
    "kappa_b",
    "effective_rank",
    "stop_reason",
    "pde_error",
];

/// Fields that depend on the clock and are excluded from reproducibility checks.
pub const TIMING_FIELDS: [&str; 3] = ["pcpu", "cpu", "tcpu"];

impl BenchRow {
    pub fn from_report(rep: &SolveReport, m: usize, n: usize, pde_error: Option<f64>) -> Self {
        BenchRow {
            method: rep.method.label().to_string(),
            m,
            n,
            pcpu: rep.precond_time,
            cpu: rep.solve_time,
            tcpu: rep.total_time(),
            it: rep.iterations,
            rel_ls_error: rep.relative_ls_error,
            rel_residual: rep.relative_residual,
            kappa_b: rep.kappa_b,
            effective_rank: rep.effective_rank,
            stop_reason: rep.stop_reason,
            pde_error,
            residual_history: rep.residual_history.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub matrix: String,
    pub rhs: String,
    pub nnz: usize,
    pub config: RunConfig,
    pub rows: Vec<BenchRow>,
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

impl BenchReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// One line per method, shortest round-trip float formatting.
    pub fn to_csv(&self) -> String {
        let mut s = CSV_FIELDS.join(",");
        s.push('\n');
        for r in &self.rows {
            let stop = r.stop_reason.map(|s| {
                serde_json::to_value(s)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default()
            });
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.method,
                r.m,
                r.n,
                r.pcpu,
                r.cpu,
                r.tcpu,
                opt(&r.it),
                r.rel_ls_error,
                r.rel_residual,
                opt(&r.kappa_b),
                opt(&r.effective_rank),
                opt(&stop),
                opt(&r.pde_error),
            );
        }
        s
    }

    /// CSV when the extension is `.csv`, JSON otherwise.
    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let is_csv = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
        let text = if is_csv { self.to_csv() } else { self.to_json()? };
        std::fs::write(path, text)?;
        Ok(())
    }
}

/// Singular values of `A`, `A R^{-1}` and `A P` (each nonincreasing).
/// `sigma_ar` is `None` when the QR preconditioner is rank deficient.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectra {
    pub sigma_a: Vec<f64>,
    pub sigma_ar: Option<Vec<f64>>,
    pub sigma_ap: Vec<f64>,
}

pub fn spectra(a: &CsrMatrix, cfg: &SketchConfig) -> Result<Spectra> {
    if a.rows().saturating_mul(a.cols()) > DENSE_GUARD {
        return Err(Error::TooLarge {
            rows: a.rows(),
            cols: a.cols(),
            limit: DENSE_GUARD,
        });
    }
    let sigma_a = singular_values(&a.to_dense())?;
    let sigma_ar = match build_preconditioner(a, cfg, PreconditionerKind::Qr) {
        Ok((_, pre)) => Some(singular_values(&pre.form_explicit(a)?)?),
        Err(Error::RankDeficient { .. }) => None,
        Err(e) => return Err(e),
    };
    let (_, pre) = build_preconditioner(a, cfg, PreconditionerKind::Svd)?;
    let sigma_ap = singular_values(&pre.form_explicit(a)?)?;
    Ok(Spectra {
        sigma_a,
        sigma_ar,
        sigma_ap,
    })
}

impl Spectra {
    /// Columns `sigma_A,sigma_AR,sigma_AP`; shorter columns are left empty.
    pub fn to_csv(&self) -> String {
        let empty = Vec::new();
        let cols = [&self.sigma_a, self.sigma_ar.as_ref().unwrap_or(&empty), &self.sigma_ap];
        let len = cols.iter().map(|c| c.len()).max().unwrap_or(0);
        let mut s = String::from("sigma_A,sigma_AR,sigma_AP\n");
        for i in 0..len {
            let cell = |c: &Vec<f64>| c.get(i).map(f64::to_string).unwrap_or_default();
            let _ = writeln!(s, "{},{},{}", cell(cols[0]), cell(cols[1]), cell(cols[2]));
        }
        s
    }
}
