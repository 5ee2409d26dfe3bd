//! Sketch, precondition, iterate, map back.

use std::time::Instant;

use log::debug;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::vector::norm2;
use crate::linalg::{condition_number, CsrMatrix, Vector};
use crate::precond::{
    PreconditionedSystem, Preconditioner, QrPreconditioner, SvdPreconditioner, DEFAULT_DIAG_TOL,
    DEFAULT_RCOND,
};
use crate::sketch::{oversampled_size, CountSketch, DEFAULT_GAMMA};
use crate::solvers::direct::direct_dense_ls;
use crate::solvers::lsqr::{lsqr, lsqr_run, residual_norm};
use crate::solvers::report::{relative_errors, Initial, Method, SolveOptions, SolveReport};

/// Knobs of the sketching stage.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SketchConfig {
    pub gamma: f64,
    pub seed: u64,
    /// Relative singular-value cutoff of the SVD preconditioner.
    pub rcond: f64,
    /// Relative pivot threshold below which the QR preconditioner is rejected.
    pub diag_tol: f64,
}

impl Default for SketchConfig {
    fn default() -> Self {
        SketchConfig {
            gamma: DEFAULT_GAMMA,
            seed: 0,
            rcond: DEFAULT_RCOND,
            diag_tol: DEFAULT_DIAG_TOL,
        }
    }
}

impl SketchConfig {
    pub fn with_seed(seed: u64) -> Self {
        SketchConfig {
            seed,
            ..Default::default()
        }
    }

    /// Sketch rows for an `m x n` matrix; must stay below `m`.
    pub fn sketch_rows(&self, m: usize, n: usize) -> Result<usize> {
        let s = oversampled_size(self.gamma, n)?;
        if s >= m {
            return Err(Error::InvalidArgument(format!(
                "sketch size {s} = ceil({} * {n}) must be smaller than the row count {m}",
                self.gamma
            )));
        }
        Ok(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PreconditionerKind {
    Qr,
    Svd,
}

/// Draws the sketch and builds the requested preconditioner from `S A`.
pub fn build_preconditioner(
    a: &CsrMatrix,
    cfg: &SketchConfig,
    kind: PreconditionerKind,
) -> Result<(CountSketch, Preconditioner)> {
    let s = cfg.sketch_rows(a.rows(), a.cols())?;
    let sketch = CountSketch::new(s, a.rows(), cfg.seed)?;
    let sa = sketch.apply_left(a)?;
    let pre = match kind {
        PreconditionerKind::Qr => QrPreconditioner::build(&sa, cfg.diag_tol)?.into(),
        PreconditionerKind::Svd => SvdPreconditioner::build(&sa, cfg.rcond)?.into(),
    };
    Ok((sketch, pre))
}

/// Sketch-and-solve estimate `x = R^{-1} Q^T (S b)`.
pub fn sketch_and_solve(a: &CsrMatrix, b: &[f64], cfg: &SketchConfig) -> Result<Vector> {
    if b.len() != a.rows() {
        return Err(Error::dims("sketch_and_solve", a.rows(), b.len()));
    }
    let (sketch, pre) = build_preconditioner(a, cfg, PreconditionerKind::Qr)?;
    let y0 = pre.warm_start(&sketch, b)?;
    pre.recover_solution(&y0)
}

fn sketched_solve(
    method: Method,
    a: &CsrMatrix,
    b: &[f64],
    cfg: &SketchConfig,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    opts.validate()?;
    if b.len() != a.rows() {
        return Err(Error::dims(method.label(), a.rows(), b.len()));
    }
    let kind = if method.uses_svd() {
        PreconditionerKind::Svd
    } else {
        PreconditionerKind::Qr
    };
    let explicit = matches!(method, Method::Csqrp | Method::Cssvdp);

    let t0 = Instant::now();
    let (sketch, pre) = build_preconditioner(a, cfg, kind)?;
    let system = if explicit {
        PreconditionedSystem::explicit(a, &pre)?
    } else {
        PreconditionedSystem::implicit(a, &pre)?
    };
    let y0 = match &opts.initial {
        Initial::Zero => None,
        Initial::WarmStart => Some(pre.warm_start(&sketch, b)?.into_inner()),
        Initial::Given(v) if v.len() == pre.cols() => Some(v.clone()),
        Initial::Given(v) => return Err(Error::dims("initial iterate", pre.cols(), v.len())),
    };
    let precond_time = t0.elapsed().as_secs_f64();

    let t1 = Instant::now();
    let max_iter = opts.max_iter.unwrap_or(a.cols()).max(1);
    let run = lsqr_run(&system, b, y0.as_deref(), opts.tau, max_iter, opts.record_history);
    let x = pre.recover_solution(&run.y)?;
    let solve_time = t1.elapsed().as_secs_f64();
    debug!(
        "{}: s = {}, {} iterations, stop {:?}",
        method.label(),
        sketch.rows(),
        run.iterations,
        run.stop
    );

    let kappa_b = if opts.compute_kappa {
        Some(match &system {
            PreconditionedSystem::Explicit(bm) => condition_number(bm)?,
            PreconditionedSystem::Implicit(_) => condition_number(&pre.form_explicit(a)?)?,
        })
    } else {
        None
    };
    let (relative_residual, relative_ls_error) = relative_errors(residual_norm(a, b, &x), norm2(b));
    Ok(SolveReport {
        method,
        x,
        iterations: Some(run.iterations),
        stop_reason: Some(run.stop),
        relative_residual,
        relative_ls_error,
        residual_history: run.history,
        precond_time,
        solve_time,
        kappa_b,
        effective_rank: pre.effective_rank(),
        sketch_rows: Some(sketch.rows()),
    })
}

/// Count sketch + QR, LSQR on the explicitly formed `A R^{-1}`.
pub fn csqrp_lsqr(a: &CsrMatrix, b: &[f64], cfg: &SketchConfig, opts: &SolveOptions) -> Result<SolveReport> {
    sketched_solve(Method::Csqrp, a, b, cfg, opts)
}

/// Count sketch + truncated SVD, LSQR on the explicitly formed `A P`.
pub fn cssvdp_lsqr(a: &CsrMatrix, b: &[f64], cfg: &SketchConfig, opts: &SolveOptions) -> Result<SolveReport> {
    sketched_solve(Method::Cssvdp, a, b, cfg, opts)
}

/// As [`csqrp_lsqr`], but `R^{-1}` is applied inside every LSQR product.
pub fn csqr_plsqr(a: &CsrMatrix, b: &[f64], cfg: &SketchConfig, opts: &SolveOptions) -> Result<SolveReport> {
    sketched_solve(Method::CsqrP, a, b, cfg, opts)
}

/// As [`cssvdp_lsqr`], but `P` is applied inside every LSQR product.
pub fn cssvd_plsqr(a: &CsrMatrix, b: &[f64], cfg: &SketchConfig, opts: &SolveOptions) -> Result<SolveReport> {
    sketched_solve(Method::CssvdP, a, b, cfg, opts)
}

/// Dispatches on `method`. Plain LSQR runs on `A` itself.
pub fn solve(
    method: Method,
    a: &CsrMatrix,
    b: &[f64],
    cfg: &SketchConfig,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    match method {
        Method::Direct => direct_dense_ls(a, b),
        Method::Lsqr => {
            let mut rep = lsqr(a, b, opts)?;
            if opts.compute_kappa {
                rep.kappa_b = Some(condition_number(&a.to_dense())?);
            }
            Ok(rep)
        }
        _ => sketched_solve(method, a, b, cfg, opts),
    }
}

/// Iterations sufficient for LSQR on a preconditioned system whose sketch has
/// distortion `epsilon` to reduce the energy-norm error by `tau`:
/// `ceil((ln 2 + |ln tau|) / |ln epsilon|)`.
pub fn iteration_bound(tau: f64, epsilon: f64) -> Result<usize> {
    let unit = |v: f64| v > 0.0 && v < 1.0;
    if !unit(tau) || !unit(epsilon) {
        return Err(Error::InvalidArgument(format!(
            "tau and epsilon must lie in (0, 1), got {tau}, {epsilon}"
        )));
    }
    let k = (std::f64::consts::LN_2 + tau.ln().abs()) / epsilon.ln().abs();
    Ok(k.ceil() as usize)
}
