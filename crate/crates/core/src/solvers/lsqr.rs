//! LSQR (Paige and Saunders) without damping.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::linalg::vector::{axpy, norm2, scale};
use crate::linalg::Vector;
use crate::solvers::operator::LinearOperator;
use crate::solvers::report::{relative_errors, Initial, Method, SolveOptions, SolveReport, StopReason};

/// Raw LSQR result, before any mapping back through a preconditioner.
#[derive(Clone, Debug)]
pub(crate) struct LsqrRun {
    pub y: Vec<f64>,
    pub iterations: usize,
    pub stop: StopReason,
    pub history: Option<Vec<f64>>,
}

/// Runs LSQR on `min ||B y - b||` from `y0` (zero when `None`).
///
/// Stops on whichever fires first, with `atol = btol = tau`:
/// `||r|| <= tau ||b|| + tau ||B|| ||y||` or `||B^T r|| <= tau ||B|| ||r||`,
/// where `||B||` is the usual running Frobenius estimate. With a nonzero start
/// the correction is computed from `r0 = b - B y0`, but both tests keep the
/// original `||b||`.
pub(crate) fn lsqr_run<O: LinearOperator + ?Sized>(
    op: &O,
    b: &[f64],
    y0: Option<&[f64]>,
    tau: f64,
    max_iter: usize,
    record_history: bool,
) -> LsqrRun {
    let (m, n) = (op.rows(), op.cols());
    let bnorm = norm2(b);
    let mut y = match y0 {
        Some(v) => v.to_vec(),
        None => vec![0.0; n],
    };
    let mut u = b.to_vec();
    if y0.is_some() {
        let mut by = vec![0.0; m];
        op.apply_into(&y, &mut by);
        axpy(-1.0, &by, &mut u);
    }
    let mut beta = norm2(&u);
    let mut v = vec![0.0; n];
    let mut alpha = 0.0;
    if beta > 0.0 {
        scale(1.0 / beta, &mut u);
        op.apply_t_into(&u, &mut v);
        alpha = norm2(&v);
    }
    if alpha > 0.0 {
        scale(1.0 / alpha, &mut v);
    }
    let rel = |r: f64| if bnorm > 0.0 { r / bnorm } else { r };
    let mut history = record_history.then(|| vec![rel(beta)]);
    if beta == 0.0 || alpha == 0.0 {
        return LsqrRun {
            y,
            iterations: 0,
            stop: StopReason::Initial,
            history,
        };
    }

    let mut w = v.clone();
    let mut rhobar = alpha;
    let mut phibar = beta;
    let mut anorm_sq = 0.0;
    let mut av = vec![0.0; m];
    let mut atu = vec![0.0; n];
    let mut stop = StopReason::MaxIterations;
    let mut iterations = 0;

    while iterations < max_iter {
        iterations += 1;

        // bidiagonalization step
        op.apply_into(&v, &mut av);
        for (ui, &avi) in u.iter_mut().zip(&av) {
            *ui = avi - alpha * *ui;
        }
        beta = norm2(&u);
        let beta_ok = beta > f64::MIN_POSITIVE;
        anorm_sq += alpha * alpha + beta * beta;
        if beta_ok {
            scale(1.0 / beta, &mut u);
            op.apply_t_into(&u, &mut atu);
            for (vi, &ai) in v.iter_mut().zip(&atu) {
                *vi = ai - beta * *vi;
            }
            alpha = norm2(&v);
            if alpha > f64::MIN_POSITIVE {
                scale(1.0 / alpha, &mut v);
            }
        } else {
            beta = 0.0;
        }
        let alpha_ok = beta_ok && alpha > f64::MIN_POSITIVE;
        if !alpha_ok {
            alpha = 0.0;
        }

        // plane rotation eliminating beta
        let rho = rhobar.hypot(beta);
        let cs = rhobar / rho;
        let sn = beta / rho;
        let theta = sn * alpha;
        rhobar = -cs * alpha;
        let phi = cs * phibar;
        phibar *= sn;

        axpy(phi / rho, &w, &mut y);
        let t2 = -theta / rho;
        for (wi, &vi) in w.iter_mut().zip(&v) {
            *wi = vi + t2 * *wi;
        }

        let rnorm = phibar;
        let arnorm = alpha * (sn * phi).abs();
        let anorm = anorm_sq.sqrt();
        let ynorm = norm2(&y);
        if let Some(h) = history.as_mut() {
            h.push(rel(rnorm));
        }

        if rnorm <= tau * bnorm + tau * anorm * ynorm {
            stop = StopReason::Residual;
            break;
        }
        if arnorm <= tau * anorm * rnorm {
            stop = StopReason::NormalEquations;
            break;
        }
        if !alpha_ok {
            stop = StopReason::Breakdown;
            break;
        }
    }

    LsqrRun {
        y,
        iterations,
        stop,
        history,
    }
}

/// `||b - B y||`.
pub(crate) fn residual_norm<O: LinearOperator + ?Sized>(op: &O, b: &[f64], y: &[f64]) -> f64 {
    let mut r = vec![0.0; op.rows()];
    op.apply_into(y, &mut r);
    for (ri, &bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
    norm2(&r)
}

/// LSQR on an arbitrary operator. The report is in the operator's own
/// unknowns; `Initial::WarmStart` is rejected since there is no sketch here.
pub fn lsqr<O: LinearOperator + ?Sized>(op: &O, b: &[f64], opts: &SolveOptions) -> Result<SolveReport> {
    opts.validate()?;
    if b.len() != op.rows() {
        return Err(Error::dims("lsqr", op.rows(), b.len()));
    }
    let y0 = match &opts.initial {
        Initial::Zero => None,
        Initial::Given(v) if v.len() == op.cols() => Some(v.as_slice()),
        Initial::Given(v) => return Err(Error::dims("lsqr initial", op.cols(), v.len())),
        Initial::WarmStart => {
            return Err(Error::InvalidArgument(
                "warm start needs a sketched method".into(),
            ))
        }
    };
    let start = Instant::now();
    let max_iter = opts.max_iter.unwrap_or(op.cols()).max(1);
    let run = lsqr_run(op, b, y0, opts.tau, max_iter, opts.record_history);
    let solve_time = start.elapsed().as_secs_f64();
    let (relative_residual, relative_ls_error) =
        relative_errors(residual_norm(op, b, &run.y), norm2(b));
    Ok(SolveReport {
        method: Method::Lsqr,
        x: Vector::checked(run.y)?,
        iterations: Some(run.iterations),
        stop_reason: Some(run.stop),
        relative_residual,
        relative_ls_error,
        residual_history: run.history,
        precond_time: 0.0,
        solve_time,
        kappa_b: None,
        effective_rank: None,
        sketch_rows: None,
    })
}
