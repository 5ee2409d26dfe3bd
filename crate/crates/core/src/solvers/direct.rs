use std::time::Instant;

use crate::error::{Error, Result};
use crate::linalg::vector::norm2;
use crate::linalg::{CsrMatrix, HouseholderQr, Vector};
use crate::solvers::lsqr::residual_norm;
use crate::solvers::report::{relative_errors, Method, SolveReport};

/// Dense Householder least squares: densify, factor, apply `Q^T` to `b`,
/// back-substitute.
///
/// Like LAPACK's `gels`, only an exactly zero pivot (or a non-finite result)
/// is treated as rank deficiency; a tiny pivot still yields the backward-stable
/// solution, which is what makes this usable as a reference on badly
/// conditioned systems.
pub fn direct_dense_ls(a: &CsrMatrix, b: &[f64]) -> Result<SolveReport> {
    let (m, n) = (a.rows(), a.cols());
    if b.len() != m {
        return Err(Error::dims("direct_dense_ls", m, b.len()));
    }
    if m < n {
        return Err(Error::InvalidArgument(format!(
            "direct solve needs rows >= cols, got {m}x{n}"
        )));
    }
    let start = Instant::now();
    let qr = HouseholderQr::factor(&a.to_dense())?;
    let mut c = b.to_vec();
    qr.apply_qt(&mut c);
    let rank_deficient = |_| {
        let d: Vec<f64> = qr.raw_diagonal().iter().map(|v| v.abs()).collect();
        Error::RankDeficient {
            min_diag: d.iter().copied().fold(f64::INFINITY, f64::min),
            max_diag: d.iter().copied().fold(0.0, f64::max),
        }
    };
    let x = qr.solve_r_raw(&c).map_err(rank_deficient)?;
    let x = Vector::checked(x).map_err(rank_deficient)?;
    let solve_time = start.elapsed().as_secs_f64();
    let (relative_residual, relative_ls_error) = relative_errors(residual_norm(a, b, &x), norm2(b));
    Ok(SolveReport {
        method: Method::Direct,
        x,
        iterations: None,
        stop_reason: None,
        relative_residual,
        relative_ls_error,
        residual_history: None,
        precond_time: 0.0,
        solve_time,
        kappa_b: None,
        effective_rank: None,
        sketch_rows: None,
    })
}
