//! Thin SVD and the spectral diagnostics built on it. The factorization itself
//! is delegated to `faer`'s bidiagonalization-based SVD.

use crate::error::{Error, Result};
use crate::linalg::dense::DenseMatrix;
use crate::linalg::vector::Vector;

/// Singular values below this are treated as exact zeros by
/// [`condition_number`].
pub const SIGMA_FLOOR: f64 = 1e-300;

#[derive(Clone, Debug)]
pub struct Svd {
    /// rows x k, orthonormal columns
    pub u: DenseMatrix,
    /// nonincreasing, nonnegative
    pub sigma: Vector,
    /// cols x k, orthonormal columns
    pub v: DenseMatrix,
}

/// Thin SVD `M = U diag(sigma) V^T` for `rows >= cols`.
pub fn dense_svd(m: &DenseMatrix) -> Result<Svd> {
    if m.rows() < m.cols() {
        return Err(Error::InvalidArgument(format!(
            "SVD expects rows >= cols, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_finite() {
        return Err(Error::InvalidArgument("SVD of a non-finite matrix".into()));
    }
    let svd = m.to_faer().thin_svd().map_err(|_| Error::SvdNoConvergence)?;
    let s = svd.S().column_vector();
    let sigma: Vec<f64> = (0..s.nrows()).map(|i| s[i]).collect();
    Ok(Svd {
        u: DenseMatrix::from_faer(svd.U()),
        sigma: Vector::checked(sigma).map_err(|_| Error::SvdNoConvergence)?,
        v: DenseMatrix::from_faer(svd.V()),
    })
}

/// Singular values only (nonincreasing). Any shape.
pub fn singular_values(m: &DenseMatrix) -> Result<Vec<f64>> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(Vec::new());
    }
    if !m.is_finite() {
        return Err(Error::InvalidArgument(
            "singular values of a non-finite matrix".into(),
        ));
    }
    m.to_faer()
        .singular_values()
        .map_err(|_| Error::SvdNoConvergence)
}

/// `sigma_max / sigma_min` over singular values above [`SIGMA_FLOOR`];
/// `+inf` when the smallest singular value underflows.
pub fn condition_number(m: &DenseMatrix) -> Result<f64> {
    let s = singular_values(m)?;
    kappa_from_sigma(&s)
}

pub fn kappa_from_sigma(s: &[f64]) -> Result<f64> {
    let max = s.first().copied().unwrap_or(0.0);
    if max <= SIGMA_FLOOR {
        return Err(Error::ZeroMatrix);
    }
    let min = s.last().copied().unwrap_or(0.0);
    if min <= SIGMA_FLOOR {
        return Ok(f64::INFINITY);
    }
    Ok(max / min)
}

/// Number of singular values above `rel_tol * sigma_max`.
pub fn numerical_rank(m: &DenseMatrix, rel_tol: f64) -> Result<usize> {
    let s = singular_values(m)?;
    let max = s.first().copied().unwrap_or(0.0);
    Ok(s.iter().filter(|&&v| v > rel_tol * max).count())
}
