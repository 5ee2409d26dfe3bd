//! Dense test matrices with a prescribed singular spectrum, stored as CSR.

use crate::error::{Error, Result};
use crate::linalg::{dense_qr, CsrMatrix, DenseMatrix};
use crate::rng::SeededRng;

#[derive(Clone, Debug)]
pub struct SyntheticProblem {
    pub a: CsrMatrix,
    /// Singular values used to build `a`, nonincreasing, length `n`.
    pub sigma: Vec<f64>,
    /// Left singular vectors (`m x n`).
    pub u: DenseMatrix,
    /// Right singular vectors (`n x n`).
    pub v: DenseMatrix,
}

/// `len` values spaced geometrically from `hi` down to `lo`.
pub fn log_spaced(hi: f64, lo: f64, len: usize) -> Vec<f64> {
    match len {
        0 => Vec::new(),
        1 => vec![hi],
        _ => {
            let (a, b) = (hi.ln(), lo.ln());
            (0..len)
                .map(|i| (a + (b - a) * i as f64 / (len - 1) as f64).exp())
                .collect()
        }
    }
}

fn gaussian_orthonormal(rows: usize, cols: usize, rng: &mut SeededRng) -> Result<DenseMatrix> {
    let g = DenseMatrix::from_row_major(rows, cols, rng.gaussian_vec(rows * cols))?;
    Ok(dense_qr(&g)?.0)
}

impl SyntheticProblem {
    /// `A = U diag(sigma) V^T` with Haar-like `U`, `V` drawn from `seed`.
    pub fn with_spectrum(m: usize, sigma: &[f64], seed: u64) -> Result<Self> {
        let n = sigma.len();
        if n == 0 || m < n {
            return Err(Error::InvalidArgument(format!(
                "synthetic matrix needs 1 <= n <= m, got {m}x{n}"
            )));
        }
        if sigma.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(Error::InvalidArgument("singular values must be finite and >= 0".into()));
        }
        let mut rng = SeededRng::new(seed);
        let u = gaussian_orthonormal(m, n, &mut rng)?;
        let v = gaussian_orthonormal(n, n, &mut rng)?;
        let us = DenseMatrix::from_fn(m, n, |i, j| u[(i, j)] * sigma[j]);
        let a = us.matmul(&v.transpose())?;
        Ok(SyntheticProblem {
            a: CsrMatrix::from_dense(&a),
            sigma: sigma.to_vec(),
            u,
            v,
        })
    }

    /// Full rank with `kappa(A) = kappa`, singular values log-spaced in `[1/kappa, 1]`.
    pub fn with_condition(m: usize, n: usize, kappa: f64, seed: u64) -> Result<Self> {
        if !(kappa >= 1.0) {
            return Err(Error::InvalidArgument(format!("kappa must be >= 1, got {kappa}")));
        }
        Self::with_spectrum(m, &log_spaced(1.0, 1.0 / kappa, n), seed)
    }

    /// Exact rank `rank`: nonzero singular values log-spaced from 1 down to
    /// `1/spread`, the remaining `n - rank` exactly zero.
    pub fn rank_deficient(m: usize, n: usize, rank: usize, spread: f64, seed: u64) -> Result<Self> {
        if rank == 0 || rank > n {
            return Err(Error::InvalidArgument(format!("rank must lie in [1, {n}], got {rank}")));
        }
        let mut sigma = log_spaced(1.0, 1.0 / spread, rank);
        sigma.resize(n, 0.0);
        Self::with_spectrum(m, &sigma, seed)
    }

    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    /// Orthonormal basis of `range(A)`: the columns of `U` with nonzero sigma.
    pub fn range_basis(&self) -> DenseMatrix {
        let r = self.sigma.iter().filter(|&&s| s > 0.0).count();
        self.u.leading_columns(r)
    }

    /// `(x*, b = A x*)` with Gaussian `x*`.
    pub fn consistent_rhs(&self, seed: u64) -> (Vec<f64>, Vec<f64>) {
        synthetic_rhs(&self.a, seed)
    }

    /// `(x*, b = A x* + noise * g)` with Gaussian `x*` and `g`.
    pub fn noisy_rhs(&self, seed: u64, noise: f64) -> (Vec<f64>, Vec<f64>) {
        let (x, mut b) = synthetic_rhs(&self.a, seed);
        let mut rng = SeededRng::new(seed ^ 0x9e37_79b9_7f4a_7c15);
        for bi in &mut b {
            *bi += noise * rng.gaussian();
        }
        (x, b)
    }
}

/// Seeded Gaussian `x*` and `b = A x*`.
pub fn synthetic_rhs(a: &CsrMatrix, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let x = SeededRng::new(seed).gaussian_vec(a.cols());
    let mut b = vec![0.0; a.rows()];
    a.spmv_into(&x, &mut b);
    (x, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::singular_values;

    #[test]
    fn prescribed_spectrum_is_realized() {
        let p = SyntheticProblem::with_condition(60, 8, 1e6, 1).unwrap();
        let s = singular_values(&p.a.to_dense()).unwrap();
        for (got, want) in s.iter().zip(&p.sigma) {
            assert!((got - want).abs() <= 1e-13, "{got} vs {want}");
        }
        assert!((p.sigma[0] / p.sigma[7] - 1e6).abs() < 1e-6);
    }

    #[test]
    fn rank_deficient_tail_is_zero() {
        let p = SyntheticProblem::rank_deficient(50, 10, 4, 1e3, 2).unwrap();
        assert_eq!(&p.sigma[4..], &[0.0; 6]);
        assert_eq!(p.range_basis().cols(), 4);
        let s = singular_values(&p.a.to_dense()).unwrap();
        assert!(s[4] < 1e-14);
    }

    #[test]
    fn log_spacing() {
        assert_eq!(log_spaced(1.0, 1e-2, 3).len(), 3);
        let v = log_spaced(1.0, 1e-2, 3);
        assert!((v[1] - 0.1).abs() < 1e-15 && (v[2] - 0.01).abs() < 1e-15);
    }

    #[test]
    fn invalid_shapes() {
        assert!(SyntheticProblem::with_spectrum(3, &[1.0; 4], 0).is_err());
        assert!(SyntheticProblem::rank_deficient(10, 4, 0, 10.0, 0).is_err());
        assert!(SyntheticProblem::with_condition(10, 4, 0.5, 0).is_err());
    }
}
