//! Householder QR.
//!
//! The factorization works on a column-major copy so every reflector touches
//! contiguous memory. `R` is returned with a nonnegative diagonal, which makes
//! the thin factorization unique for full-column-rank input.

use crate::error::{Error, Result};
use crate::linalg::dense::DenseMatrix;
use crate::linalg::vector::{dot, norm2};

/// Compact Householder factorization `M = H_0 H_1 ... H_{n-1} [R; 0]`.
pub struct HouseholderQr {
    rows: usize,
    cols: usize,
    /// Column-major; on and above the diagonal holds R, below holds the
    /// reflector tails (unit leading entry implied).
    packed: Vec<f64>,
    tau: Vec<f64>,
}

impl HouseholderQr {
    pub fn factor(m: &DenseMatrix) -> Result<Self> {
        let (rows, cols) = (m.rows(), m.cols());
        if rows < cols {
            return Err(Error::InvalidArgument(format!(
                "QR needs rows >= cols, got {rows}x{cols}"
            )));
        }
        let mut packed = vec![0.0; rows * cols];
        for i in 0..rows {
            for (j, &v) in m.row(i).iter().enumerate() {
                packed[j * rows + i] = v;
            }
        }
        let mut tau = vec![0.0; cols];
        for k in 0..cols {
            let (head, tail) = packed.split_at_mut((k + 1) * rows);
            let col = &mut head[k * rows + k..];
            tau[k] = make_reflector(col);
            if tau[k] == 0.0 {
                continue;
            }
            let v = &*col;
            for j in 0..cols - k - 1 {
                let target = &mut tail[j * rows + k..(j + 1) * rows];
                apply_reflector(v, tau[k], target);
            }
        }
        Ok(HouseholderQr {
            rows,
            cols,
            packed,
            tau,
        })
    }

    /// Raw diagonal of R (before sign normalization).
    pub fn raw_diagonal(&self) -> Vec<f64> {
        (0..self.cols).map(|k| self.packed[k * self.rows + k]).collect()
    }

    /// Upper-triangular factor with nonnegative diagonal.
    pub fn r(&self) -> DenseMatrix {
        let n = self.cols;
        let mut r = DenseMatrix::zeros(n, n);
        for i in 0..n {
            let sign = if self.packed[i * self.rows + i] < 0.0 { -1.0 } else { 1.0 };
            for j in i..n {
                r[(i, j)] = sign * self.packed[j * self.rows + i];
            }
        }
        r
    }

    /// Thin orthonormal factor (rows x cols), consistent with [`Self::r`].
    pub fn thin_q(&self) -> DenseMatrix {
        let (m, n) = (self.rows, self.cols);
        let mut q = vec![0.0; m * n];
        for j in 0..n {
            q[j * m + j] = 1.0;
        }
        for k in (0..n).rev() {
            if self.tau[k] == 0.0 {
                continue;
            }
            let v = &self.packed[k * m + k..(k + 1) * m];
            for j in k..n {
                apply_reflector(v, self.tau[k], &mut q[j * m + k..(j + 1) * m]);
            }
        }
        let diag = self.raw_diagonal();
        DenseMatrix::from_fn(m, n, |i, j| {
            let s = if diag[j] < 0.0 { -1.0 } else { 1.0 };
            s * q[j * m + i]
        })
    }

    /// Overwrites `b` (length rows) with `Q_full^T b`; the leading `cols`
    /// entries then pair with the raw (unnormalized) R.
    pub fn apply_qt(&self, b: &mut [f64]) {
        assert_eq!(b.len(), self.rows);
        for k in 0..self.cols {
            if self.tau[k] == 0.0 {
                continue;
            }
            let v = &self.packed[k * self.rows + k..(k + 1) * self.rows];
            apply_reflector(v, self.tau[k], &mut b[k..]);
        }
    }

    /// Back-substitution against the raw R for the leading `cols` entries of
    /// `c`; fails on an exactly zero pivot.
    pub fn solve_r_raw(&self, c: &[f64]) -> Result<Vec<f64>> {
        let n = self.cols;
        let mut x = c[..n].to_vec();
        for i in (0..n).rev() {
            let d = self.packed[i * self.rows + i];
            if d == 0.0 {
                return Err(Error::SingularTriangular { index: i });
            }
            let mut s = 0.0;
            for j in i + 1..n {
                s += self.packed[j * self.rows + i] * x[j];
            }
            x[i] = (x[i] - s) / d;
        }
        Ok(x)
    }
}

/// Turns `x` into the reflector that maps it onto `beta e_1` (LAPACK `larfg`
/// convention): on return `x[0] = beta`, `x[1..]` holds the tail of `v` with
/// `v[0] = 1` implied. Returns `tau`.
fn make_reflector(x: &mut [f64]) -> f64 {
    let alpha = x[0];
    let xnorm = norm2(&x[1..]);
    if xnorm == 0.0 {
        return 0.0;
    }
    let beta = -alpha.signum() * alpha.hypot(xnorm);
    let tau = (beta - alpha) / beta;
    let inv = 1.0 / (alpha - beta);
    for v in &mut x[1..] {
        *v *= inv;
    }
    x[0] = beta;
    tau
}

/// `y <- (I - tau v v^T) y` where `v[0] = 1` is implied and `v[1..]` is read
/// from `v_packed[1..]`.
#[inline]
fn apply_reflector(v_packed: &[f64], tau: f64, y: &mut [f64]) {
    let w = y[0] + dot(&v_packed[1..], &y[1..]);
    let f = tau * w;
    y[0] -= f;
    for (yi, vi) in y[1..].iter_mut().zip(&v_packed[1..]) {
        *yi -= f * vi;
    }
}

/// Thin QR `M = Q R` with `Q` orthonormal (rows x cols) and `R` upper
/// triangular with nonnegative diagonal.
pub fn dense_qr(m: &DenseMatrix) -> Result<(DenseMatrix, DenseMatrix)> {
    let f = HouseholderQr::factor(m)?;
    Ok((f.thin_q(), f.r()))
}
