use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::linalg::vector::{axpy, dot, norm2, Vector};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dims("DenseMatrix::from_row_major", rows * cols, data.len()));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    /// Builds from column vectors of equal length.
    pub fn from_columns(rows: usize, columns: &[Vec<f64>]) -> Self {
        DenseMatrix::from_fn(rows, columns.len(), |i, j| columns[j][i])
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = DenseMatrix::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_row_major(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Leading `k` columns.
    pub fn leading_columns(&self, k: usize) -> DenseMatrix {
        DenseMatrix::from_fn(self.rows, k, |i, j| self[(i, j)])
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm2(&self.data)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// `y = M x`
    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(y.len(), self.rows);
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = dot(self.row(i), x);
        }
    }

    /// `x = M^T y`, accumulated row by row.
    pub fn matvec_t_into(&self, y: &[f64], x: &mut [f64]) {
        debug_assert_eq!(y.len(), self.rows);
        debug_assert_eq!(x.len(), self.cols);
        x.fill(0.0);
        for (i, &yi) in y.iter().enumerate() {
            if yi != 0.0 {
                axpy(yi, self.row(i), x);
            }
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vector> {
        if x.len() != self.cols {
            return Err(Error::dims("DenseMatrix::matvec", self.cols, x.len()));
        }
        let mut y = vec![0.0; self.rows];
        self.matvec_into(x, &mut y);
        Ok(Vector::from_kernel(y))
    }

    pub fn matvec_t(&self, y: &[f64]) -> Result<Vector> {
        if y.len() != self.rows {
            return Err(Error::dims("DenseMatrix::matvec_t", self.rows, y.len()));
        }
        let mut x = vec![0.0; self.cols];
        self.matvec_t_into(y, &mut x);
        Ok(Vector::from_kernel(x))
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::dims("DenseMatrix::matmul", self.cols, other.rows));
        }
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let (src, dst) = (self.row(i), i);
            for (k, &a) in src.iter().enumerate() {
                if a != 0.0 {
                    let brow = other.row(k);
                    axpy(a, brow, out.row_mut(dst));
                }
            }
        }
        Ok(out)
    }

    /// Maximum absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn sub(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub(crate) fn to_faer(&self) -> faer::Mat<f64> {
        faer::Mat::from_fn(self.rows, self.cols, |i, j| self.data[i * self.cols + j])
    }

    pub(crate) fn from_faer(m: faer::MatRef<'_, f64>) -> DenseMatrix {
        DenseMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Solves `R x = y` for upper-triangular `R` by back-substitution.
pub fn solve_upper(r: &DenseMatrix, y: &[f64]) -> Result<Vector> {
    let n = r.cols();
    if r.rows() != n || y.len() != n {
        return Err(Error::dims("solve_upper", n, y.len()));
    }
    let mut x = y.to_vec();
    solve_upper_in_place(r, &mut x)?;
    Vector::checked(x)
}

pub(crate) fn solve_upper_in_place(r: &DenseMatrix, x: &mut [f64]) -> Result<()> {
    let n = r.cols();
    for i in (0..n).rev() {
        let row = r.row(i);
        let d = row[i];
        if d == 0.0 {
            return Err(Error::SingularTriangular { index: i });
        }
        let s = dot(&row[i + 1..], &x[i + 1..]);
        x[i] = (x[i] - s) / d;
    }
    Ok(())
}

/// Solves `R^T z = a` for upper-triangular `R` (forward substitution, reading
/// `R` by rows).
pub fn solve_upper_transpose(r: &DenseMatrix, a: &[f64]) -> Result<Vector> {
    let n = r.cols();
    if r.rows() != n || a.len() != n {
        return Err(Error::dims("solve_upper_transpose", n, a.len()));
    }
    let mut z = a.to_vec();
    solve_upper_transpose_in_place(r, &mut z, 0)?;
    Vector::checked(z)
}

/// Forward substitution with `R^T`, skipping the leading `start` entries of
/// `z`, which the caller guarantees are zero.
pub(crate) fn solve_upper_transpose_in_place(
    r: &DenseMatrix,
    z: &mut [f64],
    start: usize,
) -> Result<()> {
    let n = r.cols();
    for j in start..n {
        let row = r.row(j);
        let d = row[j];
        if d == 0.0 {
            return Err(Error::SingularTriangular { index: j });
        }
        let zj = z[j] / d;
        z[j] = zj;
        if zj != 0.0 {
            axpy(-zj, &row[j + 1..], &mut z[j + 1..]);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn back_substitution_by_hand() {
        let r = DenseMatrix::from_row_major(2, 2, vec![2.0, 1.0, 0.0, 4.0]).unwrap();
        assert_eq!(solve_upper(&r, &[4.0, 8.0]).unwrap().as_slice(), &[1.0, 2.0]);
        // R^T z = a with a = R^T (1, 2) = (2, 9)
        assert_eq!(solve_upper_transpose(&r, &[2.0, 9.0]).unwrap().as_slice(), &[1.0, 2.0]);
    }

    #[test]
    fn singular_triangular_is_reported() {
        let r = DenseMatrix::from_row_major(2, 2, vec![1.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            solve_upper(&r, &[1.0, 1.0]),
            Err(Error::SingularTriangular { index: 1 })
        ));
    }

    #[test]
    fn matvec_pair_and_matmul() {
        let m = DenseMatrix::from_row_major(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        assert_eq!(m.matvec(&[1.0, 0.0, -1.0]).unwrap().as_slice(), &[-2.0, -2.0]);
        assert_eq!(m.matvec_t(&[1.0, 1.0]).unwrap().as_slice(), &[5.0, 7.0, 9.0]);
        let p = m.matmul(&m.transpose()).unwrap();
        assert_eq!(p.as_slice(), &[14.0, 32.0, 32.0, 77.0]);
    }
}
