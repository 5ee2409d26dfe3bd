use crate::linalg::{CsrMatrix, DenseMatrix};

/// A matrix known only through products with it and its transpose.
pub trait LinearOperator {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    /// `out = B x`; `out` is overwritten.
    fn apply_into(&self, x: &[f64], out: &mut [f64]);
    /// `out = B^T u`; `out` is overwritten.
    fn apply_t_into(&self, u: &[f64], out: &mut [f64]);
}

impl LinearOperator for CsrMatrix {
    fn rows(&self) -> usize {
        CsrMatrix::rows(self)
    }

    fn cols(&self) -> usize {
        CsrMatrix::cols(self)
    }

    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        self.spmv_into(x, out)
    }

    fn apply_t_into(&self, u: &[f64], out: &mut [f64]) {
        self.spmv_t_into(u, out)
    }
}

impl LinearOperator for DenseMatrix {
    fn rows(&self) -> usize {
        DenseMatrix::rows(self)
    }

    fn cols(&self) -> usize {
        DenseMatrix::cols(self)
    }

    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        self.matvec_into(x, out)
    }

    fn apply_t_into(&self, u: &[f64], out: &mut [f64]) {
        self.matvec_t_into(u, out)
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn rows(&self) -> usize {
        (**self).rows()
    }

    fn cols(&self) -> usize {
        (**self).cols()
    }

    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        (**self).apply_into(x, out)
    }

    fn apply_t_into(&self, u: &[f64], out: &mut [f64]) {
        (**self).apply_t_into(u, out)
    }
}
