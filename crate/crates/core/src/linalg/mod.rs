//! Sparse and dense kernels shared by the rest of the crate.

pub mod dense;
pub mod qr;
pub mod sparse;
pub mod svd;
pub mod vector;

pub use dense::{solve_upper, solve_upper_transpose, DenseMatrix};
pub use qr::{dense_qr, HouseholderQr};
pub use sparse::{spmv, spmv_t, CsrMatrix};
pub use svd::{condition_number, dense_svd, numerical_rank, singular_values, Svd};
pub use vector::{dot, norm2, Vector};
