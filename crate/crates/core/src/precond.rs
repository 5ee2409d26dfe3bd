//! Right preconditioners built from the sketched matrix `SA`.
//!
//! The QR variant keeps `R` (and `Q` for the warm start); the SVD variant
//! keeps `P = V_r diag(1/sigma_r)` after truncating at `rcond * sigma_1`.

use crate::error::{Error, Result};
use crate::linalg::dense::{solve_upper_in_place, solve_upper_transpose_in_place};
use crate::linalg::vector::axpy;
use crate::linalg::{dense_svd, CsrMatrix, DenseMatrix, HouseholderQr, Vector};
use crate::sketch::CountSketch;
use crate::solvers::LinearOperator;

pub const DEFAULT_RCOND: f64 = 1e-12;
pub const DEFAULT_DIAG_TOL: f64 = 1e-14;

#[derive(Clone, Debug)]
pub struct QrPreconditioner {
    r: DenseMatrix,
    q: DenseMatrix,
}

impl QrPreconditioner {
    /// Householder QR of `SA`. Fails with [`Error::RankDeficient`] when
    /// `min |R_ii| <= diag_tol * max |R_ii|`.
    pub fn build(a_sketched: &DenseMatrix, diag_tol: f64) -> Result<Self> {
        if !(diag_tol >= 0.0) {
            return Err(Error::InvalidArgument(format!("diag_tol must be >= 0, got {diag_tol}")));
        }
        if !a_sketched.is_finite() {
            return Err(Error::InvalidArgument("sketched matrix is not finite".into()));
        }
        let qr = HouseholderQr::factor(a_sketched)?;
        let diag: Vec<f64> = qr.raw_diagonal().iter().map(|d| d.abs()).collect();
        let max_diag = diag.iter().copied().fold(0.0, f64::max);
        let min_diag = diag.iter().copied().fold(f64::INFINITY, f64::min);
        if diag.is_empty() || max_diag == 0.0 || min_diag <= diag_tol * max_diag {
            return Err(Error::RankDeficient { min_diag, max_diag });
        }
        Ok(QrPreconditioner {
            r: qr.r(),
            q: qr.thin_q(),
        })
    }

    pub fn r(&self) -> &DenseMatrix {
        &self.r
    }

    pub fn q(&self) -> &DenseMatrix {
        &self.q
    }
}

#[derive(Clone, Debug)]
pub struct SvdPreconditioner {
    p: DenseMatrix,
    u: DenseMatrix,
    v: DenseMatrix,
    sigma: Vec<f64>,
    rcond: f64,
}

impl SvdPreconditioner {
    /// Thin SVD of `SA`, keeping `sigma_i > rcond * sigma_1`.
    pub fn build(a_sketched: &DenseMatrix, rcond: f64) -> Result<Self> {
        if !(rcond > 0.0 && rcond < 1.0) {
            return Err(Error::InvalidArgument(format!("rcond must lie in (0, 1), got {rcond}")));
        }
        let svd = dense_svd(a_sketched)?;
        let top = svd.sigma.first().copied().unwrap_or(0.0);
        let r = svd.sigma.iter().take_while(|&&s| s > rcond * top).count();
        if r == 0 || top == 0.0 {
            return Err(Error::EmptyTruncation { rcond });
        }
        let sigma = svd.sigma[..r].to_vec();
        let v = svd.v.leading_columns(r);
        let p = DenseMatrix::from_fn(v.rows(), r, |i, j| v[(i, j)] / sigma[j]);
        Ok(SvdPreconditioner {
            p,
            u: svd.u.leading_columns(r),
            v,
            sigma,
            rcond,
        })
    }

    pub fn p(&self) -> &DenseMatrix {
        &self.p
    }

    pub fn u(&self) -> &DenseMatrix {
        &self.u
    }

    pub fn v(&self) -> &DenseMatrix {
        &self.v
    }

    /// Retained singular values of `SA`, nonincreasing.
    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn effective_rank(&self) -> usize {
        self.sigma.len()
    }

    pub fn rcond(&self) -> f64 {
        self.rcond
    }
}

#[derive(Clone, Debug)]
pub enum Preconditioner {
    Qr(QrPreconditioner),
    Svd(SvdPreconditioner),
}

impl From<QrPreconditioner> for Preconditioner {
    fn from(p: QrPreconditioner) -> Self {
        Preconditioner::Qr(p)
    }
}

impl From<SvdPreconditioner> for Preconditioner {
    fn from(p: SvdPreconditioner) -> Self {
        Preconditioner::Svd(p)
    }
}

impl Preconditioner {
    /// Row count of the preconditioner (columns of `A`).
    pub fn rows(&self) -> usize {
        match self {
            Preconditioner::Qr(q) => q.r.rows(),
            Preconditioner::Svd(s) => s.p.rows(),
        }
    }

    /// Number of unknowns of the preconditioned problem.
    pub fn cols(&self) -> usize {
        match self {
            Preconditioner::Qr(q) => q.r.cols(),
            Preconditioner::Svd(s) => s.p.cols(),
        }
    }

    pub fn effective_rank(&self) -> Option<usize> {
        match self {
            Preconditioner::Qr(_) => None,
            Preconditioner::Svd(s) => Some(s.effective_rank()),
        }
    }

    /// `t = R^{-1} y` or `t = P y`.
    fn apply_into(&self, y: &[f64], t: &mut [f64]) -> Result<()> {
        match self {
            Preconditioner::Qr(q) => {
                t.copy_from_slice(y);
                solve_upper_in_place(&q.r, t)
            }
            Preconditioner::Svd(s) => {
                s.p.matvec_into(y, t);
                Ok(())
            }
        }
    }

    /// `y = R^{-T} z` or `y = P^T z`.
    fn apply_t_into(&self, z: &[f64], y: &mut [f64]) -> Result<()> {
        match self {
            Preconditioner::Qr(q) => {
                y.copy_from_slice(z);
                solve_upper_transpose_in_place(&q.r, y, 0)
            }
            Preconditioner::Svd(s) => {
                s.p.matvec_t_into(z, y);
                Ok(())
            }
        }
    }

    /// `x = R^{-1} y` or `x = P y`.
    pub fn recover_solution(&self, y: &[f64]) -> Result<Vector> {
        if y.len() != self.cols() {
            return Err(Error::dims("recover_solution", self.cols(), y.len()));
        }
        let mut x = vec![0.0; self.rows()];
        self.apply_into(y, &mut x)?;
        Vector::checked(x)
    }

    /// Sketch-and-solve initial guess: `Q^T (S b)` for QR, `U_r^T (S b)` for SVD.
    pub fn warm_start(&self, sketch: &CountSketch, b: &[f64]) -> Result<Vector> {
        let sb = sketch.apply_to_vector(b)?;
        let basis = match self {
            Preconditioner::Qr(q) => &q.q,
            Preconditioner::Svd(s) => &s.u,
        };
        if basis.rows() != sb.len() {
            return Err(Error::dims("warm_start", basis.rows(), sb.len()));
        }
        basis.matvec_t(&sb)
    }

    /// `B = A R^{-1}` or `B = A P`, dense `m x cols`.
    pub fn form_explicit(&self, a: &CsrMatrix) -> Result<DenseMatrix> {
        if a.cols() != self.rows() {
            return Err(Error::dims("form_explicit", self.rows(), a.cols()));
        }
        let k = self.cols();
        let mut b = DenseMatrix::zeros(a.rows(), k);
        match self {
            // row i of B solves R^T z = a_i; leading zeros of a_i stay zero
            Preconditioner::Qr(q) => {
                for i in 0..a.rows() {
                    let (cols, vals) = a.row(i);
                    let Some(&start) = cols.first() else { continue };
                    let z = b.row_mut(i);
                    for (&j, &v) in cols.iter().zip(vals) {
                        z[j] = v;
                    }
                    solve_upper_transpose_in_place(&q.r, z, start)?;
                }
            }
            Preconditioner::Svd(s) => {
                for i in 0..a.rows() {
                    let (cols, vals) = a.row(i);
                    let z = b.row_mut(i);
                    for (&j, &v) in cols.iter().zip(vals) {
                        axpy(v, s.p.row(j), z);
                    }
                }
            }
        }
        if !b.is_finite() {
            return Err(Error::InvalidArgument("preconditioned matrix overflowed".into()));
        }
        Ok(b)
    }

    /// `A (R^{-1} y)` or `A (P y)` without forming `B`.
    pub fn apply_implicit(&self, a: &CsrMatrix, y: &[f64]) -> Result<Vector> {
        let op = ImplicitOperator::new(a, self)?;
        if y.len() != op.cols() {
            return Err(Error::dims("apply_implicit", op.cols(), y.len()));
        }
        let mut out = vec![0.0; op.rows()];
        op.apply_into(y, &mut out);
        Vector::checked(out)
    }

    /// `R^{-T} (A^T u)` or `P^T (A^T u)`.
    pub fn apply_implicit_t(&self, a: &CsrMatrix, u: &[f64]) -> Result<Vector> {
        let op = ImplicitOperator::new(a, self)?;
        if u.len() != op.rows() {
            return Err(Error::dims("apply_implicit_t", op.rows(), u.len()));
        }
        let mut out = vec![0.0; op.cols()];
        op.apply_t_into(u, &mut out);
        Vector::checked(out)
    }
}

/// `y -> A M y` with `M` a preconditioner, applied factor by factor.
#[derive(Clone, Copy, Debug)]
pub struct ImplicitOperator<'a> {
    a: &'a CsrMatrix,
    pre: &'a Preconditioner,
}

impl<'a> ImplicitOperator<'a> {
    pub fn new(a: &'a CsrMatrix, pre: &'a Preconditioner) -> Result<Self> {
        if a.cols() != pre.rows() {
            return Err(Error::dims("ImplicitOperator", pre.rows(), a.cols()));
        }
        Ok(ImplicitOperator { a, pre })
    }
}

impl LinearOperator for ImplicitOperator<'_> {
    fn rows(&self) -> usize {
        self.a.rows()
    }

    fn cols(&self) -> usize {
        self.pre.cols()
    }

    fn apply_into(&self, y: &[f64], out: &mut [f64]) {
        let mut t = vec![0.0; self.pre.rows()];
        // R has a nonzero diagonal by construction
        self.pre.apply_into(y, &mut t).expect("validated preconditioner");
        self.a.spmv_into(&t, out);
    }

    fn apply_t_into(&self, u: &[f64], out: &mut [f64]) {
        let mut t = vec![0.0; self.pre.rows()];
        self.a.spmv_t_into(u, &mut t);
        self.pre.apply_t_into(&t, out).expect("validated preconditioner");
    }
}

/// The operator LSQR actually iterates on.
#[derive(Clone, Debug)]
pub enum PreconditionedSystem<'a> {
    Explicit(DenseMatrix),
    Implicit(ImplicitOperator<'a>),
}

impl<'a> PreconditionedSystem<'a> {
    pub fn explicit(a: &CsrMatrix, pre: &Preconditioner) -> Result<Self> {
        Ok(PreconditionedSystem::Explicit(pre.form_explicit(a)?))
    }

    pub fn implicit(a: &'a CsrMatrix, pre: &'a Preconditioner) -> Result<Self> {
        Ok(PreconditionedSystem::Implicit(ImplicitOperator::new(a, pre)?))
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self, PreconditionedSystem::Explicit(_))
    }
}

impl LinearOperator for PreconditionedSystem<'_> {
    fn rows(&self) -> usize {
        match self {
            PreconditionedSystem::Explicit(b) => b.rows(),
            PreconditionedSystem::Implicit(op) => op.rows(),
        }
    }

    fn cols(&self) -> usize {
        match self {
            PreconditionedSystem::Explicit(b) => b.cols(),
            PreconditionedSystem::Implicit(op) => op.cols(),
        }
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        match self {
            PreconditionedSystem::Explicit(b) => b.matvec_into(x, y),
            PreconditionedSystem::Implicit(op) => op.apply_into(x, y),
        }
    }

    fn apply_t_into(&self, u: &[f64], x: &mut [f64]) {
        match self {
            PreconditionedSystem::Explicit(b) => b.matvec_t_into(u, x),
            PreconditionedSystem::Implicit(op) => op.apply_t_into(u, x),
        }
    }
}
