//! Count-sketch preconditioned LSQR for overdetermined sparse least squares,
//! plus a random feature method generator for the badly conditioned systems
//! these solvers are meant for.
//!
//! ```
//! use sketchls::{csqrp_lsqr, SketchConfig, SolveOptions, SyntheticProblem};
//!
//! let p = SyntheticProblem::with_condition(400, 20, 1e8, 1).unwrap();
//! let (_, b) = p.consistent_rhs(2);
//! let rep = csqrp_lsqr(&p.a, &b, &SketchConfig::with_seed(3), &SolveOptions::default()).unwrap();
//! assert!(rep.relative_residual < 1e-6);
//! ```

pub mod error;
pub mod io;
pub mod linalg;
pub mod precond;
pub mod rfm;
pub mod rng;
pub mod sketch;
pub mod solvers;
pub mod synth;

pub use error::{Error, Result};
pub use linalg::{CsrMatrix, DenseMatrix, Vector};
pub use precond::{Preconditioner, QrPreconditioner, SvdPreconditioner};
pub use sketch::{CountSketch, EmbeddingParams};
pub use solvers::{
    csqr_plsqr, csqrp_lsqr, cssvd_plsqr, cssvdp_lsqr, direct_dense_ls, iteration_bound, lsqr,
    solve, Initial, LinearOperator, Method, SketchConfig, SolveOptions, SolveReport, StopReason,
};
pub use synth::SyntheticProblem;
