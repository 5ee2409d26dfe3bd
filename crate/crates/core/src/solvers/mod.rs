//! LSQR, the dense direct baseline, and the sketched methods composed from them.

mod direct;
mod lsqr;
mod methods;
mod operator;
mod report;

pub use direct::direct_dense_ls;
pub use lsqr::lsqr;
pub use methods::{
    build_preconditioner, csqr_plsqr, csqrp_lsqr, cssvd_plsqr, cssvdp_lsqr, iteration_bound,
    sketch_and_solve, solve, PreconditionerKind, SketchConfig,
};
pub use operator::LinearOperator;
pub use report::{Initial, Method, SolveOptions, SolveReport, StopReason, DEFAULT_TAU};
