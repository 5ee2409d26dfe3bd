//! Random feature method: turns a 2D second-order boundary-value problem into
//! an overdetermined least-squares system in the output-layer coefficients.

mod assemble;
mod collocation;
mod config;
mod features;
mod partition;
mod pde;

pub use assemble::{
    assemble, interface_jump, interface_rows, relative_l2_error, Equation, RfmSystem,
    DEFAULT_ERROR_GRID,
};
pub use collocation::{CollocationSet, Continuity, InterfacePoint, PointKind, WeightSpec, Weights};
pub use config::{RfmConfig, RfmProblem};
pub use features::{BasisEval, Derivative, FeatureSet, DEFAULT_WEIGHT_BOUND};
pub use partition::{pou_1d, pou_value, Partition, Point, PouKind, Rect};
pub use pde::{ExactSolution, Operator, PdeSpec, ScalarField};
