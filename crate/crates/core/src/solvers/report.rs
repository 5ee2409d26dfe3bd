use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Vector;

/// How the initial iterate is chosen.
#[derive(Clone, Debug, Default, PartialEq)]
pub enum Initial {
    #[default]
    Zero,
    /// Sketch-and-solve guess from the preconditioner; only meaningful for
    /// the sketched methods.
    WarmStart,
    Given(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    pub tau: f64,
    /// `None` means the number of unknowns.
    pub max_iter: Option<usize>,
    pub initial: Initial,
    pub record_history: bool,
    /// Compute `kappa(B)` with a dense SVD after the solve.
    pub compute_kappa: bool,
}

pub const DEFAULT_TAU: f64 = 1e-8;

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tau: DEFAULT_TAU,
            max_iter: None,
            initial: Initial::Zero,
            record_history: false,
            compute_kappa: false,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidArgument(format!("tau must be positive, got {}", self.tau)));
        }
        if self.max_iter == Some(0) {
            return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// The initial iterate already solves the problem.
    Initial,
    /// `||r|| <= tau ||b|| + tau ||B|| ||x||`
    Residual,
    /// `||B^T r|| <= tau ||B|| ||r||`
    NormalEquations,
    MaxIterations,
    /// `alpha` or `beta` vanished before either test fired.
    Breakdown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "csqrp")]
    Csqrp,
    #[serde(rename = "cssvdp")]
    Cssvdp,
    #[serde(rename = "csqr_p")]
    CsqrP,
    #[serde(rename = "cssvd_p")]
    CssvdP,
    #[serde(rename = "lsqr")]
    Lsqr,
    #[serde(rename = "direct")]
    Direct,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Csqrp,
        Method::Cssvdp,
        Method::CsqrP,
        Method::CssvdP,
        Method::Lsqr,
        Method::Direct,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Method::Csqrp => "csqrp",
            Method::Cssvdp => "cssvdp",
            Method::CsqrP => "csqr_p",
            Method::CssvdP => "cssvd_p",
            Method::Lsqr => "lsqr",
            Method::Direct => "direct",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Method::Csqrp => "CSQRP-LSQR",
            Method::Cssvdp => "CSSVDP-LSQR",
            Method::CsqrP => "CSQR-PLSQR",
            Method::CssvdP => "CSSVD-PLSQR",
            Method::Lsqr => "LSQR",
            Method::Direct => "HHQR",
        }
    }

    pub fn uses_sketch(self) -> bool {
        matches!(self, Method::Csqrp | Method::Cssvdp | Method::CsqrP | Method::CssvdP)
    }

    pub fn uses_svd(self) -> bool {
        matches!(self, Method::Cssvdp | Method::CssvdP)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.key().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config(format!("unknown method `{s}`")))
    }
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub method: Method,
    pub x: Vector,
    /// `None` for the direct solver.
    pub iterations: Option<usize>,
    pub stop_reason: Option<StopReason>,
    /// `||b - A x|| / ||b||`, recomputed from the returned `x`.
    pub relative_residual: f64,
    /// `||b - A x||^2 / ||b||^2`.
    pub relative_ls_error: f64,
    /// LSQR's running estimate of `||r_k|| / ||b||`, index 0 is the initial iterate.
    pub residual_history: Option<Vec<f64>>,
    /// Seconds spent sketching, factoring and forming `B`.
    pub precond_time: f64,
    /// Seconds spent iterating (or in the direct factorization).
    pub solve_time: f64,
    pub kappa_b: Option<f64>,
    pub effective_rank: Option<usize>,
    pub sketch_rows: Option<usize>,
}

impl SolveReport {
    pub fn total_time(&self) -> f64 {
        self.precond_time + self.solve_time
    }
}

/// `(||r|| / ||b||, ||r||^2 / ||b||^2)`, both 0 when `b = 0` and `r = 0`.
pub(crate) fn relative_errors(rnorm: f64, bnorm: f64) -> (f64, f64) {
    if bnorm == 0.0 {
        let rel = if rnorm == 0.0 { 0.0 } else { f64::INFINITY };
        return (rel, rel * rel);
    }
    let rel = rnorm / bnorm;
    (rel, rel * rel)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.key().parse::<Method>().unwrap(), m);
        }
        assert!("qr".parse::<Method>().is_err());
    }

    #[test]
    fn options_validation() {
        assert!(SolveOptions::default().validate().is_ok());
        let bad = SolveOptions { tau: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = SolveOptions { max_iter: Some(0), ..Default::default() };
        assert!(bad.validate().is_err());
    }
}
