//! Solver run configuration (TOML).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precond::{DEFAULT_DIAG_TOL, DEFAULT_RCOND};
use crate::sketch::DEFAULT_GAMMA;
use crate::solvers::{Initial, Method, SketchConfig, SolveOptions, DEFAULT_TAU};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub methods: Vec<Method>,
    pub gamma: f64,
    /// Only meaningful for the SVD methods; `None` means the default.
    pub rcond: Option<f64>,
    pub tau: f64,
    /// `None` means the column count.
    pub max_iter: Option<usize>,
    pub seed: u64,
    pub warm_start: bool,
    pub kappa: bool,
    pub history: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            methods: vec![Method::Csqrp],
            gamma: DEFAULT_GAMMA,
            rcond: None,
            tau: DEFAULT_TAU,
            max_iter: None,
            seed: 0,
            warm_start: false,
            kappa: false,
            history: false,
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.methods.is_empty() {
            return bad("no method selected".into());
        }
        if !(self.gamma > 1.0 && self.gamma.is_finite()) {
            return bad(format!("gamma must exceed 1, got {}", self.gamma));
        }
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return bad(format!("tau must lie in (0, 1), got {}", self.tau));
        }
        if self.max_iter == Some(0) {
            return bad("max_iter must be at least 1".into());
        }
        if let Some(r) = self.rcond {
            if !(r > 0.0 && r < 1.0) {
                return bad(format!("rcond must lie in (0, 1), got {r}"));
            }
            if !self.methods.iter().any(|m| m.uses_svd()) {
                return bad("rcond only applies to the SVD methods (cssvdp, cssvd_p)".into());
            }
        }
        if self.warm_start && !self.methods.iter().all(|m| m.uses_sketch()) {
            return bad("warm start only applies to the sketched methods".into());
        }
        Ok(())
    }

    pub fn sketch_config(&self) -> SketchConfig {
        SketchConfig {
            gamma: self.gamma,
            seed: self.seed,
            rcond: self.rcond.unwrap_or(DEFAULT_RCOND),
            diag_tol: DEFAULT_DIAG_TOL,
        }
    }

    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            tau: self.tau,
            max_iter: self.max_iter,
            initial: if self.warm_start { Initial::WarmStart } else { Initial::Zero },
            record_history: self.history,
            compute_kappa: self.kappa,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_validates() {
        let c = RunConfig::from_toml_str("methods = [\"cssvdp\", \"direct\"]\nrcond = 1e-10\nseed = 4").unwrap();
        assert_eq!(c.methods, vec![Method::Cssvdp, Method::Direct]);
        assert_eq!(c.sketch_config().rcond, 1e-10);
        assert_eq!(c.sketch_config().seed, 4);
        assert!(RunConfig::from_toml_str("methods = [\"csqrp\"]\nrcond = 1e-10").is_err());
        assert!(RunConfig::from_toml_str("gamma = 0.5").is_err());
        assert!(RunConfig::from_toml_str("methods = [\"qr\"]").is_err());
        assert!(RunConfig::from_toml_str("unknown = 1").is_err());
        assert!(RunConfig::from_toml_str("methods = [\"lsqr\"]\nwarm_start = true").is_err());
    }
}
