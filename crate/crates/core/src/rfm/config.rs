//! Declarative description of an RFM problem.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rfm::assemble::{assemble, relative_l2_error, RfmSystem, DEFAULT_ERROR_GRID};
use crate::rfm::collocation::{CollocationSet, Continuity, WeightSpec};
use crate::rfm::features::{FeatureSet, DEFAULT_WEIGHT_BOUND};
use crate::rfm::partition::{Partition, PouKind, Rect};
use crate::rfm::pde::{ExactSolution, Operator, PdeSpec};

/// Everything needed to reproduce an assembled system.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RfmConfig {
    #[serde(default = "unit_square")]
    pub domain: Rect,
    #[serde(default = "poisson")]
    pub operator: Operator,
    pub exact: ExactSolution,
    /// Boxes along x and y.
    pub nx: usize,
    pub ny: usize,
    /// Collocation points per axis per box, edges included.
    pub q: usize,
    /// Features per box.
    pub features: usize,
    pub pou: PouKind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_bound")]
    pub weight_bound: f64,
    #[serde(default)]
    pub weights: WeightSpec,
    #[serde(default = "c1")]
    pub continuity: Continuity,
    #[serde(default = "default_grid")]
    pub error_grid: usize,
}

fn unit_square() -> Rect {
    Rect::UNIT
}

fn poisson() -> Operator {
    Operator::Poisson
}

fn default_bound() -> f64 {
    DEFAULT_WEIGHT_BOUND
}

fn c1() -> Continuity {
    Continuity::C1
}

fn default_grid() -> usize {
    DEFAULT_ERROR_GRID
}

impl RfmConfig {
    /// A problem on the unit square with the default weights.
    pub fn unit_square(exact: ExactSolution, nx: usize, ny: usize, q: usize, features: usize, pou: PouKind) -> Self {
        RfmConfig {
            domain: Rect::UNIT,
            operator: Operator::Poisson,
            exact,
            nx,
            ny,
            q,
            features,
            pou,
            seed: 0,
            weight_bound: DEFAULT_WEIGHT_BOUND,
            weights: WeightSpec::default(),
            continuity: Continuity::C1,
            error_grid: DEFAULT_ERROR_GRID,
        }
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn build(&self) -> Result<RfmProblem> {
        let partition = Partition::new(self.domain, self.nx, self.ny, self.pou)?;
        let features = FeatureSet::new(partition.len(), self.features, self.weight_bound, self.seed)?;
        let colloc = CollocationSet::equispaced(&partition, self.q, self.weights, self.continuity)?;
        let pde = PdeSpec::manufactured(self.operator, self.domain, self.exact)?;
        Ok(RfmProblem {
            pde,
            partition,
            features,
            colloc,
            error_grid: self.error_grid,
        })
    }
}

#[derive(Clone, Debug)]
pub struct RfmProblem {
    pub pde: PdeSpec,
    pub partition: Partition,
    pub features: FeatureSet,
    pub colloc: CollocationSet,
    pub error_grid: usize,
}

impl RfmProblem {
    pub fn assemble(&self) -> Result<RfmSystem> {
        assemble(&self.pde, &self.partition, &self.features, &self.colloc)
    }

    pub fn relative_l2_error(&self, coeffs: &[f64]) -> Result<f64> {
        relative_l2_error(&self.pde, &self.partition, &self.features, coeffs, self.error_grid)
    }

    pub fn evaluate(&self, coeffs: &[f64], p: [f64; 2]) -> Result<f64> {
        self.features.evaluate(&self.partition, coeffs, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_toml() {
        let cfg = RfmConfig::from_toml_str(
            r#"
            nx = 1
            ny = 1
            q = 5
            features = 8
            pou = "a"
            exact = { kind = "sin_sin", freq = 1.0 }
            "#,
        )
        .unwrap();
        assert_eq!(cfg.pou, PouKind::Indicator);
        assert_eq!(cfg.operator, Operator::Poisson);
        let sys = cfg.build().unwrap().assemble().unwrap();
        assert_eq!((sys.a.rows(), sys.a.cols()), (25, 8));
        let back = RfmConfig::from_toml_str(&cfg.to_toml_string().unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let e = RfmConfig::from_toml_str("nx = 1\nny = 1\nq = 3\nfeatures = 2\npou = \"b\"\nbogus = 1\nexact = { kind = \"exp_sin\" }");
        assert!(matches!(e, Err(Error::Config(_))));
    }
}
