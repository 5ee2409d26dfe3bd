//! Second-order scalar problems on a rectangle with Dirichlet data.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rfm::features::BasisEval;
use crate::rfm::partition::{Point, Rect};

pub type ScalarField = Arc<dyn Fn(Point) -> f64 + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Operator {
    /// `-lap u = f`
    Poisson,
    /// `lap u + k^2 u = f`
    Helmholtz { wave_number: f64 },
}

impl Operator {
    /// The operator applied to one basis function.
    pub fn apply(&self, e: &BasisEval) -> f64 {
        match *self {
            Operator::Poisson => -e.laplacian,
            Operator::Helmholtz { wave_number: k } => e.laplacian + k * k * e.value,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Operator::Helmholtz { wave_number } if !(wave_number >= 0.0 && wave_number.is_finite()) => {
                Err(Error::InvalidArgument(format!(
                    "wave number must be finite and >= 0, got {wave_number}"
                )))
            }
            _ => Ok(()),
        }
    }
}

/// Closed-form solutions used to manufacture forcing and boundary data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExactSolution {
    /// `sin(a pi x) sin(a pi y)`
    SinSin { freq: f64 },
    /// `exp(x) sin(y)`, harmonic
    ExpSin,
    /// `exp(-|x - c|^2 / w^2)`
    Gaussian { center: Point, width: f64 },
}

impl ExactSolution {
    /// `(u, lap u)` at `p`.
    pub fn value_and_laplacian(&self, p: Point) -> (f64, f64) {
        match *self {
            ExactSolution::SinSin { freq } => {
                let w = freq * PI;
                let u = (w * p[0]).sin() * (w * p[1]).sin();
                (u, -2.0 * w * w * u)
            }
            ExactSolution::ExpSin => (p[0].exp() * p[1].sin(), 0.0),
            ExactSolution::Gaussian { center, width } => {
                let d2 = (p[0] - center[0]).powi(2) + (p[1] - center[1]).powi(2);
                let w2 = width * width;
                let u = (-d2 / w2).exp();
                (u, u * (4.0 * d2 / (w2 * w2) - 4.0 / w2))
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            ExactSolution::Gaussian { width, .. } if !(width > 0.0) => {
                Err(Error::InvalidArgument(format!("gaussian width must be positive, got {width}")))
            }
            ExactSolution::SinSin { freq } if !freq.is_finite() => {
                Err(Error::InvalidArgument("frequency must be finite".into()))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone)]
pub struct PdeSpec {
    pub operator: Operator,
    pub domain: Rect,
    pub forcing: ScalarField,
    /// Dirichlet data on the boundary.
    pub boundary: ScalarField,
    pub exact: Option<ScalarField>,
}

impl fmt::Debug for PdeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PdeSpec")
            .field("operator", &self.operator)
            .field("domain", &self.domain)
            .field("exact", &self.exact.is_some())
            .finish_non_exhaustive()
    }
}

impl PdeSpec {
    pub fn new(
        operator: Operator,
        domain: Rect,
        forcing: ScalarField,
        boundary: ScalarField,
        exact: Option<ScalarField>,
    ) -> Result<Self> {
        operator.validate()?;
        let domain = Rect::new(domain.x0, domain.x1, domain.y0, domain.y1)?;
        Ok(PdeSpec {
            operator,
            domain,
            forcing,
            boundary,
            exact,
        })
    }

    /// Forcing and boundary data generated from a closed-form solution.
    pub fn manufactured(operator: Operator, domain: Rect, exact: ExactSolution) -> Result<Self> {
        exact.validate()?;
        let forcing: ScalarField = Arc::new(move |p| {
            let (u, lap) = exact.value_and_laplacian(p);
            match operator {
                Operator::Poisson => -lap,
                Operator::Helmholtz { wave_number: k } => lap + k * k * u,
            }
        });
        let u: ScalarField = Arc::new(move |p| exact.value_and_laplacian(p).0);
        Self::new(operator, domain, forcing, u.clone(), Some(u))
    }

    /// Forcing and boundary data from an arbitrary `(u, lap u)` closure.
    pub fn manufactured_from(
        operator: Operator,
        domain: Rect,
        exact: impl Fn(Point) -> (f64, f64) + Send + Sync + 'static,
    ) -> Result<Self> {
        let exact = Arc::new(exact);
        let e = exact.clone();
        let forcing: ScalarField = Arc::new(move |p| {
            let (u, lap) = e(p);
            match operator {
                Operator::Poisson => -lap,
                Operator::Helmholtz { wave_number: k } => lap + k * k * u,
            }
        });
        let u: ScalarField = Arc::new(move |p| exact(p).0);
        Self::new(operator, domain, forcing, u.clone(), Some(u))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_laplacians_match_finite_differences() {
        let h = 1e-4;
        let cases = [
            ExactSolution::SinSin { freq: 2.0 },
            ExactSolution::ExpSin,
            ExactSolution::Gaussian { center: [0.4, 0.6], width: 0.3 },
        ];
        for e in cases {
            for p in [[0.2, 0.3], [0.7, 0.55], [0.45, 0.9]] {
                let u = |q: Point| e.value_and_laplacian(q).0;
                let fd = (u([p[0] + h, p[1]]) + u([p[0] - h, p[1]]) + u([p[0], p[1] + h])
                    + u([p[0], p[1] - h])
                    - 4.0 * u(p))
                    / (h * h);
                let lap = e.value_and_laplacian(p).1;
                assert!((lap - fd).abs() < 1e-5 * (1.0 + lap.abs()), "{e:?} at {p:?}");
            }
        }
    }

    #[test]
    fn manufactured_forcing() {
        let pde = PdeSpec::manufactured(
            Operator::Helmholtz { wave_number: 3.0 },
            Rect::UNIT,
            ExactSolution::SinSin { freq: 1.0 },
        )
        .unwrap();
        let p = [0.3, 0.4];
        let u = (PI * 0.3).sin() * (PI * 0.4).sin();
        assert!(((pde.forcing)(p) - (9.0 - 2.0 * PI * PI) * u).abs() < 1e-14);
        assert_eq!((pde.boundary)(p), u);
    }

    #[test]
    fn invalid_parameters() {
        let bad = Operator::Helmholtz { wave_number: -1.0 };
        assert!(PdeSpec::manufactured(bad, Rect::UNIT, ExactSolution::ExpSin).is_err());
        let g = ExactSolution::Gaussian { center: [0.0, 0.0], width: 0.0 };
        assert!(PdeSpec::manufactured(Operator::Poisson, Rect::UNIT, g).is_err());
    }
}
