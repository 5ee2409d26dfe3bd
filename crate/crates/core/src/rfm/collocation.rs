//! Collocation points, their equation tags and penalty weights.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rfm::partition::{Partition, Point, PouKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointKind {
    Interior,
    Boundary,
}

/// A point on an interior grid line, with the boxes on either side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterfacePoint {
    pub point: Point,
    /// 0 for a vertical line (normal along x), 1 for a horizontal one.
    pub axis: usize,
    /// Box on the lower side of the line.
    pub minus: usize,
    /// Box on the upper side of the line.
    pub plus: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Continuity {
    /// Value jump only.
    C0,
    /// Value jump and normal-derivative jump.
    C1,
}

/// Penalty weights; rows are scaled by `sqrt(lambda)` so the normal
/// equations reproduce the weighted loss.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Weights {
    pub interior: f64,
    pub boundary: f64,
    pub interface: f64,
}

/// Weights as configured; a missing boundary weight becomes `m_I / m_B`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WeightSpec {
    pub interior: f64,
    pub boundary: Option<f64>,
    pub interface: f64,
}

impl Default for WeightSpec {
    fn default() -> Self {
        WeightSpec {
            interior: 1.0,
            boundary: None,
            interface: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CollocationSet {
    points: Vec<Point>,
    kinds: Vec<PointKind>,
    interface: Vec<InterfacePoint>,
    continuity: Continuity,
    weights: Weights,
}

impl CollocationSet {
    /// `q x q` equispaced points per box, edges included; points on shared
    /// box edges appear once. Points on the domain boundary carry the
    /// boundary condition, all others the PDE. For the indicator profile with
    /// more than one box, every point on an interior grid line also yields
    /// interface points (one per line it lies on).
    pub fn equispaced(
        partition: &Partition,
        q: usize,
        weights: WeightSpec,
        continuity: Continuity,
    ) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidArgument(format!(
                "need at least 2 collocation points per axis, got {q}"
            )));
        }
        let (nx, ny) = partition.grid();
        let d = partition.domain();
        let axis_points = |lo: f64, hi: f64, n: usize| -> Vec<(f64, Option<usize>)> {
            let total = n * (q - 1);
            (0..=total)
                .map(|g| {
                    let v = if g == total { hi } else { lo + (hi - lo) * g as f64 / total as f64 };
                    let line = (g % (q - 1) == 0 && g != 0 && g != total).then_some(g / (q - 1));
                    (v, line)
                })
                .collect()
        };
        let xs = axis_points(d.x0, d.x1, nx);
        let ys = axis_points(d.y0, d.y1, ny);
        let with_interfaces = partition.pou() == PouKind::Indicator && partition.len() > 1;

        let mut points = Vec::with_capacity(xs.len() * ys.len());
        let mut kinds = Vec::with_capacity(xs.len() * ys.len());
        let mut interface = Vec::new();
        for (gy, &(y, yline)) in ys.iter().enumerate() {
            for (gx, &(x, xline)) in xs.iter().enumerate() {
                let p = [x, y];
                let edge = gx == 0 || gx + 1 == xs.len() || gy == 0 || gy + 1 == ys.len();
                points.push(p);
                kinds.push(if edge { PointKind::Boundary } else { PointKind::Interior });
                if !with_interfaces {
                    continue;
                }
                let (ox, oy) = partition.cell(partition.owner(p));
                if let Some(k) = xline {
                    interface.push(InterfacePoint {
                        point: p,
                        axis: 0,
                        minus: oy * nx + (k - 1),
                        plus: oy * nx + k,
                    });
                }
                if let Some(k) = yline {
                    interface.push(InterfacePoint {
                        point: p,
                        axis: 1,
                        minus: (k - 1) * nx + ox,
                        plus: k * nx + ox,
                    });
                }
            }
        }
        let m_b = kinds.iter().filter(|k| **k == PointKind::Boundary).count();
        let m_i = kinds.len() - m_b;
        let weights = Weights {
            interior: weights.interior,
            boundary: weights.boundary.unwrap_or(if m_b == 0 { 1.0 } else { m_i as f64 / m_b as f64 }),
            interface: weights.interface,
        };
        Self::from_parts(points, kinds, interface, continuity, weights)
    }

    pub fn from_parts(
        points: Vec<Point>,
        kinds: Vec<PointKind>,
        interface: Vec<InterfacePoint>,
        continuity: Continuity,
        weights: Weights,
    ) -> Result<Self> {
        if points.len() != kinds.len() {
            return Err(Error::dims("CollocationSet", points.len(), kinds.len()));
        }
        let ok = |w: f64| w > 0.0 && w.is_finite();
        if !ok(weights.interior) || !ok(weights.boundary) || !ok(weights.interface) {
            return Err(Error::InvalidArgument(format!("penalty weights must be positive: {weights:?}")));
        }
        Ok(CollocationSet {
            points,
            kinds,
            interface,
            continuity,
            weights,
        })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn kinds(&self) -> &[PointKind] {
        &self.kinds
    }

    pub fn interface_points(&self) -> &[InterfacePoint] {
        &self.interface
    }

    pub fn continuity(&self) -> Continuity {
        self.continuity
    }

    pub fn weights(&self) -> Weights {
        self.weights
    }

    pub fn count(&self, kind: PointKind) -> usize {
        self.kinds.iter().filter(|k| **k == kind).count()
    }
}
