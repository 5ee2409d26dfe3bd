//! Least-squares assembly and solution error.

use log::warn;

use crate::error::{Error, Result};
use crate::linalg::CsrMatrix;
use crate::rfm::collocation::{CollocationSet, Continuity, InterfacePoint, PointKind, Weights};
use crate::rfm::features::{BasisEval, FeatureSet};
use crate::rfm::partition::{Partition, Point, PouKind};
use crate::rfm::pde::PdeSpec;

/// Default side length of the tensor grid used by [`relative_l2_error`].
pub const DEFAULT_ERROR_GRID: usize = 101;

/// One assembled equation.
#[derive(Clone, Debug, PartialEq)]
pub struct Equation {
    pub cols: Vec<usize>,
    pub vals: Vec<f64>,
    pub rhs: f64,
}

#[derive(Clone, Debug)]
pub struct RfmSystem {
    pub a: CsrMatrix,
    pub b: Vec<f64>,
    pub interior_rows: usize,
    pub boundary_rows: usize,
    pub interface_rows: usize,
    pub weights: Weights,
}

fn push_row(eq: Equation, row_ptr: &mut Vec<usize>, col_idx: &mut Vec<usize>, values: &mut Vec<f64>, b: &mut Vec<f64>) {
    for (c, v) in eq.cols.into_iter().zip(eq.vals) {
        if v != 0.0 {
            col_idx.push(c);
            values.push(v);
        }
    }
    row_ptr.push(col_idx.len());
    b.push(eq.rhs);
}

/// Value-jump (and, for `C1`, normal-derivative-jump) rows between the local
/// expansions on either side of each interface point, scaled by `sqrt(weight)`.
/// The smooth profile needs no such rows: the call logs a warning and
/// returns nothing.
pub fn interface_rows(
    partition: &Partition,
    features: &FeatureSet,
    points: &[InterfacePoint],
    order: Continuity,
    weight: f64,
) -> Vec<Equation> {
    if partition.pou() == PouKind::Smooth {
        if !points.is_empty() {
            warn!("interface rows requested for the smooth partition of unity; ignoring");
        }
        return Vec::new();
    }
    let w = weight.sqrt();
    let mut out = Vec::with_capacity(points.len() * 2);
    let mut minus = Vec::new();
    let mut plus = Vec::new();
    for ip in points {
        minus.clear();
        plus.clear();
        features.eval_local(partition, ip.minus, ip.point, &mut minus);
        features.eval_local(partition, ip.plus, ip.point, &mut plus);
        let row = |f: &dyn Fn(&BasisEval) -> f64| Equation {
            cols: minus.iter().chain(&plus).map(|(c, _)| *c).collect(),
            vals: minus
                .iter()
                .map(|(_, e)| w * f(e))
                .chain(plus.iter().map(|(_, e)| -w * f(e)))
                .collect(),
            rhs: 0.0,
        };
        out.push(row(&|e| e.value));
        if order == Continuity::C1 {
            out.push(row(&|e| e.grad[ip.axis]));
        }
    }
    out
}

/// Builds `(A, b)`: one row per collocation point (PDE or boundary condition,
/// in point order), then the interface rows.
pub fn assemble(
    pde: &PdeSpec,
    partition: &Partition,
    features: &FeatureSet,
    colloc: &CollocationSet,
) -> Result<RfmSystem> {
    if colloc.points().is_empty() {
        return Err(Error::InvalidArgument("empty collocation set".into()));
    }
    if features.is_empty() {
        return Err(Error::InvalidArgument("no features".into()));
    }
    if partition.domain() != pde.domain {
        return Err(Error::InvalidArgument("partition and problem domains differ".into()));
    }
    let weights = colloc.weights();
    let (wi, wb) = (weights.interior.sqrt(), weights.boundary.sqrt());
    let n = features.len();
    let mut row_ptr = vec![0];
    let mut col_idx = Vec::new();
    let mut values = Vec::new();
    let mut b = Vec::new();
    for (&p, &kind) in colloc.points().iter().zip(colloc.kinds()) {
        let evals = features.eval_sparse(partition, p)?;
        let cols = evals.iter().map(|(c, _)| *c).collect();
        let eq = match kind {
            PointKind::Interior => Equation {
                cols,
                vals: evals.iter().map(|(_, e)| wi * pde.operator.apply(e)).collect(),
                rhs: wi * (pde.forcing)(p),
            },
            PointKind::Boundary => Equation {
                cols,
                vals: evals.iter().map(|(_, e)| wb * e.value).collect(),
                rhs: wb * (pde.boundary)(p),
            },
        };
        push_row(eq, &mut row_ptr, &mut col_idx, &mut values, &mut b);
    }
    let extra = interface_rows(
        partition,
        features,
        colloc.interface_points(),
        colloc.continuity(),
        weights.interface,
    );
    let interface_rows = extra.len();
    for eq in extra {
        push_row(eq, &mut row_ptr, &mut col_idx, &mut values, &mut b);
    }
    if let Some(i) = b.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index: i });
    }
    let m = b.len();
    Ok(RfmSystem {
        a: CsrMatrix::new(m, n, row_ptr, col_idx, values)?,
        b,
        interior_rows: colloc.count(PointKind::Interior),
        boundary_rows: colloc.count(PointKind::Boundary),
        interface_rows,
        weights,
    })
}

/// `sqrt(sum (u_n - u)^2) / sqrt(sum u^2)` over a `grid x grid` tensor grid
/// covering the domain, edges included.
pub fn relative_l2_error(
    pde: &PdeSpec,
    partition: &Partition,
    features: &FeatureSet,
    coeffs: &[f64],
    grid: usize,
) -> Result<f64> {
    let exact = pde
        .exact
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("no exact solution to compare with".into()))?;
    if grid < 2 {
        return Err(Error::InvalidArgument(format!("error grid must be at least 2, got {grid}")));
    }
    let d = pde.domain;
    let (mut num, mut den) = (0.0, 0.0);
    for iy in 0..grid {
        let y = d.y0 + (d.y1 - d.y0) * iy as f64 / (grid - 1) as f64;
        for ix in 0..grid {
            let x = d.x0 + (d.x1 - d.x0) * ix as f64 / (grid - 1) as f64;
            let u = exact([x, y]);
            let un = features.evaluate(partition, coeffs, [x, y])?;
            num += (un - u) * (un - u);
            den += u * u;
        }
    }
    if den == 0.0 {
        return Err(Error::InvalidArgument("exact solution vanishes on the error grid".into()));
    }
    Ok((num / den).sqrt())
}

/// `u_minus(p) - u_plus(p)` for the local expansions on either side of an
/// interface point.
pub fn interface_jump(partition: &Partition, features: &FeatureSet, coeffs: &[f64], ip: &InterfacePoint) -> f64 {
    let side = |i: usize, p: Point| {
        let mut e = Vec::new();
        features.eval_local(partition, i, p, &mut e);
        e.iter().map(|(c, e)| coeffs[*c] * e.value).sum::<f64>()
    };
    side(ip.minus, ip.point) - side(ip.plus, ip.point)
}
