//! Box partition of a rectangle and the two partition-of-unity profiles.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point = [f64; 2];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub const UNIT: Rect = Rect {
        x0: 0.0,
        x1: 1.0,
        y0: 0.0,
        y1: 1.0,
    };

    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        let ok = [x0, x1, y0, y1].iter().all(|v| v.is_finite()) && x1 > x0 && y1 > y0;
        if !ok {
            return Err(Error::InvalidArgument(format!(
                "degenerate rectangle [{x0}, {x1}] x [{y0}, {y1}]"
            )));
        }
        Ok(Rect { x0, x1, y0, y1 })
    }

    fn lo(&self, axis: usize) -> f64 {
        [self.x0, self.y0][axis]
    }

    fn hi(&self, axis: usize) -> f64 {
        [self.x1, self.y1][axis]
    }

    pub fn contains(&self, p: Point) -> bool {
        (self.x0..=self.x1).contains(&p[0]) && (self.y0..=self.y1).contains(&p[1])
    }

    pub fn on_boundary(&self, p: Point) -> bool {
        self.contains(p) && (p[0] == self.x0 || p[0] == self.x1 || p[1] == self.y0 || p[1] == self.y1)
    }
}

/// Partition-of-unity profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PouKind {
    /// Indicator of `[-1, 1]`; discontinuous across subdomains.
    #[serde(alias = "a")]
    Indicator,
    /// `C^1` sine blend: 1 on `[-3/4, 3/4]`, 0 outside `[-5/4, 5/4]`.
    #[serde(alias = "b")]
    Smooth,
}

/// 1D profile and its first two derivatives in the normalized coordinate.
pub fn pou_1d(kind: PouKind, l: f64) -> (f64, f64, f64) {
    match kind {
        PouKind::Indicator => (if l.abs() <= 1.0 { 1.0 } else { 0.0 }, 0.0, 0.0),
        PouKind::Smooth => {
            let a = l.abs();
            if a <= 0.75 {
                (1.0, 0.0, 0.0)
            } else if a > 1.25 {
                (0.0, 0.0, 0.0)
            } else {
                let (s, c) = (2.0 * PI * l).sin_cos();
                let g = if l < 0.0 { 1.0 } else { -1.0 };
                (
                    0.5 * (1.0 + g * s),
                    g * PI * c,
                    -g * 2.0 * PI * PI * s,
                )
            }
        }
    }
}

/// Tensor-product profile value at a normalized point.
pub fn pou_value(kind: PouKind, l: Point) -> f64 {
    pou_1d(kind, l[0]).0 * pou_1d(kind, l[1]).0
}

/// `N_x x N_y` grid of boxes tiling a rectangle; subdomain `i = iy * N_x + ix`.
#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    domain: Rect,
    grid: (usize, usize),
    centers: Vec<Point>,
    radii: Vec<Point>,
    pou: PouKind,
}

impl Partition {
    pub fn new(domain: Rect, nx: usize, ny: usize, pou: PouKind) -> Result<Self> {
        let domain = Rect::new(domain.x0, domain.x1, domain.y0, domain.y1)?;
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidArgument("partition needs at least one box per axis".into()));
        }
        let (hx, hy) = ((domain.x1 - domain.x0) / nx as f64, (domain.y1 - domain.y0) / ny as f64);
        let mut centers = Vec::with_capacity(nx * ny);
        let mut radii = Vec::with_capacity(nx * ny);
        for iy in 0..ny {
            for ix in 0..nx {
                centers.push([
                    domain.x0 + (ix as f64 + 0.5) * hx,
                    domain.y0 + (iy as f64 + 0.5) * hy,
                ]);
                radii.push([0.5 * hx, 0.5 * hy]);
            }
        }
        Ok(Partition {
            domain,
            grid: (nx, ny),
            centers,
            radii,
            pou,
        })
    }

    pub fn domain(&self) -> Rect {
        self.domain
    }

    pub fn grid(&self) -> (usize, usize) {
        self.grid
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn pou(&self) -> PouKind {
        self.pou
    }

    pub fn center(&self, i: usize) -> Point {
        self.centers[i]
    }

    pub fn radius(&self, i: usize) -> Point {
        self.radii[i]
    }

    /// Grid coordinates of subdomain `i`.
    pub fn cell(&self, i: usize) -> (usize, usize) {
        (i % self.grid.0, i / self.grid.0)
    }

    /// `(x - c_i) / r_i` componentwise.
    pub fn normalized_coord(&self, i: usize, p: Point) -> Result<Point> {
        let (c, r) = self.box_of(i)?;
        if r[0] == 0.0 || r[1] == 0.0 {
            return Err(Error::InvalidArgument(format!("subdomain {i} has zero radius")));
        }
        Ok([(p[0] - c[0]) / r[0], (p[1] - c[1]) / r[1]])
    }

    /// Inverse of [`Self::normalized_coord`].
    pub fn physical_coord(&self, i: usize, l: Point) -> Result<Point> {
        let (c, r) = self.box_of(i)?;
        Ok([c[0] + r[0] * l[0], c[1] + r[1] * l[1]])
    }

    fn box_of(&self, i: usize) -> Result<(Point, Point)> {
        if i >= self.len() {
            return Err(Error::InvalidArgument(format!(
                "subdomain {i} out of range (have {})",
                self.len()
            )));
        }
        Ok((self.centers[i], self.radii[i]))
    }

    fn axis_cell(&self, axis: usize, v: f64) -> usize {
        let n = [self.grid.0, self.grid.1][axis];
        let (lo, hi) = (self.domain.lo(axis), self.domain.hi(axis));
        let t = ((v - lo) / (hi - lo) * n as f64).floor();
        (t.max(0.0) as usize).min(n - 1)
    }

    /// The box that owns `p`: floor of the grid coordinate, clamped so points
    /// on the upper domain edge belong to the last box. Shared edges go to
    /// the upper neighbour.
    pub fn owner(&self, p: Point) -> usize {
        self.axis_cell(1, p[1]) * self.grid.0 + self.axis_cell(0, p[0])
    }

    /// Subdomains whose profile is nonzero at `p`, in increasing index order.
    /// For the indicator profile this is the owner alone.
    pub fn covering(&self, p: Point) -> Vec<usize> {
        match self.pou {
            PouKind::Indicator => vec![self.owner(p)],
            PouKind::Smooth => (0..self.len())
                .filter(|&i| {
                    let (c, r) = (self.centers[i], self.radii[i]);
                    ((p[0] - c[0]) / r[0]).abs() < 1.25 && ((p[1] - c[1]) / r[1]).abs() < 1.25
                })
                .collect(),
        }
    }

    /// Interior grid lines `(axis, coordinate)`: vertical lines have axis 0.
    pub fn internal_lines(&self) -> Vec<(usize, f64)> {
        let mut out = Vec::new();
        for axis in 0..2 {
            let n = [self.grid.0, self.grid.1][axis];
            let (lo, hi) = (self.domain.lo(axis), self.domain.hi(axis));
            for k in 1..n {
                out.push((axis, lo + (hi - lo) * k as f64 / n as f64));
            }
        }
        out
    }

    /// Smooth 1D profile of the box in grid column `k` along `axis`. On a side
    /// that faces the domain boundary there is no neighbour to blend with, so
    /// the profile stays at 1 there and the boxes sum to one on the whole domain.
    fn edge_profile(&self, axis: usize, k: usize, l: f64) -> (f64, f64, f64) {
        let n = [self.grid.0, self.grid.1][axis];
        if (l < 0.0 && k == 0) || (l > 0.0 && k + 1 == n) {
            return if l.abs() <= 1.25 { (1.0, 0.0, 0.0) } else { (0.0, 0.0, 0.0) };
        }
        pou_1d(PouKind::Smooth, l)
    }

    /// Profile value, gradient and Laplacian of subdomain `i` at `p`, in
    /// physical coordinates. The indicator profile is the indicator of the
    /// owned cell and has zero derivatives.
    pub fn pou_eval(&self, i: usize, p: Point) -> (f64, Point, f64) {
        match self.pou {
            PouKind::Indicator => {
                let v = if self.owner(p) == i { 1.0 } else { 0.0 };
                (v, [0.0, 0.0], 0.0)
            }
            PouKind::Smooth => {
                let (c, r) = (self.centers[i], self.radii[i]);
                let (ix, iy) = self.cell(i);
                let (fx, dx, ddx) = self.edge_profile(0, ix, (p[0] - c[0]) / r[0]);
                let (fy, dy, ddy) = self.edge_profile(1, iy, (p[1] - c[1]) / r[1]);
                (
                    fx * fy,
                    [dx / r[0] * fy, fx * dy / r[1]],
                    ddx / (r[0] * r[0]) * fy + fx * ddy / (r[1] * r[1]),
                )
            }
        }
    }
}
