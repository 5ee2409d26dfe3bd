//! Frozen random `tanh` features, one block per subdomain.

use crate::error::{Error, Result};
use crate::rfm::partition::{Partition, Point};
use crate::rng::SeededRng;

/// Default bound on the random weights and biases.
pub const DEFAULT_WEIGHT_BOUND: f64 = 1.0;

/// Value, gradient and Laplacian of one basis function at one point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BasisEval {
    pub value: f64,
    pub grad: Point,
    pub laplacian: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Derivative {
    Value,
    Dx,
    Dy,
    Laplacian,
}

impl BasisEval {
    pub fn get(&self, d: Derivative) -> f64 {
        match d {
            Derivative::Value => self.value,
            Derivative::Dx => self.grad[0],
            Derivative::Dy => self.grad[1],
            Derivative::Laplacian => self.laplacian,
        }
    }
}

/// `phi_ij(x) = tanh(k_ij . l_i(x) + b_ij)` with every component of `k_ij`
/// and `b_ij` uniform on `[-bound, bound]`. Column of feature `j` of
/// subdomain `i` is `i * per_subdomain + j`.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureSet {
    per_subdomain: usize,
    weights: Vec<Point>,
    biases: Vec<f64>,
    bound: f64,
    seed: u64,
}

impl FeatureSet {
    /// Draws, per subdomain and per feature, `k_x`, `k_y`, then `b`.
    pub fn new(subdomains: usize, per_subdomain: usize, bound: f64, seed: u64) -> Result<Self> {
        if subdomains == 0 || per_subdomain == 0 {
            return Err(Error::InvalidArgument("feature count must be positive".into()));
        }
        if !(bound > 0.0 && bound.is_finite()) {
            return Err(Error::InvalidArgument(format!("weight bound must be positive, got {bound}")));
        }
        let total = subdomains * per_subdomain;
        let mut rng = SeededRng::new(seed);
        let mut weights = Vec::with_capacity(total);
        let mut biases = Vec::with_capacity(total);
        for _ in 0..total {
            let kx = rng.symmetric(bound);
            let ky = rng.symmetric(bound);
            weights.push([kx, ky]);
            biases.push(rng.symmetric(bound));
        }
        Ok(FeatureSet {
            per_subdomain,
            weights,
            biases,
            bound,
            seed,
        })
    }

    /// Features with prescribed parameters.
    pub fn from_parts(per_subdomain: usize, weights: Vec<Point>, biases: Vec<f64>) -> Result<Self> {
        if per_subdomain == 0 || weights.is_empty() || !weights.len().is_multiple_of(per_subdomain) {
            return Err(Error::InvalidArgument(format!(
                "{} features do not split into blocks of {per_subdomain}",
                weights.len()
            )));
        }
        if weights.len() != biases.len() {
            return Err(Error::dims("FeatureSet::from_parts", weights.len(), biases.len()));
        }
        let bound = weights
            .iter()
            .flat_map(|k| k.iter())
            .chain(&biases)
            .fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(FeatureSet {
            per_subdomain,
            weights,
            biases,
            bound,
            seed: 0,
        })
    }

    pub fn per_subdomain(&self) -> usize {
        self.per_subdomain
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn subdomains(&self) -> usize {
        self.weights.len() / self.per_subdomain
    }

    pub fn weight(&self, col: usize) -> Point {
        self.weights[col]
    }

    pub fn bias(&self, col: usize) -> f64 {
        self.biases[col]
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn check(&self, partition: &Partition) -> Result<()> {
        if partition.len() != self.subdomains() {
            return Err(Error::dims("FeatureSet", partition.len(), self.subdomains()));
        }
        Ok(())
    }

    /// The bare features of subdomain `i` (no partition of unity), appended
    /// to `out` as `(column, eval)`.
    pub fn eval_local(&self, partition: &Partition, i: usize, p: Point, out: &mut Vec<(usize, BasisEval)>) {
        let (c, r) = (partition.center(i), partition.radius(i));
        let l = [(p[0] - c[0]) / r[0], (p[1] - c[1]) / r[1]];
        for col in i * self.per_subdomain..(i + 1) * self.per_subdomain {
            let k = self.weights[col];
            let t = (k[0] * l[0] + k[1] * l[1] + self.biases[col]).tanh();
            let d1 = 1.0 - t * t;
            let d2 = -2.0 * t * d1;
            let (gx, gy) = (k[0] / r[0], k[1] / r[1]);
            out.push((
                col,
                BasisEval {
                    value: t,
                    grad: [d1 * gx, d1 * gy],
                    laplacian: d2 * (gx * gx + gy * gy),
                },
            ));
        }
    }

    /// Every basis function `psi_i phi_ij` that is nonzero at `p`, as
    /// `(column, eval)` in increasing column order. Product rule:
    /// `lap(psi phi) = psi lap(phi) + 2 grad(psi).grad(phi) + phi lap(psi)`.
    pub fn eval_sparse(&self, partition: &Partition, p: Point) -> Result<Vec<(usize, BasisEval)>> {
        self.check(partition)?;
        let mut out = Vec::new();
        for i in partition.covering(p) {
            let (psi, gpsi, lpsi) = partition.pou_eval(i, p);
            if psi == 0.0 && gpsi == [0.0, 0.0] && lpsi == 0.0 {
                continue;
            }
            let start = out.len();
            self.eval_local(partition, i, p, &mut out);
            for (_, e) in &mut out[start..] {
                let phi = *e;
                e.value = psi * phi.value;
                e.grad = [
                    psi * phi.grad[0] + phi.value * gpsi[0],
                    psi * phi.grad[1] + phi.value * gpsi[1],
                ];
                e.laplacian = psi * phi.laplacian
                    + 2.0 * (gpsi[0] * phi.grad[0] + gpsi[1] * phi.grad[1])
                    + phi.value * lpsi;
            }
        }
        Ok(out)
    }

    /// One derivative of every basis function at `p` (dense, length `len()`).
    pub fn feature_eval(&self, partition: &Partition, p: Point, d: Derivative) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.len()];
        for (col, e) in self.eval_sparse(partition, p)? {
            out[col] = e.get(d);
        }
        Ok(out)
    }

    /// `sum_j c_j (psi phi)_j (p)`.
    pub fn evaluate(&self, partition: &Partition, coeffs: &[f64], p: Point) -> Result<f64> {
        if coeffs.len() != self.len() {
            return Err(Error::dims("FeatureSet::evaluate", self.len(), coeffs.len()));
        }
        Ok(self
            .eval_sparse(partition, p)?
            .iter()
            .map(|(col, e)| coeffs[*col] * e.value)
            .sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rfm::partition::{PouKind, Rect};

    fn setup(pou: PouKind) -> (Partition, FeatureSet) {
        let p = Partition::new(Rect::new(-1.0, 2.0, 0.0, 1.5).unwrap(), 2, 2, pou).unwrap();
        let f = FeatureSet::new(4, 5, 1.0, 17).unwrap();
        (p, f)
    }

    #[test]
    fn draws_are_bounded_and_reproducible() {
        let f = FeatureSet::new(3, 4, 0.7, 5).unwrap();
        assert_eq!(f.len(), 12);
        for c in 0..12 {
            let k = f.weight(c);
            assert!(k[0].abs() <= 0.7 && k[1].abs() <= 0.7 && f.bias(c).abs() <= 0.7);
        }
        assert_eq!(f, FeatureSet::new(3, 4, 0.7, 5).unwrap());
        assert!(FeatureSet::new(3, 0, 1.0, 5).is_err());
    }

    #[test]
    fn odd_feature_at_center() {
        let part = Partition::new(Rect::UNIT, 1, 1, PouKind::Indicator).unwrap();
        let mut f = FeatureSet::new(1, 1, 1.0, 3).unwrap();
        f.biases[0] = 0.0;
        let e = f.eval_sparse(&part, [0.5, 0.5]).unwrap()[0].1;
        let k = f.weight(0);
        assert_eq!(e.value, 0.0);
        assert!((e.grad[0] - k[0] / 0.5).abs() < 1e-15 && (e.grad[1] - k[1] / 0.5).abs() < 1e-15);
        assert_eq!(e.laplacian, 0.0);
    }

    #[test]
    fn indicator_support() {
        let (part, f) = setup(PouKind::Indicator);
        let p = [1.7, 1.2];
        let owner = part.owner(p);
        for d in [Derivative::Value, Derivative::Dx, Derivative::Laplacian] {
            let v = f.feature_eval(&part, p, d).unwrap();
            for (col, x) in v.iter().enumerate() {
                if col / 5 != owner {
                    assert_eq!(*x, 0.0);
                }
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let mut rng = SeededRng::new(99);
        for pou in [PouKind::Indicator, PouKind::Smooth] {
            let (part, f) = setup(pou);
            let h = 1e-4;
            for _ in 0..20 {
                // keep away from the indicator's jumps at x = 0.5, y = 0.75
                let p = [-0.9 + 1.2 * rng.uniform(), 0.05 + 0.6 * rng.uniform()];
                let val = |q: Point| f.feature_eval(&part, q, Derivative::Value).unwrap();
                let c = val(p);
                let (xp, xm) = (val([p[0] + h, p[1]]), val([p[0] - h, p[1]]));
                let (yp, ym) = (val([p[0], p[1] + h]), val([p[0], p[1] - h]));
                let gx = f.feature_eval(&part, p, Derivative::Dx).unwrap();
                let gy = f.feature_eval(&part, p, Derivative::Dy).unwrap();
                let lap = f.feature_eval(&part, p, Derivative::Laplacian).unwrap();
                for j in 0..f.len() {
                    let fdx = (xp[j] - xm[j]) / (2.0 * h);
                    let fdy = (yp[j] - ym[j]) / (2.0 * h);
                    let fl = (xp[j] + xm[j] + yp[j] + ym[j] - 4.0 * c[j]) / (h * h);
                    assert!((gx[j] - fdx).abs() < 1e-5, "{pou:?} dx");
                    assert!((gy[j] - fdy).abs() < 1e-5, "{pou:?} dy");
                    assert!((lap[j] - fl).abs() < 1e-5 * (1.0 + lap[j].abs()), "{pou:?} lap");
                }
            }
        }
    }
}
