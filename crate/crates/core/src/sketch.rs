//! Count sketch `S = Phi D`: row `i` of the input is added, with sign
//! `sign[i]`, into output row `bucket[i]`. `S` is never materialized.

use crate::error::{Error, Result};
use crate::linalg::{dense_svd, CsrMatrix, DenseMatrix, Vector};
use crate::linalg::vector::{axpy, norm2};
use crate::rng::SeededRng;

/// Default oversampling factor; `s = ceil(gamma * n)`.
pub const DEFAULT_GAMMA: f64 = 3.0;

#[derive(Clone, Debug, PartialEq)]
pub struct CountSketch {
    s: usize,
    m: usize,
    bucket: Vec<usize>,
    sign: Vec<i8>,
    seed: Option<u64>,
}

impl CountSketch {
    /// Draws `h` and the signs from [`SeededRng`]: all `m` buckets first, then
    /// all `m` signs.
    pub fn new(s: usize, m: usize, seed: u64) -> Result<Self> {
        if s == 0 || s > m {
            return Err(Error::InvalidArgument(format!(
                "count sketch needs 1 <= s <= m, got s = {s}, m = {m}"
            )));
        }
        let mut rng = SeededRng::new(seed);
        let bucket = (0..m).map(|_| rng.index(s)).collect();
        let sign = (0..m).map(|_| rng.sign()).collect();
        Ok(CountSketch {
            s,
            m,
            bucket,
            sign,
            seed: Some(seed),
        })
    }

    /// A sketch with prescribed hash and signs.
    pub fn from_parts(s: usize, bucket: Vec<usize>, sign: Vec<i8>) -> Result<Self> {
        if bucket.len() != sign.len() {
            return Err(Error::dims("CountSketch::from_parts", bucket.len(), sign.len()));
        }
        if s == 0 {
            return Err(Error::InvalidArgument("s must be positive".into()));
        }
        if let Some(b) = bucket.iter().find(|&&b| b >= s) {
            return Err(Error::InvalidArgument(format!("bucket {b} outside [0, {s})")));
        }
        if sign.iter().any(|&g| g != 1 && g != -1) {
            return Err(Error::InvalidArgument("signs must be +1 or -1".into()));
        }
        Ok(CountSketch {
            s,
            m: bucket.len(),
            bucket,
            sign,
            seed: None,
        })
    }

    pub fn rows(&self) -> usize {
        self.s
    }

    pub fn cols(&self) -> usize {
        self.m
    }

    pub fn bucket(&self) -> &[usize] {
        &self.bucket
    }

    pub fn sign(&self) -> &[i8] {
        &self.sign
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Dense `s x m` matrix, for diagnostics and tests.
    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.s, self.m);
        for (i, (&h, &g)) in self.bucket.iter().zip(&self.sign).enumerate() {
            d[(h, i)] = g as f64;
        }
        d
    }

    /// `S A` as a dense `s x n` matrix, one pass over the nonzeros of `A`.
    pub fn apply_left(&self, a: &CsrMatrix) -> Result<DenseMatrix> {
        if a.rows() != self.m {
            return Err(Error::dims("CountSketch::apply_left", self.m, a.rows()));
        }
        let mut out = DenseMatrix::zeros(self.s, a.cols());
        for i in 0..self.m {
            let (cols, vals) = a.row(i);
            let dst = out.row_mut(self.bucket[i]);
            if self.sign[i] > 0 {
                for (&j, &v) in cols.iter().zip(vals) {
                    dst[j] += v;
                }
            } else {
                for (&j, &v) in cols.iter().zip(vals) {
                    dst[j] -= v;
                }
            }
        }
        Ok(out)
    }

    /// `S A` for a dense `A`.
    pub fn apply_left_dense(&self, a: &DenseMatrix) -> Result<DenseMatrix> {
        if a.rows() != self.m {
            return Err(Error::dims("CountSketch::apply_left_dense", self.m, a.rows()));
        }
        let mut out = DenseMatrix::zeros(self.s, a.cols());
        for i in 0..self.m {
            axpy(self.sign[i] as f64, a.row(i), out.row_mut(self.bucket[i]));
        }
        Ok(out)
    }

    /// `S v`.
    pub fn apply_to_vector(&self, v: &[f64]) -> Result<Vector> {
        if v.len() != self.m {
            return Err(Error::dims("CountSketch::apply_to_vector", self.m, v.len()));
        }
        let mut out = vec![0.0; self.s];
        for (i, &vi) in v.iter().enumerate() {
            out[self.bucket[i]] += self.sign[i] as f64 * vi;
        }
        Ok(Vector::from_kernel(out))
    }
}

/// `ceil(gamma * n)`, the oversampled sketch size.
pub fn oversampled_size(gamma: f64, n: usize) -> Result<usize> {
    if !(gamma > 1.0) || !gamma.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "oversampling factor must exceed 1, got {gamma}"
        )));
    }
    Ok((gamma * n as f64).ceil() as usize)
}

/// Target distortion and failure probability for an oblivious embedding.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EmbeddingParams {
    pub epsilon: f64,
    pub delta: f64,
    pub gamma: f64,
    pub n: usize,
}

impl EmbeddingParams {
    pub fn new(epsilon: f64, delta: f64, gamma: f64, n: usize) -> Result<Self> {
        let unit = |v: f64| v > 0.0 && v < 1.0;
        if !unit(epsilon) || !unit(delta) {
            return Err(Error::InvalidArgument(format!(
                "epsilon and delta must lie in (0, 1), got {epsilon}, {delta}"
            )));
        }
        if !(gamma > 1.0) {
            return Err(Error::InvalidArgument(format!("gamma must exceed 1, got {gamma}")));
        }
        Ok(EmbeddingParams {
            epsilon,
            delta,
            gamma,
            n,
        })
    }

    /// Sample size `(n^2 + n) / (delta epsilon^2)` that guarantees a
    /// `(1 +- epsilon)` embedding with probability `1 - delta`.
    pub fn guaranteed_size(&self) -> usize {
        let n = self.n as f64;
        ((n * n + n) / (self.delta * self.epsilon * self.epsilon)).ceil() as usize
    }

    /// The empirical regime `s = ceil(gamma n)`.
    pub fn oversampled_size(&self) -> usize {
        (self.gamma * self.n as f64).ceil() as usize
    }
}

/// Min and max of `||S A x||^2 / ||A x||^2` over `trials` random unit
/// directions `x` (Gaussian, normalized, drawn from `seed`). Directions with
/// `A x = 0` are skipped.
pub fn embedding_distortion(
    sketch: &CountSketch,
    a: &CsrMatrix,
    trials: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let sa = sketch.apply_left(a)?;
    let n = a.cols();
    let mut rng = SeededRng::new(seed);
    let mut ax = vec![0.0; a.rows()];
    let mut sax = vec![0.0; sketch.rows()];
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..trials {
        let mut x = rng.gaussian_vec(n);
        let nx = norm2(&x);
        if nx == 0.0 {
            continue;
        }
        x.iter_mut().for_each(|v| *v /= nx);
        a.spmv_into(&x, &mut ax);
        let den = norm2(&ax);
        if den == 0.0 {
            continue;
        }
        sa.matvec_into(&x, &mut sax);
        let ratio = (norm2(&sax) / den).powi(2);
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    if lo > hi {
        return Err(Error::AllDirectionsAnnihilated);
    }
    Ok((lo, hi))
}

/// Distortion `max(1 - lo, hi - 1)` implied by a measured ratio range.
pub fn distortion_epsilon(lo: f64, hi: f64) -> f64 {
    (1.0 - lo).max(hi - 1.0)
}

/// Worst-case distortion over the whole column space of `a`:
/// with `U` an orthonormal basis of `range(A)` (singular vectors above
/// `rank_tol * sigma_max`), returns `max(sigma_max(SU)^2 - 1, 1 - sigma_min(SU)^2)`.
/// Densifies `A`; diagnostic use only.
pub fn subspace_distortion(sketch: &CountSketch, a: &CsrMatrix, rank_tol: f64) -> Result<f64> {
    let svd = dense_svd(&a.to_dense())?;
    let top = svd.sigma.first().copied().unwrap_or(0.0);
    let r = svd.sigma.iter().filter(|&&s| s > rank_tol * top).count();
    if r == 0 {
        return Err(Error::ZeroMatrix);
    }
    let basis = svd.u.leading_columns(r);
    let su = sketch.apply_left_dense(&basis)?;
    let s = crate::linalg::singular_values(&su)?;
    let (smax, smin) = (s[0], s[s.len() - 1]);
    Ok((smax * smax - 1.0).max(1.0 - smin * smin))
}
