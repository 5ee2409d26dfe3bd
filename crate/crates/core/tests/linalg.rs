use nalgebra::{DMatrix, DVector, SymmetricEigen};
use proptest::prelude::*;
use sketchls::linalg::{condition_number, dense_qr, dense_svd, solve_upper, spmv, spmv_t};
use sketchls::rng::SeededRng;
use sketchls::{CsrMatrix, DenseMatrix};

fn to_na(m: &DenseMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

fn gaussian(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
    let mut rng = SeededRng::new(seed);
    DenseMatrix::from_row_major(rows, cols, rng.gaussian_vec(rows * cols)).unwrap()
}

fn random_csr(rows: usize, cols: usize, nnz: usize, seed: u64) -> CsrMatrix {
    let mut rng = SeededRng::new(seed);
    let trip: Vec<_> = (0..nnz)
        .map(|_| (rng.index(rows), rng.index(cols), rng.gaussian()))
        .collect();
    CsrMatrix::from_triplets(rows, cols, trip).unwrap()
}

fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let den: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    num / den.max(f64::MIN_POSITIVE)
}

#[test]
fn sparse_products_match_dense_oracle() {
    for seed in 0..10 {
        let a = random_csr(6, 4, 10, seed);
        let d = to_na(&a.to_dense());
        let mut rng = SeededRng::new(100 + seed);
        let x = rng.gaussian_vec(4);
        let y = rng.gaussian_vec(6);
        let ax = &d * DVector::from_vec(x.clone());
        let aty = d.transpose() * DVector::from_vec(y.clone());
        assert!(rel_diff(spmv(&a, &x).unwrap().as_slice(), ax.as_slice()) <= 1e-14);
        assert!(rel_diff(spmv_t(&a, &y).unwrap().as_slice(), aty.as_slice()) <= 1e-14);
    }
}

#[test]
fn trivial_sparse_products() {
    let i3 = CsrMatrix::identity(3);
    assert_eq!(spmv(&i3, &[1.0, 2.0, 3.0]).unwrap().as_slice(), &[1.0, 2.0, 3.0]);
    assert_eq!(spmv(&CsrMatrix::zeros(2, 3), &[4.0, 5.0, 6.0]).unwrap().as_slice(), &[0.0, 0.0]);
    let single = CsrMatrix::from_triplets(1, 3, vec![(0, 2, 5.0)]).unwrap();
    assert_eq!(spmv_t(&single, &[2.0]).unwrap().as_slice(), &[0.0, 0.0, 10.0]);
}

#[test]
fn r_factor_equals_cholesky_of_gram() {
    for seed in 0..5 {
        let m = gaussian(8, 3, seed);
        let (_, r) = dense_qr(&m).unwrap();
        let g = to_na(&m).transpose() * to_na(&m);
        let l = g.cholesky().unwrap().l();
        for i in 0..3 {
            for j in 0..3 {
                assert!((r[(i, j)].abs() - l[(j, i)].abs()).abs() <= 1e-10);
            }
        }
    }
}

#[test]
fn squared_singular_values_equal_gram_eigenvalues() {
    for seed in 0..5 {
        let m = gaussian(8, 3, 10 + seed);
        let svd = dense_svd(&m).unwrap();
        let g = to_na(&m).transpose() * to_na(&m);
        let mut eig: Vec<f64> = SymmetricEigen::new(g).eigenvalues.iter().copied().collect();
        eig.sort_by(|a, b| b.total_cmp(a));
        for (s, e) in svd.sigma.as_slice().iter().zip(&eig) {
            assert!((s * s - e).abs() <= 1e-10 * e.max(1.0));
        }
    }
}

#[test]
fn condition_number_is_ratio_of_extreme_singular_values() {
    let m = gaussian(20, 5, 3);
    let s = dense_svd(&m).unwrap().sigma;
    assert_eq!(condition_number(&m).unwrap(), s[0] / s[4]);
}

#[test]
fn large_qr_and_svd_reconstruct() {
    let m = gaussian(500, 100, 4);
    let scale = m.frobenius_norm();
    let (q, r) = dense_qr(&m).unwrap();
    assert!(q.matmul(&r).unwrap().sub(&m).frobenius_norm() <= 1e-12 * scale);
    let qtq = q.transpose().matmul(&q).unwrap();
    assert!(qtq.sub(&DenseMatrix::identity(100)).frobenius_norm() <= 1e-12 * 100f64.sqrt());
    let svd = dense_svd(&m).unwrap();
    let us = DenseMatrix::from_fn(500, 100, |i, j| svd.u[(i, j)] * svd.sigma[j]);
    assert!(m.matmul(&svd.v).unwrap().sub(&us).frobenius_norm() <= 1e-11 * scale);
}

#[test]
fn triangular_solve_residual() {
    let mut rng = SeededRng::new(5);
    let n = 12;
    let r = DenseMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => rng.gaussian(),
        std::cmp::Ordering::Equal => 1.0 + rng.uniform(),
        std::cmp::Ordering::Greater => 0.0,
    });
    let y = rng.gaussian_vec(n);
    let x = solve_upper(&r, &y).unwrap();
    assert!(rel_diff(r.matvec(x.as_slice()).unwrap().as_slice(), &y) <= 1e-13);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn adjoint_identity(rows in 1usize..40, cols in 1usize..40, fill in 0usize..200, seed in any::<u64>()) {
        let a = random_csr(rows, cols, fill, seed);
        let mut rng = SeededRng::new(seed ^ 1);
        let x = rng.gaussian_vec(cols);
        let y = rng.gaussian_vec(rows);
        let lhs = spmv(&a, &x).unwrap().dot(&y);
        let rhs = spmv_t(&a, &y).unwrap().dot(&x);
        let scale = a.frobenius_norm() * x.iter().map(|v| v * v).sum::<f64>().sqrt()
            * y.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(1e-300));
    }

    #[test]
    fn csr_invariants_hold_after_assembly(rows in 1usize..30, cols in 1usize..30, fill in 0usize..150, seed in any::<u64>()) {
        let a = random_csr(rows, cols, fill, seed);
        let rp = a.row_ptr();
        prop_assert_eq!(rp[0], 0);
        prop_assert_eq!(rp[rows], a.values().len());
        prop_assert_eq!(a.col_idx().len(), a.values().len());
        for i in 0..rows {
            prop_assert!(rp[i] <= rp[i + 1]);
            let (c, _) = a.row(i);
            prop_assert!(c.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(c.iter().all(|&j| j < cols));
        }
    }

    #[test]
    fn qr_reconstructs_random_inputs(cols in 1usize..20, extra in 0usize..40, seed in any::<u64>()) {
        let m = gaussian(cols + extra, cols, seed);
        let (q, r) = dense_qr(&m).unwrap();
        prop_assert!(q.matmul(&r).unwrap().sub(&m).frobenius_norm() <= 1e-12 * m.frobenius_norm());
        let orth = q.transpose().matmul(&q).unwrap().sub(&DenseMatrix::identity(cols)).frobenius_norm();
        prop_assert!(orth <= 1e-12 * (cols as f64).sqrt());
        for i in 0..cols {
            prop_assert!(r[(i, i)] >= 0.0);
        }
    }

    #[test]
    fn svd_reconstructs_random_inputs(cols in 1usize..20, extra in 0usize..40, seed in any::<u64>()) {
        let m = gaussian(cols + extra, cols, seed);
        let svd = dense_svd(&m).unwrap();
        let k = svd.sigma.len();
        let us = DenseMatrix::from_fn(m.rows(), k, |i, j| svd.u[(i, j)] * svd.sigma[j]);
        prop_assert!(m.matmul(&svd.v).unwrap().sub(&us).frobenius_norm() <= 1e-11 * m.frobenius_norm());
        prop_assert!(svd.sigma.as_slice().windows(2).all(|w| w[0] >= w[1]));
    }
}
