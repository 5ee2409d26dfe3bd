use sketchls::linalg::condition_number;
use sketchls::rfm::{
    assemble, interface_jump, CollocationSet, Continuity, Derivative, ExactSolution, FeatureSet,
    InterfacePoint, Operator, Partition, PdeSpec, PointKind, PouKind, Rect, RfmConfig, WeightSpec,
};
use sketchls::rng::SeededRng;
use sketchls::{cssvdp_lsqr, direct_dense_ls, SketchConfig, SolveOptions};

#[test]
fn forcing_in_the_feature_span_is_solved_exactly() {
    let part = Partition::new(Rect::UNIT, 1, 1, PouKind::Indicator).unwrap();
    let feats = FeatureSet::new(1, 8, 1.0, 21).unwrap();
    let (k, b) = (feats.weight(3), feats.bias(3));
    let (c, r) = (part.center(0), part.radius(0));
    let pde = PdeSpec::manufactured_from(Operator::Poisson, Rect::UNIT, move |p| {
        let t = (k[0] * (p[0] - c[0]) / r[0] + k[1] * (p[1] - c[1]) / r[1] + b).tanh();
        let d2 = -2.0 * t * (1.0 - t * t);
        (t, d2 * ((k[0] / r[0]).powi(2) + (k[1] / r[1]).powi(2)))
    })
    .unwrap();
    let colloc = CollocationSet::equispaced(&part, 5, WeightSpec::default(), Continuity::C1).unwrap();
    let sys = assemble(&pde, &part, &feats, &colloc).unwrap();
    let rep = direct_dense_ls(&sys.a, &sys.b).unwrap();
    assert!(rep.relative_ls_error <= 1e-20);
    let err = sketchls::rfm::relative_l2_error(&pde, &part, &feats, rep.x.as_slice(), 41).unwrap();
    assert!(err <= 1e-10, "{err}");
}

#[test]
fn indicator_blocks_touch_only_owned_rows() {
    let cfg = RfmConfig::unit_square(ExactSolution::ExpSin, 2, 2, 6, 5, PouKind::Indicator);
    let prob = cfg.build().unwrap();
    let sys = prob.assemble().unwrap();
    let pts = prob.colloc.points();
    assert_eq!(sys.a.rows(), pts.len() + sys.interface_rows);
    for (row, p) in pts.iter().enumerate() {
        let owner = prob.partition.owner(*p);
        let (cols, _) = sys.a.row(row);
        assert!(!cols.is_empty());
        assert!(cols.iter().all(|c| c / 5 == owner));
    }
    for row in pts.len()..sys.a.rows() {
        let (cols, _) = sys.a.row(row);
        let blocks: std::collections::BTreeSet<usize> = cols.iter().map(|c| c / 5).collect();
        assert_eq!(blocks.len(), 2);
    }
}

#[test]
fn assembled_entries_match_feature_evaluation() {
    for pou in [PouKind::Indicator, PouKind::Smooth] {
        let mut cfg = RfmConfig::unit_square(ExactSolution::SinSin { freq: 2.0 }, 2, 2, 7, 6, pou);
        cfg.seed = 4;
        let prob = cfg.build().unwrap();
        let sys = prob.assemble().unwrap();
        let dense = sys.a.to_dense();
        let w = sys.weights;
        let mut rng = SeededRng::new(5);
        for _ in 0..50 {
            let i = rng.index(prob.colloc.points().len());
            let j = rng.index(sys.a.cols());
            let p = prob.colloc.points()[i];
            let want = match prob.colloc.kinds()[i] {
                PointKind::Interior => {
                    -w.interior.sqrt() * prob.features.feature_eval(&prob.partition, p, Derivative::Laplacian).unwrap()[j]
                }
                PointKind::Boundary => {
                    w.boundary.sqrt() * prob.features.feature_eval(&prob.partition, p, Derivative::Value).unwrap()[j]
                }
            };
            assert!((dense[(i, j)] - want).abs() <= 1e-12 * want.abs().max(1.0), "{pou:?} ({i}, {j})");
        }
    }
}

#[test]
fn continuity_rows_close_the_interface() {
    let mut cfg = RfmConfig::unit_square(ExactSolution::SinSin { freq: 1.0 }, 2, 2, 41, 200, PouKind::Indicator);
    cfg.seed = 6;
    cfg.weights.interface = 100.0;
    let prob = cfg.build().unwrap();
    let sys = prob.assemble().unwrap();
    assert!(sys.interface_rows > 0);
    let rep = cssvdp_lsqr(&sys.a, &sys.b, &SketchConfig::with_seed(2), &SolveOptions::default()).unwrap();
    let coeffs = rep.x.as_slice();
    let mut worst: f64 = 0.0;
    // held-out points between collocation nodes; boxes are numbered iy * 2 + ix
    for k in 0..40 {
        let t = (k as f64 + 0.37) / 40.0;
        let side = usize::from(t >= 0.5);
        let vertical = InterfacePoint { point: [0.5, t], axis: 0, minus: 2 * side, plus: 2 * side + 1 };
        let horizontal = InterfacePoint { point: [t, 0.5], axis: 1, minus: side, plus: side + 2 };
        for ip in [vertical, horizontal] {
            worst = worst.max(interface_jump(&prob.partition, &prob.features, coeffs, &ip).abs());
        }
    }
    assert!(worst <= 1e-6, "largest jump {worst}");
}

#[test]
fn assembled_systems_are_badly_conditioned() {
    let mut cfg = RfmConfig::unit_square(ExactSolution::SinSin { freq: 1.0 }, 2, 2, 21, 200, PouKind::Smooth);
    cfg.seed = 7;
    let sys = cfg.build().unwrap().assemble().unwrap();
    let k = condition_number(&sys.a.to_dense()).unwrap();
    assert!(k >= 1e8, "kappa = {k:e}");
}

#[test]
fn sketched_solve_matches_direct_on_assembled_system() {
    let mut cfg = RfmConfig::unit_square(ExactSolution::ExpSin, 2, 2, 21, 100, PouKind::Smooth);
    cfg.seed = 8;
    let prob = cfg.build().unwrap();
    let sys = prob.assemble().unwrap();
    let d = direct_dense_ls(&sys.a, &sys.b).unwrap();
    let s = cssvdp_lsqr(&sys.a, &sys.b, &SketchConfig::with_seed(1), &SolveOptions::default()).unwrap();
    assert!((s.relative_ls_error - d.relative_ls_error).abs() <= 1e-10);
    assert!(prob.relative_l2_error(s.x.as_slice()).unwrap() <= 1e-3);
}

#[test]
fn assembly_is_deterministic() {
    let mut cfg = RfmConfig::unit_square(ExactSolution::Gaussian { center: [0.4, 0.6], width: 0.3 }, 3, 2, 6, 10, PouKind::Indicator);
    cfg.seed = 9;
    let (a, b) = (cfg.build().unwrap().assemble().unwrap(), cfg.build().unwrap().assemble().unwrap());
    assert_eq!(a.a, b.a);
    let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&a.b), bits(&b.b));
    assert_eq!(bits(a.a.values()), bits(b.a.values()));
}

#[test]
fn config_survives_toml_round_trip() {
    let mut cfg = RfmConfig::unit_square(ExactSolution::SinSin { freq: 3.0 }, 2, 3, 9, 12, PouKind::Smooth);
    cfg.operator = Operator::Helmholtz { wave_number: 2.0 };
    cfg.seed = 42;
    let text = cfg.to_toml_string().unwrap();
    assert_eq!(RfmConfig::from_toml_str(&text).unwrap(), cfg);
    assert!(RfmConfig::from_toml_str("nx = 2\nbogus = 1\n").is_err());
}

#[test]
fn gradients_match_finite_differences_for_indicator() {
    let mut cfg = RfmConfig::unit_square(ExactSolution::ExpSin, 2, 2, 5, 6, PouKind::Indicator);
    cfg.seed = 10;
    let prob = cfg.build().unwrap();
    let (part, f) = (&prob.partition, &prob.features);
    let mut rng = SeededRng::new(11);
    let h = 1e-5;
    let mut checked = 0;
    while checked < 20 {
        let p = [rng.uniform(), rng.uniform()];
        if (p[0] - 0.5).abs() < 0.01 || (p[1] - 0.5).abs() < 0.01 {
            continue;
        }
        checked += 1;
        let val = |q: [f64; 2]| f.feature_eval(part, q, Derivative::Value).unwrap();
        let gx = f.feature_eval(part, p, Derivative::Dx).unwrap();
        let gy = f.feature_eval(part, p, Derivative::Dy).unwrap();
        let (xp, xm, yp, ym) = (val([p[0] + h, p[1]]), val([p[0] - h, p[1]]), val([p[0], p[1] + h]), val([p[0], p[1] - h]));
        for j in 0..f.len() {
            assert!((gx[j] - (xp[j] - xm[j]) / (2.0 * h)).abs() <= 1e-5);
            assert!((gy[j] - (yp[j] - ym[j]) / (2.0 * h)).abs() <= 1e-5);
        }
    }
}
