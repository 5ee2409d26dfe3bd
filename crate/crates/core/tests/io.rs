use sketchls::io::{
    parse_matrix_market, parse_vector, read_matrix_market, read_vector, spectra, write_matrix_market,
    write_vector, BenchReport, BenchRow, RunConfig, CSV_FIELDS,
};
use sketchls::rng::SeededRng;
use sketchls::{csqrp_lsqr, CsrMatrix, Error, Method, SketchConfig, SolveOptions, SyntheticProblem};

#[test]
fn identity_file() {
    let text = "%%MatrixMarket matrix coordinate real general\n% comment\n2 2 2\n1 1 1.0\n2 2 1.0\n";
    let a = parse_matrix_market(text.as_bytes()).unwrap();
    assert_eq!(a.row_ptr(), &[0, 1, 2]);
    assert_eq!(a, CsrMatrix::identity(2));
}

#[test]
fn symmetric_file_is_expanded() {
    let text = "%%MatrixMarket matrix coordinate real symmetric\n3 3 4\n1 1 2.0\n2 1 -1.0\n3 2 4.0\n3 3 5.0\n";
    let a = parse_matrix_market(text.as_bytes()).unwrap().to_dense();
    let want = [[2.0, -1.0, 0.0], [-1.0, 0.0, 4.0], [0.0, 4.0, 5.0]];
    for (i, row) in want.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            assert_eq!(a[(i, j)], *v);
        }
    }
}

#[test]
fn matrix_and_vector_files_round_trip_bitwise() {
    let mut rng = SeededRng::new(3);
    let trip: Vec<_> = (0..300)
        .map(|_| (rng.index(50), rng.index(20), rng.gaussian() * 10f64.powi(rng.index(30) as i32 - 15)))
        .collect();
    let a = CsrMatrix::from_triplets(50, 20, trip).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.mtx");
    write_matrix_market(&a, &path).unwrap();
    let back = read_matrix_market(&path).unwrap();
    assert_eq!(back.row_ptr(), a.row_ptr());
    assert_eq!(back.col_idx(), a.col_idx());
    assert!(back.values().iter().zip(a.values()).all(|(x, y)| x.to_bits() == y.to_bits()));

    let v = rng.gaussian_vec(37);
    let vpath = dir.path().join("b.mtx");
    write_vector(&v, &vpath).unwrap();
    let w = read_vector(&vpath).unwrap();
    assert!(v.iter().zip(&w).all(|(x, y)| x.to_bits() == y.to_bits()));
    assert_eq!(parse_vector("# rhs\n1, 2\n3\n".as_bytes()).unwrap(), vec![1.0, 2.0, 3.0]);
}

#[test]
fn preconditioned_spectrum_is_clustered() {
    let p = SyntheticProblem::with_condition(1000, 40, 1e12, 4).unwrap();
    let s = spectra(&p.a, &SketchConfig::with_seed(1)).unwrap();
    let ratio = |v: &[f64]| v[0] / v[v.len() - 1];
    // computed extreme singular values of A carry roundoff of order 1e-16
    assert!(ratio(&s.sigma_a) >= 0.99e12);
    assert!(ratio(s.sigma_ar.as_ref().unwrap()) <= 10.0);
    assert!(ratio(&s.sigma_ap) <= 10.0);
    assert_eq!(s.to_csv().lines().count(), 41);
}

#[test]
fn truncated_spectrum_has_effective_rank_entries() {
    let p = SyntheticProblem::rank_deficient(600, 30, 12, 1e4, 5).unwrap();
    let s = spectra(&p.a, &SketchConfig::with_seed(2)).unwrap();
    assert_eq!(s.sigma_ap.len(), 12);
    assert!(s.sigma_ar.is_none());
    assert_eq!(s.sigma_a.len(), 30);
    let last = s.to_csv().lines().last().unwrap().to_string();
    assert!(last.ends_with(",,"));
}

fn sample_report() -> BenchReport {
    let p = SyntheticProblem::with_condition(300, 10, 1e6, 6).unwrap();
    let (_, b) = p.consistent_rhs(1);
    let rep = csqrp_lsqr(&p.a, &b, &SketchConfig::with_seed(3), &SolveOptions::default()).unwrap();
    BenchReport {
        matrix: "synthetic".into(),
        rhs: "synthetic:1".into(),
        nnz: p.a.nnz(),
        config: RunConfig::default(),
        rows: vec![BenchRow::from_report(&rep, 300, 10, None)],
    }
}

#[test]
fn report_field_order_is_stable() {
    let report = sample_report();
    let csv = report.to_csv();
    assert_eq!(
        csv.lines().next().unwrap(),
        "method,m,n,pcpu,cpu,tcpu,it,rel_ls_error,rel_residual,kappa_b,effective_rank,stop_reason,pde_error"
    );
    assert_eq!(CSV_FIELDS.len(), 13);
    let json: serde_json::Value = serde_json::from_str(&report.to_json().unwrap()).unwrap();
    let keys: Vec<&str> = json["rows"][0].as_object().unwrap().keys().map(String::as_str).collect();
    let mut want: Vec<&str> = CSV_FIELDS.to_vec();
    want.push("residual_history");
    let mut sorted = want.clone();
    sorted.sort();
    let mut got = keys.clone();
    got.sort();
    assert_eq!(got, sorted);
    assert_eq!(json["rows"][0]["method"], "CSQRP-LSQR");
}

#[test]
fn report_extension_picks_format() {
    let report = sample_report();
    let dir = tempfile::tempdir().unwrap();
    let (csv, json) = (dir.path().join("r.csv"), dir.path().join("r.json"));
    report.write(&csv).unwrap();
    report.write(&json).unwrap();
    assert!(std::fs::read_to_string(&csv).unwrap().starts_with("method,"));
    let back: BenchReport = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(back, report);
}

#[test]
fn run_config_validation() {
    let cfg = RunConfig::from_toml_str("methods = [\"csqrp\", \"cssvdp\"]\nrcond = 1e-10\nseed = 4\n").unwrap();
    assert_eq!(cfg.methods, vec![Method::Csqrp, Method::Cssvdp]);
    assert_eq!(cfg.sketch_config().rcond, 1e-10);
    for bad in [
        "methods = []",
        "gamma = 1.0",
        "tau = 1.5",
        "max_iter = 0",
        "rcond = 1e-10",
        "methods = [\"direct\"]\nwarm_start = true",
        "unknown = 1",
        "methods = [\"nope\"]",
    ] {
        assert!(matches!(RunConfig::from_toml_str(bad), Err(Error::Config(_))), "{bad}");
    }
}
