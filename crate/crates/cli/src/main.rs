//! `sketchls`: solve sparse least-squares problems with sketch-preconditioned
//! LSQR, assemble random-feature PDE systems, and dump singular spectra.
//!
//! Exit status: 0 on success, 2 for bad input or configuration, 3 when a
//! solver fails (rank-deficient QR, SVD failure, empty truncation).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;
use serde_json::json;

use sketchls::io::{
    read_matrix_market, read_vector, spectra, write_matrix_market, write_vector, BenchReport,
    BenchRow, RunConfig,
};
use sketchls::rfm::{RfmConfig, RfmProblem};
use sketchls::synth::synthetic_rhs;
use sketchls::{solve, CsrMatrix, Error, Method, SketchConfig};

#[derive(Parser)]
#[command(name = "sketchls", version, about = "Sketch-preconditioned least squares")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve min ||Ax - b|| with one or more methods and write a report.
    Solve(SolveArgs),
    /// Assemble a random-feature collocation system and write it to disk.
    AssembleRfm(AssembleArgs),
    /// Singular values of A, A R^-1 and A P as CSV.
    Spectrum(SpectrumArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Matrix Market file. May be omitted when --pde assembles the system.
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Right-hand side: a vector file or `synthetic:<seed>` for b = A x*.
    #[arg(long)]
    rhs: Option<String>,
    /// Comma-separated: csqrp, cssvdp, csqr_p, cssvd_p, lsqr, direct.
    #[arg(long, value_delimiter = ',')]
    method: Option<Vec<Method>>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    rcond: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long, env = "SKETCHLS_SEED")]
    seed: Option<u64>,
    /// Start LSQR from Q^T (S b) instead of zero.
    #[arg(long)]
    warm_start: bool,
    /// Report kappa(B) (dense SVD of the preconditioned matrix).
    #[arg(long)]
    kappa: bool,
    /// Record the relative residual after every iteration.
    #[arg(long)]
    history: bool,
    /// Report path; `.csv` selects CSV, anything else JSON. Default: stdout (JSON).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the singular spectra of A, A R^-1 and A P to this CSV.
    #[arg(long)]
    spectrum: Option<PathBuf>,
    /// TOML run configuration; explicit flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// TOML problem configuration. Without --matrix the system is assembled
    /// from it; either way the PDE error of each solution is reported.
    #[arg(long)]
    pde: Option<PathBuf>,
}

#[derive(Args)]
struct AssembleArgs {
    #[arg(long)]
    pde: PathBuf,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    rcond: Option<f64>,
    #[arg(long, env = "SKETCHLS_SEED")]
    seed: Option<u64>,
    /// CSV path; default stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure with the exit status it maps to.
struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::RankDeficient { .. }
            | Error::SvdNoConvergence
            | Error::EmptyTruncation { .. }
            | Error::SingularTriangular { .. }
            | Error::ZeroMatrix => 3,
            _ => 2,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn config_error(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into() }
}

fn context(what: &str, path: &Path) -> impl FnOnce(Error) -> Failure {
    let prefix = format!("{what} {}", path.display());
    move |e| {
        let mut f = Failure::from(e);
        f.msg = format!("{prefix}: {}", f.msg);
        f
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => run_solve(args),
        Command::AssembleRfm(args) => run_assemble(args),
        Command::Spectrum(args) => run_spectrum(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn load_rfm(path: &Path) -> Result<(RfmConfig, RfmProblem), Failure> {
    let text = fs::read_to_string(path).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
    let cfg = RfmConfig::from_toml_str(&text).map_err(context("problem config", path))?;
    let problem = cfg.build().map_err(context("problem config", path))?;
    Ok((cfg, problem))
}

fn run_config(args: &SolveArgs) -> Result<RunConfig, Failure> {
    let mut cfg = match &args.config {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| config_error(format!("{}: {e}", p.display())))?;
            RunConfig::from_toml_str(&text).map_err(context("run config", p))?
        }
        None => RunConfig::default(),
    };
    if let Some(m) = &args.method {
        cfg.methods = m.clone();
    }
    if let Some(g) = args.gamma {
        cfg.gamma = g;
    }
    if args.rcond.is_some() {
        cfg.rcond = args.rcond;
    }
    if let Some(t) = args.tau {
        cfg.tau = t;
    }
    if args.max_iter.is_some() {
        cfg.max_iter = args.max_iter;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    cfg.warm_start |= args.warm_start;
    cfg.kappa |= args.kappa;
    cfg.history |= args.history;
    cfg.validate()?;
    Ok(cfg)
}

fn load_rhs(spec: &str, a: &CsrMatrix) -> Result<Vec<f64>, Failure> {
    let b = match spec.strip_prefix("synthetic:") {
        Some(seed) => {
            let seed: u64 = seed
                .parse()
                .map_err(|_| config_error(format!("bad synthetic seed in --rhs {spec}")))?;
            synthetic_rhs(a, seed).1
        }
        None => read_vector(spec).map_err(context("rhs", Path::new(spec)))?,
    };
    if b.len() != a.rows() {
        return Err(config_error(format!(
            "rhs has {} entries but the matrix has {} rows",
            b.len(),
            a.rows()
        )));
    }
    Ok(b)
}

fn run_solve(args: SolveArgs) -> Result<(), Failure> {
    let cfg = run_config(&args)?;
    let problem = args.pde.as_deref().map(load_rfm).transpose()?;

    let (a, b, matrix_name, rhs_name) = match (&args.matrix, &problem) {
        (Some(path), _) => {
            let a = read_matrix_market(path).map_err(context("matrix", path))?;
            let spec = args
                .rhs
                .as_deref()
                .ok_or_else(|| config_error("--rhs is required with --matrix"))?;
            let b = load_rhs(spec, &a)?;
            (a, b, path.display().to_string(), spec.to_string())
        }
        (None, Some((_, prob))) => {
            if args.rhs.is_some() {
                return Err(config_error("--rhs conflicts with an assembled --pde system"));
            }
            let sys = prob.assemble()?;
            let name = format!("assembled:{}", args.pde.as_ref().unwrap().display());
            (sys.a, sys.b, name.clone(), name)
        }
        (None, None) => return Err(config_error("either --matrix or --pde is required")),
    };
    info!("{}x{} matrix with {} nonzeros", a.rows(), a.cols(), a.nnz());

    let sketch = cfg.sketch_config();
    let opts = cfg.solve_options();
    let mut rows = Vec::with_capacity(cfg.methods.len());
    for &method in &cfg.methods {
        let rep = solve(method, &a, &b, &sketch, &opts).map_err(|e| {
            let mut f = Failure::from(e);
            f.msg = format!("{}: {}", method.label(), f.msg);
            f
        })?;
        info!("{}: {:?} iterations, rel. LS error {:e}", method.label(), rep.iterations, rep.relative_ls_error);
        let pde_error = match &problem {
            Some((_, prob)) if prob.features.len() == a.cols() => Some(prob.relative_l2_error(rep.x.as_slice())?),
            Some(_) => return Err(config_error("--pde feature count does not match the matrix columns")),
            None => None,
        };
        rows.push(BenchRow::from_report(&rep, a.rows(), a.cols(), pde_error));
    }

    let report = BenchReport {
        matrix: matrix_name,
        rhs: rhs_name,
        nnz: a.nnz(),
        config: cfg.clone(),
        rows,
    };
    match &args.out {
        Some(path) => report.write(path).map_err(context("report", path))?,
        None => println!("{}", report.to_json()?),
    }
    if let Some(path) = &args.spectrum {
        write_spectrum(&a, &sketch, Some(path))?;
    }
    Ok(())
}

fn write_spectrum(a: &CsrMatrix, cfg: &SketchConfig, out: Option<&Path>) -> Result<(), Failure> {
    let csv = spectra(a, cfg)?.to_csv();
    match out {
        Some(path) => fs::write(path, csv).map_err(|e| config_error(format!("{}: {e}", path.display())))?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn run_spectrum(args: SpectrumArgs) -> Result<(), Failure> {
    let a = read_matrix_market(&args.matrix).map_err(context("matrix", &args.matrix))?;
    let mut cfg = SketchConfig::default();
    if let Some(g) = args.gamma {
        cfg.gamma = g;
    }
    if let Some(r) = args.rcond {
        cfg.rcond = r;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if !(cfg.gamma > 1.0 && cfg.gamma.is_finite()) || !(cfg.rcond > 0.0 && cfg.rcond < 1.0) {
        return Err(config_error(format!("invalid gamma {} or rcond {}", cfg.gamma, cfg.rcond)));
    }
    write_spectrum(&a, &cfg, args.out.as_deref())
}

fn run_assemble(args: AssembleArgs) -> Result<(), Failure> {
    let (cfg, problem) = load_rfm(&args.pde)?;
    let sys = problem.assemble()?;
    fs::create_dir_all(&args.out_dir)
        .map_err(|e| config_error(format!("{}: {e}", args.out_dir.display())))?;
    let dir = &args.out_dir;
    write_matrix_market(&sys.a, dir.join("matrix.mtx"))?;
    write_vector(&sys.b, dir.join("rhs.mtx"))?;
    let manifest = json!({
        "config": cfg,
        "rows": sys.a.rows(),
        "cols": sys.a.cols(),
        "nnz": sys.a.nnz(),
        "interior_rows": sys.interior_rows,
        "boundary_rows": sys.boundary_rows,
        "interface_rows": sys.interface_rows,
        "weights": sys.weights,
    });
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| config_error(e.to_string()))?;
    fs::write(dir.join("manifest.json"), text + "\n")
        .map_err(|e| config_error(format!("{}: {e}", dir.display())))?;
    info!("wrote {}x{} system to {}", sys.a.rows(), sys.a.cols(), dir.display());
    Ok(())
}
