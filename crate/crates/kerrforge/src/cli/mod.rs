//! Subcommand drivers behind the `kerrforge` binary.
//!
//! Exit codes: 0 pass, 1 check failed, 2 configuration or precondition error,
//! 3 solver failure. `KERRFORGE_THREADS` caps the worker pool.

mod config;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use thiserror::Error;

pub use config::{KSpec, PotentialSpec, RunConfig, SampleSpec};

use crate::geometry::{assemble_metric, ChartPoint, GeometryError, MetricConfig, SphericalPoint};
use crate::potential::{
    check_sign_condition, fd_elliptic_solve, io, HolomorphicPotential, PotentialError, PotentialField, SeriesPotential,
    SolveGrid,
};
use crate::tensor::{ricci_coordinate_fd, TensorError};
use crate::verification::sampling::{chart_samples, spherical_samples, Halton};
pub use crate::verification::format_float;
use crate::verification::{
    verify_background_flat, verify_kerr_match, verify_kerr_match_rotated, verify_nogo, verify_pde_residual,
    verify_ricci_flat, verify_schwarzschild_analog, VerificationReport, VerifyError,
};

pub const THREADS_ENV: &str = "KERRFORGE_THREADS";
pub const SUITES: [&str; 6] = ["ricci", "background", "kerr-match", "schwarzschild-analog", "nogo", "pde"];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("io error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Solver(_) => 3,
            _ => 2,
        }
    }
}

impl From<PotentialError> for CliError {
    fn from(e: PotentialError) -> Self {
        match e {
            PotentialError::Singular { .. } => Self::Solver(e.to_string()),
            PotentialError::Io(m) => Self::Io(m),
            PotentialError::SignMixedBoundary | PotentialError::ZeroBoundary | PotentialError::WrongSignBoundary(_) => {
                Self::Precondition(e.to_string())
            }
            _ => Self::Config(e.to_string()),
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::Potential(p) => p.into(),
            other => Self::Precondition(other.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Geometry(g) => g.into(),
            VerifyError::Potential(p) => p.into(),
            VerifyError::Tensor(TensorError::Geometry(g)) => g.into(),
            VerifyError::Tensor(t) => Self::Solver(t.to_string()),
            other => Self::Config(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "kerrforge", version, about = "Kerr-type metrics from Kähler potentials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// key = value run configuration
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (grid JSON, CSV table or residual CSV)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long = "fd-step", global = true)]
    pub fd_step: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the Dirichlet problem from a boundary file and write the lattice solution
    Solve,
    /// Metric components at sample points as CSV
    Metric,
    /// Run a verification suite: ricci, background, kerr-match, schwarzschild-analog, nogo, pde
    Verify { suite: String },
    /// Kretschmann scalar and max |Ricci| at sample points as CSV
    Invariants,
}

/// Parses arguments, runs the command on a pool sized by `KERRFORGE_THREADS` and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut (dyn Write + Send), stderr: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => pool = pool.num_threads(n),
            _ => {
                let _ = writeln!(stderr, "{THREADS_ENV} must be a positive integer, got `{v}`");
                return 2;
            }
        }
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "thread pool: {e}");
            return 3;
        }
    };
    match pool.install(|| dispatch(&cli, stdout, stderr)) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    if let Command::Verify { suite } = &cli.command {
        if !SUITES.contains(&suite.as_str()) {
            return Err(CliError::Config(format!("unknown suite `{suite}`; expected one of {}", SUITES.join(", "))));
        }
        if suite == "nogo" && cli.config.is_none() {
            return verify_nogo_cmd(16, cli.out.as_deref(), stdout);
        }
    }
    let path = cli.config.as_deref().ok_or_else(|| CliError::Config("--config <path> is required".into()))?;
    let mut cfg = RunConfig::from_path(path)?;
    if let Some(t) = cli.tol {
        cfg.tol = Some(t);
    }
    if let Some(h) = cli.fd_step {
        cfg.fd_step = h;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if cli.out.is_some() {
        cfg.out = cli.out.clone();
    }
    cfg.check_positive()?;
    match &cli.command {
        Command::Solve => cmd_solve(&cfg, stdout),
        Command::Metric => cmd_metric(&cfg, stdout, stderr),
        Command::Invariants => cmd_invariants(&cfg, stdout, stderr),
        Command::Verify { suite } => cmd_verify(&cfg, suite, stdout),
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Writes to `path` when given, else to `stdout`.
fn emit(path: Option<&Path>, stdout: &mut dyn Write, body: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, body).map_err(|e| io_err(p, e)),
        None => stdout.write_all(body).map_err(|e| CliError::Io(e.to_string())),
    }
}

pub fn load_potential(cfg: &RunConfig) -> Result<PotentialField, CliError> {
    let spec = cfg.potential.as_ref().ok_or_else(|| CliError::Config("no potential specification".into()))?;
    let field = match spec {
        PotentialSpec::Holomorphic(c) => PotentialField::Holomorphic(HolomorphicPotential::new(cfg.kappa, c.clone())?),
        PotentialSpec::Series { file, radius } => {
            PotentialField::Series(SeriesPotential::new(cfg.kappa, *radius, io::read_coefficients(file)?)?)
        }
        PotentialSpec::Boundary { .. } => PotentialField::Grid(solve_boundary(cfg)?.to_potential()),
        PotentialSpec::Grid { file } => {
            let text = std::fs::read_to_string(file).map_err(|e| io_err(file, e))?;
            let grid: SolveGrid = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", file.display())))?;
            if grid.kappa != cfg.kappa {
                return Err(CliError::Config(format!("grid file has kappa = {}, config has {}", grid.kappa, cfg.kappa)));
            }
            PotentialField::Grid(grid.to_potential())
        }
    };
    Ok(field)
}

fn solve_boundary(cfg: &RunConfig) -> Result<SolveGrid, CliError> {
    match &cfg.potential {
        Some(PotentialSpec::Boundary { file, radius, n_r, n_theta }) => {
            let b = io::read_boundary(file)?;
            Ok(fd_elliptic_solve(cfg.kappa, *radius, &b, *n_r, *n_theta)?)
        }
        _ => Err(CliError::Config("`solve` needs boundary_file, boundary_radius, n_r and n_theta".into())),
    }
}

fn metric_config(cfg: &RunConfig, field: PotentialField) -> Result<MetricConfig, CliError> {
    let k = match cfg.k {
        KSpec::Value(k) => k,
        KSpec::Scan if cfg.m == 0.0 => 2.0,
        KSpec::Scan => return Err(CliError::Config("m ≠ 0 needs a numeric k; `scan` is for kerr-match".into())),
    };
    Ok(MetricConfig::new(cfg.kappa, cfg.b, cfg.m, k, field)?)
}

fn read_points(path: &Path) -> Result<Vec<[f64; 4]>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let vals: Result<Vec<f64>, _> =
            line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).map(str::parse).collect();
        match vals {
            Ok(v) if v.len() == 4 => out.push([v[0], v[1], v[2], v[3]]),
            Err(_) if out.is_empty() && i == 0 => continue, // header
            _ => return Err(CliError::Config(format!("{} line {}: expected four numbers", path.display(), i + 1))),
        }
    }
    if out.is_empty() {
        return Err(CliError::Config(format!("{}: no points", path.display())));
    }
    Ok(out)
}

/// Explicit points, or quasi-random points on which `mc` assembles.
fn chart_points(cfg: &RunConfig, mc: &MetricConfig) -> Result<Vec<ChartPoint>, CliError> {
    match &cfg.samples {
        SampleSpec::Points(p) => Ok(read_points(p)?.into_iter().map(ChartPoint::from_coords).collect()),
        SampleSpec::Count(n) => chart_samples(*n, cfg.seed, cfg.chart, |p| assemble_metric(mc, p).is_ok())
            .ok_or_else(|| CliError::Precondition("could not draw admissible sample points".into())),
    }
}

fn tol_or(cfg: &RunConfig, default: f64) -> f64 {
    cfg.tol.unwrap_or(default)
}

/// Default bound on the lattice residual printed by `solve`.
pub const SOLVE_TOL: f64 = 5e-2;

pub fn cmd_solve(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let grid = solve_boundary(cfg)?;
    let res = grid.max_pde_residual();
    if !res.is_finite() {
        return Err(CliError::Solver(format!("non-finite residual {res}")));
    }
    if let Some(p) = &cfg.out {
        let body = serde_json::to_vec(&grid).map_err(|e| CliError::Io(e.to_string()))?;
        std::fs::write(p, body).map_err(|e| io_err(p, e))?;
    }
    writeln!(stdout, "max_pde_residual={}", format_float(res)).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(if res <= tol_or(cfg, SOLVE_TOL) { 0 } else { 1 })
}

fn csv_table(header: &[&str], rows: &[Vec<f64>]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let e = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(e)?;
    for r in rows {
        w.write_record(r.iter().map(|v| format_float(*v))).map_err(e)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

/// Evaluates `f` at every point in parallel, keeping input order; failures are reported
/// on `stderr` and skipped.
fn rows_in_order<F>(points: &[ChartPoint], stderr: &mut dyn Write, f: F) -> Result<Vec<Vec<f64>>, CliError>
where
    F: Fn(&ChartPoint) -> Result<Vec<f64>, String> + Sync + Send,
{
    let results: Vec<Result<Vec<f64>, String>> = points.par_iter().map(&f).collect();
    let mut rows = Vec::new();
    for (p, r) in points.iter().zip(results) {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => {
                let _ = writeln!(stderr, "skipping ({}, {}, {}, {}): {e}", p.x, p.y, p.v, p.r);
            }
        }
    }
    if rows.is_empty() {
        return Err(CliError::Precondition("no admissible points".into()));
    }
    Ok(rows)
}

pub const METRIC_COLUMNS: [&str; 14] =
    ["x", "y", "v", "r", "g00", "g01", "g02", "g03", "g11", "g12", "g13", "g22", "g23", "g33"];

pub fn cmd_metric(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let mc = metric_config(cfg, load_potential(cfg)?)?;
    let pts = chart_points(cfg, &mc)?;
    let rows = rows_in_order(&pts, stderr, |p| {
        let g = assemble_metric(&mc, p).map_err(|e| e.to_string())?.g;
        let mut row = p.coords().to_vec();
        for i in 0..4 {
            for j in i..4 {
                row.push(g[(i, j)]);
            }
        }
        Ok(row)
    })?;
    emit(cfg.out.as_deref(), stdout, &csv_table(&METRIC_COLUMNS, &rows)?)?;
    Ok(0)
}

pub fn cmd_invariants(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let mc = metric_config(cfg, load_potential(cfg)?)?;
    let pts = chart_points(cfg, &mc)?;
    let h = cfg.fd_step;
    let rows = rows_in_order(&pts, stderr, |p| {
        let metric = |c: [f64; 4]| assemble_metric(&mc, &ChartPoint::from_coords(c)).map(|m| m.g);
        let rep = ricci_coordinate_fd(&metric, p.coords(), h).map_err(|e| e.to_string())?;
        Ok(vec![p.x, p.y, p.v, p.r, rep.kretschmann, rep.ricci_norm])
    })?;
    emit(cfg.out.as_deref(), stdout, &csv_table(&["x", "y", "v", "r", "kretschmann", "ricci_norm"], &rows)?)?;
    Ok(0)
}

fn finish(rep: &VerificationReport, out: Option<&Path>, stdout: &mut dyn Write) -> Result<i32, CliError> {
    writeln!(stdout, "{}", rep.to_json_line()).map_err(|e| CliError::Io(e.to_string()))?;
    if let Some(p) = out {
        let mut buf = Vec::new();
        rep.write_csv(&mut buf, true).map_err(|e| CliError::Io(e.to_string()))?;
        std::fs::write(p, buf).map_err(|e| io_err(p, e))?;
    }
    Ok(if rep.pass { 0 } else { 1 })
}

fn verify_nogo_cmd(n_max: i64, out: Option<&Path>, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let rep = verify_nogo(n_max)?;
    for r in &rep.residuals {
        writeln!(stdout, "n={} D={}", r.point[0], r.point[1]).map_err(|e| CliError::Io(e.to_string()))?;
    }
    finish(&rep, out, stdout)
}

fn spherical_points(cfg: &RunConfig) -> Result<Vec<SphericalPoint>, CliError> {
    match &cfg.samples {
        SampleSpec::Points(p) => Ok(read_points(p)?.into_iter().map(SphericalPoint::from_coords).collect()),
        SampleSpec::Count(n) => Ok(spherical_samples(*n, cfg.seed, cfg.sphere)),
    }
}

pub fn cmd_verify(cfg: &RunConfig, suite: &str, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let out = cfg.out.as_deref();
    let h = cfg.fd_step;
    let rep = match suite {
        "nogo" => return verify_nogo_cmd(cfg.n_max, out, stdout),
        "ricci" => {
            let mc = metric_config(cfg, load_potential(cfg)?)?;
            let pts = chart_points(cfg, &mc)?;
            verify_ricci_flat(&mc, &pts, tol_or(cfg, 1e-6), h)?
        }
        "background" => {
            if cfg.m != 0.0 {
                return Err(CliError::Config(format!("the background suite needs m = 0, got {}", cfg.m)));
            }
            let mc = metric_config(cfg, load_potential(cfg)?)?;
            let pts = chart_points(cfg, &mc)?;
            verify_background_flat(&mc, &pts, tol_or(cfg, 1e-6), h)?
        }
        "kerr-match" => {
            if cfg.kappa != 1 || cfg.b != -1.0 {
                return Err(CliError::Config("kerr-match needs kappa = 1 and B = -1".into()));
            }
            let pts = spherical_points(cfg)?;
            let tol = tol_or(cfg, 1e-4);
            let km = match cfg.rotation {
                Some(c) => verify_kerr_match_rotated(cfg.m, c, &pts, tol, h)?,
                None => {
                    let a = cfg.a.ok_or_else(|| CliError::Config("kerr-match needs `a` or `rotation`".into()))?;
                    verify_kerr_match(cfg.m, a, &pts, tol, h)?
                }
            };
            let mut rep = km.report;
            if let KSpec::Value(k) = cfg.k {
                rep.pass = km.scan.iter().any(|r| r.k == k && r.matches);
            }
            rep
        }
        "schwarzschild-analog" => {
            let pts: Vec<[f64; 4]> = match &cfg.samples {
                SampleSpec::Points(p) => read_points(p)?,
                SampleSpec::Count(n) => {
                    let mut hs = Halton::new(4, cfg.seed);
                    let (xi, r) = (cfg.analog_xi, cfg.analog_r);
                    (0..*n)
                        .map(|_| {
                            let u = hs.next_point();
                            [
                                xi.0 + (xi.1 - xi.0) * u[0],
                                std::f64::consts::TAU * u[1] - std::f64::consts::PI,
                                cfg.chart.v.0 + (cfg.chart.v.1 - cfg.chart.v.0) * u[2],
                                r.0 + (r.1 - r.0) * u[3],
                            ]
                        })
                        .collect()
                }
            };
            verify_schwarzschild_analog(cfg.m, &pts, tol_or(cfg, 1e-6), h)?
        }
        "pde" => {
            let field = load_potential(cfg)?;
            let pts: Vec<(f64, f64)> = match &cfg.samples {
                SampleSpec::Points(p) => read_points(p)?.into_iter().map(|c| (c[0], c[1])).collect(),
                SampleSpec::Count(n) => chart_samples(*n, cfg.seed, cfg.chart, |p| field.jet(p.x, p.y, 2).is_ok())
                    .ok_or_else(|| CliError::Precondition("could not draw sample points".into()))?
                    .into_iter()
                    .map(|p| (p.x, p.y))
                    .collect(),
            };
            let default_tol = if matches!(field, PotentialField::Grid(_)) { 1e-2 } else { 1e-9 };
            let mut rep = verify_pde_residual(&field, &pts, tol_or(cfg, default_tol))?;
            let sign = check_sign_condition(&field, cfg.chart.radius, 24, 48);
            rep.pass &= sign.ok;
            rep.with_detail("sign_condition", sign.ok).with_detail("max_kappa_phi", sign.worst_value)
        }
        other => return Err(CliError::Config(format!("unknown suite `{other}`"))),
    };
    finish(&rep, out, stdout)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for v in [0.0, 1.0, -0.5, 1e-20, 123456.789, 3.0e17, f64::MIN_POSITIVE, 0.1 + 0.2] {
            let s = format_float(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
        assert_eq!(format_float(0.25), "0.25");
        assert_eq!(format_float(1e-20), "1e-20");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::from(PotentialError::SignMixedBoundary).exit_code(), 2);
        assert_eq!(CliError::from(PotentialError::Singular { mode: 0, row: 0 }).exit_code(), 3);
        assert_eq!(CliError::from(GeometryError::NeedsBMinusOne(1.0)).exit_code(), 2);
    }

    #[test]
    fn unknown_suite_is_a_config_error() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["kerrforge", "verify", "bogus"], &mut o, &mut e), 2);
        assert_eq!(run(["kerrforge", "verify", "nogo"], &mut o, &mut e), 0);
        assert!(String::from_utf8(o).unwrap().starts_with("n=4 D=0\n"));
    }
}
