//! Machine checks: Ricci flatness, background flatness, the no-go discriminant,
//! the classical Kerr match and the potential-equation oracles.
//!
//! Every check produces a [`VerificationReport`]; a report passes exactly when its
//! largest residual is within tolerance. Per-point work runs on the rayon pool and is
//! reduced in input order.

mod kerr;
mod pde;
pub mod sampling;

use std::io::Write;

use nalgebra::Matrix4;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::geometry::{
    adapted_frame, assemble_metric, background_time_vector, beta_ode_residual, beta_tilde_o_partials,
    general_beta_partials, sigma_ode_residual, sigma_partials, ChartPoint, GeometryError, MetricConfig,
};
use crate::potential::PotentialError;
use crate::tensor::{
    common_expression, metric_scale, ricci_coordinate_fd, ricci_pp_expected, riemann_frame, FramePoint, TensorError,
};

pub use kerr::{
    kerr_chart_map, kerr_potential, schwarzschild_analog_metric, sigma_match_residual, verify_kerr_distinct,
    verify_kerr_match, verify_kerr_match_rotated, verify_schwarzschild_analog, KerrMatch, KerrScanRow, KERR_K_SCAN,
};
pub use pde::{special_solution_residual, verify_pde_convergence, verify_pde_residual, ConvergenceStudy};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error("this check needs m = 0, got m = {0}")]
    NeedsBackground(f64),
    #[error("dimension must be at least 4, got {0}")]
    Dimension(i64),
    #[error("no admissible sample points")]
    NoSamples,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PointResidual {
    pub point: [f64; 4],
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Largest residuals first, at most [`WORST_KEPT`].
    pub worst: Vec<PointResidual>,
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub detail: Map<String, Value>,
    /// Every residual, in input order.
    #[serde(skip)]
    pub residuals: Vec<PointResidual>,
}

pub const WORST_KEPT: usize = 5;

impl VerificationReport {
    pub fn from_residuals(check: &str, tolerance: f64, residuals: Vec<PointResidual>) -> Self {
        // NaN counts as an infinitely bad residual
        let key = |r: &PointResidual| if r.residual.is_nan() { f64::INFINITY } else { r.residual };
        let max_residual = residuals.iter().map(key).fold(0.0, f64::max);
        let mut worst = residuals.clone();
        worst.sort_by(|a, b| key(b).total_cmp(&key(a)));
        worst.truncate(WORST_KEPT);
        Self {
            check: check.to_string(),
            samples: residuals.len(),
            max_residual,
            tolerance,
            pass: !residuals.is_empty() && max_residual <= tolerance,
            worst,
            detail: Map::new(),
            residuals,
        }
    }

    pub fn with_detail(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.detail.insert(key.to_string(), value.into());
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// `check,x,y,v,r,residual` rows, one per sample.
    pub fn write_csv<W: Write>(&self, w: W, header: bool) -> csv::Result<()> {
        let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        if header {
            out.write_record(["check", "x", "y", "v", "r", "residual"])?;
        }
        for r in &self.residuals {
            let mut row = vec![self.check.clone()];
            row.extend(r.point.iter().chain(std::iter::once(&r.residual)).map(|v| format_float(*v)));
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Shortest round-trip decimal; exponent form outside [1e-5, 1e16).
pub fn format_float(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn collect_points<T: Sync, F>(points: &[T], f: F) -> Result<Vec<PointResidual>, VerifyError>
where
    F: Fn(&T) -> Result<PointResidual, VerifyError> + Sync + Send,
{
    points.par_iter().map(f).collect()
}

/// max over entries of |Ric| on the FD path and on the closed-form frame path, each over the metric scale.
pub fn ricci_residual(cfg: &MetricConfig, pt: &ChartPoint, h: f64) -> Result<f64, VerifyError> {
    let metric = |c: [f64; 4]| assemble_metric(cfg, &ChartPoint::from_coords(c)).map(|m| m.g);
    let scale = metric_scale(&metric, pt.coords(), h)?.max(f64::MIN_POSITIVE);
    let coord = ricci_coordinate_fd(&metric, pt.coords(), h)?;
    let frame = riemann_frame(cfg, pt, h)?;
    Ok(coord.ricci_norm.max(frame.ricci_norm) / scale)
}

pub fn verify_ricci_flat(
    cfg: &MetricConfig,
    samples: &[ChartPoint],
    tol: f64,
    h: f64,
) -> Result<VerificationReport, VerifyError> {
    cfg.validate()?;
    if samples.is_empty() {
        return Err(VerifyError::NoSamples);
    }
    let res = collect_points(samples, |p| Ok(PointResidual { point: p.coords(), residual: ricci_residual(cfg, p, h)? }))?;
    Ok(VerificationReport::from_residuals("ricci", tol, res)
        .with_detail("kappa", cfg.kappa)
        .with_detail("B", cfg.b)
        .with_detail("m", cfg.m)
        .with_detail("k", cfg.k))
}

/// Riemann on both paths over scale, together with |η(∂_T, Ê_i)| and |η(∂_T, ∂_T) + sign B|.
pub fn background_residual(cfg: &MetricConfig, pt: &ChartPoint, h: f64) -> Result<f64, VerifyError> {
    let metric = |c: [f64; 4]| assemble_metric(cfg, &ChartPoint::from_coords(c)).map(|m| m.g);
    let g = metric(pt.coords())?;
    let scale = metric_scale(&metric, pt.coords(), h)?.max(f64::MIN_POSITIVE);
    let coord = ricci_coordinate_fd(&metric, pt.coords(), h)?;
    let frame = riemann_frame(cfg, pt, h)?;
    let curv = coord.riemann_norm.max(frame.riemann_norm) / scale;
    let j = cfg.potential.jet(pt.x, pt.y, 1).map_err(GeometryError::from)?;
    let f = adapted_frame(cfg.b, j.partial(1, 0), j.partial(0, 1));
    let t = background_time_vector(cfg.b);
    let gt = g * t;
    let mixed = (0..2).map(|i| f.row(i).transpose().dot(&gt).abs()).fold(0.0, f64::max);
    let norm = (t.dot(&gt) + cfg.b.signum()).abs();
    Ok(curv.max(mixed).max(norm))
}

pub fn verify_background_flat(
    cfg: &MetricConfig,
    samples: &[ChartPoint],
    tol: f64,
    h: f64,
) -> Result<VerificationReport, VerifyError> {
    cfg.validate()?;
    if cfg.m != 0.0 {
        return Err(VerifyError::NeedsBackground(cfg.m));
    }
    if samples.is_empty() {
        return Err(VerifyError::NoSamples);
    }
    let res =
        collect_points(samples, |p| Ok(PointResidual { point: p.coords(), residual: background_residual(cfg, p, h)? }))?;
    Ok(VerificationReport::from_residuals("background", tol, res)
        .with_detail("kappa", cfg.kappa)
        .with_detail("B", cfg.b))
}

/// D(n) = 4(n−3)² − (n−6)².
pub fn nogo_discriminant(n: i64) -> Result<i64, VerifyError> {
    if n < 4 {
        return Err(VerifyError::Dimension(n));
    }
    Ok(4 * (n - 3) * (n - 3) - (n - 6) * (n - 6))
}

/// Residual per n is 1 when D(n) = 0 disagrees with n = 4, else 0.
pub fn verify_nogo(n_max: i64) -> Result<VerificationReport, VerifyError> {
    let mut res = Vec::new();
    let mut table = Vec::new();
    for n in 4..=n_max {
        let d = nogo_discriminant(n)?;
        table.push(Value::from(vec![n, d]));
        let bad = (d == 0) != (n == 4);
        res.push(PointResidual { point: [n as f64, d as f64, 0.0, 0.0], residual: f64::from(u8::from(bad)) });
    }
    Ok(VerificationReport::from_residuals("nogo", 0.0, res).with_detail("table", table))
}

/// |−2σσ_rr + σ_r² + ¼| over the sum of the magnitudes of its terms.
pub fn sigma_ode_relative(b: f64, phi: f64, r: f64) -> f64 {
    let s = sigma_partials(b, phi, r);
    let size = (2.0 * s.s * s.rr).abs() + s.r * s.r + 0.25;
    sigma_ode_residual(b, phi, r).abs() / size
}

/// Relative β̃-ODE residual for a profile given by value and two r-derivatives.
pub fn beta_ode_relative(b: f64, phi: f64, r: f64, beta: [f64; 3]) -> f64 {
    let s = sigma_partials(b, phi, r);
    let size = (s.s * beta[2]).abs() + (beta[1] * s.r).abs() + (beta[0] / (4.0 * s.s)).abs();
    if size == 0.0 {
        return 0.0;
    }
    beta_ode_residual(b, phi, r, beta).abs() / size
}

fn ode_samples(n: usize, seed: u64) -> Vec<[f64; 4]> {
    let mut h = sampling::Halton::new(4, seed);
    (0..n)
        .map(|_| {
            let u = h.next_point();
            let b_mag = 0.2 + 2.8 * u[0];
            let b = if u[3] < 0.5 { -b_mag } else { b_mag };
            let phi_mag = 0.05 + 1.95 * u[1];
            let phi = if (u[3] * 4.0).fract() < 0.5 { -phi_mag } else { phi_mag };
            [b, phi, -3.0 + 6.0 * u[2], u[3]]
        })
        .collect()
}

/// Random (B, φ, r) with B, φ ≠ 0; sample columns are (B, φ, 0, r).
pub fn verify_sigma_ode(n: usize, seed: u64, tol: f64) -> VerificationReport {
    let res = ode_samples(n, seed)
        .into_iter()
        .map(|[b, phi, r, _]| PointResidual { point: [b, phi, 0.0, r], residual: sigma_ode_relative(b, phi, r) })
        .collect();
    VerificationReport::from_residuals("sigma-ode", tol, res)
}

/// β̃_o (at B = −1) and the two-parameter general solution (any B) against the β̃-ODE.
pub fn verify_beta_ode(n: usize, seed: u64, tol: f64) -> VerificationReport {
    let res = ode_samples(n, seed)
        .into_iter()
        .map(|[b, phi, r, u]| {
            let k = 4.0 * u - 2.0;
            let bo = beta_tilde_o_partials(k, phi, r);
            let e1 = beta_ode_relative(-1.0, phi, r, [bo[0], bo[1], bo[2]]);
            let gen = general_beta_partials(1.0 - 2.0 * u, k, b, phi, r);
            let e2 = beta_ode_relative(b, phi, r, gen);
            PointResidual { point: [b, phi, 0.0, r], residual: e1.max(e2) }
        })
        .collect();
    VerificationReport::from_residuals("beta-ode", tol, res)
}

/// Closed-form frame path against the FD path at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PathComparison {
    /// max |Ric_frame − F·Ric_coord·Fᵀ| over max |Ric_frame|
    pub ricci_relative: f64,
    pub ricci_frame_max: f64,
    /// |Ric_12| and |Ric_11 − Ric_22| over max |Ric_frame|
    pub ric12: f64,
    pub ric11_minus_ric22: f64,
    /// |Ric_11 − CE/σ²| over max |Ric_frame|, meaningful only for β̃ = B
    pub common_expression: f64,
    /// |Ric_pp − expected| over max(1, |expected|)
    pub ricci_pp: f64,
}

pub fn compare_paths(cfg: &MetricConfig, pt: &ChartPoint, h: f64) -> Result<PathComparison, VerifyError> {
    let metric = |c: [f64; 4]| assemble_metric(cfg, &ChartPoint::from_coords(c)).map(|m| m.g);
    let coord = ricci_coordinate_fd(&metric, pt.coords(), h)?;
    let frame = riemann_frame(cfg, pt, h)?;
    let j = cfg.potential.jet(pt.x, pt.y, 1).map_err(GeometryError::from)?;
    let f: Matrix4<f64> = adapted_frame(cfg.b, j.partial(1, 0), j.partial(0, 1));
    let moved = f * coord.ricci * f.transpose();
    let rf = frame.ricci;
    let size = rf.amax().max(f64::MIN_POSITIVE);
    let d = FramePoint::new(cfg, pt.x, pt.y, pt.r)?;
    let ce = common_expression(cfg, pt)? / (d.sigma * d.sigma);
    let pp = ricci_pp_expected(&d);
    Ok(PathComparison {
        ricci_relative: (rf - moved).amax() / size,
        ricci_frame_max: rf.amax(),
        ric12: rf[(0, 1)].abs() / size,
        ric11_minus_ric22: (rf[(0, 0)] - rf[(1, 1)]).abs() / size,
        common_expression: (rf[(0, 0)] - ce).abs() / size,
        ricci_pp: (rf[(2, 2)] - pp).abs() / pp.abs().max(1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::PotentialField;

    #[test]
    fn nogo_values() {
        assert_eq!(nogo_discriminant(4).unwrap(), 0);
        assert_eq!(nogo_discriminant(6).unwrap(), 36);
        assert_eq!(nogo_discriminant(8).unwrap(), 96);
        assert!(nogo_discriminant(3).is_err());
        assert!(verify_nogo(64).unwrap().pass);
    }

    #[test]
    fn report_pass_rule() {
        let p = |r| PointResidual { point: [0.0; 4], residual: r };
        let rep = VerificationReport::from_residuals("t", 1e-3, vec![p(1e-4), p(1e-3)]);
        assert!(rep.pass);
        let rep = VerificationReport::from_residuals("t", 1e-3, vec![p(1e-4), p(f64::NAN)]);
        assert!(!rep.pass);
        assert!(rep.worst[0].residual.is_nan());
        assert!(!VerificationReport::from_residuals("t", 1.0, vec![]).pass);
    }

    #[test]
    fn csv_rows_follow_input_order() {
        let rep = VerificationReport::from_residuals(
            "x",
            1.0,
            vec![PointResidual { point: [1.0, 2.0, 3.0, 4.0], residual: 0.5 }, PointResidual { point: [0.1; 4], residual: 0.25 }],
        );
        let mut buf = Vec::new();
        rep.write_csv(&mut buf, true).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "check,x,y,v,r,residual\nx,1,2,3,4,0.5\nx,0.1,0.1,0.1,0.1,0.25\n");
        assert!(rep.to_json_line().starts_with("{\"check\":\"x\""));
    }

    #[test]
    fn ode_suites_pass() {
        assert!(verify_sigma_ode(200, 3, 1e-12).pass);
        assert!(verify_beta_ode(200, 3, 1e-12).pass);
    }

    #[test]
    fn ricci_flat_point() {
        let cfg = MetricConfig::new(1, -1.0, 0.3, -2.0, PotentialField::holomorphic(1, &[-1.0]).unwrap()).unwrap();
        let r = ricci_residual(&cfg, &ChartPoint::new(0.2, 0.1, 0.0, 1.5), 1e-3).unwrap();
        assert!(r < 1e-6, "{r}");
    }
}
