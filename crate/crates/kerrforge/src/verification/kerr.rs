//! Classical Kerr correspondence and the hyperbolic Schwarzschild analog.

use std::f64::consts::FRAC_PI_2;

use nalgebra::Matrix4;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use super::{PointResidual, VerificationReport, VerifyError};
use crate::geometry::{
    assemble_metric, classical_kerr_metric, sigma_of, ChartPoint, GeometryError, MetricConfig, SphericalPoint,
    RADIAL_MIN, SIN_MIN,
};
use crate::potential::{rotate_reduce, rotation_matrix, rotated_angles, spherical_to_holomorphic, HolomorphicPotential, PotentialField, SphereCoefficients};
use crate::tensor::{metric_scale, ricci_coordinate_fd, CurvatureReport, TensorError};

/// Values of 𝐤 tried against the classical metric.
pub const KERR_K_SCAN: [f64; 2] = [2.0, -2.0];

/// Invariants below this size are compared absolutely.
const INVARIANT_FLOOR: f64 = 1e-8;

/// (x, y) = tan(ξ/2)(cos ψ, sin ψ), r = ρ, on the upper hemisphere.
pub fn kerr_chart_map(sp: &SphericalPoint) -> Result<ChartPoint, GeometryError> {
    if !(sp.xi > 0.0 && sp.xi < FRAC_PI_2) {
        return Err(GeometryError::XiRange(sp.xi));
    }
    let t = (sp.xi / 2.0).tan();
    Ok(ChartPoint::new(t * sp.psi.cos(), t * sp.psi.sin(), sp.v, sp.rho))
}

/// φ = −a cos ξ, i.e. the generating function F ≡ −a on the sphere.
pub fn kerr_potential(a: f64) -> Result<PotentialField, VerifyError> {
    Ok(PotentialField::holomorphic(1, &[-a])?)
}

/// |σ(B = −1, −a cos ξ, ρ) − (−ρ²/(4a cos ξ) − a cos ξ/4)| relative to the latter.
pub fn sigma_match_residual(a: f64, sp: &SphericalPoint) -> f64 {
    let c = a * sp.xi.cos();
    let want = -sp.rho * sp.rho / (4.0 * c) - c / 4.0;
    (sigma_of(-1.0, -c, sp.rho) - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(INVARIANT_FLOOR)
}

fn kerr_curvature(m: f64, a: f64, sp: &SphericalPoint, h: f64) -> Result<CurvatureReport, VerifyError> {
    let f = |c: [f64; 4]| classical_kerr_metric(m, a, &SphericalPoint::from_coords(c)).map(|g| g.g);
    Ok(ricci_coordinate_fd(&f, sp.coords(), h)?)
}

fn family_curvature(cfg: &MetricConfig, pt: &ChartPoint, h: f64) -> Result<CurvatureReport, TensorError> {
    let f = |c: [f64; 4]| assemble_metric(cfg, &ChartPoint::from_coords(c)).map(|g| g.g);
    ricci_coordinate_fd(&f, pt.coords(), h)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KerrScanRow {
    pub k: f64,
    /// max relative Kretschmann difference over the samples
    pub kretschmann: f64,
    /// max relative difference of the cubic invariant
    pub cubic: f64,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KerrMatch {
    pub report: VerificationReport,
    pub scan: Vec<KerrScanRow>,
    /// Set when exactly one 𝐤 matches.
    pub winner: Option<f64>,
}

/// Classical Kerr at `samples` against the family with `potential` at `chart(sample)`.
fn kerr_scan(
    check: &str,
    m: f64,
    a: f64,
    potential: PotentialField,
    chart: impl Fn(&SphericalPoint) -> Result<ChartPoint, VerifyError> + Sync,
    samples: &[SphericalPoint],
    tol: f64,
    h: f64,
) -> Result<KerrMatch, VerifyError> {
    if samples.is_empty() {
        return Err(VerifyError::NoSamples);
    }
    let base = MetricConfig::new(1, -1.0, m, KERR_K_SCAN[0], potential)?;
    let classical: Vec<(CurvatureReport, ChartPoint)> = samples
        .par_iter()
        .map(|sp| Ok((kerr_curvature(m, a, sp, h)?, chart(sp)?)))
        .collect::<Result<_, VerifyError>>()?;
    let mut scan = Vec::new();
    let mut per_k = Vec::new();
    for k in KERR_K_SCAN {
        let cfg = base.with_k(k);
        let pairs: Vec<(f64, f64)> = classical
            .par_iter()
            .map(|(kr, pt)| {
                let fam = family_curvature(&cfg, pt, h)?;
                Ok((relative(kr.kretschmann, fam.kretschmann), relative(kr.cubic, fam.cubic)))
            })
            .collect::<Result<_, VerifyError>>()?;
        let rk = pairs.iter().map(|p| p.0).fold(0.0, f64::max);
        let rc = pairs.iter().map(|p| p.1).fold(0.0, f64::max);
        scan.push(KerrScanRow { k, kretschmann: rk, cubic: rc, matches: rk.max(rc) <= tol });
        per_k.push(
            classical
                .iter()
                .zip(pairs)
                .map(|((_, pt), (a, b))| PointResidual { point: pt.coords(), residual: a.max(b) })
                .collect::<Vec<_>>(),
        );
    }
    let matching: Vec<f64> = scan.iter().filter(|r| r.matches).map(|r| r.k).collect();
    let winner = (matching.len() == 1).then(|| matching[0]);
    let best = scan
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.kretschmann.max(a.1.cubic).total_cmp(&b.1.kretschmann.max(b.1.cubic)))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let report = VerificationReport::from_residuals(check, tol, per_k.swap_remove(best))
        .with_detail("m", m)
        .with_detail("a", a)
        .with_detail("scan", serde_json::to_value(&scan).expect("scan serializes"))
        .with_detail("matching_k", matching.clone())
        .with_detail("winner", winner.map(Value::from).unwrap_or(Value::Null));
    Ok(KerrMatch { report, scan, winner })
}

/// Kretschmann and cubic invariant of the classical metric against the family with
/// φ = −a cos ξ, B = −1, for each 𝐤 in [`KERR_K_SCAN`].
pub fn verify_kerr_match(
    m: f64,
    a: f64,
    samples: &[SphericalPoint],
    tol: f64,
    h: f64,
) -> Result<KerrMatch, VerifyError> {
    kerr_scan("kerr-match", m, a, kerr_potential(a)?, |sp| Ok(kerr_chart_map(sp)?), samples, tol, h)
}

/// The family with the degree-one potential φ = −(ã₀ cos ξ + sin ξ(ã₁ cos ψ + b̃₁ sin ψ)) against
/// classical Kerr with a = |(ã₀, ã₁, b̃₁)|. Samples are given in the rotated frame where φ = −a cos ξ′.
pub fn verify_kerr_match_rotated(
    m: f64,
    coeffs: [f64; 3],
    samples: &[SphericalPoint],
    tol: f64,
    h: f64,
) -> Result<KerrMatch, VerifyError> {
    let [a0, a1, b1] = coeffs;
    let (a, al1, al2) = rotate_reduce(a0, a1, b1)?;
    let rot = rotation_matrix(al1, al2);
    let holo = spherical_to_holomorphic(&SphereCoefficients::degree_one(-a0, -a1, -b1));
    let potential = PotentialField::Holomorphic(HolomorphicPotential::new(1, holo)?);
    let chart = |sp: &SphericalPoint| -> Result<ChartPoint, VerifyError> {
        if !(sp.xi > 0.0 && sp.xi < FRAC_PI_2) {
            return Err(GeometryError::XiRange(sp.xi).into());
        }
        let (xi, psi) = rotated_angles(&rot, sp.xi, sp.psi);
        if (xi / 2.0).cos() < SIN_MIN {
            return Err(GeometryError::Pole(xi).into());
        }
        let t = (xi / 2.0).tan();
        Ok(ChartPoint::new(t * psi.cos(), t * psi.sin(), sp.v, sp.rho))
    };
    let mut out = kerr_scan("kerr-match-rotated", m, a, potential, chart, samples, tol, h)?;
    out.report = out.report.with_detail("coefficients", coeffs.to_vec());
    Ok(out)
}

/// Classical Kerr (m, a) against the family built from another κ = 1 generating function.
/// Residual per point is the smallest relative Kretschmann difference over the 𝐤 scan; the
/// check passes when some point exceeds `10·tol`, i.e. the two are told apart. Samples where
/// the other potential violates the sign condition are skipped.
pub fn verify_kerr_distinct(
    m: f64,
    a: f64,
    generating: &[f64],
    samples: &[SphericalPoint],
    tol: f64,
    h: f64,
) -> Result<VerificationReport, VerifyError> {
    let base = MetricConfig::new(1, -1.0, m, KERR_K_SCAN[0], PotentialField::holomorphic(1, generating)?)?;
    let rows: Vec<Option<PointResidual>> = samples
        .par_iter()
        .map(|sp| {
            let pt = kerr_chart_map(sp)?;
            if let Err(GeometryError::SignCondition(_)) = assemble_metric(&base, &pt) {
                return Ok(None);
            }
            let kr = kerr_curvature(m, a, sp, h)?;
            let mut closest = f64::INFINITY;
            for k in KERR_K_SCAN {
                let fam = family_curvature(&base.with_k(k), &pt, h)?;
                closest = closest.min(relative(kr.kretschmann, fam.kretschmann));
            }
            Ok(Some(PointResidual { point: pt.coords(), residual: closest }))
        })
        .collect::<Result<_, VerifyError>>()?;
    let skipped = rows.iter().filter(|r| r.is_none()).count();
    let res: Vec<PointResidual> = rows.into_iter().flatten().collect();
    if res.is_empty() {
        return Err(VerifyError::NoSamples);
    }
    let mut rep = VerificationReport::from_residuals("kerr-distinct", 10.0 * tol, res);
    // distinctness is the opposite of a match
    rep.pass = rep.max_residual > 10.0 * tol;
    Ok(rep.with_detail("skipped", skipped).with_detail("generating", generating.to_vec()))
}

/// (r²/2)(dξ² + sinh²ξ dψ²) + dv∨dr + ((r + m)/(2r)) dv² in (ξ, ψ, v, r).
pub fn schwarzschild_analog_metric(m: f64, c: [f64; 4]) -> Result<Matrix4<f64>, GeometryError> {
    let [xi, _, _, r] = c;
    if r.abs() < RADIAL_MIN.sqrt() {
        return Err(GeometryError::SingularLocus(r));
    }
    let mut g = Matrix4::zeros();
    g[(0, 0)] = r * r / 2.0;
    g[(1, 1)] = r * r / 2.0 * xi.sinh().powi(2);
    g[(2, 3)] = 0.5;
    g[(3, 2)] = 0.5;
    g[(2, 2)] = (r + m) / (2.0 * r);
    Ok(g)
}

/// Ricci over scale (Riemann over scale when m = 0); samples are (ξ, ψ, v, r).
pub fn verify_schwarzschild_analog(
    m: f64,
    samples: &[[f64; 4]],
    tol: f64,
    h: f64,
) -> Result<VerificationReport, VerifyError> {
    if samples.is_empty() {
        return Err(VerifyError::NoSamples);
    }
    let metric = |c: [f64; 4]| schwarzschild_analog_metric(m, c);
    let rows: Vec<(PointResidual, f64)> = samples
        .par_iter()
        .map(|&c| {
            let scale = metric_scale(&metric, c, h)?.max(f64::MIN_POSITIVE);
            let rep = ricci_coordinate_fd(&metric, c, h)?;
            let num = if m == 0.0 { rep.riemann_norm } else { rep.ricci_norm };
            Ok((PointResidual { point: c, residual: num / scale }, rep.kretschmann))
        })
        .collect::<Result<_, VerifyError>>()?;
    let min_k = rows.iter().map(|r| r.1.abs()).fold(f64::INFINITY, f64::min);
    let res = rows.into_iter().map(|r| r.0).collect();
    Ok(VerificationReport::from_residuals("schwarzschild-analog", tol, res)
        .with_detail("m", m)
        .with_detail("min_abs_kretschmann", min_k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn chart_map_examples() {
        let p = kerr_chart_map(&SphericalPoint::new(PI / 3.0, 0.0, 2.0, 0.5)).unwrap();
        assert!((p.x - (PI / 6.0).tan()).abs() < 1e-15 && p.y == 0.0 && p.r == 2.0 && p.v == 0.5);
        assert!(kerr_chart_map(&SphericalPoint::new(1.7, 0.0, 2.0, 0.0)).is_err());
        assert!(kerr_chart_map(&SphericalPoint::new(0.0, 0.0, 2.0, 0.0)).is_err());
    }

    #[test]
    fn potential_is_minus_a_cos_xi() {
        let a = 1.3;
        let pot = kerr_potential(a).unwrap();
        for &(xi, psi) in &[(0.3, 0.1), (1.1, -2.0), (1.5, 3.0)] {
            let p = kerr_chart_map(&SphericalPoint::new(xi, psi, 1.0, 0.0)).unwrap();
            let phi = pot.jet(p.x, p.y, 0).unwrap().value();
            assert!((phi + a * f64::cos(xi)).abs() < 1e-12);
            assert!(sigma_match_residual(a, &SphericalPoint::new(xi, psi, 2.5, 0.0)) < 1e-12);
        }
    }

    #[test]
    fn analog_metric_components() {
        let g = schwarzschild_analog_metric(1.0, [0.5, 0.0, 0.0, 2.0]).unwrap();
        assert_eq!(g[(0, 0)], 2.0);
        assert_eq!(g[(2, 2)], 0.75);
        assert_eq!(g[(3, 3)], 0.0);
        assert!(schwarzschild_analog_metric(1.0, [0.5, 0.0, 0.0, 0.0]).is_err());
    }
}
