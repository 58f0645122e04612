//! Oracles for the potential equation: refinement study of the lattice solver against the
//! series solution, the special solution, and pointwise residuals.

use num_complex::Complex64;
use serde::Serialize;

use super::{PointResidual, VerificationReport, VerifyError};
use crate::potential::{
    fd_elliptic_solve, holomorphic_potential, series_potential, Boundary, PotentialField, SeriesCoefficients, SolveGrid,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceStudy {
    pub rings: Vec<usize>,
    /// max |φ_grid − φ_series| over lattice nodes
    pub errors: Vec<f64>,
    /// log₂ of successive error ratios
    pub orders: Vec<f64>,
}

fn max_deviation(grid: &SolveGrid, c: &SeriesCoefficients) -> Result<f64, VerifyError> {
    let mut worst: f64 = 0.0;
    for i in 0..=grid.n_r {
        let rr = i as f64 * grid.h();
        for j in 0..grid.n_theta {
            let w = std::f64::consts::TAU * j as f64 / grid.n_theta as f64;
            let s = series_potential(grid.kappa, grid.radius, c, rr, w)?;
            worst = worst.max((s.phi - grid.values[i][j]).abs());
        }
    }
    Ok(worst)
}

/// Solves with n_r rings and 2·n_r rays for each entry of `rings`; the residual of each
/// refinement step is |order − 2| and the tolerance is `order_tol`.
pub fn verify_pde_convergence(
    kappa: i32,
    radius: f64,
    coeffs: &SeriesCoefficients,
    rings: &[usize],
    order_tol: f64,
) -> Result<(VerificationReport, ConvergenceStudy), VerifyError> {
    let mut errors = Vec::new();
    for &n_r in rings {
        let n_theta = 2 * n_r;
        let b = Boundary::from_fn(n_theta, |w| {
            series_potential(kappa, radius, coeffs, radius, w).map(|d| d.phi).unwrap_or(f64::NAN)
        });
        let grid = fd_elliptic_solve(kappa, radius, &b, n_r, n_theta)?;
        errors.push(max_deviation(&grid, coeffs)?);
    }
    let orders: Vec<f64> = errors.windows(2).map(|e| (e[0] / e[1]).log2()).collect();
    let res = orders
        .iter()
        .enumerate()
        .map(|(i, &p)| PointResidual { point: [rings[i + 1] as f64, errors[i + 1], p, 0.0], residual: (p - 2.0).abs() })
        .collect();
    let study = ConvergenceStudy { rings: rings.to_vec(), errors, orders };
    let rep = VerificationReport::from_residuals("pde-convergence", order_tol, res)
        .with_detail("study", serde_json::to_value(&study).expect("study serializes"));
    Ok((rep, study))
}

/// |φ(F ≡ −1) − φ_o| with φ_o = −(1 − |z|²)/(1 + |z|²), κ = 1.
pub fn special_solution_residual(x: f64, y: f64) -> Result<f64, VerifyError> {
    let d = holomorphic_potential(1, &[Complex64::new(-1.0, 0.0)], Complex64::new(x, y))?;
    let s = x * x + y * y;
    Ok((d.phi + (1.0 - s) / (1.0 + s)).abs())
}

/// |Δφ + 8κφ/(1+κ(x²+y²))²| over the sum of the magnitudes of its two terms; points are (x, y).
pub fn verify_pde_residual(field: &PotentialField, points: &[(f64, f64)], tol: f64) -> Result<VerificationReport, VerifyError> {
    let k = field.kappa() as f64;
    let mut res = Vec::with_capacity(points.len());
    for &(x, y) in points {
        let d = field.derivs(x, y)?;
        let q = 1.0 + k * (x * x + y * y);
        let source = 8.0 * k * d.phi / (q * q);
        let lap = d.laplacian();
        let size = (lap.abs() + source.abs()).max(f64::MIN_POSITIVE);
        res.push(PointResidual { point: [x, y, 0.0, 0.0], residual: (lap + source).abs() / size });
    }
    Ok(VerificationReport::from_residuals("pde", tol, res))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn special_solution_points() {
        for &(x, y) in &[(0.0, 0.0), (0.3, -0.4), (1.5, 2.0)] {
            assert!(special_solution_residual(x, y).unwrap() < 1e-12);
        }
    }

    #[test]
    fn holomorphic_field_has_small_residual() {
        let f = PotentialField::holomorphic(-1, &[1.0, 0.0, 0.125]).unwrap();
        assert!(verify_pde_residual(&f, &[(0.1, 0.2), (-0.5, 0.3)], 1e-10).unwrap().pass);
    }
}
