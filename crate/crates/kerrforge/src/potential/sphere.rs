//! Potentials written on the round sphere and on the hyperbolic plane, and the
//! rotation that brings a degree-one spherical potential to a cos ξ′.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use super::PotentialError;

/// Mode coefficients ã_n, b̃_n indexed by n (b̃_0 ignored).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SphereCoefficients {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl SphereCoefficients {
    pub fn degree_one(a0: f64, a1: f64, b1: f64) -> Self {
        Self { a: vec![a0, a1], b: vec![0.0, b1] }
    }

    fn get(&self, n: usize) -> (f64, f64) {
        (self.a.get(n).copied().unwrap_or(0.0), self.b.get(n).copied().unwrap_or(0.0))
    }

    fn len(&self) -> usize {
        self.a.len().max(self.b.len())
    }

    fn has_higher_modes(&self) -> bool {
        (2..self.len()).any(|n| {
            let (a, b) = self.get(n);
            a != 0.0 || b != 0.0
        })
    }
}

pub fn spherical_potential(c: &SphereCoefficients, xi: f64, psi: f64) -> Result<f64, PotentialError> {
    let (a0, _) = c.get(0);
    let (a1, b1) = c.get(1);
    let mut phi = a0 * xi.cos() + xi.sin() * (a1 * psi.cos() + b1 * psi.sin());
    if c.has_higher_modes() {
        if !(xi > 0.0 && xi < std::f64::consts::PI) || (xi / 2.0).cos() < 1e-8 {
            return Err(PotentialError::Pole(xi));
        }
        let t = (xi / 2.0).tan();
        let t2 = t * t;
        for n in 2..c.len() {
            let (a, b) = c.get(n);
            let nf = n as f64;
            let prof = (1.0 + (nf - 1.0) / (nf + 1.0) * t2) / (1.0 + t2) * t.powi(n as i32);
            phi += prof * (a * (nf * psi).cos() + b * (nf * psi).sin());
        }
    }
    Ok(phi)
}

/// Generating-function coefficients reproducing `spherical_potential` under 𝔯 = tan(ξ/2), w = ψ.
pub fn spherical_to_holomorphic(c: &SphereCoefficients) -> Vec<Complex64> {
    (0..c.len().max(1))
        .map(|n| {
            let (a, b) = c.get(n);
            let s = if n == 1 { 2.0 } else { 1.0 };
            Complex64::new(s * a, -s * b)
        })
        .collect()
}

pub fn hyperbolic_potential(c: &SphereCoefficients, xi: f64, psi: f64) -> Result<f64, PotentialError> {
    let (a0, _) = c.get(0);
    let (a1, b1) = c.get(1);
    let mut phi = a0 * xi.cosh() + xi.sinh() * (a1 * psi.cos() + b1 * psi.sin());
    let t = (xi / 2.0).tanh();
    for n in 2..c.len() {
        let (a, b) = c.get(n);
        let nf = n as f64;
        phi += t.powi(n as i32) * (xi.cosh() + nf) * (a * (nf * psi).cos() + b * (nf * psi).sin());
    }
    if !phi.is_finite() {
        return Err(PotentialError::OutsideDomain { x: xi, y: psi });
    }
    Ok(phi)
}

/// Generating-function coefficients reproducing `hyperbolic_potential` under 𝔯 = tanh(ξ/2), w = ψ.
pub fn hyperbolic_to_holomorphic(c: &SphereCoefficients) -> Vec<Complex64> {
    (0..c.len().max(1))
        .map(|n| {
            let (a, b) = c.get(n);
            Complex64::new(a, -b)
        })
        .collect()
}

/// Returns (a, α₁, α₂) with a = |(ã₁, b̃₁, ã₀)|.
pub fn rotate_reduce(a0: f64, a1: f64, b1: f64) -> Result<(f64, f64, f64), PotentialError> {
    let a = (a0 * a0 + a1 * a1 + b1 * b1).sqrt();
    if a == 0.0 || !a.is_finite() {
        return Err(PotentialError::ZeroVector);
    }
    let alpha2 = b1.atan2(a1);
    let alpha1 = a1.hypot(b1).atan2(a0);
    Ok((a, alpha1, alpha2))
}

/// R = R_z(α₂) R_y(α₁); carries the pole e_z to the direction (ã₁, b̃₁, ã₀)/a.
pub fn rotation_matrix(alpha1: f64, alpha2: f64) -> Matrix3<f64> {
    let (s1, c1) = alpha1.sin_cos();
    let (s2, c2) = alpha2.sin_cos();
    let rz = Matrix3::new(c2, -s2, 0.0, s2, c2, 0.0, 0.0, 0.0, 1.0);
    let ry = Matrix3::new(c1, 0.0, s1, 0.0, 1.0, 0.0, -s1, 0.0, c1);
    rz * ry
}

/// Spherical angles of R·n(ξ′, ψ′).
pub fn rotated_angles(r: &Matrix3<f64>, xi_p: f64, psi_p: f64) -> (f64, f64) {
    let n = Vector3::new(xi_p.sin() * psi_p.cos(), xi_p.sin() * psi_p.sin(), xi_p.cos());
    let m = r * n;
    (m.z.clamp(-1.0, 1.0).acos(), m.y.atan2(m.x))
}
