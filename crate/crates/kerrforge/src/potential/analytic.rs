//! Closed-form potentials: Fourier series on a disk and holomorphic generating functions.

use num_complex::Complex64;

use super::PotentialError;
use crate::jet::{CJet, Jet};

/// P_n(s) with s = |z|², so that φ_n(𝔯) = P_n(𝔯²) 𝔯ⁿ.
fn profile_jet(kappa: i32, n: usize, s: &Jet) -> Jet {
    if kappa > 0 {
        // 1 - 2s/((1+s)(n+1))
        let q = *s * s.add_const(1.0).recip();
        (-q.scale(2.0 / (n as f64 + 1.0))).add_const(1.0)
    } else {
        // (1+s)/(1-s) + n
        (s.add_const(1.0) * (-*s).add_const(1.0).recip()).add_const(n as f64)
    }
}

/// Radial profile φ_n(𝔯).
pub fn radial_profile(kappa: i32, n: usize, rr: f64) -> f64 {
    let s = rr * rr;
    let p = if kappa > 0 {
        1.0 - 2.0 * s / ((1.0 + s) * (n as f64 + 1.0))
    } else {
        (1.0 + s) / (1.0 - s) + n as f64
    };
    p * rr.powi(n as i32)
}

/// φ = Re Σ P_n(|z|²) c_n zⁿ as a jet at (x, y).
pub(crate) fn holomorphic_jet(kappa: i32, coeffs: &[Complex64], x: f64, y: f64, order: usize) -> Jet {
    let x_j = Jet::var_x(x, order);
    let y_j = Jet::var_y(y, order);
    let s = x_j * x_j + y_j * y_j;
    let z = CJet::z(x, y, order);
    let mut zn = CJet::one(order);
    let mut phi = Jet::constant(0.0, order);
    for (n, c) in coeffs.iter().enumerate() {
        if n > 0 {
            zn = zn.mul(&z);
        }
        if c.re == 0.0 && c.im == 0.0 {
            continue;
        }
        let re = zn.re.scale(c.re) - zn.im.scale(c.im);
        phi += profile_jet(kappa, n, &s) * re;
    }
    phi
}

#[derive(Clone, Debug, PartialEq)]
pub struct HolomorphicPotential {
    pub kappa: i32,
    /// Power-series coefficients c_n of F.
    pub coeffs: Vec<Complex64>,
}

impl HolomorphicPotential {
    pub fn new(kappa: i32, coeffs: Vec<Complex64>) -> Result<Self, PotentialError> {
        if kappa != 1 && kappa != -1 {
            return Err(PotentialError::Kappa(kappa));
        }
        if coeffs.is_empty() {
            return Err(PotentialError::EmptyCoefficients);
        }
        Ok(Self { kappa, coeffs })
    }

    pub fn real(kappa: i32, coeffs: &[f64]) -> Result<Self, PotentialError> {
        Self::new(kappa, coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn jet(&self, x: f64, y: f64, order: usize) -> Result<Jet, PotentialError> {
        let s = x * x + y * y;
        if self.kappa < 0 && 1.0 - s < 1e-8 {
            return Err(PotentialError::OutsideDomain { x, y });
        }
        Ok(holomorphic_jet(self.kappa, &self.coeffs, x, y, order))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesCoefficients {
    pub a0: f64,
    /// (a_n, b_n) for n = 1, 2, ...
    pub ab: Vec<(f64, f64)>,
}

impl SeriesCoefficients {
    pub fn from_rows(rows: &[(usize, f64, f64)]) -> Result<Self, PotentialError> {
        if rows.is_empty() {
            return Err(PotentialError::EmptyCoefficients);
        }
        let max_n = rows.iter().map(|r| r.0).max().unwrap_or(0);
        let mut out = SeriesCoefficients { a0: 0.0, ab: vec![(0.0, 0.0); max_n] };
        for &(n, a, b) in rows {
            if n == 0 {
                out.a0 += a;
            } else {
                out.ab[n - 1].0 += a;
                out.ab[n - 1].1 += b;
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesPotential {
    pub kappa: i32,
    pub radius: f64,
    pub coeffs: SeriesCoefficients,
    holo: Vec<Complex64>,
}

impl SeriesPotential {
    pub fn new(kappa: i32, radius: f64, coeffs: SeriesCoefficients) -> Result<Self, PotentialError> {
        if kappa != 1 && kappa != -1 {
            return Err(PotentialError::Kappa(kappa));
        }
        if !(radius > 0.0 && radius < 1.0) {
            return Err(PotentialError::Radius(radius));
        }
        let holo = series_to_holomorphic(kappa, radius, &coeffs);
        Ok(Self { kappa, radius, coeffs, holo })
    }

    /// Equivalent generating-function coefficients c_n.
    pub fn holomorphic_coeffs(&self) -> &[Complex64] {
        &self.holo
    }

    pub fn jet(&self, x: f64, y: f64, order: usize) -> Result<Jet, PotentialError> {
        let rr = (x * x + y * y).sqrt();
        if rr > self.radius * (1.0 + 1e-12) {
            return Err(PotentialError::OutsideRadius { r: rr, radius: self.radius });
        }
        Ok(holomorphic_jet(self.kappa, &self.holo, x, y, order))
    }
}

/// c_0 = -a_0/φ_0(𝔯_o), c_n = -(a_n - i b_n)/φ_n(𝔯_o).
pub fn series_to_holomorphic(kappa: i32, radius: f64, c: &SeriesCoefficients) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(c.ab.len() + 1);
    out.push(Complex64::new(-c.a0 / radial_profile(kappa, 0, radius), 0.0));
    for (i, &(a, b)) in c.ab.iter().enumerate() {
        let d = radial_profile(kappa, i + 1, radius);
        out.push(Complex64::new(-a / d, b / d));
    }
    out
}

/// Series evaluation at polar (𝔯, w).
pub fn series_potential(
    kappa: i32,
    radius: f64,
    coeffs: &SeriesCoefficients,
    rr: f64,
    w: f64,
) -> Result<super::PotentialDerivs, PotentialError> {
    let p = SeriesPotential::new(kappa, radius, coeffs.clone())?;
    let j = p.jet(rr * w.cos(), rr * w.sin(), 2)?;
    Ok(super::PotentialDerivs::from_jet(&j))
}

pub fn holomorphic_potential(
    kappa: i32,
    coeffs: &[Complex64],
    z: Complex64,
) -> Result<super::PotentialDerivs, PotentialError> {
    let p = HolomorphicPotential::new(kappa, coeffs.to_vec())?;
    let j = p.jet(z.re, z.im, 2)?;
    Ok(super::PotentialDerivs::from_jet(&j))
}
