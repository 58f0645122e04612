//! Kähler potentials φ solving Δφ + 8κφ/(1+κ(x²+y²))² = 0 with sign(φ) = −κ.

mod analytic;
mod fd;
pub mod io;
mod sphere;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::jet::Jet;

pub use analytic::{
    holomorphic_potential, radial_profile, series_potential, series_to_holomorphic, HolomorphicPotential,
    SeriesCoefficients, SeriesPotential,
};
pub use fd::{fd_elliptic_solve, Boundary, GridPotential, SolveGrid};
pub use sphere::{
    hyperbolic_potential, hyperbolic_to_holomorphic, rotate_reduce, rotated_angles, rotation_matrix, spherical_potential,
    spherical_to_holomorphic, SphereCoefficients,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PotentialError {
    #[error("kappa must be +1 or -1, got {0}")]
    Kappa(i32),
    #[error("disk radius must lie in (0, 1), got {0}")]
    Radius(f64),
    #[error("coefficient list is empty")]
    EmptyCoefficients,
    #[error("point ({x}, {y}) outside the admissible domain")]
    OutsideDomain { x: f64, y: f64 },
    #[error("radius {r} exceeds the series disk radius {radius}")]
    OutsideRadius { r: f64, radius: f64 },
    #[error("boundary data changes sign")]
    SignMixedBoundary,
    #[error("boundary data vanishes identically")]
    ZeroBoundary,
    #[error("boundary data has the wrong sign for kappa = {0}")]
    WrongSignBoundary(i32),
    #[error("grid too small: n_r = {n_r}, n_theta = {n_theta}")]
    GridSize { n_r: usize, n_theta: usize },
    #[error("singular linear system (mode {mode}, row {row})")]
    Singular { mode: usize, row: usize },
    #[error("rotation needs a nonzero degree-one vector")]
    ZeroVector,
    #[error("polar angle {0} outside (0, pi)")]
    Pole(f64),
    #[error("requested derivative order {want} exceeds the available {have}")]
    Order { want: usize, have: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io: {0}")]
    Io(String),
}

/// φ and its derivatives up to second order at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PotentialDerivs {
    pub phi: f64,
    pub phi_x: f64,
    pub phi_y: f64,
    pub phi_xx: f64,
    pub phi_xy: f64,
    pub phi_yy: f64,
}

impl PotentialDerivs {
    pub fn from_jet(j: &Jet) -> Self {
        Self {
            phi: j.value(),
            phi_x: j.partial(1, 0),
            phi_y: j.partial(0, 1),
            phi_xx: j.partial(2, 0),
            phi_xy: j.partial(1, 1),
            phi_yy: j.partial(0, 2),
        }
    }

    pub fn laplacian(&self) -> f64 {
        self.phi_xx + self.phi_yy
    }
}

type JetFn = dyn Fn(&Jet, &Jet) -> Jet + Send + Sync;

/// An arbitrary smooth function, written once over jets. Not required to solve the PDE.
#[derive(Clone)]
pub struct FunctionPotential {
    pub kappa: i32,
    f: Arc<JetFn>,
}

impl FunctionPotential {
    pub fn new(kappa: i32, f: impl Fn(&Jet, &Jet) -> Jet + Send + Sync + 'static) -> Self {
        Self { kappa, f: Arc::new(f) }
    }
}

impl fmt::Debug for FunctionPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionPotential").field("kappa", &self.kappa).finish_non_exhaustive()
    }
}

#[derive(Clone, Debug)]
pub enum PotentialField {
    Series(SeriesPotential),
    Holomorphic(HolomorphicPotential),
    Grid(GridPotential),
    Function(FunctionPotential),
}

impl PotentialField {
    pub fn kappa(&self) -> i32 {
        match self {
            Self::Series(p) => p.kappa,
            Self::Holomorphic(p) => p.kappa,
            Self::Grid(p) => p.kappa(),
            Self::Function(p) => p.kappa,
        }
    }

    pub fn holomorphic(kappa: i32, coeffs: &[f64]) -> Result<Self, PotentialError> {
        HolomorphicPotential::real(kappa, coeffs).map(Self::Holomorphic)
    }

    /// Taylor jet of φ at (x, y) to the requested order (at most 4).
    pub fn jet(&self, x: f64, y: f64, order: usize) -> Result<Jet, PotentialError> {
        let j = match self {
            Self::Series(p) => p.jet(x, y, order)?,
            Self::Holomorphic(p) => p.jet(x, y, order)?,
            Self::Grid(p) => p.jet(x, y, order)?,
            Self::Function(p) => {
                if p.kappa < 0 && 1.0 - (x * x + y * y) < 1e-8 {
                    return Err(PotentialError::OutsideDomain { x, y });
                }
                (p.f)(&Jet::var_x(x, order), &Jet::var_y(y, order))
            }
        };
        if j.order() < order {
            return Err(PotentialError::Order { want: order, have: j.order() });
        }
        Ok(j)
    }

    pub fn derivs(&self, x: f64, y: f64) -> Result<PotentialDerivs, PotentialError> {
        self.jet(x, y, 2).map(|j| PotentialDerivs::from_jet(&j))
    }

    /// Δφ + 8κφ/(1+κ(x²+y²))².
    pub fn pde_residual(&self, x: f64, y: f64) -> Result<f64, PotentialError> {
        let d = self.derivs(x, y)?;
        Ok(pde_residual(self.kappa(), x, y, &d))
    }
}

pub fn pde_residual(kappa: i32, x: f64, y: f64, d: &PotentialDerivs) -> f64 {
    let k = kappa as f64;
    let q = 1.0 + k * (x * x + y * y);
    d.laplacian() + 8.0 * k * d.phi / (q * q)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SignReport {
    pub ok: bool,
    pub worst_point: (f64, f64),
    /// Largest value of κφ seen; negative when the condition holds everywhere.
    pub worst_value: f64,
}

/// Checks κφ < 0 on a polar lattice of the disk of the given radius.
pub fn check_sign_condition(field: &PotentialField, radius: f64, n_r: usize, n_theta: usize) -> SignReport {
    let k = field.kappa() as f64;
    let mut rep = SignReport { ok: true, worst_point: (0.0, 0.0), worst_value: f64::NEG_INFINITY };
    for i in 0..=n_r {
        let rr = radius * i as f64 / n_r.max(1) as f64;
        let nt = if i == 0 { 1 } else { n_theta.max(1) };
        for j in 0..nt {
            let w = std::f64::consts::TAU * j as f64 / nt as f64;
            let (x, y) = (rr * w.cos(), rr * w.sin());
            let v = match field.derivs(x, y) {
                Ok(d) => k * d.phi,
                Err(_) => f64::INFINITY,
            };
            if v > rep.worst_value || v.is_nan() {
                rep.worst_value = v;
                rep.worst_point = (x, y);
            }
            if !(v < 0.0) {
                rep.ok = false;
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_condition_examples() {
        let phi_o = PotentialField::holomorphic(1, &[-1.0]).unwrap();
        assert!(check_sign_condition(&phi_o, 0.9, 12, 24).ok);
        let hyp = PotentialField::holomorphic(-1, &[1.0]).unwrap();
        assert!(check_sign_condition(&hyp, 0.9, 12, 24).ok);
        let bad = PotentialField::holomorphic(1, &[1.0]).unwrap();
        let rep = check_sign_condition(&bad, 0.9, 12, 24);
        assert!(!rep.ok);
        assert!((rep.worst_value - 1.0).abs() < 1e-15);
        assert_eq!(rep.worst_point, (0.0, 0.0));
    }

    #[test]
    fn residual_vanishes_for_generating_functions() {
        let p = PotentialField::Holomorphic(
            HolomorphicPotential::new(
                -1,
                vec![num_complex::Complex64::new(1.0, 0.0), num_complex::Complex64::new(0.1, -0.2)],
            )
            .unwrap(),
        );
        for &(x, y) in &[(0.1, 0.3), (-0.5, 0.2), (0.0, -0.8)] {
            assert!(p.pde_residual(x, y).unwrap().abs() < 1e-10);
        }
    }
}
