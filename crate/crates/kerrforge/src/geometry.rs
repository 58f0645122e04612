//! Charts, conformal factors and assembly of background and Kerr-family metrics.
//!
//! Chart order is (x, y, v, r); the spherical chart is (ξ, ψ, v, ρ). Symmetric products
//! follow α∨β = ½(α⊗β + β⊗α) and d^cφ = −φ_y dx + φ_x dy.

use std::sync::Arc;

use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use thiserror::Error;

use crate::potential::{PotentialError, PotentialField};

pub const PHI_MIN: f64 = 1e-10;
pub const RADIAL_MIN: f64 = 1e-12;
pub const SIN_MIN: f64 = 1e-8;
pub const DISK_MARGIN: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("kappa must be +1 or -1, got {0}")]
    Kappa(i32),
    #[error("potential has kappa {potential}, config has {config}")]
    KappaMismatch { config: i32, potential: i32 },
    #[error("B must be nonzero and finite")]
    BZero,
    #[error("Ricci-flat families need B = -1 when m != 0 (B = {0})")]
    NeedsBMinusOne(f64),
    #[error("degenerate potential |phi| = {0:e}")]
    DegeneratePotential(f64),
    #[error("singular locus r^2 + phi^2 = {0:e}")]
    SingularLocus(f64),
    #[error("point ({x}, {y}) outside the unit disk")]
    OutsideDisk { x: f64, y: f64 },
    #[error("sign condition kappa*phi < 0 fails (phi = {0})")]
    SignCondition(f64),
    #[error("sin(xi) = {0:e} too close to a pole")]
    Pole(f64),
    #[error("xi = {0} outside the admissible range")]
    XiRange(f64),
    #[error("non-finite coordinate")]
    NonFinite,
    #[error(transparent)]
    Potential(#[from] PotentialError),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartPoint {
    pub x: f64,
    pub y: f64,
    pub v: f64,
    pub r: f64,
}

impl ChartPoint {
    pub fn new(x: f64, y: f64, v: f64, r: f64) -> Self {
        Self { x, y, v, r }
    }

    pub fn coords(&self) -> [f64; 4] {
        [self.x, self.y, self.v, self.r]
    }

    pub fn from_coords(c: [f64; 4]) -> Self {
        Self { x: c[0], y: c[1], v: c[2], r: c[3] }
    }

    pub fn is_finite(&self) -> bool {
        self.coords().iter().all(|c| c.is_finite())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphericalPoint {
    pub xi: f64,
    pub psi: f64,
    pub rho: f64,
    pub v: f64,
}

impl SphericalPoint {
    pub fn new(xi: f64, psi: f64, rho: f64, v: f64) -> Self {
        Self { xi, psi, rho, v }
    }

    /// Chart order (ξ, ψ, v, ρ).
    pub fn coords(&self) -> [f64; 4] {
        [self.xi, self.psi, self.v, self.rho]
    }

    pub fn from_coords(c: [f64; 4]) -> Self {
        Self { xi: c[0], psi: c[1], v: c[2], rho: c[3] }
    }
}

/// Deformations used by negative controls: β̃ ↦ beta_scale·β̃ and σ ↦ σ + sigma_shift.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Perturbation {
    pub beta_scale: f64,
    pub sigma_shift: f64,
}

impl Default for Perturbation {
    fn default() -> Self {
        Self { beta_scale: 1.0, sigma_shift: 0.0 }
    }
}

#[derive(Clone, Debug)]
pub struct MetricConfig {
    pub kappa: i32,
    pub b: f64,
    pub m: f64,
    pub k: f64,
    pub potential: Arc<PotentialField>,
    pub perturbation: Perturbation,
}

impl MetricConfig {
    pub fn new(kappa: i32, b: f64, m: f64, k: f64, potential: PotentialField) -> Result<Self, GeometryError> {
        let cfg = Self { kappa, b, m, k, potential: Arc::new(potential), perturbation: Perturbation::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_perturbation(mut self, p: Perturbation) -> Self {
        self.perturbation = p;
        self
    }

    pub fn with_m(&self, m: f64) -> Self {
        Self { m, ..self.clone() }
    }

    pub fn with_k(&self, k: f64) -> Self {
        Self { k, ..self.clone() }
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        if self.kappa != 1 && self.kappa != -1 {
            return Err(GeometryError::Kappa(self.kappa));
        }
        if self.potential.kappa() != self.kappa {
            return Err(GeometryError::KappaMismatch { config: self.kappa, potential: self.potential.kappa() });
        }
        if self.b == 0.0 || !self.b.is_finite() {
            return Err(GeometryError::BZero);
        }
        if self.m != 0.0 && self.b != -1.0 {
            return Err(GeometryError::NeedsBMinusOne(self.b));
        }
        Ok(())
    }

    pub fn sigma(&self, phi: f64, r: f64) -> f64 {
        sigma_of(self.b, phi, r) + self.perturbation.sigma_shift
    }

    pub fn beta_tilde(&self, phi: f64, r: f64) -> f64 {
        self.perturbation.beta_scale * (self.b + self.m * beta_tilde_o(self.k, phi, r))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricAtPoint {
    pub g: Matrix4<f64>,
    pub sigma: f64,
    pub beta_tilde: f64,
}

impl MetricAtPoint {
    /// (positive, negative) eigenvalue counts.
    pub fn signature(&self) -> (usize, usize) {
        signature(&self.g)
    }
}

pub fn signature(g: &Matrix4<f64>) -> (usize, usize) {
    let e = SymmetricEigen::new(*g).eigenvalues;
    let scale = e.amax().max(f64::MIN_POSITIVE);
    let pos = e.iter().filter(|&&v| v > 1e-14 * scale).count();
    let neg = e.iter().filter(|&&v| v < -1e-14 * scale).count();
    (pos, neg)
}

/// Signature predicted from sign(Bκ): the (x, y) block has the sign of Bκ and the
/// null pair contributes one of each sign.
pub fn expected_signature(b: f64, kappa: i32) -> (usize, usize) {
    if b * kappa as f64 > 0.0 {
        (3, 1)
    } else {
        (1, 3)
    }
}

/// 4/(1 + κ(x²+y²))².
pub fn conformal_factor(kappa: i32, x: f64, y: f64) -> Result<f64, GeometryError> {
    if kappa != 1 && kappa != -1 {
        return Err(GeometryError::Kappa(kappa));
    }
    let s = x * x + y * y;
    if kappa < 0 && 1.0 - s < DISK_MARGIN {
        return Err(GeometryError::OutsideDisk { x, y });
    }
    let q = 1.0 + kappa as f64 * s;
    Ok(4.0 / (q * q))
}

/// σ = −r²/(4Bφ) − Bφ/4.
pub fn sigma_of(b: f64, phi: f64, r: f64) -> f64 {
    -r * r / (4.0 * b * phi) - b * phi / 4.0
}

/// σ and its partial derivatives in (φ, r).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SigmaPartials {
    pub s: f64,
    pub r: f64,
    pub rr: f64,
    pub p: f64,
    pub pp: f64,
    pub rp: f64,
}

pub fn sigma_partials(b: f64, phi: f64, r: f64) -> SigmaPartials {
    SigmaPartials {
        s: sigma_of(b, phi, r),
        r: -r / (2.0 * b * phi),
        rr: -1.0 / (2.0 * b * phi),
        p: r * r / (4.0 * b * phi * phi) - b / 4.0,
        pp: -r * r / (2.0 * b * phi * phi * phi),
        rp: r / (2.0 * b * phi * phi),
    }
}

/// −2σσ_rr + σ_r² + ¼.
pub fn sigma_ode_residual(b: f64, phi: f64, r: f64) -> f64 {
    let s = sigma_partials(b, phi, r);
    -2.0 * s.s * s.rr + s.r * s.r + 0.25
}

/// β̃_o = k r/(r² + φ²).
pub fn beta_tilde_o(k: f64, phi: f64, r: f64) -> f64 {
    k * r / (r * r + phi * phi)
}

/// β̃_o and its partial derivatives in (φ, r): (value, ∂_r, ∂_rr, ∂_φ, ∂_rφ).
pub fn beta_tilde_o_partials(k: f64, phi: f64, r: f64) -> [f64; 5] {
    let d = r * r + phi * phi;
    let v = k * r / d;
    let vr = k * (phi * phi - r * r) / (d * d);
    let vrr = k * 2.0 * r * (r * r - 3.0 * phi * phi) / (d * d * d);
    let vp = -2.0 * k * r * phi / (d * d);
    let vrp = 2.0 * k * phi * (3.0 * r * r - phi * phi) / (d * d * d);
    [v, vr, vrr, vp, vrp]
}

/// k₁(B²φ² − r²)/(r² + B²φ²) + k₂ r/(r² + B²φ²).
pub fn general_beta_solution(k1: f64, k2: f64, b: f64, phi: f64, r: f64) -> f64 {
    let d = r * r + b * b * phi * phi;
    (k1 * (b * b * phi * phi - r * r) + k2 * r) / d
}

/// Value and first two r-derivatives of [`general_beta_solution`].
pub fn general_beta_partials(k1: f64, k2: f64, b: f64, phi: f64, r: f64) -> [f64; 3] {
    let c2 = b * b * phi * phi;
    let d = r * r + c2;
    let n = k1 * (c2 - r * r) + k2 * r;
    let n1 = -2.0 * k1 * r + k2;
    let n2 = -2.0 * k1;
    let d1 = 2.0 * r;
    let v = n / d;
    let v1 = (n1 * d - n * d1) / (d * d);
    let v2 = (n2 * d * d - 2.0 * n1 * d1 * d - n * 2.0 * d + 2.0 * n * d1 * d1) / (d * d * d);
    [v, v1, v2]
}

/// σ β'' + β' σ_r + β/(4σ) for β(r) given by value and r-derivatives.
pub fn beta_ode_residual(b: f64, phi: f64, r: f64, beta: [f64; 3]) -> f64 {
    let s = sigma_partials(b, phi, r);
    s.s * beta[2] + beta[1] * s.r + beta[0] / (4.0 * s.s)
}

/// (R, T) with R = u/√(2|B|) + sign(B)√(|B|/2) v and T = −u/√(2|B|).
pub fn background_block_coords(b: f64, v: f64, u: f64) -> Result<(f64, f64), GeometryError> {
    if b == 0.0 || !b.is_finite() {
        return Err(GeometryError::BZero);
    }
    let q = (2.0 * b.abs()).sqrt();
    Ok((u / q + b.signum() * (b.abs() / 2.0).sqrt() * v, -u / q))
}

/// ∂_T in (x, y, v, r) components: sign(B)√(2/|B|) ∂_v.
pub fn background_time_vector(b: f64) -> Vector4<f64> {
    Vector4::new(0.0, 0.0, b.signum() * (2.0 / b.abs()).sqrt(), 0.0)
}

/// Components of ϑ = dv + d^cφ and du = dr − B dv in (x, y, v, r).
pub fn theta_and_du(b: f64, phi_x: f64, phi_y: f64) -> (Vector4<f64>, Vector4<f64>) {
    (Vector4::new(-phi_y, phi_x, 1.0, 0.0), Vector4::new(0.0, 0.0, -b, 1.0))
}

/// Adapted frame (Ê₁, Ê₂, p_o, q_o) as rows, in (x, y, v, r) components.
pub fn adapted_frame(b: f64, phi_x: f64, phi_y: f64) -> Matrix4<f64> {
    Matrix4::new(
        1.0, 0.0, phi_y, b * phi_y, //
        0.0, 1.0, -phi_x, -b * phi_x, //
        0.0, 0.0, 0.0, 1.0, //
        0.0, 0.0, 1.0, b,
    )
}

fn sym(a: &Vector4<f64>, b: &Vector4<f64>) -> Matrix4<f64> {
    (a * b.transpose() + b * a.transpose()) * 0.5
}

pub fn assemble_metric(cfg: &MetricConfig, pt: &ChartPoint) -> Result<MetricAtPoint, GeometryError> {
    cfg.validate()?;
    if !pt.is_finite() {
        return Err(GeometryError::NonFinite);
    }
    if cfg.kappa < 0 && 1.0 - (pt.x * pt.x + pt.y * pt.y) < DISK_MARGIN {
        return Err(GeometryError::OutsideDisk { x: pt.x, y: pt.y });
    }
    let j = cfg.potential.jet(pt.x, pt.y, 2)?;
    let phi = j.value();
    if phi.abs() < PHI_MIN {
        return Err(GeometryError::DegeneratePotential(phi));
    }
    if cfg.kappa as f64 * phi >= 0.0 {
        return Err(GeometryError::SignCondition(phi));
    }
    let rad = pt.r * pt.r + phi * phi;
    if rad < RADIAL_MIN {
        return Err(GeometryError::SingularLocus(rad));
    }
    let lambda = j.partial(2, 0) + j.partial(0, 2);
    let sigma = cfg.sigma(phi, pt.r);
    let beta = cfg.beta_tilde(phi, pt.r);
    let (theta, du) = theta_and_du(cfg.b, j.partial(1, 0), j.partial(0, 1));
    let mut g = sym(&theta, &du) + theta * theta.transpose() * (beta / 2.0);
    g[(0, 0)] += sigma * lambda;
    g[(1, 1)] += sigma * lambda;
    g[(3, 3)] = 0.0;
    Ok(MetricAtPoint { g, sigma, beta_tilde: beta })
}

/// Classical Kerr components in (ξ, ψ, v, ρ).
pub fn classical_kerr_metric(m: f64, a: f64, pt: &SphericalPoint) -> Result<MetricAtPoint, GeometryError> {
    let (s, c) = pt.xi.sin_cos();
    if s.abs() < SIN_MIN {
        return Err(GeometryError::Pole(s));
    }
    let big = pt.rho * pt.rho + a * a * c * c;
    if big < RADIAL_MIN {
        return Err(GeometryError::SingularLocus(big));
    }
    let t = Vector4::new(0.0, a * s * s, 1.0, 0.0);
    let w = Vector4::new(0.0, a * s * s, 0.0, 1.0);
    let mut g = -sym(&t, &w) + t * t.transpose() * (0.5 * (1.0 - 2.0 * m * pt.rho / big));
    g[(0, 0)] -= 0.5 * big;
    g[(1, 1)] -= 0.5 * big * s * s;
    let ac = a * c;
    let sigma = if ac != 0.0 { -pt.rho * pt.rho / (4.0 * ac) - ac / 4.0 } else { f64::NAN };
    Ok(MetricAtPoint { g, sigma, beta_tilde: -1.0 - 2.0 * m * pt.rho / big })
}
