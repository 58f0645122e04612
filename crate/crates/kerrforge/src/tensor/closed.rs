//! Closed-form connection of the adapted frame (Ê₁, Ê₂, p_o, q_o) and its curvature.
//!
//! Frame index order is 0 = Ê₁, 1 = Ê₂, 2 = p_o, 3 = q_o, with Ê_i = E_i + J_i^jφ_j q_o,
//! p_o = ∂_r and q_o = ∂_v + B∂_r. The only nonzero bracket is [Ê₁, Ê₂] = −λ q_o.

use nalgebra::Matrix4;

use super::fd::diff;
use super::{
    assemble_riemann, flatten_gamma, unflatten_gamma, Basis, ChristoffelSet, CurvatureReport, Gamma, TensorError,
};
use crate::geometry::{adapted_frame, beta_tilde_o_partials, sigma_partials, ChartPoint, GeometryError, MetricConfig};

const P: usize = 2;
const Q: usize = 3;

/// Scalar data entering the closed-form table at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FramePoint {
    pub b: f64,
    pub phi: f64,
    pub phi_x: f64,
    pub phi_y: f64,
    pub phi_xx: f64,
    pub phi_xy: f64,
    pub phi_yy: f64,
    pub lambda: f64,
    pub lambda_x: f64,
    pub lambda_y: f64,
    pub sigma: f64,
    pub sigma_r: f64,
    pub sigma_rr: f64,
    pub sigma_x: f64,
    pub sigma_y: f64,
    pub beta: f64,
    pub beta_r: f64,
    pub beta_x: f64,
    pub beta_y: f64,
}

impl FramePoint {
    pub fn new(cfg: &MetricConfig, x: f64, y: f64, r: f64) -> Result<Self, TensorError> {
        let j = cfg.potential.jet(x, y, 3).map_err(GeometryError::from)?;
        let phi = j.value();
        if phi.abs() < crate::geometry::PHI_MIN {
            return Err(GeometryError::DegeneratePotential(phi).into());
        }
        let (phi_x, phi_y) = (j.partial(1, 0), j.partial(0, 1));
        let lambda = j.partial(2, 0) + j.partial(0, 2);
        if lambda.abs() < 1e-12 {
            return Err(TensorError::DegenerateLambda(lambda));
        }
        let sp = sigma_partials(cfg.b, phi, r);
        let bo = beta_tilde_o_partials(cfg.k, phi, r);
        let sc = cfg.perturbation.beta_scale;
        let mb = cfg.m * sc;
        Ok(Self {
            b: cfg.b,
            phi,
            phi_x,
            phi_y,
            phi_xx: j.partial(2, 0),
            phi_xy: j.partial(1, 1),
            phi_yy: j.partial(0, 2),
            lambda,
            lambda_x: j.partial(3, 0) + j.partial(1, 2),
            lambda_y: j.partial(2, 1) + j.partial(0, 3),
            sigma: sp.s + cfg.perturbation.sigma_shift,
            sigma_r: sp.r,
            sigma_rr: sp.rr,
            sigma_x: sp.p * phi_x,
            sigma_y: sp.p * phi_y,
            beta: sc * cfg.b + mb * bo[0],
            beta_r: mb * bo[1],
            beta_x: mb * bo[3] * phi_x,
            beta_y: mb * bo[3] * phi_y,
        })
    }
}

/// J^m_i with J(E₁) = E₂.
fn j_up(m: usize, i: usize) -> f64 {
    match (m, i) {
        (1, 0) => 1.0,
        (0, 1) => -1.0,
        _ => 0.0,
    }
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// The closed-form table of Γ̂^C_{AB} for the canonical data (σ, 1/σ, β̃/σ, 0).
pub fn closed_table(d: &FramePoint) -> Gamma {
    let b = d.b;
    let s = d.sigma;
    let lam = d.lambda;
    let sig = [d.sigma_x, d.sigma_y];
    let lam_d = [d.lambda_x, d.lambda_y];
    let beta_d = [d.beta_x, d.beta_y];
    // J^ℓ_i φ_ℓ
    let jphi = [d.phi_y, -d.phi_x];
    let omega = |i: usize, j: usize| match (i, j) {
        (0, 1) => lam,
        (1, 0) => -lam,
        _ => 0.0,
    };
    let mut g = [[[0.0; 4]; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for m in 0..2 {
                let surf = (lam_d[i] * delta(j, m) + lam_d[j] * delta(i, m) - delta(i, j) * lam_d[m]) / (2.0 * lam);
                let conf = (sig[i] * delta(j, m) + sig[j] * delta(i, m) - delta(i, j) * sig[m]) / (2.0 * s);
                let twist = b * d.sigma_r * (jphi[i] * delta(j, m) + jphi[j] * delta(i, m) - delta(i, j) * jphi[m])
                    / (2.0 * s);
                g[i][j][m] = surf + conf + twist;
            }
            g[i][j][P] = -lam * delta(i, j) * (b * d.sigma_r - d.beta * d.sigma_r);
            g[i][j][Q] = -omega(i, j) / 2.0 - lam * delta(i, j) * d.sigma_r;
        }
    }
    for i in 0..2 {
        for m in 0..2 {
            let ip = j_up(m, i) / (4.0 * s) + delta(m, i) * d.sigma_r / (2.0 * s);
            g[i][P][m] = ip;
            g[P][i][m] = ip;
            let iq = j_up(m, i) * (d.beta - b) / (4.0 * s) + b * ip;
            g[i][Q][m] = iq;
            g[Q][i][m] = iq;
        }
        let iqp = 0.5 * beta_d[i] - 0.5 * jphi[i] * d.beta_r;
        g[i][Q][P] = iqp;
        g[Q][i][P] = iqp;
    }
    g[P][Q][P] = 0.5 * d.beta_r;
    g[Q][P][P] = 0.5 * d.beta_r;
    for m in 0..2 {
        g[Q][Q][m] = -beta_d[m] / (4.0 * s * lam) - b * jphi[m] * d.beta_r / (4.0 * s * lam);
    }
    g[Q][Q][P] = b * d.beta_r / 2.0 + d.beta_r * d.beta / 2.0;
    g[Q][Q][Q] = -0.5 * d.beta_r;
    g
}

pub fn christoffel_closed(cfg: &MetricConfig, pt: &ChartPoint) -> Result<ChristoffelSet, TensorError> {
    cfg.validate()?;
    let d = FramePoint::new(cfg, pt.x, pt.y, pt.r)?;
    Ok(ChristoffelSet { basis: Basis::AdaptedFrame, gamma: closed_table(&d) })
}

/// Frame metric: σλ on the Ê block, g(p,q) = ½, g(q,q) = β̃/2, g(p,p) = 0.
pub fn frame_metric(d: &FramePoint) -> Matrix4<f64> {
    let sl = d.sigma * d.lambda;
    Matrix4::new(
        sl, 0.0, 0.0, 0.0, //
        0.0, sl, 0.0, 0.0, //
        0.0, 0.0, 0.0, 0.5, //
        0.0, 0.0, 0.5, d.beta / 2.0,
    )
}

/// Curvature of the closed-form connection; frame derivatives of Γ̂ by finite differences
/// in (x, y, r), Ê_i acting as E_i + B J_i^jφ_j ∂_r and q_o as B∂_r on these functions.
pub fn riemann_frame(cfg: &MetricConfig, pt: &ChartPoint, h: f64) -> Result<CurvatureReport, TensorError> {
    cfg.validate()?;
    let d = FramePoint::new(cfg, pt.x, pt.y, pt.r)?;
    let gamma = closed_table(&d);
    let field = |q: [f64; 4]| -> Result<[f64; 64], TensorError> {
        let fp = FramePoint::new(cfg, q[0], q[1], q[3]).map_err(|e| match e {
            TensorError::Geometry(g) => TensorError::Stencil(g),
            other => other,
        })?;
        Ok(flatten_gamma(&closed_table(&fp)))
    };
    let p = pt.coords();
    let dx = unflatten_gamma(&diff(&field, &p, 0, h)?);
    let dy = unflatten_gamma(&diff(&field, &p, 1, h)?);
    let dr = unflatten_gamma(&diff(&field, &p, 3, h)?);
    let b = cfg.b;
    let combine = |cx: f64, cy: f64, cr: f64| {
        let mut out = [[[0.0; 4]; 4]; 4];
        for a in 0..4 {
            for bb in 0..4 {
                for c in 0..4 {
                    out[a][bb][c] = cx * dx[a][bb][c] + cy * dy[a][bb][c] + cr * dr[a][bb][c];
                }
            }
        }
        out
    };
    let dgamma = [
        combine(1.0, 0.0, b * d.phi_y),
        combine(0.0, 1.0, -b * d.phi_x),
        combine(0.0, 0.0, 1.0),
        combine(0.0, 0.0, b),
    ];
    let mut bracket = [[[0.0; 4]; 4]; 4];
    bracket[0][1][Q] = -d.lambda;
    bracket[1][0][Q] = d.lambda;
    let riemann = assemble_riemann(&dgamma, &gamma, &bracket);
    CurvatureReport::build(Basis::AdaptedFrame, gamma, riemann, &frame_metric(&d), h)
}

/// Γ̂^C_{AB} = θ^C_c X_A^a (∂_a X_B^c + Γ^c_{ab} X_B^b) from a coordinate-basis set.
pub fn frame_transport(cfg: &MetricConfig, pt: &ChartPoint, coord: &ChristoffelSet) -> Result<ChristoffelSet, TensorError> {
    let j = cfg.potential.jet(pt.x, pt.y, 2).map_err(GeometryError::from)?;
    let b = cfg.b;
    let f = adapted_frame(b, j.partial(1, 0), j.partial(0, 1));
    let theta = f.transpose().try_inverse().ok_or(TensorError::SingularMetric)?;
    let (pxx, pxy, pyy) = (j.partial(2, 0), j.partial(1, 1), j.partial(0, 2));
    // dframe[a] = ∂_a of the frame rows
    let mut dframe = [Matrix4::<f64>::zeros(); 4];
    for (a, (dpx, dpy)) in [(pxx, pxy), (pxy, pyy)].into_iter().enumerate() {
        dframe[a][(0, 2)] = dpy;
        dframe[a][(0, 3)] = b * dpy;
        dframe[a][(1, 2)] = -dpx;
        dframe[a][(1, 3)] = -b * dpx;
    }
    let cg = &coord.gamma;
    let mut out = [[[0.0; 4]; 4]; 4];
    for aa in 0..4 {
        for bb in 0..4 {
            // ∇_{X_A} X_B in coordinates
            let mut v = [0.0; 4];
            for (c, vc) in v.iter_mut().enumerate() {
                let mut s = 0.0;
                for a in 0..4 {
                    let xa = f[(aa, a)];
                    if xa == 0.0 {
                        continue;
                    }
                    let mut t = dframe[a][(bb, c)];
                    for bi in 0..4 {
                        t += cg[a][bi][c] * f[(bb, bi)];
                    }
                    s += xa * t;
                }
                *vc = s;
            }
            for cc in 0..4 {
                out[aa][bb][cc] = (0..4).map(|c| theta[(cc, c)] * v[c]).sum();
            }
        }
    }
    Ok(ChristoffelSet { basis: Basis::AdaptedFrame, gamma: out })
}

/// (n − 2)/(4σ²)(−2σσ_rr + σ_r² + ¼) for n = 4.
pub fn ricci_pp_expected(d: &FramePoint) -> f64 {
    2.0 / (4.0 * d.sigma * d.sigma) * (-2.0 * d.sigma * d.sigma_rr + d.sigma_r * d.sigma_r + 0.25)
}

/// Left-hand side of the common equation for Ric(Ê₁, Ê₁) and Ric(Ê₂, Ê₂) at β̃ = B
/// (needs fourth derivatives of φ).
pub fn common_expression(cfg: &MetricConfig, pt: &ChartPoint) -> Result<f64, TensorError> {
    let j = cfg.potential.jet(pt.x, pt.y, 4).map_err(GeometryError::from)?;
    let b = cfg.b;
    let (phi, px, py) = (j.value(), j.partial(1, 0), j.partial(0, 1));
    let (pxx, pyy) = (j.partial(2, 0), j.partial(0, 2));
    let lam = pxx + pyy;
    let lx = j.partial(3, 0) + j.partial(1, 2);
    let ly = j.partial(2, 1) + j.partial(0, 3);
    let lap_lam = j.partial(4, 0) + 2.0 * j.partial(2, 2) + j.partial(0, 4);
    let ric_n = -0.5 * (lam * lap_lam - lx * lx - ly * ly) / (lam * lam);
    let sp = sigma_partials(b, phi, pt.r);
    let s = sp.s + cfg.perturbation.sigma_shift;
    let (sx, sy) = (sp.p * px, sp.p * py);
    let sxx = sp.pp * px * px + sp.p * pxx;
    let syy = sp.pp * py * py + sp.p * pyy;
    let grad2 = px * px + py * py;
    Ok(s * s * ric_n - 0.5 * sxx * s + 0.5 * sx * sx - 0.5 * syy * s + 0.5 * sy * sy - b / 4.0 * lam * s
        - b * lam * s * s * sp.rr
        - b * b / 2.0 * s * sp.rr * grad2
        + b / 2.0 * (sy * py + sx * px)
        + b * b / 8.0 * grad2)
}
