//! Dirichlet solve of the potential equation on a disk with the polar 5-point stencil.
//!
//! The stencil couples rings only through radial neighbours and its angular part is
//! circulant, so a discrete Fourier transform in w turns the 5-point system into one
//! tridiagonal system per angular mode. Each is solved directly.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::PotentialError;
use crate::jet::{CJet, Jet};

/// Dirichlet values φ(𝔯_o, w) given as (w, value) samples.
#[derive(Clone, Debug, PartialEq)]
pub struct Boundary {
    pub w: Vec<f64>,
    pub value: Vec<f64>,
    uniform: bool,
}

impl Boundary {
    pub fn new(w: Vec<f64>, value: Vec<f64>) -> Result<Self, PotentialError> {
        if w.is_empty() || w.len() != value.len() {
            return Err(PotentialError::EmptyCoefficients);
        }
        let n = w.len();
        let dw = TAU / n as f64;
        let uniform = w.iter().enumerate().all(|(j, &wj)| (wj - w[0] - j as f64 * dw).abs() < 1e-9);
        Ok(Self { w, value, uniform })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Self {
        let w: Vec<f64> = (0..n).map(|j| TAU * j as f64 / n as f64).collect();
        let value = w.iter().map(|&x| f(x)).collect();
        Self { w, value, uniform: true }
    }

    /// Sign check against sign(φ) = −κ; the data must not vanish identically.
    pub fn validate(&self, kappa: i32) -> Result<(), PotentialError> {
        let pos = self.value.iter().any(|&v| v > 0.0);
        let neg = self.value.iter().any(|&v| v < 0.0);
        if self.value.iter().any(|v| !v.is_finite()) {
            return Err(PotentialError::Parse { line: 0, msg: "non-finite boundary value".into() });
        }
        match (pos, neg) {
            (true, true) => Err(PotentialError::SignMixedBoundary),
            (false, false) => Err(PotentialError::ZeroBoundary),
            (true, false) if kappa > 0 => Err(PotentialError::WrongSignBoundary(kappa)),
            (false, true) if kappa < 0 => Err(PotentialError::WrongSignBoundary(kappa)),
            _ => Ok(()),
        }
    }

    /// Trigonometric interpolation for uniform samples, periodic linear otherwise.
    pub fn eval(&self, w: f64) -> f64 {
        let n = self.w.len();
        if n == 1 {
            return self.value[0];
        }
        if self.uniform {
            let t = w - self.w[0];
            let mut acc = 0.0;
            for k in 0..=n / 2 {
                let (mut re, mut im) = (0.0, 0.0);
                for (j, v) in self.value.iter().enumerate() {
                    let a = TAU * (k * j) as f64 / n as f64;
                    re += v * a.cos();
                    im -= v * a.sin();
                }
                let weight = if k == 0 || (n % 2 == 0 && k == n / 2) { 1.0 } else { 2.0 };
                let a = k as f64 * t;
                if n % 2 == 0 && k == n / 2 {
                    acc += weight * re * a.cos();
                } else {
                    acc += weight * (re * a.cos() - im * a.sin());
                }
            }
            return acc / n as f64;
        }
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| self.w[a].rem_euclid(TAU).total_cmp(&self.w[b].rem_euclid(TAU)));
        let ws: Vec<f64> = idx.iter().map(|&i| self.w[i].rem_euclid(TAU)).collect();
        let vs: Vec<f64> = idx.iter().map(|&i| self.value[i]).collect();
        let t = w.rem_euclid(TAU);
        let hi = ws.partition_point(|&x| x <= t);
        let (w0, v0, w1, v1) = if hi == 0 {
            (ws[n - 1] - TAU, vs[n - 1], ws[0], vs[0])
        } else if hi == n {
            (ws[n - 1], vs[n - 1], ws[0] + TAU, vs[0])
        } else {
            (ws[hi - 1], vs[hi - 1], ws[hi], vs[hi])
        };
        v0 + (v1 - v0) * (t - w0) / (w1 - w0)
    }
}

/// Polar-lattice solution. `values[i][j]` is φ at 𝔯 = i·radius/n_r, w = 2πj/n_theta;
/// ring 0 is the origin repeated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveGrid {
    pub kappa: i32,
    pub radius: f64,
    pub n_r: usize,
    pub n_theta: usize,
    pub values: Vec<Vec<f64>>,
    pub boundary: Vec<f64>,
}

fn phi_o(rr: f64) -> f64 {
    -(1.0 - rr * rr) / (1.0 + rr * rr)
}

/// Coefficients of u_rr + (1/𝔯 + b) u_r + u_ww/𝔯² + c u = 0 for the solved unknown.
fn coefficients(kappa: i32, rr: f64) -> (f64, f64) {
    if kappa > 0 {
        // u = φ/φ_o: Δu + (2/φ_o) φ_o' u_r = 0
        (8.0 * rr / ((1.0 + rr * rr) * (rr * rr - 1.0)), 0.0)
    } else {
        let q = 1.0 - rr * rr;
        (0.0, -8.0 / (q * q))
    }
}

fn thomas(
    sub: &[f64],
    diag: &[f64],
    sup: &[f64],
    rhs: &mut [Complex64],
    mode: usize,
) -> Result<(), PotentialError> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = diag[0];
    if !(d.abs() > 1e-300) || !d.is_finite() {
        return Err(PotentialError::Singular { mode, row: 0 });
    }
    c[0] = sup[0] / d;
    rhs[0] /= d;
    for i in 1..n {
        d = diag[i] - sub[i] * c[i - 1];
        if !(d.abs() > 1e-300) || !d.is_finite() {
            return Err(PotentialError::Singular { mode, row: i });
        }
        c[i] = sup[i] / d;
        let prev = rhs[i - 1];
        rhs[i] = (rhs[i] - prev * sub[i]) / d;
    }
    for i in (0..n - 1).rev() {
        let next = rhs[i + 1];
        rhs[i] -= next * c[i];
    }
    Ok(())
}

pub fn fd_elliptic_solve(
    kappa: i32,
    radius: f64,
    boundary: &Boundary,
    n_r: usize,
    n_theta: usize,
) -> Result<SolveGrid, PotentialError> {
    if kappa != 1 && kappa != -1 {
        return Err(PotentialError::Kappa(kappa));
    }
    if !(radius > 0.0 && radius < 1.0) {
        return Err(PotentialError::Radius(radius));
    }
    if n_r < 2 || n_theta < 4 {
        return Err(PotentialError::GridSize { n_r, n_theta });
    }
    boundary.validate(kappa)?;

    let h = radius / n_r as f64;
    let dth = TAU / n_theta as f64;
    let bvals: Vec<f64> = (0..n_theta).map(|j| boundary.eval(j as f64 * dth)).collect();
    let bscale = if kappa > 0 { 1.0 / phi_o(radius) } else { 1.0 };

    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n_theta);
    let inv = planner.plan_fft_inverse(n_theta);

    let mut gb: Vec<Complex64> = bvals.iter().map(|&v| Complex64::new(v * bscale, 0.0)).collect();
    fwd.process(&mut gb);

    // spectral[i][k], i = 0..=n_r
    let mut spectral = vec![vec![Complex64::new(0.0, 0.0); n_theta]; n_r + 1];
    spectral[n_r].copy_from_slice(&gb);

    let ring: Vec<(f64, f64, f64)> = (1..n_r)
        .map(|i| {
            let rr = i as f64 * h;
            let (b, c) = coefficients(kappa, rr);
            (rr, 1.0 / rr + b, c)
        })
        .collect();
    let c0 = coefficients(kappa, 0.0).1;

    for k in 0..n_theta {
        let lam = -4.0 / (dth * dth) * (std::f64::consts::PI * k as f64 / n_theta as f64).sin().powi(2);
        let with_origin = k == 0;
        let off = usize::from(with_origin);
        let m = n_r - 1 + off;
        let (mut sub, mut diag, mut sup) = (vec![0.0; m], vec![0.0; m], vec![0.0; m]);
        let mut rhs = vec![Complex64::new(0.0, 0.0); m];
        if with_origin {
            // 4(mean of ring 1 − u_0)/h² + c(0) u_0 = 0, written for n_theta·u_0
            diag[0] = c0 - 4.0 / (h * h);
            sup[0] = 4.0 / (h * h);
        }
        for (row, &(rr, beta, c)) in ring.iter().enumerate() {
            let p = row + off;
            let lo = 1.0 / (h * h) - beta / (2.0 * h);
            let hi = 1.0 / (h * h) + beta / (2.0 * h);
            diag[p] = -2.0 / (h * h) + lam / (rr * rr) + c;
            if row > 0 || with_origin {
                sub[p] = lo;
            }
            if row + 1 < ring.len() {
                sup[p] = hi;
            } else {
                rhs[p] -= gb[k] * hi;
            }
        }
        thomas(&sub, &diag, &sup, &mut rhs, k)?;
        for (p, v) in rhs.iter().enumerate() {
            spectral[p + 1 - off][k] = *v;
        }
    }

    let mut values = Vec::with_capacity(n_r + 1);
    for (i, row) in spectral.iter_mut().enumerate() {
        let mut buf = row.clone();
        inv.process(&mut buf);
        let rr = i as f64 * h;
        let back = if kappa > 0 { phi_o(rr) } else { 1.0 };
        let vals: Vec<f64> = if i == 0 {
            vec![row[0].re / n_theta as f64 * back; n_theta]
        } else if i == n_r {
            bvals.clone()
        } else {
            buf.iter().map(|c| c.re / n_theta as f64 * back).collect()
        };
        values.push(vals);
    }
    Ok(SolveGrid { kappa, radius, n_r, n_theta, values, boundary: bvals })
}

impl SolveGrid {
    pub fn h(&self) -> f64 {
        self.radius / self.n_r as f64
    }

    pub fn node(&self, i: usize, j: usize) -> (f64, f64) {
        let rr = i as f64 * self.h();
        let w = TAU * j as f64 / self.n_theta as f64;
        (rr * w.cos(), rr * w.sin())
    }

    /// Max over interior nodes of |Δ_h φ + 8κφ/(1+κ𝔯²)²| with the plain polar stencil.
    pub fn max_pde_residual(&self) -> f64 {
        let h = self.h();
        let dth = TAU / self.n_theta as f64;
        let k = self.kappa as f64;
        let nt = self.n_theta;
        let v = &self.values;
        let mean1 = v[1].iter().sum::<f64>() / nt as f64;
        let mut worst = (4.0 * (mean1 - v[0][0]) / (h * h) + 8.0 * k * v[0][0]).abs();
        for i in 1..self.n_r {
            let rr = i as f64 * h;
            let q = 1.0 + k * rr * rr;
            for j in 0..nt {
                let (jm, jp) = ((j + nt - 1) % nt, (j + 1) % nt);
                let lap = (v[i + 1][j] - 2.0 * v[i][j] + v[i - 1][j]) / (h * h)
                    + (v[i + 1][j] - v[i - 1][j]) / (2.0 * h * rr)
                    + (v[i][jp] - 2.0 * v[i][j] + v[i][jm]) / (rr * rr * dth * dth);
                worst = worst.max((lap + 8.0 * k * v[i][j] / (q * q)).abs());
            }
        }
        worst
    }

    pub fn to_potential(&self) -> GridPotential {
        GridPotential::new(self.clone())
    }
}

const MAX_GRID_MODE: usize = 12;

/// Smooth interpolant of a [`SolveGrid`]: φ ≈ Σ_k Re(A_k(𝔯²) zᵏ), with A_k interpolated
/// by cubic Lagrange polynomials in 𝔯² through the ring values.
#[derive(Clone, Debug, PartialEq)]
pub struct GridPotential {
    grid: SolveGrid,
    /// (k, nodes s_i, values A_k(s_i))
    modes: Vec<(usize, Vec<f64>, Vec<Complex64>)>,
}

impl GridPotential {
    pub fn new(grid: SolveGrid) -> Self {
        let nt = grid.n_theta;
        let h = grid.h();
        let mut planner = FftPlanner::<f64>::new();
        let fwd = planner.plan_fft_forward(nt);
        let spectra: Vec<Vec<Complex64>> = grid
            .values
            .iter()
            .map(|row| {
                let mut b: Vec<Complex64> = row.iter().map(|&v| Complex64::new(v, 0.0)).collect();
                fwd.process(&mut b);
                b
            })
            .collect();
        let top = &spectra[grid.n_r];
        let amp = top.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut modes = Vec::new();
        for k in 0..=(nt / 2).min(MAX_GRID_MODE) {
            if top[k].norm() <= 1e-12 * amp && k > 0 {
                continue;
            }
            let w = if k == 0 || (nt % 2 == 0 && k == nt / 2) { 1.0 } else { 2.0 } / nt as f64;
            let first = if k == 0 { 0 } else { 1 };
            let mut s = Vec::new();
            let mut a = Vec::new();
            for (i, spec) in spectra.iter().enumerate().skip(first) {
                let rr = i as f64 * h;
                let c = spec[k] * w / rr.powi(k as i32);
                s.push(rr * rr);
                a.push(c);
            }
            modes.push((k, s, a));
        }
        Self { grid, modes }
    }

    pub fn kappa(&self) -> i32 {
        self.grid.kappa
    }

    pub fn grid(&self) -> &SolveGrid {
        &self.grid
    }

    pub fn jet(&self, x: f64, y: f64, order: usize) -> Result<Jet, PotentialError> {
        let rr = x.hypot(y);
        if rr > self.grid.radius * (1.0 + 1e-12) {
            return Err(PotentialError::OutsideRadius { r: rr, radius: self.grid.radius });
        }
        let xj = Jet::var_x(x, order);
        let yj = Jet::var_y(y, order);
        let s = xj * xj + yj * yj;
        let z = CJet::z(x, y, order);
        let mut phi = Jet::constant(0.0, order);
        for (k, nodes, vals) in &self.modes {
            let n = nodes.len();
            let pos = nodes.partition_point(|&v| v <= s.value());
            let start = pos.saturating_sub(2).min(n.saturating_sub(4));
            let end = (start + 4).min(n);
            let (mut re, mut im) = (Jet::constant(0.0, order), Jet::constant(0.0, order));
            for m in start..end {
                let mut basis = Jet::constant(1.0, order);
                for l in start..end {
                    if l != m {
                        basis = basis * s.add_const(-nodes[l]).scale(1.0 / (nodes[m] - nodes[l]));
                    }
                }
                re += basis.scale(vals[m].re);
                im += basis.scale(vals[m].im);
            }
            let mut zk = CJet::one(order);
            for _ in 0..*k {
                zk = zk.mul(&z);
            }
            phi += re * zk.re - im * zk.im;
        }
        Ok(phi)
    }
}
