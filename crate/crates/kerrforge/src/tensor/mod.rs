//! Connection and curvature: a coordinate finite-difference pipeline and the closed-form
//! adapted-frame connection, contracted by the same Riemann assembly.
//!
//! Conventions: `gamma[a][b][c]` is Γ^c_{ab} with ∇_{X_a}X_b = Γ^c_{ab}X_c, and
//! `riemann[a][b][c][d]` is R_{abc}{}^d with R(X_a, X_b)X_c = R_{abc}{}^d X_d and
//! R(X, Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_{[X,Y]}. Ricci is Ric_{bc} = R_{abc}{}^a.

mod closed;
mod fd;

use nalgebra::Matrix4;
use thiserror::Error;

use crate::geometry::GeometryError;

pub use closed::{
    christoffel_closed, common_expression, frame_metric, frame_transport, riemann_frame, ricci_pp_expected,
    FramePoint,
};
pub use fd::{christoffel_fd, cubic_invariant, kretschmann, metric_scale, ricci_coordinate_fd, MetricFn};

pub type Gamma = [[[f64; 4]; 4]; 4];
pub type Riemann = [[[[f64; 4]; 4]; 4]; 4];

pub const DEFAULT_FD_STEP: f64 = 1e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TensorError {
    #[error("metric is singular at the point")]
    SingularMetric,
    #[error("stencil left the admissible domain: {0}")]
    Stencil(GeometryError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("degenerate Kähler metric: |lambda| = {0:e}")]
    DegenerateLambda(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    Coordinate,
    AdaptedFrame,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChristoffelSet {
    pub basis: Basis,
    pub gamma: Gamma,
}

impl ChristoffelSet {
    pub fn max_abs(&self) -> f64 {
        self.gamma.iter().flatten().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_diff(&self, other: &ChristoffelSet) -> f64 {
        let mut w: f64 = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    w = w.max((self.gamma[a][b][c] - other.gamma[a][b][c]).abs());
                }
            }
        }
        w
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureReport {
    pub basis: Basis,
    pub christoffel: ChristoffelSet,
    pub riemann: Riemann,
    pub ricci: Matrix4<f64>,
    pub ricci_norm: f64,
    pub riemann_norm: f64,
    pub kretschmann: f64,
    /// R_{ab}{}^{cd} R_{cd}{}^{ef} R_{ef}{}^{ab}
    pub cubic: f64,
    pub fd_step: f64,
}

impl CurvatureReport {
    fn build(basis: Basis, gamma: Gamma, riemann: Riemann, g: &Matrix4<f64>, fd_step: f64) -> Result<Self, TensorError> {
        let mut ricci = Matrix4::zeros();
        for b in 0..4 {
            for c in 0..4 {
                ricci[(b, c)] = (0..4).map(|a| riemann[a][b][c][a]).sum();
            }
        }
        let ricci_norm = ricci.amax();
        let riemann_norm = riemann.iter().flatten().flatten().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        let kretschmann = kretschmann(&riemann, g)?;
        let cubic = cubic_invariant(&riemann, g)?;
        Ok(Self {
            basis,
            christoffel: ChristoffelSet { basis, gamma },
            riemann,
            ricci,
            ricci_norm,
            riemann_norm,
            kretschmann,
            cubic,
            fd_step,
        })
    }

    /// max |R_{abc}^d + R_{bac}^d|
    pub fn antisymmetry_defect(&self) -> f64 {
        let mut w: f64 = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        w = w.max((self.riemann[a][b][c][d] + self.riemann[b][a][c][d]).abs());
                    }
                }
            }
        }
        w
    }

    /// Max cyclic sum R_{abcd} + R_{bcad} + R_{cabd} with the last index lowered by `g`.
    pub fn bianchi_defect(&self, g: &Matrix4<f64>) -> f64 {
        let low = lower_last(&self.riemann, g);
        let mut w: f64 = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        w = w.max((low[a][b][c][d] + low[b][c][a][d] + low[c][a][b][d]).abs());
                    }
                }
            }
        }
        w
    }
}

pub(crate) fn lower_last(r: &Riemann, g: &Matrix4<f64>) -> Riemann {
    let mut out = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    out[a][b][c][d] = (0..4).map(|e| r[a][b][c][e] * g[(e, d)]).sum();
                }
            }
        }
    }
    out
}

/// R_{ABC}^D = X_A(Γ^D_{BC}) − X_B(Γ^D_{AC}) + Γ^F_{BC}Γ^D_{AF} − Γ^F_{AC}Γ^D_{BF} − c^F_{AB}Γ^D_{FC},
/// with `dgamma[a]` = X_a(Γ) and `bracket[a][b][f]` = c^f_{ab}.
pub(crate) fn assemble_riemann(dgamma: &[Gamma; 4], gamma: &Gamma, bracket: &Gamma) -> Riemann {
    let mut r = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let mut v = dgamma[a][b][c][d] - dgamma[b][a][c][d];
                    for f in 0..4 {
                        v += gamma[b][c][f] * gamma[a][f][d] - gamma[a][c][f] * gamma[b][f][d];
                        v -= bracket[a][b][f] * gamma[f][c][d];
                    }
                    r[a][b][c][d] = v;
                }
            }
        }
    }
    r
}

pub(crate) fn flatten_gamma(g: &Gamma) -> [f64; 64] {
    let mut out = [0.0; 64];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                out[16 * a + 4 * b + c] = g[a][b][c];
            }
        }
    }
    out
}

pub(crate) fn unflatten_gamma(v: &[f64]) -> Gamma {
    let mut g = [[[0.0; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                g[a][b][c] = v[16 * a + 4 * b + c];
            }
        }
    }
    g
}
