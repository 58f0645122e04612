use nalgebra::{Matrix4, SMatrix};

use super::{assemble_riemann, flatten_gamma, unflatten_gamma, Basis, ChristoffelSet, CurvatureReport, Gamma, Riemann, TensorError};
use crate::geometry::GeometryError;

pub type MetricFn<'a> = dyn Fn([f64; 4]) -> Result<Matrix4<f64>, GeometryError> + Sync + 'a;

pub(crate) fn axis_step(p: &[f64; 4], a: usize, h: f64) -> f64 {
    h * p[a].abs().max(1.0)
}

fn shifted(p: &[f64; 4], a: usize, d: f64) -> [f64; 4] {
    let mut q = *p;
    q[a] += d;
    q
}

/// Fourth-order central difference along axis `a` with one Richardson level.
pub(crate) fn diff<const N: usize>(
    f: &dyn Fn([f64; 4]) -> Result<[f64; N], TensorError>,
    p: &[f64; 4],
    a: usize,
    h: f64,
) -> Result<[f64; N], TensorError> {
    let d4 = |s: f64| -> Result<[f64; N], TensorError> {
        let fp2 = f(shifted(p, a, 2.0 * s))?;
        let fp1 = f(shifted(p, a, s))?;
        let fm1 = f(shifted(p, a, -s))?;
        let fm2 = f(shifted(p, a, -2.0 * s))?;
        let mut out = [0.0; N];
        for i in 0..N {
            out[i] = (-fp2[i] + 8.0 * fp1[i] - 8.0 * fm1[i] + fm2[i]) / (12.0 * s);
        }
        Ok(out)
    };
    let s = axis_step(p, a, h);
    let coarse = d4(s)?;
    let fine = d4(s / 2.0)?;
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = (16.0 * fine[i] - coarse[i]) / 15.0;
    }
    Ok(out)
}

fn flat16(m: &Matrix4<f64>) -> [f64; 16] {
    let mut o = [0.0; 16];
    for i in 0..4 {
        for j in 0..4 {
            o[4 * i + j] = m[(i, j)];
        }
    }
    o
}

fn eval_metric(metric: &MetricFn, p: [f64; 4]) -> Result<Matrix4<f64>, TensorError> {
    metric(p).map_err(TensorError::Stencil)
}

pub fn christoffel_fd(metric: &MetricFn, p: [f64; 4], h: f64) -> Result<ChristoffelSet, TensorError> {
    let g = metric(p)?;
    let gi = g.try_inverse().ok_or(TensorError::SingularMetric)?;
    let f = |q: [f64; 4]| eval_metric(metric, q).map(|m| flat16(&m));
    let mut dg = [[0.0; 16]; 4];
    for (a, slot) in dg.iter_mut().enumerate() {
        *slot = diff(&f, &p, a, h)?;
    }
    let dg_at = |a: usize, i: usize, j: usize| dg[a][4 * i + j];
    let mut gamma = [[[0.0; 4]; 4]; 4];
    for a in 0..4 {
        for b in a..4 {
            for c in 0..4 {
                let v: f64 = (0..4)
                    .map(|d| gi[(c, d)] * (dg_at(a, d, b) + dg_at(b, d, a) - dg_at(d, a, b)))
                    .sum::<f64>()
                    * 0.5;
                gamma[a][b][c] = v;
                gamma[b][a][c] = v;
            }
        }
    }
    Ok(ChristoffelSet { basis: Basis::Coordinate, gamma })
}

/// FD Christoffels, then FD Riemann, then contraction.
pub fn ricci_coordinate_fd(metric: &MetricFn, p: [f64; 4], h: f64) -> Result<CurvatureReport, TensorError> {
    let g = metric(p)?;
    let gamma = christoffel_fd(metric, p, h)?.gamma;
    let f = |q: [f64; 4]| christoffel_fd(metric, q, h).map(|c| flatten_gamma(&c.gamma));
    let mut dgamma: [Gamma; 4] = [[[[0.0; 4]; 4]; 4]; 4];
    for (a, slot) in dgamma.iter_mut().enumerate() {
        *slot = unflatten_gamma(&diff(&f, &p, a, h)?);
    }
    let zero = [[[0.0; 4]; 4]; 4];
    let riemann = assemble_riemann(&dgamma, &gamma, &zero);
    CurvatureReport::build(Basis::Coordinate, gamma, riemann, &g, h)
}

/// Max |∂_a∂_b g_cd| from second-order stencils with step 4h.
pub fn metric_scale(metric: &MetricFn, p: [f64; 4], h: f64) -> Result<f64, TensorError> {
    let g0 = eval_metric(metric, p)?;
    let mut worst: f64 = 0.0;
    for a in 0..4 {
        let sa = 4.0 * axis_step(&p, a, h);
        for b in a..4 {
            let sb = 4.0 * axis_step(&p, b, h);
            let d = if a == b {
                let gp = eval_metric(metric, shifted(&p, a, sa))?;
                let gm = eval_metric(metric, shifted(&p, a, -sa))?;
                (gp - g0 * 2.0 + gm) / (sa * sa)
            } else {
                let pp = eval_metric(metric, shifted(&shifted(&p, a, sa), b, sb))?;
                let pm = eval_metric(metric, shifted(&shifted(&p, a, sa), b, -sb))?;
                let mp = eval_metric(metric, shifted(&shifted(&p, a, -sa), b, sb))?;
                let mm = eval_metric(metric, shifted(&shifted(&p, a, -sa), b, -sb))?;
                (pp - pm - mp + mm) / (4.0 * sa * sb)
            };
            worst = worst.max(d.amax());
        }
    }
    Ok(worst)
}

fn raise_all(low: &Riemann, gi: &Matrix4<f64>) -> Riemann {
    let mut cur = *low;
    for slot in 0..4 {
        let mut next = [[[[0.0; 4]; 4]; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let idx = [a, b, c, d];
                        let mut v = 0.0;
                        for e in 0..4 {
                            let mut j = idx;
                            j[slot] = e;
                            v += gi[(idx[slot], e)] * cur[j[0]][j[1]][j[2]][j[3]];
                        }
                        next[a][b][c][d] = v;
                    }
                }
            }
        }
        cur = next;
    }
    cur
}

/// R_{abcd}R^{abcd}, with components in the basis whose metric is `g`.
pub fn kretschmann(riemann: &Riemann, g: &Matrix4<f64>) -> Result<f64, TensorError> {
    let gi = g.try_inverse().ok_or(TensorError::SingularMetric)?;
    let low = super::lower_last(riemann, g);
    let up = raise_all(&low, &gi);
    let mut k = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    k += low[a][b][c][d] * up[a][b][c][d];
                }
            }
        }
    }
    Ok(k)
}

/// R_{ab}{}^{cd} R_{cd}{}^{ef} R_{ef}{}^{ab}; odd in the overall scale of the curvature.
pub fn cubic_invariant(riemann: &Riemann, g: &Matrix4<f64>) -> Result<f64, TensorError> {
    let gi = g.try_inverse().ok_or(TensorError::SingularMetric)?;
    let low = super::lower_last(riemann, g);
    let mut m = SMatrix::<f64, 16, 16>::zeros();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let mut v = 0.0;
                    for e in 0..4 {
                        for f in 0..4 {
                            v += low[a][b][e][f] * gi[(e, c)] * gi[(f, d)];
                        }
                    }
                    m[(4 * a + b, 4 * c + d)] = v;
                }
            }
        }
    }
    Ok((m * m * m).trace())
}
