//! Truncated bivariate Taylor jets in (x, y), total degree at most 4.
//!
//! Coefficient `(i, j)` multiplies `dx^i dy^j`; partial derivatives are
//! recovered with [`Jet::partial`].

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

pub const MAX_ORDER: usize = 4;
const LEN: usize = 15;

#[inline]
const fn idx(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

const FACT: [f64; 5] = [1.0, 1.0, 2.0, 6.0, 24.0];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    c: [f64; LEN],
    order: usize,
}

impl Jet {
    pub fn constant(v: f64, order: usize) -> Self {
        let mut c = [0.0; LEN];
        c[0] = v;
        Self { c, order: order.min(MAX_ORDER) }
    }

    pub fn var_x(x: f64, order: usize) -> Self {
        let mut j = Self::constant(x, order);
        if j.order >= 1 {
            j.c[idx(1, 0)] = 1.0;
        }
        j
    }

    pub fn var_y(y: f64, order: usize) -> Self {
        let mut j = Self::constant(y, order);
        if j.order >= 1 {
            j.c[idx(0, 1)] = 1.0;
        }
        j
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// ∂ˣⁱ∂ʸʲ at the expansion point. Orders above the jet's truncation give NaN.
    pub fn partial(&self, i: usize, j: usize) -> f64 {
        if i + j > self.order {
            return f64::NAN;
        }
        self.c[idx(i, j)] * FACT[i] * FACT[j]
    }

    pub fn scale(mut self, s: f64) -> Self {
        for v in self.c.iter_mut() {
            *v *= s;
        }
        self
    }

    pub fn add_const(mut self, s: f64) -> Self {
        self.c[0] += s;
        self
    }

    pub fn recip(&self) -> Self {
        let a0 = self.c[0];
        let mut u = *self;
        u.c[0] = 0.0;
        let u = u.scale(1.0 / a0);
        // 1/(a0 (1+u)) = (1/a0) Σ (-u)^k, Horner form
        let mut t = Self::constant(1.0, self.order);
        for _ in 0..self.order {
            t = Self::constant(1.0, self.order) - u * t;
        }
        t.scale(1.0 / a0)
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut out = Self::constant(1.0, self.order);
        for _ in 0..n {
            out = out * *self;
        }
        out
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, rhs: Jet) -> Jet {
        self.order = self.order.min(rhs.order);
        for k in 0..LEN {
            self.c[k] += rhs.c[k];
        }
        self
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, rhs: Jet) {
        *self = *self + rhs;
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut c = [0.0; LEN];
        for d1 in 0..=order {
            for j1 in 0..=d1 {
                let a = self.c[idx(d1 - j1, j1)];
                if a == 0.0 {
                    continue;
                }
                for d2 in 0..=(order - d1) {
                    for j2 in 0..=d2 {
                        c[idx(d1 - j1 + d2 - j2, j1 + j2)] += a * rhs.c[idx(d2 - j2, j2)];
                    }
                }
            }
        }
        Jet { c, order }
    }
}

/// Complex value carried as a pair of real jets.
#[derive(Clone, Copy, Debug)]
pub struct CJet {
    pub re: Jet,
    pub im: Jet,
}

impl CJet {
    pub fn z(x: f64, y: f64, order: usize) -> Self {
        Self { re: Jet::var_x(x, order), im: Jet::var_y(y, order) }
    }

    pub fn one(order: usize) -> Self {
        Self { re: Jet::constant(1.0, order), im: Jet::constant(0.0, order) }
    }

    pub fn mul(&self, o: &CJet) -> CJet {
        CJet { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_partials() {
        let x = Jet::var_x(0.3, 4);
        let y = Jet::var_y(-0.7, 4);
        // f = x^3 y
        let f = x * x * x * y;
        assert!((f.partial(0, 0) - 0.027 * -0.7).abs() < 1e-15);
        assert!((f.partial(3, 0) - 6.0 * -0.7).abs() < 1e-13);
        assert!((f.partial(3, 1) - 6.0).abs() < 1e-13);
        assert!((f.partial(2, 1) - 6.0 * 0.3).abs() < 1e-13);
        assert_eq!(f.partial(4, 0), 0.0);
    }

    #[test]
    fn reciprocal_matches_closed_form() {
        // 1/(1+x^2+y^2) at (0.2, 0.1)
        let x = Jet::var_x(0.2, 4);
        let y = Jet::var_y(0.1, 4);
        let f = (x * x + y * y).add_const(1.0).recip();
        let s: f64 = 1.0 + 0.04 + 0.01;
        assert!((f.value() - 1.0 / s).abs() < 1e-15);
        assert!((f.partial(1, 0) + 2.0 * 0.2 / (s * s)).abs() < 1e-14);
        let fxx = -2.0 / (s * s) + 8.0 * 0.04 / (s * s * s);
        assert!((f.partial(2, 0) - fxx).abs() < 1e-13);
    }

    #[test]
    fn truncation_respected() {
        let x = Jet::var_x(1.0, 2);
        assert!(x.powi(3).partial(3, 0).is_nan());
    }
}
