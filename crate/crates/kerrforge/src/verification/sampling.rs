//! Low-discrepancy sample points: a Halton sequence with a seeded random shift.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{ChartPoint, SphericalPoint};

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * f;
        i /= base;
        f *= inv;
    }
    out
}

/// Shifted Halton points in the unit cube; the same seed always gives the same stream.
#[derive(Clone, Debug)]
pub struct Halton {
    shift: Vec<f64>,
    index: u64,
}

impl Halton {
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!(dim <= PRIMES.len(), "at most {} dimensions", PRIMES.len());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self { shift: (0..dim).map(|_| rng.random::<f64>()).collect(), index: 0 }
    }

    pub fn next_point(&mut self) -> Vec<f64> {
        self.index += 1;
        self.shift
            .iter()
            .zip(PRIMES)
            .map(|(s, p)| (radical_inverse(self.index, p) + s).fract())
            .collect()
    }
}

fn lerp(lo: f64, hi: f64, u: f64) -> f64 {
    lo + (hi - lo) * u
}

/// Box for chart samples: (x, y) uniform in a disk, v and r in intervals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartRanges {
    pub radius: f64,
    pub v: (f64, f64),
    pub r: (f64, f64),
}

impl ChartRanges {
    pub fn for_kappa(kappa: i32) -> Self {
        let radius = if kappa > 0 { 0.8 } else { 0.7 };
        Self { radius, v: (-1.0, 1.0), r: (0.5, 3.0) }
    }
}

/// Draws chart points until `n` pass `accept`, giving up after `100·n` draws.
pub fn chart_samples(
    n: usize,
    seed: u64,
    ranges: ChartRanges,
    accept: impl Fn(&ChartPoint) -> bool,
) -> Option<Vec<ChartPoint>> {
    let mut h = Halton::new(4, seed);
    let mut out = Vec::with_capacity(n);
    for _ in 0..100 * n.max(1) {
        if out.len() == n {
            break;
        }
        let u = h.next_point();
        let rr = ranges.radius * u[0].sqrt();
        let w = TAU * u[1];
        let p = ChartPoint::new(rr * w.cos(), rr * w.sin(), lerp(ranges.v.0, ranges.v.1, u[2]), lerp(ranges.r.0, ranges.r.1, u[3]));
        if accept(&p) {
            out.push(p);
        }
    }
    (out.len() == n).then_some(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphericalRanges {
    pub xi: (f64, f64),
    pub rho: (f64, f64),
    pub v: (f64, f64),
}

impl Default for SphericalRanges {
    /// Upper hemisphere away from the pole and the equator.
    fn default() -> Self {
        Self { xi: (0.2, 1.35), rho: (1.5, 6.0), v: (-1.0, 1.0) }
    }
}

pub fn spherical_samples(n: usize, seed: u64, ranges: SphericalRanges) -> Vec<SphericalPoint> {
    let mut h = Halton::new(4, seed);
    (0..n)
        .map(|_| {
            let u = h.next_point();
            SphericalPoint::new(
                lerp(ranges.xi.0, ranges.xi.1, u[0]),
                lerp(-PI, PI, u[1]),
                lerp(ranges.rho.0, ranges.rho.1, u[2]),
                lerp(ranges.v.0, ranges.v.1, u[3]),
            )
        })
        .collect()
}
