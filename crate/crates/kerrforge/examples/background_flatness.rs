//! The m = 0 background is flat with ∂_T timelike or spacelike according to sign B.

use kerrforge::geometry::{assemble_metric, MetricConfig};
use kerrforge::potential::PotentialField;
use kerrforge::tensor::DEFAULT_FD_STEP;
use kerrforge::verification::sampling::{chart_samples, ChartRanges};
use kerrforge::verification::verify_background_flat;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (kappa, f) in [(1, vec![-1.0]), (1, vec![-0.8, 0.0, 0.1]), (-1, vec![0.6, 0.2])] {
        for b in [-1.0, 2.0] {
            let cfg = MetricConfig::new(kappa, b, 0.0, 2.0, PotentialField::holomorphic(kappa, &f)?)?;
            let pts = chart_samples(30, 2, ChartRanges::for_kappa(kappa), |p| assemble_metric(&cfg, p).is_ok())
                .ok_or("no admissible points")?;
            let rep = verify_background_flat(&cfg, &pts, 1e-6, DEFAULT_FD_STEP)?;
            println!("kappa = {kappa:>2}, B = {b:>4}, F = {f:?}: residual {:.2e} pass = {}", rep.max_residual, rep.pass);
        }
    }
    Ok(())
}
