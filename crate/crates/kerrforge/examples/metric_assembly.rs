//! Metric components, σ, β̃ and signature at a few chart points.

use kerrforge::geometry::{assemble_metric, expected_signature, ChartPoint, MetricConfig};
use kerrforge::potential::PotentialField;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = MetricConfig::new(1, -1.0, 1.0, -2.0, PotentialField::holomorphic(1, &[-1.0, 0.25])?)?;
    for p in [ChartPoint::new(0.1, 0.2, 0.0, 1.0), ChartPoint::new(-0.4, 0.3, 0.5, 2.5)] {
        let g = assemble_metric(&cfg, &p)?;
        println!("point {:?}", p.coords());
        println!("  sigma = {:.6}, beta = {:.6}, signature {:?}", g.sigma, g.beta_tilde, g.signature());
        for i in 0..4 {
            println!("  [{:>10.5} {:>10.5} {:>10.5} {:>10.5}]", g.g[(i, 0)], g.g[(i, 1)], g.g[(i, 2)], g.g[(i, 3)]);
        }
    }
    println!("expected signature for B = -1, kappa = 1: {:?}", expected_signature(-1.0, 1));

    let outside = MetricConfig::new(-1, 2.0, 0.0, 2.0, PotentialField::holomorphic(-1, &[1.0])?)?;
    match assemble_metric(&outside, &ChartPoint::new(1.2, 0.0, 0.0, 1.0)) {
        Ok(_) => println!("unexpected"),
        Err(e) => println!("outside the disk: {e}"),
    }
    Ok(())
}
