//! Closed-form frame connection against finite differences, and the two Ricci paths.

use kerrforge::geometry::{assemble_metric, ChartPoint, MetricConfig, Perturbation};
use kerrforge::potential::PotentialField;
use kerrforge::tensor::{christoffel_closed, christoffel_fd, frame_transport, DEFAULT_FD_STEP};
use kerrforge::verification::compare_paths;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = MetricConfig::new(-1, 1.5, 0.0, 2.0, PotentialField::holomorphic(-1, &[1.0, 0.1, 0.05])?)?
        .with_perturbation(Perturbation { beta_scale: 1.1, sigma_shift: 0.2 });
    let pt = ChartPoint::new(0.2, -0.1, 0.3, 1.4);

    let metric = |c: [f64; 4]| assemble_metric(&cfg, &ChartPoint::from_coords(c)).map(|m| m.g);
    let coord = christoffel_fd(&metric, pt.coords(), DEFAULT_FD_STEP)?;
    let moved = frame_transport(&cfg, &pt, &coord)?;
    let closed = christoffel_closed(&cfg, &pt)?;
    println!("frame connection: max |closed - transported FD| = {:.3e}", closed.max_diff(&moved));

    let cmp = compare_paths(&cfg, &pt, DEFAULT_FD_STEP)?;
    println!("Ricci, frame path vs coordinate path: relative {:.3e} (max |Ric| {:.4})", cmp.ricci_relative, cmp.ricci_frame_max);
    println!("Ric_pp against its closed form: {:.3e}", cmp.ricci_pp);
    Ok(())
}
