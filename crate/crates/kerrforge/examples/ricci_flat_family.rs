//! Ricci flatness of the B = −1 family for several masses, and a detuned control.

use kerrforge::geometry::{assemble_metric, MetricConfig, Perturbation};
use kerrforge::potential::PotentialField;
use kerrforge::tensor::DEFAULT_FD_STEP;
use kerrforge::verification::sampling::{chart_samples, ChartRanges};
use kerrforge::verification::verify_ricci_flat;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (kappa, f) in [(1, vec![-1.0, 0.25]), (-1, vec![1.0, 0.0, 0.125])] {
        for m in [0.3, 1.0, 3.0] {
            let cfg = MetricConfig::new(kappa, -1.0, m, -2.0, PotentialField::holomorphic(kappa, &f)?)?;
            let pts = chart_samples(40, 1, ChartRanges::for_kappa(kappa), |p| assemble_metric(&cfg, p).is_ok())
                .ok_or("no admissible points")?;
            let rep = verify_ricci_flat(&cfg, &pts, 1e-6, DEFAULT_FD_STEP)?;
            println!("kappa = {kappa:>2}, m = {m}: max |Ric|/scale = {:.2e} pass = {}", rep.max_residual, rep.pass);
        }
    }
    let cfg = MetricConfig::new(1, -1.0, 1.0, -2.0, PotentialField::holomorphic(1, &[-1.0])?)?
        .with_perturbation(Perturbation { beta_scale: 1.01, sigma_shift: 0.0 });
    let pts = chart_samples(40, 1, ChartRanges::for_kappa(1), |p| assemble_metric(&cfg, p).is_ok()).ok_or("no points")?;
    let rep = verify_ricci_flat(&cfg, &pts, 1e-6, DEFAULT_FD_STEP)?;
    println!("beta scaled by 1.01: max residual {:.2e} pass = {}", rep.max_residual, rep.pass);
    println!("{}", rep.to_json_line());
    Ok(())
}
