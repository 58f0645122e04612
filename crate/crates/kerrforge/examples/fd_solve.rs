//! Dirichlet solve on a disk and the observed convergence order under refinement.

use kerrforge::potential::{fd_elliptic_solve, series_potential, Boundary, SeriesCoefficients};
use kerrforge::verification::verify_pde_convergence;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (kappa, radius) = (1, 0.8);
    let coeffs = SeriesCoefficients::from_rows(&[(0, 1.0, 0.0), (1, 0.2, 0.1), (2, 0.05, -0.03)])?;

    let n_theta = 128;
    let b = Boundary::from_fn(n_theta, |w| series_potential(kappa, radius, &coeffs, radius, w).map(|d| d.phi).unwrap_or(f64::NAN));
    let grid = fd_elliptic_solve(kappa, radius, &b, 64, n_theta)?;
    println!("64 x {n_theta} lattice: max stencil residual {:.3e}", grid.max_pde_residual());
    let centre = series_potential(kappa, radius, &coeffs, 0.0, 0.0)?.phi;
    println!("phi(0): lattice {:.8}, series {:.8}", grid.values[0][0], centre);

    let (rep, study) = verify_pde_convergence(kappa, radius, &coeffs, &[16, 32, 64, 128], 0.2)?;
    for (n, e) in study.rings.iter().zip(&study.errors) {
        println!("n_r = {n:>3}: max error {e:.3e}");
    }
    println!("orders {:?} -> {}", study.orders, if rep.pass { "second order" } else { "off" });
    Ok(())
}
