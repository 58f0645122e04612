//! Series, generating-function and spherical potentials, and their equation residuals.

use kerrforge::potential::{
    series_to_holomorphic, spherical_potential, spherical_to_holomorphic, PotentialField, SeriesCoefficients,
    SeriesPotential, SphereCoefficients,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let coeffs = SeriesCoefficients::from_rows(&[(0, 1.0, 0.0), (1, 0.2, -0.1), (2, 0.05, 0.0)])?;
    println!("series on |z| = 0.8 as F(z): {:?}", series_to_holomorphic(1, 0.8, &coeffs));
    let series = PotentialField::Series(SeriesPotential::new(1, 0.8, coeffs)?);

    let quad = PotentialField::holomorphic(-1, &[1.0, 0.0, 0.125])?;

    let sphere = SphereCoefficients::degree_one(0.4, 0.3, -0.2);
    let from_sphere = spherical_to_holomorphic(&sphere);
    println!("degree-one spherical mode as F(z): {from_sphere:?}");
    println!("value at (xi, psi) = (0.7, 1.1): {:.6}", spherical_potential(&sphere, 0.7, 1.1)?);

    for (name, f) in [("series", &series), ("1 + z^2/8", &quad)] {
        for (x, y) in [(0.0, 0.0), (0.3, -0.2), (-0.5, 0.4)] {
            let d = f.derivs(x, y)?;
            println!("{name:>10} ({x:>4}, {y:>4}): phi = {:>10.6}  residual = {:.2e}", d.phi, f.pde_residual(x, y)?);
        }
    }
    Ok(())
}
