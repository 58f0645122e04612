use num_complex::Complex64;

use kerrforge::geometry::{beta_tilde_o, classical_kerr_metric, sigma_of, SphericalPoint};
use kerrforge::potential::{holomorphic_potential, radial_profile};
use kerrforge::tensor::{ricci_coordinate_fd, DEFAULT_FD_STEP};
use kerrforge::verification::{nogo_discriminant, verify_kerr_match};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn frozen_profiles_and_coefficients() {
    assert!(close(radial_profile(1, 1, 0.5), 0.4, 1e-15));
    assert!(close(radial_profile(-1, 0, 0.5), 5.0 / 3.0, 1e-15));
    assert!(close(radial_profile(1, 2, 0.5), 0.25 * (1.0 - 2.0 * 0.25 / (1.25 * 3.0)), 1e-15));
    assert!(close(sigma_of(-1.0, -1.0, 2.0), -1.25, 1e-15));
    assert!(close(sigma_of(2.0, -0.5, 1.0), 0.5, 1e-15));
    assert!(close(beta_tilde_o(-2.0, -1.0, 2.0), -0.8, 1e-15));
}

#[test]
fn frozen_special_solution() {
    let d = holomorphic_potential(1, &[Complex64::new(-1.0, 0.0)], Complex64::new(0.5, 0.0)).unwrap();
    assert!(close(d.phi, -0.6, 1e-15));
    let d = holomorphic_potential(1, &[Complex64::new(-1.0, 0.0)], Complex64::new(0.0, 0.0)).unwrap();
    assert!(close(d.phi, -1.0, 1e-15));
}

#[test]
fn frozen_discriminants() {
    let table: Vec<i64> = (4..=10).map(|n| nogo_discriminant(n).unwrap()).collect();
    assert_eq!(table, [0, 15, 36, 63, 96, 135, 180]);
}

#[test]
fn kerr_kretschmann_closed_form() {
    let (m, a) = (1.0, 0.7);
    for &(xi, rho) in &[(0.4, 2.5), (1.0, 3.0), (1.3, 4.5)] {
        let sp = SphericalPoint::new(xi, 0.3, rho, 0.2);
        let rep = ricci_coordinate_fd(
            &|c| classical_kerr_metric(m, a, &SphericalPoint::from_coords(c)).map(|g| g.g),
            sp.coords(),
            DEFAULT_FD_STEP,
        )
        .unwrap();
        let c2 = (a * xi.cos()).powi(2);
        let r2 = rho * rho;
        // components are −½ of the textbook line element, so K picks up (−½)⁻² = 4
        let want = 4.0 * 48.0 * m * m * (r2 - c2) * (r2 * r2 - 14.0 * r2 * c2 + c2 * c2) / (r2 + c2).powi(6);
        assert!(close(rep.kretschmann, want, 1e-6), "{} vs {want}", rep.kretschmann);
    }
}

#[test]
fn frozen_kerr_winner() {
    let sph: Vec<SphericalPoint> =
        [(0.5, 0.0, 2.0, 0.0), (0.9, 1.0, 3.0, 0.5), (1.2, -2.0, 5.0, -0.5)].iter().map(|&(a, b, c, d)| SphericalPoint::new(a, b, c, d)).collect();
    let km = verify_kerr_match(1.0, 1.0, &sph, 1e-4, DEFAULT_FD_STEP).unwrap();
    assert_eq!(km.winner, Some(-2.0));
}
