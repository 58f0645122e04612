//! Classical Kerr against the family with φ = −a cos ξ, including a rotated potential.

use kerrforge::tensor::DEFAULT_FD_STEP;
use kerrforge::verification::sampling::{spherical_samples, SphericalRanges};
use kerrforge::verification::{verify_kerr_distinct, verify_kerr_match, verify_kerr_match_rotated};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pts = spherical_samples(20, 3, SphericalRanges::default());
    for (m, a) in [(1.0, 0.5), (1.0, 1.0), (2.0, 1.5)] {
        let km = verify_kerr_match(m, a, &pts, 1e-4, DEFAULT_FD_STEP)?;
        for row in &km.scan {
            println!(
                "m = {m}, a = {a}, k = {:>2}: Kretschmann {:.2e}, cubic {:.2e}, match = {}",
                row.k, row.kretschmann, row.cubic, row.matches
            );
        }
        println!("  winner: {:?}", km.winner);
    }
    let rot = verify_kerr_match_rotated(1.0, [0.3, -0.6, 0.4], &pts, 1e-4, DEFAULT_FD_STEP)?;
    println!("rotated degree-one potential: residual {:.2e}, winner {:?}", rot.report.max_residual, rot.winner);

    let other = verify_kerr_distinct(1.0, 1.0, &[0.0, 0.0, 1.0], &pts, 1e-4, DEFAULT_FD_STEP)?;
    println!("F = z^2: largest invariant gap {:.3} -> distinct = {}", other.max_residual, other.pass);
    Ok(())
}
