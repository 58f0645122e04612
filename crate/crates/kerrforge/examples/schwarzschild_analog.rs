//! The hyperbolic Schwarzschild analog: Ricci flat for m = 1, flat for m = 0.

use kerrforge::tensor::DEFAULT_FD_STEP;
use kerrforge::verification::sampling::Halton;
use kerrforge::verification::verify_schwarzschild_analog;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut h = Halton::new(4, 5);
    let pts: Vec<[f64; 4]> = (0..30)
        .map(|_| {
            let u = h.next_point();
            [0.3 + 1.2 * u[0], -3.0 + 6.0 * u[1], -1.0 + 2.0 * u[2], 2.0 + 8.0 * u[3]]
        })
        .collect();
    for m in [1.0, 0.0] {
        let rep = verify_schwarzschild_analog(m, &pts, 1e-6, DEFAULT_FD_STEP)?;
        println!("{}", rep.to_json_line());
    }
    Ok(())
}
