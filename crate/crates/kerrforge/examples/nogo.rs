//! D(n) = 4(n−3)² − (n−6)² vanishes only in dimension four.

use kerrforge::verification::{nogo_discriminant, verify_nogo};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in 4..=12 {
        println!("n = {n:>2}: D = {}", nogo_discriminant(n)?);
    }
    let rep = verify_nogo(64)?;
    println!("n = 4..64, zero only at n = 4: {}", rep.pass);
    Ok(())
}
