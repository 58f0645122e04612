//! Kerr-type optical-geometry Lorentzian metrics built from Kähler potentials.
//!
//! - [`potential`]: series, generating-function and finite-difference potentials
//! - [`geometry`]: charts and metric assembly
//! - [`tensor`]: finite-difference and closed-form curvature
//! - [`verification`]: Ricci flatness, background flatness, Kerr matching
//! - [`cli`]: configuration files, output formats and the subcommand drivers
//!
//! Runnable walkthroughs live in `examples/`, e.g. `cargo run --example ricci_flat_family`.

pub mod cli;
pub mod geometry;
pub mod jet;
pub mod potential;
pub mod tensor;
pub mod verification;
