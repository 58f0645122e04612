//! Acceptance criteria 1–11. Prints one PASS/FAIL line per criterion and exits non-zero if any fail.

use std::f64::consts::PI;
use std::process::ExitCode;

use kerrforge::geometry::{assemble_metric, ChartPoint, MetricConfig, Perturbation};
use kerrforge::jet::Jet;
use kerrforge::potential::{
    rotate_reduce, rotated_angles, rotation_matrix, spherical_potential, FunctionPotential,
    PotentialField, SeriesCoefficients, SphereCoefficients,
};
use kerrforge::tensor::DEFAULT_FD_STEP;
use kerrforge::verification::sampling::{chart_samples, spherical_samples, ChartRanges, Halton, SphericalRanges};
use kerrforge::verification::{
    compare_paths, sigma_match_residual, special_solution_residual, verify_background_flat,
    verify_beta_ode, verify_kerr_distinct, verify_kerr_match, verify_kerr_match_rotated, verify_nogo,
    verify_pde_convergence, verify_ricci_flat, verify_schwarzschild_analog, verify_sigma_ode,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(bool, String), String>;

const H: f64 = DEFAULT_FD_STEP;

fn admissible(cfg: &MetricConfig) -> impl Fn(&ChartPoint) -> bool + '_ {
    move |p| assemble_metric(cfg, p).is_ok()
}

fn samples_for(cfg: &MetricConfig, n: usize, seed: u64) -> Result<Vec<ChartPoint>, String> {
    chart_samples(n, seed, ChartRanges::for_kappa(cfg.kappa), admissible(cfg))
        .ok_or_else(|| "not enough admissible sample points".to_string())
}

fn c1() -> Outcome {
    let rep = verify_sigma_ode(1000, 1, 1e-12);
    Ok((rep.pass, format!("sigma ODE: max relative residual {:.2e} over {} samples (tol 1e-12)", rep.max_residual, rep.samples)))
}

fn c2() -> Outcome {
    let rep = verify_beta_ode(1000, 2, 1e-12);
    Ok((rep.pass, format!("beta ODE: max relative residual {:.2e} over {} samples (tol 1e-12)", rep.max_residual, rep.samples)))
}

fn background_potentials(kappa: i32) -> Vec<Vec<f64>> {
    if kappa == 1 {
        vec![vec![-1.0], vec![-1.0, 0.3], vec![-0.8, 0.0, 0.1]]
    } else {
        vec![vec![1.0], vec![1.0, 0.0, 0.125], vec![0.6, 0.2]]
    }
}

fn c3() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    let mut ok = true;
    let mut seed = 30;
    for kappa in [1, -1] {
        for b in [-1.0, 2.0] {
            for f in background_potentials(kappa) {
                let cfg = MetricConfig::new(kappa, b, 0.0, -2.0, PotentialField::holomorphic(kappa, &f).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                seed += 1;
                let pts = samples_for(&cfg, 100, seed)?;
                let rep = verify_background_flat(&cfg, &pts, 1e-6, H).map_err(|e| e.to_string())?;
                worst = worst.max(rep.max_residual);
                ok &= rep.pass;
                runs += 1;
            }
        }
    }
    // σ shifted away from its ODE solution must be detected
    let cfg = MetricConfig::new(1, -1.0, 0.0, -2.0, PotentialField::holomorphic(1, &[-1.0]).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?
        .with_perturbation(Perturbation { beta_scale: 1.0, sigma_shift: 0.1 });
    let pts = samples_for(&cfg, 100, 39)?;
    let control = verify_background_flat(&cfg, &pts, 1e-6, H).map_err(|e| e.to_string())?;
    ok &= !control.pass;
    Ok((
        ok,
        format!(
            "background flatness: {runs} configurations x 100 points, max residual {worst:.2e} (tol 1e-6); sigma+0.1 control {:.2e} {}",
            control.max_residual,
            if control.pass { "not detected" } else { "detected" }
        ),
    ))
}

fn c4() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    let mut ok = true;
    let families: [(i32, Vec<f64>); 4] =
        [(1, vec![-1.0]), (1, vec![-1.0, 0.25]), (-1, vec![1.0]), (-1, vec![1.0, 0.0, 0.125])];
    let mut seed = 40;
    for (kappa, f) in &families {
        for m in [0.3, 1.0, 3.0] {
            let cfg = MetricConfig::new(*kappa, -1.0, m, -2.0, PotentialField::holomorphic(*kappa, f).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            seed += 1;
            let pts = samples_for(&cfg, 100, seed)?;
            let rep = verify_ricci_flat(&cfg, &pts, 1e-6, H).map_err(|e| e.to_string())?;
            worst = worst.max(rep.max_residual);
            ok &= rep.pass;
            runs += 1;
        }
    }
    let cfg = MetricConfig::new(1, -1.0, 1.0, -2.0, PotentialField::holomorphic(1, &[-1.0]).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?
        .with_perturbation(Perturbation { beta_scale: 1.01, sigma_shift: 0.0 });
    let pts = samples_for(&cfg, 100, 59)?;
    let control = verify_ricci_flat(&cfg, &pts, 1e-6, H).map_err(|e| e.to_string())?;
    ok &= !control.pass;
    Ok((
        ok,
        format!(
            "Ricci flatness: {runs} configurations x 100 points, max residual {worst:.2e} (tol 1e-6); beta*1.01 control {:.2e} {}",
            control.max_residual,
            if control.pass { "not detected" } else { "detected" }
        ),
    ))
}

fn c5() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    let cases = [
        (1, 0.8, SeriesCoefficients::from_rows(&[(0, 1.0, 0.0), (1, 0.2, 0.1), (2, 0.05, -0.03)])),
        (-1, 0.7, SeriesCoefficients::from_rows(&[(0, -1.0, 0.0), (1, -0.1, 0.15), (3, 0.02, 0.01)])),
    ];
    for (kappa, radius, coeffs) in cases {
        let coeffs = coeffs.map_err(|e| e.to_string())?;
        let (rep, study) =
            verify_pde_convergence(kappa, radius, &coeffs, &[32, 64, 128], 0.2).map_err(|e| e.to_string())?;
        ok &= rep.pass;
        let orders: Vec<String> = study.orders.iter().map(|o| format!("{o:.3}")).collect();
        parts.push(format!("kappa={kappa} orders [{}]", orders.join(", ")));
    }
    Ok((ok, format!("FD convergence 32->64->128: {} (accept [1.8, 2.2])", parts.join("; "))))
}

fn c6() -> Outcome {
    let mut h = Halton::new(2, 6);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let u = h.next_point();
        let rr = 3.0 * u[0].sqrt();
        let w = 2.0 * PI * u[1];
        worst = worst.max(special_solution_residual(rr * w.cos(), rr * w.sin()).map_err(|e| e.to_string())?);
    }
    Ok((worst < 1e-12, format!("special solution F = -1: max |phi - phi_o| {worst:.2e} over 100 points (tol 1e-12)")))
}

fn c7() -> Outcome {
    let rep = verify_nogo(64).map_err(|e| e.to_string())?;
    let d = |n: i64| kerrforge::verification::nogo_discriminant(n).unwrap_or(-1);
    let spot = d(4) == 0 && d(6) == 36 && d(8) == 96;
    Ok((rep.pass && spot, format!("no-go dichotomy n=4..64: D(n)=0 only at n=4; D(4)={}, D(6)={}, D(8)={}", d(4), d(6), d(8))))
}

fn random_holomorphic(rng: &mut ChaCha8Rng, kappa: i32) -> Vec<f64> {
    let c0 = -(kappa as f64) * rng.random_range(0.6..1.4);
    vec![c0, rng.random_range(-0.2..0.2), rng.random_range(-0.1..0.1)]
}

fn c8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    let mut n = 0;
    while n < 50 {
        let kappa = if rng.random_bool(0.5) { 1 } else { -1 };
        let (b, m) = if rng.random_bool(0.5) {
            (-1.0, rng.random_range(0.0..3.0))
        } else {
            let mag = rng.random_range(0.5..2.5);
            (if rng.random_bool(0.5) { mag } else { -mag }, 0.0)
        };
        let k = if rng.random_bool(0.5) { 2.0 } else { -2.0 };
        let pert = Perturbation { beta_scale: rng.random_range(0.8..1.2), sigma_shift: rng.random_range(0.05..0.3) };
        let field = PotentialField::holomorphic(kappa, &random_holomorphic(&mut rng, kappa)).map_err(|e| e.to_string())?;
        let cfg = MetricConfig::new(kappa, b, m, k, field).map_err(|e| e.to_string())?.with_perturbation(pert);
        let Some(pts) = chart_samples(1, rng.random(), ChartRanges::for_kappa(kappa), admissible(&cfg)) else {
            continue;
        };
        let cmp = compare_paths(&cfg, &pts[0], H).map_err(|e| e.to_string())?;
        worst = worst.max(cmp.ricci_relative);
        n += 1;
    }
    let paths_ok = worst < 1e-5;

    // β̃ = B with a potential that does not solve the potential equation
    let mut frame_sym: f64 = 0.0;
    let mut pp: f64 = 0.0;
    let mut n = 0;
    while n < 50 {
        let kappa = if rng.random_bool(0.5) { 1 } else { -1 };
        let mag = rng.random_range(0.5..2.5);
        let b = if rng.random_bool(0.5) { mag } else { -mag };
        let c: [f64; 4] = std::array::from_fn(|_| rng.random_range(-0.3..0.3));
        let s = -(kappa as f64);
        let field = PotentialField::Function(FunctionPotential::new(kappa, move |x: &Jet, y: &Jet| {
            let poly = x.scale(c[0]) + (*y * *y).scale(c[1]) + (*x * *y).scale(c[2]) + x.powi(3).scale(c[3]);
            poly.add_const(1.0).scale(s)
        }));
        let cfg = MetricConfig::new(kappa, b, 0.0, 2.0, field).map_err(|e| e.to_string())?;
        let Some(pts) = chart_samples(1, rng.random(), ChartRanges::for_kappa(kappa), admissible(&cfg)) else {
            continue;
        };
        let cmp = compare_paths(&cfg, &pts[0], H).map_err(|e| e.to_string())?;
        worst = worst.max(cmp.ricci_relative);
        frame_sym = frame_sym.max(cmp.ric12).max(cmp.ric11_minus_ric22).max(cmp.common_expression);
        pp = pp.max(cmp.ricci_pp);
        n += 1;
    }
    let ok = paths_ok && worst < 1e-5 && frame_sym < 1e-8;
    Ok((
        ok,
        format!(
            "closed vs FD paths: max relative Ricci difference {worst:.2e} over 100 configurations (tol 1e-5); Ric12, Ric11-Ric22, CE/sigma^2 {frame_sym:.2e} (tol 1e-8); Ric_pp {pp:.2e}"
        ),
    ))
}

fn c9() -> Outcome {
    let sph = spherical_samples(20, 9, SphericalRanges::default());
    let mut sig: f64 = 0.0;
    for a in [0.5, 1.0, 2.0] {
        for sp in &sph {
            sig = sig.max(sigma_match_residual(a, sp));
        }
    }
    let first = verify_kerr_match(1.0, 1.0, &sph, 1e-4, H).map_err(|e| e.to_string())?;
    let winner = first.winner;
    let mut ok = sig < 1e-12 && first.report.pass && winner.is_some();
    let mut stable = true;
    let mut worst = first.report.max_residual;
    for m in [0.5, 1.0, 2.0] {
        for a in [0.5, 1.0, 2.0] {
            let r = verify_kerr_match(m, a, &sph, 1e-4, H).map_err(|e| e.to_string())?;
            stable &= r.winner == winner;
            worst = worst.max(r.report.max_residual);
        }
    }
    ok &= stable;

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut reduce: f64 = 0.0;
    let mut rot_ok = true;
    for _ in 0..5 {
        let c = [rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5)];
        let (a, al1, al2) = rotate_reduce(c[0], c[1], c[2]).map_err(|e| e.to_string())?;
        reduce = reduce.max((a - (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt()).abs());
        let rot = rotation_matrix(al1, al2);
        let sc = SphereCoefficients::degree_one(c[0], c[1], c[2]);
        for sp in &sph {
            let (xi, psi) = rotated_angles(&rot, sp.xi, sp.psi);
            let v = spherical_potential(&sc, xi, psi).map_err(|e| e.to_string())?;
            reduce = reduce.max((v - a * sp.xi.cos()).abs());
        }
        let r = verify_kerr_match_rotated(1.0, c, &sph, 1e-4, H).map_err(|e| e.to_string())?;
        rot_ok &= r.report.pass && r.winner == winner;
        worst = worst.max(r.report.max_residual);
    }
    ok &= reduce < 1e-10 && rot_ok;
    Ok((
        ok,
        format!(
            "Kerr match: sigma identity {sig:.2e} (tol 1e-12); invariants max relative {worst:.2e} at 20 points (tol 1e-4); unique k = {}; stable over (m, a) grid: {stable}; rotation reduction {reduce:.2e} (tol 1e-10), rotated matches: {rot_ok}",
            winner.map(|k| k.to_string()).unwrap_or_else(|| "none".into())
        ),
    ))
}

fn c10() -> Outcome {
    let mut h = Halton::new(4, 10);
    let pts: Vec<[f64; 4]> = (0..50)
        .map(|_| {
            let u = h.next_point();
            [0.3 + 1.2 * u[0], -PI + 2.0 * PI * u[1], -1.0 + 2.0 * u[2], 2.0 + 8.0 * u[3]]
        })
        .collect();
    let curved = verify_schwarzschild_analog(1.0, &pts, 1e-6, H).map_err(|e| e.to_string())?;
    let flat = verify_schwarzschild_analog(0.0, &pts, 1e-6, H).map_err(|e| e.to_string())?;
    let min_k = curved.detail.get("min_abs_kretschmann").and_then(|v| v.as_f64()).unwrap_or(0.0);
    let ok = curved.pass && flat.pass && min_k > 1e-8;
    Ok((
        ok,
        format!(
            "hyperbolic analog: m=1 Ricci {:.2e}, min |Kretschmann| {min_k:.2e}; m=0 Riemann {:.2e} (tol 1e-6)",
            curved.max_residual, flat.max_residual
        ),
    ))
}

fn c11() -> Outcome {
    let sph = spherical_samples(40, 11, SphericalRanges::default());
    let mut ok = true;
    let mut least = f64::INFINITY;
    for a in [0.5, 1.0, 2.0] {
        let rep = verify_kerr_distinct(1.0, a, &[0.0, 0.0, 1.0], &sph, 1e-4, H).map_err(|e| e.to_string())?;
        ok &= rep.pass;
        least = least.min(rep.max_residual);
    }
    Ok((ok, format!("F = z^2 distinct from Kerr: smallest max invariant gap over a in {{0.5, 1, 2}} is {least:.2e} (> 1e-3)")))
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 11] =
        [(1, c1), (2, c2), (3, c3), (4, c4), (5, c5), (6, c6), (7, c7), (8, c8), (9, c9), (10, c10), (11, c11)];
    let mut failed = 0;
    for (n, f) in criteria {
        let (pass, msg) = match f() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += u32::from(!pass);
        println!("{} {n:>2} {msg}", if pass { "PASS" } else { "FAIL" });
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
