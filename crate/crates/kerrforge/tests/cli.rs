use std::f64::consts::TAU;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn dir(name: &str) -> PathBuf {
    let d = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    fs::create_dir_all(&d).unwrap();
    d
}

fn write(d: &Path, name: &str, body: &str) -> PathBuf {
    let p = d.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn kf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kerrforge")).args(args).env("KERRFORGE_THREADS", "2").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn boundary(f: impl Fn(f64) -> f64) -> String {
    (0..64).map(|j| TAU * j as f64 / 64.0).map(|w| format!("{w} {}\n", f(w))).collect()
}

const RICCI: &str = "kappa = 1\nB = -1\nm = 0.3\nk = -2\nholomorphic = -1, 0.25\nsamples = 10\nseed = 4\n";

#[test]
fn solve_exit_codes_and_grid_round_trip() {
    let d = dir("solve");
    write(&d, "ok.txt", &boundary(|_| -1.0));
    write(&d, "mixed.txt", &boundary(f64::cos));
    write(&d, "zero.txt", &boundary(|_| 0.0));
    let base = "kappa = 1\nB = -1\nm = 0\nboundary_radius = 0.8\nn_r = 32\nn_theta = 64\n";
    let ok = write(&d, "ok.cfg", &format!("{base}boundary_file = ok.txt\n"));
    let grid = d.join("grid.json");
    let o = kf(&["solve", "--config", ok.to_str().unwrap(), "--out", grid.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("max_pde_residual="));
    assert!(grid.exists());

    for bad in ["mixed.txt", "zero.txt"] {
        let c = write(&d, "bad.cfg", &format!("{base}boundary_file = {bad}\n"));
        assert_eq!(code(&kf(&["solve", "--config", c.to_str().unwrap()])), 2);
    }

    write(&d, "huge.txt", &boundary(|_| -1e308));
    let c = write(&d, "huge.cfg", &format!("{base}boundary_file = huge.txt\n"));
    assert_eq!(code(&kf(&["solve", "--config", c.to_str().unwrap()])), 3);

    let g = write(&d, "grid.cfg", "kappa = 1\nB = -1\nm = 0\ngrid_file = grid.json\nsamples = 10\n");
    let o = kf(&["verify", "pde", "--config", g.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("\"check\":\"pde\""));
}

#[test]
fn metric_table_has_fourteen_columns() {
    let d = dir("metric");
    let c = write(&d, "r.cfg", RICCI);
    let o = kf(&["metric", "--config", c.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header.len(), 14);
    assert_eq!(header[..4], ["x", "y", "v", "r"]);
    let mut n = 0;
    for l in lines {
        let row: Vec<f64> = l.split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(row.len(), 14);
        assert_eq!(row[13], 0.0);
        n += 1;
    }
    assert_eq!(n, 10);
}

#[test]
fn metric_background_term_only_touches_theta_block() {
    let d = dir("metric_m");
    let with_m = write(&d, "a.cfg", RICCI);
    let no_m = write(&d, "b.cfg", &RICCI.replace("m = 0.3", "m = 0"));
    let parse = |o: Output| -> Vec<Vec<f64>> {
        stdout(&o).lines().skip(1).map(|l| l.split(',').map(|s| s.parse().unwrap()).collect()).collect()
    };
    let a = parse(kf(&["metric", "--config", with_m.to_str().unwrap()]));
    let b = parse(kf(&["metric", "--config", no_m.to_str().unwrap()]));
    assert_eq!(a.len(), b.len());
    // g03, g13, g23, g33 come from ϑ∨du alone
    for (ra, rb) in a.iter().zip(&b) {
        assert_eq!(ra[..4], rb[..4]);
        for col in [7, 10, 12, 13] {
            assert_eq!(ra[col], rb[col]);
        }
        assert_ne!(ra[11], rb[11]);
    }
}

#[test]
fn verify_exit_codes() {
    let d = dir("verify");
    let r = write(&d, "r.cfg", RICCI);
    let res = d.join("res.csv");
    let o = kf(&["verify", "ricci", "--config", r.to_str().unwrap(), "--out", res.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let json: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(json["pass"], true);
    assert_eq!(json["samples"], 10);
    let csv = fs::read_to_string(&res).unwrap();
    assert_eq!(csv.lines().count(), 11);

    // a tolerance below the FD floor fails
    assert_eq!(code(&kf(&["verify", "ricci", "--config", r.to_str().unwrap(), "--tol", "1e-30"])), 1);

    let bad = write(&d, "bad.cfg", &RICCI.replace("B = -1", "B = 1"));
    assert_eq!(code(&kf(&["verify", "ricci", "--config", bad.to_str().unwrap()])), 2);
    let scan = write(&d, "scan.cfg", &RICCI.replace("k = -2", "k = scan"));
    assert_eq!(code(&kf(&["metric", "--config", scan.to_str().unwrap()])), 2);
    assert_eq!(code(&kf(&["verify", "bogus", "--config", r.to_str().unwrap()])), 2);
    assert_eq!(code(&kf(&["verify", "ricci"])), 2);
    assert_eq!(code(&kf(&["verify", "ricci", "--config", r.to_str().unwrap(), "--fd-step", "0"])), 2);
}

#[test]
fn nogo_runs_without_config() {
    let o = kf(&["verify", "nogo"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("n=4 D=0"));
    assert!(s.contains("n=6 D=36"));
    assert!(s.contains("n=8 D=96"));
}

#[test]
fn kerr_match_reports_winner() {
    let d = dir("kerr");
    let c = write(&d, "k.cfg", "kappa = 1\nB = -1\nm = 1\na = 1\nsamples = 8\n");
    let o = kf(&["verify", "kerr-match", "--config", c.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let json: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(json["detail"]["winner"], -2.0);
    let wrong = write(&d, "k2.cfg", "kappa = 1\nB = -1\nm = 1\na = 1\nk = 2\nsamples = 8\n");
    assert_eq!(code(&kf(&["verify", "kerr-match", "--config", wrong.to_str().unwrap()])), 1);
}

#[test]
fn runs_are_deterministic_across_thread_counts() {
    let d = dir("det");
    let c = write(&d, "r.cfg", RICCI);
    let a = kf(&["invariants", "--config", c.to_str().unwrap(), "--seed", "7"]);
    let b = Command::new(env!("CARGO_BIN_EXE_kerrforge"))
        .args(["invariants", "--config", c.to_str().unwrap(), "--seed", "7"])
        .env("KERRFORGE_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().next().unwrap(), "x,y,v,r,kretschmann,ricci_norm");
}

#[test]
fn bad_thread_count_is_rejected() {
    let o = Command::new(env!("CARGO_BIN_EXE_kerrforge")).args(["verify", "nogo"]).env("KERRFORGE_THREADS", "zero").output().unwrap();
    assert_eq!(code(&o), 2);
}
