//! `key = value` run configuration.
//!
//! Blank lines and `#` comments are ignored; `[section]` headers are accepted and only group
//! keys visually. Relative file paths resolve against the configuration file's directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use super::CliError;
use crate::verification::sampling::{ChartRanges, SphericalRanges};

#[derive(Clone, Debug, PartialEq)]
pub enum KSpec {
    Value(f64),
    Scan,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PotentialSpec {
    Holomorphic(Vec<Complex64>),
    Series { file: PathBuf, radius: f64 },
    Boundary { file: PathBuf, radius: f64, n_r: usize, n_theta: usize },
    Grid { file: PathBuf },
}

#[derive(Clone, Debug, PartialEq)]
pub enum SampleSpec {
    Points(PathBuf),
    Count(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub kappa: i32,
    pub b: f64,
    pub m: f64,
    pub k: KSpec,
    pub potential: Option<PotentialSpec>,
    pub samples: SampleSpec,
    pub seed: u64,
    pub chart: ChartRanges,
    pub sphere: SphericalRanges,
    /// (ξ, r) ranges for the hyperbolic analog
    pub analog_xi: (f64, f64),
    pub analog_r: (f64, f64),
    pub a: Option<f64>,
    pub rotation: Option<[f64; 3]>,
    pub tol: Option<f64>,
    pub fd_step: f64,
    pub out: Option<PathBuf>,
    pub n_max: i64,
}

const KEYS: &[&str] = &[
    "kappa",
    "B",
    "m",
    "k",
    "holomorphic",
    "series_file",
    "series_radius",
    "boundary_file",
    "boundary_radius",
    "n_r",
    "n_theta",
    "grid_file",
    "points_file",
    "samples",
    "seed",
    "disk_radius",
    "v_min",
    "v_max",
    "r_min",
    "r_max",
    "xi_min",
    "xi_max",
    "a",
    "rotation",
    "tol",
    "fd_step",
    "out",
    "n_max",
];

fn cfg_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

struct Table {
    map: BTreeMap<String, (usize, String)>,
    base: PathBuf,
}

impl Table {
    fn raw(&self, key: &str) -> Option<&(usize, String)> {
        self.map.get(key)
    }

    fn num<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse::<T>()
                .map(Some)
                .map_err(|_| cfg_err(format!("line {line}: `{key}` has an invalid value `{v}`"))),
        }
    }

    fn need<T: std::str::FromStr>(&self, key: &str) -> Result<T, CliError> {
        self.num(key)?.ok_or_else(|| cfg_err(format!("missing required key `{key}`")))
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.raw(key).map(|(_, v)| {
            let p = PathBuf::from(v);
            if p.is_absolute() {
                p
            } else {
                self.base.join(p)
            }
        })
    }
}

fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    let bad = || cfg_err(format!("invalid coefficient `{s}` (use `re` or `re:im`)"));
    match s.split_once(':') {
        Some((re, im)) => Ok(Complex64::new(re.trim().parse().map_err(|_| bad())?, im.trim().parse().map_err(|_| bad())?)),
        None => Ok(Complex64::new(s.trim().parse().map_err(|_| bad())?, 0.0)),
    }
}

fn range(t: &Table, lo: &str, hi: &str, default: (f64, f64)) -> Result<(f64, f64), CliError> {
    let r = (t.num(lo)?.unwrap_or(default.0), t.num(hi)?.unwrap_or(default.1));
    if !(r.0 <= r.1) {
        return Err(cfg_err(format!("`{lo}` must not exceed `{hi}`")));
    }
    Ok(r)
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| cfg_err(format!("{}: {e}", path.display())))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn parse(text: &str, base: &Path) -> Result<Self, CliError> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() || (line.starts_with('[') && line.ends_with(']')) {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| cfg_err(format!("line {}: expected `key = value`", i + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return Err(cfg_err(format!("line {}: unknown key `{k}`", i + 1)));
            }
            if map.insert(k.to_string(), (i + 1, v.to_string())).is_some() {
                return Err(cfg_err(format!("line {}: duplicate key `{k}`", i + 1)));
            }
        }
        let t = Table { map, base: base.to_path_buf() };

        let kappa: i32 = t.need("kappa")?;
        if kappa != 1 && kappa != -1 {
            return Err(cfg_err(format!("kappa must be 1 or -1, got {kappa}")));
        }
        let b: f64 = t.need("B")?;
        let m: f64 = t.need("m")?;
        let k = match t.raw("k") {
            None => KSpec::Scan,
            Some((_, v)) if v == "scan" => KSpec::Scan,
            Some(_) => KSpec::Value(t.need("k")?),
        };

        let mut specs = Vec::new();
        if let Some((_, v)) = t.raw("holomorphic") {
            let coeffs = v.split(',').map(parse_complex).collect::<Result<Vec<_>, _>>()?;
            specs.push(PotentialSpec::Holomorphic(coeffs));
        }
        if let Some(file) = t.path("series_file") {
            specs.push(PotentialSpec::Series { file, radius: t.need("series_radius")? });
        }
        if let Some(file) = t.path("boundary_file") {
            specs.push(PotentialSpec::Boundary {
                file,
                radius: t.need("boundary_radius")?,
                n_r: t.need("n_r")?,
                n_theta: t.need("n_theta")?,
            });
        }
        if let Some(file) = t.path("grid_file") {
            specs.push(PotentialSpec::Grid { file });
        }
        if specs.len() > 1 {
            return Err(cfg_err("more than one potential specification"));
        }
        let potential = specs.pop();

        let samples = match (t.path("points_file"), t.num::<usize>("samples")?) {
            (Some(_), Some(_)) => return Err(cfg_err("give either `points_file` or `samples`, not both")),
            (Some(p), None) => SampleSpec::Points(p),
            (None, n) => SampleSpec::Count(n.unwrap_or(20)),
        };
        let def = ChartRanges::for_kappa(kappa);
        let chart = ChartRanges {
            radius: t.num("disk_radius")?.unwrap_or(def.radius),
            v: range(&t, "v_min", "v_max", def.v)?,
            r: range(&t, "r_min", "r_max", def.r)?,
        };
        let sdef = SphericalRanges::default();
        let sphere = SphericalRanges {
            xi: range(&t, "xi_min", "xi_max", sdef.xi)?,
            rho: range(&t, "r_min", "r_max", sdef.rho)?,
            v: range(&t, "v_min", "v_max", sdef.v)?,
        };
        let analog_xi = range(&t, "xi_min", "xi_max", (0.3, 1.5))?;
        let analog_r = range(&t, "r_min", "r_max", (2.0, 10.0))?;
        let rotation = match t.raw("rotation") {
            None => None,
            Some((line, v)) => {
                let vals: Result<Vec<f64>, _> = v.split(',').map(|s| s.trim().parse::<f64>()).collect();
                match vals {
                    Ok(v) if v.len() == 3 => Some([v[0], v[1], v[2]]),
                    _ => return Err(cfg_err(format!("line {line}: `rotation` needs three numbers a0, a1, b1"))),
                }
            }
        };
        let tol: Option<f64> = t.num("tol")?;
        let fd_step: f64 = t.num("fd_step")?.unwrap_or(crate::tensor::DEFAULT_FD_STEP);
        let cfg = Self {
            kappa,
            b,
            m,
            k,
            potential,
            samples,
            seed: t.num("seed")?.unwrap_or(0),
            chart,
            sphere,
            analog_xi,
            analog_r,
            a: t.num("a")?,
            rotation,
            tol,
            fd_step,
            out: t.path("out"),
            n_max: t.num("n_max")?.unwrap_or(16),
        };
        cfg.check_positive()?;
        Ok(cfg)
    }

    pub fn check_positive(&self) -> Result<(), CliError> {
        if let Some(tol) = self.tol {
            if !(tol > 0.0) {
                return Err(cfg_err(format!("tolerance must be positive, got {tol}")));
            }
        }
        if !(self.fd_step > 0.0) {
            return Err(cfg_err(format!("fd_step must be positive, got {}", self.fd_step)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<RunConfig, CliError> {
        RunConfig::parse(s, Path::new("/data"))
    }

    #[test]
    fn minimal_config() {
        let c = parse("# family\n[family]\nkappa = 1\nB = -1\nm = 0.3\nk = -2\nholomorphic = -1, 0.25:0.1\n").unwrap();
        assert_eq!(c.k, KSpec::Value(-2.0));
        assert_eq!(
            c.potential,
            Some(PotentialSpec::Holomorphic(vec![Complex64::new(-1.0, 0.0), Complex64::new(0.25, 0.1)]))
        );
        assert_eq!(c.samples, SampleSpec::Count(20));
        assert_eq!(c.fd_step, 1e-3);
    }

    #[test]
    fn required_and_exclusive_keys() {
        assert!(matches!(parse("kappa = 1\nB = -1\n"), Err(CliError::Config(_))));
        assert!(parse("kappa = 2\nB = -1\nm = 0\n").is_err());
        assert!(parse("kappa = 1\nB = -1\nm = 0\nholomorphic = -1\ngrid_file = g.json\n").is_err());
        assert!(parse("kappa = 1\nB = -1\nm = 0\nbogus = 3\n").is_err());
        assert!(parse("kappa = 1\nB = -1\nm = 0\ntol = 0\n").is_err());
        assert!(parse("kappa = 1\nB = -1\nm = 0\nm = 1\n").is_err());
    }

    #[test]
    fn relative_paths_and_scan() {
        let c = parse("kappa = -1\nB = 2\nm = 0\nk = scan\ngrid_file = g.json\nsamples = 5\nseed = 3\n").unwrap();
        assert_eq!(c.k, KSpec::Scan);
        assert_eq!(c.potential, Some(PotentialSpec::Grid { file: PathBuf::from("/data/g.json") }));
        assert_eq!((c.samples, c.seed), (SampleSpec::Count(5), 3));
    }
}
