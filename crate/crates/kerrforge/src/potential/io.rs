//! Plain-text boundary (`w value`) and coefficient (`n a_n b_n`) files.

use std::path::Path;

use super::{Boundary, PotentialError, SeriesCoefficients};

fn rows(text: &str, width: usize) -> Result<Vec<(usize, Vec<f64>)>, PotentialError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let vals: Result<Vec<f64>, _> = line.split_whitespace().map(str::parse::<f64>).collect();
        let vals = vals.map_err(|e| PotentialError::Parse { line: i + 1, msg: e.to_string() })?;
        if vals.len() != width {
            return Err(PotentialError::Parse {
                line: i + 1,
                msg: format!("expected {width} fields, found {}", vals.len()),
            });
        }
        out.push((i + 1, vals));
    }
    Ok(out)
}

pub fn parse_boundary(text: &str) -> Result<Boundary, PotentialError> {
    let rows = rows(text, 2)?;
    let mut prev = f64::NEG_INFINITY;
    let (mut w, mut v) = (Vec::new(), Vec::new());
    for (line, r) in rows {
        if !(0.0..std::f64::consts::TAU).contains(&r[0]) || r[0] <= prev {
            return Err(PotentialError::Parse { line, msg: "w must ascend within [0, 2π)".into() });
        }
        prev = r[0];
        w.push(r[0]);
        v.push(r[1]);
    }
    Boundary::new(w, v)
}

pub fn parse_coefficients(text: &str) -> Result<SeriesCoefficients, PotentialError> {
    let rows = rows(text, 3)?;
    let mut out = Vec::new();
    for (line, r) in rows {
        if r[0] < 0.0 || r[0].fract() != 0.0 {
            return Err(PotentialError::Parse { line, msg: "mode index must be a non-negative integer".into() });
        }
        out.push((r[0] as usize, r[1], r[2]));
    }
    SeriesCoefficients::from_rows(&out)
}

pub fn read_boundary(path: &Path) -> Result<Boundary, PotentialError> {
    let text = std::fs::read_to_string(path).map_err(|e| PotentialError::Io(e.to_string()))?;
    parse_boundary(&text)
}

pub fn read_coefficients(path: &Path) -> Result<SeriesCoefficients, PotentialError> {
    let text = std::fs::read_to_string(path).map_err(|e| PotentialError::Io(e.to_string()))?;
    parse_coefficients(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_formats() {
        let b = parse_boundary("# w value\n0 -1\n1.5 -2\n\n3.0 -1.5\n").unwrap();
        assert_eq!(b.value, vec![-1.0, -2.0, -1.5]);
        let c = parse_coefficients("0 1 0\n2 0.5 -0.25\n").unwrap();
        assert_eq!(c.a0, 1.0);
        assert_eq!(c.ab, vec![(0.0, 0.0), (0.5, -0.25)]);
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(parse_boundary("0 1\n0 2\n").is_err());
        assert!(parse_boundary("7 1\n").is_err());
        assert!(parse_coefficients("1.5 1 0\n").is_err());
        assert!(matches!(parse_coefficients("0 1\n"), Err(PotentialError::Parse { line: 1, .. })));
    }
}
