//! Text inputs accepted on the command line and in config files.
//!
//! All parsers are total over `&str`: malformed input is an [`Error::Parse`],
//! never a panic.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::filling::Extended;
use crate::packing::Window;
use crate::ComplexValue;

/// Largest grid side, window half-width and schedule length accepted.
pub const MAX_GRID: usize = 4096;
pub const MAX_WINDOW: i64 = 1000;
pub const MAX_SCHEDULE: usize = 100_000;

fn err(what: &str, input: &str) -> Error {
    let shown: String = input.chars().take(64).collect();
    Error::Parse(format!("{what}: {shown:?}"))
}

fn real(text: &str, what: &str, input: &str) -> Result<f64> {
    let t = text.trim();
    // Rust's f64 parser also accepts "inf" and "nan"; those are not parameters.
    if t.is_empty()
        || !t
            .bytes()
            .all(|b| b.is_ascii_digit() || b"+-.eE".contains(&b))
    {
        return Err(err(what, input));
    }
    let v: f64 = t.parse().map_err(|_| err(what, input))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(err(what, input))
    }
}

/// Parse a complex literal `a+bi`, `a-bi`, `a`, `bi`, `i` or `-i`.
pub fn parse_complex(input: &str) -> Result<ComplexValue> {
    let what = "complex literal";
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err(what, input));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(real(&s, what, input)?, 0.0));
    };
    // split before the last sign that is neither leading nor an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (real(&body[..k], what, input)?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => real(t, what, input)?,
    };
    Ok(Complex64::new(re, im))
}

/// Format a complex number so that [`parse_complex`] reads it back exactly.
pub fn format_complex(z: ComplexValue) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:e}{sign}{:e}i", z.re, z.im.abs())
}

/// `NxM` sample grid, both sides in `1..=MAX_GRID`.
pub fn parse_grid(input: &str) -> Result<(usize, usize)> {
    let what = "grid spec (expected NxM)";
    let (a, b) = input
        .trim()
        .split_once(['x', 'X'])
        .ok_or_else(|| err(what, input))?;
    let side = |t: &str| -> Result<usize> {
        let v: usize = t.trim().parse().map_err(|_| err(what, input))?;
        if (1..=MAX_GRID).contains(&v) {
            Ok(v)
        } else {
            Err(err(what, input))
        }
    };
    Ok((side(a)?, side(b)?))
}

/// `K` for `-K..=K` in both indices, or `m0:m1,n0:n1`.
pub fn parse_window(input: &str) -> Result<Window> {
    let what = "window (expected K or m0:m1,n0:n1)";
    let int = |t: &str| -> Result<i64> {
        let v: i64 = t.trim().parse().map_err(|_| err(what, input))?;
        if v.abs() <= MAX_WINDOW {
            Ok(v)
        } else {
            Err(err(what, input))
        }
    };
    let t = input.trim();
    if let Some((ms, ns)) = t.split_once(',') {
        let range = |r: &str| -> Result<std::ops::RangeInclusive<i64>> {
            let (a, b) = r.split_once(':').ok_or_else(|| err(what, input))?;
            let (a, b) = (int(a)?, int(b)?);
            if a > b {
                return Err(err(what, input));
            }
            Ok(a..=b)
        };
        Ok(Window {
            m: range(ms)?,
            n: range(ns)?,
        })
    } else {
        let k = int(t)?;
        if k < 0 {
            return Err(err(what, input));
        }
        Ok(Window::symmetric(k))
    }
}

/// A schedule of levels in `(0, 1)`:
/// a comma list `0.1,0.5,0.9`, `tail:K0..K1` for `1 - 10^-k`, or
/// `lin:A:B:N` for `N` evenly spaced values from `A` to `B`.
pub fn parse_schedule(input: &str) -> Result<Vec<f64>> {
    let what = "level schedule";
    let t = input.trim();
    let values: Vec<f64> = if let Some(rest) = t.strip_prefix("tail:") {
        let (a, b) = rest.split_once("..").ok_or_else(|| err(what, input))?;
        let a: i32 = a.trim().parse().map_err(|_| err(what, input))?;
        let b: i32 = b.trim().parse().map_err(|_| err(what, input))?;
        if !(1..=15).contains(&a) || !(a..=15).contains(&b) {
            return Err(err(what, input));
        }
        (a..=b).map(|k| 1.0 - 10f64.powi(-k)).collect()
    } else if let Some(rest) = t.strip_prefix("lin:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(err(what, input));
        };
        let (a, b) = (real(a, what, input)?, real(b, what, input)?);
        let n: usize = n.trim().parse().map_err(|_| err(what, input))?;
        if !(1..=MAX_SCHEDULE).contains(&n) {
            return Err(err(what, input));
        }
        if n == 1 {
            vec![a]
        } else {
            (0..n)
                .map(|k| a + (b - a) * k as f64 / (n - 1) as f64)
                .collect()
        }
    } else {
        let parts: Vec<&str> = t.split(',').collect();
        if parts.len() > MAX_SCHEDULE {
            return Err(err(what, input));
        }
        parts
            .into_iter()
            .map(|p| real(p, what, input))
            .collect::<Result<_>>()?
    };
    if values.is_empty() || values.iter().any(|&s| !(s > 0.0 && s < 1.0)) {
        return Err(err("level schedule entries must lie in (0, 1)", input));
    }
    Ok(values)
}

/// Comma list of slope values `t`; `inf` stands for the slope where
/// `mu + lambda = 0`.
pub fn parse_slopes(input: &str) -> Result<Vec<Extended>> {
    let what = "slope list";
    let parts: Vec<&str> = input.split(',').collect();
    if parts.len() > MAX_SCHEDULE {
        return Err(err(what, input));
    }
    parts
        .into_iter()
        .map(|p| match p.trim() {
            "inf" | "+inf" | "-inf" => Ok(Extended::Infinite),
            t => real(t, what, input).map(Extended::Finite),
        })
        .collect()
}

/// Flat `key = value` config: `#` starts a comment, blank lines are skipped,
/// keys are `[a-z0-9_-]+`, later keys override earlier ones.
pub fn parse_config(input: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in input.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("config line {}: missing '='", lineno + 1)))?;
        let k = k.trim();
        let valid = !k.is_empty()
            && k.bytes()
                .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_' || b == b'-');
        if !valid {
            return Err(Error::Parse(format!("config line {}: bad key", lineno + 1)));
        }
        out.insert(k.to_string(), v.trim().to_string());
    }
    Ok(out)
}
