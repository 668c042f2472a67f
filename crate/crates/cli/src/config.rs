//! Config merging and the small string formats accepted on the command line.

use std::path::{Path, PathBuf};

use chronoscope::envelope::{GaussianPulseSpec, PulseShape};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::CliError;

pub const GRID_ENV: &str = "CHRONOSCOPE_GRID_N";

/// Overlays the command-line flags on the config file and returns the
/// merged arguments, the output directory named in the file (if any) and
/// the merged key/value map for the manifest.
pub fn resolve<A: Serialize + DeserializeOwned>(
    flags: &A,
    config: Option<&Path>,
    allowed: &[String],
) -> Result<(A, Option<PathBuf>, Map<String, Value>), CliError> {
    let mut merged = match config {
        Some(path) => load(path)?,
        None => Map::new(),
    };
    let out = match merged.remove("out") {
        Some(Value::String(s)) => Some(PathBuf::from(s)),
        Some(other) => return Err(CliError::config(format!("`out` must be a string, got {other}"))),
        None => None,
    };
    if let Some(key) = merged.keys().find(|k| !allowed.iter().any(|a| a == *k)) {
        return Err(CliError::config(format!(
            "unknown config key `{key}`; expected one of: out, {}",
            allowed.join(", ")
        )));
    }
    let flags = serde_json::to_value(flags).map_err(|e| CliError::config(e.to_string()))?;
    if let Value::Object(flags) = flags {
        merged.extend(flags);
    }
    let args = serde_json::from_value(Value::Object(merged.clone())).map_err(|e| CliError::config(e.to_string()))?;
    Ok((args, out, merged))
}

fn load(path: &Path) -> Result<Map<String, Value>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(CliError::config(format!("config {} must hold a JSON object", path.display()))),
        Err(e) => Err(CliError::config(format!("config {}: {e}", path.display()))),
    }
}

pub fn require<T>(value: Option<T>, key: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::config(format!("missing required parameter `{key}`")))
}

/// Grid size from the flag or config, then the environment, then `default`.
pub fn grid_points(explicit: Option<usize>, default: usize) -> Result<(usize, &'static str), CliError> {
    if let Some(n) = explicit {
        return Ok((n, "argument"));
    }
    match std::env::var(GRID_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(|n| (n, "environment"))
            .map_err(|_| CliError::config(format!("{GRID_ENV}={v:?} is not a positive integer"))),
        Err(_) => Ok((default, "default")),
    }
}

/// GHz (cycles per ns) to rad/ps.
pub fn ghz_to_rad_per_ps(nu: f64) -> f64 {
    std::f64::consts::TAU * nu * 1e-3
}

pub fn rad_per_ps_to_ghz(omega: f64) -> f64 {
    omega / std::f64::consts::TAU * 1e3
}

/// Parses `start:stop:step`. Values are rounded to 12 significant digits
/// so that nominal points such as 3, -0.3 or 0 come out exact.
pub fn parse_range(text: &str, key: &str) -> Result<Vec<f64>, CliError> {
    let bad = |why: &str| CliError::config(format!("`{key}` = {text:?}: {why}; expected start:stop:step"));
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(bad("need three fields"));
    }
    let mut nums = [0.0f64; 3];
    for (slot, p) in nums.iter_mut().zip(&parts) {
        *slot = p.trim().parse().map_err(|_| bad("not a number"))?;
        if !slot.is_finite() {
            return Err(bad("not finite"));
        }
    }
    let [start, stop, step] = nums;
    if step <= 0.0 {
        return Err(bad("step must be positive"));
    }
    if stop < start {
        return Err(bad("stop is below start"));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > 10_000_000 {
        return Err(bad("more than 10^7 points"));
    }
    Ok((0..count).map(|i| snap(start + i as f64 * step, step)).collect())
}

fn snap(x: f64, step: f64) -> f64 {
    if x.abs() < 1e-9 * step {
        return 0.0;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Parses a pulse description such as `gauss:sigma_t=1,t0=0.5`.
pub fn parse_pulse(text: &str) -> Result<PulseShape<f64>, CliError> {
    let bad = |why: String| CliError::config(format!("pulse {text:?}: {why}"));
    let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
    let mut fields: Vec<(String, f64)> = Vec::new();
    for item in rest.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| bad(format!("`{item}` is not key=value")))?;
        let v: f64 = v.trim().parse().map_err(|_| bad(format!("`{v}` is not a number")))?;
        fields.push((k.trim().to_string(), v));
    }
    let known: &[&str] = match kind.trim() {
        "gauss" | "gaussian" => &["sigma_t", "t0", "amplitude", "chirp_c2"],
        "exp" | "exponential" => &["tau", "rise", "t0"],
        "double" => &["sigma_t", "separation", "ratio", "t0"],
        "supergauss" | "supergaussian" => &["width", "order", "t0"],
        other => return Err(bad(format!("unknown pulse kind `{other}` (gauss, exp, double, supergauss)"))),
    };
    if let Some((k, _)) = fields.iter().find(|(k, _)| !known.contains(&k.as_str())) {
        return Err(bad(format!("unknown field `{k}`; expected {}", known.join(", "))));
    }
    let get = |k: &str| fields.iter().rev().find(|(f, _)| f == k).map(|(_, v)| *v);
    let need = |k: &str| get(k).ok_or_else(|| bad(format!("missing `{k}`")));
    let t0 = get("t0").unwrap_or(0.0);
    Ok(match kind.trim() {
        "gauss" | "gaussian" => PulseShape::Gaussian(GaussianPulseSpec {
            sigma_t: need("sigma_t")?,
            t0,
            amplitude: get("amplitude").unwrap_or(1.0),
            chirp_c2: get("chirp_c2").unwrap_or(0.0),
        }),
        "exp" | "exponential" => {
            let tau = need("tau")?;
            PulseShape::Exponential {
                tau,
                rise: get("rise").unwrap_or(0.1 * tau),
                t0,
            }
        }
        "double" => PulseShape::DoublePulse {
            sigma_t: need("sigma_t")?,
            separation: need("separation")?,
            ratio: get("ratio").unwrap_or(1.0),
            t0,
        },
        _ => {
            let order = get("order").unwrap_or(2.0);
            if order < 1.0 || order.fract() != 0.0 {
                return Err(bad("`order` must be a positive integer".into()));
            }
            PulseShape::SuperGaussian {
                width: need("width")?,
                order: order as u32,
                t0,
            }
        }
    })
}
