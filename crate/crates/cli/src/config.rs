//! Flat `key=value` experiment configuration files.
//!
//! Recognized keys: `omega`, `a`, `b`, `t_u`, `t1`, `t2`,
//! `model` (`standard` | `hypersurface` | `direct`), `v` (hypersurface
//! only), `t_a` (direct only), `n_trials`, `seed`. Blank lines and lines
//! starting with `#` are ignored; unknown or duplicate keys are errors.
//! `t2` defaults to `t1`, `n_trials` to 1, `seed` to 0.

use std::collections::BTreeMap;

use proxyclock_core::protocol::ReductionModel;
use proxyclock_core::spacetime::{FlatHypersurface, SpacetimeEvent};
use proxyclock_core::ProtocolConfig64;

use crate::CliError;

const KNOWN_KEYS: [&str; 11] = [
    "omega", "a", "b", "t_u", "t1", "t2", "model", "v", "t_a", "n_trials", "seed",
];

fn config_err(message: String) -> CliError {
    CliError::Config(message)
}

fn parse_f64(map: &BTreeMap<String, String>, key: &str) -> Result<Option<f64>, CliError> {
    match map.get(key) {
        None => Ok(None),
        Some(raw) => raw
            .parse::<f64>()
            .map(Some)
            .map_err(|_| config_err(format!("key `{key}`: `{raw}` is not a number"))),
    }
}

fn parse_u64(map: &BTreeMap<String, String>, key: &str) -> Result<Option<u64>, CliError> {
    match map.get(key) {
        None => Ok(None),
        Some(raw) => raw
            .parse::<u64>()
            .map(Some)
            .map_err(|_| config_err(format!("key `{key}`: `{raw}` is not a non-negative integer"))),
    }
}

fn require(value: Option<f64>, key: &str) -> Result<f64, CliError> {
    value.ok_or_else(|| config_err(format!("missing required key `{key}`")))
}

/// Parse a configuration file body into a validated protocol configuration.
pub fn parse_config(text: &str) -> Result<ProtocolConfig64, CliError> {
    let mut map: BTreeMap<String, String> = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| config_err(format!("line {}: expected key=value", lineno + 1)))?;
        let key = key.trim();
        let value = value.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(config_err(format!("line {}: unknown key `{key}`", lineno + 1)));
        }
        if map.insert(key.to_string(), value.to_string()).is_some() {
            return Err(config_err(format!("line {}: duplicate key `{key}`", lineno + 1)));
        }
    }

    let omega = require(parse_f64(&map, "omega")?, "omega")?;
    let a = require(parse_f64(&map, "a")?, "a")?;
    let b = require(parse_f64(&map, "b")?, "b")?;
    let t_u = require(parse_f64(&map, "t_u")?, "t_u")?;
    let t1 = require(parse_f64(&map, "t1")?, "t1")?;
    let t2 = parse_f64(&map, "t2")?.unwrap_or(t1);
    let n_trials = parse_u64(&map, "n_trials")?.unwrap_or(1);
    let seed = parse_u64(&map, "seed")?.unwrap_or(0);
    let v = parse_f64(&map, "v")?;
    let t_a = parse_f64(&map, "t_a")?;

    let model_name = map
        .get("model")
        .ok_or_else(|| config_err("missing required key `model`".into()))?;
    let model = match model_name.as_str() {
        "standard" => {
            if v.is_some() || t_a.is_some() {
                return Err(config_err(
                    "keys `v` and `t_a` are not allowed with model=standard".into(),
                ));
            }
            ReductionModel::StandardQm
        }
        "hypersurface" => {
            if t_a.is_some() {
                return Err(config_err("key `t_a` is not allowed with model=hypersurface".into()));
            }
            let v = v.ok_or_else(|| config_err("model=hypersurface requires key `v`".into()))?;
            let anchor = SpacetimeEvent::new(b, t1)
                .map_err(|e| config_err(format!("invalid anchor event: {e}")))?;
            let surface =
                FlatHypersurface::new(anchor, v).map_err(|e| config_err(e.to_string()))?;
            ReductionModel::HypersurfaceCollapse(surface)
        }
        "direct" => {
            if v.is_some() {
                return Err(config_err("key `v` is not allowed with model=direct".into()));
            }
            let t_a =
                t_a.ok_or_else(|| config_err("model=direct requires key `t_a`".into()))?;
            ReductionModel::DirectMeasurement(t_a)
        }
        other => {
            return Err(config_err(format!(
                "key `model`: `{other}` is not one of standard|hypersurface|direct"
            )))
        }
    };

    let config = ProtocolConfig64 {
        omega,
        a,
        b,
        t_u,
        t1,
        t2,
        model,
        n_trials,
        seed,
    };
    config.validate().map_err(|e| config_err(e.to_string()))?;
    Ok(config)
}

/// Canonical `key=value` serialization; reparsing it yields an identical
/// configuration (floats are printed in shortest round-trip form).
pub fn format_config(config: &ProtocolConfig64) -> String {
    let mut out = String::new();
    let mut push = |key: &str, value: String| {
        out.push_str(key);
        out.push('=');
        out.push_str(&value);
        out.push('\n');
    };
    push("omega", config.omega.to_string());
    push("a", config.a.to_string());
    push("b", config.b.to_string());
    push("t_u", config.t_u.to_string());
    push("t1", config.t1.to_string());
    push("t2", config.t2.to_string());
    match config.model {
        ReductionModel::StandardQm => push("model", "standard".into()),
        ReductionModel::HypersurfaceCollapse(surface) => {
            push("model", "hypersurface".into());
            push("v", surface.velocity().to_string());
        }
        ReductionModel::DirectMeasurement(t_a) => {
            push("model", "direct".into());
            push("t_a", t_a.to_string());
        }
    }
    push("n_trials", config.n_trials.to_string());
    push("seed", config.seed.to_string());
    out
}
