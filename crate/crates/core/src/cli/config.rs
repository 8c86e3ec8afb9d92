//! Sweep configuration: flat `key = value` lines, `#` comments.
//!
//! Values are comma-separated lists whose items are numbers or inclusive
//! ranges `start:stop:step`. An empty value gives an empty axis.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("line {line}: key `{key}`: {message}")]
    Value {
        line: usize,
        key: String,
        message: String,
    },
    #[error("missing key `{key}`")]
    Missing { key: &'static str },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub beta_a: Vec<f64>,
    pub beta_b: Vec<f64>,
    pub omega_a: Vec<f64>,
    pub omega_b: Vec<f64>,
    pub tol: Option<f64>,
}

const AXES: [&str; 4] = ["beta_a", "beta_b", "omega_a", "omega_b"];
/// Guards against runaway ranges.
const MAX_AXIS: usize = 1_000_000;

fn parse_number(s: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| format!("invalid number `{}`", s.trim()))
}

fn expand_range(item: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = item.split(':').collect();
    match parts[..] {
        [single] => Ok(vec![parse_number(single)?]),
        [start, stop, step] => {
            let (start, stop, step) = (parse_number(start)?, parse_number(stop)?, parse_number(step)?);
            if step <= 0.0 {
                return Err(format!("range step must be positive, got {step}"));
            }
            if stop < start {
                return Err(format!("range stop {stop} is below start {start}"));
            }
            // tolerate rounding so that the stop value is included
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            if count > MAX_AXIS {
                return Err(format!("range has {count} points, limit is {MAX_AXIS}"));
            }
            Ok((0..count).map(|i| start + i as f64 * step).collect())
        }
        _ => Err(format!("invalid item `{item}`, expected a number or start:stop:step")),
    }
}

pub fn parse_list(value: &str) -> Result<Vec<f64>, String> {
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for item in value.split(',') {
        out.extend(expand_range(item.trim())?);
    }
    Ok(out)
}

pub fn parse_config(text: &str) -> Result<SweepConfig, ConfigError> {
    let mut axes: [Option<Vec<f64>>; 4] = Default::default();
    let mut tol = None;
    let mut seen_tol = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or(ConfigError::Syntax { line })?;
        let key = key.trim();
        let value_err = |message: String| ConfigError::Value {
            line,
            key: key.to_string(),
            message,
        };
        let duplicate = || ConfigError::Duplicate {
            line,
            key: key.to_string(),
        };
        if key == "tol" {
            if seen_tol {
                return Err(duplicate());
            }
            seen_tol = true;
            let t = parse_number(value).map_err(value_err)?;
            if t < 0.0 {
                return Err(value_err(format!("tolerance must be non-negative, got {t}")));
            }
            tol = Some(t);
            continue;
        }
        let Some(slot) = AXES.iter().position(|&k| k == key) else {
            return Err(ConfigError::UnknownKey {
                line,
                key: key.to_string(),
            });
        };
        if axes[slot].is_some() {
            return Err(duplicate());
        }
        let values = parse_list(value).map_err(value_err)?;
        let label = if key.starts_with("beta") { "inverse temperatures" } else { "frequencies" };
        if key.starts_with("beta") && values.iter().any(|v| *v < 0.0) {
            return Err(value_err(format!("{label} must be non-negative")));
        }
        if key.starts_with("omega") && values.iter().any(|v| *v <= 0.0) {
            return Err(value_err(format!("{label} must be positive")));
        }
        axes[slot] = Some(values);
    }
    let [beta_a, beta_b, omega_a, omega_b] = axes;
    let take = |v: Option<Vec<f64>>, key: &'static str| v.ok_or(ConfigError::Missing { key });
    Ok(SweepConfig {
        beta_a: take(beta_a, "beta_a")?,
        beta_b: take(beta_b, "beta_b")?,
        omega_a: take(omega_a, "omega_a")?,
        omega_b: take(omega_b, "omega_b")?,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_ranges() {
        assert_eq!(parse_list("1, 2,3").unwrap(), vec![1.0, 2.0, 3.0]);
        let r = parse_list("0.1:0.5:0.1").unwrap();
        assert_eq!(r.len(), 5);
        assert!((r[4] - 0.5).abs() < 1e-12);
        assert_eq!(parse_list("1, 2:3:0.5").unwrap(), vec![1.0, 2.0, 2.5, 3.0]);
        assert!(parse_list("").unwrap().is_empty());
        assert!(parse_list("1:2:0").is_err());
        assert!(parse_list("1:2").is_err());
        assert!(parse_list("x").is_err());
    }

    #[test]
    fn full_config() {
        let c = parse_config(
            "# grid\nbeta_a = 1\nbeta_b = 0.5:1:0.25\nomega_a = 1\nomega_b = 2 # high\ntol = 1e-9\n",
        )
        .unwrap();
        assert_eq!(c.beta_b, vec![0.5, 0.75, 1.0]);
        assert_eq!(c.tol, Some(1e-9));
    }

    #[test]
    fn errors_name_the_key() {
        let e = parse_config("beta_a = 1\nbeta_c = 2\n").unwrap_err();
        assert_eq!(
            e,
            ConfigError::UnknownKey {
                line: 2,
                key: "beta_c".into()
            }
        );
        assert!(e.to_string().contains("beta_c"));
        let e = parse_config("beta_a = 1\nbeta_b = 1\nomega_a = 1\n").unwrap_err();
        assert!(e.to_string().contains("omega_b"));
        let e = parse_config("omega_a = 0\n").unwrap_err();
        assert!(e.to_string().contains("omega_a"));
        assert!(matches!(parse_config("beta_a 1\n"), Err(ConfigError::Syntax { line: 1 })));
    }

    #[test]
    fn empty_axis_is_allowed() {
        let c = parse_config("beta_a =\nbeta_b = 1\nomega_a = 1\nomega_b = 1\n").unwrap();
        assert!(c.beta_a.is_empty());
    }
}
