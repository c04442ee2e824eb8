//! Run configuration: defaults, an optional JSON file named by
//! `DDELTA_CONFIG`, then command-line overrides.

use serde_json::{json, Value};

use crate::charzeros::Rect;
use crate::currents::{DEFAULT_GRID, DEFAULT_LAMBDAS};
use crate::error::{Error, Result};
use crate::json::{array, field, float, strict_keys, uint, violation, FromJson, ToJson};

pub const CONFIG_ENV: &str = "DDELTA_CONFIG";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub tol: f64,
    pub rect: Rect,
    pub lambda_schedule: Vec<f64>,
    pub grid: usize,
    pub format: Format,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tol: 1e-9,
            rect: Rect { re_min: -1.0, re_max: 1.0, im_min: -20.0, im_max: 20.0 },
            lambda_schedule: DEFAULT_LAMBDAS.to_vec(),
            grid: DEFAULT_GRID,
            format: Format::Json,
            seed: 0,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Config(format!("tol must be positive, got {}", self.tol)));
        }
        if self.grid < 16 {
            return Err(Error::Config(format!("grid must be at least 16, got {}", self.grid)));
        }
        if self.lambda_schedule.len() < 2 || self.lambda_schedule.iter().any(|l| !(*l > 0.0)) {
            return Err(Error::Config("lambda_schedule needs two or more positive values".into()));
        }
        Ok(())
    }

    /// Defaults overlaid with the file named by `DDELTA_CONFIG`, if set.
    pub fn from_env() -> Result<Config> {
        match std::env::var_os(CONFIG_ENV) {
            None => Ok(Config::default()),
            Some(p) => {
                let text = std::fs::read_to_string(&p)
                    .map_err(|e| Error::Config(format!("cannot read {}: {e}", p.to_string_lossy())))?;
                Config::from_json_str(&text)
            }
        }
    }
}

impl ToJson for Config {
    fn to_json(&self) -> Value {
        json!({
            "tol": self.tol,
            "rect": self.rect.to_json(),
            "lambda_schedule": self.lambda_schedule,
            "grid": self.grid,
            "format": match self.format { Format::Json => "json", Format::Text => "text" },
            "seed": self.seed,
        })
    }
}

impl FromJson for Config {
    /// Missing fields keep their defaults; unknown fields are rejected.
    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        strict_keys(v, path, &["tol", "rect", "lambda_schedule", "grid", "format", "seed"])?;
        let mut c = Config::default();
        let has = |k: &str| v.get(k).is_some();
        if has("tol") {
            let (x, p) = field(v, path, "tol")?;
            c.tol = float(x, &p)?;
        }
        if has("rect") {
            let (x, p) = field(v, path, "rect")?;
            c.rect = Rect::from_json_at(x, &p)?;
        }
        if has("lambda_schedule") {
            let (x, p) = field(v, path, "lambda_schedule")?;
            c.lambda_schedule = array(x, &p)?.iter().enumerate().map(|(i, l)| float(l, &format!("{p}[{i}]"))).collect::<Result<_>>()?;
        }
        if has("grid") {
            let (x, p) = field(v, path, "grid")?;
            c.grid = uint(x, &p)? as usize;
        }
        if has("format") {
            let (x, p) = field(v, path, "format")?;
            c.format = match x.as_str() {
                Some("json") => Format::Json,
                Some("text") => Format::Text,
                _ => return Err(violation(&p, "expected \"json\" or \"text\"")),
            };
        }
        if has("seed") {
            let (x, p) = field(v, path, "seed")?;
            c.seed = uint(x, &p)?;
        }
        c.validate().map_err(|e| violation(path, e.to_string()))?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_and_strict() {
        let c = Config::from_json_str(r#"{"tol": 1e-6, "format": "text"}"#).unwrap();
        assert_eq!(c.tol, 1e-6);
        assert_eq!(c.format, Format::Text);
        assert_eq!(c.grid, DEFAULT_GRID);
        assert!(matches!(Config::from_json_str(r#"{"tolerance": 1}"#), Err(Error::SchemaViolation { path, .. }) if path == "$.tolerance"));
        assert!(Config::from_json_str(r#"{"grid": 8}"#).is_err());
        let d = Config::default();
        assert_eq!(Config::from_json(&d.to_json()).unwrap(), d);
    }
}
