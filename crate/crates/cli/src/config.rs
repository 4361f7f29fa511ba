//! Run configuration: JSON config file, `--set`/`--qn` overrides and defaults.

use serde::Deserialize;
use spectra_forge::models::{ModelId, Values};
use std::collections::BTreeMap;
use std::path::Path;

use crate::error::CliError;

/// Version of the JSON config layout accepted by `--config`.
pub const CONFIG_SCHEMA: u32 = 1;

/// Default seed of every randomized suite.
pub const DEFAULT_SEED: u64 = 7;

/// Contents of a `--config` file.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub schema: u32,
    #[serde(default)]
    pub model: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub qn: BTreeMap<String, f64>,
    #[serde(default)]
    pub p: Option<usize>,
    #[serde(default)]
    pub p_max: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let cfg: ConfigFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if cfg.schema != CONFIG_SCHEMA {
            return Err(format!("unsupported schema {} (expected {CONFIG_SCHEMA})", cfg.schema));
        }
        Ok(cfg)
    }
}

/// Command-line overrides shared by the model-bound verbs.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub model: Option<String>,
    pub set: Vec<String>,
    pub qn: Vec<String>,
    pub config: Option<std::path::PathBuf>,
    pub p: Option<usize>,
    pub p_max: Option<usize>,
    pub seed: Option<u64>,
}

/// Fully resolved configuration: flags over file over defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelId,
    pub params: Values,
    pub qn: Values,
    pub p: usize,
    pub p_max: usize,
    pub seed: u64,
}

/// Parses `k=v` pairs; each entry may hold several comma-separated pairs.
pub fn parse_assignments(entries: &[String]) -> Result<Values, CliError> {
    let mut out = Values::new();
    for entry in entries {
        for pair in entry.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("expected key=value, got `{pair}`")))?;
            let value: f64 = v
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("value of `{}` is not a number: `{v}`", k.trim())))?;
            out.insert(k.trim().to_string(), value);
        }
    }
    Ok(out)
}

impl RunConfig {
    pub fn resolve(o: &Overrides) -> Result<Self, CliError> {
        let file = match &o.config {
            Some(path) => Some(ConfigFile::load(path)?),
            None => None,
        };
        let model_name = o
            .model
            .clone()
            .or_else(|| file.as_ref().and_then(|f| f.model.clone()))
            .ok_or_else(|| CliError::Config("no model given (use --model or a config file)".into()))?;
        let model: ModelId = model_name.parse()?;
        let mut params = file.as_ref().map(|f| f.params.clone()).unwrap_or_default();
        params.extend(parse_assignments(&o.set)?);
        let mut qn = file.as_ref().map(|f| f.qn.clone()).unwrap_or_default();
        qn.extend(parse_assignments(&o.qn)?);
        let p = o.p.or(file.as_ref().and_then(|f| f.p)).unwrap_or(0);
        let p_max = o.p_max.or(file.as_ref().and_then(|f| f.p_max)).unwrap_or(p);
        if p_max < p {
            return Err(CliError::Config(format!("--p-max {p_max} is below --p {p}")));
        }
        let seed = o.seed.or(file.as_ref().and_then(|f| f.seed)).unwrap_or(DEFAULT_SEED);
        Ok(Self {
            model,
            params,
            qn,
            p,
            p_max,
            seed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assignments_split_on_commas() {
        let v = parse_assignments(&["N=3,c0=1".into(), "c1 = 0.5".into()]).unwrap();
        assert_eq!(v["N"], 3.0);
        assert_eq!(v["c0"], 1.0);
        assert_eq!(v["c1"], 0.5);
        assert!(parse_assignments(&["N".into()]).is_err());
        assert!(parse_assignments(&["N=x".into()]).is_err());
    }

    #[test]
    fn config_rejects_unknown_keys_and_schema() {
        assert!(ConfigFile::parse(r#"{"schema": 1, "model": "kc_nd"}"#).is_ok());
        assert!(ConfigFile::parse(r#"{"schema": 1, "modle": "kc_nd"}"#).is_err());
        assert!(ConfigFile::parse(r#"{"schema": 2}"#).is_err());
        assert!(ConfigFile::parse(r#"{"model": "kc_nd"}"#).is_err());
    }
}
