// SPDX-License-Identifier: MIT OR Apache-2.0

//! Optional JSON config file.
//!
//! The file is a flat object whose keys are the long flag names with `_`
//! in place of `-` (`t_end`, `k_max`, ...). `A` is accepted for `lambda`.
//! Flags given on the command line win over the file.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

use crate::args::ModelArgs;
use crate::exit::Exit;
use agehopf::ModelParams64;

#[derive(Debug, Default, Clone)]
pub struct Config {
    values: Map<String, Value>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        match serde_json::from_str::<Value>(&text) {
            Ok(Value::Object(values)) => Ok(Self { values }),
            Ok(_) => Err(Exit::validation(format!("config {} must hold a JSON object", path.display())).into()),
            Err(e) => Err(Exit::validation(format!("config {}: {e}", path.display())).into()),
        }
    }

    fn get<T: DeserializeOwned>(&self, key: &str) -> Result<Option<T>> {
        match self.values.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => serde_json::from_value(v.clone())
                .map(Some)
                .map_err(|e| Exit::validation(format!("config key {key}: {e}")).into()),
        }
    }

    /// `flag` if given, else the config value under `key`.
    pub fn pick<T: DeserializeOwned>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    pub fn pick_or<T: DeserializeOwned>(&self, flag: Option<T>, key: &str, default: T) -> Result<T> {
        Ok(self.pick(flag, key)?.unwrap_or(default))
    }

    pub fn pick_path(&self, flag: Option<PathBuf>, key: &str) -> Result<Option<PathBuf>> {
        Ok(self.pick::<String>(flag.map(|p| p.to_string_lossy().into_owned()), key)?.map(PathBuf::from))
    }

    /// A switch is on if either the flag or the config sets it.
    pub fn switch(&self, flag: bool, key: &str) -> Result<bool> {
        Ok(flag || self.get::<bool>(key)?.unwrap_or(false))
    }
}

/// Resolve the model constants and the config they may come from.
pub fn model(args: &ModelArgs) -> Result<(ModelParams64, Config)> {
    let cfg = Config::load(args.config.as_deref())?;
    let lambda = match cfg.pick(args.lambda, "lambda")? {
        Some(v) => Some(v),
        None => cfg.get("A")?,
    };
    let missing = |name: &str| Exit::validation(format!("missing required value --{name} (flag or config key)"));
    let params = ModelParams64::new(
        lambda.ok_or_else(|| missing("lambda"))?,
        cfg.pick(args.mu, "mu")?.ok_or_else(|| missing("mu"))?,
        cfg.pick(args.eta, "eta")?.ok_or_else(|| missing("eta"))?,
    );
    Ok((params.validate()?, cfg))
}
