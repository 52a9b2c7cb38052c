//! Merges a `key = value` config file with command line flags. Flags win;
//! a file key no subcommand option claims is a usage error.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crosscap::config::{parse_kv, parse_list, KvEntry, ModelConfig, MODEL_KEYS};
use crosscap::surface::ModelName;

use crate::CliError;

#[derive(Debug, Default)]
pub struct Settings {
    file: BTreeMap<String, KvEntry>,
    used: BTreeSet<String>,
}

impl Settings {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        Self::from_text(&text)
    }

    pub fn from_text(text: &str) -> Result<Self, CliError> {
        let entries = parse_kv(text).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(Self {
            file: entries.into_iter().map(|e| (e.key.clone(), e)).collect(),
            used: BTreeSet::new(),
        })
    }

    fn file_value<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: Display,
    {
        match self.file.get(key) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse::<T>()
                .map(Some)
                .map_err(|err| CliError::Usage(format!("config line {}: {key}: {err}", e.line))),
        }
    }

    /// Flag if given, else the file value, else nothing.
    pub fn opt<T: FromStr>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>, CliError>
    where
        T::Err: Display,
    {
        self.used.insert(key.to_string());
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.file_value(key),
        }
    }

    pub fn get<T: FromStr>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T, CliError>
    where
        T::Err: Display,
    {
        Ok(self.opt(key, flag)?.unwrap_or(default))
    }

    /// A comma separated list of reals.
    pub fn list(&mut self, key: &str, flag: Option<String>, default: &[f64]) -> Result<Vec<f64>, CliError> {
        match self.opt::<String>(key, flag)? {
            None => Ok(default.to_vec()),
            Some(s) => parse_list(&s, 0).map_err(|e| CliError::Usage(format!("{key}: {e}"))),
        }
    }

    /// Model and parameter vector. `--params` replaces the whole vector;
    /// otherwise the file's model keys refine the defaults.
    pub fn model(
        &mut self,
        flag_model: Option<String>,
        flag_params: Option<String>,
        default: ModelName,
    ) -> Result<(ModelName, Vec<f64>), CliError> {
        let name = match self.opt::<String>("model", flag_model)? {
            None => default,
            Some(s) => ModelName::parse(&s).map_err(|e| CliError::Usage(e.to_string()))?,
        };
        let mut cfg = ModelConfig::new(name);
        for key in MODEL_KEYS.iter().filter(|k| **k != "model") {
            self.used.insert(key.to_string());
            if let Some(e) = self.file.get(*key) {
                cfg.set(key, &e.value, e.line)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
            }
        }
        let params = match self.opt::<String>("params", flag_params)? {
            Some(s) => parse_list(&s, 0).map_err(|e| CliError::Usage(format!("params: {e}")))?,
            None => cfg.parameters().map_err(|e| CliError::Usage(e.to_string()))?,
        };
        if params.len() != name.arity() {
            return Err(CliError::Usage(format!(
                "{name} expects {} parameters ({}), got {}",
                name.arity(),
                name.parameter_names().join(", "),
                params.len()
            )));
        }
        Ok((name, params))
    }

    /// Fails on any file key no option asked for.
    pub fn finish(&self) -> Result<(), CliError> {
        match self.file.values().find(|e| !self.used.contains(&e.key)) {
            None => Ok(()),
            Some(e) => Err(CliError::Usage(format!(
                "config line {}: unknown key '{}'",
                e.line, e.key
            ))),
        }
    }
}
