//! Plain-text `key = value` model configuration.
//!
//! ```text
//! # N13 with a twisted interior curve
//! model = N13
//! boundary_lengths = 2, 2, 2
//! pants_lengths = 1.5
//! twists = 0.25
//! core_lengths = 1
//! ```
//!
//! Lists are comma or whitespace separated; `#` starts a comment. Keys a
//! model does not use are rejected, missing ones take the model default.

use crate::error::{Error, Result};
use crate::surface::{builtin_model, HolonomyRep, ModelName};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KvEntry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

/// Splits a config text into entries. Keys are normalised to lower case
/// with `-` read as `_`; a repeated key is an error.
pub fn parse_kv(text: &str) -> Result<Vec<KvEntry>> {
    let mut out: Vec<KvEntry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (k, v) = body.split_once('=').ok_or_else(|| Error::Config {
            line,
            msg: format!("expected 'key = value', got '{body}'"),
        })?;
        let key = k.trim().to_ascii_lowercase().replace('-', "_");
        if key.is_empty() {
            return Err(Error::Config {
                line,
                msg: "empty key".into(),
            });
        }
        if let Some(prev) = out.iter().find(|e| e.key == key) {
            return Err(Error::Config {
                line,
                msg: format!("duplicate key '{key}' (first on line {})", prev.line),
            });
        }
        out.push(KvEntry {
            line,
            key,
            value: v.trim().to_string(),
        });
    }
    Ok(out)
}

/// Parses a comma/whitespace separated list of reals.
pub fn parse_list(value: &str, line: usize) -> Result<Vec<f64>> {
    value
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>().map_err(|_| Error::Config {
                line,
                msg: format!("not a number: '{s}'"),
            })
        })
        .collect()
}

pub const MODEL_KEYS: [&str; 5] = ["model", "pants_lengths", "twists", "core_lengths", "boundary_lengths"];

#[derive(Clone, Debug, PartialEq)]
pub struct ModelConfig {
    pub model: ModelName,
    pub pants_lengths: Option<Vec<f64>>,
    pub twists: Option<Vec<f64>>,
    pub core_lengths: Option<Vec<f64>>,
    pub boundary_lengths: Option<Vec<f64>>,
}

impl ModelConfig {
    pub fn new(model: ModelName) -> Self {
        Self {
            model,
            pants_lengths: None,
            twists: None,
            core_lengths: None,
            boundary_lengths: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_entries(&parse_kv(text)?)
    }

    /// Builds from entries; any key outside [`MODEL_KEYS`] is an error.
    pub fn from_entries(entries: &[KvEntry]) -> Result<Self> {
        let model = match entries.iter().find(|e| e.key == "model") {
            Some(e) => ModelName::parse(&e.value).map_err(|_| Error::Config {
                line: e.line,
                msg: format!("unknown model '{}'", e.value),
            })?,
            None => {
                return Err(Error::Config {
                    line: 0,
                    msg: "missing key 'model'".into(),
                })
            }
        };
        let mut cfg = Self::new(model);
        for e in entries.iter().filter(|e| e.key != "model") {
            cfg.set(&e.key, &e.value, e.line)?;
        }
        Ok(cfg)
    }

    /// Sets one list-valued key.
    pub fn set(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        let slot = match key {
            "pants_lengths" => &mut self.pants_lengths,
            "twists" => &mut self.twists,
            "core_lengths" => &mut self.core_lengths,
            "boundary_lengths" => &mut self.boundary_lengths,
            _ => {
                return Err(Error::Config {
                    line,
                    msg: format!("unknown key '{key}'"),
                })
            }
        };
        *slot = Some(parse_list(value, line)?);
        Ok(())
    }

    /// The parameter vector [`builtin_model`] expects.
    pub fn parameters(&self) -> Result<Vec<f64>> {
        let mut p = self.model.default_parameters();
        let (cores, boundary, pants, twists): (&[usize], &[usize], &[usize], &[usize]) = match self.model {
            ModelName::N12 => (&[2], &[0, 1], &[], &[]),
            ModelName::N21 => (&[0, 1], &[2], &[], &[]),
            ModelName::N3 => (&[0, 1, 2], &[], &[], &[]),
            ModelName::N13 => (&[5], &[0, 1, 2], &[3], &[4]),
        };
        let assign = |p: &mut Vec<f64>, name: &str, slots: &[usize], vals: &Option<Vec<f64>>| -> Result<()> {
            let Some(v) = vals else { return Ok(()) };
            if slots.is_empty() && !v.is_empty() {
                return Err(Error::Config {
                    line: 0,
                    msg: format!("{} takes no {name}", self.model),
                });
            }
            if v.len() != slots.len() {
                return Err(Error::Config {
                    line: 0,
                    msg: format!("{} expects {} {name}, got {}", self.model, slots.len(), v.len()),
                });
            }
            for (&i, &x) in slots.iter().zip(v) {
                p[i] = x;
            }
            Ok(())
        };
        assign(&mut p, "core_lengths", cores, &self.core_lengths)?;
        assign(&mut p, "boundary_lengths", boundary, &self.boundary_lengths)?;
        assign(&mut p, "twists", twists, &self.twists)?;
        if self.model == ModelName::N3 {
            // pants boundaries capped by crosscaps: core = half the boundary
            if let Some(v) = &self.pants_lengths {
                if self.core_lengths.is_some() {
                    return Err(Error::Config {
                        line: 0,
                        msg: "N3 takes pants_lengths or core_lengths, not both".into(),
                    });
                }
                let half: Vec<f64> = v.iter().map(|x| x / 2.0).collect();
                assign(&mut p, "pants_lengths", cores, &Some(half))?;
            }
        } else {
            assign(&mut p, "pants_lengths", pants, &self.pants_lengths)?;
        }
        Ok(p)
    }

    pub fn build(&self) -> Result<HolonomyRep> {
        builtin_model(self.model, &self.parameters()?)
    }
}
