//! Report emission: a JSON machine block and an optional CSV table.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Serialize)]
pub struct Report {
    pub claim: &'static str,
    pub subcommand: &'static str,
    pub version: &'static str,
    pub inputs: Value,
    pub outputs: Value,
    pub checks: BTreeMap<String, bool>,
    pub certified: bool,
    pub passed: bool,
    pub seed: Option<u64>,
}

impl Report {
    pub fn new(subcommand: &'static str, claim: &'static str, inputs: Value) -> Self {
        Self {
            claim,
            subcommand,
            version: env!("CARGO_PKG_VERSION"),
            inputs: canonical(inputs),
            outputs: Value::Null,
            checks: BTreeMap::new(),
            certified: true,
            passed: true,
            seed: None,
        }
    }

    pub fn outputs(mut self, v: impl Serialize) -> Self {
        self.outputs = canonical(serde_json::to_value(v).expect("report values serialize"));
        self
    }

    pub fn check(mut self, name: &str, ok: bool) -> Self {
        self.checks.insert(name.to_string(), ok);
        self.passed &= ok;
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Re-serializes through `Value` so object keys come out sorted.
fn canonical(v: Value) -> Value {
    match v {
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, canonical(v))).collect()),
        Value::Array(a) => Value::Array(a.into_iter().map(canonical).collect()),
        other => other,
    }
}

#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }
}

fn io(e: impl std::fmt::Display) -> CliError {
    CliError::Io(e.to_string())
}

/// Writes `<name>.json` and `<name>.csv` into `dir`, or prints the JSON to
/// stdout when there is no directory.
pub fn emit(report: &Report, table: Option<&Table>, dir: Option<&Path>) -> Result<(), CliError> {
    let json = report.to_json();
    match dir {
        None => print!("{json}"),
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(io)?;
            let stem = dir.join(report.subcommand);
            std::fs::write(stem.with_extension("json"), &json).map_err(io)?;
            if let Some(t) = table {
                std::fs::write(stem.with_extension("csv"), t.to_csv()?).map_err(io)?;
            }
            eprintln!("wrote {}", stem.with_extension("json").display());
        }
    }
    Ok(())
}
