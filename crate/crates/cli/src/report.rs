/*
Copyright 2026 The cosmolab Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

//! Deterministic JSON reports and sidecar CSV files.

use serde::Serialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub const REPORT_SCHEMA: &str = "cosmolab.report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

/// Where a pass/fail threshold comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// An inequality proved for regular domains.
    TheoryBound,
    /// A numerical tolerance chosen for this tool.
    ArtifactTolerance,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Threshold {
    pub rule: String,
    pub value: f64,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub values: BTreeMap<String, f64>,
    pub error_bars: BTreeMap<String, f64>,
    pub thresholds: Vec<Threshold>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status) -> Self {
        Self {
            name: name.into(),
            status,
            values: BTreeMap::new(),
            error_bars: BTreeMap::new(),
            thresholds: Vec::new(),
            message: None,
        }
    }

    pub fn info(name: impl Into<String>) -> Self {
        Self::new(name, Status::Info)
    }

    pub fn verdict(name: impl Into<String>, ok: bool) -> Self {
        Self::new(name, if ok { Status::Pass } else { Status::Fail })
    }

    /// A failure carrying an error message in place of values.
    pub fn failed(name: impl Into<String>, err: impl std::fmt::Display) -> Self {
        let mut c = Self::new(name, Status::Fail);
        c.message = Some(err.to_string());
        c
    }

    pub fn value(mut self, key: &str, v: f64) -> Self {
        self.values.insert(key.to_string(), v);
        self
    }

    pub fn bar(mut self, key: &str, v: f64) -> Self {
        self.error_bars.insert(key.to_string(), v);
        self
    }

    pub fn threshold(mut self, rule: &str, value: f64, provenance: Provenance) -> Self {
        self.thresholds.push(Threshold {
            rule: rule.to_string(),
            value,
            provenance,
        });
        self
    }

    pub fn message(mut self, m: impl Into<String>) -> Self {
        self.message = Some(m.into());
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub artifact_version: String,
    pub command: String,
    pub scenario: String,
    pub scenario_hash: String,
    pub seed: u64,
    pub status: Status,
    pub checks: Vec<Check>,
    pub artifacts: Vec<String>,
}

impl Report {
    /// Sorts checks by name and derives the overall status.
    pub fn assemble(
        command: &str,
        scenario: &str,
        hash: &str,
        seed: u64,
        mut checks: Vec<Check>,
        mut artifacts: Vec<String>,
    ) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        artifacts.sort();
        let status = if checks.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else {
            Status::Pass
        };
        Self {
            schema: REPORT_SCHEMA,
            artifact_version: format!("cosmolab {}", env!("CARGO_PKG_VERSION")),
            command: command.to_string(),
            scenario: scenario.to_string(),
            scenario_hash: hash.to_string(),
            seed,
            status,
            checks,
            artifacts,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Collects CSV files written under one output directory.
pub struct Sidecars {
    dir: PathBuf,
    written: Vec<String>,
}

impl Sidecars {
    pub fn new(dir: &Path) -> std::io::Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    /// Writes serializable rows with a header derived from the field names.
    pub fn rows<T: Serialize>(&mut self, file: &str, rows: &[T]) -> Result<(), String> {
        self.with(file, |h| -> Result<(), csv::Error> {
            let mut w = csv::Writer::from_writer(h);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
            Ok(())
        })
    }

    /// Writes through a callback that receives a file handle.
    pub fn with<F, E>(&mut self, file: &str, f: F) -> Result<(), String>
    where
        F: FnOnce(std::fs::File) -> Result<(), E>,
        E: std::fmt::Display,
    {
        let h = std::fs::File::create(self.dir.join(file)).map_err(|e| format!("{file}: {e}"))?;
        f(h).map_err(|e| format!("{file}: {e}"))?;
        self.written.push(file.to_string());
        Ok(())
    }

    pub fn into_names(self) -> Vec<String> {
        self.written
    }
}
