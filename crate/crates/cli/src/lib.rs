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

//! Scenario-driven command line front end for cosmolab.

pub mod commands;
pub mod report;
pub mod scenario;

use commands::{Command, Ctx};
use report::{Report, Sidecars};
use scenario::Built;
use std::path::Path;

/// Runs one command on a built scenario, writing sidecar CSVs into `out`.
pub fn execute(cmd: Command, built: &Built, seed: u64, out: &Path) -> std::io::Result<Report> {
    let mut sidecars = Sidecars::new(out)?;
    let checks = {
        let mut ctx = Ctx {
            built,
            seed,
            out: &mut sidecars,
        };
        commands::run(cmd, &mut ctx)
    };
    Ok(Report::assemble(
        cmd.name(),
        &built.scenario.name,
        &built.hash,
        seed,
        checks,
        sidecars.into_names(),
    ))
}
