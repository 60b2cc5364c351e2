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

use clap::Parser;
use cosmolab::commands::Command;
use cosmolab::report::Status;
use cosmolab::scenario;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Cosmological time, level geometry and metric checks on regular domains.
#[derive(Debug, Parser)]
#[command(name = "cosmolab", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Scenario file (JSON).
    #[arg(long)]
    scenario: PathBuf,
    /// Overrides the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for sidecar CSV files.
    #[arg(long, env = "COSMOLAB_OUT", default_value = "cosmolab-out")]
    out: PathBuf,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.threads {
        if k == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let mut parsed = match scenario::load(&cli.scenario) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(seed) = cli.seed {
        parsed.seed = seed;
    }
    let built = match scenario::build(parsed) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let seed = built.scenario.seed;
    let report = match cosmolab::execute(cli.command, &built, seed, &cli.out) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: cannot write to {}: {e}", cli.out.display());
            return ExitCode::from(2);
        }
    };
    // A closed pipe on stdout is not an error worth a panic.
    let _ = writeln!(std::io::stdout().lock(), "{}", report.to_json());
    if report.status == Status::Fail {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
