//! Command-line front end: CSV ingestion, calibration, bound reports and
//! simulation drivers.

pub mod args;
pub mod commands;
pub mod error;
pub mod io;
pub mod report;

use args::{Cli, Command};
pub use error::{CliError, CliResult};

/// Runs one parsed command, inside a pool of `--threads` workers when given.
pub fn run(cli: &Cli) -> CliResult<()> {
    let go = || match &cli.command {
        Command::Fit(a) => commands::cmd_fit(a),
        Command::Bound(a) => commands::cmd_bound(a),
        Command::Curves(a) => commands::cmd_curves(a),
        Command::Simulate(a) => commands::cmd_simulate(a),
    };
    match cli.threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .install(go),
        None => go(),
    }
}
