//! Command-line pipeline and HTTP service for conceptual controversy maps.

pub mod commands;
pub mod error;
pub mod service;

use std::io::Write;

use commands::{Cli, Command};
use error::{CliError, CliResult};

/// Runs a parsed command line; `serve` blocks until the server stops.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Serve(s) => {
            let p = &s.pipeline;
            let mut snapshot =
                service::Snapshot::new(&p.corpus()?, &p.conventions, p.level, p.max_factors)?;
            if let Some(dir) = &s.assets {
                snapshot = snapshot.with_assets(dir)?;
            }
            let runtime = tokio::runtime::Runtime::new()
                .map_err(|e| CliError::Serve(format!("runtime: {e}")))?;
            eprintln!("listening on http://{}:{}", s.host, s.port);
            runtime.block_on(service::serve(snapshot, &s.host, s.port))
        }
        other => commands::execute(other, stdout),
    }
}
