use clap::error::ErrorKind;
use clap::Parser;

use cartograph_cli::commands::Cli;
use cartograph_cli::error::EXIT_USAGE;

/// Clap's message on one line, without the usage and help hints.
fn one_line(e: &clap::Error) -> String {
    e.render()
        .to_string()
        .lines()
        .map(str::trim)
        .take_while(|l| !l.starts_with("Usage:"))
        .filter(|l| !l.is_empty() && !l.starts_with("For more information"))
        .collect::<Vec<_>>()
        .join(" ")
        .trim_start_matches("error: ")
        .to_string()
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            eprintln!("cartograph: {}", one_line(&e));
            std::process::exit(EXIT_USAGE);
        }
    };
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = cartograph_cli::run(&cli, &mut stdout) {
        eprintln!("cartograph: {e}");
        std::process::exit(e.exit_code());
    }
}
