use std::process::ExitCode;

use clap::Parser;
use tracing_subscriber::EnvFilter;

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info")))
        .with_writer(std::io::stderr)
        .init();
    let cli = match csa_cli::Cli::try_parse() {
        Ok(cli) => cli,
        // clap would exit 2, which here means "no contact"
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { csa_cli::EXIT_ERROR } else { csa_cli::EXIT_OK });
        }
    };
    ExitCode::from(csa_cli::run(cli))
}
