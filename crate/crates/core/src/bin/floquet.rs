use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use floquet_shard::io::{exit_code, parse_config, run_command, Command, PartialConfig};

/// Sharded simulation of random Floquet chains.
#[derive(Parser)]
#[command(version)]
struct Cli {
    /// heat, echo, bench or fit.
    #[arg(value_enum)]
    command: Command,
    /// Flat TOML file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    flags: PartialConfig,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let result = parse_config(cli.command, cli.config.as_deref(), cli.flags).and_then(|c| run_command(&c));
    match result {
        Ok(outcome) => {
            for line in &outcome.summary {
                println!("{line}");
            }
            for file in &outcome.files {
                log::info!("wrote {}", file.display());
            }
            if outcome.partial_failure {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
