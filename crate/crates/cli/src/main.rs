use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use parastab_cli::{load_config, run_file, CliError};

#[derive(Parser)]
#[command(name = "parastab", version, about = "Stabilization simulator for a parametrically coupled qubit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        config: PathBuf,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Worker threads (overrides the config).
        #[arg(long)]
        workers: Option<usize>,
        /// Omit the timestamp so identical inputs give identical files.
        #[arg(long)]
        reproducible: bool,
    },
    /// Parse and validate a config file without running it.
    Validate { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            out,
            workers,
            reproducible,
        } => {
            if workers == Some(0) {
                eprintln!("error kind=config exit=1 message=\"--workers must be at least 1\"");
                return ExitCode::from(1);
            }
            run_file(&config, &out, workers, reproducible).map(|r| {
                for n in &r.notes {
                    eprintln!("{n}");
                }
                println!("wrote {} ({} rows)", r.path.display(), r.rows);
            })
        }
        Command::Validate { config } => load_config(&config).map(|c| println!("ok: {} experiment", c.kind)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.structured());
            ExitCode::from(exit_byte(&e))
        }
    }
}

fn exit_byte(e: &CliError) -> u8 {
    e.exit_code() as u8
}
