use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "hypactions",
    version,
    about = "Desk-scale experiments on group actions on hyperbolic spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config and write its output bundle.
    Run {
        config: PathBuf,
        /// Output directory (default: <config stem>.out next to the config).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check every witness recorded in a summary.
    Verify { summary: PathBuf },
    /// Print the JSON Schema of experiment configs.
    Schema,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out } => {
            hypactions::run_file(&config, out.as_deref()).map(|p| println!("{}", p.display()))
        }
        Command::Verify { summary } => hypactions::verify_file(&summary)
            .map(|c| println!("verified: {} checks passed", c.passed)),
        Command::Schema => {
            println!(
                "{}",
                serde_json::to_string_pretty(&hypactions::config::schema())
                    .expect("schema serializes")
            );
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
