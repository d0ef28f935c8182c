use clap::{Parser, Subcommand};
use homeo_cli::{cmd_compare, cmd_diagnose, cmd_train, cmd_verify, Common, Exit};
use homeo_core::HeadKind;
use std::path::PathBuf;
use std::process::ExitCode;

/// Diagnostics and training experiments for encoders onto SO(3).
#[derive(Parser)]
#[command(name = "homeo", version)]
struct Cli {
    /// Seed for every random draw of the run (overrides config seeds).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory for reports and CSV files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Sample count: cases per suite, samples per loop, or evaluation rotations.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Latent jump threshold for loop verdicts.
    #[arg(long, global = true)]
    threshold: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the fixed-seed invariant suites.
    Verify {
        /// Multiplies every suite tolerance; 0 forces failures.
        #[arg(long, default_value_t = 1.0)]
        tolerance_scale: f64,
    },
    /// Condition report and section-loop diagnostics for one head.
    Diagnose { head: HeadKind },
    /// Train one encoder from a config file.
    Train { config: PathBuf },
    /// Train every config in a directory and tabulate the heads.
    Compare { dir: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Exit::Usage as u8 } else { Exit::Success as u8 });
        }
    };
    let common =
        Common { seed: cli.seed, out: cli.out, json: cli.json, samples: cli.samples, threshold: cli.threshold };
    let result = match &cli.command {
        Command::Verify { tolerance_scale } => cmd_verify(&common, *tolerance_scale),
        Command::Diagnose { head } => cmd_diagnose(&common, *head),
        Command::Train { config } => cmd_train(&common, config),
        Command::Compare { dir } => cmd_compare(&common, dir),
    };
    match result {
        Ok(outcome) => {
            if common.json {
                println!("{}", outcome.report.to_json());
            } else {
                print!("{}", outcome.text);
            }
            if let Some(v) = outcome.report.verification.as_ref().and_then(|v| v.first_failure.as_ref()) {
                eprintln!("verification failed: first failing suite: {v}");
            }
            ExitCode::from(outcome.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit as u8)
        }
    }
}
