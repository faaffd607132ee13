use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hopsim::cli::{cmd_report, cmd_run, exit, exit_code, parse_config, parse_seeds, worker_threads};
use hopsim::hopping::{NashHopperConfig, NoRegretConfig, Policy};
use hopsim::Error;

/// Frequency-hopping game simulator for FMCW radars.
#[derive(Parser)]
#[command(name = "hopsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario for one or more seeds and write CSV results.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Seed count `n` (seeds 0..n) or a comma-separated list.
        #[arg(long, default_value = "1")]
        seeds: String,
        /// Replace every radar's policy with this one at default settings.
        #[arg(long, value_parser = ["uniform", "noregret", "nash"])]
        policy: Option<String>,
    },
    /// Summarize finished runs: per-policy medians across seeds.
    Report {
        #[arg(required = true)]
        dirs: Vec<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hopsim: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

fn execute(command: Command) -> Result<(), Error> {
    match command {
        Command::Run {
            config,
            out,
            seeds,
            policy,
        } => {
            let text = std::fs::read_to_string(&config).map_err(|e| Error::Io {
                path: config.display().to_string(),
                source: e,
            })?;
            let mut scenario = parse_config(&text)?;
            if let Some(name) = policy {
                let policy = match name.as_str() {
                    "noregret" => Policy::Noregret(NoRegretConfig::default()),
                    "nash" => Policy::Nash(NashHopperConfig::default()),
                    _ => Policy::Uniform,
                };
                let all = vec![policy; scenario.radars.len()];
                scenario = scenario.with_policies(&all);
            }
            let seeds = parse_seeds(&seeds).map_err(|e| Error::Validation(vec![format!("--seeds: {e}")]))?;
            let manifest = cmd_run(&scenario, &config.display().to_string(), &out, &seeds, worker_threads())?;
            println!(
                "wrote {} files for {} seed(s) to {}",
                manifest.artifacts.len(),
                manifest.seeds.len(),
                out.display()
            );
            Ok(())
        }
        Command::Report { dirs } => {
            let (_, text) = cmd_report(&dirs)?;
            print!("{text}");
            Ok(())
        }
    }
}
