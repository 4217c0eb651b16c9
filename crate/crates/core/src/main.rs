use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use momentlab::cli::{run_scenario, validate_scenario, CliError};

#[derive(Parser)]
#[command(
    name = "momentlab",
    version,
    about = "Run moment map scenarios on linear models"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every analysis listed in the scenario and write the report.
    Run {
        scenario: PathBuf,
        /// Output directory, default out/<scenario name>.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Parse and check a scenario without running it.
    Validate { scenario: PathBuf },
}

fn threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("MOMENTLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Validation(format!(
            "MOMENTLAB_THREADS: expected a positive integer, got {v:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Internal(e.to_string()))
}

fn dispatch(args: Args) -> Result<(), CliError> {
    threads()?;
    match args.command {
        Command::Run {
            scenario,
            out,
            seed,
        } => {
            let dir = run_scenario(&scenario, out.as_deref(), seed)?;
            println!("{}", dir.join("report.txt").display());
        }
        Command::Validate { scenario } => {
            let p = validate_scenario(&scenario)?;
            println!("{}: ok", p.scenario.name);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match std::panic::catch_unwind(|| dispatch(args)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("momentlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(_) => ExitCode::from(3),
    }
}
