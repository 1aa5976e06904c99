use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use zalad_cli::config::{read_config_file, Overrides, RunConfigFile};
use zalad_cli::{execute, write_outputs, CliError};
use zalad_core::ExampleId;

/// Monte-Carlo comparison of sign-error adaptive filters under impulsive noise.
#[derive(Debug, Parser)]
#[command(name = "zalad", version)]
struct Args {
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Reference scenario (example1, example2, example3).
    #[arg(long)]
    scenario: Option<ExampleId>,

    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Number of Monte-Carlo trials.
    #[arg(long)]
    trials: Option<usize>,

    /// Worker threads.
    #[arg(long)]
    parallelism: Option<usize>,

    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(args: Args) -> Result<(), CliError> {
    let mut file = match &args.config {
        Some(path) => read_config_file(path)?,
        None => RunConfigFile::default(),
    };
    if args.config.is_none() && args.scenario.is_none() {
        file.scenario = Some(ExampleId::Ex1);
    }
    file.apply(&Overrides {
        scenario: args.scenario,
        master_seed: args.seed,
        trials: args.trials,
        parallelism: args.parallelism,
        output_dir: args.out,
    });
    let run = file.resolve()?;

    let s = &run.scenario;
    eprintln!(
        "running {}: {} filters, {} trials x {} iterations on {} workers",
        s.name,
        s.filters.len(),
        s.trials,
        s.total_iterations(),
        run.parallelism
    );
    let result = execute(&run)?;
    eprintln!("finished in {:.2} s", result.wall_time.as_secs_f64());
    let summary = write_outputs(&run, &result, &run.output_dir)?;
    print!("{summary}");
    eprintln!("wrote {}", run.output_dir.display());
    Ok(())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
