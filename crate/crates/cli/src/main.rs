use std::path::PathBuf;
use std::process::ExitCode;

use brbm_cli::{execute, Experiment, ExperimentConfig};
use clap::Parser;

/// Run a branching Brownian motion experiment from a JSON configuration.
#[derive(Parser, Debug)]
#[command(name = "brbm", version)]
struct Args {
    /// Experiment to run.
    #[arg(value_enum, required_unless_present = "list")]
    experiment: Option<Experiment>,
    /// JSON configuration file.
    #[arg(long, required_unless_present = "list")]
    config: Option<PathBuf>,
    /// Override the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Result table path (the sidecar goes next to it as .json).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run replicates on all cores; the table is identical to a serial run.
    #[arg(long)]
    parallel: bool,
    /// List the available experiments.
    #[arg(long)]
    list: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.list {
        for e in Experiment::ALL {
            println!("{:<12} {}", e.name(), e.summary());
        }
        return ExitCode::SUCCESS;
    }
    let (experiment, config) = (args.experiment.unwrap(), args.config.unwrap());
    let result = ExperimentConfig::load(&config).and_then(|mut cfg| {
        cfg.parallel |= args.parallel;
        execute(experiment, cfg, args.seed, args.out)
    });
    match result {
        Ok(report) => {
            eprintln!("{}: {} rows", experiment.name(), report.rows.len());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
