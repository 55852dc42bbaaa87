use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use orbispec::tables::{hodge_table_csv, Field, HyperbolicSpace};
use orbispec_cli::{registry, run, ExperimentConfig, RunOptions, RunnerError};

#[derive(Parser, Debug)]
#[command(
    name = "orbispec",
    version,
    about = "Batch runner for spectral geometry experiments"
)]
struct Cli {
    /// Experiment config (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Maximum number of experiments run at once.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for randomized sweeps; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory for reports.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Only run experiments whose name matches this glob.
    #[arg(long, global = true)]
    filter: Option<String>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the experiments declared in --config (the default).
    Run,
    /// Print the experiment catalog with default parameters.
    List,
    /// Print the Hodge table of a hyperbolic space as CSV.
    Tables {
        #[arg(long, value_enum, default_value = "r")]
        field: FieldArg,
        #[arg(long)]
        ell: u32,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FieldArg {
    #[value(alias = "R")]
    R,
    #[value(alias = "C")]
    C,
    #[value(alias = "H")]
    H,
    #[value(alias = "O")]
    O,
}

impl From<FieldArg> for Field {
    fn from(f: FieldArg) -> Field {
        match f {
            FieldArg::R => Field::R,
            FieldArg::C => Field::C,
            FieldArg::H => Field::H,
            FieldArg::O => Field::O,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = match err.downcast_ref::<RunnerError>() {
                Some(RunnerError::Config(_) | RunnerError::Filter(_)) => 2,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command.unwrap_or(Command::Run) {
        Command::List => {
            print!("{}", registry::catalog());
            Ok(ExitCode::SUCCESS)
        }
        Command::Tables { field, ell } => {
            let space = HyperbolicSpace::new(field.into(), ell)?;
            print!("{}", hodge_table_csv(&space)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Run => {
            let cfg = match &cli.config {
                Some(path) => ExperimentConfig::load(path)?,
                None => ExperimentConfig::from_toml("")?,
            };
            let opts = RunOptions {
                seed: cli.seed,
                out: cli.out,
                jobs: cli.jobs,
                filter: cli.filter,
            };
            let result = run(&cfg, &opts)?;
            for r in &result.reports {
                println!("{:<28} {}", r.name, r.verdict);
            }
            println!(
                "{} passed, {} failed, {} errors; reports in {}",
                result.summary.passed,
                result.summary.failed,
                result.summary.errors,
                result.out.display()
            );
            Ok(ExitCode::from(result.exit_code() as u8))
        }
    }
}
