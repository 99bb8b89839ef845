use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use moea_lab::algorithms::{Algorithm, DEFAULT_BUDGET};
use moea_lab::control::ControllerMode;
use moea_lab::harness::experiment::{run_experiment, summary_to_csv_string};
use moea_lab::harness::sweep::build_template;
use moea_lab::harness::{
    load_sweep, runs_path, validate_step_bounds, ArmSpec, ExperimentResult, ExperimentSpec,
    LambdaSchedule, LogBase,
};
use moea_lab::{Benchmark, Error, RandomSource};

#[derive(Parser)]
#[command(
    name = "moea-lab",
    version,
    about = "Runtime experiments for GSEMO and the (1+(λ,λ)) GSEMO"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm on one benchmark at one size.
    Run {
        #[arg(long)]
        algorithm: Algorithm,
        #[arg(long, default_value = "oneminmax")]
        benchmark: Benchmark,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "static")]
        controller: ControllerMode,
        /// A number or a schedule such as `7log` or `sqrtlog`.
        #[arg(long)]
        lambda: Option<LambdaSchedule>,
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        update_strength: Option<f64>,
        #[arg(long, default_value_t = 1)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value = "e")]
        log_base: LogBase,
        /// Summary CSV; per-run rows go next to it as `<stem>.runs.csv`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every arm and size listed in a sweep file.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        /// Overrides `out` from the file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo check of the single-iteration success bounds.
    ValidateBounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        lambda: usize,
        /// Defaults to lambda.
        #[arg(long)]
        k: Option<f64>,
        /// Defaults to 1/k.
        #[arg(long)]
        c: Option<f64>,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(command: Command) -> Result<bool, Error> {
    match command {
        Command::Run {
            algorithm,
            benchmark,
            n,
            controller,
            lambda,
            k,
            c,
            update_strength,
            runs,
            seed,
            budget,
            log_base,
            out,
        } => {
            let template = match algorithm {
                Algorithm::Gsemo => None,
                _ => Some(build_template(controller, lambda, k, c, update_strength)?),
            };
            let spec = ExperimentSpec {
                sizes: vec![n],
                runs,
                arms: vec![ArmSpec {
                    name: algorithm.name().to_string(),
                    algorithm,
                    benchmark,
                    controller: template,
                }],
                base_seed: seed,
                log_base,
                budget,
                out,
            };
            report(&spec, run_experiment(&spec)?)
        }
        Command::Sweep { spec, out } => {
            let mut spec = load_sweep(&spec)?;
            if out.is_some() {
                spec.out = out;
            }
            report(&spec, run_experiment(&spec)?)
        }
        Command::ValidateBounds {
            n,
            d,
            lambda,
            k,
            c,
            trials,
            seed,
        } => {
            let k = k.unwrap_or(lambda as f64);
            let c = c.unwrap_or(1.0 / k);
            let mut rng = RandomSource::new(seed);
            let report = validate_step_bounds(n, d, lambda, k, c, trials, &mut rng)?;
            println!("{report}");
            Ok(report.pass)
        }
    }
}

fn report(spec: &ExperimentSpec, result: ExperimentResult) -> Result<bool, Error> {
    match &spec.out {
        Some(path) => {
            eprintln!("wrote {} and {}", path.display(), runs_path(path).display());
        }
        None => {
            io::stdout().write_all(summary_to_csv_string(&result.rows)?.as_bytes())?;
        }
    }
    Ok(true)
}
