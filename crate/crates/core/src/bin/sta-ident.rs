use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use sta_ident::bench::BenchFunction;
use sta_ident::experiment::{
    execute, run_experiment, Algorithm, CustomProblem, ExperimentConfig, ExperimentId,
    ExperimentOutcome,
};
use sta_ident::problems::PlantKind;

#[derive(Parser)]
#[command(
    name = "sta-ident",
    version,
    about = "State transition algorithm experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate plant parameters from a recorded unit-input response.
    Identify(CampaignArgs),
    /// Tune an incremental PID controller in closed loop.
    Tune {
        #[command(flatten)]
        campaign: CampaignArgs,
        /// Control the true plant rather than an identified model.
        #[arg(long)]
        use_true_params: bool,
    },
    /// Open-loop simulation under a constant input, printed as CSV.
    Simulate {
        #[arg(long, value_parser = parse_example)]
        example: u8,
        /// Comma-separated plant parameters (theta1..theta4 or K,T,tau).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        params: Option<Vec<f64>>,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        input: f64,
    },
    /// Optimizer smoke test on a standard test function.
    Bench {
        #[arg(long, default_value = "sphere")]
        function: BenchFunction,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value = "sta")]
        algo: Algorithm,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an experiment described entirely by a JSON config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct CampaignArgs {
    #[arg(long, value_parser = parse_example)]
    example: u8,
    #[arg(long, default_value = "sta")]
    algo: Algorithm,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the median-final-value trial as trace_median.csv.
    #[arg(long)]
    median_trace: bool,
}

fn parse_example(s: &str) -> Result<u8, String> {
    match s {
        "1" => Ok(1),
        "2" => Ok(2),
        _ => Err(format!("example must be 1 or 2, got {s:?}")),
    }
}

impl CampaignArgs {
    fn into_config(self, experiment: ExperimentId) -> Result<ExperimentConfig> {
        let mut config = match &self.config {
            Some(path) => ExperimentConfig::load(path)
                .with_context(|| format!("loading {}", path.display()))?,
            None => ExperimentConfig::new(experiment, self.algo),
        };
        config.experiment = experiment;
        config.algorithm = self.algo;
        if let Some(n) = self.trials {
            config.n_trials = n;
        }
        if let Some(s) = self.seed {
            config.base_seed = s;
        }
        if let Some(out) = self.out {
            config.output_dir = out;
        }
        config.median_trace |= self.median_trace;
        Ok(config)
    }
}

fn summarize(outcome: &ExperimentOutcome) {
    let s = &outcome.stats;
    println!(
        "{} {} trials={} best={:.4e} mean={:.4e} worst={:.4e} st_dev={:.4e} evals={}",
        outcome.experiment,
        outcome.algorithm,
        outcome.trials.len(),
        s.best,
        s.mean,
        s.worst,
        s.st_dev,
        outcome.evals_total
    );
    let params: Vec<String> = outcome
        .param_names
        .iter()
        .zip(&outcome.best().x)
        .map(|(n, v)| format!("{n}={v:.6}"))
        .collect();
    println!("best params: {}", params.join(" "));
}

fn campaign(config: ExperimentConfig) -> Result<()> {
    config.validate()?;
    let outcome = run_experiment(&config)?;
    summarize(&outcome);
    println!("reports written to {}", config.output_dir.display());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Identify(args) => {
            let id = ExperimentId::identify(args.example)?;
            campaign(args.into_config(id)?)
        }
        Command::Tune {
            campaign: args,
            use_true_params,
        } => {
            let id = ExperimentId::tune(args.example)?;
            let mut config = args.into_config(id)?;
            config.use_true_params |= use_true_params;
            campaign(config)
        }
        Command::Simulate {
            example,
            params,
            steps,
            input,
        } => {
            let plant = match example {
                1 => PlantKind::Example1,
                _ => PlantKind::Fopdt,
            };
            let params = params.unwrap_or_else(|| plant.true_params());
            let traj = plant.simulate(&params, &vec![input; steps], steps)?;
            if traj.divergent {
                eprintln!("warning: simulation diverged after {} steps", traj.len());
            }
            traj.write_csv(io::stdout().lock())?;
            Ok(())
        }
        Command::Bench {
            function,
            dim,
            algo,
            trials,
            seed,
            out,
        } => {
            if dim == 0 {
                bail!("--dim must be positive");
            }
            let mut config = ExperimentConfig::new(ExperimentId::Custom, algo);
            config.custom = Some(CustomProblem {
                function,
                dim,
                bound: None,
            });
            config.n_trials = trials;
            config.base_seed = seed;
            let outcome = match out {
                Some(dir) => {
                    config.output_dir = dir;
                    run_experiment(&config)?
                }
                None => execute(&config)?,
            };
            summarize(&outcome);
            Ok(())
        }
        Command::Run { config } => {
            let config = ExperimentConfig::load(&config)
                .with_context(|| format!("loading {}", config.display()))?;
            campaign(config)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
