//! Multi-trial experiment campaigns.
//!
//! An [`ExperimentConfig`] names one of the built-in problems (or a custom
//! benchmark function), the optimizer and its settings. Trials run in
//! parallel, trial `i` seeded with `base_seed + i`; reports are written only
//! after every trial has finished.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bench::BenchFunction;
use crate::error::{Error, Result};
use crate::plants::Trajectory;
use crate::problems::{IdentificationProblem, PlantKind, TuningProblem};
use crate::pso::{pso_minimize, PsoConfig};
use crate::space::{Candidate, Objective, SearchSpace};
use crate::sta::{sta_minimize, StaConfig};
use crate::stats::{compute_stats, median_index, TrialStats};
use crate::trace::RunTrace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExperimentId {
    #[serde(rename = "example1-identify")]
    Example1Identify,
    #[serde(rename = "example1-tune")]
    Example1Tune,
    #[serde(rename = "example2-identify")]
    Example2Identify,
    #[serde(rename = "example2-tune")]
    Example2Tune,
    #[serde(rename = "custom")]
    Custom,
}

impl ExperimentId {
    pub fn identify(example: u8) -> Result<Self> {
        match example {
            1 => Ok(Self::Example1Identify),
            2 => Ok(Self::Example2Identify),
            n => Err(Error::InvalidConfig(format!("no example {n}"))),
        }
    }

    pub fn tune(example: u8) -> Result<Self> {
        match example {
            1 => Ok(Self::Example1Tune),
            2 => Ok(Self::Example2Tune),
            n => Err(Error::InvalidConfig(format!("no example {n}"))),
        }
    }

    pub fn is_tuning(self) -> bool {
        matches!(self, Self::Example1Tune | Self::Example2Tune)
    }

    fn plant(self) -> Option<PlantKind> {
        match self {
            Self::Example1Identify | Self::Example1Tune => Some(PlantKind::Example1),
            Self::Example2Identify | Self::Example2Tune => Some(PlantKind::Fopdt),
            Self::Custom => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Example1Identify => "example1-identify",
            Self::Example1Tune => "example1-tune",
            Self::Example2Identify => "example2-identify",
            Self::Example2Tune => "example2-tune",
            Self::Custom => "custom",
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    #[default]
    Sta,
    Pso,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Sta => "sta",
            Algorithm::Pso => "pso",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sta" => Ok(Algorithm::Sta),
            "pso" => Ok(Algorithm::Pso),
            other => Err(Error::InvalidConfig(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// Benchmark-function problem for `custom` experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomProblem {
    pub function: BenchFunction,
    pub dim: usize,
    /// Symmetric box `[-bound, bound]^dim`; defaults per function.
    #[serde(default)]
    pub bound: Option<f64>,
}

fn default_trials() -> usize {
    30
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("results")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    #[serde(default)]
    pub algorithm: Algorithm,
    /// Optimizer settings; the `seed` field is replaced per trial.
    #[serde(default)]
    pub sta: StaConfig,
    #[serde(default)]
    pub pso: PsoConfig,
    #[serde(default = "default_trials")]
    pub n_trials: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Tuning only: control the true plant instead of an identified one.
    #[serde(default)]
    pub use_true_params: bool,
    /// Tuning only: explicit plant parameters, skipping identification.
    #[serde(default)]
    pub plant_params: Option<Vec<f64>>,
    #[serde(default)]
    pub custom: Option<CustomProblem>,
    /// Also write the median-final-value trial as `trace_median.csv`.
    #[serde(default)]
    pub median_trace: bool,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentId, algorithm: Algorithm) -> Self {
        Self {
            experiment,
            algorithm,
            sta: StaConfig::default(),
            pso: PsoConfig::default(),
            n_trials: default_trials(),
            base_seed: 0,
            output_dir: default_output_dir(),
            use_true_params: false,
            plant_params: None,
            custom: None,
            median_trace: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_trials == 0 {
            return Err(Error::InvalidConfig("n_trials must be at least 1".into()));
        }
        match self.algorithm {
            Algorithm::Sta => self.sta.validate()?,
            Algorithm::Pso => self.pso.validate()?,
        }
        match (self.experiment, &self.custom) {
            (ExperimentId::Custom, None) => {
                return Err(Error::InvalidConfig(
                    "custom experiment needs a `custom` block".into(),
                ))
            }
            (ExperimentId::Custom, Some(c)) => {
                if c.dim == 0 {
                    return Err(Error::InvalidConfig("custom.dim must be positive".into()));
                }
                if let Some(b) = c.bound {
                    if !(b.is_finite() && b > 0.0) {
                        return Err(Error::InvalidConfig("custom.bound must be positive".into()));
                    }
                }
            }
            (_, Some(_)) => {
                return Err(Error::InvalidConfig(
                    "`custom` block is only valid for the custom experiment".into(),
                ))
            }
            _ => {}
        }
        if !self.experiment.is_tuning() && (self.use_true_params || self.plant_params.is_some()) {
            return Err(Error::InvalidConfig(
                "use_true_params and plant_params apply to tuning experiments only".into(),
            ));
        }
        if let (Some(plant), Some(p)) = (self.experiment.plant(), &self.plant_params) {
            if p.len() != plant.param_names().len() {
                return Err(Error::DimensionMismatch {
                    expected: plant.param_names().len(),
                    actual: p.len(),
                });
            }
            if self.use_true_params {
                return Err(Error::InvalidConfig(
                    "use_true_params conflicts with explicit plant_params".into(),
                ));
            }
        }
        Ok(())
    }
}

/// A concrete objective built from an experiment configuration.
#[derive(Debug, Clone)]
pub enum Problem {
    Identification(IdentificationProblem),
    Tuning(TuningProblem),
    Benchmark {
        function: BenchFunction,
        space: SearchSpace,
    },
}

impl Problem {
    pub fn space(&self) -> &SearchSpace {
        match self {
            Problem::Identification(p) => &p.space,
            Problem::Tuning(p) => &p.space,
            Problem::Benchmark { space, .. } => space,
        }
    }

    pub fn param_names(&self) -> Vec<String> {
        match self {
            Problem::Identification(p) => p.param_names().iter().map(|s| s.to_string()).collect(),
            Problem::Tuning(_) => ["kp", "ki", "kd"].map(String::from).to_vec(),
            Problem::Benchmark { space, .. } => (0..space.dim()).map(|i| format!("x{i}")).collect(),
        }
    }
}

impl Objective for Problem {
    fn evaluate(&self, x: &[f64]) -> Result<f64> {
        match self {
            Problem::Identification(p) => p.mse(x),
            Problem::Tuning(p) => p.mse(x),
            Problem::Benchmark { function, .. } => Ok(function.value(x)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub trial: usize,
    pub seed: u64,
    pub best: Candidate,
    pub trace: RunTrace,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub experiment: ExperimentId,
    pub algorithm: Algorithm,
    pub param_names: Vec<String>,
    pub stats: TrialStats,
    pub trials: Vec<TrialResult>,
    /// Index into `trials` of the lowest final value (first on ties).
    pub best_trial: usize,
    pub median_trial: usize,
    pub evals_total: usize,
    /// Plant parameters the controller was tuned against.
    pub plant_params: Option<Vec<f64>>,
    /// Closed-loop response under the best gains, tuning experiments only.
    pub closed_loop: Option<Trajectory>,
}

impl ExperimentOutcome {
    pub fn best(&self) -> &Candidate {
        &self.trials[self.best_trial].best
    }
}

/// Runs one optimizer on `objective` with the given seed.
pub fn run_trial<O: Objective + ?Sized>(
    objective: &O,
    space: &SearchSpace,
    algorithm: Algorithm,
    sta: &StaConfig,
    pso: &PsoConfig,
    seed: u64,
) -> Result<(Candidate, RunTrace)> {
    match algorithm {
        Algorithm::Sta => sta_minimize(
            objective,
            space,
            &StaConfig {
                seed,
                ..sta.clone()
            },
        ),
        Algorithm::Pso => pso_minimize(
            objective,
            space,
            &PsoConfig {
                seed,
                ..pso.clone()
            },
        ),
    }
}

/// Resolves the plant a tuning experiment controls: explicit parameters,
/// the true plant, or a single default STA identification run seeded with
/// `base_seed`.
fn tuning_plant(config: &ExperimentConfig, plant: PlantKind) -> Result<Vec<f64>> {
    if let Some(p) = &config.plant_params {
        return Ok(p.clone());
    }
    if config.use_true_params {
        return Ok(plant.true_params());
    }
    let problem = match plant {
        PlantKind::Example1 => IdentificationProblem::example1(),
        PlantKind::Fopdt => IdentificationProblem::example2(),
    };
    let cfg = StaConfig {
        seed: config.base_seed,
        ..StaConfig::default()
    };
    let (best, _) = sta_minimize(&problem, &problem.space, &cfg)?;
    Ok(best.x)
}

pub fn build_problem(config: &ExperimentConfig) -> Result<(Problem, Option<Vec<f64>>)> {
    Ok(match config.experiment {
        ExperimentId::Example1Identify => (
            Problem::Identification(IdentificationProblem::example1()),
            None,
        ),
        ExperimentId::Example2Identify => (
            Problem::Identification(IdentificationProblem::example2()),
            None,
        ),
        ExperimentId::Example1Tune => {
            let params = tuning_plant(config, PlantKind::Example1)?;
            (
                Problem::Tuning(TuningProblem::example1(params.clone())?),
                Some(params),
            )
        }
        ExperimentId::Example2Tune => {
            let params = tuning_plant(config, PlantKind::Fopdt)?;
            (
                Problem::Tuning(TuningProblem::example2(params.clone())?),
                Some(params),
            )
        }
        ExperimentId::Custom => {
            let custom = config
                .custom
                .as_ref()
                .ok_or_else(|| Error::InvalidConfig("missing custom block".into()))?;
            let bound = custom
                .bound
                .unwrap_or_else(|| custom.function.default_bound());
            (
                Problem::Benchmark {
                    function: custom.function,
                    space: SearchSpace::uniform(custom.dim, -bound, bound)?,
                },
                None,
            )
        }
    })
}

/// Runs every trial and aggregates the results without touching the disk.
pub fn execute(config: &ExperimentConfig) -> Result<ExperimentOutcome> {
    config.validate()?;
    let (problem, plant_params) = build_problem(config)?;
    let space = problem.space().clone();

    let trials = (0..config.n_trials)
        .into_par_iter()
        .map(|trial| {
            let seed = config.base_seed.wrapping_add(trial as u64);
            let (best, trace) = run_trial(
                &problem,
                &space,
                config.algorithm,
                &config.sta,
                &config.pso,
                seed,
            )?;
            Ok(TrialResult {
                trial,
                seed,
                best,
                trace,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let finals: Vec<f64> = trials.iter().map(|t| t.best.value).collect();
    let stats = compute_stats(&finals)?;
    let best_trial = finals
        .iter()
        .enumerate()
        .fold(0, |acc, (i, v)| if *v < finals[acc] { i } else { acc });
    let median_trial = median_index(&finals).expect("at least one trial");
    let evals_total = trials.iter().map(|t| t.trace.evaluations).sum();

    let closed_loop = match &problem {
        Problem::Tuning(p) => Some(p.trajectory(&trials[best_trial].best.x)?),
        _ => None,
    };

    Ok(ExperimentOutcome {
        experiment: config.experiment,
        algorithm: config.algorithm,
        param_names: problem.param_names(),
        stats,
        trials,
        best_trial,
        median_trial,
        evals_total,
        plant_params,
        closed_loop,
    })
}

/// Executes the campaign and writes its reports to `config.output_dir`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutcome> {
    let outcome = execute(config)?;
    crate::report::emit_reports(&outcome, &config.output_dir, config.median_trace)?;
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_config() {
        let c = ExperimentConfig::from_json(r#"{"experiment": "example1-identify"}"#).unwrap();
        assert_eq!(c.algorithm, Algorithm::Sta);
        assert_eq!(c.n_trials, 30);
        assert_eq!(c.sta, StaConfig::default());
        assert_eq!(c.pso.swarm_size, 30);
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(ExperimentConfig::from_json(r#"{"experiment": "custom", "trials": 3}"#).is_err());
        assert!(ExperimentConfig::from_json(
            r#"{"experiment": "example1-identify", "sta": {"se": 30, "sigma": 1}}"#
        )
        .is_err());
    }

    #[test]
    fn rejects_invalid_values() {
        for text in [
            r#"{"experiment": "example1-identify", "n_trials": 0}"#,
            r#"{"experiment": "example1-identify", "sta": {"alpha_min": 5.0}}"#,
            r#"{"experiment": "example1-identify", "algorithm": "pso", "pso": {"swarm_size": 0}}"#,
            r#"{"experiment": "example1-identify", "use_true_params": true}"#,
            r#"{"experiment": "example2-tune", "plant_params": [1.0, 2.0]}"#,
            r#"{"experiment": "custom"}"#,
            r#"{"experiment": "example3-identify"}"#,
        ] {
            assert!(ExperimentConfig::from_json(text).is_err(), "{text}");
        }
    }

    #[test]
    fn single_trial_stats() {
        let mut c = ExperimentConfig::new(ExperimentId::Custom, Algorithm::Sta);
        c.custom = Some(CustomProblem {
            function: BenchFunction::Sphere,
            dim: 2,
            bound: None,
        });
        c.n_trials = 1;
        c.sta.max_iter = 10;
        let out = execute(&c).unwrap();
        let s = &out.stats;
        assert_eq!(s.best, s.mean);
        assert_eq!(s.mean, s.worst);
        assert_eq!(s.st_dev, 0.0);
        assert_eq!(out.best_trial, 0);
    }

    #[test]
    fn seeds_are_offset_per_trial() {
        let mut c = ExperimentConfig::new(ExperimentId::Custom, Algorithm::Pso);
        c.custom = Some(CustomProblem {
            function: BenchFunction::Rastrigin,
            dim: 3,
            bound: None,
        });
        c.n_trials = 4;
        c.base_seed = 100;
        c.pso.max_iter = 5;
        let out = execute(&c).unwrap();
        let seeds: Vec<u64> = out.trials.iter().map(|t| t.seed).collect();
        assert_eq!(seeds, vec![100, 101, 102, 103]);
        assert_eq!(out.evals_total, 4 * 30 * 6);
    }

    #[test]
    fn explicit_plant_params_are_used() {
        let mut c = ExperimentConfig::new(ExperimentId::Example1Tune, Algorithm::Sta);
        c.plant_params = Some(vec![0.5, 0.3, 1.8, 0.9]);
        let (problem, params) = build_problem(&c).unwrap();
        assert_eq!(params.unwrap(), vec![0.5, 0.3, 1.8, 0.9]);
        assert!(matches!(problem, Problem::Tuning(_)));
    }
}
