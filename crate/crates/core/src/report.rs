//! Report files for a finished experiment.
//!
//! | file | content |
//! |------|---------|
//! | `stats.json` | aggregate statistics, per-trial finals, best parameters |
//! | `stats.csv` | the aggregate statistics as a single row |
//! | `trace_trial<i>.csv` | per-iteration best value, `alpha`/`w` and best point |
//! | `best_params.json` | best decision vector over all trials |
//! | `closed_loop.csv` | tuning only: response under the best gains |
//! | `trace_median.csv` | optional copy of the median trial's trace |
//!
//! An `INCOMPLETE` marker is created before the first write and removed
//! after the last one succeeds.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::{ExperimentOutcome, TrialResult};

pub const INCOMPLETE_MARKER: &str = "INCOMPLETE";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub experiment: String,
    pub algorithm: String,
    pub n_trials: usize,
    pub best: f64,
    pub mean: f64,
    pub worst: f64,
    pub st_dev: f64,
    pub best_params: Vec<f64>,
    pub evals_total: usize,
    pub per_trial: Vec<f64>,
    pub param_names: Vec<String>,
    pub best_trial: usize,
    pub median_trial: usize,
    pub plant_params: Option<Vec<f64>>,
    /// Seconds since the Unix epoch; the only field that varies between
    /// identical runs.
    pub timestamp: u64,
}

impl StatsReport {
    pub fn from_outcome(outcome: &ExperimentOutcome) -> Self {
        let s = &outcome.stats;
        Self {
            experiment: outcome.experiment.to_string(),
            algorithm: outcome.algorithm.to_string(),
            n_trials: outcome.trials.len(),
            best: s.best,
            mean: s.mean,
            worst: s.worst,
            st_dev: s.st_dev,
            best_params: outcome.best().x.clone(),
            evals_total: outcome.evals_total,
            per_trial: s.per_trial.clone(),
            param_names: outcome.param_names.clone(),
            best_trial: outcome.best_trial,
            median_trial: outcome.median_trial,
            plant_params: outcome.plant_params.clone(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestParams {
    pub experiment: String,
    pub algorithm: String,
    pub names: Vec<String>,
    pub values: Vec<f64>,
    pub objective: f64,
    pub trial: usize,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes one trial's trace: `trial, iteration, best_value, alpha_or_w, <params>`.
pub fn write_trace<W: Write>(writer: W, param_names: &[String], trial: &TrialResult) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["trial", "iteration", "best_value", "alpha_or_w"];
    header.extend(param_names.iter().map(String::as_str));
    w.write_record(&header)?;
    for row in &trial.trace.rows {
        let mut rec = vec![
            trial.trial.to_string(),
            row.iteration.to_string(),
            row.best_value.to_string(),
            row.alpha_or_w.to_string(),
        ];
        rec.extend(row.best_x.iter().map(f64::to_string));
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io("<trace>", e))?;
    Ok(())
}

fn write_stats_csv(path: &Path, report: &StatsReport) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record([
        "experiment",
        "algorithm",
        "n_trials",
        "best",
        "mean",
        "worst",
        "st_dev",
        "evals_total",
    ])?;
    w.write_record([
        report.experiment.clone(),
        report.algorithm.clone(),
        report.n_trials.to_string(),
        report.best.to_string(),
        report.mean.to_string(),
        report.worst.to_string(),
        report.st_dev.to_string(),
        report.evals_total.to_string(),
    ])?;
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

pub fn emit_reports(outcome: &ExperimentOutcome, dir: &Path, median_trace: bool) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let marker = dir.join(INCOMPLETE_MARKER);
    fs::write(&marker, b"report writing did not finish\n").map_err(|e| Error::io(&marker, e))?;

    let report = StatsReport::from_outcome(outcome);
    write_json(&dir.join("stats.json"), &report)?;
    write_stats_csv(&dir.join("stats.csv"), &report)?;

    for trial in &outcome.trials {
        let path = dir.join(format!("trace_trial{}.csv", trial.trial));
        write_trace(create(&path)?, &outcome.param_names, trial)?;
    }
    if median_trace {
        let path = dir.join("trace_median.csv");
        write_trace(
            create(&path)?,
            &outcome.param_names,
            &outcome.trials[outcome.median_trial],
        )?;
    }

    let best = outcome.best();
    write_json(
        &dir.join("best_params.json"),
        &BestParams {
            experiment: report.experiment.clone(),
            algorithm: report.algorithm.clone(),
            names: outcome.param_names.clone(),
            values: best.x.clone(),
            objective: best.value,
            trial: outcome.best_trial,
        },
    )?;

    if let Some(traj) = &outcome.closed_loop {
        let path = dir.join("closed_loop.csv");
        traj.write_csv(create(&path)?)?;
    }

    fs::remove_file(&marker).map_err(|e| Error::io(&marker, e))
}
