use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Summary of final objective values over independent trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialStats {
    pub best: f64,
    pub mean: f64,
    pub worst: f64,
    /// Sample standard deviation (n - 1 denominator), 0 for one trial.
    pub st_dev: f64,
    pub per_trial: Vec<f64>,
}

pub fn compute_stats(values: &[f64]) -> Result<TrialStats> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = values.len() as f64;
    let best = values.iter().copied().fold(f64::INFINITY, f64::min);
    let worst = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = values.iter().sum::<f64>() / n;
    let st_dev = if values.len() == 1 {
        0.0
    } else {
        let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
        (ss / (n - 1.0)).sqrt()
    };
    Ok(TrialStats {
        best,
        // Rounding can push the mean a hair outside [best, worst] for
        // near-constant samples.
        mean: mean.clamp(best, worst),
        worst,
        st_dev,
        per_trial: values.to_vec(),
    })
}

/// Index of the trial holding the median final value (lower median for an
/// even count).
pub fn median_index(values: &[f64]) -> Option<usize> {
    if values.is_empty() {
        return None;
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    Some(order[(values.len() - 1) / 2])
}
