use serde::{Deserialize, Serialize};

/// One iteration of an optimizer run, recorded after the iteration finished.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub best_value: f64,
    /// Rotation factor used by STA in this iteration, or PSO inertia weight.
    pub alpha_or_w: f64,
    pub best_x: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub rows: Vec<TraceRow>,
    /// Objective evaluations spent, including initialization.
    pub evaluations: usize,
}

impl RunTrace {
    pub fn best_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(|r| r.best_value)
    }

    pub fn is_non_increasing(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].best_value <= w[0].best_value)
    }

    /// First iteration whose best value is at or below `threshold`.
    pub fn first_reaching(&self, threshold: f64) -> Option<usize> {
        self.rows
            .iter()
            .find(|r| r.best_value <= threshold)
            .map(|r| r.iteration)
    }
}
