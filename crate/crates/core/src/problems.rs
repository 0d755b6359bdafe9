//! Identification and PID-tuning objectives.
//!
//! Both objectives are mean squared errors over the first `n_samples`
//! simulated points (`k = 0..n_samples`). Simulations that diverge or use
//! an invalid plant (non-positive time constant) score [`PENALTY`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plants::{
    closed_loop_example1, closed_loop_fopdt, simulate_example1, simulate_fopdt, Example1Params,
    FopdtParams, PidGains, Trajectory,
};
use crate::space::{Objective, SearchSpace};

/// Objective value assigned to divergent or invalid simulations.
pub const PENALTY: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlantKind {
    Example1,
    Fopdt,
}

impl PlantKind {
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            PlantKind::Example1 => &["theta1", "theta2", "theta3", "theta4"],
            PlantKind::Fopdt => &["K", "T", "tau"],
        }
    }

    pub fn true_params(self) -> Vec<f64> {
        match self {
            PlantKind::Example1 => Example1Params::TRUE.theta.to_vec(),
            PlantKind::Fopdt => {
                let p = FopdtParams::TRUE;
                vec![p.k_gain, p.t_const, p.tau]
            }
        }
    }

    /// Open-loop simulation. `Ok` trajectories may still be divergent.
    pub fn simulate(self, params: &[f64], u: &[f64], n_steps: usize) -> Result<Trajectory> {
        match self {
            PlantKind::Example1 => {
                simulate_example1(&Example1Params::from_slice(params)?, u, n_steps)
            }
            PlantKind::Fopdt => simulate_fopdt(&FopdtParams::from_slice(params)?, u, n_steps),
        }
    }

    /// Closed loop under the incremental PID.
    pub fn closed_loop(
        self,
        params: &[f64],
        gains: &PidGains,
        y_ref: f64,
        n_steps: usize,
    ) -> Result<Trajectory> {
        match self {
            PlantKind::Example1 => Ok(closed_loop_example1(
                &Example1Params::from_slice(params)?,
                gains,
                y_ref,
                n_steps,
            )),
            PlantKind::Fopdt => {
                closed_loop_fopdt(&FopdtParams::from_slice(params)?, gains, y_ref, n_steps)
            }
        }
    }

    /// Signals compared by the identification error: all states plus the
    /// output for the bilinear plant, the single state for the dead-time
    /// plant (its output equals the state).
    fn compared(self, t: &Trajectory) -> Vec<&[f64]> {
        match self {
            PlantKind::Example1 => vec![&t.states[0], &t.states[1], &t.y],
            PlantKind::Fopdt => vec![&t.states[0]],
        }
    }
}

#[derive(Debug, Clone)]
pub struct IdentificationProblem {
    pub plant: PlantKind,
    pub input: Vec<f64>,
    pub reference: Trajectory,
    pub n_samples: usize,
    pub space: SearchSpace,
}

impl IdentificationProblem {
    /// Records a reference trajectory from `true_params` under `input`.
    pub fn new(
        plant: PlantKind,
        true_params: &[f64],
        input: Vec<f64>,
        n_samples: usize,
        space: SearchSpace,
    ) -> Result<Self> {
        space.check_dim(true_params)?;
        if n_samples == 0 {
            return Err(Error::InvalidConfig("n_samples must be positive".into()));
        }
        let reference = plant.simulate(true_params, &input, n_samples)?;
        if reference.divergent {
            return Err(Error::InvalidPlant(
                "reference trajectory diverges over the sampling horizon".into(),
            ));
        }
        Ok(Self {
            plant,
            input,
            reference,
            n_samples,
            space,
        })
    }

    /// Bilinear plant, unit input, 8 samples, parameters in `[0, 2]^4`.
    pub fn example1() -> Self {
        let space = SearchSpace::uniform(4, 0.0, 2.0).expect("static bounds");
        Self::new(
            PlantKind::Example1,
            &PlantKind::Example1.true_params(),
            vec![1.0; 8],
            8,
            space,
        )
        .expect("static problem")
    }

    /// Dead-time plant, unit step input, 350 samples, parameters in `[0, 20]^3`.
    pub fn example2() -> Self {
        let space = SearchSpace::uniform(3, 0.0, 20.0).expect("static bounds");
        Self::new(
            PlantKind::Fopdt,
            &PlantKind::Fopdt.true_params(),
            vec![1.0; 350],
            350,
            space,
        )
        .expect("static problem")
    }

    pub fn param_names(&self) -> &'static [&'static str] {
        self.plant.param_names()
    }

    pub fn mse(&self, theta_hat: &[f64]) -> Result<f64> {
        self.space.check_dim(theta_hat)?;
        let estimate = match self.plant.simulate(theta_hat, &self.input, self.n_samples) {
            Ok(t) if !t.divergent => t,
            Ok(_) | Err(Error::InvalidPlant(_)) => return Ok(PENALTY),
            Err(e) => return Err(e),
        };
        let reference = self.plant.compared(&self.reference);
        let estimated = self.plant.compared(&estimate);
        let mut sum = 0.0;
        for (r, e) in reference.iter().zip(&estimated) {
            sum += r
                .iter()
                .zip(e.iter())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>();
        }
        Ok(finite_or_penalty(sum / self.n_samples as f64))
    }
}

impl Objective for IdentificationProblem {
    fn evaluate(&self, x: &[f64]) -> Result<f64> {
        self.mse(x)
    }
}

#[derive(Debug, Clone)]
pub struct TuningProblem {
    pub plant: PlantKind,
    pub plant_params: Vec<f64>,
    pub y_ref: f64,
    pub n_samples: usize,
    pub space: SearchSpace,
}

impl TuningProblem {
    pub fn new(
        plant: PlantKind,
        plant_params: Vec<f64>,
        y_ref: f64,
        n_samples: usize,
        space: SearchSpace,
    ) -> Result<Self> {
        if plant_params.len() != plant.param_names().len() {
            return Err(Error::DimensionMismatch {
                expected: plant.param_names().len(),
                actual: plant_params.len(),
            });
        }
        if space.dim() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                actual: space.dim(),
            });
        }
        if n_samples == 0 {
            return Err(Error::InvalidConfig("n_samples must be positive".into()));
        }
        Ok(Self {
            plant,
            plant_params,
            y_ref,
            n_samples,
            space,
        })
    }

    /// Bilinear plant, reference 2, 50 samples, gains in `[0, 1]^3`.
    pub fn example1(plant_params: Vec<f64>) -> Result<Self> {
        Self::new(
            PlantKind::Example1,
            plant_params,
            2.0,
            50,
            Self::gain_space(),
        )
    }

    /// Dead-time plant, reference 1, 1500 samples, gains in `[0, 1]^3`.
    pub fn example2(plant_params: Vec<f64>) -> Result<Self> {
        Self::new(
            PlantKind::Fopdt,
            plant_params,
            1.0,
            1500,
            Self::gain_space(),
        )
    }

    fn gain_space() -> SearchSpace {
        SearchSpace::uniform(3, 0.0, 1.0).expect("static bounds")
    }

    pub fn trajectory(&self, gains: &[f64]) -> Result<Trajectory> {
        let gains = PidGains::from_slice(gains)?;
        self.plant
            .closed_loop(&self.plant_params, &gains, self.y_ref, self.n_samples)
    }

    pub fn mse(&self, gains: &[f64]) -> Result<f64> {
        let t = match self.trajectory(gains) {
            Ok(t) if !t.divergent => t,
            Ok(_) | Err(Error::InvalidPlant(_)) => return Ok(PENALTY),
            Err(e) => return Err(e),
        };
        let sum: f64 = t.y.iter().map(|y| (self.y_ref - y).powi(2)).sum();
        Ok(finite_or_penalty(sum / self.n_samples as f64))
    }
}

impl Objective for TuningProblem {
    fn evaluate(&self, x: &[f64]) -> Result<f64> {
        self.mse(x)
    }
}

fn finite_or_penalty(v: f64) -> f64 {
    if v.is_finite() {
        v.min(PENALTY)
    } else {
        PENALTY
    }
}
