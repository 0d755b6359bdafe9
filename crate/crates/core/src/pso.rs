//! Global-best particle swarm optimizer with a linearly decreasing inertia
//! weight, used as the comparison baseline.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{Candidate, Objective, SearchSpace};
use crate::trace::{RunTrace, TraceRow};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PsoConfig {
    pub swarm_size: usize,
    pub max_iter: usize,
    pub c1: f64,
    pub c2: f64,
    pub w_start: f64,
    pub w_end: f64,
    pub velocity_init: VelocityInit,
    pub seed: u64,
}

/// Initial particle velocities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VelocityInit {
    Zero,
    /// Uniform on `[-(upper - lower), upper - lower]` per dimension.
    Uniform,
}

impl Default for PsoConfig {
    fn default() -> Self {
        Self {
            swarm_size: 30,
            max_iter: 100,
            c1: 1.0,
            c2: 1.0,
            w_start: 0.9,
            w_end: 0.4,
            velocity_init: VelocityInit::Uniform,
            seed: 0,
        }
    }
}

impl PsoConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(format!("pso: {msg}")));
        if self.swarm_size == 0 {
            return bad("swarm_size must be at least 1");
        }
        if self.max_iter == 0 {
            return bad("max_iter must be at least 1");
        }
        for (name, v) in [
            ("c1", self.c1),
            ("c2", self.c2),
            ("w_start", self.w_start),
            ("w_end", self.w_end),
        ] {
            if !v.is_finite() {
                return bad(&format!("{name} must be finite"));
            }
        }
        if self.w_start < self.w_end {
            return bad("w_start must not be below w_end");
        }
        Ok(())
    }

    /// Inertia weight at 0-based iteration `t`.
    pub fn inertia(&self, t: usize) -> f64 {
        if self.max_iter <= 1 {
            return self.w_start;
        }
        self.w_start + (self.w_end - self.w_start) * t as f64 / (self.max_iter - 1) as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    pub personal_best: Candidate,
}

pub fn pso_minimize<O: Objective + ?Sized>(
    objective: &O,
    space: &SearchSpace,
    config: &PsoConfig,
) -> Result<(Candidate, RunTrace)> {
    pso_minimize_from(objective, space, config, &[])
}

/// Runs the swarm with the first particles placed at `initial` (clamped);
/// the remaining particles start uniformly at random.
pub fn pso_minimize_from<O: Objective + ?Sized>(
    objective: &O,
    space: &SearchSpace,
    config: &PsoConfig,
    initial: &[Vec<f64>],
) -> Result<(Candidate, RunTrace)> {
    config.validate()?;
    for x in initial {
        space.check_dim(x)?;
    }
    let n = space.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let positions: Vec<Vec<f64>> = (0..config.swarm_size)
        .map(|i| match initial.get(i) {
            Some(x) => space.clamp(x),
            None => space.sample(&mut rng),
        })
        .collect();
    let velocities: Vec<Vec<f64>> = (0..config.swarm_size)
        .map(|_| match config.velocity_init {
            VelocityInit::Zero => vec![0.0; n],
            VelocityInit::Uniform => space
                .lower()
                .iter()
                .zip(space.upper())
                .map(|(lo, hi)| {
                    let span = hi - lo;
                    rng.random_range(-span..=span)
                })
                .collect(),
        })
        .collect();
    let mut swarm = Vec::with_capacity(config.swarm_size);
    for (position, velocity) in positions.into_iter().zip(velocities) {
        let personal_best = Candidate::evaluate(objective, position.clone())?;
        swarm.push(Particle {
            position,
            velocity,
            personal_best,
        });
    }
    let mut trace = RunTrace {
        rows: Vec::with_capacity(config.max_iter),
        evaluations: swarm.len(),
    };
    let mut global = best_of(&swarm).clone();

    for t in 0..config.max_iter {
        let w = config.inertia(t);
        for p in &mut swarm {
            for d in 0..n {
                let r1: f64 = rng.random();
                let r2: f64 = rng.random();
                p.velocity[d] = w * p.velocity[d]
                    + config.c1 * r1 * (p.personal_best.x[d] - p.position[d])
                    + config.c2 * r2 * (global.x[d] - p.position[d]);
                p.position[d] += p.velocity[d];
            }
            p.position = space.clamp(&p.position);
        }
        for p in &mut swarm {
            let value = objective.evaluate(&p.position)?;
            if value < p.personal_best.value {
                p.personal_best = Candidate {
                    x: p.position.clone(),
                    value,
                };
            }
        }
        trace.evaluations += swarm.len();
        let candidate = best_of(&swarm);
        if candidate.value < global.value {
            global = candidate.clone();
        }
        trace.rows.push(TraceRow {
            iteration: t,
            best_value: global.value,
            alpha_or_w: w,
            best_x: global.x.clone(),
        });
    }
    Ok((global, trace))
}

fn best_of(swarm: &[Particle]) -> &Candidate {
    swarm
        .iter()
        .map(|p| &p.personal_best)
        .fold(&swarm[0].personal_best, |a, b| {
            if b.value < a.value {
                b
            } else {
                a
            }
        })
}
