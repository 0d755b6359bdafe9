//! State transition algorithm.
//!
//! A solution is a *state* and producing a new solution is a *state
//! transition*. Four transformations generate new states from the incumbent:
//!
//! * rotation: `x + alpha / (n * |x|) * R_r * x`, a search inside a
//!   hypersphere of radius `alpha` around `x`;
//! * translation: `x_k + beta * R_t * (x_k - x_prev) / |x_k - x_prev|`, a
//!   line search continuing along the last improving direction;
//! * expansion: `x + gamma * R_e * x` with a Gaussian diagonal `R_e`;
//! * axesion: `x + delta * R_a * x` where `R_a` has a single Gaussian entry.
//!
//! Each transformation is applied `se` times per call (search enforcement)
//! and the best of the batch replaces the incumbent only if it is strictly
//! better. The rotation factor shrinks geometrically every iteration and is
//! reset once it falls below `alpha_min`.
//!
//! The operator functions below take their random realizations explicitly so
//! that their geometry can be tested without an RNG; [`Transformation::draw`]
//! pairs them with the sampling distributions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{Candidate, Objective, SearchSpace};
use crate::trace::{RunTrace, TraceRow};

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Rotation transformation. `r` is the `n x n` matrix `R_r` in row-major
/// order. A zero vector is returned unchanged.
pub fn rotate(x: &[f64], alpha: f64, r: &[f64]) -> Vec<f64> {
    let n = x.len();
    assert_eq!(r.len(), n * n, "rotation matrix must be n x n");
    let nx = norm(x);
    if nx == 0.0 {
        return x.to_vec();
    }
    let scale = alpha / (n as f64 * nx);
    r.chunks_exact(n)
        .zip(x)
        .map(|(row, xi)| {
            let rx: f64 = row.iter().zip(x).map(|(a, b)| a * b).sum();
            xi + scale * rx
        })
        .collect()
}

/// Translation transformation along the ray from `x_prev` through `x_k`.
/// Coincident points give back `x_k`.
pub fn translate(x_k: &[f64], x_prev: &[f64], beta: f64, r_t: f64) -> Vec<f64> {
    let diff: Vec<f64> = x_k.iter().zip(x_prev).map(|(a, b)| a - b).collect();
    let nd = norm(&diff);
    if nd == 0.0 {
        return x_k.to_vec();
    }
    let scale = beta * r_t / nd;
    x_k.iter().zip(&diff).map(|(x, d)| x + scale * d).collect()
}

/// Expansion transformation with diagonal entries `g` of `R_e`.
pub fn expand(x: &[f64], gamma: f64, g: &[f64]) -> Vec<f64> {
    assert_eq!(x.len(), g.len());
    x.iter()
        .zip(g)
        .map(|(xi, gi)| xi + gamma * gi * xi)
        .collect()
}

/// Axesion transformation; `R_a` is zero except for entry `g` at `index`.
pub fn axesion(x: &[f64], delta: f64, index: usize, g: f64) -> Vec<f64> {
    let mut out = x.to_vec();
    out[index] += delta * g * x[index];
    out
}

/// One of the four state transformations with its magnitude factor.
#[derive(Debug, Clone, Copy)]
pub enum Transformation<'a> {
    Rotation { alpha: f64 },
    Translation { previous: &'a [f64], beta: f64 },
    Expansion { gamma: f64 },
    Axesion { delta: f64 },
}

impl Transformation<'_> {
    /// Draws one random realization of the transformation applied to `x`.
    ///
    /// `R_r` entries are uniform on `[-1, 1]`, `R_t` is uniform on `[0, 1]`,
    /// Gaussian entries are standard normal and the axesion index is
    /// uniform.
    pub fn draw<R: Rng + ?Sized>(&self, x: &[f64], rng: &mut R) -> Vec<f64> {
        let n = x.len();
        match *self {
            Transformation::Rotation { alpha } => {
                let r: Vec<f64> = (0..n * n).map(|_| rng.random_range(-1.0..=1.0)).collect();
                rotate(x, alpha, &r)
            }
            Transformation::Translation { previous, beta } => {
                let r_t = rng.random::<f64>();
                translate(x, previous, beta, r_t)
            }
            Transformation::Expansion { gamma } => {
                let g: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
                expand(x, gamma, &g)
            }
            Transformation::Axesion { delta } => {
                let index = rng.random_range(0..n);
                let g: f64 = rng.sample(StandardNormal);
                axesion(x, delta, index, g)
            }
        }
    }
}

/// Applies `transformation` `se` times to the incumbent, clamps each new
/// state to `space`, and returns the best of the incumbent and the batch.
///
/// All candidates are drawn before any is evaluated, so RNG consumption does
/// not depend on objective values. Ties keep the incumbent. Returns the new
/// best together with the number of evaluations spent.
pub fn operator_batch<O, R>(
    incumbent: &Candidate,
    transformation: Transformation<'_>,
    se: usize,
    objective: &O,
    space: &SearchSpace,
    rng: &mut R,
) -> Result<(Candidate, usize)>
where
    O: Objective + ?Sized,
    R: Rng + ?Sized,
{
    if let Transformation::Translation { previous, .. } = transformation {
        if previous == incumbent.x.as_slice() {
            return Ok((incumbent.clone(), 0));
        }
    }
    let states: Vec<Vec<f64>> = (0..se)
        .map(|_| space.clamp(&transformation.draw(&incumbent.x, rng)))
        .collect();

    let mut best: Option<Candidate> = None;
    for x in states {
        let value = objective.evaluate(&x)?;
        let threshold = best.as_ref().map_or(incumbent.value, |b| b.value);
        if value < threshold {
            best = Some(Candidate { x, value });
        }
    }
    Ok((best.unwrap_or_else(|| incumbent.clone()), se))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StaConfig {
    /// Search enforcement: candidates generated per operator call.
    pub se: usize,
    pub max_iter: usize,
    pub alpha_max: f64,
    pub alpha_min: f64,
    /// Base of the geometric decay of the rotation factor.
    pub fc: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub seed: u64,
}

impl Default for StaConfig {
    fn default() -> Self {
        Self {
            se: 30,
            max_iter: 100,
            alpha_max: 1.0,
            alpha_min: 1e-4,
            fc: 2.0,
            beta: 1.0,
            gamma: 1.0,
            delta: 1.0,
            seed: 0,
        }
    }
}

impl StaConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(format!("sta: {msg}")));
        if self.se == 0 {
            return bad("se must be at least 1");
        }
        if self.max_iter == 0 {
            return bad("max_iter must be at least 1");
        }
        for (name, v) in [
            ("alpha_max", self.alpha_max),
            ("alpha_min", self.alpha_min),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("delta", self.delta),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return bad(&format!("{name} must be positive and finite, got {v}"));
            }
        }
        if self.alpha_min >= self.alpha_max {
            return bad("alpha_min must be below alpha_max");
        }
        if !(self.fc.is_finite() && self.fc > 1.0) {
            return bad("fc must be greater than 1");
        }
        Ok(())
    }
}

/// Minimizes `objective` over `space` from a uniformly random start.
pub fn sta_minimize<O: Objective + ?Sized>(
    objective: &O,
    space: &SearchSpace,
    config: &StaConfig,
) -> Result<(Candidate, RunTrace)> {
    run(objective, space, config, None)
}

/// Like [`sta_minimize`] but starting from `initial` (clamped to the box).
pub fn sta_minimize_from<O: Objective + ?Sized>(
    objective: &O,
    space: &SearchSpace,
    config: &StaConfig,
    initial: &[f64],
) -> Result<(Candidate, RunTrace)> {
    space.check_dim(initial)?;
    run(objective, space, config, Some(initial))
}

fn run<O: Objective + ?Sized>(
    objective: &O,
    space: &SearchSpace,
    config: &StaConfig,
    initial: Option<&[f64]>,
) -> Result<(Candidate, RunTrace)> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let x0 = match initial {
        Some(x) => space.clamp(x),
        None => space.sample(&mut rng),
    };
    let mut best = Candidate::evaluate(objective, x0)?;
    let mut trace = RunTrace {
        rows: Vec::with_capacity(config.max_iter),
        evaluations: 1,
    };

    let mut alpha = config.alpha_max;
    for iteration in 0..config.max_iter {
        if alpha < config.alpha_min {
            alpha = config.alpha_max;
        }
        let operators = [
            Transformation::Expansion {
                gamma: config.gamma,
            },
            Transformation::Rotation { alpha },
            Transformation::Axesion {
                delta: config.delta,
            },
        ];
        for op in operators {
            let (next, evals) = operator_batch(&best, op, config.se, objective, space, &mut rng)?;
            trace.evaluations += evals;
            if next.value < best.value {
                let previous = std::mem::replace(&mut best, next);
                let line = Transformation::Translation {
                    previous: &previous.x,
                    beta: config.beta,
                };
                let (next, evals) =
                    operator_batch(&best, line, config.se, objective, space, &mut rng)?;
                trace.evaluations += evals;
                best = next;
            }
        }
        trace.rows.push(TraceRow {
            iteration,
            best_value: best.value,
            alpha_or_w: alpha,
            best_x: best.x.clone(),
        });
        alpha /= config.fc;
    }
    Ok((best, trace))
}
