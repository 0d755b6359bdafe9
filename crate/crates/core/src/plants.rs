//! Discrete-time plant simulators and the incremental PID law.
//!
//! Two plants are provided:
//!
//! * an unstable bilinear system with states `x1, x2`
//!   (`x1(k+1) = t1 x1 x2`, `x2(k+1) = t2 x1^2 + u`, `y = t3 x2 - t4 x1^2`,
//!   starting from `x1 = x2 = 1`);
//! * a first-order plant with dead time,
//!   `x(k+1) = (1 - 1/(10T)) x(k) + K/(10T) u(k - d)`, `y = x`, `x(0) = 0`,
//!   with an integer lag `d = round(10 tau)`.
//!
//! Time runs over `k = 0..n_steps`; inputs before `k = 0` are zero. A
//! trajectory stops early and is flagged divergent as soon as a state or
//! output stops being finite.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest time constant accepted by the dead-time plant.
pub const MIN_TIME_CONSTANT: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Example1Params {
    pub theta: [f64; 4],
}

impl Example1Params {
    pub const TRUE: Self = Self {
        theta: [0.5, 0.3, 1.8, 0.9],
    };

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        let theta: [f64; 4] = v.try_into().map_err(|_| Error::DimensionMismatch {
            expected: 4,
            actual: v.len(),
        })?;
        Ok(Self { theta })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FopdtParams {
    pub k_gain: f64,
    pub t_const: f64,
    pub tau: f64,
}

impl FopdtParams {
    pub const TRUE: Self = Self {
        k_gain: 10.0,
        t_const: 5.0,
        tau: 9.0,
    };

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        match *v {
            [k_gain, t_const, tau] => Ok(Self {
                k_gain,
                t_const,
                tau,
            }),
            _ => Err(Error::DimensionMismatch {
                expected: 3,
                actual: v.len(),
            }),
        }
    }

    /// Input lag in samples.
    pub fn delay_steps(&self) -> usize {
        (10.0 * self.tau).round() as usize
    }

    fn validate(&self) -> Result<()> {
        if !(self.k_gain.is_finite() && self.t_const.is_finite() && self.tau.is_finite()) {
            return Err(Error::InvalidPlant("non-finite parameter".into()));
        }
        if self.t_const <= MIN_TIME_CONSTANT {
            return Err(Error::InvalidPlant(format!(
                "time constant {} is not positive",
                self.t_const
            )));
        }
        if self.tau < 0.0 {
            return Err(Error::InvalidPlant(format!("negative delay {}", self.tau)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PidGains {
    pub kp: f64,
    pub ki: f64,
    pub kd: f64,
}

impl PidGains {
    pub fn new(kp: f64, ki: f64, kd: f64) -> Self {
        Self { kp, ki, kd }
    }

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        match *v {
            [kp, ki, kd] => Ok(Self { kp, ki, kd }),
            _ => Err(Error::DimensionMismatch {
                expected: 3,
                actual: v.len(),
            }),
        }
    }
}

/// Controller memory: `u(k-1)`, `e(k-1)` and `e(k-2)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PidState {
    pub u_prev: f64,
    pub e_prev1: f64,
    pub e_prev2: f64,
}

/// Incremental PID:
/// `u(k) = u(k-1) + kp (e(k) - e(k-1)) + ki e(k) + kd (e(k) - 2 e(k-1) + e(k-2))`.
pub fn pid_step(gains: &PidGains, state: PidState, e_k: f64) -> (f64, PidState) {
    let u = state.u_prev
        + gains.kp * (e_k - state.e_prev1)
        + gains.ki * e_k
        + gains.kd * (e_k - 2.0 * state.e_prev1 + state.e_prev2);
    let next = PidState {
        u_prev: u,
        e_prev1: e_k,
        e_prev2: state.e_prev1,
    };
    (u, next)
}

/// Time-indexed simulation record, one column per signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub state_names: Vec<&'static str>,
    /// `states[i][k]` is state `i` at time `k`.
    pub states: Vec<Vec<f64>>,
    pub y: Vec<f64>,
    pub u: Vec<f64>,
    /// Tracking error, present for closed-loop runs.
    pub e: Option<Vec<f64>>,
    /// Simulation stopped early on a non-finite value.
    pub divergent: bool,
}

impl Trajectory {
    fn empty(state_names: Vec<&'static str>, closed_loop: bool, capacity: usize) -> Self {
        Self {
            states: state_names
                .iter()
                .map(|_| Vec::with_capacity(capacity))
                .collect(),
            state_names,
            y: Vec::with_capacity(capacity),
            u: Vec::with_capacity(capacity),
            e: closed_loop.then(|| Vec::with_capacity(capacity)),
            divergent: false,
        }
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn state(&self, name: &str) -> Option<&[f64]> {
        self.state_names
            .iter()
            .position(|n| *n == name)
            .map(|i| self.states[i].as_slice())
    }

    /// Writes `k, <states>, y, u[, e]` rows.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["k"];
        header.extend(self.state_names.iter().copied());
        header.extend(["y", "u"]);
        if self.e.is_some() {
            header.push("e");
        }
        w.write_record(&header)?;
        for k in 0..self.len() {
            let mut row = vec![k.to_string()];
            row.extend(self.states.iter().map(|s| s[k].to_string()));
            row.push(self.y[k].to_string());
            row.push(self.u[k].to_string());
            if let Some(e) = &self.e {
                row.push(e[k].to_string());
            }
            w.write_record(&row)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

/// State machine shared by the open- and closed-loop drivers.
trait Plant {
    fn state_names(&self) -> Vec<&'static str>;
    fn states(&self) -> Vec<f64>;
    fn output(&self) -> f64;
    fn advance(&mut self, u: f64);
}

struct Bilinear {
    theta: [f64; 4],
    x1: f64,
    x2: f64,
}

impl Bilinear {
    fn new(params: &Example1Params) -> Self {
        Self {
            theta: params.theta,
            x1: 1.0,
            x2: 1.0,
        }
    }
}

impl Plant for Bilinear {
    fn state_names(&self) -> Vec<&'static str> {
        vec!["x1", "x2"]
    }

    fn states(&self) -> Vec<f64> {
        vec![self.x1, self.x2]
    }

    fn output(&self) -> f64 {
        let [_, _, t3, t4] = self.theta;
        t3 * self.x2 - t4 * self.x1 * self.x1
    }

    fn advance(&mut self, u: f64) {
        let [t1, t2, _, _] = self.theta;
        let (x1, x2) = (self.x1, self.x2);
        self.x1 = t1 * x1 * x2;
        self.x2 = t2 * x1 * x1 + u;
    }
}

struct DeadTime {
    a: f64,
    b: f64,
    delay: usize,
    x: f64,
    inputs: Vec<f64>,
}

impl DeadTime {
    fn new(params: &FopdtParams) -> Result<Self> {
        params.validate()?;
        let ratio = 1.0 / (10.0 * params.t_const);
        Ok(Self {
            a: 1.0 - ratio,
            b: params.k_gain * ratio,
            delay: params.delay_steps(),
            x: 0.0,
            inputs: Vec::new(),
        })
    }
}

impl Plant for DeadTime {
    fn state_names(&self) -> Vec<&'static str> {
        vec!["x"]
    }

    fn states(&self) -> Vec<f64> {
        vec![self.x]
    }

    fn output(&self) -> f64 {
        self.x
    }

    fn advance(&mut self, u: f64) {
        self.inputs.push(u);
        let k = self.inputs.len() - 1;
        let delayed = k.checked_sub(self.delay).map_or(0.0, |j| self.inputs[j]);
        self.x = self.a * self.x + self.b * delayed;
    }
}

fn open_loop<P: Plant>(mut plant: P, u: &[f64], n_steps: usize) -> Result<Trajectory> {
    if u.len() < n_steps {
        return Err(Error::InvalidPlant(format!(
            "input has {} samples, {} required",
            u.len(),
            n_steps
        )));
    }
    let mut traj = Trajectory::empty(plant.state_names(), false, n_steps);
    for &uk in &u[..n_steps] {
        let states = plant.states();
        let y = plant.output();
        if !y.is_finite() || states.iter().any(|s| !s.is_finite()) {
            traj.divergent = true;
            break;
        }
        for (col, s) in traj.states.iter_mut().zip(states) {
            col.push(s);
        }
        traj.y.push(y);
        traj.u.push(uk);
        plant.advance(uk);
    }
    Ok(traj)
}

fn closed_loop<P: Plant>(mut plant: P, gains: &PidGains, y_ref: f64, n_steps: usize) -> Trajectory {
    let mut traj = Trajectory::empty(plant.state_names(), true, n_steps);
    let mut pid = PidState::default();
    for _ in 0..n_steps {
        let states = plant.states();
        let y = plant.output();
        let e = y_ref - y;
        let (u, next) = pid_step(gains, pid, e);
        if !(y.is_finite() && u.is_finite()) || states.iter().any(|s| !s.is_finite()) {
            traj.divergent = true;
            break;
        }
        pid = next;
        for (col, s) in traj.states.iter_mut().zip(states) {
            col.push(s);
        }
        traj.y.push(y);
        traj.u.push(u);
        if let Some(errs) = traj.e.as_mut() {
            errs.push(e);
        }
        plant.advance(u);
    }
    traj
}

pub fn simulate_example1(params: &Example1Params, u: &[f64], n_steps: usize) -> Result<Trajectory> {
    open_loop(Bilinear::new(params), u, n_steps)
}

pub fn simulate_fopdt(params: &FopdtParams, u: &[f64], n_steps: usize) -> Result<Trajectory> {
    open_loop(DeadTime::new(params)?, u, n_steps)
}

/// Runs the incremental PID in feedback around the bilinear plant.
pub fn closed_loop_example1(
    params: &Example1Params,
    gains: &PidGains,
    y_ref: f64,
    n_steps: usize,
) -> Trajectory {
    closed_loop(Bilinear::new(params), gains, y_ref, n_steps)
}

pub fn closed_loop_fopdt(
    params: &FopdtParams,
    gains: &PidGains,
    y_ref: f64,
    n_steps: usize,
) -> Result<Trajectory> {
    Ok(closed_loop(DeadTime::new(params)?, gains, y_ref, n_steps))
}
