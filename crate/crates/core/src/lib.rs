//! State transition algorithm (STA) applied to nonlinear system
//! identification and off-line PID controller tuning.
//!
//! The crate is organised bottom-up:
//!
//! * [`space`]: search boxes, candidates and the [`Objective`] trait.
//! * [`sta`]: the four transformation operators and the STA main loop.
//! * [`pso`]: a global-best particle swarm used as the comparison baseline.
//! * [`plants`]: discrete-time plant simulators and the incremental PID law.
//! * [`problems`]: identification and tuning objectives built on the plants.
//! * [`stats`], [`experiment`], [`report`]: the multi-trial harness behind
//!   the `sta-ident` command line tool.

pub mod bench;
pub mod error;
pub mod experiment;
pub mod plants;
pub mod problems;
pub mod pso;
pub mod report;
pub mod space;
pub mod sta;
pub mod stats;
pub mod trace;

pub use error::{Error, Result};
pub use space::{Candidate, FnObjective, Objective, SearchSpace};
pub use trace::{RunTrace, TraceRow};
