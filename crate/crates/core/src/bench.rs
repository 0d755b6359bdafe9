//! Standard test functions for optimizer smoke tests.

use std::f64::consts::PI;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::Objective;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchFunction {
    Sphere,
    Rastrigin,
    Rosenbrock,
}

impl BenchFunction {
    pub fn value(self, x: &[f64]) -> f64 {
        match self {
            BenchFunction::Sphere => x.iter().map(|v| v * v).sum(),
            BenchFunction::Rastrigin => x
                .iter()
                .map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
                .sum(),
            BenchFunction::Rosenbrock => x
                .windows(2)
                .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
                .sum(),
        }
    }

    /// Conventional symmetric search box half-width.
    pub fn default_bound(self) -> f64 {
        match self {
            BenchFunction::Sphere => 10.0,
            BenchFunction::Rastrigin => 5.12,
            BenchFunction::Rosenbrock => 5.0,
        }
    }
}

impl FromStr for BenchFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sphere" => Ok(BenchFunction::Sphere),
            "rastrigin" => Ok(BenchFunction::Rastrigin),
            "rosenbrock" => Ok(BenchFunction::Rosenbrock),
            other => Err(Error::InvalidConfig(format!("unknown function {other:?}"))),
        }
    }
}

impl Objective for BenchFunction {
    fn evaluate(&self, x: &[f64]) -> Result<f64> {
        Ok(self.value(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minima() {
        assert_eq!(BenchFunction::Sphere.value(&[0.0; 5]), 0.0);
        assert!(BenchFunction::Rastrigin.value(&[0.0; 5]).abs() < 1e-12);
        assert_eq!(BenchFunction::Rosenbrock.value(&[1.0; 5]), 0.0);
        assert_eq!(
            "sphere".parse::<BenchFunction>().unwrap(),
            BenchFunction::Sphere
        );
        assert!("ackley".parse::<BenchFunction>().is_err());
    }
}
