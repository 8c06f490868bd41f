use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Discrete environment schedule: the environment variable is
/// `t = floor(tau / frequency) / severity` for the running iteration counter `tau`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeModel {
    /// `n_t`: larger values mean smaller steps in `t`.
    pub severity: u32,
    /// `tau_t`: iterations spent in each environment.
    pub frequency: u32,
    /// `tau_T`: total iterations.
    pub horizon: u32,
}

impl TimeModel {
    pub fn new(severity: u32, frequency: u32, horizon: u32) -> Result<Self> {
        let tm = Self {
            severity,
            frequency,
            horizon,
        };
        tm.validate()?;
        Ok(tm)
    }

    pub fn validate(&self) -> Result<()> {
        if self.severity == 0 || self.frequency == 0 || self.horizon == 0 {
            return Err(Error::arg("time model parameters must be positive"));
        }
        if !self.horizon.is_multiple_of(self.frequency) {
            return Err(Error::arg(format!(
                "horizon {} is not a multiple of frequency {}",
                self.horizon, self.frequency
            )));
        }
        Ok(())
    }

    pub fn changes(&self) -> usize {
        (self.horizon / self.frequency) as usize
    }

    pub fn time_at(&self, tau: u32) -> Result<f64> {
        if tau > self.horizon {
            return Err(Error::arg(format!(
                "iteration {tau} beyond horizon {}",
                self.horizon
            )));
        }
        Ok(f64::from(tau / self.frequency) / f64::from(self.severity))
    }

    /// `t` in force during environment `k`, i.e. `time_at(k * frequency)`.
    pub fn time_of_change(&self, k: usize) -> f64 {
        k as f64 / f64::from(self.severity)
    }

    /// The `t` value at the start of each of the `changes()` environments.
    pub fn schedule(&self) -> Vec<f64> {
        (0..self.changes()).map(|k| self.time_of_change(k)).collect()
    }
}

/// The eight benchmark environment configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EnvId {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
}

impl EnvId {
    pub const ALL: [EnvId; 8] = [
        EnvId::C1,
        EnvId::C2,
        EnvId::C3,
        EnvId::C4,
        EnvId::C5,
        EnvId::C6,
        EnvId::C7,
        EnvId::C8,
    ];

    /// `(n_t, tau_t, tau_T)`.
    pub const fn parameters(self) -> (u32, u32, u32) {
        match self {
            EnvId::C1 => (10, 5, 100),
            EnvId::C2 => (10, 10, 200),
            EnvId::C3 => (10, 25, 500),
            EnvId::C4 => (10, 50, 1000),
            EnvId::C5 => (1, 10, 200),
            EnvId::C6 => (1, 50, 1000),
            EnvId::C7 => (20, 10, 200),
            EnvId::C8 => (20, 50, 1000),
        }
    }

    pub fn config(self) -> EnvironmentConfig {
        let (severity, frequency, horizon) = self.parameters();
        EnvironmentConfig {
            id: self,
            time_model: TimeModel {
                severity,
                frequency,
                horizon,
            },
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for EnvId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.index() + 1)
    }
}

impl FromStr for EnvId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EnvId::ALL
            .iter()
            .copied()
            .find(|id| id.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::config("env", format!("unknown configuration id `{s}` (expected C1..C8)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvironmentConfig {
    pub id: EnvId,
    pub time_model: TimeModel,
}
