//! Bounded value domain shared by the interpreter and the constraint solver.

use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DomainError {
    #[error("empty integer domain: int_min {min} must be below int_max {max}")]
    EmptyRange { min: i64, max: i64 },
    #[error("solver timeout must be positive")]
    ZeroTimeout,
}

/// Integer bounds every program value must respect, plus the wall-clock
/// budget granted to one detection run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainConfig {
    pub int_min: i64,
    pub int_max: i64,
    #[serde(with = "duration_secs")]
    pub solver_timeout: Duration,
}

impl Default for DomainConfig {
    fn default() -> Self {
        DomainConfig { int_min: -128, int_max: 127, solver_timeout: Duration::from_secs(300) }
    }
}

impl DomainConfig {
    pub fn new(int_min: i64, int_max: i64, solver_timeout: Duration) -> Result<Self, DomainError> {
        let cfg = DomainConfig { int_min, int_max, solver_timeout };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Domain `[int_min, int_max]` with the default timeout.
    pub fn range(int_min: i64, int_max: i64) -> Result<Self, DomainError> {
        Self::new(int_min, int_max, DomainConfig::default().solver_timeout)
    }

    pub fn with_timeout(mut self, solver_timeout: Duration) -> Result<Self, DomainError> {
        self.solver_timeout = solver_timeout;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), DomainError> {
        if self.int_min >= self.int_max {
            return Err(DomainError::EmptyRange { min: self.int_min, max: self.int_max });
        }
        if self.solver_timeout.is_zero() {
            return Err(DomainError::ZeroTimeout);
        }
        Ok(())
    }

    pub fn contains(&self, v: i64) -> bool {
        self.int_min <= v && v <= self.int_max
    }

    /// Number of integers in the domain.
    pub fn width(&self) -> u128 {
        (self.int_max as i128 - self.int_min as i128 + 1) as u128
    }

    /// The in-domain integer closest to zero.
    pub fn default_int(&self) -> i64 {
        0i64.clamp(self.int_min, self.int_max)
    }
}

mod duration_secs {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let secs = f64::deserialize(d)?;
        Duration::try_from_secs_f64(secs).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_range_and_zero_timeout() {
        assert_eq!(DomainConfig::range(3, 3), Err(DomainError::EmptyRange { min: 3, max: 3 }));
        assert_eq!(DomainConfig::new(0, 1, Duration::ZERO), Err(DomainError::ZeroTimeout));
    }

    #[test]
    fn default_int_is_clamped_zero() {
        assert_eq!(DomainConfig::default().default_int(), 0);
        assert_eq!(DomainConfig::range(5, 9).unwrap().default_int(), 5);
        assert_eq!(DomainConfig::range(-9, -5).unwrap().default_int(), -5);
        assert_eq!(DomainConfig::range(0, 15).unwrap().width(), 16);
    }
}
