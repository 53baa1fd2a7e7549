use core::fmt;

use crate::error::{Error, Result};

/// A probability in `[0, 1]`, used for reliability, confidence, and
/// assurance alike.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
#[cfg_attr(feature = "serde", derive(serde::Serialize), serde(transparent))]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);
    pub const ONE: Probability = Probability(1.0);

    /// Rejects NaN and anything outside `[0, 1]`.
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Probability(value))
        } else {
            Err(Error::ProbabilityOutOfRange(value))
        }
    }

    /// `numerator / denominator` as a probability.
    pub fn from_ratio(numerator: u64, denominator: u64) -> Result<Self> {
        if denominator == 0 || numerator > denominator {
            return Err(Error::InvalidRatio {
                numerator,
                denominator,
            });
        }
        Ok(Probability(numerator as f64 / denominator as f64))
    }

    /// Clamps into `[0, 1]`. NaN maps to zero.
    pub(crate) fn clamped(value: f64) -> Self {
        if value >= 1.0 {
            Probability(1.0)
        } else if value > 0.0 {
            Probability(value)
        } else {
            Probability(0.0)
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn complement(self) -> Probability {
        Probability(1.0 - self.0)
    }

    /// The value in percent, `0.0..=100.0`.
    #[inline]
    pub fn percent(self) -> f64 {
        self.0 * 100.0
    }

    pub fn min(self, other: Probability) -> Probability {
        if other.0 < self.0 {
            other
        } else {
            self
        }
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl TryFrom<f64> for Probability {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Probability::new(value)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

/// An observed test campaign: `failures` out of `samples` units failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TestEvidence {
    samples: u64,
    failures: u64,
}

impl TestEvidence {
    pub fn new(samples: u64, failures: u64) -> Result<Self> {
        if samples == 0 || failures > samples {
            return Err(Error::InvalidEvidence { samples, failures });
        }
        Ok(TestEvidence { samples, failures })
    }

    /// Number of tested units, `n`.
    #[inline]
    pub fn samples(&self) -> u64 {
        self.samples
    }

    /// Number of failed units, `f`.
    #[inline]
    pub fn failures(&self) -> u64 {
        self.failures
    }

    /// True when every tested unit failed.
    #[inline]
    pub fn all_failed(&self) -> bool {
        self.failures == self.samples
    }

    /// Observed success fraction `1 - f/n`.
    pub fn observed_reliability(&self) -> Probability {
        Probability((self.samples - self.failures) as f64 / self.samples as f64)
    }
}
