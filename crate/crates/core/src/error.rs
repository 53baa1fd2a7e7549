use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid evidence: {failures} failures in {samples} samples (need samples >= 1 and failures <= samples)")]
    InvalidEvidence { samples: u64, failures: u64 },

    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("ratio {numerator}/{denominator} is not a probability")]
    InvalidRatio { numerator: u64, denominator: u64 },

    /// Every sample failed, so confidence is identically zero and cannot be
    /// inverted.
    #[error("no solution: all {samples} samples failed")]
    NoSolution { samples: u64 },

    /// Confidence of exactly 0 or 1 has only degenerate answers.
    #[error("confidence {0} must lie strictly between 0 and 1")]
    BoundaryConfidence(f64),

    #[error("plan has no additional samples, so there are no reliability steps")]
    DegeneratePlan,

    #[error("size {size} exceeds the supported limit of {limit}")]
    UnsupportedSize { size: u64, limit: u64 },

    #[error("table cell (n = {samples}, f = {failures}) is infeasible: {reason}")]
    InfeasibleCell {
        samples: u64,
        failures: u64,
        reason: &'static str,
    },

    #[error("grid resolution must be at least {min}, got {got}")]
    InvalidResolution { got: usize, min: usize },
}
