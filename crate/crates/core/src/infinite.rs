//! Infinite-population reliability and assurance, by inverting the binomial
//! tail with bisection.

use crate::binomial::confidence_infinite;
use crate::error::{Error, Result};
use crate::probability::{Probability, TestEvidence};
use crate::solve::{bisect_decreasing, brent, BrentOptions};

/// Absolute tolerance on the returned probability.
pub const SOLVER_TOLERANCE: f64 = 1e-10;
pub const SOLVER_MAX_ITERATIONS: u32 = 200;

/// Minimum reliability demonstrated at confidence `c`: the `r` with
/// `confidence_infinite(evidence, r) == c`.
///
/// Confidence of exactly 0 or 1 is rejected, as is evidence where every
/// sample failed.
pub fn reliability_infinite(
    evidence: TestEvidence,
    confidence: Probability,
) -> Result<Probability> {
    require_success(evidence)?;
    let c = confidence.value();
    if c == 0.0 || c == 1.0 {
        return Err(Error::BoundaryConfidence(c));
    }
    let root = bisect_decreasing(
        |r| confidence_infinite(evidence, Probability::clamped(r)).value() - c,
        0.0,
        1.0,
        SOLVER_TOLERANCE,
        SOLVER_MAX_ITERATIONS,
    );
    Ok(Probability::clamped(root.x))
}

/// The level `a` at which reliability and confidence coincide:
/// `a == confidence_infinite(evidence, a)`.
pub fn assurance_infinite(evidence: TestEvidence) -> Result<Probability> {
    require_success(evidence)?;
    let root = bisect_decreasing(
        |a| confidence_infinite(evidence, Probability::clamped(a)).value() - a,
        0.0,
        1.0,
        SOLVER_TOLERANCE,
        SOLVER_MAX_ITERATIONS,
    );
    Ok(Probability::clamped(root.x))
}

/// Assurance from Brent's method stopped at bracket width `xtol`.
///
/// With `xtol = 1e-3` this is the coarse solve behind widely circulated
/// zero-failure assurance tables; [`assurance_infinite`] is the converged
/// value and can differ from it by a few hundredths of a percent.
pub fn assurance_infinite_brent(evidence: TestEvidence, xtol: f64) -> Result<Probability> {
    require_success(evidence)?;
    let options = BrentOptions {
        xtol,
        ..BrentOptions::default()
    };
    let root = brent(
        |a| confidence_infinite(evidence, Probability::clamped(a)).value() - a,
        0.0,
        1.0,
        options,
    )
    .expect("g(0) = 1 and g(1) = -1 bracket the root");
    Ok(Probability::clamped(root.x))
}

fn require_success(evidence: TestEvidence) -> Result<()> {
    if evidence.all_failed() {
        Err(Error::NoSolution {
            samples: evidence.samples(),
        })
    } else {
        Ok(())
    }
}
