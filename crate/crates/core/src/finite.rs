//! Finite-population measures.
//!
//! After `n` tested units with `f` failures, only `m` more units will ever be
//! built. The additional failures `d` can only be `0..=m`, so the reliability
//! of the whole population takes discrete values and confidence is the
//! infinite-population confidence in the reliability the additional units
//! would need to stay at `d` failures.
//!
//! Step `d >= 1` asks the additional units for reliability `1 - d/m` and
//! gives the population reliability `1 - (f + d)/(n + m)`. Step `d = 0`
//! cannot use `1 - 0/m = 1` (confidence in perfect reliability is zero), so
//! it is treated as one failure in `m + 1` additional units: step reliability
//! `1 - 1/(m + 1)`, population reliability `1 - (f + 1)/(n + m + 1)`.
//!
//! `m = 0` is accepted as a degenerate plan in which the population has
//! already been fully observed.

use alloc::vec::Vec;

use crate::binomial::confidence_infinite;
use crate::error::{Error, Result};
use crate::probability::{Probability, TestEvidence};

/// Absolute tolerance used when testing `r == 1 - f/(n + m)` on floats.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

/// Test evidence plus the number of units still to be built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FinitePlan {
    evidence: TestEvidence,
    additional: u64,
}

impl FinitePlan {
    pub fn new(evidence: TestEvidence, additional: u64) -> Self {
        FinitePlan {
            evidence,
            additional,
        }
    }

    #[inline]
    pub fn evidence(&self) -> TestEvidence {
        self.evidence
    }

    /// Number of additional units, `m`.
    #[inline]
    pub fn additional(&self) -> u64 {
        self.additional
    }

    /// Total population `n + m`.
    #[inline]
    pub fn population(&self) -> u64 {
        self.evidence.samples() + self.additional
    }

    /// Reliability the additional units need for at most `d` further
    /// failures.
    pub fn step_reliability(&self, d: u64) -> Probability {
        let m = self.additional;
        debug_assert!(m >= 1 && d <= m);
        if d == 0 {
            one_minus_ratio(1, m + 1)
        } else {
            one_minus_ratio(d, m)
        }
    }

    /// Reliability of the whole population when step `d` is reached.
    pub fn overall_reliability(&self, d: u64) -> Probability {
        let m = self.additional;
        let f = self.evidence.failures();
        debug_assert!(m >= 1 && d <= m);
        if d == 0 {
            one_minus_ratio(f + 1, self.population() + 1)
        } else {
            one_minus_ratio(f + d, self.population())
        }
    }

    /// Confidence attached to step `d`.
    pub fn step_confidence(&self, d: u64) -> Probability {
        confidence_infinite(self.evidence, self.step_reliability(d))
    }

    pub fn step(&self, d: u64) -> ReliabilityStep {
        ReliabilityStep {
            d,
            step_reliability: self.step_reliability(d),
            overall_reliability: self.overall_reliability(d),
            confidence: self.step_confidence(d),
        }
    }

    /// `1 - (f + m)/(n + m)`: reliability if every additional unit fails.
    pub fn reliability_floor(&self) -> Probability {
        one_minus_ratio(
            self.evidence.failures() + self.additional,
            self.population(),
        )
    }

    /// `1 - f/(n + m)`: reliability if no additional unit fails.
    pub fn reliability_ceiling(&self) -> Probability {
        one_minus_ratio(self.evidence.failures(), self.population())
    }
}

/// `1 - numerator/denominator` as one correctly rounded division, so step
/// values compare equal to the same ratio supplied by a caller.
fn one_minus_ratio(numerator: u64, denominator: u64) -> Probability {
    Probability::clamped((denominator - numerator) as f64 / denominator as f64)
}

/// One discrete reliability step of a finite plan.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ReliabilityStep {
    /// Additional failures among the `m` new units.
    pub d: u64,
    pub step_reliability: Probability,
    pub overall_reliability: Probability,
    pub confidence: Probability,
}

impl ReliabilityStep {
    /// `min(overall_reliability, confidence)`.
    pub fn assurance(&self) -> Probability {
        self.overall_reliability.min(self.confidence)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AssuranceResult {
    pub assurance: Probability,
    pub achieved_at_d: u64,
    pub reliability_at: Probability,
    pub confidence_at: Probability,
}

/// All `m + 1` steps, ordered by ascending `d`.
pub fn step_grid(plan: &FinitePlan) -> Result<Vec<ReliabilityStep>> {
    if plan.additional == 0 {
        return Err(Error::DegeneratePlan);
    }
    Ok((0..=plan.additional).map(|d| plan.step(d)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Region {
    /// At or below the all-fail floor.
    Certain,
    /// Between floor and ceiling: confidence of step `d`.
    Step(u64),
    /// Exactly at the ceiling `1 - f/(n + m)`.
    Ceiling,
    /// Above the ceiling.
    Impossible,
}

fn region(plan: &FinitePlan, r: f64) -> Region {
    let m = plan.additional;
    if m == 0 {
        let observed = plan.evidence.observed_reliability().value();
        return if r <= observed + BOUNDARY_TOLERANCE {
            Region::Certain
        } else {
            Region::Impossible
        };
    }
    let ceiling = plan.reliability_ceiling().value();
    if (r - ceiling).abs() <= BOUNDARY_TOLERANCE {
        Region::Ceiling
    } else if r <= plan.reliability_floor().value() {
        Region::Certain
    } else if r > ceiling {
        Region::Impossible
    } else {
        Region::Step(lowest_step_at_or_below(plan, r))
    }
}

/// Smallest `d` in `1..=m` with `1 - d/m <= r`, using the same float values
/// as [`FinitePlan::step_reliability`].
fn lowest_step_at_or_below(plan: &FinitePlan, r: f64) -> u64 {
    let m = plan.additional;
    let below = |d: u64| plan.step_reliability(d).value() <= r;
    let mut d = (libm::ceil(m as f64 * (1.0 - r)) as u64).clamp(1, m);
    while d > 1 && below(d - 1) {
        d -= 1;
    }
    while d < m && !below(d) {
        d += 1;
    }
    d
}

/// Same regions as [`region`], decided in integer arithmetic for
/// `r = numerator / denominator`.
fn region_exact(plan: &FinitePlan, numerator: u64, denominator: u64) -> Region {
    let n = plan.evidence.samples() as u128;
    let f = plan.evidence.failures() as u128;
    let m = plan.additional as u128;
    let (num, den) = (numerator as u128, denominator as u128);
    if m == 0 {
        return if num * n <= den * (n - f) {
            Region::Certain
        } else {
            Region::Impossible
        };
    }
    let pop = n + m;
    let scaled = num * pop;
    let ceiling = den * (pop - f);
    if scaled == ceiling {
        Region::Ceiling
    } else if scaled <= den * (n - f) {
        Region::Certain
    } else if scaled > ceiling {
        Region::Impossible
    } else {
        // (m - d)/m <= num/den  <=>  d >= m - floor(num * m / den)
        let d = m - (num * m) / den;
        Region::Step(d.max(1) as u64)
    }
}

fn region_confidence(plan: &FinitePlan, region: Region) -> Probability {
    let evidence = plan.evidence;
    match region {
        Region::Certain => Probability::ONE,
        Region::Impossible => Probability::ZERO,
        Region::Step(d) => plan.step_confidence(d),
        Region::Ceiling if evidence.failures() > 0 => plan.step_confidence(0),
        Region::Ceiling => Probability::ZERO,
    }
}

/// Confidence that the reliability of the whole population is at least `r`.
///
/// * `r <= 1 - (f + m)/(n + m)`: 1.
/// * strictly between floor and ceiling: confidence of the smallest step
///   `d >= 1` with `1 - d/m <= r`.
/// * `r == 1 - f/(n + m)` (within [`BOUNDARY_TOLERANCE`]): confidence of the
///   `d = 0` step when `f > 0`, otherwise 0.
/// * above the ceiling: 0.
///
/// With `m = 0` the answer is 1 up to the observed reliability `1 - f/n` and
/// 0 above it.
pub fn confidence_finite(plan: &FinitePlan, r: Probability) -> Probability {
    region_confidence(plan, region(plan, r.value()))
}

/// [`confidence_finite`] at `r = numerator / denominator`, with the region
/// boundaries compared exactly.
pub fn confidence_finite_at_ratio(
    plan: &FinitePlan,
    numerator: u64,
    denominator: u64,
) -> Result<Probability> {
    Probability::from_ratio(numerator, denominator)?;
    Ok(region_confidence(
        plan,
        region_exact(plan, numerator, denominator),
    ))
}

/// Population reliability demonstrated at confidence `c`.
///
/// Scans `d = 0, 1, ..., m` and returns the population reliability of the
/// first step whose confidence reaches `c`. If none does (only possible when
/// every tested unit failed) the all-fail floor is returned.
pub fn reliability_finite(plan: &FinitePlan, confidence: Probability) -> Result<Probability> {
    let c = confidence.value();
    if c == 0.0 || c == 1.0 {
        return Err(Error::BoundaryConfidence(c));
    }
    if plan.additional == 0 {
        return Ok(plan.evidence.observed_reliability());
    }
    let found = (0..=plan.additional).find(|&d| plan.step_confidence(d).value() >= c);
    Ok(match found {
        Some(d) => plan.overall_reliability(d),
        None => plan.reliability_floor(),
    })
}

/// Best `min(reliability, confidence)` over all steps. Ties go to the
/// smaller `d`.
pub fn assurance_finite(plan: &FinitePlan) -> AssuranceResult {
    if plan.additional == 0 {
        let observed = plan.evidence.observed_reliability();
        return AssuranceResult {
            assurance: observed,
            achieved_at_d: 0,
            reliability_at: observed,
            confidence_at: Probability::ONE,
        };
    }
    let mut best = assurance_at(plan.step(0));
    for d in 1..=plan.additional {
        let candidate = assurance_at(plan.step(d));
        if candidate.assurance > best.assurance {
            best = candidate;
        }
    }
    best
}

fn assurance_at(step: ReliabilityStep) -> AssuranceResult {
    AssuranceResult {
        assurance: step.assurance(),
        achieved_at_d: step.d,
        reliability_at: step.overall_reliability,
        confidence_at: step.confidence,
    }
}
