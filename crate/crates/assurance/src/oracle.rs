//! Independent checks of the core computations.
//!
//! [`simulate_tail_probability`] runs seeded Bernoulli campaigns and
//! estimates `P(at most f failures in n trials)`, which is one minus the
//! infinite-population confidence. Trials are split into fixed batches of
//! [`BATCH_SIZE`]; batch `i` draws from ChaCha8 stream `i` of the seed, so the
//! estimate depends only on `(seed, trials)` and not on how batches are
//! spread over threads.
//!
//! [`enumerate_assurance_oracle`] recomputes finite assurance by walking
//! every additional failure count with its own arithmetic, sharing nothing
//! with the core except the binomial tail.

use assurance_core::{confidence_infinite, AssuranceResult, FinitePlan, Probability, TestEvidence};
use rand::distr::{Bernoulli, Distribution};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub const BATCH_SIZE: u64 = 10_000;

/// Largest `m` accepted by [`enumerate_assurance_oracle`].
pub const ENUMERATION_LIMIT: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationConfig {
    trials: u64,
    seed: u64,
    true_reliability: Probability,
}

impl SimulationConfig {
    pub fn new(trials: u64, seed: u64, true_reliability: Probability) -> Result<Self> {
        if trials == 0 {
            return Err(Error::NoTrials);
        }
        Ok(SimulationConfig {
            trials,
            seed,
            true_reliability,
        })
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn true_reliability(&self) -> Probability {
        self.true_reliability
    }
}

/// Fraction of simulated campaigns with at most `f` failures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailEstimate {
    pub hits: u64,
    pub trials: u64,
    pub estimate: f64,
    /// Binomial standard error of `estimate`.
    pub standard_error: f64,
}

impl TailEstimate {
    fn from_counts(hits: u64, trials: u64) -> Self {
        let estimate = hits as f64 / trials as f64;
        TailEstimate {
            hits,
            trials,
            estimate,
            standard_error: (estimate * (1.0 - estimate) / trials as f64).sqrt(),
        }
    }

    /// Whether `expected` lies within `k` standard errors of the estimate.
    pub fn brackets(&self, expected: f64, k: f64) -> bool {
        (self.estimate - expected).abs() <= k * self.standard_error
    }
}

/// Estimates `1 - confidence_infinite(evidence, r)` by simulation, on the
/// global rayon pool.
pub fn simulate_tail_probability(
    evidence: TestEvidence,
    config: &SimulationConfig,
) -> TailEstimate {
    let batches = config.trials.div_ceil(BATCH_SIZE);
    let hits = (0..batches)
        .into_par_iter()
        .map(|batch| run_batch(evidence, config, batch))
        .sum();
    TailEstimate::from_counts(hits, config.trials)
}

/// Same as [`simulate_tail_probability`] on a caller-provided pool.
pub fn simulate_tail_probability_in(
    pool: &rayon::ThreadPool,
    evidence: TestEvidence,
    config: &SimulationConfig,
) -> TailEstimate {
    pool.install(|| simulate_tail_probability(evidence, config))
}

fn run_batch(evidence: TestEvidence, config: &SimulationConfig, batch: u64) -> u64 {
    let n = evidence.samples();
    let allowed = evidence.failures();
    let first = batch * BATCH_SIZE;
    let size = BATCH_SIZE.min(config.trials - first);

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(batch);
    let fails = Bernoulli::new(config.true_reliability.complement().value())
        .expect("complement of a probability is a probability");

    let mut hits = 0;
    for _ in 0..size {
        let mut failures = 0;
        for _ in 0..n {
            if fails.sample(&mut rng) {
                failures += 1;
                if failures > allowed {
                    break;
                }
            }
        }
        if failures <= allowed {
            hits += 1;
        }
    }
    hits
}

/// Finite assurance by direct enumeration over `d = 0..=m`.
pub fn enumerate_assurance_oracle(plan: &FinitePlan) -> Result<AssuranceResult> {
    let evidence = plan.evidence();
    let n = evidence.samples();
    let f = evidence.failures();
    let m = plan.additional();
    if m > ENUMERATION_LIMIT {
        return Err(Error::EnumerationTooLarge {
            size: m,
            limit: ENUMERATION_LIMIT,
        });
    }
    if m == 0 {
        let r = (n - f) as f64 / n as f64;
        return Ok(AssuranceResult {
            assurance: Probability::new(r)?,
            achieved_at_d: 0,
            reliability_at: Probability::new(r)?,
            confidence_at: Probability::ONE,
        });
    }

    let mut best: Option<(f64, u64, f64, f64)> = None;
    for d in 0..=m {
        // d = 0 stands for one failure among m + 1 further units
        let (extra_failures, extra_units) = if d == 0 { (1, m + 1) } else { (d, m) };
        let population = n + extra_units;
        let reliability = (population - f - extra_failures) as f64 / population as f64;
        let needed = (extra_units - extra_failures) as f64 / extra_units as f64;
        let confidence = confidence_infinite(evidence, Probability::new(needed)?).value();
        let a = if reliability < confidence {
            reliability
        } else {
            confidence
        };
        if best.is_none_or(|(top, ..)| a > top) {
            best = Some((a, d, reliability, confidence));
        }
    }
    let (a, d, r, c) = best.expect("at least one step");
    Ok(AssuranceResult {
        assurance: Probability::new(a)?,
        achieved_at_d: d,
        reliability_at: Probability::new(r)?,
        confidence_at: Probability::new(c)?,
    })
}

/// One Monte Carlo check: campaign shape and true reliability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Probe {
    pub n: u64,
    pub f: u64,
    pub reliability: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeOutcome {
    pub probe: Probe,
    /// `1 - confidence_infinite`.
    pub expected: f64,
    pub estimate: TailEstimate,
    pub passed: bool,
}

/// Acceptance band, in standard errors.
pub const PROBE_BAND: f64 = 3.0;

/// Ten campaign shapes covering zero, few, and all failures.
pub fn default_probes() -> Vec<Probe> {
    [
        (10, 0, 0.9),
        (3, 0, 0.5),
        (1, 1, 0.3),
        (20, 2, 0.9),
        (5, 1, 0.7),
        (30, 0, 0.97),
        (15, 3, 0.8),
        (50, 5, 0.9),
        (8, 2, 0.75),
        (22, 0, 0.9),
    ]
    .into_iter()
    .map(|(n, f, reliability)| Probe { n, f, reliability })
    .collect()
}

/// Runs each probe with seed `seed + index` and checks the estimate against
/// the analytic tail within [`PROBE_BAND`] standard errors.
pub fn run_probes(probes: &[Probe], trials: u64, seed: u64) -> Result<Vec<ProbeOutcome>> {
    probes
        .iter()
        .enumerate()
        .map(|(i, &probe)| {
            let evidence = TestEvidence::new(probe.n, probe.f)?;
            let r = Probability::new(probe.reliability)?;
            let config = SimulationConfig::new(trials, seed.wrapping_add(i as u64), r)?;
            let expected = confidence_infinite(evidence, r).complement().value();
            let estimate = simulate_tail_probability(evidence, &config);
            Ok(ProbeOutcome {
                probe,
                expected,
                estimate,
                passed: estimate.brackets(expected, PROBE_BAND),
            })
        })
        .collect()
}
