//! Upper binomial tail: the confidence that the true reliability is at least
//! `r` after observing `f` failures in `n` samples,
//!
//! ```text
//! c = 1 - sum_{k=0}^{f} C(n, k) (1 - r)^k r^(n - k)
//! ```

use crate::probability::{Probability, TestEvidence};

/// Relative size below which a term past the mode no longer moves the sum.
const NEGLIGIBLE: f64 = 1e-18;

/// Confidence that the true reliability is at least `r`, given the evidence.
///
/// Terms are generated by the ratio recurrence
/// `t[k+1] = t[k] * (n - k) / (k + 1) * (1 - r) / r`, starting from
/// `t[0] = r^n`. When `r^n` underflows the recurrence runs in log space
/// instead, which keeps `n` in the millions usable.
///
/// The lower tail `t[0..=f]` is summed first. If it exceeds one half the
/// result is the upper tail `t[f+1..=n]` summed directly, so that small
/// confidences keep their relative precision instead of cancelling in
/// `1 - tail`.
pub fn confidence_infinite(evidence: TestEvidence, reliability: Probability) -> Probability {
    let n = evidence.samples();
    let f = evidence.failures();
    let r = reliability.value();

    // f = n sums the whole distribution.
    if f == n {
        return Probability::ZERO;
    }
    if r == 0.0 {
        return Probability::ONE;
    }
    if r == 1.0 {
        return Probability::ZERO;
    }

    let first = libm::pow(r, n as f64);
    let c = if first >= f64::MIN_POSITIVE {
        Tails::<Linear>::new(n, r, first).confidence(f)
    } else {
        Tails::<Log>::new(n, r, first).confidence(f)
    };
    Probability::clamped(c)
}

/// A running sum of binomial terms, with terms held either as plain values
/// or as logarithms.
trait TermSum {
    fn first(n: u64, r: f64, first: f64) -> Self;
    /// Advance the current term from `k` to `k + 1`.
    fn advance(&mut self, n: u64, k: u64, odds: f64);
    fn reset(&mut self);
    fn add_current(&mut self);
    /// Current term is negligible against the running sum.
    fn negligible(&self) -> bool;
    fn total(&self) -> f64;
}

struct Linear {
    term: f64,
    sum: f64,
}

impl TermSum for Linear {
    fn first(_n: u64, _r: f64, first: f64) -> Self {
        Linear {
            term: first,
            sum: 0.0,
        }
    }
    fn advance(&mut self, n: u64, k: u64, odds: f64) {
        self.term *= (n - k) as f64 / (k + 1) as f64 * odds;
    }
    fn reset(&mut self) {
        self.sum = 0.0;
    }
    fn add_current(&mut self) {
        self.sum += self.term;
    }
    fn negligible(&self) -> bool {
        self.term <= self.sum * NEGLIGIBLE
    }
    fn total(&self) -> f64 {
        self.sum
    }
}

/// Terms as logarithms; the sum is `exp(scale) * acc`.
struct Log {
    log_term: f64,
    scale: f64,
    acc: f64,
}

impl TermSum for Log {
    fn first(n: u64, r: f64, _first: f64) -> Self {
        Log {
            log_term: n as f64 * libm::log(r),
            scale: f64::NEG_INFINITY,
            acc: 0.0,
        }
    }
    fn advance(&mut self, n: u64, k: u64, log_odds: f64) {
        self.log_term += libm::log((n - k) as f64 / (k + 1) as f64) + log_odds;
    }
    fn reset(&mut self) {
        self.scale = f64::NEG_INFINITY;
        self.acc = 0.0;
    }
    fn add_current(&mut self) {
        if self.log_term <= self.scale {
            self.acc += libm::exp(self.log_term - self.scale);
        } else {
            self.acc = self.acc * libm::exp(self.scale - self.log_term) + 1.0;
            self.scale = self.log_term;
        }
    }
    fn negligible(&self) -> bool {
        self.log_term - self.scale <= libm::log(NEGLIGIBLE)
    }
    fn total(&self) -> f64 {
        if self.acc == 0.0 {
            0.0
        } else {
            libm::exp(self.scale) * self.acc
        }
    }
}

struct Tails<S> {
    n: u64,
    /// Mean failure count `n (1 - r)`.
    mean: f64,
    step: f64,
    sum: S,
}

impl Tails<Linear> {
    fn new(n: u64, r: f64, first: f64) -> Self {
        Tails {
            n,
            mean: n as f64 * (1.0 - r),
            step: (1.0 - r) / r,
            sum: Linear::first(n, r, first),
        }
    }
}

impl Tails<Log> {
    fn new(n: u64, r: f64, first: f64) -> Self {
        Tails {
            n,
            mean: n as f64 * (1.0 - r),
            step: libm::log(1.0 - r) - libm::log(r),
            sum: Log::first(n, r, first),
        }
    }
}

impl<S: TermSum> Tails<S> {
    fn confidence(mut self, f: u64) -> f64 {
        self.sum.add_current();
        for k in 0..f {
            self.sum.advance(self.n, k, self.step);
            self.sum.add_current();
        }
        let lower = self.sum.total();
        if lower <= 0.5 {
            return 1.0 - lower;
        }
        self.sum.reset();
        for k in f..self.n {
            self.sum.advance(self.n, k, self.step);
            self.sum.add_current();
            if (k + 1) as f64 > self.mean + 1.0 && self.sum.negligible() {
                break;
            }
        }
        self.sum.total()
    }
}
