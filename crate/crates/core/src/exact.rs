//! Exact rational evaluation of the binomial tail.
//!
//! Slow and allocation heavy; it exists to check [`crate::confidence_infinite`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::probability::TestEvidence;

/// Largest sample count accepted by [`confidence_infinite_exact`].
pub const EXACT_SAMPLE_LIMIT: u64 = 1000;

/// `1 - sum_{k=0}^{f} C(n, k) (1 - r)^k r^(n - k)` in exact arithmetic.
pub fn confidence_infinite_exact(evidence: TestEvidence, r: &BigRational) -> Result<BigRational> {
    let n = evidence.samples();
    let f = evidence.failures();
    if n > EXACT_SAMPLE_LIMIT {
        return Err(Error::UnsupportedSize {
            size: n,
            limit: EXACT_SAMPLE_LIMIT,
        });
    }
    let one = BigRational::one();
    if r < &BigRational::zero() || r > &one {
        return Err(Error::ProbabilityOutOfRange(approx(r)));
    }
    let q = &one - r;

    let mut binom = BigInt::one();
    let mut tail = BigRational::zero();
    for k in 0..=f {
        if k > 0 {
            binom = binom * BigInt::from(n - k + 1) / BigInt::from(k);
        }
        let term = BigRational::from_integer(binom.clone()) * pow(&q, k) * pow(r, n - k);
        tail += term;
    }
    Ok(one - tail)
}

/// Nearest `f64`, for diagnostics and comparisons.
pub fn approx(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

fn pow(base: &BigRational, exp: u64) -> BigRational {
    num_traits::pow::pow(base.clone(), exp as usize)
}
