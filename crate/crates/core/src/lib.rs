//! Reliability, confidence, and assurance statistics for pass/fail test
//! campaigns.
//!
//! The crate covers two population models:
//!
//! * the classical infinite-population model, where confidence in a
//!   reliability level is the upper binomial tail ([`confidence_infinite`])
//!   and reliability and assurance are found by inverting it
//!   ([`reliability_infinite`], [`assurance_infinite`]);
//! * a finite-population model, where only `m` more units will ever be built
//!   after `n` were tested. The number of further failures `d` can only take
//!   the values `0..=m`, so reliability moves in discrete steps
//!   ([`step_grid`], [`confidence_finite`], [`reliability_finite`],
//!   [`assurance_finite`]).
//!
//! The [`tabulate`] module builds assurance tables and plot-ready series on
//! top of both models.
//!
//! The crate is `no_std` and only needs `alloc`.
//!
//! ```
//! use assurance_core::{assurance_finite, assurance_infinite, FinitePlan, TestEvidence};
//!
//! let evidence = TestEvidence::new(3, 0)?;
//! let finite = assurance_finite(&FinitePlan::new(evidence, 5));
//! assert!((finite.assurance.value() - 0.75).abs() < 1e-12);
//!
//! let infinite = assurance_infinite(evidence)?;
//! assert!((infinite.value() - 0.682).abs() < 5e-4);
//! # Ok::<(), assurance_core::Error>(())
//! ```

#![no_std]

extern crate alloc;

mod binomial;
mod error;
#[cfg(feature = "exact")]
pub mod exact;
mod finite;
mod infinite;
mod probability;
pub mod solve;
pub mod tabulate;

pub use binomial::confidence_infinite;
pub use error::{Error, Result};
pub use finite::{
    assurance_finite, confidence_finite, confidence_finite_at_ratio, reliability_finite, step_grid,
    AssuranceResult, FinitePlan, ReliabilityStep, BOUNDARY_TOLERANCE,
};
pub use infinite::{
    assurance_infinite, assurance_infinite_brent, reliability_infinite, SOLVER_MAX_ITERATIONS,
    SOLVER_TOLERANCE,
};
pub use probability::{Probability, TestEvidence};
