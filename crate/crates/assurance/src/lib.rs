//! Command-line front end, file formats, and verification oracles for
//! `assurance-core`.
//!
//! * [`oracle`]: seeded Monte Carlo estimation of the binomial tail and a
//!   brute-force enumeration of finite-population assurance, both used to
//!   check the core independently.
//! * [`format`]: CSV and JSON writers for tables, step grids, and plot
//!   series.
//! * [`cli`]: the `assurance` command.

pub mod cli;
pub mod error;
pub mod format;
pub mod oracle;

pub use error::Error;
