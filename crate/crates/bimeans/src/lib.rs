//! Bivariate means: numerically stable evaluation kernels, parameter-curve
//! analysis, and an empirical auditor for a catalog of mean inequalities.
//!
//! The crate has four layers:
//!
//! - [`means`]: the nine mean families (arithmetic, geometric, harmonic,
//!   logarithmic, identric, power, weighted power, Lehmer, modified Alzer)
//!   with log-space kernels, guarded series paths through the removable
//!   singularities, and per-evaluation rounding bounds.
//! - [`params`]: closed-form first and second derivatives of the maps
//!   `t -> log mean(t)` in the family parameter, finite-difference
//!   cross-validation, and monotonicity/log-convexity classification.
//! - [`claims`]: a fixed catalog of composite mean inequalities, signed-margin
//!   evaluation with error bounds, deterministic grid/random/refinement
//!   counterexample search, and escalation of near-ties to the
//!   extended-precision [`oracle`].
//! - [`report`]: byte-deterministic JSON/CSV serialization of audit results.
//!
//! Everything is pure and deterministic: the same inputs (including the RNG
//! seed) produce byte-identical reports.

pub mod dd;
pub mod oracle;
pub mod params;
pub mod claims;
pub mod error;
pub mod means;
pub(crate) mod stable;

pub use error::{Error, Result};
