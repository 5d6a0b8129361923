//! walkmix: exact spectra, mixing curves, and cutoff diagnostics for lazy
//! symmetric random walks on finite abelian groups.
//!
//! A walk of rank r on a group of order N applies one of the symbols
//! {+-a_1, ..., +-a_r, 0}, each with probability 1/(2r+1). Characters
//! diagonalize the walk operator, so the whole spectrum, the L1 distance to
//! stationarity d(t), mixing thresholds t(d), and cutoff ratios
//! t(eps)/t(1-eps) are all computed exactly from closed-form eigenvalues,
//! with no matrix powers and no cancellation. A battery of inequality checks
//! (Gaussian envelopes for eigenvalues, short-mode lower bounds, lattice
//! theta-sum tails, and the end-to-end decay chain) quantifies why
//! bounded-rank families keep the cutoff ratio away from 1, with the
//! hypercube family profiled alongside as the contrast case. A seeded
//! Monte Carlo simulator cross-checks the exact machinery end to end.
//!
//! Modules:
//! - [`group`]: groups, walk specifications, exact convolution oracle.
//! - [`spectral`]: characters, eigenvalues, dominant mode, spectral gap.
//! - [`mixing`]: distance curves, thresholds, sandwich bounds, gap products.
//! - [`bounds`]: the inequality battery and shifted-lattice theta sums.
//! - [`families`]: family presets, cutoff profiles, CSV/JSON reports.
//! - [`montecarlo`]: reproducible stochastic simulation.
//! - [`corpus`] and [`harness`]: the fixed verification corpus and the
//!   check battery over it.

pub mod bounds;
pub mod corpus;
pub mod error;
pub mod families;
pub mod group;
pub mod harness;
pub mod mixing;
pub mod montecarlo;
pub mod numeric;
pub mod spectral;

pub use error::{Error, Result};
