//! Exact differential-privacy and Bayesian semantic-privacy analysis of
//! finite randomized mechanisms.
//!
//! Everything in this crate is computed from exact finite probability tables:
//! continuous noise is discretized onto a grid and the discretized mechanism
//! is the object of analysis, so every reported ε, δ, posterior, and bound
//! margin is an exact property of a finite object (up to f64 rounding), not a
//! Monte-Carlo estimate.
//!
//! Module map:
//! - [`prob`]: finite distributions and the indistinguishability calculus
//!   (statistical difference, tight δ(ε), pointwise form, conversions,
//!   post-processing, joint pairing).
//! - [`mechanism`]: database spaces, Hamming neighbors, mechanisms as
//!   stochastic maps (dense or generator-backed), coordinate suppression,
//!   and the built-in generators (randomized response, discretized
//!   Laplace/Gaussian sums, local-sensitivity Laplace).
//! - [`dp`]: differential-privacy extraction (ε_max, tight-δ curves, good
//!   sets, semantic-to-DP extraction).
//! - [`bayes`]: belief priors, game posteriors, semantic-privacy reports,
//!   and the theorem verifiers (conditional-closeness lemma, good-set
//!   localization, informed beliefs, the Gaussian-sum counterexample).
//! - [`verify`]: seeded randomized law suites producing pass/fail lines.
//! - [`oracle`]: independent brute-force reference implementations used to
//!   cross-check the fast paths.
//! - [`io`]: JSON/CSV serialization with drift-free decimal strings.

pub mod bayes;
pub mod dp;
mod error;
pub mod io;
pub mod mechanism;
mod numerics;
pub mod oracle;
pub mod prob;
pub mod verify;

pub use error::{Error, Result};
