//! Exact formal power series toolkit for Segre-class generating series.
//!
//! - [`series`]: truncated power series over the rationals (ring operations,
//!   rational powers, composition, reversion, coefficient extraction).
//! - [`chern`]: the cohomology ring of `P^n` and the Chern character to Segre
//!   class pipeline for tautological bundles on `(P^1)^[n] = P^n`.
//! - [`catalog`]: named constructions of the Lehn, curve, higher-rank,
//!   Verlinde and conjectural series together with their identity checks.
//! - [`dsl`]: the `.lehn` manifest language for declarative identity checks.

pub mod rational;
pub mod catalog;
pub mod chern;
pub mod dsl;
pub mod series;

pub use rational::{binom, binom_general, Rational};
pub use series::{Comparison, Series, SeriesError, Var};
