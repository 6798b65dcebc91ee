//! Preference recovery from choice data with deferrals and multi-valued
//! choices.
//!
//! The crate enumerates weak orders, strict partial orders and preorders on
//! up to seven alternatives, scores datasets against three deterministic
//! models of (in)complete preference maximization by exact minimum-distance
//! search, tests revealed-preference axioms, and separates revealed
//! indifference from revealed indecisiveness.

pub mod dataset;
pub mod dot;
pub mod error;
pub mod exec;
pub mod metrics;
pub mod models;
pub mod relation;
pub mod report;
pub mod revealed;
pub mod separation;
pub mod simulation;

pub use error::{Error, Result};
