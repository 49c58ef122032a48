//! Turns raw power-meter traces of ledger-node hardware into per-scenario
//! power statistics, per-message energy metrics and annualized whole-network
//! energy projections.
//!
//! The pipeline: [`measurement`] parses traces and aggregates trials,
//! [`metrics`] normalizes scenario power and derives the rate-to-energy
//! curve, [`projection`] scales a hardware fleet and rate profile to an
//! annual figure, and [`report`] compares it against named baselines and
//! renders the result. All operations are pure functions over immutable
//! inputs; aggregations reduce in a fixed order so concurrent pipelines are
//! bit-identical.

pub mod error;
pub mod measurement;
pub mod metrics;
pub mod projection;
pub mod report;
pub mod units;

pub use error::{Error, Result};
