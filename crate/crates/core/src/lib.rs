//! Differentially private replication analysis of linear-regression effect
//! sizes.
//!
//! Two pipelines share one engine:
//!
//! - [`ad`] (alternative data) checks whether a published coefficient holds up
//!   on confidential data: subset estimates are compared against a tolerance
//!   region, the count of hits is released through the Laplace mechanism, and
//!   an exact Gibbs sampler gives the posterior of the hit rate.
//! - [`am`] (alternative model) compares two model specifications by the
//!   average overlap of their subset confidence intervals, releases the noised
//!   average, and reports a grid posterior that can be inverted into a bound on
//!   the coefficient difference.
//!
//! Only [`dp::NoisyRelease`] values and the reports built from them are meant
//! to leave the custodian; everything else in this crate is custodian-only.

pub mod ad;
pub mod am;
pub mod cli;
pub mod dp;
pub mod error;
pub mod model;
pub mod partition;
pub mod prior;
pub mod report;
pub mod sim;
pub mod summary;

pub use error::{Error, Result};
