//! Command-line front end and file formats for the embedding estimator.
//!
//! The heavy lifting (generators, embedding datasets, the forgetting
//! network, selection rules) lives in `delaynet-core`; this crate adds
//! series ingestion, run orchestration across resamplings, JSON/CSV/SVG
//! reports, and the `delaynet` binary.

pub mod config;
pub mod io;
pub mod pipeline;
pub mod report;
pub mod snapshot;
pub mod svg;

/// Environment variable holding the default output directory.
pub const OUT_DIR_ENV: &str = "DELAYNET_OUT_DIR";
