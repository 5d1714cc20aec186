//! Estimation of phase-space embedding parameters from univariate time series.
//!
//! A scalar series is windowed into dense provisional embedding vectors, a
//! small three-layer feedforward network is trained on one-step forecasting
//! with a forgetting (L1) penalty on its input-to-hidden weights, and the
//! embedding dimension `m` and time delay `tau` are read off the converged
//! per-input relevance profile.
//!
//! The crate is split by pipeline stage:
//!
//! - [`series`]: benchmark generators (maps, flows, Gaussian) and transforms
//!   (normalization, noise injection, smoothing resample).
//! - [`embed`]: provisional/standard embedding vector construction and
//!   train/test resampling plans.
//! - [`net`]: the forgetting network and its online training loop.
//! - [`estimate`]: relevance profiles, aggregation across resamplings, and
//!   the `(m, tau)` selection thresholds.
//! - [`forecast`]: single-step forecasting evaluation of trained networks.
//!
//! Everything here is pure computation over owned values; IO, file formats,
//! and the command-line front end live in the companion `delaynet` crate.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]
// The training kernels index flat weight matrices from several arrays at
// once; indexed loops read better there than zipped iterators.
#![allow(clippy::needless_range_loop)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("delaynet-core needs either the `std` or the `libm` feature for float math");

pub mod embed;
pub mod error;
pub mod estimate;
pub mod forecast;
pub mod net;
pub mod ode;
pub mod series;

pub use error::{Error, Result};
