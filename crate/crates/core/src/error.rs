//! Error type shared by all pipeline stages.

use alloc::string::String;
use core::fmt;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Failures raised by generators, dataset builders, training, and estimation.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter violated a precondition; the message names it.
    InvalidParameter(String),
    /// A map orbit left the tracked basin (|x| > 1e6) at the given step.
    UnboundedOrbit { step: usize },
    /// Numerical integration produced a non-finite state at the given step.
    IntegrationBlowUp { step: usize },
    /// The series is constant, so range normalization is undefined.
    DegenerateSeries,
    /// The series is too short for the requested windowing.
    InsufficientData { required: usize, actual: usize },
    /// A resampling split left the train or test side empty.
    DegenerateSplit { count: usize, train: usize },
    /// Two sequences that must agree in length do not.
    LengthMismatch { expected: usize, actual: usize },
    /// Training cost became non-finite.
    TrainingDiverged { epoch: usize },
    /// Every relevance is zero; no embedding can be selected.
    NoSignal,
    /// Targets are constant, so the range-normalized error is undefined.
    NrmseUndefined,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::UnboundedOrbit { step } => {
                write!(f, "map orbit diverged (|x| > 1e6) at step {step}")
            }
            Error::IntegrationBlowUp { step } => {
                write!(f, "integration produced a non-finite state at step {step}")
            }
            Error::DegenerateSeries => {
                write!(f, "series is constant; range normalization is undefined")
            }
            Error::InsufficientData { required, actual } => write!(
                f,
                "series too short: {actual} observations, at least {required} required"
            ),
            Error::DegenerateSplit { count, train } => write!(
                f,
                "degenerate split: {train} train rows out of {count} leaves one side empty"
            ),
            Error::LengthMismatch { expected, actual } => {
                write!(f, "length mismatch: expected {expected}, got {actual}")
            }
            Error::TrainingDiverged { epoch } => write!(
                f,
                "training cost became non-finite at epoch {epoch}; try a smaller step size"
            ),
            Error::NoSignal => write!(f, "all relevances are zero; nothing to estimate"),
            Error::NrmseUndefined => {
                write!(f, "targets are constant; range-normalized error is undefined")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
