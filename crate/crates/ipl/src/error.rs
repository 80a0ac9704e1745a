//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by distribution evaluation, fitting, and study setup.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum IplError {
    /// A distribution or option parameter failed validation.
    #[error("invalid parameter {name} = {value}: must be finite and > 0")]
    InvalidParameter { name: &'static str, value: f64 },

    /// A function argument lies outside its mathematical domain.
    #[error("argument {name} = {value} outside domain {domain}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// The requested raw moment does not exist (requires r < alpha).
    #[error("moment of order r = {r} does not exist for alpha = {alpha}: requires r < alpha")]
    MomentDiverges { r: f64, alpha: f64 },

    /// A sample value is nonpositive or not finite.
    #[error("sample value #{index} is {value}: all values must be finite and > 0")]
    InvalidSampleValue { index: usize, value: f64 },

    /// The sample has too few observations for the requested operation.
    #[error("sample has {got} observation(s), need at least {needed}")]
    SampleTooSmall { needed: usize, got: usize },

    /// All sample values are identical, so the shape parameter is not
    /// identifiable.
    #[error("degenerate sample: all {n} values equal {value}")]
    DegenerateSample { n: usize, value: f64 },

    /// A study configuration failed validation.
    #[error("invalid study configuration: {what}")]
    InvalidConfig { what: String },

    /// A computation degenerated numerically.
    #[error("numerical failure: {what}")]
    Numeric { what: String },
}

pub type Result<T> = std::result::Result<T, IplError>;
