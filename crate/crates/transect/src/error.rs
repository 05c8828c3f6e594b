//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or operation received a parameter outside its domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An evaluation point lies outside the support of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// The sample carries no usable signal (e.g. every distance is zero).
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    /// A root finder exhausted its iteration budget.
    #[error(
        "root search did not converge after {iterations} iterations \
         (last bracket [{bracket_low}, {bracket_high}])"
    )]
    Convergence {
        iterations: u32,
        bracket_low: f64,
        bracket_high: f64,
    },

    /// A distance file could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The bundled dataset failed its load-time validation.
    #[error(
        "dataset validation failed: expected n = {expected_n} and mean = {expected_mean}, \
         got n = {actual_n} and mean = {actual_mean}"
    )]
    DatasetValidation {
        expected_n: usize,
        expected_mean: f64,
        actual_n: usize,
        actual_mean: f64,
    },

    /// An estimator failed inside a Monte Carlo replication; the scenario aborts.
    #[error("replication {replication} failed for estimator {estimator}: {source}")]
    Replication {
        replication: usize,
        estimator: String,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
