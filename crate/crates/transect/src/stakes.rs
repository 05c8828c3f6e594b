//! The bundled stakes dataset.
//!
//! 68 perpendicular distances to wooden stakes detected along a 1000 m
//! transect over a plot with a known true density of 0.00375 stakes/m².
//! The file ships with the crate and is validated against its published
//! summary statistics on every load.

use crate::distance_file;
use crate::error::{Error, Result};
use crate::sample::PerpendicularSample;

pub const STAKES_N: usize = 68;
pub const STAKES_MEAN: f64 = 6.10824;
pub const STAKES_MEAN_TOLERANCE: f64 = 1e-5;
pub const STAKES_LINE_LENGTH_M: f64 = 1000.0;
pub const STAKES_TRUE_DENSITY: f64 = 0.00375;

static STAKES_TEXT: &str = include_str!("../data/stakes.txt");

pub fn stakes_sample() -> Result<PerpendicularSample> {
    let sample = distance_file::parse(STAKES_TEXT)?;
    let mean = sample.mean();
    if sample.n() != STAKES_N || (mean - STAKES_MEAN).abs() > STAKES_MEAN_TOLERANCE {
        return Err(Error::DatasetValidation {
            expected_n: STAKES_N,
            expected_mean: STAKES_MEAN,
            actual_n: sample.n(),
            actual_mean: mean,
        });
    }
    Ok(sample)
}

/// The known true density intercept implied by D = n f(0) / (2L):
/// `f(0) = 2 L D / n`, about 0.110294.
pub fn stakes_true_f0() -> f64 {
    2.0 * STAKES_LINE_LENGTH_M * STAKES_TRUE_DENSITY / STAKES_N as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_data_passes_validation() {
        let s = stakes_sample().unwrap();
        assert_eq!(s.n(), 68);
        assert!((s.mean() - 6.10824).abs() < 1e-5);
    }

    #[test]
    fn true_intercept_value() {
        assert!((stakes_true_f0() - 0.110294).abs() < 5e-7);
    }
}
