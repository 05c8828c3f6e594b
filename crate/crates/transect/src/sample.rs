//! Observed perpendicular distances.

use rand::Rng;

use crate::error::{Error, Result};
use crate::numeric::compensated_sum;

/// An ordered collection of nonnegative perpendicular distances (meters).
///
/// Zero distances are legitimate detections on the line and are kept; the
/// estimators themselves reject a sample whose every distance is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PerpendicularSample {
    distances: Vec<f64>,
}

impl PerpendicularSample {
    pub fn new(distances: Vec<f64>) -> Result<Self> {
        if distances.is_empty() {
            return Err(Error::InvalidParameter(
                "a sample needs at least one distance".into(),
            ));
        }
        for (i, &d) in distances.iter().enumerate() {
            if !d.is_finite() || d < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "distance #{} is {d}; distances must be finite and nonnegative",
                    i + 1
                )));
            }
        }
        Ok(Self { distances })
    }

    pub fn n(&self) -> usize {
        self.distances.len()
    }

    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    pub fn sum(&self) -> f64 {
        compensated_sum(self.distances.iter().copied())
    }

    pub fn sum_sq(&self) -> f64 {
        compensated_sum(self.distances.iter().map(|d| d * d))
    }

    pub fn mean(&self) -> f64 {
        self.sum() / self.n() as f64
    }

    /// Resample of size n drawn with replacement (bootstrap replicate).
    pub fn resample<R: Rng + ?Sized>(&self, rng: &mut R) -> PerpendicularSample {
        let n = self.n();
        let distances = (0..n)
            .map(|_| self.distances[rng.random_range(0..n)])
            .collect();
        // invariants hold: drawn from an already-validated sample
        PerpendicularSample { distances }
    }

    /// Internal constructor for samplers that generate guaranteed-valid draws.
    pub(crate) fn from_draws(distances: Vec<f64>) -> PerpendicularSample {
        debug_assert!(!distances.is_empty());
        debug_assert!(distances.iter().all(|d| d.is_finite() && *d >= 0.0));
        PerpendicularSample { distances }
    }
}
