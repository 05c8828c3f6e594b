//! Estimators of the perpendicular-distance density at zero.
//!
//! Four estimators are provided: the exponential baseline `1/mean`, the
//! half-normal maximum likelihood estimator, and the proposed model's
//! method-of-moments and maximum-likelihood estimators (shape m known).
//! Every estimator rejects a sample whose mean carries no signal.

use crate::error::{Error, Result};
use crate::model::ModelConstants;
use crate::numeric::compensated_sum;
use crate::sample::PerpendicularSample;

pub const DEFAULT_SCORE_TOLERANCE: f64 = 1e-10;
pub const MLE_MAX_ITERATIONS: u32 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exponential,
    HalfNormal,
    ProposedMom,
    ProposedMle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateResult {
    pub method: Method,
    pub m: Option<u32>,
    pub beta_hat: Option<f64>,
    pub f0_hat: f64,
    pub converged: bool,
    pub iterations: u32,
}

/// `f_EX(0) = 1 / mean`.
pub fn estimate_exponential(sample: &PerpendicularSample) -> Result<EstimateResult> {
    let mean = positive_mean(sample)?;
    Ok(EstimateResult {
        method: Method::Exponential,
        m: None,
        beta_hat: None,
        f0_hat: 1.0 / mean,
        converged: true,
        iterations: 0,
    })
}

/// `f_HN(0) = sqrt(2n / (pi * sum x^2))`.
pub fn estimate_halfnormal(sample: &PerpendicularSample) -> Result<EstimateResult> {
    let ssq = sample.sum_sq();
    if ssq <= 0.0 {
        return Err(Error::DegenerateSample(
            "every distance is zero; the half-normal estimator needs a positive sum of squares"
                .into(),
        ));
    }
    let n = sample.n() as f64;
    Ok(EstimateResult {
        method: Method::HalfNormal,
        m: None,
        beta_hat: None,
        f0_hat: (2.0 * n / (std::f64::consts::PI * ssq)).sqrt(),
        converged: true,
        iterations: 0,
    })
}

/// Method of moments for the proposed model: `beta = S_1/(mean S_0)` and
/// `f(0) = L_m / mean`.
pub fn estimate_mom(sample: &PerpendicularSample, m: u32) -> Result<EstimateResult> {
    estimate_mom_with(&ModelConstants::new(m)?, sample)
}

/// Same as [`estimate_mom`] with the sums for `m` precomputed, for callers
/// that evaluate many samples at the same shape.
pub fn estimate_mom_with(
    constants: &ModelConstants,
    sample: &PerpendicularSample,
) -> Result<EstimateResult> {
    let mean = positive_mean(sample)?;
    Ok(EstimateResult {
        method: Method::ProposedMom,
        m: Some(constants.m()),
        beta_hat: Some(constants.s1() / (mean * constants.s0())),
        f0_hat: constants.lm() / mean,
        converged: true,
        iterations: 0,
    })
}

/// Likelihood score in beta, divided by m and moved to one side:
/// `n/(m beta) + sum x/(1 + beta x) - sum x`.
///
/// Evaluated in the cancellation-free rearrangement
/// `n/(m beta) - beta * sum x^2/(1 + beta x)`; it is strictly decreasing on
/// (0, inf) with a unique positive root whenever the sample mean is positive.
pub fn mle_score(beta: f64, sample: &PerpendicularSample, m: u32) -> Result<f64> {
    if m < 1 {
        return Err(Error::InvalidParameter(format!(
            "shape m must be a positive integer, got {m}"
        )));
    }
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::Domain(format!(
            "score is defined for beta > 0, got {beta}"
        )));
    }
    Ok(score_unchecked(beta, sample, m))
}

fn score_unchecked(beta: f64, sample: &PerpendicularSample, m: u32) -> f64 {
    let n = sample.n() as f64;
    let weighted = compensated_sum(
        sample
            .distances()
            .iter()
            .map(|&x| x * x / (1.0 + beta * x)),
    );
    n / (f64::from(m) * beta) - beta * weighted
}

fn score_derivative(beta: f64, sample: &PerpendicularSample, m: u32) -> f64 {
    let n = sample.n() as f64;
    let curvature = compensated_sum(sample.distances().iter().map(|&x| {
        let d = x / (1.0 + beta * x);
        d * d
    }));
    -n / (f64::from(m) * beta * beta) - curvature
}

/// Maximum likelihood for the proposed model with known shape m.
///
/// Newton iteration started at the moment estimate, safeguarded by a
/// sign-change bracket: a step falling outside the bracket is replaced by
/// its midpoint, and every evaluation tightens the bracket. The score is
/// strictly decreasing, so the accepted root is the unique one.
pub fn estimate_mle(sample: &PerpendicularSample, m: u32, tolerance: f64) -> Result<EstimateResult> {
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "score tolerance must be positive, got {tolerance}"
        )));
    }
    estimate_mle_with(&ModelConstants::new(m)?, sample, tolerance)
}

pub(crate) fn estimate_mle_with(
    constants: &ModelConstants,
    sample: &PerpendicularSample,
    tolerance: f64,
) -> Result<EstimateResult> {
    let mean = positive_mean(sample)?;
    let m = constants.m();
    let beta_init = constants.s1() / (mean * constants.s0());

    // sign-change bracket around the initial guess
    let mut lo;
    let mut hi;
    if score_unchecked(beta_init, sample, m) > 0.0 {
        lo = beta_init;
        hi = beta_init * 2.0;
        while score_unchecked(hi, sample, m) > 0.0 {
            lo = hi;
            hi *= 2.0;
        }
    } else {
        hi = beta_init;
        lo = beta_init * 0.5;
        while score_unchecked(lo, sample, m) <= 0.0 {
            hi = lo;
            lo *= 0.5;
        }
    }

    let mut beta = beta_init.clamp(lo, hi);
    for iteration in 1..=MLE_MAX_ITERATIONS {
        let s = score_unchecked(beta, sample, m);
        if s.abs() <= tolerance {
            return Ok(EstimateResult {
                method: Method::ProposedMle,
                m: Some(m),
                beta_hat: Some(beta),
                f0_hat: beta / constants.s0(),
                converged: true,
                iterations: iteration,
            });
        }
        if s > 0.0 {
            lo = beta;
        } else {
            hi = beta;
        }
        let step = beta - s / score_derivative(beta, sample, m);
        beta = if step > lo && step < hi {
            step
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::Convergence {
        iterations: MLE_MAX_ITERATIONS,
        bracket_low: lo,
        bracket_high: hi,
    })
}

/// Density estimate `D = n f(0) / (2 L)` for a transect of total length L.
pub fn density(n: usize, f0_hat: f64, line_length: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidParameter(
            "density needs at least one detection".into(),
        ));
    }
    if !(line_length.is_finite() && line_length > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "line length must be positive, got {line_length}"
        )));
    }
    if !(f0_hat.is_finite() && f0_hat >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "f(0) estimate must be nonnegative, got {f0_hat}"
        )));
    }
    Ok(n as f64 * f0_hat / (2.0 * line_length))
}

fn positive_mean(sample: &PerpendicularSample) -> Result<f64> {
    let mean = sample.mean();
    if mean <= 0.0 {
        return Err(Error::DegenerateSample(
            "every distance is zero; estimators need a positive sample mean".into(),
        ));
    }
    Ok(mean)
}

/// Identifier of one estimator column in simulation and bootstrap reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EstimatorId {
    Exponential,
    HalfNormal,
    Mom { m: u32 },
    Mle { m: u32 },
}

impl EstimatorId {
    pub fn label(&self) -> &'static str {
        match self {
            EstimatorId::Exponential => "ex",
            EstimatorId::HalfNormal => "hn",
            EstimatorId::Mom { .. } => "mom",
            EstimatorId::Mle { .. } => "mle",
        }
    }

    pub fn m(&self) -> Option<u32> {
        match self {
            EstimatorId::Mom { m } | EstimatorId::Mle { m } => Some(*m),
            _ => None,
        }
    }

    /// Bind the estimator to its precomputed constants so it can be applied
    /// to many samples cheaply.
    pub fn prepare(self) -> Result<PreparedEstimator> {
        let constants = match self {
            EstimatorId::Mom { m } | EstimatorId::Mle { m } => Some(ModelConstants::new(m)?),
            _ => None,
        };
        Ok(PreparedEstimator { id: self, constants })
    }
}

impl std::fmt::Display for EstimatorId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.m() {
            Some(m) => write!(f, "{}(m={m})", self.label()),
            None => f.write_str(self.label()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PreparedEstimator {
    id: EstimatorId,
    constants: Option<ModelConstants>,
}

impl PreparedEstimator {
    pub fn id(&self) -> EstimatorId {
        self.id
    }

    pub fn estimate(&self, sample: &PerpendicularSample) -> Result<EstimateResult> {
        match self.id {
            EstimatorId::Exponential => estimate_exponential(sample),
            EstimatorId::HalfNormal => estimate_halfnormal(sample),
            EstimatorId::Mom { .. } => {
                estimate_mom_with(self.constants.as_ref().expect("prepared"), sample)
            }
            EstimatorId::Mle { .. } => estimate_mle_with(
                self.constants.as_ref().expect("prepared"),
                sample,
                DEFAULT_SCORE_TOLERANCE,
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample(values: &[f64]) -> PerpendicularSample {
        PerpendicularSample::new(values.to_vec()).unwrap()
    }

    #[test]
    fn exponential_known_values() {
        assert_eq!(
            estimate_exponential(&sample(&[1.0, 1.0, 1.0])).unwrap().f0_hat,
            1.0
        );
        let r = estimate_exponential(&sample(&[2.0, 4.0])).unwrap();
        assert!((r.f0_hat - 1.0 / 3.0).abs() < 1e-15);
        assert!(matches!(
            estimate_exponential(&sample(&[0.0, 0.0])),
            Err(Error::DegenerateSample(_))
        ));
    }

    #[test]
    fn halfnormal_known_values() {
        let r = estimate_halfnormal(&sample(&[1.0, 1.0])).unwrap();
        assert!((r.f0_hat - 2.0 / (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-15);
        assert!(estimate_halfnormal(&sample(&[0.0])).is_err());
    }

    #[test]
    fn mom_known_values() {
        // mean 1.5 at m = 1 gives beta = 1 exactly
        let r = estimate_mom(&sample(&[1.0, 2.0]), 1).unwrap();
        assert!((r.beta_hat.unwrap() - 1.0).abs() < 1e-15);
        assert!((r.f0_hat - 0.5).abs() < 1e-15);
        assert_eq!(r.m, Some(1));
        assert!(r.converged);
    }

    #[test]
    fn score_signs_and_root() {
        let s = sample(&[1.0]);
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        assert!(mle_score(phi, &s, 1).unwrap().abs() < 1e-12);
        assert!(mle_score(1e-9, &s, 1).unwrap() > 0.0);
        assert!(mle_score(1e9, &s, 1).unwrap() < 0.0);
        assert!(mle_score(0.0, &s, 1).is_err());
        assert!(mle_score(-1.0, &s, 1).is_err());
    }

    #[test]
    fn mle_finds_golden_ratio_root() {
        let r = estimate_mle(&sample(&[1.0]), 1, DEFAULT_SCORE_TOLERANCE).unwrap();
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        assert!((r.beta_hat.unwrap() - phi).abs() < 1e-9);
        assert!(r.converged);
        assert!(r.iterations <= 25);
        // both estimators share the f0 map
        assert_eq!(
            r.f0_hat,
            r.beta_hat.unwrap() / ModelConstants::new(1).unwrap().s0()
        );
    }

    #[test]
    fn mle_rejects_bad_tolerance_and_degenerate_samples() {
        assert!(estimate_mle(&sample(&[1.0]), 1, 0.0).is_err());
        assert!(estimate_mle(&sample(&[0.0, 0.0]), 2, 1e-10).is_err());
    }

    #[test]
    fn density_known_values() {
        let d = density(68, 0.110294, 1000.0).unwrap();
        assert!((d - 0.00375).abs() < 5e-6);
        assert_eq!(density(5, 0.0, 100.0).unwrap(), 0.0);
        assert!(density(0, 1.0, 100.0).is_err());
        assert!(density(5, 1.0, 0.0).is_err());
    }

    #[test]
    fn prepared_estimators_match_direct_calls() {
        let s = sample(&[0.5, 1.5, 3.0]);
        let direct = estimate_mom(&s, 8).unwrap();
        let prepared = EstimatorId::Mom { m: 8 }.prepare().unwrap();
        assert_eq!(prepared.estimate(&s).unwrap(), direct);
        assert_eq!(prepared.id().to_string(), "mom(m=8)");
        assert_eq!(EstimatorId::Exponential.to_string(), "ex");
    }

    proptest! {
        #[test]
        fn mom_scale_equivariance_is_exact(
            m in 1u32..100,
            base in proptest::collection::vec(0.01f64..50.0, 2..40),
            c in 0.25f64..4.0,
        ) {
            // scaling by a power of two keeps division exact, so the
            // equivariance here is bitwise
            let c = [0.25, 0.5, 2.0, 4.0][(c.floor() as usize).min(3) % 4];
            let s = sample(&base);
            let scaled = sample(&base.iter().map(|x| c * x).collect::<Vec<_>>());
            let r0 = estimate_mom(&s, m).unwrap();
            let r1 = estimate_mom(&scaled, m).unwrap();
            prop_assert!((r1.f0_hat * c - r0.f0_hat).abs() <= 1e-12 * r0.f0_hat);
            prop_assert!((r1.beta_hat.unwrap() * c - r0.beta_hat.unwrap()).abs()
                <= 1e-12 * r0.beta_hat.unwrap());
        }

        #[test]
        fn score_is_strictly_decreasing(
            m in 1u32..30,
            values in proptest::collection::vec(0.01f64..20.0, 1..30),
            beta in 0.01f64..50.0,
        ) {
            let s = sample(&values);
            let s0 = mle_score(beta, &s, m).unwrap();
            let s1 = mle_score(beta * 1.5, &s, m).unwrap();
            prop_assert!(s1 < s0);
        }
    }
}
