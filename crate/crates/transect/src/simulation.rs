//! Monte Carlo benchmark of the estimators.
//!
//! A scenario draws `reps` samples of size `n` from one target family and
//! applies every estimator to the *same* samples, so the efficiency ratio
//! compares matched mean squared errors instead of independent noise.
//! Replications run on independent seeded substreams indexed by replication
//! number; the reduction walks replications in index order with compensated
//! sums, so the output is bit-identical for a fixed seed no matter how many
//! workers participate.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimators::{EstimatorId, PreparedEstimator};
use crate::families::{FamilyKind, TargetFamily};
use crate::numeric::{compensated_sum, mean, sample_std_dev};
use crate::rng::{derive_seed, substream};

pub const DEFAULT_REPLICATIONS: usize = 1000;
pub const DEFAULT_M_LIST: [u32; 3] = [2, 8, 20];
pub const GRID_SAMPLE_SIZES: [usize; 3] = [50, 100, 200];

/// The twelve (family, delta) configurations of the benchmark design.
pub fn paper_configurations() -> Vec<(FamilyKind, f64)> {
    use FamilyKind::*;
    vec![
        (ExponentialPower, 1.0),
        (ExponentialPower, 1.5),
        (ExponentialPower, 2.0),
        (HazardRate, 2.0),
        (HazardRate, 2.5),
        (HazardRate, 3.0),
        (Beta, 1.5),
        (Beta, 2.0),
        (Beta, 2.5),
        (GeneralPolynomial, 0.9),
        (GeneralPolynomial, 1.9),
        (GeneralPolynomial, 3.5),
    ]
}

#[derive(Debug)]
pub struct ScenarioSpec {
    family: TargetFamily,
    n: usize,
    reps: usize,
    m_list: Vec<u32>,
    seed: u64,
    include_mle: bool,
}

impl ScenarioSpec {
    pub fn new(
        family: TargetFamily,
        n: usize,
        reps: usize,
        m_list: Vec<u32>,
        seed: u64,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "sample size must be at least 2, got {n}"
            )));
        }
        if reps < 1 {
            return Err(Error::InvalidParameter(
                "replication count must be at least 1".into(),
            ));
        }
        if m_list.is_empty() {
            return Err(Error::InvalidParameter(
                "the shape list must name at least one m".into(),
            ));
        }
        Ok(Self {
            family,
            n,
            reps,
            m_list,
            seed,
            include_mle: false,
        })
    }

    /// Also run the likelihood estimator at every listed shape.
    pub fn with_mle(mut self) -> Self {
        self.include_mle = true;
        self
    }

    pub fn family(&self) -> &TargetFamily {
        &self.family
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn reps(&self) -> usize {
        self.reps
    }
    pub fn m_list(&self) -> &[u32] {
        &self.m_list
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The estimator columns, exponential baseline first.
    fn estimator_set(&self) -> Result<Vec<PreparedEstimator>> {
        let mut ids = vec![EstimatorId::Exponential, EstimatorId::HalfNormal];
        ids.extend(self.m_list.iter().map(|&m| EstimatorId::Mom { m }));
        if self.include_mle {
            ids.extend(self.m_list.iter().map(|&m| EstimatorId::Mle { m }));
        }
        ids.into_iter().map(EstimatorId::prepare).collect()
    }
}

/// Performance of one estimator in one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioMetrics {
    pub estimator: EstimatorId,
    /// Relative bias (mean estimate - truth) / truth.
    pub rb: f64,
    /// Root mean squared error over the truth.
    pub rrmse: f64,
    /// MSE of the exponential baseline over this estimator's MSE, on paired
    /// samples; exactly 1 for the baseline row.
    pub eff: f64,
    pub mean_estimate: f64,
    pub se_rb: f64,
    pub se_rrmse: f64,
    pub se_eff: f64,
    pub reps: usize,
    pub seed: u64,
}

pub fn run_scenario(spec: &ScenarioSpec) -> Result<Vec<ScenarioMetrics>> {
    let estimators = spec.estimator_set()?;
    let truth = spec.family.f0();

    let per_rep: Vec<Vec<f64>> = (0..spec.reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = substream(spec.seed, rep as u64);
            let sample = spec.family.sample(spec.n, &mut rng)?;
            estimators
                .iter()
                .map(|est| {
                    est.estimate(&sample).map(|r| r.f0_hat).map_err(|source| {
                        Error::Replication {
                            replication: rep,
                            estimator: est.id().to_string(),
                            source: Box::new(source),
                        }
                    })
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut out = Vec::with_capacity(estimators.len());
    let mut baseline_mse = f64::NAN;
    let mut baseline_sq: Vec<f64> = Vec::new();
    for (j, est) in estimators.iter().enumerate() {
        let deviations: Vec<f64> = per_rep.iter().map(|row| row[j] - truth).collect();
        let squares: Vec<f64> = deviations.iter().map(|d| d * d).collect();
        let bias = mean(&deviations);
        let mse = mean(&squares);
        if j == 0 {
            baseline_mse = mse;
            baseline_sq = squares.clone();
        }
        let (eff, se_eff) = if j == 0 {
            (1.0, 0.0)
        } else {
            (baseline_mse / mse, eff_stderr(&baseline_sq, &squares))
        };
        out.push(ScenarioMetrics {
            estimator: est.id(),
            rb: bias / truth,
            rrmse: mse.sqrt() / truth,
            eff,
            mean_estimate: truth + bias,
            se_rb: rb_stderr(&deviations, truth),
            se_rrmse: rrmse_stderr(&deviations, truth),
            se_eff,
            reps: spec.reps,
            seed: spec.seed,
        });
    }
    Ok(out)
}

/// One emitted cell of the full benchmark grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridRow {
    pub family: FamilyKind,
    pub delta: f64,
    pub n: usize,
    pub metrics: ScenarioMetrics,
}

/// The full 12-configuration x {50, 100, 200} design. Each scenario gets a
/// seed derived from the master seed and its fixed position in the grid.
pub fn run_grid(reps: usize, m_list: &[u32], seed: u64) -> Result<Vec<GridRow>> {
    run_grid_with(reps, m_list, seed, false)
}

pub fn run_grid_with(
    reps: usize,
    m_list: &[u32],
    seed: u64,
    include_mle: bool,
) -> Result<Vec<GridRow>> {
    let mut rows = Vec::new();
    let mut scenario_index = 0u64;
    for (kind, delta) in paper_configurations() {
        for &n in &GRID_SAMPLE_SIZES {
            let family = TargetFamily::new(kind, delta)?;
            let mut spec = ScenarioSpec::new(
                family,
                n,
                reps,
                m_list.to_vec(),
                derive_seed(seed, scenario_index),
            )?;
            if include_mle {
                spec = spec.with_mle();
            }
            for metrics in run_scenario(&spec)? {
                rows.push(GridRow {
                    family: kind,
                    delta,
                    n,
                    metrics,
                });
            }
            scenario_index += 1;
        }
    }
    Ok(rows)
}

/// Monte Carlo standard error of the relative bias: sd(deviation) / (sqrt(R) f0).
pub fn rb_stderr(deviations: &[f64], f0: f64) -> f64 {
    assert!(deviations.len() >= 2, "standard errors need reps >= 2");
    sample_std_dev(deviations) / ((deviations.len() as f64).sqrt() * f0)
}

/// Delta-method standard error of the RRMSE.
pub fn rrmse_stderr(deviations: &[f64], f0: f64) -> f64 {
    assert!(deviations.len() >= 2, "standard errors need reps >= 2");
    let squares: Vec<f64> = deviations.iter().map(|d| d * d).collect();
    let mse = mean(&squares);
    if mse <= 0.0 {
        return 0.0;
    }
    let r = deviations.len() as f64;
    sample_std_dev(&squares) / (2.0 * f0 * (r * mse).sqrt())
}

/// Delta-method standard error of the paired efficiency ratio
/// mean(a)/mean(b), with a and b the squared errors of the baseline and the
/// candidate on identical replicate samples.
pub fn eff_stderr(baseline_sq: &[f64], candidate_sq: &[f64]) -> f64 {
    assert_eq!(baseline_sq.len(), candidate_sq.len());
    assert!(baseline_sq.len() >= 2, "standard errors need reps >= 2");
    let r = baseline_sq.len() as f64;
    let a_bar = mean(baseline_sq);
    let b_bar = mean(candidate_sq);
    if a_bar <= 0.0 || b_bar <= 0.0 {
        return 0.0;
    }
    let var_a = compensated_sum(
        baseline_sq.iter().map(|a| (a - a_bar) * (a - a_bar)),
    ) / (r - 1.0);
    let var_b = compensated_sum(
        candidate_sq.iter().map(|b| (b - b_bar) * (b - b_bar)),
    ) / (r - 1.0);
    let cov = compensated_sum(
        baseline_sq
            .iter()
            .zip(candidate_sq)
            .map(|(a, b)| (a - a_bar) * (b - b_bar)),
    ) / (r - 1.0);
    let eff = a_bar / b_bar;
    let rel_var =
        (var_a / (a_bar * a_bar) + var_b / (b_bar * b_bar) - 2.0 * cov / (a_bar * b_bar)) / r;
    (eff * eff * rel_var).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_spec(seed: u64) -> ScenarioSpec {
        let family = TargetFamily::new(FamilyKind::ExponentialPower, 1.5).unwrap();
        ScenarioSpec::new(family, 30, 50, vec![2, 8], seed).unwrap()
    }

    #[test]
    fn spec_validation() {
        let fam = || TargetFamily::new(FamilyKind::Beta, 2.0).unwrap();
        assert!(ScenarioSpec::new(fam(), 1, 10, vec![2], 0).is_err());
        assert!(ScenarioSpec::new(fam(), 10, 0, vec![2], 0).is_err());
        assert!(ScenarioSpec::new(fam(), 10, 10, vec![], 0).is_err());
    }

    #[test]
    fn baseline_eff_is_exactly_one() {
        let rows = run_scenario(&tiny_spec(3)).unwrap();
        assert_eq!(rows[0].estimator, EstimatorId::Exponential);
        assert_eq!(rows[0].eff, 1.0);
        assert_eq!(rows[0].se_eff, 0.0);
        assert_eq!(rows.len(), 4); // ex, hn, mom(2), mom(8)
    }

    #[test]
    fn mle_rows_appear_behind_flag() {
        let family = TargetFamily::new(FamilyKind::ExponentialPower, 1.5).unwrap();
        let spec = ScenarioSpec::new(family, 25, 20, vec![8], 1)
            .unwrap()
            .with_mle();
        let rows = run_scenario(&spec).unwrap();
        let ids: Vec<EstimatorId> = rows.iter().map(|r| r.estimator).collect();
        assert!(ids.contains(&EstimatorId::Mle { m: 8 }));
        assert_eq!(ids.len(), 4);
    }

    #[test]
    fn repeated_runs_are_bit_identical() {
        let a = run_scenario(&tiny_spec(11)).unwrap();
        let b = run_scenario(&tiny_spec(11)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn stderr_of_constants_is_zero() {
        let devs = vec![0.25; 100];
        // all deviations equal: no dispersion in RB or RRMSE
        assert_eq!(rb_stderr(&devs, 1.0), 0.0);
        assert_eq!(rrmse_stderr(&devs, 1.0), 0.0);
        let sq = vec![0.1; 100];
        assert_eq!(eff_stderr(&sq, &sq), 0.0);
    }

    #[test]
    fn rb_stderr_formula() {
        // alternating +-s around zero: sd = s, se = s / (f0 sqrt(R))
        let devs: Vec<f64> = (0..1000).map(|i| if i % 2 == 0 { 0.2 } else { -0.2 }).collect();
        let sd = sample_std_dev(&devs);
        let expect = sd / (2.0 * 1000f64.sqrt());
        assert!((rb_stderr(&devs, 2.0) - expect).abs() < 1e-15);
    }
}
