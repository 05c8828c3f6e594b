//! Small numeric helpers shared across the crate.

/// Neumaier-compensated sum. Order-sensitive like any float sum, but the
/// compensation keeps reductions stable regardless of term magnitudes, so a
/// fixed iteration order yields a fixed result.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

pub fn mean(values: &[f64]) -> f64 {
    compensated_sum(values.iter().copied()) / values.len() as f64
}

/// Sample standard deviation (divisor n - 1).
pub fn sample_std_dev(values: &[f64]) -> f64 {
    let n = values.len();
    assert!(n >= 2, "standard deviation needs at least two values");
    let m = mean(values);
    let ss = compensated_sum(values.iter().map(|v| (v - m) * (v - m)));
    (ss / (n - 1) as f64).sqrt()
}
