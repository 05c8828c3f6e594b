//! Adaptive Gauss–Kronrod quadrature.
//!
//! A 7/15-point Kronrod pair is applied recursively; a panel is accepted when
//! the embedded Gauss/Kronrod discrepancy falls below the panel's share of
//! the absolute tolerance. All integrands in this crate are smooth, so the
//! recursion stays shallow.

/// Kronrod abscissae for the 15-point rule on [-1, 1] (positive half).
const XGK: [f64; 8] = [
    0.991_455_371_120_813,
    0.949_107_912_342_759,
    0.864_864_423_359_769,
    0.741_531_185_599_394,
    0.586_087_235_467_691,
    0.405_845_151_377_397,
    0.207_784_955_007_898,
    0.0,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529,
    0.063_092_092_629_979,
    0.104_790_010_322_250,
    0.140_653_259_715_525,
    0.169_004_726_639_267,
    0.190_350_578_064_785,
    0.204_432_940_075_298,
    0.209_482_141_084_728,
];

/// Weights of the embedded 7-point Gauss rule (nodes at XGK[1], XGK[3],
/// XGK[5] and the midpoint).
const WG: [f64; 4] = [
    0.129_484_966_168_870,
    0.279_705_391_489_277,
    0.381_830_050_505_119,
    0.417_959_183_673_469,
];

/// Single 15-point Kronrod panel over [a, b]. Returns the integral estimate
/// and the |K15 - G7| error estimate.
pub(crate) fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut result_kronrod = WGK[7] * fc;
    let mut result_gauss = WG[3] * fc;

    for j in 0..7 {
        let x = half * XGK[j];
        let pair = f(center - x) + f(center + x);
        result_kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            result_gauss += WG[j / 2] * pair;
        }
    }

    let integral = result_kronrod * half;
    let err = ((result_kronrod - result_gauss) * half).abs();
    (integral, err)
}

/// Adaptive integral of `f` over [a, b] to absolute tolerance `tol`.
pub(crate) fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let mut total = 0.0;
    refine(f, a, b, tol, 0, &mut |_, v| total += v);
    total
}

/// One accepted panel: its right endpoint and its integral contribution.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Segment {
    pub right: f64,
    pub integral: f64,
}

/// Adaptive integral that also reports the accepted panels left to right,
/// for callers that cache a cumulative table over the refinement grid.
pub(crate) fn integrate_segments<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
) -> (f64, Vec<Segment>) {
    let mut segments = Vec::new();
    let mut total = 0.0;
    refine(f, a, b, tol, 0, &mut |right, v| {
        total += v;
        segments.push(Segment { right, integral: v });
    });
    (total, segments)
}

const MAX_DEPTH: u32 = 52;

fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    depth: u32,
    accept: &mut impl FnMut(f64, f64),
) {
    let (value, err) = kronrod15(f, a, b);
    if err <= tol || depth >= MAX_DEPTH {
        accept(b, value);
        return;
    }
    let mid = 0.5 * (a + b);
    refine(f, a, mid, 0.5 * tol, depth + 1, accept);
    refine(f, mid, b, 0.5 * tol, depth + 1, accept);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = integrate(&|x: f64| x * x, 0.0, 1.0, 1e-12);
        assert!((v - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn oscillatory_integral() {
        let v = integrate(&f64::sin, 0.0, std::f64::consts::PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn segments_accumulate_to_total() {
        let (total, segs) = integrate_segments(&|x: f64| (-x).exp(), 0.0, 30.0, 1e-13);
        let sum: f64 = segs.iter().map(|s| s.integral).sum();
        assert!((total - sum).abs() < 1e-15);
        assert!((total - 1.0).abs() < 1e-12);
        assert_eq!(segs.last().unwrap().right, 30.0);
    }
}
