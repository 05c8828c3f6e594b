//! Cumulative distribution by cached quadrature.
//!
//! For distributions whose CDF has no closed form (hazard-rate, general
//! polynomial), the body [0, x_tail] is integrated once with the adaptive
//! Kronrod rule and the accepted panels are kept as a cumulative table.
//! A later CDF evaluation re-integrates only the partial panel containing
//! the query point, so it stays at full quadrature accuracy without any
//! interpolation error. Beyond `x_tail` the caller supplies an analytic
//! upper-tail series, which also makes far-tail quantiles cheap.

use crate::quad::{integrate_segments, kronrod15};

type RealFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

pub(crate) struct CdfTable {
    pdf: RealFn,
    /// Upper tail mass 1 - F(x), valid for x >= x_tail.
    tail: RealFn,
    xs: Vec<f64>,
    cums: Vec<f64>,
    x_tail: f64,
}

impl std::fmt::Debug for CdfTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CdfTable")
            .field("panels", &(self.xs.len() - 1))
            .field("x_tail", &self.x_tail)
            .field("body_mass", &self.body_mass())
            .finish()
    }
}

const BUILD_TOL: f64 = 1e-13;
const CDF_RESIDUAL_TOL: f64 = 1e-13;
const X_REL_TOL: f64 = 1e-10;
const MAX_REFINE_ITERS: u32 = 200;

impl CdfTable {
    pub fn build(pdf: RealFn, tail: RealFn, x_tail: f64) -> Self {
        let (_, segments) = integrate_segments(&pdf, 0.0, x_tail, BUILD_TOL);
        let mut xs = Vec::with_capacity(segments.len() + 1);
        let mut cums = Vec::with_capacity(segments.len() + 1);
        xs.push(0.0);
        cums.push(0.0);
        let mut acc = 0.0;
        let mut comp = 0.0;
        for seg in &segments {
            // running Neumaier sum of panel integrals
            let t = acc + seg.integral;
            if acc.abs() >= seg.integral.abs() {
                comp += (acc - t) + seg.integral;
            } else {
                comp += (seg.integral - t) + acc;
            }
            acc = t;
            xs.push(seg.right);
            cums.push(acc + comp);
        }
        CdfTable {
            pdf,
            tail,
            xs,
            cums,
            x_tail,
        }
    }

    #[cfg(test)]
    pub fn x_tail(&self) -> f64 {
        self.x_tail
    }

    /// Body mass covered by the table; 1 - cdf(x_tail) up to quadrature error.
    pub fn body_mass(&self) -> f64 {
        *self.cums.last().unwrap()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= self.x_tail {
            return (1.0 - (self.tail)(x)).clamp(0.0, 1.0);
        }
        // last breakpoint <= x
        let i = self.xs.partition_point(|&b| b <= x) - 1;
        let (partial, _) = kronrod15(&self.pdf, self.xs[i], x);
        (self.cums[i] + partial).clamp(0.0, 1.0)
    }

    /// Inverse CDF by bracketed Newton/bisection on the cached table.
    pub fn quantile(&self, u: f64) -> f64 {
        assert!((0.0..1.0).contains(&u), "quantile needs u in [0, 1)");
        if u == 0.0 {
            return 0.0;
        }
        let body = self.body_mass();
        if u >= body {
            return self.tail_quantile(1.0 - u);
        }
        let i = self.cums.partition_point(|&c| c <= u) - 1;
        let (mut lo, mut hi) = (self.xs[i], self.xs[i + 1]);
        let base = self.cums[i];
        let mut x = 0.5 * (lo + hi);
        for _ in 0..MAX_REFINE_ITERS {
            let (partial, _) = kronrod15(&self.pdf, self.xs[i], x);
            let residual = base + partial - u;
            if residual > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            if residual.abs() <= CDF_RESIDUAL_TOL || hi - lo <= X_REL_TOL * (1.0 + x.abs()) {
                break;
            }
            let slope = (self.pdf)(x);
            let mut next = if slope > 0.0 { x - residual / slope } else { f64::NAN };
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            x = next;
        }
        x
    }

    /// Solve tail(x) = mass for x >= x_tail. `mass` is in (0, tail(x_tail)].
    fn tail_quantile(&self, mass: f64) -> f64 {
        let mut lo = self.x_tail;
        let mut hi = (2.0 * self.x_tail).max(1.0);
        while (self.tail)(hi) > mass {
            lo = hi;
            hi *= 2.0;
            if hi > 1e300 {
                return hi;
            }
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..MAX_REFINE_ITERS {
            let g = (self.tail)(x) - mass;
            if g > 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            if g.abs() <= 1e-12 * mass || hi - lo <= X_REL_TOL * (1.0 + x.abs()) {
                break;
            }
            let slope = (self.pdf)(x);
            let mut next = if slope > 0.0 { x + g / slope } else { f64::NAN };
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            x = next;
        }
        x
    }
}

/// Convenience check used by unit tests: table mass plus analytic tail
/// should reconstruct unit total mass.
#[cfg(test)]
pub(crate) fn total_mass_defect(table: &CdfTable) -> f64 {
    let tail_at_split = 1.0 - table.cdf(table.x_tail());
    (table.body_mass() + tail_at_split - 1.0).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Standard exponential: body on [0, 3], analytic tail e^{-x}.
    fn exp_table() -> CdfTable {
        CdfTable::build(
            Box::new(|x: f64| (-x).exp()),
            Box::new(|x: f64| (-x).exp()),
            3.0,
        )
    }

    #[test]
    fn cdf_matches_closed_form() {
        let t = exp_table();
        for &x in &[0.0f64, 0.1, 0.5, 1.0, 2.5, 2.999, 3.0, 5.0, 40.0] {
            let expect = 1.0 - (-x).exp();
            assert!((t.cdf(x) - expect).abs() < 1e-12, "x = {x}");
        }
        assert!(total_mass_defect(&t) < 1e-12);
    }

    #[test]
    fn quantile_round_trips() {
        let t = exp_table();
        for &u in &[0.0, 1e-6, 0.25, 0.5, 0.9, 0.950_212, 0.999, 1.0 - 1e-12] {
            let x = t.quantile(u);
            let expect = -(1.0 - u).ln();
            assert!(
                (x - expect).abs() < 1e-8 * (1.0 + expect.abs()),
                "u = {u}: {x} vs {expect}"
            );
        }
    }
}
