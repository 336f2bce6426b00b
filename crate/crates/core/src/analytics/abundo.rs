use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::stochastic::{adaptive_simpson, AffineBoundary, DEFAULT_QUAD_TOL};
use crate::{FRONT_SPEED, LOG_CORRECTION};

/// Default symmetric truncation `|n| <= 12`; terms decay like `e^{-c n(n-1)}`.
pub const DEFAULT_SERIES_TERMS: usize = 12;

/// A truncated series with a bound on what the truncation dropped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    /// Magnitude of the first omitted pair of terms.
    pub truncation_bound: f64,
}

fn check_boundary(bnd: &AffineBoundary) -> Result<()> {
    AffineBoundary::new(bnd.intercept, bnd.slope).map(|_| ())
}

/// Alternating image sum `Σ_{|n|<=N} (-1)^n exp(-c n^2) cosh(k n)` and the
/// size of the first omitted pair.
fn image_sum(c: f64, k: f64, n_max: usize) -> (f64, f64) {
    let pair = |n: f64| (-c * n * n + k * n).exp() + (-c * n * n - k * n).exp();
    let mut sum = 1.0;
    for n in 1..=n_max {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * pair(n as f64);
    }
    (sum, pair((n_max + 1) as f64))
}

/// Density of `|B_t|` on the event that the reflected path has stayed below
/// `a + b s` up to time `t`:
///
/// `sqrt(2/(π t)) e^{-x²/2t} Σ_n (-1)^n exp[-2a(b + a/t) n²] cosh(2 a x n / t)`
pub fn abundo_density(bnd: AffineBoundary, t: f64, x: f64, n_max: usize) -> Result<SeriesValue> {
    check_boundary(&bnd)?;
    if !(t > 0.0) {
        return domain(format!("time must be > 0, got {t}"));
    }
    if n_max < 1 {
        return domain("series truncation order must be >= 1");
    }
    let top = bnd.at(t);
    if !(x >= 0.0 && x < top) {
        return domain(format!("position {x} outside [0, {top})"));
    }
    let (a, b) = (bnd.intercept, bnd.slope);
    let c = 2.0 * a * (b + a / t);
    let k = 2.0 * a * x / t;
    // x < a + b t means k < c, so the terms decay and the sum converges
    debug_assert!(k < c);
    let (sum, omitted) = image_sum(c, k, n_max);
    let prefactor = (2.0 / (PI * t)).sqrt() * (-x * x / (2.0 * t)).exp();
    Ok(SeriesValue {
        value: prefactor * sum,
        truncation_bound: prefactor * omitted,
    })
}

/// `ln P(τ_{a,b} >= t, |B_t| ∈ [x_lo, x_hi])`, with the Gaussian factor at
/// `x_lo` taken out of the integral so that tiny probabilities keep their
/// relative accuracy.
fn log_band_probability(bnd: AffineBoundary, t: f64, x_lo: f64, x_hi: f64) -> Result<f64> {
    check_boundary(&bnd)?;
    if !(t > 0.0) {
        return domain(format!("time must be > 0, got {t}"));
    }
    let top = bnd.at(t);
    if !(x_lo >= 0.0 && x_lo <= x_hi && x_hi <= top) {
        return domain(format!("band [{x_lo}, {x_hi}] must satisfy 0 <= lo <= hi <= {top}"));
    }
    if x_lo == x_hi {
        return Ok(f64::NEG_INFINITY);
    }
    let (a, b) = (bnd.intercept, bnd.slope);
    let c = 2.0 * a * (b + a / t);
    let scaled = |x: f64| {
        let k = 2.0 * a * x / t;
        let (sum, _) = image_sum(c, k, DEFAULT_SERIES_TERMS);
        (-(x * x - x_lo * x_lo) / (2.0 * t)).exp() * sum
    };
    let integral = adaptive_simpson(scaled, x_lo, x_hi, DEFAULT_QUAD_TOL);
    if integral <= 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(0.5 * (2.0 / (PI * t)).ln() - x_lo * x_lo / (2.0 * t) + integral.ln())
}

/// `P(τ_{a,b} >= t, |B_t| ∈ [x_lo, x_hi])` by quadrature of [`abundo_density`].
pub fn abundo_band_probability(bnd: AffineBoundary, t: f64, x_lo: f64, x_hi: f64) -> Result<f64> {
    if x_lo > x_hi {
        return domain(format!("inverted band [{x_lo}, {x_hi}]"));
    }
    Ok(log_band_probability(bnd, t, x_lo, x_hi)?.exp().min(1.0))
}

/// Many-to-one expectation of the reflected straight-barrier count:
/// `E H^R(y, t) = e^t P(τ_{1,β} >= t, |B_t| ∈ [β t - 1, β t])`.
///
/// Evaluated in log space. Outside `t >= 1`, `0 <= y <= sqrt t` a warning is
/// logged and the value is still returned.
pub fn expectation_h_r(y: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) || !(y >= 0.0) {
        return domain(format!("need t > 0 and y >= 0, got t = {t}, y = {y}"));
    }
    if t < 1.0 || y > t.sqrt() {
        log::warn!("expectation_h_r outside t >= 1, y <= sqrt(t): t = {t}, y = {y}");
    }
    let beta = FRONT_SPEED - LOG_CORRECTION * t.ln() / t + y / t;
    let bnd = AffineBoundary::new(1.0, beta)?;
    let lo = (beta * t - 1.0).max(0.0);
    let log_p = log_band_probability(bnd, t, lo, beta * t)?;
    Ok((t + log_p).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bnd(a: f64, b: f64) -> AffineBoundary {
        AffineBoundary::new(a, b).unwrap()
    }

    #[test]
    fn far_boundary_recovers_the_free_density() {
        let v = abundo_density(bnd(50.0, 1.0), 1.0, 0.0, DEFAULT_SERIES_TERMS).unwrap();
        assert!((v.value - (2.0 / PI).sqrt()).abs() < 1e-15);
        assert!((v.value - 0.7978846).abs() < 1e-7);
        assert_eq!(v.truncation_bound, 0.0);
    }

    #[test]
    fn density_vanishes_at_the_boundary() {
        let b = bnd(1.0, 1.0);
        let top = b.at(1.0);
        let mut last = f64::INFINITY;
        for eps in [1e-2, 1e-4, 1e-6, 1e-8] {
            let v = abundo_density(b, 1.0, top - eps, DEFAULT_SERIES_TERMS).unwrap().value;
            assert!(v.abs() < last);
            last = v.abs();
        }
        assert!(last < 1e-6);
        assert!(abundo_density(b, 1.0, top, 12).is_err());
        assert!(abundo_density(b, 1.0, -0.1, 12).is_err());
        assert!(abundo_density(b, 1.0, 0.5, 0).is_err());
        assert!(abundo_density(AffineBoundary::line(1.0, -1.0), 1.0, 0.5, 3).is_err());
    }

    #[test]
    fn density_is_nonnegative_and_below_the_envelope() {
        for &(a, b, t) in &[(1.0, 1.0, 1.0), (1.0, 1.2, 8.0), (0.5, 2.0, 0.3), (2.0, 0.1, 5.0)] {
            let bd = bnd(a, b);
            let top = bd.at(t);
            for k in 0..200 {
                let x = top * k as f64 / 200.0;
                let v = abundo_density(bd, t, x, DEFAULT_SERIES_TERMS).unwrap().value;
                let free = (2.0 / (PI * t)).sqrt() * (-x * x / (2.0 * t)).exp();
                let envelope = free * (1.0 + 2.0 * (-2.0 * a * (b + a / t)).exp());
                assert!(v >= -1e-15 && v <= envelope, "a={a} b={b} t={t} x={x}: {v}");
            }
        }
    }

    #[test]
    fn truncation_bound_shrinks_with_order() {
        let b = bnd(0.3, 0.2);
        let mut last = f64::INFINITY;
        for n in 1..8 {
            let v = abundo_density(b, 2.0, 0.4, n).unwrap();
            assert!(v.truncation_bound < last);
            last = v.truncation_bound;
        }
        let lo = abundo_density(b, 2.0, 0.4, 3).unwrap();
        let hi = abundo_density(b, 2.0, 0.4, 30).unwrap();
        assert!((lo.value - hi.value).abs() <= lo.truncation_bound);
    }

    #[test]
    fn band_examples() {
        let p = abundo_band_probability(bnd(50.0, 1.0), 1.0, 0.0, 51.0).unwrap();
        assert!((p - 1.0).abs() < 1e-6, "{p}");
        assert_eq!(abundo_band_probability(bnd(1.0, 1.0), 1.0, 0.5, 0.5).unwrap(), 0.0);
        assert!(abundo_band_probability(bnd(1.0, 1.0), 1.0, 0.6, 0.4).is_err());
        assert!(abundo_band_probability(bnd(1.0, 1.0), 1.0, 0.0, 2.5).is_err());

        let band = abundo_band_probability(bnd(1.0, 1.0), 1.0, 0.4, 0.6).unwrap();
        let mid = abundo_density(bnd(1.0, 1.0), 1.0, 0.5, 12).unwrap().value * 0.2;
        assert!((band / mid - 1.0).abs() < 0.02, "{band} vs {mid}");
    }

    #[test]
    fn band_matches_plain_quadrature_of_the_density() {
        let b = bnd(1.0, 1.0);
        let direct = adaptive_simpson(
            |x| abundo_density(b, 1.0, x, 12).unwrap().value,
            0.1,
            1.7,
            1e-12,
        );
        let p = abundo_band_probability(b, 1.0, 0.1, 1.7).unwrap();
        assert!((p - direct).abs() < 1e-10);
    }

    #[test]
    fn expectation_h_r_envelope() {
        let values: Vec<f64> = (0..=4)
            .map(|y| expectation_h_r(y as f64, 20.0).unwrap() * (2f64.sqrt() * y as f64).exp())
            .collect();
        let max = values.iter().cloned().fold(f64::MIN, f64::max);
        let min = values.iter().cloned().fold(f64::MAX, f64::min);
        assert!(min > 0.0 && max / min <= 5.0, "{values:?}");
        let mut last = f64::INFINITY;
        for k in 0..=40 {
            let e = expectation_h_r(0.1 * k as f64, 20.0).unwrap();
            assert!(e < last);
            last = e;
        }
    }
}
