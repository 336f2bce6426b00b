use std::f64::consts::{PI, SQRT_2};

use crate::error::{domain, Result};

/// Straight boundary `intercept + slope * s` in the time variable `s`.
///
/// [`AffineBoundary::new`] enforces `intercept > 0` and `slope > 0`, the
/// regime of the reflected first-passage series. [`AffineBoundary::line`]
/// accepts any finite line and is what the bridge correction uses on
/// linearized curved barriers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineBoundary {
    pub intercept: f64,
    pub slope: f64,
}

impl AffineBoundary {
    pub fn new(intercept: f64, slope: f64) -> Result<Self> {
        if !(intercept > 0.0 && intercept.is_finite()) {
            return domain(format!("boundary intercept must be > 0, got {intercept}"));
        }
        if !(slope > 0.0 && slope.is_finite()) {
            return domain(format!("boundary slope must be > 0, got {slope}"));
        }
        Ok(Self { intercept, slope })
    }

    /// Unrestricted straight line.
    pub fn line(intercept: f64, slope: f64) -> Self {
        Self { intercept, slope }
    }

    #[inline]
    pub fn at(&self, s: f64) -> f64 {
        self.intercept + self.slope * s
    }
}

/// Standard normal cumulative distribution function.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / SQRT_2)
}

/// Exact upper tail `P(N(0,1) >= z)`.
pub fn gaussian_tail(z: f64) -> f64 {
    0.5 * libm::erfc(z / SQRT_2)
}

/// Transition density of reflected Brownian motion, `p^R(s, x; t, y)`.
///
/// Sum of the free Gaussian kernel and its mirror image through the origin.
pub fn reflected_density(s: f64, x: f64, t: f64, y: f64) -> Result<f64> {
    if !(t > s) {
        return domain(format!("need t > s, got s = {s}, t = {t}"));
    }
    if !(x >= 0.0) || !(y >= 0.0) {
        return domain(format!("positions must be >= 0, got x = {x}, y = {y}"));
    }
    Ok(reflected_kernel(t - s, x, y))
}

/// Unchecked kernel for inner loops; `tau > 0`.
#[inline]
pub(crate) fn reflected_kernel(tau: f64, x: f64, y: f64) -> f64 {
    let two_tau = 2.0 * tau;
    let direct = (-(y - x) * (y - x) / two_tau).exp();
    let image = (-(y + x) * (y + x) / two_tau).exp();
    (direct + image) / (PI * two_tau).sqrt()
}

/// Probability that a Brownian bridge from `x0` to `x1` over a step of
/// length `dt` touches the line `boundary` (levels measured from the start
/// of the step).
///
/// With `d0`, `d1` the gaps between the endpoints and the boundary, this is
/// `exp(-2 d0 d1 / dt)`. An endpoint on or above the boundary gives 1.
pub fn bridge_crossing_prob(x0: f64, x1: f64, dt: f64, boundary: AffineBoundary) -> Result<f64> {
    if !(dt > 0.0) {
        return domain(format!("step length must be > 0, got {dt}"));
    }
    let d0 = boundary.at(0.0) - x0;
    let d1 = boundary.at(dt) - x1;
    Ok(bridge_crossing_gaps(d0, d1, dt))
}

/// Crossing probability from the endpoint gaps directly; `dt > 0`.
#[inline]
pub(crate) fn bridge_crossing_gaps(d0: f64, d1: f64, dt: f64) -> f64 {
    if d0 <= 0.0 || d1 <= 0.0 {
        return 1.0;
    }
    (-2.0 * d0 * d1 / dt).exp()
}

/// Mills-ratio bound `exp(-z^2/2) / (z sqrt(2 pi))` on the standard normal tail.
pub fn gaussian_tail_bound(z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return domain(format!("tail bound needs z > 0, got {z}"));
    }
    Ok((-0.5 * z * z).exp() / (z * (2.0 * PI).sqrt()))
}
