use crate::error::{domain, Error, Result};
use crate::FRONT_SPEED;

/// Distance kept between the front trajectory and the truncation edges.
pub const DOMAIN_MARGIN: f64 = 20.0;

/// Uniform grid and time step.
///
/// The stability contract of the implicit-diffusion / explicit-reaction
/// stepper is `0 < dt <= 1`: the reaction update `w + dt w (1 - w)` then maps
/// `[0, 1]` monotonically into itself, and the implicit diffusion solve is an
/// M-matrix, so the range and the ordering of solutions are preserved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub lo: f64,
    pub hi: f64,
    pub dx: f64,
    pub dt: f64,
    pub t_final: f64,
}

impl Grid1D {
    /// `hi` is snapped down to the last node `lo + k dx`.
    pub fn new(lo: f64, hi: f64, dx: f64, dt: f64, t_final: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return domain(format!("grid needs finite lo < hi, got [{lo}, {hi}]"));
        }
        if !(dx > 0.0) || (hi - lo) / dx < 2.0 {
            return domain(format!("grid spacing {dx} too large for [{lo}, {hi}]"));
        }
        if !(t_final >= 0.0) || !t_final.is_finite() {
            return domain(format!("final time must be >= 0, got {t_final}"));
        }
        if !(dt > 0.0 && dt <= 1.0) {
            return Err(Error::Stability(format!("time step must satisfy 0 < dt <= 1, got {dt}")));
        }
        let steps = t_final / dt;
        if (steps - steps.round()).abs() > 1e-9 * steps.max(1.0) {
            return domain(format!("final time {t_final} is not a multiple of dt = {dt}"));
        }
        let cells = ((hi - lo) / dx + 1e-9).floor();
        Ok(Self {
            lo,
            hi: lo + cells * dx,
            dx,
            dt,
            t_final,
        })
    }

    /// `[-20, sqrt(2) T + 20]`.
    pub fn for_line(t_final: f64, dx: f64, dt: f64) -> Result<Self> {
        Self::new(-DOMAIN_MARGIN, FRONT_SPEED * t_final + DOMAIN_MARGIN, dx, dt, t_final)
    }

    /// `[0, sqrt(2) T + 20]`.
    pub fn for_halfline(t_final: f64, dx: f64, dt: f64) -> Result<Self> {
        Self::new(0.0, FRONT_SPEED * t_final + DOMAIN_MARGIN, dx, dt, t_final)
    }

    pub fn nodes(&self) -> usize {
        ((self.hi - self.lo) / self.dx).round() as usize + 1
    }

    pub fn steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }

    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.dx
    }

    /// Copy with a different final time.
    pub fn with_final_time(&self, t_final: f64) -> Result<Self> {
        Self::new(self.lo, self.hi, self.dx, self.dt, t_final)
    }
}
