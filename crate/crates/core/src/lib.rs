//! Simulation and numerics for branching Brownian motion and its reflected
//! counterpart.
//!
//! The crate is split into four layers:
//!
//! * [`stochastic`]: seeded random streams, Gaussian/exponential sampling,
//!   the reflected heat kernel, Brownian-bridge crossing corrections and
//!   quadrature.
//! * [`sim`]: exact event-driven branching simulation with full genealogy,
//!   reflection, extremes, clusters and barrier counts.
//! * [`analytics`]: affine-boundary survival series for reflected Brownian
//!   motion, many-to-one expectations, quantiles, frontier regression and
//!   dependence statistics.
//! * [`pde`]: semi-implicit finite differences for the F-KPP equation on the
//!   line and on the half-line with a Neumann wall.

// negated comparisons are how NaN arguments get rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod error;
pub mod pde;
pub mod sim;
pub mod stochastic;

pub use error::{Error, Result};

/// Centering coefficient of the logarithmic correction, `3 / (2 sqrt 2)`.
pub const LOG_CORRECTION: f64 = 3.0 / (2.0 * std::f64::consts::SQRT_2);

/// Asymptotic front speed of binary branching Brownian motion at rate 1.
pub const FRONT_SPEED: f64 = std::f64::consts::SQRT_2;

/// Deterministic centering `sqrt(2) t - 3/(2 sqrt 2) log t` of the maximal displacement.
pub fn frontier_centering(t: f64) -> f64 {
    FRONT_SPEED * t - LOG_CORRECTION * t.ln()
}
