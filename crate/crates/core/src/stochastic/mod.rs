//! Randomness, closed-form densities and quadrature shared by the other layers.

mod density;
mod quadrature;
mod rng;

pub use density::{
    bridge_crossing_prob, gaussian_tail, gaussian_tail_bound, normal_cdf, reflected_density,
    AffineBoundary,
};
pub use quadrature::{adaptive_simpson, DEFAULT_QUAD_TOL};
pub use rng::{sample_exponential, sample_gaussian, RngStream};
pub(crate) use density::{bridge_crossing_gaps, reflected_kernel};
