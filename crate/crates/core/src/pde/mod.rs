//! Finite-difference solution of the F-KPP equation `u_t = u_xx / 2 + u² - u`
//! on the line (Heaviside data, Dirichlet truncation) and on the half-line
//! `y >= 0` with a Neumann wall at the origin.
//!
//! The stepper is implicit Euler for diffusion and explicit Euler for the
//! reaction. It works on the complement `w = 1 - u`: the state `u = 1` is
//! linearly unstable, and carrying it as `w = 0` keeps round-off from being
//! amplified by `e^t` ahead of the front.

mod front;
mod grid;
mod profile;
mod renewal;
mod solver;

pub use front::{front_in, front_position, front_trajectory};
pub use grid::{Grid1D, DOMAIN_MARGIN};
pub use profile::{profile_convergence, profile_distance, sample_halfline_family, ProfileDistance, ProfileTable};
pub use renewal::renewal_residual;
pub use solver::{solve_fkpp_halfline, solve_fkpp_line, FieldState, FkppSolver, InitialData, Variant};
