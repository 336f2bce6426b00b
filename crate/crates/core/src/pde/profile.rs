use super::front::front_in;
use super::grid::{Grid1D, DOMAIN_MARGIN};
use super::solver::{interpolate, FkppSolver};
use crate::error::{domain, Result};

/// `u^R(t, x, y)` sampled on `times × y_values × x_values`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileTable {
    pub times: Vec<f64>,
    pub y_values: Vec<f64>,
    pub x_values: Vec<f64>,
    /// `values[ti][yi][xi]`
    pub values: Vec<Vec<Vec<f64>>>,
}

impl ProfileTable {
    /// The profile `x ↦ u^R(t, x, y)`.
    pub fn profile(&self, ti: usize, yi: usize) -> &[f64] {
        &self.values[ti][yi]
    }
}

/// Runs one half-line solve per `x` in `x_values` on `grid` and records the
/// field at the requested times and starting points.
///
/// A solve whose jump at `x` sits closer than [`DOMAIN_MARGIN`] to the far
/// edge runs on a grid extended to `x + DOMAIN_MARGIN`.
pub fn sample_halfline_family(grid: &Grid1D, x_values: &[f64], times: &[f64], y_values: &[f64]) -> Result<ProfileTable> {
    if x_values.len() < 2 || times.is_empty() || y_values.is_empty() {
        return domain("profile family needs two x values, a time and a starting point");
    }
    if times.windows(2).any(|w| w[1] <= w[0]) || times.iter().any(|t| *t < 0.0 || *t > grid.t_final + 1e-9) {
        return domain(format!("times must increase within [0, {}]", grid.t_final));
    }
    if x_values.windows(2).any(|w| w[1] <= w[0]) {
        return domain("x values must increase");
    }
    if y_values.iter().any(|y| *y < grid.lo || *y > grid.hi) {
        return domain("starting points must lie on the grid");
    }
    let mut values = vec![vec![vec![0.0; x_values.len()]; y_values.len()]; times.len()];
    for (xi, &x) in x_values.iter().enumerate() {
        let g = if grid.hi < x + DOMAIN_MARGIN {
            Grid1D::new(grid.lo, x + DOMAIN_MARGIN, grid.dx, grid.dt, grid.t_final)?
        } else {
            *grid
        };
        let mut solver = FkppSolver::halfline(g, x)?;
        for (ti, &t) in times.iter().enumerate() {
            solver.advance_to(t)?;
            for (yi, &y) in y_values.iter().enumerate() {
                values[ti][yi][xi] = solver.value_at(y);
            }
        }
    }
    Ok(ProfileTable {
        times: times.to_vec(),
        y_values: y_values.to_vec(),
        x_values: x_values.to_vec(),
        values,
    })
}

/// Sup distance between centred profiles at one time. `distance` is `None`
/// when either profile has no `delta`-front inside the sampled range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileDistance {
    pub t: f64,
    pub y_ref: f64,
    pub y: f64,
    pub distance: Option<f64>,
}

/// Sup norm of `x ↦ ua(x + qa) - ub(x + qb)` over the overlap of the two
/// shifted ranges. Both profiles are piecewise linear, so the sup is attained
/// at a node of one of them.
pub fn profile_distance(xs: &[f64], ua: &[f64], qa: f64, ub: &[f64], qb: f64) -> f64 {
    let lo = xs[0];
    let dx = (xs[xs.len() - 1] - lo) / (xs.len() - 1) as f64;
    let (from, to) = ((lo - qa).max(lo - qb), (xs[xs.len() - 1] - qa).min(xs[xs.len() - 1] - qb));
    let mut sup: f64 = 0.0;
    for (q, other_q, own, other) in [(qa, qb, ua, ub), (qb, qa, ub, ua)] {
        for (i, &x) in xs.iter().enumerate() {
            let z = x - q;
            if z < from - 1e-12 || z > to + 1e-12 {
                continue;
            }
            let d = own[i] - interpolate(lo, dx, other, z + other_q);
            sup = sup.max(d.abs());
        }
    }
    sup
}

/// For each time, centres every profile at its own `delta`-front and reports
/// its sup distance to the profile of the first starting point.
///
/// `x_values` must be uniformly spaced.
pub fn profile_convergence(table: &ProfileTable, delta: f64) -> Result<Vec<ProfileDistance>> {
    if !(delta > 0.0 && delta < 1.0) {
        return domain(format!("quantile level must lie in (0, 1), got {delta}"));
    }
    let xs = &table.x_values;
    let dx = xs[1] - xs[0];
    if xs.windows(2).any(|w| ((w[1] - w[0]) - dx).abs() > 1e-9 * dx.max(1.0)) {
        return domain("profile x values must be uniformly spaced");
    }
    let mut out = Vec::new();
    for (ti, &t) in table.times.iter().enumerate() {
        let y_ref = table.y_values[0];
        let ref_profile = table.profile(ti, 0);
        let q_ref = front_in(xs, ref_profile, delta).ok();
        for (yi, &y) in table.y_values.iter().enumerate() {
            let profile = table.profile(ti, yi);
            let q = front_in(xs, profile, delta).ok();
            let distance = match (q_ref, q) {
                (Some(a), Some(b)) => Some(profile_distance(xs, ref_profile, a, profile, b)),
                _ => None,
            };
            out.push(ProfileDistance { t, y_ref, y, distance });
        }
    }
    Ok(out)
}
