use super::solver::FieldState;
use crate::error::{domain, Result};

/// First crossing of `level` by the piecewise-linear interpolant of
/// `(coords, values)`. Works for nondecreasing and nonincreasing profiles.
pub fn front_in(coords: &[f64], values: &[f64], level: f64) -> Result<f64> {
    if coords.len() != values.len() || coords.len() < 2 {
        return domain("front needs at least two matching coordinates and values");
    }
    if !(level > 0.0 && level < 1.0) {
        return domain(format!("front level must lie in (0, 1), got {level}"));
    }
    for i in 0..values.len() - 1 {
        let (a, b) = (values[i] - level, values[i + 1] - level);
        if a == 0.0 {
            return Ok(coords[i]);
        }
        if a * b < 0.0 || b == 0.0 {
            let frac = a / (a - b);
            return Ok(coords[i] + frac * (coords[i + 1] - coords[i]));
        }
    }
    domain(format!("level {level} is not bracketed by the profile"))
}

/// Position where `u(t, ·)` crosses `level`.
pub fn front_position(field: &FieldState, level: f64) -> Result<f64> {
    front_in(&field.coords(), &field.values, level)
}

/// `(t, front)` for every state of a history.
pub fn front_trajectory(history: &[FieldState], level: f64) -> Result<Vec<(f64, f64)>> {
    history
        .iter()
        .map(|s| front_position(s, level).map(|f| (s.time, f)))
        .collect()
}
