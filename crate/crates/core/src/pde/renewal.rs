use super::solver::{FieldState, Variant};
use crate::error::{domain, Result};
use crate::stochastic::{normal_cdf, reflected_kernel};

/// Largest mismatch between the stored half-line field and the renewal form
///
/// `u(t,x,y) = e^{-t} ∫ p^R(0,y;t,z) H(x-z) dz
///           + ∫_0^t e^{-s} ∫ p^R(0,y;s,z) u(t-s,x,z)^2 dz ds`
///
/// at the sample points `(t, x, y)`. The history must be stored at a uniform
/// time stride starting from `t = 0`, and every `x` must be its `x_shift`.
/// The free term is exact; the time integral uses Simpson's rule over the
/// stored states and the space integral the trapezoid rule over the nodes.
pub fn renewal_residual(history: &[FieldState], points: &[(f64, f64, f64)]) -> Result<f64> {
    if history.len() < 2 {
        return domain("renewal residual needs at least two stored states");
    }
    let x_shift = match history[0].variant {
        Variant::HalfLine { x_shift } => x_shift,
        Variant::Line => return domain("renewal residual needs a half-line history"),
    };
    let stride = history[1].time - history[0].time;
    if history[0].time != 0.0 || !(stride > 0.0) {
        return domain("history must start at t = 0 with a positive stride");
    }
    for (k, s) in history.iter().enumerate() {
        if (s.time - k as f64 * stride).abs() > 1e-9 {
            return domain(format!("history is not uniformly stored at state {k}"));
        }
    }
    let t_max = history.last().unwrap().time;
    let dx = history[0].dx;

    let mut worst: f64 = 0.0;
    for &(t, x, y) in points {
        if (x - x_shift).abs() > 1e-9 {
            return domain(format!("history has x = {x_shift}, sample asks for x = {x}"));
        }
        let y_max = history[0].coord(history[0].values.len() - 1);
        if !(0.0..=t_max + 1e-9).contains(&t) || !(0.0..=y_max).contains(&y) {
            return domain(format!("sample ({t}, {x}, {y}) outside stored history"));
        }
        let kt = (t / stride).round() as usize;
        if (kt as f64 * stride - t).abs() > 1e-9 {
            return domain(format!("sample time {t} is not a stored time"));
        }
        let pde = history[kt].value_at(y);
        let rhs = if kt == 0 {
            if y <= x { 1.0 } else { 0.0 }
        } else {
            free_term(t, x, y) + nonlinear_term(history, kt, stride, y, dx)
        };
        worst = worst.max((pde - rhs).abs());
    }
    Ok(worst)
}

/// `e^{-t} P_y(|B_t| <= x)` for reflected Brownian motion.
fn free_term(t: f64, x: f64, y: f64) -> f64 {
    let sd = t.sqrt();
    let mass = normal_cdf((x - y) / sd) - normal_cdf(-y / sd) + normal_cdf((x + y) / sd) - normal_cdf(y / sd);
    (-t).exp() * mass
}

fn nonlinear_term(history: &[FieldState], kt: usize, stride: f64, y: f64, dx: f64) -> f64 {
    let g: Vec<f64> = (0..=kt)
        .map(|k| {
            let u = &history[kt - k];
            if k == 0 {
                let v = u.value_at(y);
                return v * v;
            }
            let s = k as f64 * stride;
            let n = u.values.len();
            let mut acc = 0.0;
            for (j, v) in u.values.iter().enumerate() {
                let w = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
                acc += w * reflected_kernel(s, y, u.coord(j)) * v * v;
            }
            (-s).exp() * acc * dx
        })
        .collect();
    time_quadrature(&g, stride)
}

/// Composite Simpson, with a 3/8 panel at the end for an odd number of
/// intervals.
fn time_quadrature(g: &[f64], h: f64) -> f64 {
    let m = g.len() - 1;
    match m {
        0 => 0.0,
        1 => 0.5 * h * (g[0] + g[1]),
        _ => {
            let simpson_end = if m.is_multiple_of(2) { m } else { m - 3 };
            let mut acc = 0.0;
            for i in (0..simpson_end).step_by(2) {
                acc += h / 3.0 * (g[i] + 4.0 * g[i + 1] + g[i + 2]);
            }
            if simpson_end < m {
                let i = simpson_end;
                acc += 3.0 * h / 8.0 * (g[i] + 3.0 * g[i + 1] + 3.0 * g[i + 2] + g[i + 3]);
            }
            acc
        }
    }
}
