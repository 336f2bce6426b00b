use crate::analytics::Estimate;
use crate::error::{domain, Result};
use crate::stochastic::{bridge_crossing_gaps, AffineBoundary, RngStream};

/// Monte Carlo estimate of `P(τ_{a,b} >= t, |B_t| ∈ [x_lo, x_hi])` for a
/// single reflected Brownian motion started at 0.
///
/// Paths are sampled on a grid of step `dt`; instead of killing a path on a
/// sampled crossing, each step multiplies the path weight by the bridge
/// survival probability against `+(a + b s)` and `-(a + b s)`, so the only
/// discretization error left is the independence of the two walls within a
/// step.
pub fn reflected_survival_mc(
    boundary: AffineBoundary,
    t: f64,
    band: (f64, f64),
    paths: usize,
    dt: f64,
    stream: &mut RngStream,
) -> Result<Estimate> {
    if !(t > 0.0) || !(dt > 0.0) || paths < 2 {
        return domain(format!("need t > 0, dt > 0 and >= 2 paths (t={t}, dt={dt}, paths={paths})"));
    }
    if !(band.0 <= band.1) {
        return domain(format!("inverted band [{}, {}]", band.0, band.1));
    }
    let steps = (t / dt).round().max(1.0) as usize;
    let h = t / steps as f64;
    let sh = h.sqrt();
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..paths {
        let mut x = 0.0;
        let mut weight = 1.0;
        let mut level0 = boundary.at(0.0);
        for k in 1..=steps {
            let x1 = x + sh * stream.standard_normal();
            let level1 = boundary.at(k as f64 * h);
            let up = gaps_or_zero(level0 - x, level1 - x1, h);
            let down = gaps_or_zero(level0 + x, level1 + x1, h);
            weight *= (1.0 - up) * (1.0 - down);
            x = x1;
            level0 = level1;
            if weight == 0.0 {
                break;
            }
        }
        let z = x.abs();
        let w = if z >= band.0 && z <= band.1 { weight } else { 0.0 };
        sum += w;
        sum_sq += w * w;
    }
    let n = paths as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
    Ok(Estimate {
        value: mean,
        std_error: (var / n).sqrt(),
        n: paths,
    })
}

#[inline]
fn gaps_or_zero(d0: f64, d1: f64, h: f64) -> f64 {
    if d0 > 0.0 && d1 > 0.0 && 2.0 * d0 * d1 > 40.0 * h {
        0.0
    } else {
        bridge_crossing_gaps(d0, d1, h)
    }
}
