use crate::error::{domain, Error, Result};
use crate::stochastic::{bridge_crossing_gaps, RngStream};
use crate::{FRONT_SPEED, LOG_CORRECTION};

/// Bridge crossings with `2 d0 d1 / dt` above this are treated as impossible
/// (probability below `e^-40`, under the resolution of a uniform draw).
const NEGLIGIBLE_EXPONENT: f64 = 40.0;

/// Straight and curved barriers for the `H` / `Γ` counts at horizon `t`
/// and offset `y`.
///
/// * slope `β = sqrt 2 - 3/(2 sqrt 2) log(t)/t + y/t`
/// * straight barrier `β s + 1`, box `[β t - 1, β t]`
/// * curved barrier `β s + L(s) + y + 1`, box `[β t - 1, β t + y]`
///
/// `L(s)` follows `c log(s+1)` on the first half and `c log(t-s+1)` on the
/// second half (`c = 3/(2 sqrt 2)`), joined on `[t/2-1, t/2+1]` by the cubic
/// Hermite interpolant of the two branches. With symmetric end data that
/// interpolant is a parabola with `L'' = -2c/t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierSpec {
    horizon: f64,
    offset: f64,
    slope: f64,
    blend_lo: f64,
    blend_hi: f64,
}

impl BarrierSpec {
    pub fn new(t: f64, y: f64) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return domain(format!("barrier horizon must be > 0, got {t}"));
        }
        if !(y >= 0.0) || !y.is_finite() {
            return domain(format!("barrier offset must be >= 0, got {y}"));
        }
        if t < 1.0 || y > t.sqrt() {
            log::warn!("barrier parameters (t = {t}, y = {y}) outside t >= 1, y <= sqrt(t)");
        }
        Ok(Self {
            horizon: t,
            offset: y,
            slope: FRONT_SPEED - LOG_CORRECTION * t.ln() / t + y / t,
            blend_lo: (0.5 * t - 1.0).max(0.0),
            blend_hi: (0.5 * t + 1.0).min(t),
        })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// `β`.
    pub fn slope(&self) -> f64 {
        self.slope
    }

    /// The curve `L(s)` on `[0, t]`.
    pub fn curve(&self, s: f64) -> f64 {
        if s <= self.blend_lo {
            LOG_CORRECTION * (s + 1.0).ln()
        } else if s >= self.blend_hi {
            LOG_CORRECTION * (self.horizon - s + 1.0).ln()
        } else {
            let (tau, h, f0, f1, m0, m1) = self.blend_data(s);
            let t2 = tau * tau;
            let t3 = t2 * tau;
            (2.0 * t3 - 3.0 * t2 + 1.0) * f0
                + (t3 - 2.0 * t2 + tau) * h * m0
                + (-2.0 * t3 + 3.0 * t2) * f1
                + (t3 - t2) * h * m1
        }
    }

    /// `L''(s)`, exact for each piece.
    pub fn curve_second_derivative(&self, s: f64) -> f64 {
        if s < self.blend_lo {
            -LOG_CORRECTION / (s + 1.0).powi(2)
        } else if s > self.blend_hi {
            -LOG_CORRECTION / (self.horizon - s + 1.0).powi(2)
        } else {
            let (tau, h, f0, f1, m0, m1) = self.blend_data(s);
            ((12.0 * tau - 6.0) * f0
                + (6.0 * tau - 4.0) * h * m0
                + (6.0 - 12.0 * tau) * f1
                + (6.0 * tau - 2.0) * h * m1)
                / (h * h)
        }
    }

    fn blend_data(&self, s: f64) -> (f64, f64, f64, f64, f64, f64) {
        let (s0, s1) = (self.blend_lo, self.blend_hi);
        let h = s1 - s0;
        let f0 = LOG_CORRECTION * (s0 + 1.0).ln();
        let f1 = LOG_CORRECTION * (self.horizon - s1 + 1.0).ln();
        let m0 = LOG_CORRECTION / (s0 + 1.0);
        let m1 = -LOG_CORRECTION / (self.horizon - s1 + 1.0);
        ((s - s0) / h, h, f0, f1, m0, m1)
    }

    /// Straight barrier `β s + 1` of the `H` count.
    #[inline]
    pub fn straight_barrier(&self, s: f64) -> f64 {
        self.slope * s + 1.0
    }

    /// Curved barrier `β s + L(s) + y + 1` of the `Γ` count.
    #[inline]
    pub fn curved_barrier(&self, s: f64) -> f64 {
        self.slope * s + self.curve(s) + self.offset + 1.0
    }

    /// Terminal box `[β t - 1, β t]` of the `H` count.
    pub fn straight_box(&self) -> (f64, f64) {
        let bt = self.slope * self.horizon;
        (bt - 1.0, bt)
    }

    /// Terminal box `[β t - 1, β t + y]` of the `Γ` count.
    pub fn curved_box(&self) -> (f64, f64) {
        let bt = self.slope * self.horizon;
        (bt - 1.0, bt + self.offset)
    }
}

/// Counts of particles that stayed below the straight (`h`) and the curved
/// (`gamma`) barrier and ended in the matching box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BarrierCount {
    pub h: u64,
    pub gamma: u64,
}

/// One replicate of the barrier census at horizon `t`, offset `y`.
///
/// Lineages are advanced in steps of at most `dt_path`; on each step the
/// barrier is replaced by its chord and the Brownian bridge between the two
/// sampled positions crosses it with the exact linear-boundary probability,
/// realised by one uniform draw shared by both barriers (so a `Γ` crossing
/// always implies an `H` crossing). Descendants inherit the crossing flags.
///
/// With `reflected`, the monitored path is `|X|`: the signed path must avoid
/// both `+barrier` and `-barrier`, the two crossings being treated as
/// independent bridge events on each step.
///
/// `guard` bounds the number of lineage segments simulated.
pub fn barrier_census(
    spec: &BarrierSpec,
    stream: &mut RngStream,
    dt_path: f64,
    reflected: bool,
    guard: usize,
) -> Result<BarrierCount> {
    if !(dt_path > 0.0) {
        return domain(format!("dt_path must be > 0, got {dt_path}"));
    }
    let t = spec.horizon;
    let (h_lo, h_hi) = spec.straight_box();
    let (g_lo, g_hi) = spec.curved_box();

    let mut count = BarrierCount::default();
    let mut segments = 0usize;
    // (birth time, position, still below the straight barrier)
    let mut stack: Vec<(f64, f64, bool)> = vec![(0.0, 0.0, true)];

    while let Some((birth, start, mut below_h)) = stack.pop() {
        segments += 1;
        if segments > guard {
            return Err(Error::Guard { guard });
        }
        let end = (birth + stream.standard_exponential()).min(t);
        let mut s = birth;
        let mut x = start;
        let mut bh0 = spec.straight_barrier(s);
        let mut bg0 = spec.curved_barrier(s);
        let mut alive = true;
        while s < end {
            let s1 = if end - s > dt_path { s + dt_path } else { end };
            let h = s1 - s;
            let x1 = x + h.sqrt() * stream.standard_normal();
            let bh1 = spec.straight_barrier(s1);
            let bg1 = spec.curved_barrier(s1);

            let p_g = crossing(x, x1, bg0, bg1, h, reflected);
            let p_h = if below_h {
                crossing(x, x1, bh0, bh1, h, reflected)
            } else {
                0.0
            };
            if p_h > 0.0 || p_g > 0.0 {
                let u = stream.uniform();
                if u < p_g {
                    alive = false;
                    break;
                }
                if u < p_h {
                    below_h = false;
                }
            }
            s = s1;
            x = x1;
            bh0 = bh1;
            bg0 = bg1;
        }
        if !alive {
            continue;
        }
        if end < t {
            stack.push((end, x, below_h));
            stack.push((end, x, below_h));
        } else {
            let z = if reflected { x.abs() } else { x };
            if below_h && z >= h_lo && z <= h_hi {
                count.h += 1;
            }
            if z >= g_lo && z <= g_hi {
                count.gamma += 1;
            }
        }
    }
    Ok(count)
}

/// Probability that the bridge from `x0` to `x1` leaves the region below the
/// chord `b0 -> b1` (and above `-b0 -> -b1` when reflected).
#[inline]
fn crossing(x0: f64, x1: f64, b0: f64, b1: f64, h: f64, reflected: bool) -> f64 {
    let up = one_side(b0 - x0, b1 - x1, h);
    if !reflected {
        return up;
    }
    let down = one_side(b0 + x0, b1 + x1, h);
    up + down - up * down
}

#[inline]
fn one_side(d0: f64, d1: f64, h: f64) -> f64 {
    if d0 > 0.0 && d1 > 0.0 && 2.0 * d0 * d1 > NEGLIGIBLE_EXPONENT * h {
        0.0
    } else {
        bridge_crossing_gaps(d0, d1, h)
    }
}

/// Convenience wrapper with the default guard.
pub fn barrier_census_default(
    t: f64,
    y: f64,
    stream: &mut RngStream,
    dt_path: f64,
    reflected: bool,
) -> Result<BarrierCount> {
    barrier_census(&BarrierSpec::new(t, y)?, stream, dt_path, reflected, 4 * super::DEFAULT_GUARD)
}
