use statrs::distribution::{Binomial, DiscreteCDF};

use crate::error::{domain, Result};

/// Two-sided level of the order-statistic confidence interval.
const CONFIDENCE: f64 = 0.95;

/// Empirical δ-quantile of a displacement sample with a distribution-free
/// confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileEstimate {
    pub delta: f64,
    pub horizon: f64,
    pub value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n: usize,
}

/// Empirical analogue of `sup{x : P(M <= x) <= δ}`.
///
/// With `F_n` the empirical distribution function, `F_n(x) <= δ` holds
/// exactly for `x` below the order statistic of rank `floor(n δ) + 1`, so
/// that order statistic is the estimate (when `n δ` is an integer this picks
/// the larger of the two candidates). The interval `[X_(l), X_(u)]` uses
/// binomial `Bin(n, δ)` ranks so that it covers the true quantile with
/// probability at least 95% for continuous laws.
///
/// `horizon` is carried along for reporting only.
pub fn quantile_estimate(samples: &[f64], delta: f64, horizon: f64) -> Result<QuantileEstimate> {
    let n = samples.len();
    if n < 20 {
        return domain(format!("quantile estimation needs at least 20 samples, got {n}"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return domain(format!("delta must lie in (0, 1), got {delta}"));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return domain("samples must be finite");
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    // 1-based ranks
    let rank = ((n as f64 * delta).floor() as usize + 1).min(n);

    let binom = Binomial::new(delta, n as u64).expect("valid binomial parameters");
    let alpha = 0.5 * (1.0 - CONFIDENCE);
    // largest l with P(B <= l - 1) <= alpha, smallest u with P(B <= u - 1) >= 1 - alpha
    let mut low = 1;
    for l in (1..=n).rev() {
        if binom.cdf((l - 1) as u64) <= alpha {
            low = l;
            break;
        }
    }
    let mut high = n;
    for u in 1..=n {
        if binom.cdf((u - 1) as u64) >= 1.0 - alpha {
            high = u;
            break;
        }
    }
    let low = low.min(rank);
    let high = high.max(rank);
    Ok(QuantileEstimate {
        delta,
        horizon,
        value: sorted[rank - 1],
        ci_low: sorted[low - 1],
        ci_high: sorted[high - 1],
        n,
    })
}
