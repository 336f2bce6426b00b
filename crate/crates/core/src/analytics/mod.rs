//! Closed-form series, many-to-one expectations and the estimators used by
//! the experiments.

mod abundo;
mod dependence;
mod frontier;
mod quantile;
mod theta;
mod watanabe;

pub use abundo::{
    abundo_band_probability, abundo_density, expectation_h_r, SeriesValue, DEFAULT_SERIES_TERMS,
};
pub use dependence::{dependence_statistic, pair_overlap_exponent};
pub use frontier::{frontier_fit, FrontierFit};
pub use quantile::{quantile_estimate, QuantileEstimate};
pub use theta::theta_sums;
pub use watanabe::{count_ratio, watanabe_ratio, WatanabeRatios};

/// A Monte Carlo or plug-in statistic with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
    pub n: usize,
}

impl Estimate {
    /// Sample mean with the standard error of the mean.
    pub fn mean_of(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Self {
                value: f64::NAN,
                std_error: f64::NAN,
                n,
            };
        }
        let nf = n as f64;
        let mean = values.iter().sum::<f64>() / nf;
        let se = if n > 1 {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (nf - 1.0);
            (var / nf).sqrt()
        } else {
            f64::NAN
        };
        Self {
            value: mean,
            std_error: se,
            n,
        }
    }
}

/// Median of a sample (average of the two middle order statistics when even).
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
