use nalgebra::{DMatrix, DVector};

use crate::error::{domain, Error, Result};

/// Least-squares fit `median(t) ≈ speed t + log_coeff log t + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontierFit {
    pub speed: f64,
    pub log_coeff: f64,
    pub intercept: f64,
    pub residual_rms: f64,
}

pub fn frontier_fit(t_list: &[f64], medians: &[f64]) -> Result<FrontierFit> {
    if t_list.len() != medians.len() {
        return domain(format!(
            "{} horizons but {} medians",
            t_list.len(),
            medians.len()
        ));
    }
    if t_list.iter().chain(medians).any(|v| !v.is_finite()) || t_list.iter().any(|&t| t <= 0.0) {
        return domain("horizons must be finite and > 0, medians finite");
    }
    let mut distinct = t_list.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::Numerical(format!(
            "rank-deficient design: {} distinct horizons",
            distinct.len()
        )));
    }
    if distinct.len() < 4 {
        return domain("frontier fit needs at least 4 distinct horizons");
    }

    let n = t_list.len();
    let design = DMatrix::from_fn(n, 3, |i, j| match j {
        0 => t_list[i],
        1 => t_list[i].ln(),
        _ => 1.0,
    });
    let rhs = DVector::from_column_slice(medians);
    let qr = design.clone().qr();
    let coef = qr
        .r()
        .solve_upper_triangular(&(qr.q().transpose() * &rhs))
        .ok_or_else(|| Error::Numerical("singular least-squares system".into()))?;
    let residual = &rhs - &design * &coef;
    Ok(FrontierFit {
        speed: coef[0],
        log_coeff: coef[1],
        intercept: coef[2],
        residual_rms: (residual.norm_squared() / n as f64).sqrt(),
    })
}
