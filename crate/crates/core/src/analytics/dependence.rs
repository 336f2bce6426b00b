use super::Estimate;
use crate::error::{domain, Result};

/// Plug-in estimate of `P(M <= x, m >= -x) - P(M <= x)^2` from per-replicate
/// `(max, min)` pairs, with a jackknife standard error.
pub fn dependence_statistic(extremes: &[(f64, f64)], x: f64) -> Result<Estimate> {
    let n = extremes.len();
    if n < 100 {
        return domain(format!("dependence statistic needs >= 100 replicates, got {n}"));
    }
    let both = extremes.iter().filter(|(hi, lo)| *hi <= x && *lo >= -x).count() as f64;
    let top = extremes.iter().filter(|(hi, _)| *hi <= x).count() as f64;
    let nf = n as f64;
    let value = both / nf - (top / nf).powi(2);

    // leave-one-out values only depend on the two indicators of the dropped pair
    let loo = |a: f64, b: f64| (both - a) / (nf - 1.0) - ((top - b) / (nf - 1.0)).powi(2);
    let jack: Vec<f64> = extremes
        .iter()
        .map(|&(hi, lo)| {
            let a = f64::from(u8::from(hi <= x && lo >= -x));
            let b = f64::from(u8::from(hi <= x));
            loo(a, b)
        })
        .collect();
    let mean = jack.iter().sum::<f64>() / nf;
    let var = jack.iter().map(|v| (v - mean).powi(2)).sum::<f64>() * (nf - 1.0) / nf;
    Ok(Estimate {
        value,
        std_error: var.sqrt(),
        n,
    })
}

/// Growth exponent `2 - r - (b - a)^2 / (4 (1 - r))` of the expected number
/// of pairs in the `a` and `b` clusters whose common ancestor lived after
/// time `r t`. Negative values mean that expectation decays.
pub fn pair_overlap_exponent(a: f64, b: f64, r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return domain(format!("r must lie in (0, 1), got {r}"));
    }
    if !(a < b) {
        return domain(format!("need a < b, got a = {a}, b = {b}"));
    }
    Ok(2.0 - r - (b - a).powi(2) / (4.0 * (1.0 - r)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastic::RngStream;

    #[test]
    fn exponent_examples() {
        let s = 2f64.sqrt();
        assert!((pair_overlap_exponent(-s, s, 0.5).unwrap() + 2.5).abs() < 1e-12);
        assert!((pair_overlap_exponent(0.0, 1e-9, 1e-9).unwrap() - 2.0).abs() < 1e-8);
        // r + (b-a)^2/(4(1-r)) = 2 with r = 1/2 needs (b-a)^2 = 3
        assert!(pair_overlap_exponent(0.0, 3f64.sqrt(), 0.5).unwrap().abs() < 1e-12);
        assert!(pair_overlap_exponent(0.0, 1.0, 0.0).is_err());
        assert!(pair_overlap_exponent(0.0, 1.0, 1.0).is_err());
        assert!(pair_overlap_exponent(1.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn edge_clusters_always_decay() {
        let s = 2f64.sqrt();
        for k in 1..100 {
            let r = k as f64 / 100.0;
            assert!(pair_overlap_exponent(-s, s, r).unwrap() < 0.0);
        }
    }

    #[test]
    fn total_dependence() {
        let mut s = RngStream::new(2, 2);
        let pairs: Vec<(f64, f64)> = (0..1000)
            .map(|_| {
                let m = s.standard_normal();
                (m, -m)
            })
            .collect();
        let x = 0.3;
        let p = pairs.iter().filter(|(m, _)| *m <= x).count() as f64 / 1000.0;
        let d = dependence_statistic(&pairs, x).unwrap();
        assert!((d.value - p * (1.0 - p)).abs() < 1e-12);
    }

    #[test]
    fn independence_null_is_covered() {
        let mut covered = 0;
        let trials = 200;
        for trial in 0..trials {
            let mut s = RngStream::new(31, trial);
            let pairs: Vec<(f64, f64)> = (0..400)
                .map(|_| (s.standard_normal(), -s.standard_normal()))
                .collect();
            let d = dependence_statistic(&pairs, 0.2).unwrap();
            if d.value.abs() <= 3.0 * d.std_error {
                covered += 1;
            }
        }
        assert!(covered as f64 >= 0.95 * trials as f64, "{covered}/{trials}");
    }

    #[test]
    fn needs_enough_replicates() {
        assert!(dependence_statistic(&[(0.0, 0.0); 99], 1.0).is_err());
    }
}
