use crate::error::{domain, Result};

/// The two theta-type sums of the straight-barrier asymptotics:
///
/// * `S1 = Σ_{|n|<=N} (-1)^n e^{-√8 n²} cosh(√8 n)`, which vanishes exactly
///   because `n ↔ 1 - n` pairs terms of opposite sign;
/// * `S2 = Σ_{|n|<=N} (-1)^n n² e^{-√8 n²} cosh(√8 n)` ≈ -0.98952.
pub fn theta_sums(n_max: usize) -> Result<(f64, f64)> {
    if n_max < 5 {
        return domain(format!("theta sums need n_max >= 5, got {n_max}"));
    }
    let r8 = 8f64.sqrt();
    // e^{-√8 n²} cosh(√8 n) = (e^{-√8 n(n-1)} + e^{-√8 n(n+1)}) / 2
    let term = |n: f64| 0.5 * ((-r8 * n * (n - 1.0)).exp() + (-r8 * n * (n + 1.0)).exp());
    let (mut s1, mut s2) = (term(0.0), 0.0);
    for n in 1..=n_max {
        let nf = n as f64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let pair = 2.0 * sign * term(nf);
        s1 += pair;
        s2 += nf * nf * pair;
    }
    Ok((s1, s2))
}
