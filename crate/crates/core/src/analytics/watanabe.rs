use crate::error::{domain, Result};
use crate::sim::PopulationSnapshot;

/// Per-run Watanabe ratios and the runs that had to be dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct WatanabeRatios {
    pub ratios: Vec<f64>,
    /// Runs with no particle in `D` at the earlier horizon.
    pub excluded: usize,
    pub runs: usize,
}

impl WatanabeRatios {
    pub fn exclusion_rate(&self) -> f64 {
        self.excluded as f64 / self.runs.max(1) as f64
    }
}

fn check_interval(d: (f64, f64)) -> Result<()> {
    if !(d.0.is_finite() && d.1.is_finite() && d.0 < d.1) {
        return domain(format!(
            "counting domain must be a bounded interval, got [{}, {}]",
            d.0, d.1
        ));
    }
    Ok(())
}

fn at_horizon(run: &[PopulationSnapshot], t: f64) -> Result<&PopulationSnapshot> {
    run.iter()
        .find(|s| s.horizon() == t)
        .ok_or_else(|| crate::Error::Domain(format!("run has no snapshot at t = {t}")))
}

/// `R = [N_D(t2) sqrt(t2) e^{-t2}] / [N_D(t1) sqrt(t1) e^{-t1}]` per run.
///
/// Each run is a list of nested snapshots from one simulation that must
/// contain both horizons. Both normalized counts converge to the same
/// multiple of the count martingale limit, so `R -> 1`.
pub fn watanabe_ratio(
    runs: &[Vec<PopulationSnapshot>],
    d: (f64, f64),
    t1: f64,
    t2: f64,
) -> Result<WatanabeRatios> {
    check_interval(d)?;
    if !(t1 > 0.0 && t2 > t1) {
        return domain(format!("need 0 < t1 < t2, got t1 = {t1}, t2 = {t2}"));
    }
    let mut ratios = Vec::with_capacity(runs.len());
    let mut excluded = 0;
    for run in runs {
        let n1 = at_horizon(run, t1)?.count_in(d.0, d.1);
        let n2 = at_horizon(run, t2)?.count_in(d.0, d.1);
        if n1 == 0 {
            excluded += 1;
            continue;
        }
        let norm = |n: usize, t: f64| (n as f64).ln() + 0.5 * t.ln() - t;
        ratios.push((norm(n2, t2) - norm(n1, t1)).exp());
    }
    Ok(WatanabeRatios {
        ratios,
        excluded,
        runs: runs.len(),
    })
}

/// `N_{D1} / N_{D2}` in one snapshot, `None` when `D2` is empty.
pub fn count_ratio(snap: &PopulationSnapshot, d1: (f64, f64), d2: (f64, f64)) -> Result<Option<f64>> {
    check_interval(d1)?;
    check_interval(d2)?;
    let n2 = snap.count_in(d2.0, d2.1);
    Ok((n2 > 0).then(|| snap.count_in(d1.0, d1.1) as f64 / n2 as f64))
}
