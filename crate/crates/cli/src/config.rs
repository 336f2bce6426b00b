use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

/// Experiments the runner knows about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    /// Median maximal displacement per horizon and the frontier regression.
    Frontier,
    /// Two-sided dependence statistic at the frontier centering.
    Dependence,
    /// Barrier census means against the many-to-one expectation.
    Barrier,
    /// Survival-series expectations and theta constants.
    Abundo,
    /// Per-run ratio of normalized interval counts at two horizons.
    Watanabe,
    /// Median minimal displacement of the reflected system.
    Minimal,
    /// Front trajectory of the F-KPP line solver.
    PdeFront,
    /// Renewal-form residual of the half-line solver.
    Renewal,
    /// Centred profile distances between starting points.
    Profile,
}

impl Experiment {
    pub const ALL: [Experiment; 9] = [
        Experiment::Frontier,
        Experiment::Dependence,
        Experiment::Barrier,
        Experiment::Abundo,
        Experiment::Watanabe,
        Experiment::Minimal,
        Experiment::PdeFront,
        Experiment::Renewal,
        Experiment::Profile,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Frontier => "frontier",
            Experiment::Dependence => "dependence",
            Experiment::Barrier => "barrier",
            Experiment::Abundo => "abundo",
            Experiment::Watanabe => "watanabe",
            Experiment::Minimal => "minimal",
            Experiment::PdeFront => "pde-front",
            Experiment::Renewal => "renewal",
            Experiment::Profile => "profile",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            Experiment::Frontier => "median maxima per horizon, frontier fit and trend overlays",
            Experiment::Dependence => "P(M <= x, m >= -x) - P(M <= x)^2 at the frontier centering",
            Experiment::Barrier => "barrier census means H and Gamma against E H^R",
            Experiment::Abundo => "E H^R(y, t) from the survival series, theta sums",
            Experiment::Watanabe => "normalized interval-count ratio between two horizons",
            Experiment::Minimal => "median minimal reflected displacement per horizon",
            Experiment::PdeFront => "F-KPP line front trajectory and speed",
            Experiment::Renewal => "renewal-form residual of the half-line solution",
            Experiment::Profile => "centred half-line profile distances across starting points",
        }
    }

    fn is_simulation(self) -> bool {
        matches!(
            self,
            Experiment::Frontier | Experiment::Dependence | Experiment::Barrier | Experiment::Watanabe | Experiment::Minimal
        )
    }
}

/// Finite-difference grid settings. `dt` defaults to `dx`; `t_final`
/// defaults to the largest horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_dx")]
    pub dx: f64,
    #[serde(default)]
    pub dt: Option<f64>,
    #[serde(default = "default_store_every")]
    pub store_every: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            dx: default_dx(),
            dt: None,
            store_every: default_store_every(),
        }
    }
}

impl GridConfig {
    pub fn dt(&self) -> f64 {
        self.dt.unwrap_or(self.dx)
    }
}

fn default_dx() -> f64 {
    0.05
}
fn default_store_every() -> f64 {
    1.0
}
fn default_replicates() -> usize {
    100
}
fn default_dt_path() -> f64 {
    0.01
}
fn default_guard() -> usize {
    brbm_core::sim::DEFAULT_GUARD
}
fn default_interval() -> [f64; 2] {
    [-1.0, 1.0]
}
fn default_level() -> f64 {
    0.5
}
fn default_true() -> bool {
    true
}
fn default_x_shift() -> f64 {
    8.0
}
fn default_x_max() -> f64 {
    34.0
}

/// One experiment, read from a JSON document. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub experiment: Option<Experiment>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    pub horizons: Vec<f64>,
    #[serde(default)]
    pub y_offsets: Vec<f64>,
    #[serde(default = "default_dt_path")]
    pub dt_path: f64,
    #[serde(default = "default_guard")]
    pub guard: usize,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    /// Count interval for the Watanabe ratio.
    #[serde(default = "default_interval")]
    pub interval: [f64; 2],
    /// Quantile level for medians, fronts and profile centring.
    #[serde(default = "default_level")]
    pub level: f64,
    /// Barrier census monitors the reflected path.
    #[serde(default = "default_true")]
    pub reflected: bool,
    /// Added to the frontier centering in the dependence experiment.
    #[serde(default)]
    pub threshold_shift: f64,
    /// `x` of the renewal residual.
    #[serde(default = "default_x_shift")]
    pub x_shift: f64,
    /// Upper end of the `x` family for profiles.
    #[serde(default = "default_x_max")]
    pub x_max: f64,
    /// Also write every simulated snapshot as genealogy records.
    #[serde(default)]
    pub export_raw: bool,
    /// Run replicate cells on the rayon pool.
    #[serde(default)]
    pub parallel: bool,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Validation(vec![format!("config: {e}")]))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(vec![format!("cannot read {}: {e}", path.display())]))?;
        Self::from_json(&text)
    }

    /// Settle the experiment name against the command line and check every
    /// field, collecting all problems.
    pub fn validate(&mut self, requested: Experiment) -> Result<(), CliError> {
        let mut bad = Vec::new();
        match self.experiment {
            Some(e) if e != requested => bad.push(format!(
                "experiment: config names '{}' but '{}' was requested",
                e.name(),
                requested.name()
            )),
            _ => self.experiment = Some(requested),
        }
        if self.replicates < 1 {
            bad.push("replicates: must be >= 1".into());
        }
        if self.horizons.is_empty() {
            bad.push("horizons: at least one horizon is required".into());
        }
        if self.horizons.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            bad.push("horizons: must be finite and > 0".into());
        }
        if self.horizons.windows(2).any(|w| w[1] <= w[0]) {
            bad.push("horizons: must be strictly ascending".into());
        }
        if requested.is_simulation() && self.horizons.iter().any(|t| *t > 13.0) {
            bad.push("horizons: simulation horizons are capped at 13".into());
        }
        if self.y_offsets.iter().any(|y| !(y.is_finite() && *y >= 0.0)) {
            bad.push("y_offsets: must be finite and >= 0".into());
        }
        if !(self.dt_path > 0.0 && self.dt_path <= 1.0) {
            bad.push("dt_path: must lie in (0, 1]".into());
        }
        if self.guard < 1 {
            bad.push("guard: must be >= 1".into());
        }
        if !(self.grid.dx > 0.0 && self.grid.dx <= 1.0) {
            bad.push("grid.dx: must lie in (0, 1]".into());
        }
        if !(self.grid.dt() > 0.0 && self.grid.dt() <= 1.0) {
            bad.push("grid.dt: must lie in (0, 1]".into());
        }
        if !(self.grid.store_every > 0.0) {
            bad.push("grid.store_every: must be > 0".into());
        }
        if !(self.interval[0].is_finite() && self.interval[1].is_finite() && self.interval[0] < self.interval[1]) {
            bad.push("interval: must be a finite [lo, hi] with lo < hi".into());
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            bad.push("level: must lie in (0, 1)".into());
        }
        if !self.threshold_shift.is_finite() {
            bad.push("threshold_shift: must be finite".into());
        }
        if !(self.x_shift >= 0.0) {
            bad.push("x_shift: must be >= 0".into());
        }
        if !(self.x_max > self.grid.dx) {
            bad.push("x_max: must exceed grid.dx".into());
        }
        match requested {
            Experiment::Watanabe if self.horizons.len() != 2 => {
                bad.push("horizons: watanabe needs exactly two horizons [t1, t2]".into())
            }
            Experiment::Barrier | Experiment::Abundo if self.y_offsets.is_empty() => {
                bad.push("y_offsets: at least one offset is required".into())
            }
            Experiment::Barrier | Experiment::Abundo if self.horizons.iter().any(|t| *t < 1.0) => {
                bad.push("horizons: barrier quantities need t >= 1".into())
            }
            Experiment::Profile if self.y_offsets.len() < 2 => {
                bad.push("y_offsets: profile needs a reference and at least one other starting point".into())
            }
            Experiment::Renewal if self.y_offsets.is_empty() => {
                bad.push("y_offsets: at least one sample point is required".into())
            }
            Experiment::Dependence if self.replicates < 100 => {
                bad.push("replicates: dependence needs >= 100 replicates".into())
            }
            Experiment::Frontier | Experiment::Minimal if self.replicates < 20 => {
                bad.push("replicates: medians need >= 20 replicates".into())
            }
            _ => {}
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(CliError::Validation(bad))
        }
    }
}
