use super::grid::Grid1D;
use crate::error::{domain, Error, Result};

/// Round-off slack allowed when verifying that `u` stays in `[0, 1]`.
const RANGE_SLACK: f64 = 1e-12;
/// Largest mismatch tolerated between a Dirichlet edge and its neighbour
/// before the front is declared to have reached the edge.
const EDGE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Variant {
    /// Whole line, Dirichlet at both truncation edges.
    Line,
    /// Half-line `y >= 0` with Neumann wall at 0 and initial data `H(x_shift - y)`.
    HalfLine { x_shift: f64 },
}

/// Initial data for the line solver.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    /// `u = 1` on nodes `x >= at`, 0 elsewhere.
    Heaviside { at: f64 },
    Constant(f64),
    /// Explicit node values.
    Values(Vec<f64>),
}

/// `u(t, ·)` on the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub time: f64,
    pub lo: f64,
    pub dx: f64,
    pub values: Vec<f64>,
    pub variant: Variant,
}

impl FieldState {
    pub fn coord(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.dx
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.values.len()).map(|i| self.coord(i)).collect()
    }

    /// Linear interpolation of `u` at `z`, clamped to the grid ends.
    pub fn value_at(&self, z: f64) -> f64 {
        interpolate(self.lo, self.dx, &self.values, z)
    }
}

pub(crate) fn interpolate(lo: f64, dx: f64, values: &[f64], z: f64) -> f64 {
    let pos = (z - lo) / dx;
    if pos <= 0.0 {
        return values[0];
    }
    let last = values.len() - 1;
    if pos >= last as f64 {
        return values[last];
    }
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    values[i] + frac * (values[i + 1] - values[i])
}

/// Stepper for one field. Holds `w = 1 - u` internally.
#[derive(Debug, Clone)]
pub struct FkppSolver {
    grid: Grid1D,
    variant: Variant,
    w: Vec<f64>,
    rhs: Vec<f64>,
    step: usize,
    // factorized tridiagonal system
    lower: Vec<f64>,
    denom: Vec<f64>,
    upper_mod: Vec<f64>,
    neumann_left: bool,
}

impl FkppSolver {
    pub fn line(grid: Grid1D, initial: &InitialData) -> Result<Self> {
        let n = grid.nodes();
        let u: Vec<f64> = match initial {
            InitialData::Heaviside { at } => {
                let jump = ((at - grid.lo) / grid.dx).round();
                (0..n).map(|i| if (i as f64) >= jump { 1.0 } else { 0.0 }).collect()
            }
            InitialData::Constant(c) => vec![*c; n],
            InitialData::Values(v) => {
                if v.len() != n {
                    return domain(format!("{} initial values for {n} nodes", v.len()));
                }
                v.clone()
            }
        };
        if u.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return domain("initial data must lie in [0, 1]");
        }
        Ok(Self::build(grid, Variant::Line, u, false))
    }

    pub fn halfline(grid: Grid1D, x_shift: f64) -> Result<Self> {
        if grid.lo != 0.0 {
            return domain(format!("half-line grid must start at 0, got {}", grid.lo));
        }
        if !(x_shift >= 0.0) {
            return domain(format!("x_shift must be >= 0, got {x_shift}"));
        }
        let n = grid.nodes();
        let last_one = (x_shift / grid.dx + 1e-9).floor();
        let u = (0..n).map(|j| if (j as f64) <= last_one { 1.0 } else { 0.0 }).collect();
        Ok(Self::build(grid, Variant::HalfLine { x_shift }, u, true))
    }

    fn build(grid: Grid1D, variant: Variant, u: Vec<f64>, neumann_left: bool) -> Self {
        let n = u.len();
        let r = 0.5 * grid.dt / (grid.dx * grid.dx);
        let mut lower = vec![-r; n];
        let mut diag = vec![1.0 + 2.0 * r; n];
        let mut upper = vec![-r; n];
        lower[0] = 0.0;
        upper[n - 1] = 0.0;
        if neumann_left {
            // ghost node w_{-1} = w_1
            upper[0] = -2.0 * r;
        } else {
            diag[0] = 1.0;
            upper[0] = 0.0;
        }
        diag[n - 1] = 1.0;
        lower[n - 1] = 0.0;

        let mut denom = vec![0.0; n];
        let mut upper_mod = vec![0.0; n];
        denom[0] = diag[0];
        upper_mod[0] = upper[0] / denom[0];
        for i in 1..n {
            denom[i] = diag[i] - lower[i] * upper_mod[i - 1];
            upper_mod[i] = upper[i] / denom[i];
        }
        Self {
            grid,
            variant,
            w: u.iter().map(|v| 1.0 - v).collect(),
            rhs: vec![0.0; n],
            step: 0,
            lower,
            denom,
            upper_mod,
            neumann_left,
        }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn time(&self) -> f64 {
        self.step as f64 * self.grid.dt
    }

    /// Advance one time step.
    pub fn step(&mut self) -> Result<()> {
        let n = self.w.len();
        let dt = self.grid.dt;
        let first = if self.neumann_left { 0 } else { 1 };
        self.rhs[0] = self.w[0];
        self.rhs[n - 1] = self.w[n - 1];
        for i in first..n - 1 {
            let w = self.w[i];
            self.rhs[i] = w + dt * w * (1.0 - w);
        }
        // forward sweep, then back substitution into w
        self.rhs[0] /= self.denom[0];
        for i in 1..n {
            self.rhs[i] = (self.rhs[i] - self.lower[i] * self.rhs[i - 1]) / self.denom[i];
        }
        self.w[n - 1] = self.rhs[n - 1];
        for i in (0..n - 1).rev() {
            self.w[i] = self.rhs[i] - self.upper_mod[i] * self.w[i + 1];
        }
        self.step += 1;
        self.verify()
    }

    fn verify(&self) -> Result<()> {
        let n = self.w.len();
        if let Some(bad) = self.w.iter().find(|w| !(**w >= -RANGE_SLACK && **w <= 1.0 + RANGE_SLACK)) {
            return Err(Error::Numerical(format!(
                "field left [0, 1] at t = {}: u = {}",
                self.time(),
                1.0 - bad
            )));
        }
        if (self.w[n - 2] - self.w[n - 1]).abs() > EDGE_TOL {
            return Err(Error::FrontAtEdge {
                time: self.time(),
                edge: "upper",
            });
        }
        if !self.neumann_left && (self.w[1] - self.w[0]).abs() > EDGE_TOL {
            return Err(Error::FrontAtEdge {
                time: self.time(),
                edge: "lower",
            });
        }
        Ok(())
    }

    /// Step until `time() == t` (to the nearest step).
    pub fn advance_to(&mut self, t: f64) -> Result<()> {
        let target = (t / self.grid.dt).round() as usize;
        if target < self.step {
            return domain(format!("cannot step back from t = {} to {t}", self.time()));
        }
        while self.step < target {
            self.step()?;
        }
        Ok(())
    }

    /// `u` interpolated at `z`.
    pub fn value_at(&self, z: f64) -> f64 {
        1.0 - interpolate(self.grid.lo, self.grid.dx, &self.w, z)
    }

    pub fn state(&self) -> FieldState {
        FieldState {
            time: self.time(),
            lo: self.grid.lo,
            dx: self.grid.dx,
            values: self.w.iter().map(|w| 1.0 - w).collect(),
            variant: self.variant,
        }
    }

    /// Run to `grid.t_final`, keeping states every `store_every` time units
    /// (rounded to whole steps), including `t = 0` and the final time.
    pub fn run(mut self, store_every: f64) -> Result<Vec<FieldState>> {
        let stride = ((store_every / self.grid.dt).round() as usize).max(1);
        let steps = self.grid.steps();
        let mut history = vec![self.state()];
        for k in 1..=steps {
            self.step()?;
            if k % stride == 0 || k == steps {
                history.push(self.state());
            }
        }
        Ok(history)
    }
}

/// F-KPP on the line; the truncation edges keep their initial values
/// (0 and 1 for Heaviside data).
pub fn solve_fkpp_line(grid: &Grid1D, initial: &InitialData, store_every: f64) -> Result<Vec<FieldState>> {
    FkppSolver::line(*grid, initial)?.run(store_every)
}

/// F-KPP in `y >= 0` for `u^R(t, x_shift, y)` with data `H(x_shift - y)`,
/// Neumann at `y = 0` and Dirichlet at the far edge.
pub fn solve_fkpp_halfline(grid: &Grid1D, x_shift: f64, store_every: f64) -> Result<Vec<FieldState>> {
    FkppSolver::halfline(*grid, x_shift)?.run(store_every)
}
