use std::f64::consts::SQRT_2;
use std::time::Instant;

use brbm_core::analytics::{
    dependence_statistic, expectation_h_r, frontier_fit, quantile_estimate, theta_sums, watanabe_ratio, Estimate,
    QuantileEstimate, DEFAULT_SERIES_TERMS,
};
use brbm_core::pde::{
    front_position, profile_convergence, renewal_residual, sample_halfline_family, solve_fkpp_halfline, FkppSolver,
    Grid1D, InitialData,
};
use brbm_core::sim::{barrier_census, extremes, simulate_bbm, simulate_nested, BarrierSpec, PopulationSnapshot};
use brbm_core::stochastic::RngStream;
use brbm_core::{frontier_centering, Error, LOG_CORRECTION};
use rayon::prelude::*;

use crate::config::{Experiment, ExperimentConfig};
use crate::output::{RawRecord, ResultRow};

/// Rows of a finished run plus any raw snapshot records.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub rows: Vec<ResultRow>,
    pub raw: Vec<RawRecord>,
}

/// A run that stopped early; `partial` holds what completed before `error`.
#[derive(Debug, Clone)]
pub struct RunFailure {
    pub partial: Report,
    pub error: Error,
}

type Run = Result<(), Error>;

struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    name: &'static str,
    report: Report,
}

impl Ctx<'_> {
    fn stream(&self, cell: usize, replicate: usize) -> RngStream {
        RngStream::for_cell(self.cfg.seed, cell as u32, replicate as u32)
    }

    /// Evaluate `f` for every replicate index, in index order whatever the
    /// scheduling.
    fn replicates<T: Send>(&self, f: impl Fn(usize) -> brbm_core::Result<T> + Sync + Send) -> brbm_core::Result<Vec<T>> {
        let n = self.cfg.replicates;
        if self.cfg.parallel {
            (0..n).into_par_iter().map(f).collect()
        } else {
            (0..n).map(f).collect()
        }
    }

    fn row(&mut self, params: String, statistic: &str, value: f64, std_error: Option<f64>, n: Option<usize>, started: Instant) {
        self.report.rows.push(ResultRow {
            experiment: self.name.to_string(),
            params,
            statistic: statistic.to_string(),
            value,
            std_error,
            n,
            wall_time: started.elapsed().as_secs_f64(),
        });
    }

    fn estimate(&mut self, params: String, statistic: &str, e: Estimate, started: Instant) {
        self.row(params, statistic, e.value, Some(e.std_error), Some(e.n), started);
    }

    /// Median row; the standard error is the 95% order-statistic interval
    /// half-width divided by 1.96.
    fn quantile(&mut self, params: String, statistic: &str, q: &QuantileEstimate, started: Instant) {
        let se = (q.ci_high - q.ci_low) / (2.0 * 1.96);
        self.row(params, statistic, q.value, Some(se), Some(q.n), started);
    }

    fn export(&mut self, replicate: usize, snaps: &[PopulationSnapshot]) {
        for snap in snaps {
            self.report.raw.extend(snap.records(replicate as u64).into_iter().map(|r| RawRecord {
                horizon: snap.horizon(),
                replicate_id: r.replicate_id,
                particle_id: r.particle_id,
                parent_id: r.parent_id,
                birth_time: r.birth_time,
                split_time: r.split_time,
                endpoint_position: r.endpoint_position,
            }));
        }
    }
}

/// Run a validated configuration.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report, RunFailure> {
    let experiment = cfg.experiment.expect("validated config names its experiment");
    let mut ctx = Ctx {
        cfg,
        name: experiment.name(),
        report: Report::default(),
    };
    let result = match experiment {
        Experiment::Frontier => frontier(&mut ctx),
        Experiment::Dependence => dependence(&mut ctx),
        Experiment::Barrier => barrier(&mut ctx),
        Experiment::Abundo => abundo(&mut ctx),
        Experiment::Watanabe => watanabe(&mut ctx),
        Experiment::Minimal => minimal(&mut ctx),
        Experiment::PdeFront => pde_front(&mut ctx),
        Experiment::Renewal => renewal(&mut ctx),
        Experiment::Profile => profile(&mut ctx),
    };
    match result {
        Ok(()) => Ok(ctx.report),
        Err(error) => Err(RunFailure {
            partial: ctx.report,
            error,
        }),
    }
}

fn nested_runs(ctx: &Ctx) -> brbm_core::Result<Vec<Vec<PopulationSnapshot>>> {
    let horizons = &ctx.cfg.horizons;
    let guard = ctx.cfg.guard;
    ctx.replicates(|r| simulate_nested(horizons, &mut ctx.stream(0, r), guard))
}

fn frontier(ctx: &mut Ctx) -> Run {
    let started = Instant::now();
    let runs = nested_runs(ctx)?;
    let horizons = ctx.cfg.horizons.clone();
    let level = ctx.cfg.level;
    let mut signed = Vec::new();
    let mut reflected = Vec::new();
    for (k, &t) in horizons.iter().enumerate() {
        let (max, refl): (Vec<f64>, Vec<f64>) = runs
            .iter()
            .map(|run| {
                let (hi, lo) = extremes(&run[k]);
                (hi, hi.max(-lo))
            })
            .unzip();
        let q = quantile_estimate(&max, level, t)?;
        let qr = quantile_estimate(&refl, level, t)?;
        ctx.quantile(format!("t={t}"), "quantile_max", &q, started);
        ctx.quantile(format!("t={t}"), "quantile_max_reflected", &qr, started);
        ctx.row(format!("t={t}"), "overlay_liminf", SQRT_2 * t - LOG_CORRECTION * t.ln(), None, None, started);
        ctx.row(format!("t={t}"), "overlay_limsup", SQRT_2 * t - t.ln() / (2.0 * SQRT_2), None, None, started);
        signed.push(q.value);
        reflected.push(qr.value);
    }
    if horizons.len() >= 4 {
        for (system, values) in [("signed", &signed), ("reflected", &reflected)] {
            let fit = frontier_fit(&horizons, values)?;
            let p = format!("system={system}");
            ctx.row(p.clone(), "fit_speed", fit.speed, None, Some(horizons.len()), started);
            ctx.row(p.clone(), "fit_log_coeff", fit.log_coeff, None, Some(horizons.len()), started);
            ctx.row(p.clone(), "fit_intercept", fit.intercept, None, Some(horizons.len()), started);
            ctx.row(p, "fit_residual_rms", fit.residual_rms, None, Some(horizons.len()), started);
        }
    }
    if ctx.cfg.export_raw {
        for (r, run) in runs.iter().enumerate() {
            ctx.export(r, run);
        }
    }
    Ok(())
}

fn dependence(ctx: &mut Ctx) -> Run {
    let guard = ctx.cfg.guard;
    for (cell, t) in ctx.cfg.horizons.clone().into_iter().enumerate() {
        let started = Instant::now();
        let x = frontier_centering(t) + ctx.cfg.threshold_shift;
        let pairs = ctx.replicates(|r| simulate_bbm(t, &mut ctx.stream(cell, r), guard).map(|s| extremes(&s)))?;
        let delta = dependence_statistic(&pairs, x)?;
        let below: Vec<f64> = pairs.iter().map(|p| if p.0 <= x { 1.0 } else { 0.0 }).collect();
        ctx.estimate(format!("t={t};x={x}"), "delta", delta, started);
        ctx.estimate(format!("t={t};x={x}"), "p_max_below", Estimate::mean_of(&below), started);
    }
    Ok(())
}

fn barrier(ctx: &mut Ctx) -> Run {
    let guard = 4 * ctx.cfg.guard;
    let (dt_path, reflected) = (ctx.cfg.dt_path, ctx.cfg.reflected);
    let mut cell = 0;
    for t in ctx.cfg.horizons.clone() {
        for y in ctx.cfg.y_offsets.clone() {
            let started = Instant::now();
            let spec = BarrierSpec::new(t, y)?;
            let counts = ctx.replicates(|r| barrier_census(&spec, &mut ctx.stream(cell, r), dt_path, reflected, guard))?;
            let h: Vec<f64> = counts.iter().map(|c| c.h as f64).collect();
            let g: Vec<f64> = counts.iter().map(|c| c.gamma as f64).collect();
            let p = format!("t={t};y={y};reflected={reflected};dt_path={dt_path}");
            let gamma = Estimate::mean_of(&g);
            let scale = (SQRT_2 * y).exp() / ((y + 2.0) * (y + 2.0));
            ctx.estimate(p.clone(), "mean_h", Estimate::mean_of(&h), started);
            ctx.estimate(p.clone(), "mean_gamma", gamma, started);
            ctx.row(
                p.clone(),
                "scaled_gamma",
                gamma.value * scale,
                Some(gamma.std_error * scale),
                Some(gamma.n),
                started,
            );
            if reflected {
                ctx.row(p, "expected_h", expectation_h_r(y, t)?, None, None, started);
            }
            cell += 1;
        }
    }
    Ok(())
}

fn abundo(ctx: &mut Ctx) -> Run {
    for t in ctx.cfg.horizons.clone() {
        for y in ctx.cfg.y_offsets.clone() {
            let started = Instant::now();
            let e = expectation_h_r(y, t)?;
            let p = format!("t={t};y={y}");
            ctx.row(p.clone(), "expected_h", e, None, None, started);
            ctx.row(p, "scaled_expected_h", (SQRT_2 * y).exp() * e, None, None, started);
        }
    }
    let started = Instant::now();
    let (s1, s2) = theta_sums(DEFAULT_SERIES_TERMS)?;
    let p = format!("n_max={DEFAULT_SERIES_TERMS}");
    ctx.row(p.clone(), "theta_s1", s1, None, None, started);
    ctx.row(p, "theta_s2", s2, None, None, started);
    Ok(())
}

fn watanabe(ctx: &mut Ctx) -> Run {
    let started = Instant::now();
    let runs = nested_runs(ctx)?;
    let (t1, t2) = (ctx.cfg.horizons[0], ctx.cfg.horizons[1]);
    let d = (ctx.cfg.interval[0], ctx.cfg.interval[1]);
    let w = watanabe_ratio(&runs, d, t1, t2)?;
    let p = format!("t1={t1};t2={t2};lo={};hi={}", d.0, d.1);
    if w.ratios.len() >= 20 {
        let q = quantile_estimate(&w.ratios, 0.5, t2)?;
        ctx.quantile(p.clone(), "median_ratio", &q, started);
    }
    if !w.ratios.is_empty() {
        ctx.estimate(p.clone(), "mean_ratio", Estimate::mean_of(&w.ratios), started);
    }
    ctx.row(p, "excluded_rate", w.exclusion_rate(), None, Some(w.runs), started);
    if ctx.cfg.export_raw {
        for (r, run) in runs.iter().enumerate() {
            ctx.export(r, run);
        }
    }
    Ok(())
}

fn minimal(ctx: &mut Ctx) -> Run {
    let started = Instant::now();
    let runs = nested_runs(ctx)?;
    for (k, t) in ctx.cfg.horizons.clone().into_iter().enumerate() {
        let mins: Vec<f64> = runs
            .iter()
            .map(|run| run[k].positions().fold(f64::INFINITY, |m, x| m.min(x.abs())))
            .collect();
        let q = quantile_estimate(&mins, ctx.cfg.level, t)?;
        ctx.quantile(format!("t={t}"), "quantile_min_reflected", &q, started);
    }
    if ctx.cfg.export_raw {
        for (r, run) in runs.iter().enumerate() {
            ctx.export(r, run);
        }
    }
    Ok(())
}

fn final_time(ctx: &Ctx) -> f64 {
    *ctx.cfg.horizons.last().expect("validated horizons")
}

fn pde_front(ctx: &mut Ctx) -> Run {
    let started = Instant::now();
    let grid = Grid1D::for_line(final_time(ctx), ctx.cfg.grid.dx, ctx.cfg.grid.dt())?;
    let mut solver = FkppSolver::line(grid, &InitialData::Heaviside { at: 0.0 })?;
    let mut previous: Option<(f64, f64)> = None;
    for t in ctx.cfg.horizons.clone() {
        solver.advance_to(t)?;
        let front = front_position(&solver.state(), ctx.cfg.level)?;
        ctx.row(format!("t={t};dx={};dt={}", grid.dx, grid.dt), "front", front, None, None, started);
        if let Some((t0, f0)) = previous {
            let p = format!("t0={t0};t1={t};dx={};dt={}", grid.dx, grid.dt);
            ctx.row(p, "speed", (front - f0) / (t - t0), None, None, started);
        }
        previous = Some((t, front));
    }
    Ok(())
}

fn renewal(ctx: &mut Ctx) -> Run {
    let started = Instant::now();
    let grid = Grid1D::for_halfline(final_time(ctx), ctx.cfg.grid.dx, ctx.cfg.grid.dt())?;
    let x = ctx.cfg.x_shift;
    let history = solve_fkpp_halfline(&grid, x, ctx.cfg.grid.store_every)?;
    let mut worst: f64 = 0.0;
    for t in ctx.cfg.horizons.clone() {
        for y in ctx.cfg.y_offsets.clone() {
            let r = renewal_residual(&history, &[(t, x, y)])?;
            worst = worst.max(r);
            ctx.row(format!("t={t};x={x};y={y};dx={}", grid.dx), "residual", r, None, None, started);
        }
    }
    ctx.row(format!("x={x};dx={}", grid.dx), "max_residual", worst, None, None, started);
    Ok(())
}

fn profile(ctx: &mut Ctx) -> Run {
    let started = Instant::now();
    let dx = ctx.cfg.grid.dx;
    let grid = Grid1D::for_halfline(final_time(ctx), dx, ctx.cfg.grid.dt())?;
    let count = (ctx.cfg.x_max / dx).floor() as usize;
    let xs: Vec<f64> = (0..=count).map(|i| i as f64 * dx).collect();
    let table = sample_halfline_family(&grid, &xs, &ctx.cfg.horizons, &ctx.cfg.y_offsets)?;
    for d in profile_convergence(&table, ctx.cfg.level)? {
        let p = format!("t={};y_ref={};y={}", d.t, d.y_ref, d.y);
        match d.distance {
            Some(v) => ctx.row(p, "profile_distance", v, None, None, started),
            None => ctx.row(p, "profile_unformed", 1.0, None, None, started),
        }
    }
    Ok(())
}
