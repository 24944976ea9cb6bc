//! Phase sweeps: geometric phase across a swept chain parameter.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;

use critprobe_core::chain::{build_mode_table, ChainParams};
use critprobe_core::dephasing::build_trajectory_with;
use critprobe_core::geometric::geometric_phase;
use critprobe_core::principal_angle;
use critprobe_core::trajectory::BuildOptions;

use crate::config::{GridSpec, RunConfig, SweptVar};
use crate::csvfmt::{fmt_bool, fmt_f64};
use crate::CliError;

/// One computed grid point.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub gamma: f64,
    pub value: f64,
    pub phi_g: f64,
    pub integral_term: f64,
    pub overlap_arg: f64,
    pub collapse: bool,
    pub min_echo: f64,
    pub steps_used: usize,
    pub capped: bool,
    /// Measured per-row wall time. The only non-reproducible column; all
    /// physics columns are byte-deterministic for a fixed configuration.
    pub wall_ms: u64,
}

/// Largest phase step of one gamma section.
#[derive(Debug, Clone)]
pub struct SectionSummary {
    pub gamma: f64,
    /// Midpoint of the steepest grid interval.
    pub at_value: f64,
    pub max_abs_slope: f64,
}

#[derive(Debug)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub sections: Vec<SectionSummary>,
    pub any_capped: bool,
}

fn row_params(
    cfg: &RunConfig,
    gamma: f64,
    var: SweptVar,
    value: f64,
) -> Result<(ChainParams, f64), CliError> {
    let mut n_sites = cfg.n_sites;
    let mut lambda = cfg.lambda;
    let mut gamma_val = gamma;
    let mut g = cfg.g;
    let mut total_time = cfg.total_time;
    match var {
        SweptVar::Lambda => lambda = value,
        SweptVar::Gamma => gamma_val = value,
        SweptVar::G => g = value,
        SweptVar::NSites => n_sites = value as usize,
        SweptVar::TotalTime => total_time = value,
    }
    let params = ChainParams::new(n_sites, lambda, gamma_val, g, cfg.mu).map_err(CliError::from)?;
    Ok((params, total_time))
}

fn compute_row(
    cfg: &RunConfig,
    gamma: f64,
    var: SweptVar,
    value: f64,
) -> Result<SweepRow, CliError> {
    let start = Instant::now();
    let (params, total_time) = row_params(cfg, gamma, var, value)?;
    let table = build_mode_table(&params).map_err(CliError::from)?;
    let opts = BuildOptions::new(total_time, cfg.steps.min(256))
        .map_err(CliError::from)?
        .with_max_samples(cfg.steps + 1);
    let traj = build_trajectory_with(&table, cfg.theta_q, &opts).map_err(CliError::from)?;
    let result = geometric_phase(&traj).map_err(CliError::from)?;
    Ok(SweepRow {
        gamma: params.gamma,
        value,
        phi_g: result.phi_g,
        integral_term: result.integral_term,
        overlap_arg: result.overlap_arg,
        collapse: result.collapse,
        min_echo: traj.min_echo(),
        steps_used: result.steps_used,
        capped: traj.capped,
        wall_ms: start.elapsed().as_millis() as u64,
    })
}

fn summarize(rows: &[SweepRow]) -> Option<SectionSummary> {
    let mut best: Option<SectionSummary> = None;
    for pair in rows.windows(2) {
        let dv = pair[1].value - pair[0].value;
        if dv == 0.0 {
            continue;
        }
        // Circular difference: the phase lives on (-pi, pi].
        let slope = principal_angle(pair[1].phi_g - pair[0].phi_g).abs() / dv.abs();
        if best.as_ref().is_none_or(|b| slope > b.max_abs_slope) {
            best = Some(SectionSummary {
                gamma: pair[0].gamma,
                at_value: 0.5 * (pair[0].value + pair[1].value),
                max_abs_slope: slope,
            });
        }
    }
    best
}

/// Run the sweep described by `cfg` (grid required).
pub fn run_phase_sweep(cfg: &RunConfig) -> Result<SweepOutcome, CliError> {
    let grid = cfg
        .grid
        .as_ref()
        .ok_or_else(|| CliError::Config("phase-sweep requires --grid".into()))?
        .clone();
    grid.validate()?;
    let gammas: Vec<f64> = if cfg.gamma_list.is_empty() {
        vec![cfg.gamma]
    } else {
        if grid.var == SweptVar::Gamma {
            return Err(CliError::Config(
                "gamma-list cannot be combined with a gamma grid".into(),
            ));
        }
        cfg.gamma_list.clone()
    };
    let values = grid.values();

    let points: Vec<(f64, f64)> = gammas
        .iter()
        .flat_map(|&gm| values.iter().map(move |&v| (gm, v)))
        .collect();

    let compute = || -> Result<Vec<SweepRow>, CliError> {
        points
            .par_iter()
            .map(|&(gm, v)| compute_row(cfg, gm, grid.var, v))
            .collect()
    };
    let rows = if cfg.jobs > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| CliError::Config(format!("cannot build thread pool: {e}")))?;
        pool.install(compute)?
    } else {
        compute()?
    };

    let mut sections = Vec::new();
    for &gm in &gammas {
        let section: Vec<SweepRow> = rows.iter().filter(|r| r.gamma == gm).cloned().collect();
        if let Some(s) = summarize(&section) {
            sections.push(s);
        }
    }
    let any_capped = rows.iter().any(|r| r.capped);
    Ok(SweepOutcome {
        rows,
        sections,
        any_capped,
    })
}

pub const COLUMNS: &str =
    "swept_value,phi_g,integral_term,overlap_arg,collapse_flag,min_echo,steps_used,wall_time_ms";

/// Write the sweep CSV: banner, resolved config, columns, rows (grouped in
/// `# gamma = ...` sections when several gammas run).
pub fn write_csv(
    cfg: &RunConfig,
    outcome: &SweepOutcome,
    w: &mut impl Write,
) -> std::io::Result<()> {
    writeln!(w, "# critprobe v1")?;
    for line in cfg.header_lines("phase-sweep") {
        writeln!(w, "{line}")?;
    }
    writeln!(w, "{COLUMNS}")?;
    let multi = !cfg.gamma_list.is_empty();
    let mut current_gamma = f64::NAN;
    for row in &outcome.rows {
        if multi && row.gamma != current_gamma {
            writeln!(w, "# gamma = {}", fmt_f64(row.gamma))?;
            current_gamma = row.gamma;
        }
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            fmt_f64(row.value),
            fmt_f64(row.phi_g),
            fmt_f64(row.integral_term),
            fmt_f64(row.overlap_arg),
            fmt_bool(row.collapse),
            fmt_f64(row.min_echo),
            row.steps_used,
            row.wall_ms,
        )?;
    }
    Ok(())
}

/// Human-readable summary lines for stdout.
pub fn summary_lines(grid: &GridSpec, outcome: &SweepOutcome) -> Vec<String> {
    outcome
        .sections
        .iter()
        .map(|s| {
            format!(
                "gamma = {}: max |dPhi/d{}| = {:.6e} at {} = {:.6}",
                s.gamma,
                grid.var.name(),
                s.max_abs_slope,
                grid.var.name(),
                s.at_value,
            )
        })
        .collect()
}
