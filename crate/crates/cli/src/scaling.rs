//! Scaling study of the Bogoliubov-angle derivative sums.

use std::io::Write;

use critprobe_core::chain::{scaling_sum, ChainParams, ScalingTarget};

use crate::config::{RunConfig, SweptVar};
use crate::csvfmt::fmt_f64;
use crate::CliError;

#[derive(Debug, Clone)]
pub struct ScalingRow {
    pub n_sites: usize,
    pub gamma: f64,
    pub s_lambda: f64,
    pub s_gamma: f64,
}

#[derive(Debug)]
pub struct ScalingOutcome {
    pub rows: Vec<ScalingRow>,
    /// Log-log slope of S^lambda versus N, one per gamma.
    pub slopes_vs_n: Vec<(f64, f64)>,
    /// Log-log slope of S^lambda versus gamma, one per N.
    pub slopes_vs_gamma: Vec<(usize, f64)>,
}

/// Least-squares slope of ln(y) against ln(x).
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Run over the N grid (geometrically spaced between the grid bounds) and
/// the gamma list.
pub fn run_scaling(cfg: &RunConfig) -> Result<ScalingOutcome, CliError> {
    let grid = cfg
        .grid
        .as_ref()
        .ok_or_else(|| CliError::Config("scaling requires --grid N:min:max:count".into()))?;
    if grid.var != SweptVar::NSites {
        return Err(CliError::Config(
            "scaling sweeps N; use --grid N:min:max:count".into(),
        ));
    }
    let gammas: Vec<f64> = if cfg.gamma_list.is_empty() {
        vec![cfg.gamma]
    } else {
        cfg.gamma_list.clone()
    };

    // Geometric spacing: scaling fits live on log axes.
    let mut sizes: Vec<usize> = Vec::new();
    let ratio = (grid.max / grid.min).powf(1.0 / (grid.count - 1) as f64);
    for i in 0..grid.count {
        let raw = grid.min * ratio.powi(i as i32);
        let mut n = (raw / 2.0).round() as usize * 2;
        if n < 4 {
            n = 4;
        }
        if sizes.last() != Some(&n) {
            sizes.push(n);
        }
    }

    let mut rows = Vec::new();
    for &gm in &gammas {
        for &n in &sizes {
            let params = ChainParams::new(n, cfg.lambda, gm, 0.0, 0.0)?;
            let s_lambda = scaling_sum(&params, ScalingTarget::Lambda)?;
            let s_gamma = scaling_sum(&params, ScalingTarget::Gamma)?;
            rows.push(ScalingRow {
                n_sites: n,
                gamma: gm,
                s_lambda,
                s_gamma,
            });
        }
    }

    let slopes_vs_n = gammas
        .iter()
        .map(|&gm| {
            let pts: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.gamma == gm)
                .map(|r| (r.n_sites as f64, r.s_lambda))
                .collect();
            (gm, log_log_slope(&pts))
        })
        .collect();
    let slopes_vs_gamma = sizes
        .iter()
        .filter(|_| gammas.len() >= 2)
        .map(|&n| {
            let pts: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.n_sites == n)
                .map(|r| (r.gamma, r.s_lambda))
                .collect();
            (n, log_log_slope(&pts))
        })
        .collect();

    Ok(ScalingOutcome {
        rows,
        slopes_vs_n,
        slopes_vs_gamma,
    })
}

pub fn write_csv(
    cfg: &RunConfig,
    outcome: &ScalingOutcome,
    w: &mut impl Write,
) -> std::io::Result<()> {
    writeln!(w, "# critprobe v1")?;
    for line in cfg.header_lines("scaling") {
        writeln!(w, "{line}")?;
    }
    for (gm, slope) in &outcome.slopes_vs_n {
        writeln!(
            w,
            "# slope_s_lambda_vs_N[gamma={}] = {}",
            fmt_f64(*gm),
            fmt_f64(*slope)
        )?;
    }
    for (n, slope) in &outcome.slopes_vs_gamma {
        writeln!(w, "# slope_s_lambda_vs_gamma[N={n}] = {}", fmt_f64(*slope))?;
    }
    writeln!(w, "n_sites,gamma,s_lambda,s_gamma")?;
    for r in &outcome.rows {
        writeln!(
            w,
            "{},{},{},{}",
            r.n_sites,
            fmt_f64(r.gamma),
            fmt_f64(r.s_lambda),
            fmt_f64(r.s_gamma),
        )?;
    }
    Ok(())
}
