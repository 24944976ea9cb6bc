//! Dissipative-channel trajectory command.

use std::io::Write;

use critprobe_core::dissipative::{
    dissipative_trajectory_with, DissipativeParams, SpectrumEnsemble,
};
use critprobe_core::geometric::{geometric_phase, GeomPhaseResult};
use critprobe_core::qubit::QubitDensity;
use critprobe_core::trajectory::{BuildOptions, Trajectory};

use crate::config::RunConfig;
use crate::csvfmt::{fmt_bool, fmt_f64};
use crate::CliError;

pub struct DissipativeOutcome {
    pub trajectory: Trajectory,
    pub result: GeomPhaseResult,
}

pub fn run_dissipative(
    cfg: &RunConfig,
    ens: &SpectrumEnsemble,
    params: &DissipativeParams,
) -> Result<DissipativeOutcome, CliError> {
    let rho0 = QubitDensity::pure(cfg.theta_q);
    let opts =
        BuildOptions::new(cfg.total_time, cfg.steps.min(256))?.with_max_samples(cfg.steps + 1);
    let trajectory = dissipative_trajectory_with(ens, &rho0, params, &opts)?;
    let result = geometric_phase(&trajectory)?;
    Ok(DissipativeOutcome { trajectory, result })
}

pub fn write_csv(
    cfg: &RunConfig,
    params: &DissipativeParams,
    out: &DissipativeOutcome,
    w: &mut impl Write,
) -> std::io::Result<()> {
    writeln!(w, "# critprobe v1")?;
    for line in cfg.header_lines("dissipative") {
        writeln!(w, "{line}")?;
    }
    writeln!(w, "# delta = {}", fmt_f64(params.delta))?;
    writeln!(w, "# g_z = {}", fmt_f64(params.g_z))?;
    writeln!(w, "# g_y = {}", fmt_f64(params.g_y))?;
    writeln!(w, "# phi_g = {}", fmt_f64(out.result.phi_g))?;
    writeln!(w, "# collapse = {}", fmt_bool(out.result.collapse))?;
    writeln!(w, "t,rho11,rho22,re_rho12,im_rho12,purity_proxy,azimuth")?;
    let traj = &out.trajectory;
    for i in 0..traj.times.len() {
        let s = &traj.states[i];
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            fmt_f64(traj.times[i]),
            fmt_f64(s.rho11),
            fmt_f64(s.rho22),
            fmt_f64(s.rho12.re),
            fmt_f64(s.rho12.im),
            fmt_f64(traj.echo_modulus[i]),
            fmt_f64(traj.azimuth[i]),
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_level_keeps_unit_purity_and_trace() {
        let cfg = RunConfig {
            steps: 256,
            total_time: 6.0,
            ..RunConfig::default()
        };
        let ens = SpectrumEnsemble::new(vec![(1.3, 1.0)]).unwrap();
        let p = DissipativeParams::new(0.6, 0.2, 0.1).unwrap();
        let out = run_dissipative(&cfg, &ens, &p).unwrap();
        for (s, purity) in out
            .trajectory
            .states
            .iter()
            .zip(&out.trajectory.echo_modulus)
        {
            assert!((s.rho11 + s.rho22 - 1.0).abs() < 1e-12);
            assert!((purity - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn two_level_mixture_preserves_trace() {
        let cfg = RunConfig {
            steps: 256,
            total_time: 5.0,
            ..RunConfig::default()
        };
        let ens = SpectrumEnsemble::new(vec![(1.0, 0.5), (-0.7, 0.5)]).unwrap();
        let p = DissipativeParams::new(0.6, 0.25, 0.1).unwrap();
        let out = run_dissipative(&cfg, &ens, &p).unwrap();
        for s in &out.trajectory.states {
            assert!((s.rho11 + s.rho22 - 1.0).abs() < 1e-12);
            assert!(s.constraint_error() < 1e-12);
        }
        assert!(out.result.phi_g.is_finite());
    }
}
