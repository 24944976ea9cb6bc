//! Echo trace: the decoherence factor sampled on a uniform grid.

use std::io::Write;

use critprobe_core::dephasing::{DephasingEvolver, COLLAPSE_THRESHOLD};

use crate::config::RunConfig;
use crate::csvfmt::fmt_f64;
use crate::CliError;

pub struct EchoTrace {
    pub times: Vec<f64>,
    pub factors: Vec<num_complex::Complex64>,
    pub azimuth: Vec<f64>,
}

pub fn run_echo_trace(cfg: &RunConfig) -> Result<EchoTrace, CliError> {
    let table = critprobe_core::chain::build_mode_table(&cfg.chain_params()?)?;
    let evolver = DephasingEvolver::new(&table);
    let steps = cfg.steps;
    let mut times = Vec::with_capacity(steps + 1);
    let mut factors = Vec::with_capacity(steps + 1);
    let mut azimuth = Vec::with_capacity(steps + 1);
    let mut held = 0.0f64;
    let mut anchored = false;
    for i in 0..=steps {
        let t = cfg.total_time * i as f64 / steps as f64;
        let f = evolver.factor(t);
        if f.norm() >= COLLAPSE_THRESHOLD {
            let raw = f.arg();
            if anchored {
                let turns = ((held - raw) / std::f64::consts::TAU).round();
                held = raw + std::f64::consts::TAU * turns;
            } else {
                held = raw;
                anchored = true;
            }
        }
        times.push(t);
        factors.push(f);
        azimuth.push(held);
    }
    Ok(EchoTrace {
        times,
        factors,
        azimuth,
    })
}

pub fn write_csv(cfg: &RunConfig, trace: &EchoTrace, w: &mut impl Write) -> std::io::Result<()> {
    writeln!(w, "# critprobe v1")?;
    for line in cfg.header_lines("echo-trace") {
        writeln!(w, "{line}")?;
    }
    writeln!(w, "t,re_f,im_f,abs_f,azimuth")?;
    for i in 0..trace.times.len() {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_f64(trace.times[i]),
            fmt_f64(trace.factors[i].re),
            fmt_f64(trace.factors[i].im),
            fmt_f64(trace.factors[i].norm()),
            fmt_f64(trace.azimuth[i]),
        )?;
    }
    Ok(())
}
