//! Self-verification: oracle agreements and invariant suites, printable as
//! a pass/fail report.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI, TAU};
use std::io::Write;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use critprobe_core::chain::{build_mode_table, ChainParams};
use critprobe_core::dephasing::{build_trajectory, decoherence_factor, DephasingEvolver};
use critprobe_core::dissipative::{
    dissipative_trajectory, evolve_mixed, qubit_propagator, DissipativeParams, SpectrumEnsemble,
};
use critprobe_core::geometric::{gauge_check, geometric_phase};
use critprobe_core::mat2::Mat2;
use critprobe_core::oracle::{expm_2x2, fock_evolution_factor, pair_evolution_factor};
use critprobe_core::principal_angle;
use critprobe_core::qubit::QubitDensity;
use critprobe_core::trajectory::Trajectory;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Fast,
    Full,
}

/// Agreement thresholds. The defaults are the project contract; tests can
/// tighten them to confirm the suite actually fails when a bound is broken.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub oracle_agreement: f64,
    pub fock_agreement: f64,
    pub identity: f64,
    pub propagator: f64,
    pub state: f64,
    pub gauge: f64,
    pub berry: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            oracle_agreement: 1e-9,
            fock_agreement: 1e-10,
            identity: 1e-12,
            propagator: 1e-10,
            state: 1e-12,
            gauge: 1e-8,
            berry: 1e-3,
        }
    }
}

struct Report<'w, W: Write> {
    w: &'w mut W,
    all_passed: bool,
}

impl<'w, W: Write> Report<'w, W> {
    fn check(&mut self, name: &str, passed: bool, detail: String) -> std::io::Result<()> {
        self.all_passed &= passed;
        writeln!(
            self.w,
            "{} {name}: {detail}",
            if passed { "PASS" } else { "FAIL" }
        )
    }
}

fn random_params(rng: &mut ChaCha8Rng, sizes: &[usize]) -> (ChainParams, f64) {
    let n = sizes[rng.gen_range(0..sizes.len())];
    let p = ChainParams::new(
        n,
        rng.gen_range(-4.0..4.0),
        rng.gen_range(0.0..1.0),
        rng.gen_range(0.0..0.3),
        0.0,
    )
    .unwrap();
    (p, rng.gen_range(0.0..20.0))
}

fn propagator_hamiltonian(energy: f64, p: &DissipativeParams) -> Mat2 {
    let (ax, ay, az) = (
        p.delta,
        p.g * energy * (2.0 * p.gamma_mix).sin(),
        p.g * energy * (2.0 * p.gamma_mix).cos(),
    );
    Mat2([
        [Complex64::new(energy + az, 0.0), Complex64::new(ax, -ay)],
        [Complex64::new(ax, ay), Complex64::new(energy - az, 0.0)],
    ])
}

fn precession_trajectory(alpha0: f64, steps: usize) -> Trajectory {
    let total = TAU;
    let (s, c) = (alpha0 / 2.0).sin_cos();
    let mut times = Vec::new();
    let mut states = Vec::new();
    let mut azimuth = Vec::new();
    for i in 0..=steps {
        let t = total * i as f64 / steps as f64;
        times.push(t);
        states.push(QubitDensity {
            rho11: c * c,
            rho22: s * s,
            rho12: Complex64::new(0.0, t).exp() * (c * s),
        });
        azimuth.push(t);
    }
    Trajectory {
        echo_modulus: vec![1.0; times.len()],
        times,
        states,
        azimuth,
        collapse: false,
        capped: false,
        degenerate: false,
    }
}

/// Run the suite; returns true when every check passed.
pub fn run(level: Level, tol: &Tolerances, w: &mut impl Write) -> std::io::Result<bool> {
    let started = Instant::now();
    let mut report = Report {
        w,
        all_passed: true,
    };
    let draws = 50;

    // Closed form against the per-pair numeric evolution.
    {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut worst = 0.0f64;
        let mut worst_norm_excess = 0.0f64;
        for _ in 0..draws {
            let (params, t) = random_params(&mut rng, &[64, 200, 400]);
            let table = build_mode_table(&params).unwrap();
            let closed = decoherence_factor(&table, t);
            let oracle = pair_evolution_factor(&params, t).unwrap();
            worst = worst.max((closed - oracle).norm());
            worst_norm_excess = worst_norm_excess.max(closed.norm() - 1.0);
        }
        report.check(
            "echo-oracle-agreement",
            worst < tol.oracle_agreement,
            format!("{draws} draws, worst |closed - numeric| = {worst:.3e}"),
        )?;
        report.check(
            "echo-contractive",
            worst_norm_excess < 1e-12,
            format!("worst |F| - 1 = {worst_norm_excess:.3e}"),
        )?;
    }

    // Structural identities of the dephasing factor.
    {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let (params, t) = random_params(&mut rng, &[64, 128]);
            let table = build_mode_table(&params).unwrap();
            let evolver = DephasingEvolver::new(&table);
            let one = Complex64::new(1.0, 0.0);
            worst = worst.max((evolver.factor(0.0) - one).norm());
            worst = worst.max((evolver.diagonal_factor(t) - one).norm());
            let frozen =
                ChainParams::new(params.n_sites, params.lambda, params.gamma, 0.0, 0.0).unwrap();
            worst = worst
                .max((decoherence_factor(&build_mode_table(&frozen).unwrap(), t) - one).norm());
        }
        report.check(
            "dephasing-identities",
            worst < tol.identity,
            format!("worst deviation = {worst:.3e} (F(0), same-branch, g = 0)"),
        )?;
    }

    // Dissipative propagator against the generic matrix exponential.
    {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut worst = 0.0f64;
        let mut worst_unitarity = 0.0f64;
        for _ in 0..200 {
            let p = DissipativeParams::new(
                rng.gen_range(-1.5..1.5),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            )
            .unwrap();
            let energy = rng.gen_range(-3.0..3.0);
            let t = rng.gen_range(0.0..15.0);
            let u = qubit_propagator(energy, &p, t);
            let reference = expm_2x2(&propagator_hamiltonian(energy, &p), t).unwrap();
            worst = worst.max(u.max_abs_diff(&reference));
            worst_unitarity = worst_unitarity.max(u.unitarity_error());
        }
        report.check(
            "propagator-closed-form",
            worst < tol.propagator,
            format!("200 draws, worst |U - expm| = {worst:.3e}"),
        )?;
        report.check(
            "propagator-unitarity",
            worst_unitarity < 1e-12,
            format!("worst |U Udag - I| = {worst_unitarity:.3e}"),
        )?;
    }

    // Mixed-unitary channel: trace and positivity.
    {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let mut worst_trace = 0.0f64;
        let mut worst_negativity = 0.0f64;
        for _ in 0..200 {
            let k = rng.gen_range(1..5usize);
            let mut levels: Vec<(f64, f64)> = (0..k)
                .map(|i| {
                    (
                        rng.gen_range(-3.0..3.0) + 7.0 * i as f64,
                        rng.gen_range(0.1..1.0),
                    )
                })
                .collect();
            let total: f64 = levels.iter().map(|l| l.1).sum();
            for l in &mut levels {
                l.1 /= total;
            }
            let ens = SpectrumEnsemble::new(levels).unwrap();
            let p = DissipativeParams::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-0.6..0.6),
                rng.gen_range(-0.6..0.6),
            )
            .unwrap();
            let rho0 = QubitDensity::pure(rng.gen_range(0.0..PI));
            let rho = evolve_mixed(&ens, &rho0, &p, rng.gen_range(0.0..12.0));
            worst_trace = worst_trace.max((rho.rho11 + rho.rho22 - 1.0).abs());
            let disc =
                (rho.rho11 - rho.rho22) * (rho.rho11 - rho.rho22) + 4.0 * rho.rho12.norm_sqr();
            let eps_min = 0.5 * (1.0 - disc.sqrt());
            worst_negativity = worst_negativity.max(-eps_min);
        }
        report.check(
            "mixed-channel-trace",
            worst_trace < tol.state,
            format!("200 draws, worst |Tr - 1| = {worst_trace:.3e}"),
        )?;
        report.check(
            "mixed-channel-positivity",
            worst_negativity < tol.state,
            format!("worst -min(eig) = {worst_negativity:.3e}"),
        )?;
    }

    if level == Level::Full {
        // Product factorization against the dense Fock evolution.
        {
            let mut rng = ChaCha8Rng::seed_from_u64(15);
            let mut worst = 0.0f64;
            for &n in &[8usize, 10, 12] {
                for _ in 0..10 {
                    let (params, t) = random_params(&mut rng, &[n]);
                    let pairwise = pair_evolution_factor(&params, t).unwrap();
                    let fock = fock_evolution_factor(&params, t).unwrap();
                    worst = worst.max((pairwise - fock).norm());
                }
            }
            report.check(
                "fock-factorization",
                worst < tol.fock_agreement,
                format!("30 draws, worst |pairwise - dense| = {worst:.3e}"),
            )?;
        }

        // Berry reduction on closed precession loops.
        {
            let mut worst = 0.0f64;
            for alpha0 in [FRAC_PI_6, FRAC_PI_3, PI / 2.0] {
                let traj = precession_trajectory(alpha0, 4096);
                let expect = -PI * (1.0 - alpha0.cos());
                let got = geometric_phase(&traj).unwrap().phi_g;
                worst = worst.max(principal_angle(got - expect).abs());
            }
            report.check(
                "berry-reduction",
                worst < tol.berry,
                format!("worst |phase - solid-angle value| = {worst:.3e}"),
            )?;
        }

        // Gauge invariance on both channels.
        {
            let params = ChainParams::new(200, 0.95, 1.0, 0.1, 0.0).unwrap();
            let table = build_mode_table(&params).unwrap();
            let xy = build_trajectory(&table, FRAC_PI_4, 10.0, 256).unwrap();
            let ens = SpectrumEnsemble::new(vec![(0.9, 0.6), (-0.4, 0.4)]).unwrap();
            let dp = DissipativeParams::new(0.5, 0.2, 0.1).unwrap();
            let dis = dissipative_trajectory(&ens, &QubitDensity::pure(FRAC_PI_4), &dp, 8.0, 256)
                .unwrap();
            let mut worst = 0.0f64;
            for traj in [&xy, &dis] {
                worst = worst.max(gauge_check(traj, |t| 2.3 * t).unwrap());
                worst = worst.max(gauge_check(traj, |t| (5.0 * t).sin()).unwrap());
                worst = worst.max(gauge_check(traj, |t| 0.4 * t * t - 1.0).unwrap());
            }
            report.check(
                "gauge-invariance",
                worst < tol.gauge,
                format!("worst |delta phase| = {worst:.3e}"),
            )?;
        }
    }

    let elapsed = started.elapsed();
    writeln!(
        report.w,
        "{} in {:.2}s",
        if report.all_passed {
            "all checks passed"
        } else {
            "FAILURES detected"
        },
        elapsed.as_secs_f64(),
    )?;
    Ok(report.all_passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_level_passes_with_default_tolerances() {
        let mut out = Vec::new();
        assert!(run(Level::Fast, &Tolerances::default(), &mut out).unwrap());
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("PASS echo-oracle-agreement"));
        assert!(!text.contains("FAIL"));
    }

    #[test]
    fn tampered_tolerance_fails() {
        let tol = Tolerances {
            oracle_agreement: 1e-18,
            ..Tolerances::default()
        };
        let mut out = Vec::new();
        assert!(!run(Level::Fast, &tol, &mut out).unwrap());
        assert!(String::from_utf8(out)
            .unwrap()
            .contains("FAIL echo-oracle-agreement"));
    }
}
