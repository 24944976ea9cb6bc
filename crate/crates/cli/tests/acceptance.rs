//! Acceptance suite: one test per project criterion, each printing a
//! PASS line with its measured margin. Run with `--nocapture` to see them.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI, TAU};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use critprobe::config::{GridSpec, RunConfig};
use critprobe::scaling::log_log_slope;
use critprobe::sweep::run_phase_sweep;
use critprobe_core::chain::{build_mode_table, scaling_sum, ChainParams, ScalingTarget};
use critprobe_core::dephasing::{
    build_trajectory, build_trajectory_with, decoherence_factor, DephasingEvolver,
};
use critprobe_core::dissipative::{
    dissipative_trajectory, evolve_mixed, qubit_propagator, DissipativeParams, SpectrumEnsemble,
};
use critprobe_core::geometric::{gauge_check, geometric_phase};
use critprobe_core::mat2::Mat2;
use critprobe_core::oracle::{expm_2x2, fock_evolution_factor, pair_evolution_factor};
use critprobe_core::principal_angle;
use critprobe_core::qubit::QubitDensity;
use critprobe_core::trajectory::{BuildOptions, Trajectory};

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

fn circ(a: f64, b: f64) -> f64 {
    principal_angle(a - b).abs()
}

#[test]
fn criterion_01_oracle_agreement() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (params, t) = random_params(&mut rng, &[64, 200, 400]);
        let table = build_mode_table(&params).unwrap();
        let closed = decoherence_factor(&table, t);
        let oracle = pair_evolution_factor(&params, t).unwrap();
        worst = worst.max((closed - oracle).norm());
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(worst < 1e-9, "worst disagreement {worst:.3e}");
    assert!(elapsed < 30.0, "took {elapsed:.1}s");
    println!(
        "PASS criterion 1: closed form vs pair oracle, 100 draws, \
         worst |diff| = {worst:.3e} (< 1e-9) in {elapsed:.2}s (< 30s)"
    );
}

#[test]
fn criterion_02_fock_factorization() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut worst = 0.0f64;
    for &n in &[8usize, 10, 12] {
        for _ in 0..20 {
            let (params, t) = random_params(&mut rng, &[n]);
            let pairwise = pair_evolution_factor(&params, t).unwrap();
            let fock = fock_evolution_factor(&params, t).unwrap();
            worst = worst.max((pairwise - fock).norm());
        }
    }
    assert!(worst < 1e-10, "worst disagreement {worst:.3e}");
    println!(
        "PASS criterion 2: pair product vs dense Fock evolution, \
         N = 8/10/12 x 20 draws, worst |diff| = {worst:.3e} (< 1e-10)"
    );
}

#[test]
fn criterion_03_dephasing_identities() {
    let one = Complex64::new(1.0, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let (params, t) = random_params(&mut rng, &[64, 128, 200]);
        let table = build_mode_table(&params).unwrap();
        let evolver = DephasingEvolver::new(&table);
        worst = worst.max((evolver.factor(0.0) - one).norm());
        worst = worst.max((evolver.diagonal_factor(t) - one).norm());
        let frozen =
            ChainParams::new(params.n_sites, params.lambda, params.gamma, 0.0, 0.0).unwrap();
        let f = decoherence_factor(&build_mode_table(&frozen).unwrap(), t);
        worst = worst.max((f - one).norm());
    }
    assert!(worst < 1e-12, "worst identity violation {worst:.3e}");
    println!(
        "PASS criterion 3: F(0) = 1, same-branch factor = 1, g = 0 echo = 1, \
         worst deviation = {worst:.3e} (< 1e-12)"
    );
}

#[test]
fn criterion_04_gamma_zero_claims() {
    let mut worst_echo = 0.0f64;
    let mut worst_phase = 0.0f64;
    for lambda in [1.2, 1.5, 3.0] {
        let params = ChainParams::new(400, lambda, 0.0, 0.1, 0.0).unwrap();
        let table = build_mode_table(&params).unwrap();
        for i in 0..=200 {
            let t = 10.0 * i as f64 / 200.0;
            let f = decoherence_factor(&table, t);
            worst_echo = worst_echo.max((f - Complex64::new(1.0, 0.0)).norm());
        }
        let traj = build_trajectory(&table, FRAC_PI_4, 10.0, 256).unwrap();
        worst_phase = worst_phase.max(geometric_phase(&traj).unwrap().phi_g.abs());
    }
    assert!(worst_echo < 1e-12, "worst |F - 1| = {worst_echo:.3e}");
    assert!(worst_phase < 1e-9, "worst |phase| = {worst_phase:.3e}");
    println!(
        "PASS criterion 4: gamma = 0 (fields outside the band) keeps F = 1 \
         (worst {worst_echo:.3e} < 1e-12) and the phase at 0 \
         (worst {worst_phase:.3e} < 1e-9)"
    );
}

#[test]
fn criterion_05_phase_vanishes_far_from_criticality() {
    let mut worst = 0.0f64;
    for lambda in [6.0, -6.0] {
        for gamma in [0.2, 1.0] {
            let params = ChainParams::new(400, lambda, gamma, 0.1, 0.0).unwrap();
            let table = build_mode_table(&params).unwrap();
            let traj = build_trajectory(&table, FRAC_PI_4, 10.0, 256).unwrap();
            worst = worst.max(geometric_phase(&traj).unwrap().phi_g.abs());
        }
    }
    assert!(worst < 0.01, "worst |phase| = {worst:.3e}");
    println!(
        "PASS criterion 5: |phase| at lambda = +-6 (gamma 0.2, 1; N = 400, \
         T = 10) worst = {worst:.3e} (< 0.01)"
    );
}

#[test]
fn criterion_06_max_slope_sits_at_the_transition() {
    let cfg = RunConfig {
        n_sites: 400,
        gamma: 1.0,
        g: 0.1,
        total_time: 10.0,
        steps: 4096,
        grid: Some(GridSpec::parse("lambda:0.5:1.5:201").unwrap()),
        ..RunConfig::default()
    };
    let outcome = run_phase_sweep(&cfg).unwrap();
    assert_eq!(outcome.rows.len(), 201);
    let s = &outcome.sections[0];
    assert!(
        (0.9..=1.1).contains(&s.at_value),
        "max slope at lambda = {} (slope {:.3e})",
        s.at_value,
        s.max_abs_slope
    );
    println!(
        "PASS criterion 6: max |dPhi/dlambda| on the 0.005 grid at \
         lambda = {:.4} in [0.9, 1.1] (slope {:.3e})",
        s.at_value, s.max_abs_slope
    );
}

fn precession_trajectory(alpha0: f64, steps: usize) -> Trajectory {
    let (s, c) = (alpha0 / 2.0).sin_cos();
    let mut times = Vec::new();
    let mut states = Vec::new();
    let mut azimuth = Vec::new();
    for i in 0..=steps {
        let t = TAU * i as f64 / steps as f64;
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

#[test]
fn criterion_07_berry_reduction() {
    let mut worst = 0.0f64;
    for alpha0 in [FRAC_PI_6, FRAC_PI_3, PI / 2.0] {
        let traj = precession_trajectory(alpha0, 4096);
        let expect = -PI * (1.0 - alpha0.cos());
        let got = geometric_phase(&traj).unwrap().phi_g;
        worst = worst.max(circ(got, expect));
    }
    assert!(worst < 1e-3, "worst Berry deviation {worst:.3e}");
    println!(
        "PASS criterion 7: precession loops reproduce -pi(1 - cos a0) at \
         4096 steps, worst deviation = {worst:.3e} (< 1e-3)"
    );
}

#[test]
fn criterion_08_gauge_invariance() {
    let params = ChainParams::new(200, 0.95, 1.0, 0.1, 0.0).unwrap();
    let table = build_mode_table(&params).unwrap();
    let xy = build_trajectory(&table, FRAC_PI_4, 10.0, 256).unwrap();
    let ens = SpectrumEnsemble::new(vec![(0.9, 0.6), (-0.4, 0.4)]).unwrap();
    let dp = DissipativeParams::new(0.5, 0.2, 0.1).unwrap();
    let dis = dissipative_trajectory(&ens, &QubitDensity::pure(FRAC_PI_4), &dp, 8.0, 256).unwrap();
    let mut worst = 0.0f64;
    for traj in [&xy, &dis] {
        worst = worst.max(gauge_check(traj, |t| 2.3 * t).unwrap());
        worst = worst.max(gauge_check(traj, |t| (5.0 * t).sin()).unwrap());
        worst = worst.max(gauge_check(traj, |t| 0.4 * t * t - 1.0).unwrap());
    }
    assert!(worst < 1e-8, "worst gauge drift {worst:.3e}");
    println!(
        "PASS criterion 8: three smooth re-gaugings on both channels move \
         the phase by at most {worst:.3e} (< 1e-8)"
    );
}

#[test]
fn criterion_09_dissipative_correctness() {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let mut worst_prop = 0.0f64;
    for _ in 0..1000 {
        let p = DissipativeParams::new(
            rng.gen_range(-1.5..1.5),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        )
        .unwrap();
        let energy = rng.gen_range(-3.0..3.0);
        let t = rng.gen_range(0.0..15.0);
        let u = qubit_propagator(energy, &p, t);
        let (ax, ay, az) = (
            p.delta,
            p.g * energy * (2.0 * p.gamma_mix).sin(),
            p.g * energy * (2.0 * p.gamma_mix).cos(),
        );
        let h = Mat2([
            [Complex64::new(energy + az, 0.0), Complex64::new(ax, -ay)],
            [Complex64::new(ax, ay), Complex64::new(energy - az, 0.0)],
        ]);
        worst_prop = worst_prop.max(u.max_abs_diff(&expm_2x2(&h, t).unwrap()));
    }
    let mut worst_trace = 0.0f64;
    let mut worst_neg = 0.0f64;
    for _ in 0..300 {
        let k = rng.gen_range(1..5usize);
        let levels: Vec<(f64, f64)> = (0..k)
            .map(|i| {
                (
                    rng.gen_range(-3.0..3.0) + 7.0 * i as f64,
                    rng.gen_range(0.1..1.0),
                )
            })
            .collect();
        let ens = SpectrumEnsemble::from_weights(levels).unwrap();
        let p = DissipativeParams::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-0.6..0.6),
            rng.gen_range(-0.6..0.6),
        )
        .unwrap();
        let rho = evolve_mixed(
            &ens,
            &QubitDensity::pure(rng.gen_range(0.0..PI)),
            &p,
            rng.gen_range(0.0..12.0),
        );
        worst_trace = worst_trace.max((rho.rho11 + rho.rho22 - 1.0).abs());
        let disc = (rho.rho11 - rho.rho22) * (rho.rho11 - rho.rho22) + 4.0 * rho.rho12.norm_sqr();
        worst_neg = worst_neg.max(-(0.5 * (1.0 - disc.sqrt())));
    }
    assert!(
        worst_prop < 1e-10,
        "worst propagator error {worst_prop:.3e}"
    );
    assert!(worst_trace < 1e-12, "worst trace error {worst_trace:.3e}");
    assert!(worst_neg < 1e-12, "worst negativity {worst_neg:.3e}");
    println!(
        "PASS criterion 9: propagator vs expm over 1000 draws \
         (worst {worst_prop:.3e} < 1e-10); mixed channel trace \
         ({worst_trace:.3e} < 1e-12) and positivity ({worst_neg:.3e})"
    );
}

#[test]
fn criterion_10_scaling_law() {
    let pts_n: Vec<(f64, f64)> = [128usize, 256, 512, 1024]
        .iter()
        .map(|&n| {
            let p = ChainParams::new(n, 1.0, 0.5, 0.0, 0.0).unwrap();
            (n as f64, scaling_sum(&p, ScalingTarget::Lambda).unwrap())
        })
        .collect();
    let slope_n = log_log_slope(&pts_n);
    let pts_g: Vec<(f64, f64)> = [0.2, 0.4, 0.8]
        .iter()
        .map(|&gm| {
            let p = ChainParams::new(512, 1.0, gm, 0.0, 0.0).unwrap();
            (gm, scaling_sum(&p, ScalingTarget::Lambda).unwrap())
        })
        .collect();
    let slope_g = log_log_slope(&pts_g);
    assert!((slope_n - 2.0).abs() < 0.15, "slope vs N = {slope_n}");
    assert!((slope_g + 2.0).abs() < 0.15, "slope vs gamma = {slope_g}");
    println!(
        "PASS criterion 10: critical scaling sum grows as N^2/gamma^2 \
         (slope vs N = {slope_n:.3}, slope vs gamma = {slope_g:.3})"
    );
}

#[test]
fn criterion_11_performance_and_jobs_determinism() {
    // Determinism: the same slice of the workload on 1 and 3 workers.
    let mut cfg = RunConfig {
        n_sites: 1244,
        g: 0.1,
        total_time: 10.0,
        steps: 4096,
        grid: Some(GridSpec::parse("lambda:0.9:1.1:6").unwrap()),
        gamma_list: vec![0.2, 1.0],
        jobs: 1,
        ..RunConfig::default()
    };
    let serial = run_phase_sweep(&cfg).unwrap();
    cfg.jobs = 3;
    let parallel = run_phase_sweep(&cfg).unwrap();
    for (a, b) in serial.rows.iter().zip(parallel.rows.iter()) {
        assert_eq!(
            a.phi_g.to_bits(),
            b.phi_g.to_bits(),
            "thread count changed a row"
        );
        assert_eq!(a.min_echo.to_bits(), b.min_echo.to_bits());
    }

    // Throughput: the full four-gamma, 300-point scan at N = 1244.
    let cfg = RunConfig {
        n_sites: 1244,
        g: 0.1,
        total_time: 10.0,
        steps: 4096,
        grid: Some(GridSpec::parse("lambda:-3:3:300").unwrap()),
        gamma_list: vec![0.2, 0.5, 0.8, 1.0],
        jobs: 0,
        ..RunConfig::default()
    };
    let start = Instant::now();
    let outcome = run_phase_sweep(&cfg).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    assert_eq!(outcome.rows.len(), 1200);
    assert!(elapsed < 600.0, "scan took {elapsed:.0}s");
    println!(
        "PASS criterion 11: 4 x 300-point scan at N = 1244 in {elapsed:.1}s \
         (< 600s); rows bit-identical across --jobs 1/3"
    );
}

#[test]
fn criterion_12_self_convergence() {
    let mut worst = 0.0f64;
    for lambda in [0.8, 1.0, 1.3] {
        let params = ChainParams::new(400, lambda, 1.0, 0.1, 0.0).unwrap();
        let table = build_mode_table(&params).unwrap();
        let build = |steps: usize| {
            let opts = BuildOptions::new(10.0, steps)
                .unwrap()
                .with_max_samples(2 * steps + 1);
            build_trajectory_with(&table, FRAC_PI_4, &opts).unwrap()
        };
        let coarse = build(4096);
        let fine = build(8192);
        assert!(
            !coarse.collapse,
            "lambda = {lambda} collapsed; not covered here"
        );
        let a = geometric_phase(&coarse).unwrap().phi_g;
        let b = geometric_phase(&fine).unwrap().phi_g;
        worst = worst.max(circ(a, b));
    }
    assert!(worst < 1e-6, "worst grid shift {worst:.3e}");
    println!(
        "PASS criterion 12: doubling the time grid moves the phase by at \
         most {worst:.3e} (< 1e-6) on non-collapsed trajectories"
    );
}
