//! Dephasing channel: qubit coupled through the transverse field.
//!
//! The coupling commutes with the qubit Hamiltonian, so the populations are
//! frozen and the coherence is multiplied by a Loschmidt-echo factor F(t).
//! Each momentum mode contributes one bracket built from the Bogoliubov
//! angles of the three effective fields (base, up-shifted, down-shifted):
//!
//! ```text
//! B_k(t) = 1 - (1 - e^{+i w_up t}) su^2 - (1 - e^{-i w_dn t}) sd^2
//!            + (1 - e^{+i w_up t}) (1 - e^{-i w_dn t}) su sd x
//!
//! su = sin((th0 - th_up)/2),  sd = sin((th0 - th_dn)/2),
//! x  = cos((th_up - th_dn)/2)
//! ```
//!
//! and F(t) is the product over the paired modes k = 1 .. N/2-1 plus the two
//! unpaired modes (a = 0, -pi), whose brackets reduce to pure phases. Each
//! bracket is the overlap of the mode's pair-subspace ground state evolved
//! under the two shifted Hamiltonians (checked against `oracle`), so
//! |F| <= 1, F(0) = 1, and F = 1 identically when g = 0. Near the critical
//! field the low-momentum angles differ strongly between the shifted fields
//! and the echo collapses.

use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Float;

use crate::chain::{ModeRecord, ModeTable};
use crate::qubit::QubitDensity;
use crate::trajectory::{build_adaptive, BuildOptions, SamplePoint, Trajectory};
use crate::Error;

/// Echo modulus below which the coherence azimuth is unreliable.
pub const COLLAPSE_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy)]
struct ModeFactor {
    omega_up: f64,
    omega_down: f64,
    s_up: f64,
    s_down: f64,
    /// su * sd * cos((th_up - th_dn)/2), the interference weight.
    cross: f64,
}

impl ModeFactor {
    fn new(r: &ModeRecord) -> Self {
        let s_up = ((r.theta_base - r.theta_up) / 2.0).sin();
        let s_down = ((r.theta_base - r.theta_down) / 2.0).sin();
        let cross = s_up * s_down * ((r.theta_up - r.theta_down) / 2.0).cos();
        Self {
            omega_up: r.omega_up,
            omega_down: r.omega_down,
            s_up,
            s_down,
            cross,
        }
    }

    fn bracket(&self, t: f64) -> Complex64 {
        let (su, cu) = (self.omega_up * t).sin_cos();
        let (sd, cd) = (self.omega_down * t).sin_cos();
        // 1 - e^{+i w_up t} and 1 - e^{-i w_dn t}
        let eu = Complex64::new(1.0 - cu, -su);
        let ed = Complex64::new(1.0 - cd, sd);
        Complex64::new(1.0, 0.0) - eu * (self.s_up * self.s_up) - ed * (self.s_down * self.s_down)
            + eu * ed * self.cross
    }

    /// Same-field bracket (both branches at `up`): multiplies the diagonal
    /// density-matrix entries and cancels to 1 identically.
    fn diagonal_bracket(&self, t: f64) -> Complex64 {
        let (s, c) = (self.omega_up * t).sin_cos();
        let e_pos = Complex64::new(1.0 - c, -s);
        let e_neg = Complex64::new(1.0 - c, s);
        let s2 = self.s_up * self.s_up;
        Complex64::new(1.0, 0.0) - e_pos * s2 - e_neg * s2 + e_pos * e_neg * s2
    }
}

/// Precomputed per-mode constants for fast repeated evaluation of F(t).
#[derive(Debug, Clone)]
pub struct DephasingEvolver {
    factors: Vec<ModeFactor>,
    mu: f64,
    degenerate: bool,
}

impl DephasingEvolver {
    pub fn new(table: &ModeTable) -> Self {
        Self {
            factors: table.records().map(ModeFactor::new).collect(),
            mu: table.params.mu,
            degenerate: table.has_degenerate(),
        }
    }

    /// The decoherence factor F(t); modes are multiplied in the table's
    /// deterministic order.
    pub fn factor(&self, t: f64) -> Complex64 {
        let mut f = Complex64::new(1.0, 0.0);
        for m in &self.factors {
            f *= m.bracket(t);
        }
        f
    }

    /// The factor multiplying the frozen diagonal entries; identically 1.
    pub fn diagonal_factor(&self, t: f64) -> Complex64 {
        let mut f = Complex64::new(1.0, 0.0);
        for m in &self.factors {
            f *= m.diagonal_bracket(t);
        }
        f
    }

    /// Reduced density matrix at time t for the initial superposition angle
    /// `theta_q`: populations frozen, coherence cos sin * e^{-i mu t} F(t).
    pub fn state(&self, theta_q: f64, t: f64) -> QubitDensity {
        let (s, c) = theta_q.sin_cos();
        let coherence = self.coherence_phase_factor(t);
        QubitDensity {
            rho11: c * c,
            rho22: s * s,
            rho12: Complex64::new(c * s, 0.0) * coherence,
        }
    }

    /// e^{-i mu t} F(t): the full multiplier on the coherence.
    fn coherence_phase_factor(&self, t: f64) -> Complex64 {
        Complex64::new(0.0, -self.mu * t).exp() * self.factor(t)
    }

    pub fn has_degenerate(&self) -> bool {
        self.degenerate
    }
}

/// One-shot decoherence factor. For many times at fixed parameters prefer
/// [`DephasingEvolver`].
pub fn decoherence_factor(table: &ModeTable, t: f64) -> Complex64 {
    DephasingEvolver::new(table).factor(t)
}

/// One-shot qubit state under dephasing.
pub fn evolve(table: &ModeTable, theta_q: f64, t: f64) -> QubitDensity {
    DephasingEvolver::new(table).state(theta_q, t)
}

/// Build an adaptively sampled dephasing trajectory over [0, T].
pub fn build_trajectory(
    table: &ModeTable,
    theta_q: f64,
    total_time: f64,
    initial_steps: usize,
) -> Result<Trajectory, Error> {
    build_trajectory_with(
        table,
        theta_q,
        &BuildOptions::new(total_time, initial_steps)?,
    )
}

/// As [`build_trajectory`] with explicit grid options.
pub fn build_trajectory_with(
    table: &ModeTable,
    theta_q: f64,
    opts: &BuildOptions,
) -> Result<Trajectory, Error> {
    let evolver = DephasingEvolver::new(table);
    let (s, c) = theta_q.sin_cos();
    let coherence_scale = c * s;
    let sampler = |t: f64| {
        let phase_factor = evolver.coherence_phase_factor(t);
        let echo = evolver.factor(t).norm();
        let state = QubitDensity {
            rho11: c * c,
            rho22: s * s,
            rho12: Complex64::new(coherence_scale, 0.0) * phase_factor,
        };
        // The azimuth tracks arg(e^{-i mu t} F); it stays defined even for
        // theta_q = 0 (no coherence), where it is pure gauge.
        let azimuth = (echo >= COLLAPSE_THRESHOLD).then(|| phase_factor.arg());
        SamplePoint {
            state,
            echo,
            azimuth,
        }
    };
    let mut traj = build_adaptive(sampler, opts)?;
    traj.degenerate = evolver.has_degenerate();
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{build_mode_table, ChainParams};
    use core::f64::consts::FRAC_PI_4;

    fn table(n: usize, lambda: f64, gamma: f64, g: f64, mu: f64) -> ModeTable {
        build_mode_table(&ChainParams::new(n, lambda, gamma, g, mu).unwrap()).unwrap()
    }

    #[test]
    fn factor_is_one_at_t_zero() {
        let t = table(200, 0.5, 1.0, 0.1, 0.0);
        let f = decoherence_factor(&t, 0.0);
        assert!((f - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn factor_is_one_for_zero_coupling() {
        let t = table(200, 0.5, 1.0, 0.0, 0.0);
        for time in [0.3, 2.0, 17.5] {
            let f = decoherence_factor(&t, time);
            assert!((f - Complex64::new(1.0, 0.0)).norm() < 1e-12, "t = {time}");
        }
    }

    #[test]
    fn diagonal_factor_is_identity() {
        let t = table(128, 0.9, 0.8, 0.2, 0.0);
        let ev = DephasingEvolver::new(&t);
        for time in [0.7, 5.0, 13.1] {
            let f = ev.diagonal_factor(time);
            assert!((f - Complex64::new(1.0, 0.0)).norm() < 1e-12, "t = {time}");
        }
    }

    #[test]
    fn gamma_zero_outside_band_is_exactly_one() {
        // With gamma = 0 and every effective field above the band edge the
        // three mixing angles coincide mode by mode, so F = 1 exactly.
        for lambda in [1.2, 1.5, 3.0] {
            let t = table(400, lambda, 0.0, 0.1, 0.0);
            for time in [0.9, 4.2, 11.0, 19.7] {
                let f = decoherence_factor(&t, time);
                assert!(
                    (f - Complex64::new(1.0, 0.0)).norm() < 1e-12,
                    "lambda = {lambda}, t = {time}, F = {f}"
                );
            }
        }
    }

    #[test]
    fn gamma_zero_inside_band_is_unimodular_but_not_one() {
        // Modes whose cos a falls between the shifted fields contribute pure
        // phases; |F| = 1 but F != 1.
        let t = table(400, 0.5, 0.0, 0.1, 0.0);
        let f = decoherence_factor(&t, 4.7);
        assert!((f.norm() - 1.0).abs() < 1e-12);
        assert!((f - Complex64::new(1.0, 0.0)).norm() > 1e-3);
    }

    #[test]
    fn factor_matches_pair_oracle() {
        let p = ChainParams::new(200, 0.5, 1.0, 0.1, 0.0).unwrap();
        let t = build_mode_table(&p).unwrap();
        let closed = decoherence_factor(&t, 1.7);
        let oracle = crate::oracle::pair_evolution_factor(&p, 1.7).unwrap();
        assert!(
            (closed - oracle).norm() < 1e-9,
            "closed {closed} vs oracle {oracle}"
        );
    }

    #[test]
    fn populations_frozen_and_coherence_scaled() {
        let t = table(100, 0.8, 0.9, 0.15, 0.0);
        let rho0 = evolve(&t, FRAC_PI_4, 0.0);
        assert!((rho0.rho12.re - 0.5).abs() < 1e-15);
        let rho = evolve(&t, FRAC_PI_4, 3.3);
        assert!((rho.rho11 - 0.5).abs() < 1e-15);
        assert!((rho.rho22 - 0.5).abs() < 1e-15);
        let f = decoherence_factor(&t, 3.3);
        assert!((rho.rho12.norm() - 0.5 * f.norm()).abs() < 1e-13);
        assert!(rho.constraint_error() < 1e-12);
    }

    #[test]
    fn theta_zero_has_no_coherence() {
        let t = table(64, 1.1, 0.5, 0.1, 0.3);
        for time in [0.0, 1.0, 6.6] {
            let rho = evolve(&t, 0.0, time);
            assert_eq!(rho.rho11, 1.0);
            assert_eq!(rho.rho12, Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn free_phase_enters_coherence() {
        let mu = 0.7;
        let t = table(64, 2.5, 0.0, 0.0, mu);
        let rho = evolve(&t, FRAC_PI_4, 2.0);
        // g = 0: F = 1, so the azimuth is exactly -mu t.
        assert!((rho.rho12.arg() - crate::principal_angle(-mu * 2.0)).abs() < 1e-12);
    }

    #[test]
    fn trajectory_unwraps_free_precession() {
        let mu = 2.2;
        let t = table(64, 2.5, 1.0, 0.0, mu);
        let traj = build_trajectory(&t, FRAC_PI_4, 10.0, 64).unwrap();
        assert!(!traj.collapse);
        for (time, phi) in traj.times.iter().zip(traj.azimuth.iter()) {
            assert!((phi - (-mu * time)).abs() < 1e-9, "t = {time}: {phi}");
        }
        for e in &traj.echo_modulus {
            assert!((e - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn trajectory_initial_state() {
        let t = table(100, 0.95, 1.0, 0.1, 0.0);
        let traj = build_trajectory(&t, FRAC_PI_4, 5.0, 32).unwrap();
        assert_eq!(traj.times[0], 0.0);
        assert!((traj.states[0].rho11 - 0.5).abs() < 1e-15);
        assert!((traj.states[0].rho12.re - 0.5).abs() < 1e-15);
        assert!(traj.azimuth[0].abs() < 1e-15);
    }

    #[test]
    fn echo_bounded_on_random_parameters() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let lambda = rng.gen_range(-4.0..4.0);
            let gamma = rng.gen_range(0.0..1.0);
            let g = rng.gen_range(0.0..0.3);
            let time = rng.gen_range(0.0..20.0);
            let t = table(64, lambda, gamma, g, 0.0);
            let f = decoherence_factor(&t, time);
            assert!(
                f.norm() <= 1.0 + 1e-12,
                "|F| = {} at lambda={lambda} gamma={gamma} g={g} t={time}",
                f.norm()
            );
        }
    }
}
