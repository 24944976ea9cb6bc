//! Dissipative channel: qubit coupled through an operator that commutes
//! with the many-body Hamiltonian.
//!
//! The chain then stays in whichever eigenstate |E_n> it occupies, while the
//! qubit sees a level-dependent Hamiltonian
//!
//! ```text
//! H_n = E_n I + Delta sx + g E_n (cos(2 gm) sz + sin(2 gm) sy)
//! ```
//!
//! with g = sqrt(g_z^2 + g_y^2) and mixing angle gm (cos 2gm = g_z / g).
//! Each level evolves unitarily with frequency Omega_n = sqrt(g^2 E_n^2 +
//! Delta^2); a chain prepared in a superposition sum_n c_n |E_n> drives the
//! qubit through the convex mixture sum_n |c_n|^2 U_n rho U_n^dagger, which
//! is where the spectrum - and its critical behavior - imprints on the
//! qubit. A single-level ensemble keeps the evolution unitary and carries no
//! spectral signal.

use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Float;

use crate::chain::ModeTable;
use crate::mat2::Mat2;
use crate::qubit::QubitDensity;
use crate::trajectory::{build_adaptive, BuildOptions, SamplePoint, Trajectory};
use crate::Error;

/// Coherence magnitude below which the dissipative azimuth is unreliable.
const TRANSVERSE_FLOOR: f64 = 1e-9;

/// Qubit gap and coupling components of the dissipative model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissipativeParams {
    /// Qubit gap Delta (coefficient of sigma_x).
    pub delta: f64,
    pub g_z: f64,
    pub g_y: f64,
    /// Total coupling sqrt(g_z^2 + g_y^2).
    pub g: f64,
    /// Mixing angle: cos(2 gamma_mix) = g_z / g, sin(2 gamma_mix) = g_y / g.
    pub gamma_mix: f64,
}

impl DissipativeParams {
    pub fn new(delta: f64, g_z: f64, g_y: f64) -> Result<Self, Error> {
        if !(delta.is_finite() && g_z.is_finite() && g_y.is_finite()) {
            return Err(Error::InvalidParams("all parameters must be finite"));
        }
        let g = g_z.hypot(g_y);
        let gamma_mix = 0.5 * f64::atan2(g_y, g_z);
        Ok(Self {
            delta,
            g_z,
            g_y,
            g,
            gamma_mix,
        })
    }
}

/// Energy levels with occupation weights |c_n|^2.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEnsemble {
    /// (energy, weight) pairs; weights sum to 1.
    pub levels: Vec<(f64, f64)>,
}

impl SpectrumEnsemble {
    pub fn new(levels: Vec<(f64, f64)>) -> Result<Self, Error> {
        if levels.is_empty() {
            return Err(Error::InvalidEnsemble("at least one level is required"));
        }
        let mut sum = 0.0;
        for &(e, p) in &levels {
            if !e.is_finite() || !p.is_finite() {
                return Err(Error::InvalidEnsemble("entries must be finite"));
            }
            if p < 0.0 {
                return Err(Error::InvalidEnsemble("weights must be non-negative"));
            }
            sum += p;
        }
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidEnsemble("weights must sum to 1"));
        }
        for i in 0..levels.len() {
            for j in (i + 1)..levels.len() {
                let scale = levels[i].0.abs().max(levels[j].0.abs()).max(1.0);
                if (levels[i].0 - levels[j].0).abs() <= 1e-12 * scale {
                    return Err(Error::InvalidEnsemble("energies must be nondegenerate"));
                }
            }
        }
        Ok(Self { levels })
    }

    /// Normalizing constructor: rescales raw weights to sum to 1.
    pub fn from_weights(levels: Vec<(f64, f64)>) -> Result<Self, Error> {
        let total: f64 = levels.iter().map(|&(_, p)| p).sum();
        if total.is_nan() || total <= 0.0 {
            return Err(Error::InvalidEnsemble("total weight must be positive"));
        }
        Self::new(levels.into_iter().map(|(e, p)| (e, p / total)).collect())
    }

    /// Build an ensemble from chain eigenenergies sum_k omega_k (n_k - 1/2).
    ///
    /// Each excitation set lists the mode indices k whose quasiparticles are
    /// occupied (an empty set is the ground state); paired modes count both
    /// +k and -k at the same frequency, so listing both excites both.
    /// Weights are normalized.
    pub fn from_chain_excitations(
        table: &ModeTable,
        sets: &[(&[i64], f64)],
    ) -> Result<Self, Error> {
        let n = table.params.n_sites as i64;
        let omega_of = |k: i64| -> Result<f64, Error> {
            if k == 0 {
                Ok(table.unpaired[0].omega_base)
            } else if k == -n / 2 {
                Ok(table.unpaired[1].omega_base)
            } else if k.abs() < n / 2 {
                Ok(table.paired[(k.abs() - 1) as usize].omega_base)
            } else {
                Err(Error::InvalidParams("mode index outside the grid"))
            }
        };
        // Ground energy: -1/2 per mode over the full grid of N modes.
        let mut ground = -0.5 * (table.unpaired[0].omega_base + table.unpaired[1].omega_base);
        for r in &table.paired {
            ground -= r.omega_base;
        }
        let mut levels = Vec::with_capacity(sets.len());
        for (set, weight) in sets {
            let mut e = ground;
            for &k in set.iter() {
                e += omega_of(k)?;
            }
            levels.push((e, *weight));
        }
        Self::from_weights(levels)
    }
}

/// Closed-form unitary e^{-i H_n t} for one chain level.
pub fn qubit_propagator(energy: f64, p: &DissipativeParams, t: f64) -> Mat2 {
    let ax = p.delta;
    let ay = p.g * energy * (2.0 * p.gamma_mix).sin();
    let az = p.g * energy * (2.0 * p.gamma_mix).cos();
    let big_omega = (ax * ax + ay * ay + az * az).sqrt();
    let phase = Complex64::new(0.0, -energy * t).exp();
    if big_omega * t == 0.0 {
        return Mat2::identity().scale(phase);
    }
    let (s, c) = (big_omega * t).sin_cos();
    let f = Complex64::new(0.0, -s / big_omega);
    let u = Mat2([
        [Complex64::new(c, 0.0) + f * az, f * Complex64::new(ax, -ay)],
        [f * Complex64::new(ax, ay), Complex64::new(c, 0.0) - f * az],
    ]);
    u.scale(phase)
}

fn density_as_mat(rho: &QubitDensity) -> Mat2 {
    Mat2([
        [Complex64::new(rho.rho11, 0.0), rho.rho12],
        [rho.rho12.conj(), Complex64::new(rho.rho22, 0.0)],
    ])
}

/// Mixed-unitary evolution sum_n p_n U_n rho U_n^dagger.
///
/// Levels are combined in storage order, so the result is bitwise
/// deterministic.
pub fn evolve_mixed(
    ens: &SpectrumEnsemble,
    rho0: &QubitDensity,
    p: &DissipativeParams,
    t: f64,
) -> QubitDensity {
    let rho_mat = density_as_mat(rho0);
    let mut acc = Mat2::zero();
    for &(energy, weight) in &ens.levels {
        let u = qubit_propagator(energy, p, t);
        let term = u.mul(&rho_mat).mul(&u.adjoint());
        acc = acc.add(&term.scale(Complex64::new(weight, 0.0)));
    }
    QubitDensity {
        rho11: acc.0[0][0].re,
        rho22: acc.0[1][1].re,
        rho12: 0.5 * (acc.0[0][1] + acc.0[1][0].conj()),
    }
}

/// Adaptive trajectory of the dissipative channel.
///
/// The echo column carries the purity proxy 2 Tr(rho^2) - 1.
pub fn dissipative_trajectory(
    ens: &SpectrumEnsemble,
    rho0: &QubitDensity,
    p: &DissipativeParams,
    total_time: f64,
    initial_steps: usize,
) -> Result<Trajectory, Error> {
    dissipative_trajectory_with(ens, rho0, p, &BuildOptions::new(total_time, initial_steps)?)
}

/// As [`dissipative_trajectory`] with explicit grid options.
pub fn dissipative_trajectory_with(
    ens: &SpectrumEnsemble,
    rho0: &QubitDensity,
    p: &DissipativeParams,
    opts: &BuildOptions,
) -> Result<Trajectory, Error> {
    let floor = TRANSVERSE_FLOOR.max(1e-6 * rho0.rho12.norm());
    let sampler = |t: f64| {
        let state = evolve_mixed(ens, rho0, p, t);
        let azimuth = (state.rho12.norm() >= floor).then(|| state.rho12.arg());
        SamplePoint {
            state,
            echo: 2.0 * state.purity() - 1.0,
            azimuth,
        }
    };
    build_adaptive(sampler, opts)
}
