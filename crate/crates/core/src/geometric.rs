//! Geometric phase of a non-unitary qubit trajectory.
//!
//! For a density-matrix history rho(t) over [0, T] the geometric phase is
//!
//! ```text
//! Phi_g = arg( sum_k sqrt(eps_k(0) eps_k(T)) <v_k(0)|v_k(T)>
//!              exp(-int_0^T <v_k|d/dt v_k> dt) )
//! ```
//!
//! summed over the eigenbranches of rho. For a qubit,
//!
//! ```text
//! eps_pm  = 1/2 +- 1/2 sqrt((rho11 - rho22)^2 + 4 |rho12|^2)
//! v_plus  = (cos(alpha/2) e^{-i phi}, sin(alpha/2))
//! ```
//!
//! with the Bloch polar angle alpha and the coherence azimuth
//! tan(phi) = Im(rho12)/Re(rho12). In this gauge the transport exponent of
//! the + branch is +i int cos^2(alpha/2) dphi, evaluated by trapezoid on the
//! unwrapped azimuth samples; the - branch carries sin^2(alpha/2) and its
//! weight vanishes for trajectories that start pure. The result is gauge
//! invariant and reduces to the Berry phase -pi (1 - cos alpha) on closed
//! pure precession loops.

use num_complex::Complex64;
use num_traits::Float;

use crate::qubit::QubitDensity;
use crate::trajectory::Trajectory;
use crate::{principal_angle, Error};

/// Transverse magnitude below which the azimuth carries no information.
const AZIMUTH_EPS: f64 = 1e-14;

/// Eigen-decomposition of one qubit density matrix, azimuth tracked
/// continuously across a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenFrame {
    pub eps_plus: f64,
    pub eps_minus: f64,
    /// Bloch polar angle of the + eigenvector, in [0, pi].
    pub alpha: f64,
    /// Unwrapped coherence azimuth.
    pub phi: f64,
}

/// Decompose `rho`; `previous` selects the azimuth branch continuous with an
/// earlier frame (|delta phi| < pi) and supplies the held azimuth when the
/// coherence vanishes.
pub fn eigenframe(rho: &QubitDensity, previous: Option<&EigenFrame>) -> Result<EigenFrame, Error> {
    let rz = rho.rho11 - rho.rho22;
    let transverse = 2.0 * rho.rho12.norm();
    let root = (rz * rz + transverse * transverse).sqrt();
    let eps_plus = 0.5 * (1.0 + root);
    let eps_minus = 0.5 * (1.0 - root);
    let alpha = f64::atan2(transverse, rz);
    let phi = if rho.rho12.norm() >= AZIMUTH_EPS {
        let raw = rho.rho12.arg();
        match previous {
            Some(prev) => {
                let turns = ((prev.phi - raw) / core::f64::consts::TAU).round();
                raw + core::f64::consts::TAU * turns
            }
            None => raw,
        }
    } else if let Some(prev) = previous {
        prev.phi
    } else if rz.abs() < AZIMUTH_EPS {
        // Fully degenerate rho = I/2: no direction is preferred.
        return Err(Error::AzimuthUndefined);
    } else {
        0.0
    };
    Ok(EigenFrame {
        eps_plus,
        eps_minus,
        alpha,
        phi,
    })
}

/// Geometric phase plus its diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct GeomPhaseResult {
    /// Principal value in (-pi, pi].
    pub phi_g: f64,
    /// Transport integral of the + branch, int cos^2(alpha/2) dphi.
    pub integral_term: f64,
    /// arg <v_plus(0)|v_plus(T)>.
    pub overlap_arg: f64,
    /// sqrt(eps_plus(0) eps_plus(T)).
    pub eps_product_root: f64,
    /// Inherited from the trajectory: the azimuth was held through an echo
    /// collapse, so the value is unreliable.
    pub collapse: bool,
    pub steps_used: usize,
}

fn branch_eps(rho: &QubitDensity) -> (f64, f64) {
    let rz = rho.rho11 - rho.rho22;
    let transverse = 2.0 * rho.rho12.norm();
    let root = (rz * rz + transverse * transverse).sqrt();
    (0.5 * (1.0 + root), 0.5 * (1.0 - root))
}

/// Geometric phase of a sampled trajectory.
///
/// Both eigenbranches are summed; branches with zero initial weight drop out
/// automatically, so trajectories that start pure use only the + branch.
/// A collapse flag on the trajectory is carried through, not suppressed.
pub fn geometric_phase(traj: &Trajectory) -> Result<GeomPhaseResult, Error> {
    let n = traj.times.len();
    if n < 2 {
        return Err(Error::InvalidParams("trajectory needs at least 2 samples"));
    }
    let first = &traj.states[0];
    let last = &traj.states[n - 1];
    let (eps_p0, eps_m0) = branch_eps(first);
    let (eps_pt, eps_mt) = branch_eps(last);

    let alpha0 = traj.alpha_at(0);
    let alpha_t = traj.alpha_at(n - 1);
    let dphi = traj.azimuth[n - 1] - traj.azimuth[0];
    let integral_plus = traj.transport_integral();
    let integral_minus = dphi - integral_plus;

    let phase_diff = Complex64::new(0.0, traj.azimuth[0] - traj.azimuth[n - 1]).exp();
    let (h0, h1) = ((alpha0 / 2.0).sin_cos(), (alpha_t / 2.0).sin_cos());
    let overlap_plus = phase_diff * (h0.1 * h1.1) + h0.0 * h1.0;
    let overlap_minus = phase_diff * (h0.0 * h1.0) + h0.1 * h1.1;

    let w_plus = (eps_p0 * eps_pt).max(0.0).sqrt();
    let w_minus = (eps_m0 * eps_mt).max(0.0).sqrt();
    let total = w_plus * overlap_plus * Complex64::new(0.0, integral_plus).exp()
        + w_minus * overlap_minus * Complex64::new(0.0, integral_minus).exp();

    Ok(GeomPhaseResult {
        phi_g: principal_angle(total.arg()),
        integral_term: integral_plus,
        overlap_arg: overlap_plus.arg(),
        eps_product_root: w_plus,
        collapse: traj.collapse,
        steps_used: n,
    })
}

fn branch_vectors(traj: &Trajectory, i: usize) -> ([Complex64; 2], [Complex64; 2]) {
    let (s, c) = (traj.alpha_at(i) / 2.0).sin_cos();
    let phase = Complex64::new(0.0, -traj.azimuth[i]).exp();
    (
        [phase * c, Complex64::new(s, 0.0)],
        [phase * -s, Complex64::new(c, 0.0)],
    )
}

fn inner(a: &[Complex64; 2], b: &[Complex64; 2]) -> Complex64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

fn unit(z: Complex64) -> Complex64 {
    let n = z.norm();
    if n == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        z / n
    }
}

/// Geometric phase by discrete parallel transport (Pancharatnam products)
/// over explicit eigenvector samples, optionally re-gauged by e^{i chi(t)}.
///
/// Independent of the trapezoid route in [`geometric_phase`]; the link
/// products make gauge invariance exact up to rounding, which is what
/// [`gauge_check`] exercises.
fn discrete_phase(traj: &Trajectory, chi: impl Fn(f64) -> f64) -> Result<f64, Error> {
    let n = traj.times.len();
    if n < 2 {
        return Err(Error::InvalidParams("trajectory needs at least 2 samples"));
    }
    let gauge = |i: usize| Complex64::new(0.0, chi(traj.times[i])).exp();
    let (eps_p0, eps_m0) = branch_eps(&traj.states[0]);
    let (eps_pt, eps_mt) = branch_eps(&traj.states[n - 1]);

    let mut link_plus = Complex64::new(1.0, 0.0);
    let mut link_minus = Complex64::new(1.0, 0.0);
    let (mut prev_plus, mut prev_minus) = branch_vectors(traj, 0);
    let scale0 = gauge(0);
    prev_plus = [prev_plus[0] * scale0, prev_plus[1] * scale0];
    prev_minus = [prev_minus[0] * scale0, prev_minus[1] * scale0];
    let first_plus = prev_plus;
    let first_minus = prev_minus;

    for i in 1..n {
        let (mut vp, mut vm) = branch_vectors(traj, i);
        let scale = gauge(i);
        vp = [vp[0] * scale, vp[1] * scale];
        vm = [vm[0] * scale, vm[1] * scale];
        link_plus *= unit(inner(&vp, &prev_plus));
        link_minus *= unit(inner(&vm, &prev_minus));
        prev_plus = vp;
        prev_minus = vm;
    }

    let w_plus = (eps_p0 * eps_pt).max(0.0).sqrt();
    let w_minus = (eps_m0 * eps_mt).max(0.0).sqrt();
    let total = w_plus * inner(&first_plus, &prev_plus) * link_plus
        + w_minus * inner(&first_minus, &prev_minus) * link_minus;
    Ok(principal_angle(total.arg()))
}

/// Discrete-transport evaluation of the geometric phase (no re-gauging).
pub fn geometric_phase_discrete(traj: &Trajectory) -> Result<f64, Error> {
    discrete_phase(traj, |_| 0.0)
}

/// Recompute the phase with every eigenvector multiplied by e^{i chi(t)} and
/// return the circular distance to the unmodified value. Gauge invariance
/// bounds it near rounding level.
pub fn gauge_check(traj: &Trajectory, chi: impl Fn(f64) -> f64) -> Result<f64, Error> {
    let base = discrete_phase(traj, |_| 0.0)?;
    let gauged = discrete_phase(traj, chi)?;
    Ok(principal_angle(gauged - base).abs())
}
