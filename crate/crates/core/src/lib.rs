//! Quantum-criticality probe kernels: an auxiliary qubit coupled to the
//! one-dimensional XY spin chain.
//!
//! The chain is solved exactly through its free-fermion modes
//! ([`chain`]). A qubit coupled through the transverse field dephases with a
//! closed-form Loschmidt-echo factor ([`dephasing`]); a qubit coupled through
//! an operator commuting with the chain Hamiltonian evolves as a mixture of
//! unitaries ([`dissipative`]). Either channel produces a density-matrix
//! [`trajectory`], from which the non-unitary geometric phase is extracted
//! ([`geometric`]). Near the chain's critical field the echo collapses and
//! the geometric phase changes sharply, so the qubit acts as a probe of the
//! quantum phase transition.
//!
//! Brute-force cross-checks (per-mode matrix exponentials and a dense
//! Fock-space evolution) live in [`oracle`].
//!
//! The crate is `no_std` (with `alloc`); all routines are pure and
//! deterministic.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod chain;
pub mod dephasing;
pub mod dissipative;
pub mod geometric;
pub mod mat2;
pub mod oracle;
pub mod qubit;
pub mod trajectory;

use core::fmt;

/// Errors shared across the kernels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A constructor or operation precondition was violated.
    InvalidParams(&'static str),
    /// A fermionic mode is gapless; the requested quantity diverges or is
    /// convention-dependent there.
    DegenerateMode,
    /// A matrix expected to be Hermitian was not (within 1e-12).
    NotHermitian,
    /// The dense Fock-space oracle only supports small chains.
    DimensionTooLarge,
    /// A spectral ensemble violated its invariants.
    InvalidEnsemble(&'static str),
    /// The qubit azimuth is undefined (no transverse component and a fully
    /// degenerate density matrix).
    AzimuthUndefined,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            Error::DegenerateMode => write!(f, "degenerate (gapless) fermionic mode"),
            Error::NotHermitian => write!(f, "matrix is not Hermitian"),
            Error::DimensionTooLarge => write!(f, "chain too large for the dense oracle (N > 12)"),
            Error::InvalidEnsemble(msg) => write!(f, "invalid ensemble: {msg}"),
            Error::AzimuthUndefined => write!(f, "qubit azimuth undefined"),
        }
    }
}

impl core::error::Error for Error {}

/// Reduce an angle to the principal branch (-pi, pi].
pub fn principal_angle(x: f64) -> f64 {
    use core::f64::consts::{PI, TAU};
    let mut y = x % TAU;
    if y > PI {
        y -= TAU;
    } else if y <= -PI {
        y += TAU;
    }
    y
}
