//! Qubit reduced density matrix.

use num_complex::Complex64;
use num_traits::Float;

/// 2x2 Hermitian unit-trace density matrix of the qubit.
///
/// Only the independent entries are stored; rho21 is implied as the
/// conjugate of `rho12`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitDensity {
    /// Population of the upper level, in [0, 1].
    pub rho11: f64,
    /// Population of the lower level, in [0, 1].
    pub rho22: f64,
    /// Coherence between the levels.
    pub rho12: Complex64,
}

impl QubitDensity {
    /// Pure superposition cos(theta)|up> + sin(theta)|down>.
    pub fn pure(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            rho11: c * c,
            rho22: s * s,
            rho12: Complex64::new(c * s, 0.0),
        }
    }

    /// The maximally mixed state I/2.
    pub fn maximally_mixed() -> Self {
        Self {
            rho11: 0.5,
            rho22: 0.5,
            rho12: Complex64::new(0.0, 0.0),
        }
    }

    /// Purity Tr(rho^2).
    pub fn purity(&self) -> f64 {
        self.rho11 * self.rho11 + self.rho22 * self.rho22 + 2.0 * self.rho12.norm_sqr()
    }

    /// Largest violation of the trace, range, and positivity constraints.
    pub fn constraint_error(&self) -> f64 {
        let trace = (self.rho11 + self.rho22 - 1.0).abs();
        let range = (-self.rho11)
            .max(self.rho11 - 1.0)
            .max(-self.rho22)
            .max(self.rho22 - 1.0);
        let positivity = self.rho12.norm_sqr() - self.rho11 * self.rho22;
        trace.max(range.max(0.0)).max(positivity.max(0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_4;

    #[test]
    fn pure_state_is_valid_and_pure() {
        let rho = QubitDensity::pure(FRAC_PI_4);
        assert!(rho.constraint_error() < 1e-15);
        assert!((rho.purity() - 1.0).abs() < 1e-15);
        assert!((rho.rho12.re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn mixed_state_purity() {
        assert!((QubitDensity::maximally_mixed().purity() - 0.5).abs() < 1e-15);
    }
}
