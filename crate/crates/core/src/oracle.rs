//! Brute-force references for the dephasing channel.
//!
//! The closed-form decoherence factor is a product over momentum pairs of a
//! trigonometric bracket. This module recomputes it without that algebra:
//!
//! - [`pair_evolution_factor`] evolves each (k, -k) pair subspace with exact
//!   2x2 matrix exponentials and multiplies the overlaps, checking the
//!   bracket's trigonometry;
//! - [`fock_evolution_factor`] assembles all pairs into one dense
//!   2^(N/2-1)-dimensional state and evolves it with a dense matrix
//!   exponential, checking the product factorization itself;
//! - [`expm_2x2`] is the exact axis-angle exponential both of them (and the
//!   dissipative channel tests) rely on.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Float;

use crate::chain::{dispersion, ChainParams};
use crate::mat2::Mat2;
use crate::Error;

/// Exact e^{-i H t} for a 2x2 Hermitian H via the axis-angle decomposition
/// H = c I + r . sigma.
pub fn expm_2x2(h: &Mat2, t: f64) -> Result<Mat2, Error> {
    if h.hermiticity_error() > 1e-12 {
        return Err(Error::NotHermitian);
    }
    let c = 0.5 * (h.0[0][0].re + h.0[1][1].re);
    let rz = 0.5 * (h.0[0][0].re - h.0[1][1].re);
    let rx = h.0[0][1].re;
    let ry = -h.0[0][1].im;
    let r = (rx * rx + ry * ry + rz * rz).sqrt();
    let phase = Complex64::new(0.0, -c * t).exp();
    if r * t == 0.0 {
        return Ok(Mat2::identity().scale(phase));
    }
    let (s, co) = (r * t).sin_cos();
    let i = Complex64::new(0.0, 1.0);
    let f = -i * (s / r);
    let u = Mat2([
        [
            Complex64::new(co, 0.0) + f * rz,
            f * Complex64::new(rx, -ry),
        ],
        [f * Complex64::new(rx, ry), Complex64::new(co, 0.0) - f * rz],
    ]);
    Ok(u.scale(phase))
}

/// Pair-subspace Hamiltonians for the three effective fields of one mode.
///
/// In the basis {vacuum, excited pair} the block for effective field L is
///
/// ```text
/// h(L) = [[ (w - eps)/2,  -delta/2 ],
///         [ -delta/2,     (w + eps)/2 ]]
/// ```
///
/// with eps = cos a - L, delta = gamma sin a, w = sqrt(eps^2 + delta^2).
/// The block is normal-ordered (ground level at 0, excited level at w) and
/// its ground state is (cos(theta/2), sin(theta/2)) for the mixing angle
/// theta = atan2(delta, eps), which ties the oracle to the spectrum module.
#[derive(Debug, Clone, Copy)]
pub struct PairBlock {
    pub momentum: f64,
    pub base: Mat2,
    pub up: Mat2,
    pub down: Mat2,
}

fn field_block(momentum: f64, lambda_eff: f64, gamma: f64) -> Mat2 {
    let (eps, omega) = dispersion(momentum, lambda_eff, gamma);
    let delta = gamma * momentum.sin();
    Mat2::real_symmetric(0.5 * (omega - eps), -0.5 * delta, 0.5 * (omega + eps))
}

impl PairBlock {
    pub fn new(momentum: f64, p: &ChainParams) -> Self {
        Self {
            momentum,
            base: field_block(momentum, p.lambda, p.gamma),
            up: field_block(momentum, p.lambda + p.g, p.gamma),
            down: field_block(momentum, p.lambda - p.g, p.gamma),
        }
    }

    /// Ground state of the base block, computed from the matrix itself
    /// (not from the closed-form angle). Normalized, largest component
    /// positive.
    pub fn ground_state(&self) -> [Complex64; 2] {
        let h = &self.base;
        let a = h.0[0][0].re;
        let b = h.0[0][1].re;
        let d = h.0[1][1].re;
        let c = 0.5 * (a + d);
        let r = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        let e_min = c - r;
        // (h - e_min I) v = 0; pick the better-conditioned row.
        let (mut v0, mut v1) = if (a - e_min).abs() >= (d - e_min).abs() {
            (-b, a - e_min)
        } else {
            (d - e_min, -b)
        };
        let norm = (v0 * v0 + v1 * v1).sqrt();
        if norm == 0.0 {
            // Degenerate block (r = 0): any vector is an eigenvector.
            return [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        }
        v0 /= norm;
        v1 /= norm;
        if (v0.abs() >= v1.abs() && v0 < 0.0) || (v1.abs() > v0.abs() && v1 < 0.0) {
            v0 = -v0;
            v1 = -v1;
        }
        [Complex64::new(v0, 0.0), Complex64::new(v1, 0.0)]
    }

    /// Echo factor of this mode: <G| e^{+i h_up t} e^{-i h_down t} |G>.
    pub fn echo_factor(&self, t: f64) -> Result<Complex64, Error> {
        let g = self.ground_state();
        let fwd = expm_2x2(&self.down, t)?.mul_vec(g);
        let bwd = expm_2x2(&self.up, t)?.mul_vec(g);
        Ok(bwd[0].conj() * fwd[0] + bwd[1].conj() * fwd[1])
    }
}

/// Momenta in the canonical evaluation order: paired modes k = 1 .. N/2-1,
/// then the unpaired a = 0 and a = -pi.
pub(crate) fn momentum_grid(n: usize) -> impl Iterator<Item = f64> {
    (1..n / 2)
        .map(move |k| core::f64::consts::TAU * k as f64 / n as f64)
        .chain([0.0, -core::f64::consts::PI])
}

/// Numeric echo over the whole chain: the product of per-mode pair-subspace
/// overlaps, each computed by exact 2x2 exponentials.
pub fn pair_evolution_factor(params: &ChainParams, t: f64) -> Result<Complex64, Error> {
    let mut f = Complex64::new(1.0, 0.0);
    for a in momentum_grid(params.n_sites) {
        f *= PairBlock::new(a, params).echo_factor(t)?;
    }
    Ok(f)
}

/// Dense-matrix echo for small chains (N <= 12).
///
/// All paired modes are assembled into one 2^(N/2-1)-dimensional space; the
/// two branch Hamiltonians are exponentiated as dense matrices, so no
/// per-pair factorization of the evolution is assumed. The two unpaired
/// modes enter through the same scalar factors as in
/// [`pair_evolution_factor`].
pub fn fock_evolution_factor(params: &ChainParams, t: f64) -> Result<Complex64, Error> {
    if params.n_sites > 12 {
        return Err(Error::DimensionTooLarge);
    }
    let pairs: Vec<PairBlock> = (1..params.n_sites / 2)
        .map(|k| {
            let a = core::f64::consts::TAU * k as f64 / params.n_sites as f64;
            PairBlock::new(a, params)
        })
        .collect();
    let m = pairs.len();
    let dim = 1usize << m;

    // Ground state as the assembled tensor product of pair ground states.
    let pair_grounds: Vec<[Complex64; 2]> = pairs.iter().map(|p| p.ground_state()).collect();
    let mut ground = vec![Complex64::new(0.0, 0.0); dim];
    for (idx, amp_out) in ground.iter_mut().enumerate() {
        let mut amp = Complex64::new(1.0, 0.0);
        for (p, g) in pair_grounds.iter().enumerate() {
            amp *= g[(idx >> p) & 1];
        }
        *amp_out = amp;
    }

    let h_up = assemble_dense(&pairs, m, |p| p.up);
    let h_down = assemble_dense(&pairs, m, |p| p.down);
    let psi_down = apply_expm_dense(&h_down, dim, t, &ground);
    let psi_up = apply_expm_dense(&h_up, dim, t, &ground);

    let mut f = Complex64::new(0.0, 0.0);
    for i in 0..dim {
        f += psi_up[i].conj() * psi_down[i];
    }

    for a in [0.0, -core::f64::consts::PI] {
        f *= PairBlock::new(a, params).echo_factor(t)?;
    }
    Ok(f)
}

fn assemble_dense(
    pairs: &[PairBlock],
    m: usize,
    pick: impl Fn(&PairBlock) -> Mat2,
) -> Vec<Complex64> {
    let dim = 1usize << m;
    let mut h = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (p, pair) in pairs.iter().enumerate() {
        let block = pick(pair);
        for col in 0..dim {
            let bit = (col >> p) & 1;
            for (new_bit, row_entry) in [(0usize, block.0[0][bit]), (1, block.0[1][bit])] {
                let row = (col & !(1 << p)) | (new_bit << p);
                h[row * dim + col] += row_entry;
            }
        }
    }
    h
}

/// psi(t) = e^{-i H t} psi via scaling-and-squaring with a Taylor kernel.
fn apply_expm_dense(h: &[Complex64], dim: usize, t: f64, psi: &[Complex64]) -> Vec<Complex64> {
    // -i H t
    let mut a = vec![Complex64::new(0.0, 0.0); dim * dim];
    let mit = Complex64::new(0.0, -t);
    let mut norm_inf = 0.0f64;
    for row in 0..dim {
        let mut row_sum = 0.0;
        for col in 0..dim {
            a[row * dim + col] = mit * h[row * dim + col];
            row_sum += a[row * dim + col].norm();
        }
        norm_inf = norm_inf.max(row_sum);
    }
    let mut squarings = 0u32;
    while norm_inf / (1u64 << squarings) as f64 > 0.5 {
        squarings += 1;
    }
    let scale = Complex64::new(1.0 / (1u64 << squarings) as f64, 0.0);
    for e in a.iter_mut() {
        *e *= scale;
    }

    // exp(a) by Taylor; with |a| <= 0.5 thirty terms are far below 1e-16.
    let mut exp_a = vec![Complex64::new(0.0, 0.0); dim * dim];
    let mut term = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        exp_a[i * dim + i] = Complex64::new(1.0, 0.0);
        term[i * dim + i] = Complex64::new(1.0, 0.0);
    }
    for n in 1..=30 {
        term = mat_mul(&term, &a, dim);
        let inv_n = Complex64::new(1.0 / n as f64, 0.0);
        for e in term.iter_mut() {
            *e *= inv_n;
        }
        for (acc, &x) in exp_a.iter_mut().zip(term.iter()) {
            *acc += x;
        }
    }
    for _ in 0..squarings {
        exp_a = mat_mul(&exp_a, &exp_a, dim);
    }

    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    for row in 0..dim {
        let mut acc = Complex64::new(0.0, 0.0);
        for col in 0..dim {
            acc += exp_a[row * dim + col] * psi[col];
        }
        out[row] = acc;
    }
    out
}

fn mat_mul(a: &[Complex64], b: &[Complex64], dim: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            let aik = a[i * dim + k];
            if aik.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..dim {
                out[i * dim + j] += aik * b[k * dim + j];
            }
        }
    }
    out
}
