use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::ComplexMatrix;

/// Frobenius norm every sampled bond is rescaled to; sets the energy unit J.
pub const BOND_NORM: f64 = std::f64::consts::SQRT_2;

/// Uniform 64-bit words consumed by one [`sample_gue_bond`] call:
/// 16 complex normals, two words each.
pub const DRAWS_PER_BOND: u64 = 32;

/// ChaCha20 stream seeded from a single `u64`, with a draw counter.
///
/// Every sampler in this crate consumes a fixed number of words per call, so
/// the n-th sample depends only on `(seed, n)`.
#[derive(Clone, Debug)]
pub struct SeededRng {
    seed: u64,
    draws: u64,
    inner: ChaCha20Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            draws: 0,
            inner: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of 64-bit words consumed so far.
    pub fn position(&self) -> u64 {
        self.draws
    }

    pub fn next_u64(&mut self) -> u64 {
        self.draws += 1;
        self.inner.next_u64()
    }

    /// Uniform on (0, 1], 53-bit resolution.
    pub fn uniform_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard complex normal: real and imaginary parts independent with
    /// variance 1/2 each, so `E|z|^2 = 1`. Box-Muller, exactly two words.
    pub fn complex_normal(&mut self) -> Complex64 {
        let u1 = self.uniform_open();
        let u2 = self.uniform_open();
        let r = (-u1.ln()).sqrt();
        let phi = std::f64::consts::TAU * u2;
        Complex64::new(r * phi.cos(), r * phi.sin())
    }
}

/// Samples a traceless Hermitian 4x4 matrix with Frobenius norm √2.
///
/// Draws `A` with i.i.d. standard complex normal entries (row-major), takes
/// the Hermitian part `(A + A†)/2`, removes the trace and rescales. Consumes
/// exactly [`DRAWS_PER_BOND`] words.
pub fn sample_gue_bond(rng: &mut SeededRng) -> ComplexMatrix {
    const DIM: usize = 4;
    let a: Vec<Complex64> = (0..DIM * DIM).map(|_| rng.complex_normal()).collect();
    let mut h = ComplexMatrix::zeros(DIM);
    for r in 0..DIM {
        for c in 0..DIM {
            h[(r, c)] = (a[r * DIM + c] + a[c * DIM + r].conj()) * 0.5;
        }
    }
    let shift = h.trace().re / DIM as f64;
    for i in 0..DIM {
        h[(i, i)] = Complex64::new(h[(i, i)].re - shift, 0.0);
    }
    let scale = BOND_NORM / h.frobenius_norm();
    h.scaled(Complex64::new(scale, 0.0))
}
