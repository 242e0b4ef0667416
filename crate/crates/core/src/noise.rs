//! Seeded far-field perturbations.

use crate::modal::{ModalError, ModalSpectrum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Complex Gaussian coefficients on all modes of degree ≤ `degree`, rescaled
/// so the far-field norm is exactly `epsilon`.
pub fn gaussian_noise(
    dim: usize,
    k: f64,
    degree: usize,
    epsilon: f64,
    seed: u64,
) -> Result<ModalSpectrum, ModalError> {
    let mut s = ModalSpectrum::zeros(dim, k, degree)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for c in s.coeffs_mut() {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        *c = Complex64::new(re, im);
    }
    let norm = s.farfield_norm();
    Ok(s.scaled(Complex64::new(epsilon / norm, 0.0)))
}
