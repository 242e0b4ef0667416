//! Validation identities and a priori caps for computed solutions.

use super::{
    check_density, check_k, eval_farfield, farfield_factor, farfield_samples, solve_density,
    BoundaryGrid, Density, DirectError, IncidentWave, NystromSystem,
};
use crate::geometry::StarBoundary;
use crate::specfun::bessel_jy_scaled_raw;
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_4, TAU};

/// ‖u∞‖_{L²(S¹)} from samples on a uniform grid (trapezoid rule).
pub fn farfield_l2_norm(samples: &[Complex64]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    (TAU / samples.len() as f64 * samples.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
}

/// |‖u∞‖² − 2(2π/k)^{1/2}·Im(e^{−iπ/4}u∞(ω))|.
pub fn verify_optical_theorem(samples: &[Complex64], forward: Complex64, k: f64) -> f64 {
    let norm2 = farfield_l2_norm(samples).powi(2);
    let rhs = 2.0 * (TAU / k).sqrt() * (Complex64::from_polar(1.0, -FRAC_PI_4) * forward).im;
    (norm2 - rhs).abs()
}

/// max |A(x̂, ω) − A(−ω, −x̂)| over pairs of angles (θ_x̂, θ_ω).
pub fn verify_reciprocity(
    system: &NystromSystem,
    pairs: &[(f64, f64)],
) -> Result<f64, DirectError> {
    let k = system.k();
    let mut worst = 0.0f64;
    for &(tx, tw) in pairs {
        let forward = solve_density(system, &IncidentWave::from_angle(k, tw)?)?;
        let a = eval_farfield(system.grid(), &forward, k, tx)?;
        let reverse = solve_density(
            system,
            &IncidentWave::from_angle(k, tx + std::f64::consts::PI)?,
        )?;
        let b = eval_farfield(system.grid(), &reverse, k, tw + std::f64::consts::PI)?;
        worst = worst.max((a - b).norm());
    }
    Ok(worst)
}

/// 1/σ_min(D·M·D⁻¹) for a diagonal D = diag(√wⱼ), by block inverse iteration
/// on (BᴴB)⁻¹ with B = D·M·D⁻¹; the block absorbs clustered singular values.
pub fn inverse_norm_of(matrix: &DMatrix<Complex64>, weights: &[f64]) -> Result<f64, DirectError> {
    let n = matrix.nrows();
    let p = n.min(8);
    let d: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
    let b = DMatrix::from_fn(n, n, |i, j| matrix[(i, j)] * (d[i] / d[j]));
    let lu = b.clone().lu();
    let lu_adj = b.adjoint().lu();
    let start = DMatrix::from_fn(n, p, |i, j| {
        let t = (i * (j + 1)) as f64;
        Complex64::new(1.0 + (0.37 * t + j as f64).sin(), (0.91 * t).cos())
    });
    let mut v = start.qr().q();
    let mut estimate = 0.0;
    for _ in 0..1000 {
        let y = lu.solve(&v).ok_or(DirectError::Singular)?;
        let next = y.singular_values().iter().fold(0.0f64, |a, &x| a.max(x));
        if !next.is_finite() || next == 0.0 {
            return Err(DirectError::Singular);
        }
        let z = lu_adj.solve(&y).ok_or(DirectError::Singular)?;
        v = z.qr().q();
        let done = (next - estimate).abs() <= 1e-14 * next;
        estimate = next;
        if done {
            break;
        }
    }
    Ok(estimate)
}

/// Quadrature weights (π/n)|x′(θⱼ)|, under which the discrete 2-norm
/// approximates the L²(∂Σ) norm.
fn l2_weights(grid: &BoundaryGrid) -> Vec<f64> {
    grid.jacobians().iter().map(|j| j * grid.step()).collect()
}

/// Approximate ‖A⁻¹‖ on L²(∂Σ).
pub fn inverse_norm_probe(system: &NystromSystem) -> Result<f64, DirectError> {
    inverse_norm_of(system.matrix(), &l2_weights(system.grid()))
}

/// The same quantity from a full singular value decomposition.
pub fn inverse_norm_svd(system: &NystromSystem) -> f64 {
    let w = l2_weights(system.grid());
    let n = w.len();
    let m = system.matrix();
    let b = DMatrix::from_fn(n, n, |i, j| m[(i, j)] * (w[i] / w[j]).sqrt());
    let s = b.singular_values();
    1.0 / s.iter().fold(f64::INFINITY, |a, &x| a.min(x))
}

/// ‖ψ‖_{L²(∂Σ)} by the trapezoid rule.
pub fn density_l2_norm(grid: &BoundaryGrid, density: &Density) -> f64 {
    grid.jacobians()
        .iter()
        .zip(&density.psi)
        .map(|(j, p)| j * p.norm_sqr())
        .sum::<f64>()
        .mul_add(grid.step(), 0.0)
        .sqrt()
}

/// Single-layer potential w(x) = ∫ψΦ(x, ·) ds.
pub fn single_layer_field(
    grid: &BoundaryGrid,
    density: &Density,
    k: f64,
    x: [f64; 2],
) -> Result<Complex64, DirectError> {
    check_k(k)?;
    check_density(grid, density)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for ((y, jac), psi) in grid.nodes().iter().zip(grid.jacobians()).zip(&density.psi) {
        let rho = (x[0] - y[0]).hypot(x[1] - y[1]);
        if rho == 0.0 {
            return Err(DirectError::CoincidentPoints);
        }
        let (j0, y0) = bessel_jy_scaled_raw(0.0, k * rho);
        acc += Complex64::new(-y0.value(), j0.value()) * 0.25 * jac * psi;
    }
    Ok(acc * grid.step())
}

/// Far field of the single-layer potential: e^{iπ/4}/√(8πk)·∫ψ e^{−ik x̂·y} ds.
pub fn single_layer_farfield(
    grid: &BoundaryGrid,
    density: &Density,
    k: f64,
    theta: f64,
) -> Result<Complex64, DirectError> {
    check_k(k)?;
    check_density(grid, density)?;
    let xhat = [theta.cos(), theta.sin()];
    let acc: Complex64 = grid
        .nodes()
        .iter()
        .zip(grid.jacobians())
        .zip(&density.psi)
        .map(|((y, jac), psi)| {
            psi * Complex64::from_polar(*jac, -k * (xhat[0] * y[0] + xhat[1] * y[1]))
        })
        .sum();
    Ok(farfield_factor(k) * acc * grid.step())
}

/// k^{−1/2}/(2√(2π))·(ℋ¹(∂Σ))^{1/2}·‖ψ‖, the cap on |w∞|.
pub fn sfinal_cap(k: f64, perimeter: f64, psi_norm: f64) -> f64 {
    perimeter.sqrt() * psi_norm / (2.0 * (TAU * k).sqrt())
}

/// (1/4)(ℋ¹(∂Σ))^{1/2}·‖ψ‖·|H⁽¹⁾₀(kd)|, the cap on |w(x)| at distance d from Σ.
pub fn estimate12_cap(k: f64, d: f64, perimeter: f64, psi_norm: f64) -> f64 {
    let (j0, y0) = bessel_jy_scaled_raw(0.0, k * d);
    0.25 * perimeter.sqrt() * psi_norm * j0.value().hypot(y0.value())
}

/// One row of the a priori far-field table.
#[derive(Clone, Debug, PartialEq)]
pub struct AprioriRow {
    pub k: f64,
    pub n_points: usize,
    pub farfield_norm: f64,
    pub density_norm: f64,
    pub inverse_norm: f64,
    /// max over sampled directions of |w∞| divided by its cap (≤ 1 when the cap holds).
    pub sfinal_ratio: f64,
}

/// ‖u∞‖ per wavenumber for incidence angle θω, with the density norm, the
/// inverse-norm probe and the single-layer far-field cap ratio.
pub fn apriori_farfield_check(
    obstacle: &StarBoundary,
    ks: &[f64],
    omega_angle: f64,
) -> Result<Vec<AprioriRow>, DirectError> {
    ks.iter()
        .map(|&k| {
            let n = super::min_points(obstacle, k).max(64).next_multiple_of(2);
            let sys = super::assemble_cfie(obstacle, k, n)?;
            let psi = solve_density(&sys, &IncidentWave::from_angle(k, omega_angle)?)?;
            let m = 2 * n;
            let ff = farfield_samples(sys.grid(), &psi, k, m)?;
            let psi_norm = density_l2_norm(sys.grid(), &psi);
            let cap = sfinal_cap(k, sys.grid().perimeter(), psi_norm);
            let mut worst = 0.0f64;
            for i in 0..64 {
                let w = single_layer_farfield(sys.grid(), &psi, k, TAU * i as f64 / 64.0)?;
                worst = worst.max(w.norm() / cap);
            }
            Ok(AprioriRow {
                k,
                n_points: n,
                farfield_norm: farfield_l2_norm(&ff),
                density_norm: psi_norm,
                inverse_norm: inverse_norm_probe(&sys)?,
                sfinal_ratio: worst,
            })
        })
        .collect()
}
