//! Sound-soft scattering by a star-shaped obstacle in the plane.
//!
//! The scattered field is sought as u^s(x) = ∫ψ(y)(∂Φ(x,y)/∂ν(y) − ikΦ(x,y)) ds(y)
//! with Φ = (i/4)H⁽¹⁾₀(k|x−y|). The exterior trace gives the second-kind
//! equation ψ + 2Kψ − 2ikSψ = −2uⁱ, discretised on 2n equispaced parameter
//! nodes with logarithmic splitting of the kernel and trigonometric weights
//! for the log part.

mod checks;
mod mie;

pub use checks::{
    apriori_farfield_check, density_l2_norm, estimate12_cap, farfield_l2_norm, inverse_norm_of,
    inverse_norm_probe, inverse_norm_svd, sfinal_cap, single_layer_farfield, single_layer_field,
    verify_optical_theorem, verify_reciprocity, AprioriRow,
};
pub use mie::{
    mie_bicoefficient_ln_abs, mie_coefficient_ln_abs, mie_coefficients, mie_farfield,
    mie_mode_count, mie_scattered, mie_spectrum,
};

use crate::geometry::StarBoundary;
use crate::specfun::bessel_jy_scaled_raw;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_4, PI, TAU};
use thiserror::Error;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DirectError {
    #[error("wavenumber must be positive and finite, got {0}")]
    BadWavenumber(f64),
    #[error("direction must be a unit vector, got ({0}, {1})")]
    BadDirection(f64, f64),
    #[error("point count must be even and at least 4, got {0}")]
    BadPointCount(usize),
    #[error("coincident points in the fundamental solution")]
    CoincidentPoints,
    #[error("evaluation point lies inside the obstacle")]
    InsideObstacle,
    #[error("the discrete system is singular")]
    Singular,
    #[error("density length {got} does not match the grid ({want})")]
    LengthMismatch { got: usize, want: usize },
}

fn check_k(k: f64) -> Result<(), DirectError> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(DirectError::BadWavenumber(k))
    }
}

/// Plane wave e^{ik ω·x}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IncidentWave {
    k: f64,
    omega: [f64; 2],
}

impl IncidentWave {
    pub fn new(k: f64, omega: [f64; 2]) -> Result<Self, DirectError> {
        check_k(k)?;
        if ((omega[0].hypot(omega[1])) - 1.0).abs() > 1e-12 {
            return Err(DirectError::BadDirection(omega[0], omega[1]));
        }
        Ok(Self { k, omega })
    }

    /// Propagation direction at angle θ (radians).
    pub fn from_angle(k: f64, theta: f64) -> Result<Self, DirectError> {
        Self::new(k, [theta.cos(), theta.sin()])
    }

    pub fn k(&self) -> f64 {
        self.k
    }
    pub fn omega(&self) -> [f64; 2] {
        self.omega
    }
    pub fn angle(&self) -> f64 {
        self.omega[1].atan2(self.omega[0])
    }

    pub fn value(&self, x: [f64; 2]) -> Complex64 {
        Complex64::from_polar(1.0, self.k * (self.omega[0] * x[0] + self.omega[1] * x[1]))
    }
}

/// (J₀, J₁, Y₀, Y₁) at z > 0.
fn bessel01(z: f64) -> [f64; 4] {
    let (j0, y0) = bessel_jy_scaled_raw(0.0, z);
    let (j1, y1) = bessel_jy_scaled_raw(1.0, z);
    [j0.value(), j1.value(), y0.value(), y1.value()]
}

/// Φ(x, y) = (i/4)H⁽¹⁾₀(k|x−y|).
pub fn fundamental_solution(k: f64, x: [f64; 2], y: [f64; 2]) -> Result<Complex64, DirectError> {
    check_k(k)?;
    let rho = (x[0] - y[0]).hypot(x[1] - y[1]);
    if rho == 0.0 {
        return Err(DirectError::CoincidentPoints);
    }
    let [j0, _, y0, _] = bessel01(k * rho);
    Ok(Complex64::new(-y0, j0) * 0.25)
}

/// ∇_y Φ(x, y) = −(i/4)k H⁽¹⁾₁(k|x−y|)(y−x)/|y−x|.
pub fn fundamental_gradient(
    k: f64,
    x: [f64; 2],
    y: [f64; 2],
) -> Result<[Complex64; 2], DirectError> {
    check_k(k)?;
    let d = [y[0] - x[0], y[1] - x[1]];
    let rho = d[0].hypot(d[1]);
    if rho == 0.0 {
        return Err(DirectError::CoincidentPoints);
    }
    let [_, j1, _, y1] = bessel01(k * rho);
    let c = Complex64::new(y1, -j1) * (0.25 * k / rho);
    Ok([c * d[0], c * d[1]])
}

/// Boundary samples at θ_j = πj/n, j < 2n.
#[derive(Clone, Debug)]
pub struct BoundaryGrid {
    half: usize,
    nodes: Vec<[f64; 2]>,
    /// (x₂′, −x₁′): outward normal scaled by the jacobian.
    normals: Vec<[f64; 2]>,
    jacobians: Vec<f64>,
    /// (x₂′x₁″ − x₁′x₂″)/|x′|², the diagonal limit of the double-layer kernel times 2π.
    curvature: Vec<f64>,
}

impl BoundaryGrid {
    pub fn new(obstacle: &StarBoundary, n_points: usize) -> Result<Self, DirectError> {
        if n_points < 4 || !n_points.is_multiple_of(2) {
            return Err(DirectError::BadPointCount(n_points));
        }
        let half = n_points / 2;
        let mut grid = Self {
            half,
            nodes: Vec::with_capacity(n_points),
            normals: Vec::with_capacity(n_points),
            jacobians: Vec::with_capacity(n_points),
            curvature: Vec::with_capacity(n_points),
        };
        for j in 0..n_points {
            let t = PI * j as f64 / half as f64;
            let (x, d1, d2) = obstacle.point_derivatives(t);
            let jac2 = d1[0] * d1[0] + d1[1] * d1[1];
            grid.nodes.push(x);
            grid.normals.push([d1[1], -d1[0]]);
            grid.jacobians.push(jac2.sqrt());
            grid.curvature.push((d1[1] * d2[0] - d1[0] * d2[1]) / jac2);
        }
        Ok(grid)
    }

    pub fn n_points(&self) -> usize {
        self.nodes.len()
    }
    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }
    pub fn normals(&self) -> &[[f64; 2]] {
        &self.normals
    }
    pub fn jacobians(&self) -> &[f64] {
        &self.jacobians
    }
    /// Trapezoid weight π/n of the parameter grid.
    pub fn step(&self) -> f64 {
        PI / self.half as f64
    }
    /// ℋ¹(∂Σ) by the trapezoid rule.
    pub fn perimeter(&self) -> f64 {
        self.step() * self.jacobians.iter().sum::<f64>()
    }
    /// Largest arc length between neighbouring nodes.
    pub fn max_spacing(&self) -> f64 {
        self.step() * self.jacobians.iter().fold(0.0, |a: f64, &b| a.max(b))
    }
}

/// Weights R_j for ∫ ln(4 sin²((t−τ)/2)) f(τ) dτ ≈ Σ_j R_{|i−j|} f(t_j).
fn log_weights(half: usize) -> Vec<f64> {
    let n = half as f64;
    (0..2 * half)
        .map(|j| {
            let s: f64 = (1..half)
                .map(|m| (m as f64 * j as f64 * PI / n).cos() / m as f64)
                .sum();
            let alt = if j % 2 == 0 { 1.0 } else { -1.0 };
            -2.0 * PI / n * s - PI / (n * n) * alt
        })
        .collect()
}

/// Assembled discretisation of A = I + 2K − 2ikS with its LU factors.
pub struct NystromSystem {
    grid: BoundaryGrid,
    k: f64,
    matrix: DMatrix<Complex64>,
    lu: nalgebra::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>,
    warnings: Vec<String>,
}

impl std::fmt::Debug for NystromSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NystromSystem")
            .field("n_points", &self.grid.n_points())
            .field("k", &self.k)
            .field("warnings", &self.warnings)
            .finish()
    }
}

impl NystromSystem {
    pub fn grid(&self) -> &BoundaryGrid {
        &self.grid
    }
    pub fn k(&self) -> f64 {
        self.k
    }
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
}

/// Minimum node count: max(32, ⌈10·k·(R0 + δ)⌉).
pub fn min_points(obstacle: &StarBoundary, k: f64) -> usize {
    let c = obstacle.class();
    32usize.max((10.0 * k * (c.r0 + c.delta)).ceil() as usize)
}

pub fn assemble_cfie(
    obstacle: &StarBoundary,
    k: f64,
    n_points: usize,
) -> Result<NystromSystem, DirectError> {
    check_k(k)?;
    let grid = BoundaryGrid::new(obstacle, n_points)?;
    let mut warnings = Vec::new();
    let floor = min_points(obstacle, k);
    if n_points < floor {
        warnings.push(format!(
            "grid too coarse: {n_points} points, at least {floor} recommended at k = {k}"
        ));
    }
    let n = n_points;
    let weights = log_weights(grid.half);
    let h = grid.step();
    let x = &grid.nodes;

    // Bessel values at k|x_i − x_j| for i < j; the table is symmetric.
    let table: Vec<Vec<[f64; 4]>> = (0..n)
        .into_par_iter()
        .map(|i| {
            ((i + 1)..n)
                .map(|j| bessel01(k * (x[i][0] - x[j][0]).hypot(x[i][1] - x[j][1])))
                .collect()
        })
        .collect();
    let lookup = |i: usize, j: usize| {
        if i < j {
            table[i][j - i - 1]
        } else {
            table[j][i - j - 1]
        }
    };

    let i_unit = Complex64::i();
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    let jac = grid.jacobians[j];
                    let (l1, l2) = if i == j {
                        let l1 = i_unit * (k / TAU) * jac;
                        let l2 = Complex64::new(grid.curvature[j] / TAU, 0.0)
                            + Complex64::new(1.0, 2.0 / PI * (EULER_GAMMA + (0.5 * k * jac).ln()))
                                * (0.5 * k * jac);
                        (l1, l2)
                    } else {
                        let d = [x[i][0] - x[j][0], x[i][1] - x[j][1]];
                        let rho = d[0].hypot(d[1]);
                        let dot = (d[0] * grid.normals[j][0] + d[1] * grid.normals[j][1]) / rho;
                        let [j0, j1, y0, y1] = lookup(i, j);
                        let full = i_unit * (0.5 * k) * Complex64::new(j1, y1) * dot
                            + Complex64::new(j0, y0) * (0.5 * k * jac);
                        let l1 = Complex64::new(-k / TAU * dot * j1, k / TAU * j0 * jac);
                        let s = (0.5 * (i as f64 - j as f64) * h).sin();
                        let l2 = full - l1 * (4.0 * s * s).ln();
                        (l1, l2)
                    };
                    let diff = i.abs_diff(j);
                    let mut a = l1 * weights[diff] + l2 * h;
                    if i == j {
                        a += 1.0;
                    }
                    a
                })
                .collect()
        })
        .collect();
    let matrix = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    if matrix
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(DirectError::Singular);
    }
    let lu = matrix.clone().lu();
    Ok(NystromSystem {
        grid,
        k,
        matrix,
        lu,
        warnings,
    })
}

/// Boundary density with the residual ‖Aψ + 2uⁱ‖∞ / ‖2uⁱ‖∞ of the solve.
#[derive(Clone, Debug, PartialEq)]
pub struct Density {
    pub psi: Vec<Complex64>,
    pub relative_residual: f64,
}

/// Solve with one step of iterative refinement for an arbitrary right-hand side.
fn solve_rhs(system: &NystromSystem, rhs: &DVector<Complex64>) -> Result<Density, DirectError> {
    let mut psi = system.lu.solve(rhs).ok_or(DirectError::Singular)?;
    let r = rhs - &system.matrix * &psi;
    if let Some(dpsi) = system.lu.solve(&r) {
        psi += dpsi;
    }
    let res = rhs - &system.matrix * &psi;
    let scale = rhs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let top = res.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if psi.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(DirectError::Singular);
    }
    Ok(Density {
        psi: psi.iter().copied().collect(),
        relative_residual: if scale > 0.0 { top / scale } else { top },
    })
}

pub fn solve_density(system: &NystromSystem, wave: &IncidentWave) -> Result<Density, DirectError> {
    if (wave.k() - system.k).abs() > 1e-14 * system.k {
        return Err(DirectError::BadWavenumber(wave.k()));
    }
    let rhs = DVector::from_iterator(
        system.grid.n_points(),
        system.grid.nodes.iter().map(|&x| -2.0 * wave.value(x)),
    );
    solve_rhs(system, &rhs)
}

/// Solve for a density given boundary data f, i.e. Aψ = f.
pub fn solve_boundary_data(
    system: &NystromSystem,
    data: &[Complex64],
) -> Result<Density, DirectError> {
    if data.len() != system.grid.n_points() {
        return Err(DirectError::LengthMismatch {
            got: data.len(),
            want: system.grid.n_points(),
        });
    }
    solve_rhs(system, &DVector::from_column_slice(data))
}

fn check_density(grid: &BoundaryGrid, density: &Density) -> Result<(), DirectError> {
    if density.psi.len() != grid.n_points() {
        return Err(DirectError::LengthMismatch {
            got: density.psi.len(),
            want: grid.n_points(),
        });
    }
    Ok(())
}

/// Whether x is closer to ∂Σ than five node spacings, where the trapezoid
/// rule loses accuracy.
pub fn near_boundary(grid: &BoundaryGrid, x: [f64; 2]) -> bool {
    let d = grid
        .nodes
        .iter()
        .map(|y| (x[0] - y[0]).hypot(x[1] - y[1]))
        .fold(f64::INFINITY, f64::min);
    d < 5.0 * grid.max_spacing()
}

/// u^s(x) for x outside Σ by the trapezoid rule.
pub fn eval_scattered(
    obstacle: &StarBoundary,
    grid: &BoundaryGrid,
    density: &Density,
    k: f64,
    x: [f64; 2],
) -> Result<Complex64, DirectError> {
    check_k(k)?;
    check_density(grid, density)?;
    if obstacle.contains(x) {
        return Err(DirectError::InsideObstacle);
    }
    let i_unit = Complex64::i();
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, y) in grid.nodes.iter().enumerate() {
        let d = [x[0] - y[0], x[1] - y[1]];
        let rho = d[0].hypot(d[1]);
        if rho == 0.0 {
            return Err(DirectError::CoincidentPoints);
        }
        let dot = (d[0] * grid.normals[j][0] + d[1] * grid.normals[j][1]) / rho;
        let [j0, j1, y0, y1] = bessel01(k * rho);
        let kernel = i_unit * (0.25 * k) * Complex64::new(j1, y1) * dot
            + Complex64::new(j0, y0) * (0.25 * k * grid.jacobians[j]);
        acc += kernel * density.psi[j];
    }
    Ok(acc * grid.step())
}

/// e^{iπ/4}/√(8πk), the far-field factor of Φ.
pub(crate) fn farfield_factor(k: f64) -> Complex64 {
    Complex64::from_polar(1.0 / (8.0 * PI * k).sqrt(), FRAC_PI_4)
}

/// u∞(x̂) at angle θ: e^{iπ/4}/√(8πk)·∫ψ(y)(∂/∂ν(y) − ik)e^{−ik x̂·y} ds(y).
pub fn eval_farfield(
    grid: &BoundaryGrid,
    density: &Density,
    k: f64,
    theta: f64,
) -> Result<Complex64, DirectError> {
    check_k(k)?;
    check_density(grid, density)?;
    let xhat = [theta.cos(), theta.sin()];
    let acc: Complex64 = grid
        .nodes
        .iter()
        .zip(&grid.normals)
        .zip(&grid.jacobians)
        .zip(&density.psi)
        .map(|(((y, n), jac), psi)| {
            let phase = Complex64::from_polar(1.0, -k * (xhat[0] * y[0] + xhat[1] * y[1]));
            psi * phase * (xhat[0] * n[0] + xhat[1] * n[1] + jac)
        })
        .sum();
    Ok(farfield_factor(k) * Complex64::new(0.0, -k) * acc * grid.step())
}

/// Far-field samples at θ_m = 2πm/M.
pub fn farfield_samples(
    grid: &BoundaryGrid,
    density: &Density,
    k: f64,
    m: usize,
) -> Result<Vec<Complex64>, DirectError> {
    (0..m)
        .map(|i| eval_farfield(grid, density, k, TAU * i as f64 / m as f64))
        .collect()
}

/// Solve for incidence angle θω and return far-field samples at θ_m = 2πm/M.
pub fn scatter_farfield(
    system: &NystromSystem,
    omega_angle: f64,
    m: usize,
) -> Result<Vec<Complex64>, DirectError> {
    let wave = IncidentWave::from_angle(system.k, omega_angle)?;
    let psi = solve_density(system, &wave)?;
    farfield_samples(&system.grid, &psi, system.k, m)
}
