//! Outgoing waves in separated variables.
//!
//! A [`ModalSpectrum`] stores the far-field coefficients b̃ᵢ of an outgoing
//! wave on the real orthonormal spherical-harmonic basis {vᵢ}. The wave
//! outside its sources is
//!
//!   u(r x̂) = Σᵢ b̃ᵢ·(πk/2)^{1/2}·i^{γᵢ+(N−1)/2}·H⁽¹⁾_{γᵢ+(N−2)/2}(kr)·r^{−(N−2)/2}·vᵢ(x̂)
//!
//! with γᵢ the degree of vᵢ, so that r^{(N−1)/2}·e^{−ikr}·u(r x̂) → Σᵢ b̃ᵢ vᵢ(x̂).
//!
//! On the circle (N = 2) the basis is {(2π)^{−1/2}, π^{−1/2}cos jθ,
//! π^{−1/2}sin jθ}, ordered by degree with cosine before sine.

use crate::specfun::{self, ScaledReal};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModalError {
    #[error("dimension must be at least 2, got {0}")]
    BadDimension(usize),
    #[error("wavenumber must be positive and finite, got {0}")]
    BadWavenumber(f64),
    #[error("radius must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("degree {degree} in dimension {dim} needs {expected} coefficients, got {got}")]
    LengthMismatch {
        dim: usize,
        degree: usize,
        expected: usize,
        got: usize,
    },
    #[error("{len} coefficients do not fill whole degrees in dimension {dim}")]
    PartialDegree { dim: usize, len: usize },
    #[error("spectra differ in dimension or wavenumber")]
    Incompatible,
    #[error("near-field norm overflows (ln of norm = {0})")]
    Overflow(f64),
    #[error("field synthesis is implemented for N = 2 only, got N = {0}")]
    SynthesisDimension(usize),
    #[error("{samples} samples alias degree {degree}; need at least {needed}")]
    Aliasing {
        samples: usize,
        degree: usize,
        needed: usize,
    },
    #[error("annulus needs R0 > 0 and 1 < B0 < B1, got R0 = {r0}, B0 = {b0}, B1 = {b1}")]
    BadAnnulus { r0: f64, b0: f64, b1: f64 },
    #[error("spectrum text, line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// p_j, the dimension of degree-j spherical harmonics on S^{N−1}.
pub fn mode_dimension(j: usize, dim: usize) -> usize {
    assert!(dim >= 2, "dimension must be at least 2");
    if j == 0 {
        return 1;
    }
    if dim == 2 {
        return 2;
    }
    // (2j+N−2)·C(j+N−3, j)/(N−2)
    let n = dim as u128;
    let j = j as u128;
    let mut binom: u128 = 1;
    for t in 1..=(n - 3) {
        binom = binom * (j + t) / t;
    }
    ((2 * j + n - 2) * binom / (n - 2)) as usize
}

/// Σ_{j≤n} p_j, the number of basis functions of degree at most n.
pub fn degree_count(n: usize, dim: usize) -> usize {
    (0..=n).map(|j| mode_dimension(j, dim)).sum()
}

/// Position of a basis function: degree j, multiplicity 1 ≤ p ≤ p_j and flat
/// index i in the ordered basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeIndex {
    pub degree: usize,
    pub multiplicity: usize,
    pub flat: usize,
}

impl ModeIndex {
    pub fn from_flat(flat: usize, dim: usize) -> Self {
        let mut start = 0;
        let mut j = 0;
        loop {
            let p = mode_dimension(j, dim);
            if flat < start + p {
                return Self {
                    degree: j,
                    multiplicity: flat - start + 1,
                    flat,
                };
            }
            start += p;
            j += 1;
        }
    }

    pub fn from_degree(degree: usize, multiplicity: usize, dim: usize) -> Option<Self> {
        if multiplicity == 0 || multiplicity > mode_dimension(degree, dim) {
            return None;
        }
        let start = if degree == 0 {
            0
        } else {
            degree_count(degree - 1, dim)
        };
        Some(Self {
            degree,
            multiplicity,
            flat: start + multiplicity - 1,
        })
    }
}

/// Degree of the flat index i.
pub fn degree_of(flat: usize, dim: usize) -> usize {
    ModeIndex::from_flat(flat, dim).degree
}

/// e^{iπm/4}, exact on the eight axis and diagonal directions.
fn eighth_root_power(m: i64) -> Complex64 {
    let d = FRAC_1_SQRT_2;
    match m.rem_euclid(8) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(d, d),
        2 => Complex64::new(0.0, 1.0),
        3 => Complex64::new(-d, d),
        4 => Complex64::new(-1.0, 0.0),
        5 => Complex64::new(-d, -d),
        6 => Complex64::new(0.0, -1.0),
        _ => Complex64::new(d, -d),
    }
}

/// i^{γ+(N−1)/2}.
fn outgoing_phase(degree: usize, dim: usize) -> Complex64 {
    eighth_root_power(2 * degree as i64 + dim as i64 - 1)
}

/// Radii of the evaluation annulus B0·R0 ≤ r ≤ B1·R0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnnulusGeometry {
    r0: f64,
    b0: f64,
    b1: f64,
}

impl AnnulusGeometry {
    pub fn new(r0: f64, b0: f64, b1: f64) -> Result<Self, ModalError> {
        if r0 > 0.0 && r0.is_finite() && 1.0 < b0 && b0 < b1 && b1.is_finite() {
            Ok(Self { r0, b0, b1 })
        } else {
            Err(ModalError::BadAnnulus { r0, b0, b1 })
        }
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }
    pub fn b0(&self) -> f64 {
        self.b0
    }
    pub fn b1(&self) -> f64 {
        self.b1
    }
    pub fn inner_radius(&self) -> f64 {
        self.b0 * self.r0
    }
    pub fn outer_radius(&self) -> f64 {
        self.b1 * self.r0
    }
    pub fn contains(&self, r: f64) -> bool {
        self.inner_radius() <= r && r <= self.outer_radius()
    }
}

/// Far-field coefficients b̃ᵢ up to an explicit truncation degree.
#[derive(Clone, Debug, PartialEq)]
pub struct ModalSpectrum {
    dim: usize,
    k: f64,
    degree: usize,
    coeffs: Vec<Complex64>,
}

fn check_dim_k(dim: usize, k: f64) -> Result<(), ModalError> {
    if dim < 2 {
        return Err(ModalError::BadDimension(dim));
    }
    if !(k > 0.0 && k.is_finite()) {
        return Err(ModalError::BadWavenumber(k));
    }
    Ok(())
}

fn check_radius(r: f64) -> Result<(), ModalError> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(ModalError::BadRadius(r))
    }
}

/// The degree whose cumulative count is exactly `len`, if any.
fn degree_for_len(len: usize, dim: usize) -> Option<usize> {
    let mut total = 0;
    let mut j = 0;
    while total < len {
        total += mode_dimension(j, dim);
        if total == len {
            return Some(j);
        }
        j += 1;
    }
    None
}

impl ModalSpectrum {
    pub fn new(
        dim: usize,
        k: f64,
        degree: usize,
        coeffs: Vec<Complex64>,
    ) -> Result<Self, ModalError> {
        check_dim_k(dim, k)?;
        let expected = degree_count(degree, dim);
        if coeffs.len() != expected {
            return Err(ModalError::LengthMismatch {
                dim,
                degree,
                expected,
                got: coeffs.len(),
            });
        }
        Ok(Self {
            dim,
            k,
            degree,
            coeffs,
        })
    }

    pub fn zeros(dim: usize, k: f64, degree: usize) -> Result<Self, ModalError> {
        check_dim_k(dim, k)?;
        Ok(Self {
            dim,
            k,
            degree,
            coeffs: vec![Complex64::new(0.0, 0.0); degree_count(degree, dim)],
        })
    }

    /// Spectrum with the truncation degree inferred from the coefficient count.
    pub fn from_coeffs(dim: usize, k: f64, coeffs: Vec<Complex64>) -> Result<Self, ModalError> {
        check_dim_k(dim, k)?;
        let degree = degree_for_len(coeffs.len(), dim).ok_or(ModalError::PartialDegree {
            dim,
            len: coeffs.len(),
        })?;
        Self::new(dim, k, degree, coeffs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn wavenumber(&self) -> f64 {
        self.k
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }
    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn get(&self, index: ModeIndex) -> Complex64 {
        self.coeffs
            .get(index.flat)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn set(&mut self, index: ModeIndex, value: Complex64) {
        self.coeffs[index.flat] = value;
    }

    /// Coefficients grouped by degree, in increasing degree.
    pub fn degree_blocks(&self) -> impl Iterator<Item = (usize, &[Complex64])> + '_ {
        let dim = self.dim;
        let mut start = 0;
        (0..=self.degree).map(move |j| {
            let p = mode_dimension(j, dim);
            let block = &self.coeffs[start..start + p];
            start += p;
            (j, block)
        })
    }

    /// Σ_{p} |b̃_{jp}|² for each degree j.
    pub fn degree_energies(&self) -> Vec<f64> {
        self.degree_blocks()
            .map(|(_, b)| b.iter().map(|c| c.norm_sqr()).sum())
            .collect()
    }

    /// Bessel order γ + (N−2)/2 of the radial factor for degree γ.
    pub fn order_of_degree(&self, degree: usize) -> f64 {
        degree as f64 + (self.dim as f64 - 2.0) / 2.0
    }

    pub fn farfield_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ln of the squared L²(∂B_r) norm, −∞ for the zero spectrum.
    pub fn nearfield_norm_sq_ln(&self, r: f64) -> Result<f64, ModalError> {
        check_radius(r)?;
        let z = self.k * r;
        let base = (PI / 2.0 * z).ln();
        let logs: Vec<f64> = self
            .degree_blocks()
            .map(|(j, block)| (j, block_energy_ln(block)))
            .filter(|&(_, e)| e > f64::NEG_INFINITY)
            .map(|(j, e)| base + e + 2.0 * specfun::hankel1_ln_abs_raw(self.order_of_degree(j), z))
            .collect();
        Ok(log_sum_exp(&logs))
    }

    /// ((π/2)·Σᵢ|b̃ᵢ|²·kr·|H⁽¹⁾_{γᵢ+(N−2)/2}(kr)|²)^{1/2}.
    pub fn nearfield_norm(&self, r: f64) -> Result<f64, ModalError> {
        let half_ln = 0.5 * self.nearfield_norm_sq_ln(r)?;
        let v = half_ln.exp();
        if v.is_infinite() {
            Err(ModalError::Overflow(half_ln))
        } else {
            Ok(v)
        }
    }

    /// Far-field value Σᵢ b̃ᵢ vᵢ(θ) on the circle.
    pub fn farfield_value(&self, theta: f64) -> Result<Complex64, ModalError> {
        self.require_circle()?;
        let mut sum = Complex64::new(0.0, 0.0);
        for (j, block) in self.degree_blocks() {
            let basis = circle_basis(j, theta);
            sum += block
                .iter()
                .zip(basis.iter())
                .map(|(c, v)| c * v)
                .sum::<Complex64>();
        }
        Ok(sum)
    }

    /// The outgoing field at polar point (r, θ) on the circle.
    pub fn evaluate_field(&self, r: f64, theta: f64) -> Result<Complex64, ModalError> {
        self.require_circle()?;
        check_radius(r)?;
        let z = self.k * r;
        let pref = (PI * self.k / 2.0).sqrt();
        let mut sum = Complex64::new(0.0, 0.0);
        for (j, block) in self.degree_blocks() {
            let basis = circle_basis(j, theta);
            let angular: Complex64 = block.iter().zip(basis.iter()).map(|(c, v)| c * v).sum();
            if angular == Complex64::new(0.0, 0.0) {
                continue;
            }
            let (bj, by) = specfun::bessel_jy_scaled_raw(self.order_of_degree(j), z);
            let weight = angular * pref * outgoing_phase(j, self.dim);
            sum += scaled_times(weight, bj) + Complex64::i() * scaled_times(weight, by);
        }
        Ok(sum)
    }

    /// Field values at M equispaced angles θ_m = 2πm/M on the circle of radius r.
    pub fn evaluate_on_circle(&self, r: f64, m: usize) -> Result<Vec<Complex64>, ModalError> {
        (0..m)
            .map(|i| self.evaluate_field(r, 2.0 * PI * i as f64 / m as f64))
            .collect()
    }

    /// Keep degrees ≤ j0 (or all of them when j0 exceeds the stored degree).
    pub fn truncated(&self, j0: usize) -> Self {
        let degree = j0.min(self.degree);
        let len = degree_count(degree, self.dim);
        Self {
            dim: self.dim,
            k: self.k,
            degree,
            coeffs: self.coeffs[..len].to_vec(),
        }
    }

    /// Zero-pad to a higher truncation degree.
    pub fn padded(&self, degree: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(
            degree_count(degree.max(self.degree), self.dim),
            Complex64::new(0.0, 0.0),
        );
        Self {
            dim: self.dim,
            k: self.k,
            degree: degree.max(self.degree),
            coeffs,
        }
    }

    /// Modes of degree > j0 only, stored up to the original degree.
    pub fn tail(&self, j0: usize) -> Self {
        let mut out = self.clone();
        let keep = degree_count(j0.min(self.degree), self.dim);
        if j0 < self.degree {
            out.coeffs[..keep]
                .iter_mut()
                .for_each(|c| *c = Complex64::new(0.0, 0.0));
        } else {
            out.coeffs
                .iter_mut()
                .for_each(|c| *c = Complex64::new(0.0, 0.0));
        }
        out
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= factor);
        out
    }

    /// self − other, zero-padded to the larger degree.
    pub fn difference(&self, other: &Self) -> Result<Self, ModalError> {
        self.combine(other, -1.0)
    }

    pub fn sum(&self, other: &Self) -> Result<Self, ModalError> {
        self.combine(other, 1.0)
    }

    fn combine(&self, other: &Self, sign: f64) -> Result<Self, ModalError> {
        if self.dim != other.dim || self.k != other.k {
            return Err(ModalError::Incompatible);
        }
        let degree = self.degree.max(other.degree);
        let mut out = self.padded(degree);
        for (c, o) in out.coeffs.iter_mut().zip(other.coeffs.iter()) {
            *c += o * sign;
        }
        Ok(out)
    }

    fn require_circle(&self) -> Result<(), ModalError> {
        if self.dim == 2 {
            Ok(())
        } else {
            Err(ModalError::SynthesisDimension(self.dim))
        }
    }

    /// Plain-text form: header `N k degree`, then one `j p re im` line per mode.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.dim, self.k, self.degree);
        for (i, c) in self.coeffs.iter().enumerate() {
            let idx = ModeIndex::from_flat(i, self.dim);
            let _ = writeln!(out, "{} {} {} {}", idx.degree, idx.multiplicity, c.re, c.im);
        }
        out
    }

    /// Parse the plain-text form; modes not listed are zero. `#` starts a comment.
    pub fn from_text(text: &str) -> Result<Self, ModalError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(ModalError::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let perr = |line: usize, msg: String| ModalError::Parse { line, msg };
        if fields.len() != 3 {
            return Err(perr(hline, "header must be `N k degree`".into()));
        }
        let dim: usize = fields[0]
            .parse()
            .map_err(|e| perr(hline, format!("N: {e}")))?;
        let k: f64 = fields[1]
            .parse()
            .map_err(|e| perr(hline, format!("k: {e}")))?;
        let degree: usize = fields[2]
            .parse()
            .map_err(|e| perr(hline, format!("degree: {e}")))?;
        let mut s = Self::zeros(dim, k, degree)?;
        for (n, line) in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 4 {
                return Err(perr(n, "expected `j p re im`".into()));
            }
            let j: usize = f[0].parse().map_err(|e| perr(n, format!("j: {e}")))?;
            let p: usize = f[1].parse().map_err(|e| perr(n, format!("p: {e}")))?;
            let re: f64 = f[2].parse().map_err(|e| perr(n, format!("re: {e}")))?;
            let im: f64 = f[3].parse().map_err(|e| perr(n, format!("im: {e}")))?;
            if j > degree {
                return Err(perr(
                    n,
                    format!("degree {j} exceeds header degree {degree}"),
                ));
            }
            let idx = ModeIndex::from_degree(j, p, dim)
                .ok_or_else(|| perr(n, format!("multiplicity {p} out of range for degree {j}")))?;
            s.set(idx, Complex64::new(re, im));
        }
        Ok(s)
    }
}

/// w·x for a scaled real x, without forming x when it would overflow.
fn scaled_times(w: Complex64, x: ScaledReal) -> Complex64 {
    if w.norm() == 0.0 || x.mantissa == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let mag = (w.norm().ln() + x.ln_scale).exp() * x.mantissa;
    (w / w.norm()) * mag
}

/// ln Σ|cᵢ|², immune to underflow of the squares.
fn block_energy_ln(block: &[Complex64]) -> f64 {
    let top = block.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if top == 0.0 {
        return f64::NEG_INFINITY;
    }
    2.0 * top.ln() + block.iter().map(|c| (c / top).norm_sqr()).sum::<f64>().ln()
}

fn log_sum_exp(logs: &[f64]) -> f64 {
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    top + logs.iter().map(|l| (l - top).exp()).sum::<f64>().ln()
}

/// The orthonormal basis functions of degree j on the circle at angle θ.
fn circle_basis(j: usize, theta: f64) -> Vec<f64> {
    if j == 0 {
        vec![1.0 / (2.0 * PI).sqrt()]
    } else {
        let (s, c) = (j as f64 * theta).sin_cos();
        let norm = 1.0 / PI.sqrt();
        vec![c * norm, s * norm]
    }
}

/// b̃ᵢ = (π/2)^{−1/2}·k^{−(N−1)/2}·(−i)^{γᵢ+(N−1)/2}·b̂ᵢ.
pub fn tilde_from_hat(hat: &[Complex64], k: f64, dim: usize) -> Result<ModalSpectrum, ModalError> {
    check_dim_k(dim, k)?;
    let factor = (PI / 2.0).sqrt().recip() * k.powf(-(dim as f64 - 1.0) / 2.0);
    let coeffs = hat
        .iter()
        .enumerate()
        .map(|(i, &b)| {
            let j = degree_of(i, dim);
            b * factor * outgoing_phase(j, dim).conj()
        })
        .collect();
    ModalSpectrum::from_coeffs(dim, k, coeffs)
}

/// Inverse of [`tilde_from_hat`].
pub fn hat_from_tilde(s: &ModalSpectrum) -> Vec<Complex64> {
    let factor = (PI / 2.0).sqrt() * s.k.powf((s.dim as f64 - 1.0) / 2.0);
    s.degree_blocks()
        .flat_map(|(j, block)| {
            let ph = outgoing_phase(j, s.dim);
            block.iter().map(move |&b| b * factor * ph)
        })
        .collect()
}

/// Far-field coefficients up to `degree` from samples at θ_m = 2πm/M by the
/// trapezoid rule against the orthonormal circle basis.
pub fn project_farfield(
    samples: &[Complex64],
    degree: usize,
    k: f64,
) -> Result<ModalSpectrum, ModalError> {
    let m = samples.len();
    let needed = 2 * degree + 1;
    if m < needed {
        return Err(ModalError::Aliasing {
            samples: m,
            degree,
            needed,
        });
    }
    let w = 2.0 * PI / m as f64;
    // cos/sin tables indexed by (j·n mod M) keep the phases exact.
    let table: Vec<(f64, f64)> = (0..m).map(|t| (w * t as f64).sin_cos()).collect();
    let mut coeffs = Vec::with_capacity(degree_count(degree, 2));
    let mean: Complex64 = samples.iter().sum();
    coeffs.push(mean * w / (2.0 * PI).sqrt());
    let norm = w / PI.sqrt();
    for j in 1..=degree {
        let mut c = Complex64::new(0.0, 0.0);
        let mut s = Complex64::new(0.0, 0.0);
        for (n, &u) in samples.iter().enumerate() {
            let (sn, cs) = table[(j * n) % m];
            c += u * cs;
            s += u * sn;
        }
        coeffs.push(c * norm);
        coeffs.push(s * norm);
    }
    ModalSpectrum::new(2, k, degree, coeffs)
}

/// Coefficients a_{i,l} of a kernel on S^{N−1}×S^{N−1}, indexed by flat pairs.
pub type Bicoefficients = BTreeMap<(usize, usize), Complex64>;

/// (Σ_{i,l}(1+γᵢ+γ_l)^{2s}|a_{i,l}|²)^{1/2}.
pub fn sobolev_norm(a: &Bicoefficients, s: f64, dim: usize) -> f64 {
    a.iter()
        .map(|(&(i, l), v)| {
            let w = 1.0 + (degree_of(i, dim) + degree_of(l, dim)) as f64;
            w.powf(2.0 * s) * v.norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
}

/// sup_{i,l}(1+max{γᵢ,γ_l})^{2s+N−1/2}|a_{i,l}|.
pub fn ys_norm(a: &Bicoefficients, s: f64, dim: usize) -> f64 {
    let expo = 2.0 * s + dim as f64 - 0.5;
    a.iter()
        .map(|(&(i, l), v)| {
            let g = degree_of(i, dim).max(degree_of(l, dim));
            (1.0 + g as f64).powf(expo) * v.norm()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn mode_dimension_examples() {
        assert_eq!(mode_dimension(0, 3), 1);
        assert_eq!(mode_dimension(3, 2), 2);
        assert_eq!(mode_dimension(2, 3), 5);
        // degree-2 harmonics in R⁴: (2·2+2)·C(3,2)/2 = 9
        assert_eq!(mode_dimension(2, 4), 9);
    }

    #[test]
    fn degree_count_examples() {
        assert_eq!(degree_count(0, 2), 1);
        assert_eq!(degree_count(0, 5), 1);
        assert_eq!(degree_count(4, 2), 9);
        assert_eq!(degree_count(3, 3), 16);
    }

    #[test]
    fn degree_count_polynomial_growth() {
        for dim in [2usize, 3] {
            for n in 0..=100usize {
                let bound = 2.0 * ((n + 1) as f64).powi(dim as i32 - 1);
                assert!(degree_count(n, dim) as f64 <= bound);
                assert!(
                    mode_dimension(n, dim) as f64 <= 2.0 * ((n + 1) as f64).powi(dim as i32 - 2)
                );
            }
        }
    }

    #[test]
    fn flat_index_round_trip() {
        for dim in [2, 3, 4] {
            for i in 0..200 {
                let idx = ModeIndex::from_flat(i, dim);
                assert_eq!(
                    ModeIndex::from_degree(idx.degree, idx.multiplicity, dim),
                    Some(idx)
                );
            }
        }
        let idx = ModeIndex::from_flat(4, 2);
        assert_eq!((idx.degree, idx.multiplicity), (2, 2));
    }

    #[test]
    fn farfield_norm_examples() {
        assert_eq!(
            ModalSpectrum::zeros(2, 1.0, 5).unwrap().farfield_norm(),
            0.0
        );
        let s = ModalSpectrum::new(2, 1.0, 0, vec![c(3.0, 4.0)]).unwrap();
        assert_eq!(s.farfield_norm(), 5.0);
    }

    #[test]
    fn nearfield_single_mode_closed_forms() {
        let k = 2.0;
        let r = 1.7;
        let s = ModalSpectrum::new(2, k, 0, vec![c(1.0, 0.0)]).unwrap();
        let h = specfun::hankel1_raw(0.0, k * r).norm();
        assert_relative_eq!(
            s.nearfield_norm(r).unwrap(),
            (PI / 2.0 * k * r).sqrt() * h,
            max_relative = 1e-14
        );
        let s3 = ModalSpectrum::new(3, k, 0, vec![c(1.0, 0.0)]).unwrap();
        for r in [0.1, 1.0, 30.0] {
            assert_relative_eq!(s3.nearfield_norm(r).unwrap(), 1.0, max_relative = 1e-13);
        }
        assert_eq!(
            ModalSpectrum::zeros(2, 1.0, 3)
                .unwrap()
                .nearfield_norm(1.0)
                .unwrap(),
            0.0
        );
    }

    #[test]
    fn nearfield_norm_survives_evanescent_degrees() {
        let mut coeffs = vec![c(0.0, 0.0); degree_count(300, 2)];
        *coeffs.last_mut().unwrap() = c(1e-300, 0.0);
        let s = ModalSpectrum::new(2, 1.0, 300, coeffs).unwrap();
        let ln = s.nearfield_norm_sq_ln(1.0).unwrap();
        assert!(ln.is_finite() && ln > 1000.0);
        assert!(matches!(
            s.nearfield_norm(1.0),
            Err(ModalError::Overflow(_))
        ));
    }

    #[test]
    fn nearfield_norm_matches_circle_quadrature() {
        let coeffs: Vec<_> = (0..degree_count(6, 2))
            .map(|i| c((i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()))
            .collect();
        let s = ModalSpectrum::new(2, 3.0, 6, coeffs).unwrap();
        let r = 2.5;
        let m = 64;
        let vals = s.evaluate_on_circle(r, m).unwrap();
        let quad: f64 = vals.iter().map(|u| u.norm_sqr()).sum::<f64>() * 2.0 * PI * r / m as f64;
        assert_relative_eq!(
            s.nearfield_norm(r).unwrap(),
            quad.sqrt(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn tilde_hat_examples() {
        let hat = vec![c(2.0, -1.0)];
        let s = tilde_from_hat(&hat, 1.0, 3).unwrap();
        let want = hat[0] * (PI / 2.0).sqrt().recip() * c(0.0, -1.0);
        assert_relative_eq!((s.coeffs()[0] - want).norm(), 0.0, epsilon = 1e-15);
        let zero = tilde_from_hat(&[c(0.0, 0.0); 5], 2.0, 2).unwrap();
        assert_eq!(zero.farfield_norm(), 0.0);
        assert!(tilde_from_hat(&[c(1.0, 0.0); 2], 1.0, 2).is_err());
    }

    #[test]
    fn tilde_hat_round_trip() {
        let hat: Vec<_> = (0..degree_count(4, 3))
            .map(|i| c(i as f64 - 3.0, 0.5 * i as f64))
            .collect();
        let back = hat_from_tilde(&tilde_from_hat(&hat, 2.7, 3).unwrap());
        for (a, b) in hat.iter().zip(back.iter()) {
            assert!((a - b).norm() <= 1e-14 * a.norm().max(1.0));
        }
    }

    #[test]
    fn project_constant_samples() {
        let s = project_farfield(&[c(1.5, -0.5); 16], 3, 1.0).unwrap();
        assert_relative_eq!(
            (s.coeffs()[0] - c(1.5, -0.5) * (2.0 * PI).sqrt()).norm(),
            0.0,
            epsilon = 1e-14
        );
        assert!(s.coeffs()[1..].iter().all(|v| v.norm() < 1e-14));
    }

    #[test]
    fn project_rejects_aliasing() {
        assert!(matches!(
            project_farfield(&[c(1.0, 0.0); 8], 4, 1.0),
            Err(ModalError::Aliasing { needed: 9, .. })
        ));
    }

    #[test]
    fn project_recovers_bandlimited_synthesis() {
        let degree = 7;
        let coeffs: Vec<_> = (0..degree_count(degree, 2))
            .map(|i| c((i as f64 * 1.1).cos(), (i as f64 * 0.3).sin()))
            .collect();
        let s = ModalSpectrum::new(2, 1.0, degree, coeffs).unwrap();
        let m = 2 * degree + 1;
        let samples: Vec<_> = (0..m)
            .map(|n| s.farfield_value(2.0 * PI * n as f64 / m as f64).unwrap())
            .collect();
        let back = project_farfield(&samples, degree, 1.0).unwrap();
        for (a, b) in s.coeffs().iter().zip(back.coeffs()) {
            assert!((a - b).norm() < 1e-12);
        }
        let quad: f64 = samples.iter().map(|u| u.norm_sqr()).sum::<f64>() * 2.0 * PI / m as f64;
        assert_relative_eq!(back.farfield_norm().powi(2), quad, max_relative = 1e-10);
    }

    #[test]
    fn field_approaches_farfield_at_large_radius() {
        let coeffs: Vec<_> = (0..degree_count(3, 2)).map(|i| c(1.0, i as f64)).collect();
        let s = ModalSpectrum::new(2, 2.0, 3, coeffs).unwrap();
        let theta = 0.4;
        let ff = s.farfield_value(theta).unwrap();
        let gap = |r: f64| {
            let u = s.evaluate_field(r, theta).unwrap();
            (u * r.sqrt() * Complex64::from_polar(1.0, -2.0 * r) - ff).norm()
        };
        let (g1, g2) = (gap(100.0), gap(1000.0));
        assert!(g2 < g1);
        // O(1/r): tenfold radius gives roughly a tenth of the gap.
        assert!((g1 / g2 - 10.0).abs() < 1.0, "{g1} {g2}");
    }

    #[test]
    fn field_evaluation_handles_huge_degree_terms() {
        let mut s = ModalSpectrum::zeros(2, 1.0, 200).unwrap();
        s.set(ModeIndex::from_degree(200, 1, 2).unwrap(), c(1e-320, 0.0));
        let u = s.evaluate_field(1.0, 0.0).unwrap();
        assert!(u.norm().is_infinite() || u.norm() > 1e10);
        s.set(ModeIndex::from_degree(200, 1, 2).unwrap(), c(0.0, 0.0));
        assert_eq!(s.evaluate_field(1.0, 0.0).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn tail_and_truncation_partition_the_spectrum() {
        let coeffs: Vec<_> = (0..degree_count(5, 2)).map(|i| c(i as f64, 1.0)).collect();
        let s = ModalSpectrum::new(2, 1.0, 5, coeffs).unwrap();
        let rebuilt = s.truncated(2).sum(&s.tail(2)).unwrap();
        assert_eq!(rebuilt, s);
        assert_eq!(s.truncated(9), s);
        assert_eq!(s.tail(9).farfield_norm(), 0.0);
    }

    #[test]
    fn text_round_trip() {
        let coeffs: Vec<_> = (0..degree_count(2, 3))
            .map(|i| c(0.1 * i as f64, -1.0 / 3.0))
            .collect();
        let s = ModalSpectrum::new(3, 1.25, 2, coeffs).unwrap();
        assert_eq!(ModalSpectrum::from_text(&s.to_text()).unwrap(), s);
        assert!(ModalSpectrum::from_text("2 1.0 1\n2 1 0 0\n").is_err());
        assert!(ModalSpectrum::from_text("2 1.0 1\n1 3 0 0\n").is_err());
    }

    #[test]
    fn sobolev_examples() {
        let mut a = Bicoefficients::new();
        a.insert((0, 0), c(3.0, 4.0));
        assert_eq!(sobolev_norm(&a, 1.3, 2), 5.0);
        assert_eq!(ys_norm(&a, 1.3, 2), 5.0);
        a.insert((3, 7), c(1.0, 0.0));
        a.insert((2, 1), c(0.0, 2.0));
        assert_relative_eq!(sobolev_norm(&a, 0.0, 2), 30f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn annulus_validation() {
        assert!(AnnulusGeometry::new(1.0, 1.5, 2.0).is_ok());
        assert!(AnnulusGeometry::new(1.0, 1.0, 2.0).is_err());
        assert!(AnnulusGeometry::new(1.0, 2.0, 1.5).is_err());
        let g = AnnulusGeometry::new(2.0, 1.5, 2.0).unwrap();
        assert!(g.contains(3.5) && !g.contains(4.5));
    }
}
