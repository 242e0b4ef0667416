//! Separation of variables for the sound-soft disc of radius a centred at the
//! origin: u^s = −Σ_m d_m i^m H⁽¹⁾_m(kr) e^{im(θ−θω)} with d_m = J_m(ka)/H⁽¹⁾_m(ka).

use super::{check_k, DirectError};
use crate::modal::{ModalError, ModalSpectrum};
use crate::specfun::{bessel_jy_scaled_raw, ScaledReal};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_4, PI, TAU};

/// Highest mode kept: ⌈ka + 10(ka)^{1/3} + 20⌉.
pub fn mie_mode_count(k: f64, a: f64) -> usize {
    let ka = k * a;
    (ka + 10.0 * ka.cbrt() + 20.0).ceil() as usize
}

/// J/Y as an f64 without forming either factor.
fn ratio(num: ScaledReal, den: ScaledReal) -> f64 {
    if num.mantissa == 0.0 {
        return 0.0;
    }
    num.signum() * den.signum() * (num.ln_abs() - den.ln_abs()).exp()
}

/// d_m = J_m(ka)/H⁽¹⁾_m(ka) for m = 0..=M.
pub fn mie_coefficients(k: f64, a: f64) -> Result<Vec<Complex64>, DirectError> {
    check_k(k)?;
    check_k(a)?;
    let i = Complex64::i();
    Ok((0..=mie_mode_count(k, a))
        .map(|m| {
            let (j, y) = bessel_jy_scaled_raw(m as f64, k * a);
            if j.ln_abs() <= y.ln_abs() {
                let q = ratio(j, y);
                q / (q + i)
            } else {
                let p = ratio(y, j);
                Complex64::new(1.0, 0.0) / (1.0 + i * p)
            }
        })
        .collect())
}

/// ln|d_m| = ln|J_m(ka)| − ln|H⁽¹⁾_m(ka)|, finite far beyond f64 range of d_m.
pub fn mie_coefficient_ln_abs(k: f64, a: f64, m: usize) -> Result<f64, DirectError> {
    check_k(k)?;
    check_k(a)?;
    let (j, y) = bessel_jy_scaled_raw(m as f64, k * a);
    let scale = j.ln_abs().max(y.ln_abs());
    let h = ((j.ln_abs() - scale).exp().powi(2) + (y.ln_abs() - scale).exp().powi(2)).sqrt();
    Ok(j.ln_abs() - scale - h.ln())
}

/// ln of the modulus of the disc's far-field bicoefficient b_{i,l} on the
/// real orthonormal basis: A(x̂, ω) = 2π·c₀·Σ_m d_m (v_{cos m}v_{cos m} + v_{sin m}v_{sin m}),
/// so |b| = 2π·√(2/(πk))·|d_m| on the diagonal of degree m and zero off it.
pub fn mie_bicoefficient_ln_abs(k: f64, a: f64, m: usize) -> Result<f64, DirectError> {
    Ok((TAU * (2.0 / (PI * k)).sqrt()).ln() + mie_coefficient_ln_abs(k, a, m)?)
}

/// −√(2/(πk))·e^{−iπ/4}, the far-field factor of −H⁽¹⁾_m(kr) i^m.
fn mie_farfield_factor(k: f64) -> Complex64 {
    Complex64::from_polar(-(2.0 / (PI * k)).sqrt(), -FRAC_PI_4)
}

/// u∞(θ) for incidence angle θω.
pub fn mie_farfield(
    k: f64,
    a: f64,
    omega_angle: f64,
    theta: f64,
) -> Result<Complex64, DirectError> {
    let d = mie_coefficients(k, a)?;
    let phi = theta - omega_angle;
    let sum: Complex64 = d[0]
        + d.iter()
            .enumerate()
            .skip(1)
            .map(|(m, dm)| dm * (2.0 * (m as f64 * phi).cos()))
            .sum::<Complex64>();
    Ok(mie_farfield_factor(k) * sum)
}

/// u^s at x, |x| ≥ a.
pub fn mie_scattered(
    k: f64,
    a: f64,
    omega_angle: f64,
    x: [f64; 2],
) -> Result<Complex64, DirectError> {
    let d = mie_coefficients(k, a)?;
    let r = x[0].hypot(x[1]);
    if r < a {
        return Err(DirectError::InsideObstacle);
    }
    let phi = x[1].atan2(x[0]) - omega_angle;
    let mut sum = Complex64::new(0.0, 0.0);
    for (m, dm) in d.iter().enumerate() {
        if dm.norm() == 0.0 {
            continue;
        }
        // d_m·H_m(kr) with H_m possibly beyond f64 range.
        let (j, y) = bessel_jy_scaled_raw(m as f64, k * r);
        let scale = j.ln_abs().max(y.ln_abs());
        let h = Complex64::new(
            j.signum() * (j.ln_abs() - scale).exp(),
            y.signum() * (y.ln_abs() - scale).exp(),
        );
        let term = dm / dm.norm() * h * (dm.norm().ln() + scale).exp();
        let im = Complex64::i().powu(m as u32 % 4);
        let angular = if m == 0 {
            1.0
        } else {
            2.0 * (m as f64 * phi).cos()
        };
        sum += term * im * angular;
    }
    Ok(-sum)
}

/// Far-field coefficients on the real orthonormal circle basis.
pub fn mie_spectrum(k: f64, a: f64, omega_angle: f64) -> Result<ModalSpectrum, DirectError> {
    let d = mie_coefficients(k, a)?;
    let c0 = mie_farfield_factor(k);
    let degree = d.len() - 1;
    let mut coeffs = Vec::with_capacity(2 * degree + 1);
    coeffs.push(c0 * d[0] * (2.0 * PI).sqrt());
    for (m, dm) in d.iter().enumerate().skip(1) {
        let (s, c) = (m as f64 * omega_angle).sin_cos();
        coeffs.push(c0 * dm * (2.0 * c * PI.sqrt()));
        coeffs.push(c0 * dm * (2.0 * s * PI.sqrt()));
    }
    ModalSpectrum::from_coeffs(2, k, coeffs).map_err(|e: ModalError| match e {
        ModalError::BadWavenumber(_) => DirectError::BadWavenumber(k),
        _ => DirectError::Singular,
    })
}

#[cfg(test)]
mod tests {
    use super::super::*;

    #[test]
    fn log_coefficients_agree_with_direct_ones() {
        let d = mie_coefficients(3.0, 1.0).unwrap();
        for (m, dm) in d.iter().enumerate().take(30) {
            let ln = mie_coefficient_ln_abs(3.0, 1.0, m).unwrap();
            assert!((ln - dm.norm().ln()).abs() < 1e-10, "{m}");
        }
        // far past double range
        let deep = mie_coefficient_ln_abs(1.0, 1.0, 400).unwrap();
        assert!(deep < -3000.0 && deep.is_finite());
    }

    #[test]
    fn optical_theorem_holds_for_mie() {
        for k in [0.5, 5.0, 20.0] {
            let d = mie_coefficients(k, 1.0).unwrap();
            let norm2 = 4.0 / k
                * (d[0].norm_sqr() + 2.0 * d.iter().skip(1).map(|z| z.norm_sqr()).sum::<f64>());
            let fwd = mie_farfield(k, 1.0, 0.0, 0.0).unwrap();
            let rhs = 2.0 * (TAU / k).sqrt() * (Complex64::from_polar(1.0, -FRAC_PI_4) * fwd).im;
            assert!(
                (norm2 - rhs).abs() < 1e-12 * norm2.max(1.0),
                "{k}: {norm2} vs {rhs}"
            );
        }
    }

    #[test]
    fn spectrum_matches_direct_sums() {
        let (k, a, w) = (5.0, 1.0, 0.7);
        let s = mie_spectrum(k, a, w).unwrap();
        for theta in [0.0, 1.0, 4.0] {
            let direct = mie_farfield(k, a, w, theta).unwrap();
            assert!((s.farfield_value(theta).unwrap() - direct).norm() < 1e-13);
        }
        // the modal outgoing wave reproduces the scattered field
        for (r, theta) in [(2.0, 0.3), (1.5, 2.5), (6.0, 5.0)] {
            let x = [r * f64::cos(theta), r * f64::sin(theta)];
            let direct = mie_scattered(k, a, w, x).unwrap();
            let modal = s.evaluate_field(r, theta).unwrap();
            assert!(
                (modal - direct).norm() < 1e-12 * direct.norm().max(1.0),
                "{r}: {modal} vs {direct}"
            );
        }
    }

    #[test]
    fn total_field_vanishes_on_the_disc() {
        let (k, a) = (7.0, 1.3);
        for theta in [0.0, 0.9, 3.3] {
            let x = [a * f64::cos(theta), a * f64::sin(theta)];
            let ui = IncidentWave::from_angle(k, 0.2).unwrap().value(x);
            let us = mie_scattered(k, a, 0.2, x).unwrap();
            assert!((ui + us).norm() < 1e-12);
        }
    }

    #[test]
    fn nystrom_matches_mie() {
        for k in [1.0, 5.0, 10.0] {
            let sys = assemble_cfie(&crate::geometry::StarBoundary::disc(1.0), k, 256).unwrap();
            let m = 256;
            let ff = scatter_farfield(&sys, 0.4, m).unwrap();
            let (mut num, mut den) = (0.0, 0.0);
            for (i, v) in ff.iter().enumerate() {
                let want = mie_farfield(k, 1.0, 0.4, TAU * i as f64 / m as f64).unwrap();
                num += (v - want).norm_sqr();
                den += want.norm_sqr();
            }
            let rel = (num / den).sqrt();
            assert!(rel < 1e-8, "k = {k}: {rel}");
            let wave = IncidentWave::from_angle(k, 0.4).unwrap();
            let psi = solve_density(&sys, &wave).unwrap();
            let x = [2.0 * 0.3f64.cos(), 2.0 * 0.3f64.sin()];
            let us = eval_scattered(
                &crate::geometry::StarBoundary::disc(1.0),
                sys.grid(),
                &psi,
                k,
                x,
            )
            .unwrap();
            let want = mie_scattered(k, 1.0, 0.4, x).unwrap();
            assert!(
                (us - want).norm() < 1e-8 * want.norm().max(1.0),
                "k = {k}: {us} vs {want}"
            );
        }
    }
}
