//! Closed-form bound evaluators for the Hankel function.

use super::{bessel, SpecfunError};
use std::f64::consts::PI;

/// lim ξ^{1/3}·J_ξ(ξ) = Γ(1/3)/(3^{1/6}·2^{2/3}·π).
pub const TURNING_POINT_J: f64 = 0.447_307_318_396_472_3;
/// lim ξ^{1/3}·Y_ξ(ξ) = −3^{1/3}·Γ(1/3)/(2^{2/3}·π).
pub const TURNING_POINT_Y: f64 = -0.774_759_002_060_078_8;

/// η₂(ν, z) = ν·log(ν/z + √((ν/z)²−1)) − √(ν²−z²) for 0 < z < ν.
///
/// Evaluated as ν·(atanh q − q) with q = √(1 − z²/ν²), switching to the
/// Taylor series of atanh q − q for small q to avoid cancellation.
pub fn eta2(nu: f64, z: f64) -> Result<f64, SpecfunError> {
    if !(z > 0.0 && z < nu && nu.is_finite()) {
        return Err(SpecfunError::Domain(format!(
            "eta2 needs 0 < z < nu, got nu = {nu}, z = {z}"
        )));
    }
    let ratio = z / nu;
    let q = ((1.0 - ratio) * (1.0 + ratio)).sqrt();
    let tail = if q < 0.1 {
        let q2 = q * q;
        let mut term = q * q2;
        let mut sum: f64 = 0.0;
        let mut k = 3.0;
        while term / k > 1e-18 * sum.max(f64::MIN_POSITIVE) {
            sum += term / k;
            term *= q2;
            k += 2.0;
        }
        sum
    } else {
        q.atanh() - q
    };
    Ok(nu * tail)
}

/// g, g̃ = (2/3)·g^{−3/2} and the remainder cap exp(g̃)·g̃ on one side of
/// the turning point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RemainderCap {
    pub g: f64,
    pub g_tilde: f64,
    pub cap: f64,
}

impl RemainderCap {
    fn from_g(g: f64) -> Self {
        let g_tilde = 2.0 / (3.0 * g.powf(1.5));
        Self {
            g,
            g_tilde,
            cap: g_tilde.exp() * g_tilde,
        }
    }
}

/// Remainder caps of the uniform expansions: the oscillatory side is set
/// when z > ν, the evanescent side when z < ν.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RemainderCaps {
    pub oscillatory: Option<RemainderCap>,
    pub evanescent: Option<RemainderCap>,
}

pub fn matviyenko_remainder(nu: f64, z: f64) -> Result<RemainderCaps, SpecfunError> {
    if !(nu >= 0.0 && z > 0.0) || nu == z {
        return Err(SpecfunError::Domain(format!(
            "remainder caps need nu >= 0, z > 0, nu != z; got nu = {nu}, z = {z}"
        )));
    }
    if z > nu {
        Ok(RemainderCaps {
            oscillatory: Some(RemainderCap::from_g((z - nu) / z.cbrt())),
            evanescent: None,
        })
    } else {
        Ok(RemainderCaps {
            oscillatory: None,
            evanescent: Some(RemainderCap::from_g((nu - z) / nu.cbrt())),
        })
    }
}

/// Two-sided bound on |H⁽¹⁾_ν(z)| valid for z ≥ C·ν with C > 1:
/// (2/(πz))^{1/2}·[1 ∓ s·exp(s/z)/z] with s = (2/3)(C/(C−1))^{3/2}, the upper
/// side carrying the extra factor (C²/(C²−1))^{1/4}.
pub fn large_argument_bounds(nu: f64, z: f64, c: f64) -> Result<(f64, f64), SpecfunError> {
    if !(c > 1.0) || !(z > 0.0) || z < c * nu {
        return Err(SpecfunError::Domain(format!(
            "large-argument bound needs C > 1 and z >= C*nu; got C = {c}, nu = {nu}, z = {z}"
        )));
    }
    let s = 2.0 / 3.0 * (c / (c - 1.0)).powf(1.5);
    let rem = s * (s / z).exp() / z;
    let lead = (2.0 / (PI * z)).sqrt();
    let widen = (c * c / (c * c - 1.0)).powf(0.25);
    Ok((lead * (1.0 - rem), lead * widen * (1.0 + rem)))
}

/// Smallest C ≥ 1 (rounded up to two significant digits) such that on
/// z ∈ [z1, z2]
///
///   C⁻¹ ≤ |H₀(z)| ≤ C,   |H₀(z)| ≤ C·2/√(eπz),
///   C⁻¹ ≤ |H_ν(z)| / ((2/(πν))^{1/2}·(ez/(2ν))^{−ν}) ≤ C   for ν ≥ 1/2,
///
/// sampled on ν ∈ {1/2, 1, …, nu_max} and a geometric z-grid with ratio
/// 1.01 including both endpoints.
pub fn unif_bounded_constant(z1: f64, z2: f64, nu_max: f64) -> f64 {
    assert!(0.0 < z1 && z1 < z2, "need 0 < z1 < z2");
    let mut zs = Vec::new();
    let mut z = z1;
    while z < z2 {
        zs.push(z);
        z *= 1.01;
    }
    zs.push(z2);
    let mut worst: f64 = 0.0;
    for &z in &zs {
        let ln_h0 = bessel::hankel_ln_abs(0.0, z);
        let ln_ref0 = (2.0 / (std::f64::consts::E * PI * z).sqrt()).ln();
        worst = worst.max(ln_h0.abs()).max(ln_h0 - ln_ref0);
        let mut nu = 0.5;
        while nu <= nu_max {
            let ln_ref =
                0.5 * (2.0 / (PI * nu)).ln() - nu * (std::f64::consts::E * z / (2.0 * nu)).ln();
            let d = bessel::hankel_ln_abs(nu, z) - ln_ref;
            worst = worst.max(d.abs());
            nu += 0.5;
        }
    }
    round_up_2sig(worst.exp().max(1.0))
}

/// Round a positive number up to two significant digits.
pub(crate) fn round_up_2sig(x: f64) -> f64 {
    if x <= 0.0 || !x.is_finite() {
        return x;
    }
    let e = x.log10().floor() as i32 - 1;
    let m = (x / 10f64.powi(e) * (1.0 - 1e-15)).ceil();
    if e < 0 {
        m / 10f64.powi(-e)
    } else {
        m * 10f64.powi(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta2_example_value() {
        let want = 2.0 * (2.0 + 3f64.sqrt()).ln() - 3f64.sqrt();
        assert!((eta2(2.0, 1.0).unwrap() - want).abs() < 1e-14);
        assert!((want - 0.901865).abs() < 1e-6);
    }

    #[test]
    fn eta2_vanishes_at_turning_point() {
        let nu = 30.0;
        assert!(eta2(nu, nu * (1.0 - 1e-8)).unwrap() <= 1e-3);
    }

    #[test]
    fn eta2_rejects_outside_domain() {
        assert!(eta2(1.0, 1.0).is_err());
        assert!(eta2(1.0, 2.0).is_err());
    }

    #[test]
    fn eta2_series_and_closed_form_agree_at_switch() {
        let nu = 10.0;
        let q: f64 = 0.1;
        let z = nu * (1.0 - q * q).sqrt();
        let direct = nu * (q.atanh() - q);
        assert!((eta2(nu, z).unwrap() / direct - 1.0).abs() < 1e-12);
    }

    #[test]
    fn remainder_example() {
        let caps = matviyenko_remainder(0.0, 1000.0).unwrap();
        let osc = caps.oscillatory.unwrap();
        assert!((osc.g - 100.0).abs() < 1e-9);
        assert!((osc.g_tilde - 2.0 / 3.0 * 1e-3).abs() < 1e-15);
        assert!((osc.cap - 6.67e-4).abs() < 1e-6);
        assert!(caps.evanescent.is_none());
        assert!(matviyenko_remainder(5.0, 5.0).is_err());
    }

    #[test]
    fn remainder_cap_shrinks_with_separation() {
        let near = matviyenko_remainder(90.0, 100.0)
            .unwrap()
            .oscillatory
            .unwrap();
        let far = matviyenko_remainder(50.0, 100.0)
            .unwrap()
            .oscillatory
            .unwrap();
        assert!(far.cap < near.cap);
    }

    #[test]
    fn round_up_two_digits() {
        assert_eq!(round_up_2sig(2.31), 2.4);
        assert_eq!(round_up_2sig(2.4), 2.4);
        assert_eq!(round_up_2sig(0.0123), 0.013);
        assert_eq!(round_up_2sig(17.01), 18.0);
    }
}
