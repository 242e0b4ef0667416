//! Real-order Bessel and Hankel functions and executable versions of their
//! asymptotic bounds.

mod bessel;
mod bounds;
mod envelope;

pub use bessel::ScaledReal;
pub use bounds::{
    eta2, large_argument_bounds, matviyenko_remainder, unif_bounded_constant, RemainderCap,
    RemainderCaps, TURNING_POINT_J, TURNING_POINT_Y,
};
pub use envelope::{
    c0_tilde, calibrate_envelope, calibrate_hy_ratio, calibration_grid, classify_regime,
    envelope_bounds, envelope_bounds_ln, CalibrationError, EnvelopeConstants, RegimeLabel,
    CALIBRATED_HY_RATIO,
};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecfunError {
    #[error("order must be a finite nonnegative number, got {0}")]
    BadOrder(f64),
    #[error("argument must be a finite positive number, got {0}")]
    BadArgument(f64),
    #[error("value underflows f64 (ln|value| = {ln_abs})")]
    Underflow { ln_abs: f64 },
    #[error("value overflows f64 (ln|value| = {ln_abs})")]
    Overflow { ln_abs: f64 },
    #[error("domain violation: {0}")]
    Domain(String),
}

/// Bessel order ν ≥ 0.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Order(f64);

impl Order {
    pub fn new(nu: f64) -> Result<Self, SpecfunError> {
        if nu.is_finite() && nu >= 0.0 {
            Ok(Self(nu))
        } else {
            Err(SpecfunError::BadOrder(nu))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Argument z > 0.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Argument(f64);

impl Argument {
    pub fn new(z: f64) -> Result<Self, SpecfunError> {
        if z.is_finite() && z > 0.0 {
            Ok(Self(z))
        } else {
            Err(SpecfunError::BadArgument(z))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

fn checked(s: ScaledReal) -> Result<f64, SpecfunError> {
    let v = s.value();
    if v.is_infinite() {
        return Err(SpecfunError::Overflow { ln_abs: s.ln_abs() });
    }
    if s.mantissa != 0.0 && (v == 0.0 || v.abs() < f64::MIN_POSITIVE) {
        return Err(SpecfunError::Underflow { ln_abs: s.ln_abs() });
    }
    Ok(v)
}

/// J_ν(z) and Y_ν(z) as scaled values that never overflow.
pub fn bessel_jy_scaled(nu: Order, z: Argument) -> (ScaledReal, ScaledReal) {
    bessel::jy_scaled(nu.0, z.0)
}

pub fn bessel_j(nu: Order, z: Argument) -> Result<f64, SpecfunError> {
    checked(bessel::jy_scaled(nu.0, z.0).0)
}

pub fn bessel_y(nu: Order, z: Argument) -> Result<f64, SpecfunError> {
    checked(bessel::jy_scaled(nu.0, z.0).1)
}

/// H⁽¹⁾_ν(z) = J_ν(z) + iY_ν(z).
pub fn hankel1(nu: Order, z: Argument) -> Result<Complex64, SpecfunError> {
    let (j, y) = bessel::jy_scaled(nu.0, z.0);
    let im = checked(y)?;
    // J may underflow while Y stays representable; J is then negligible.
    let re = match checked(j) {
        Ok(v) => v,
        Err(SpecfunError::Underflow { .. }) => 0.0,
        Err(e) => return Err(e),
    };
    Ok(Complex64::new(re, im))
}

/// ln |H⁽¹⁾_ν(z)|, finite for all valid inputs.
pub fn hankel1_ln_abs(nu: Order, z: Argument) -> f64 {
    bessel::hankel_ln_abs(nu.0, z.0)
}

/// Unchecked helpers for internal hot loops where the caller has already
/// validated ν ≥ 0 and z > 0.
#[cfg(test)]
pub(crate) fn hankel1_raw(nu: f64, z: f64) -> Complex64 {
    let (j, y) = bessel::jy_scaled(nu, z);
    Complex64::new(j.value(), y.value())
}

pub(crate) fn hankel1_ln_abs_raw(nu: f64, z: f64) -> f64 {
    bessel::hankel_ln_abs(nu, z)
}

pub(crate) fn bessel_jy_scaled_raw(nu: f64, z: f64) -> (ScaledReal, ScaledReal) {
    bessel::jy_scaled(nu, z)
}

/// √(2/(πz))·e^{i(z − νπ/2 − π/4)}, the leading large-argument term.
pub fn hankel1_leading(nu: Order, z: Argument) -> Complex64 {
    bessel::large_argument_leading(nu.0, z.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn o(x: f64) -> Order {
        Order::new(x).unwrap()
    }
    fn a(x: f64) -> Argument {
        Argument::new(x).unwrap()
    }

    #[test]
    fn j0_at_tiny_argument_is_one() {
        assert!((bessel_j(o(0.0), a(1e-8)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn j_half_vanishes_at_pi() {
        assert!(bessel_j(o(0.5), a(PI)).unwrap().abs() < 1e-12);
    }

    #[test]
    fn y_half_closed_form() {
        let want = -(2.0 / PI).sqrt() * 1f64.cos();
        assert!((bessel_y(o(0.5), a(1.0)).unwrap() - want).abs() < 1e-14);
        assert!((want + 0.43110).abs() < 1e-5);
    }

    #[test]
    fn hankel_half_magnitude() {
        let h = hankel1(o(0.5), a(1.0)).unwrap();
        assert!((h.norm() - (2.0 / PI).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn hankel_large_argument_magnitude() {
        let h = hankel1(o(0.0), a(50.0)).unwrap();
        let lead = (2.0 / (PI * 50.0)).sqrt();
        assert!((h.norm() / lead - 1.0).abs() < 0.02);
    }

    #[test]
    fn y0_small_argument_log_law() {
        // |Y₀(z)| = (2/π)(log(2/z) − γ) + O(z² log z); the leading log alone
        // is approached only logarithmically.
        const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
        let mut prev_gap = f64::INFINITY;
        for z in [1e-3, 1e-6, 1e-9, 1e-12] {
            let y = bessel_y(o(0.0), a(z)).unwrap();
            assert!(y < 0.0);
            let lead = 2.0 / PI * (2.0 / z).ln();
            assert!((y.abs() - (lead - 2.0 / PI * EULER_GAMMA)).abs() < 1e-5 * lead);
            let gap = 1.0 - y.abs() / lead;
            assert!(gap > 0.0 && gap < prev_gap);
            prev_gap = gap;
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(Order::new(-1.0).is_err());
        assert!(Argument::new(0.0).is_err());
        assert!(Argument::new(f64::NAN).is_err());
    }

    #[test]
    fn overflow_and_underflow_are_signalled() {
        assert!(matches!(
            bessel_j(o(200.0), a(1.0)),
            Err(SpecfunError::Underflow { .. })
        ));
        assert!(matches!(
            bessel_y(o(200.0), a(1.0)),
            Err(SpecfunError::Overflow { .. })
        ));
        assert!(hankel1_ln_abs(o(200.0), a(1.0)).is_finite());
    }
}
