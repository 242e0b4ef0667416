//! The three-regime envelope of |H⁽¹⁾_ν(z)| and its empirical calibration.

use super::bounds::{eta2, round_up_2sig};
use super::{bessel, Argument, Order, SpecfunError};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegimeLabel {
    Oscillatory,
    Transition,
    Evanescent,
}

impl RegimeLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeLabel::Oscillatory => "oscillatory",
            RegimeLabel::Transition => "transition",
            RegimeLabel::Evanescent => "evanescent",
        }
    }
}

/// Constants (z₀, C₀, A₀) of the regime envelope.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnvelopeConstants {
    z0: f64,
    c0: f64,
    a0: f64,
}

/// C̃₀ = max{2, 1 + C₀·2^{2/3}}: the smallest value ≥ 2 with
/// ν + C₀ν^{1/3} ≤ C̃₀ν for every ν ≥ 1/2.
pub fn c0_tilde(c0: f64) -> f64 {
    (1.0 + c0 * 2f64.powf(2.0 / 3.0)).max(2.0)
}

/// c₁ calibrated on ν ≤ 200, z ∈ [4, 400]; see [`calibrate_hy_ratio`].
pub const CALIBRATED_HY_RATIO: f64 = 0.16;

impl EnvelopeConstants {
    /// (z₀, C₀, A₀) = (4, 0.5, 1.4), the best of C₀ ∈ {0.25, 0.5, …, 2} on
    /// the grid ν ≤ 200, z ∈ [1, 400] (ratio 1.05).
    pub fn calibrated() -> Self {
        Self {
            z0: 4.0,
            c0: 0.5,
            a0: 1.4,
        }
    }

    /// Validates z₀ ≥ 1, C₀ > 0, A₀ ≥ 1 and 1 − C₀z₀^{−2/3} > 0.
    pub fn new(z0: f64, c0: f64, a0: f64) -> Result<Self, SpecfunError> {
        if !(z0 >= 1.0 && c0 > 0.0 && a0 >= 1.0) || !(z0.is_finite() && a0.is_finite()) {
            return Err(SpecfunError::Domain(format!(
                "envelope constants need z0 >= 1, C0 > 0, A0 >= 1; got ({z0}, {c0}, {a0})"
            )));
        }
        if 1.0 - c0 * z0.powf(-2.0 / 3.0) <= 0.0 {
            return Err(SpecfunError::Domain(format!(
                "1 - C0*z0^(-2/3) must be positive; got C0 = {c0}, z0 = {z0}"
            )));
        }
        Ok(Self { z0, c0, a0 })
    }

    pub fn z0(&self) -> f64 {
        self.z0
    }
    pub fn c0(&self) -> f64 {
        self.c0
    }
    pub fn a0(&self) -> f64 {
        self.a0
    }
    pub fn c0_tilde(&self) -> f64 {
        c0_tilde(self.c0)
    }

    /// z₀ ≥ C̃₀·max{2, (N−2)/2}, and z₀ ≤ C̃₀ν ⇒ C₀ν^{1/3} ≤ ν/2.
    pub fn satisfies_side_conditions(&self, dim: usize) -> bool {
        self.z0 >= min_z0(self.c0, dim) * (1.0 - 1e-12)
    }
}

/// Smallest z₀ meeting the side conditions for given C₀ and dimension.
fn min_z0(c0: f64, dim: usize) -> f64 {
    let ct = c0_tilde(c0);
    let by_dim = ct * 2f64.max((dim as f64 - 2.0) / 2.0);
    // C₀ν^{1/3} ≤ ν/2 ⇔ ν ≥ (2C₀)^{3/2}, needed for every ν ≥ z₀/C̃₀.
    let by_extra = ct * (2.0 * c0).powf(1.5);
    // 1 − C₀z₀^{−2/3} > 0 ⇔ z₀ > C₀^{3/2}.
    let by_positivity = c0.powf(1.5) * (1.0 + 1e-9);
    by_dim.max(by_extra).max(by_positivity).max(1.0)
}

fn regime(nu: f64, z: f64, c0: f64) -> RegimeLabel {
    if nu == 0.0 {
        return RegimeLabel::Oscillatory;
    }
    let width = c0 * nu.cbrt();
    if z - nu > width {
        RegimeLabel::Oscillatory
    } else if nu - z > width {
        RegimeLabel::Evanescent
    } else {
        RegimeLabel::Transition
    }
}

/// Regime of (ν, z); boundary ties resolve to Transition.
pub fn classify_regime(
    nu: Order,
    z: Argument,
    c: &EnvelopeConstants,
) -> Result<RegimeLabel, SpecfunError> {
    check_z0(z.get(), c)?;
    Ok(regime(nu.get(), z.get(), c.c0))
}

fn check_z0(z: f64, c: &EnvelopeConstants) -> Result<(), SpecfunError> {
    if z < c.z0 {
        return Err(SpecfunError::Domain(format!(
            "envelope needs z >= z0 = {}; got z = {z}",
            c.z0
        )));
    }
    Ok(())
}

/// ln of the regime's reference magnitude (the envelope without A₀).
fn ln_reference(nu: f64, z: f64, label: RegimeLabel) -> f64 {
    match label {
        RegimeLabel::Oscillatory => -0.25 * ((z - nu) * (z + nu)).ln(),
        RegimeLabel::Transition => -nu.ln() / 3.0,
        RegimeLabel::Evanescent => {
            eta2(nu, z).expect("evanescent regime has z < nu") - 0.25 * ((nu - z) * (nu + z)).ln()
        }
    }
}

/// ln of the (lower, upper) envelope and the regime used.
pub fn envelope_bounds_ln(
    nu: Order,
    z: Argument,
    c: &EnvelopeConstants,
) -> Result<(f64, f64, RegimeLabel), SpecfunError> {
    check_z0(z.get(), c)?;
    let label = regime(nu.get(), z.get(), c.c0);
    let r = ln_reference(nu.get(), z.get(), label);
    let la = c.a0.ln();
    Ok((r - la, r + la, label))
}

/// (lower, upper) envelope for |H⁽¹⁾_ν(z)|. Values outside the f64 range
/// saturate; use [`envelope_bounds_ln`] for extreme orders.
pub fn envelope_bounds(
    nu: Order,
    z: Argument,
    c: &EnvelopeConstants,
) -> Result<(f64, f64), SpecfunError> {
    let (lo, hi, _) = envelope_bounds_ln(nu, z, c)?;
    Ok((lo.exp(), hi.exp()))
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CalibrationError {
    #[error("calibration grid has no point with z >= z0 for any candidate")]
    EmptyGrid,
    #[error(
        "no candidate brackets the grid with A0 <= 100 (best A0 = {best_a0} at nu = {nu}, z = {z})"
    )]
    TooWide { best_a0: f64, nu: f64, z: f64 },
    #[error("invalid candidate: {0}")]
    Candidate(String),
}

/// Geometric-in-z, uniform-in-ν grid: ν ∈ {0, 0.5, …, nu_max}, z = z_min·1.05^i ≤ z_max.
pub fn calibration_grid(nu_max: f64, z_min: f64, z_max: f64) -> Vec<(Order, Argument)> {
    let mut zs = Vec::new();
    let mut z = z_min;
    while z <= z_max * (1.0 + 1e-12) {
        zs.push(z);
        z *= 1.05;
    }
    let n_nu = (nu_max / 0.5).floor() as usize;
    let mut grid = Vec::with_capacity((n_nu + 1) * zs.len());
    for i in 0..=n_nu {
        let nu = Order(0.5 * i as f64);
        for &z in &zs {
            grid.push((nu, Argument(z)));
        }
    }
    grid
}

/// Smallest A₀ (two significant digits, rounded up) over the candidates C₀,
/// each paired with the smallest z₀ that meets the side conditions for N = 2.
/// Grid points below that z₀ lie outside the envelope's hypothesis and are
/// skipped.
pub fn calibrate_envelope(
    grid: &[(Order, Argument)],
    c0_candidates: &[f64],
) -> Result<EnvelopeConstants, CalibrationError> {
    calibrate_envelope_dim(grid, c0_candidates, 2)
}

pub(crate) fn calibrate_envelope_dim(
    grid: &[(Order, Argument)],
    c0_candidates: &[f64],
    dim: usize,
) -> Result<EnvelopeConstants, CalibrationError> {
    // |H| only depends on the point, so compute it once.
    let ln_h: Vec<f64> = grid
        .iter()
        .map(|(nu, z)| bessel::hankel_ln_abs(nu.get(), z.get()))
        .collect();
    let mut best: Option<(f64, f64, f64, f64, f64)> = None; // (A0, z0, C0, worst nu, worst z)
    let mut saw_point = false;
    for &c0 in c0_candidates {
        if !(c0 > 0.0 && c0.is_finite()) {
            return Err(CalibrationError::Candidate(format!("C0 = {c0}")));
        }
        let z0 = round_up_2sig(min_z0(c0, dim));
        let mut worst = 0.0f64;
        let mut at = (f64::NAN, f64::NAN);
        for ((nu, z), &lh) in grid.iter().zip(&ln_h) {
            let (nu, z) = (nu.get(), z.get());
            if z < z0 {
                continue;
            }
            saw_point = true;
            let r = ln_reference(nu, z, regime(nu, z, c0));
            let gap = (lh - r).abs();
            if gap > worst {
                worst = gap;
                at = (nu, z);
            }
        }
        let a0 = round_up_2sig(worst.exp().max(1.0));
        let better = match best {
            None => true,
            Some((ba, bz, ..)) => a0 < ba || (a0 == ba && z0 < bz),
        };
        if better {
            best = Some((a0, z0, c0, at.0, at.1));
        }
    }
    if !saw_point {
        return Err(CalibrationError::EmptyGrid);
    }
    let (a0, z0, c0, nu, z) = best.ok_or(CalibrationError::EmptyGrid)?;
    if a0 > 100.0 {
        return Err(CalibrationError::TooWide { best_a0: a0, nu, z });
    }
    EnvelopeConstants::new(z0, c0, a0).map_err(|e| CalibrationError::Candidate(e.to_string()))
}

/// Smallest c₁ with (1−c₁)|Y_ν(z)| ≤ |H⁽¹⁾_ν(z)| ≤ (1+c₁)|Y_ν(z)| on the grid
/// points with xi0 ≤ z ≤ ν. The lower side always holds since |H| ≥ |Y|.
pub fn calibrate_hy_ratio(grid: &[(Order, Argument)], xi0: f64) -> f64 {
    let mut c1 = 0.0f64;
    for (nu, z) in grid {
        let (nu, z) = (nu.get(), z.get());
        if z < xi0 || z > nu {
            continue;
        }
        let (j, y) = bessel::jy_scaled(nu, z);
        let ratio = (j.ln_abs() - y.ln_abs()).exp();
        c1 = c1.max((1.0 + ratio * ratio).sqrt() - 1.0);
    }
    round_up_2sig(c1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(x: f64) -> Order {
        Order::new(x).unwrap()
    }
    fn a(x: f64) -> Argument {
        Argument::new(x).unwrap()
    }

    #[test]
    fn zero_order_is_oscillatory() {
        let c = EnvelopeConstants::new(10.0, 1.0, 3.0).unwrap();
        assert_eq!(
            classify_regime(o(0.0), a(25.0), &c).unwrap(),
            RegimeLabel::Oscillatory
        );
    }

    #[test]
    fn diagonal_is_transition() {
        for c0 in [0.1, 1.0, 5.0] {
            let c = EnvelopeConstants::new(30.0, c0, 3.0).unwrap();
            assert_eq!(
                classify_regime(o(25.0), a(30.0), &c).unwrap(),
                if 5.0 > c0 * 25f64.cbrt() {
                    RegimeLabel::Oscillatory
                } else {
                    RegimeLabel::Transition
                }
            );
            let c = EnvelopeConstants::new(25.0, c0, 3.0).unwrap();
            assert_eq!(
                classify_regime(o(25.0), a(25.0), &c).unwrap(),
                RegimeLabel::Transition
            );
        }
    }

    #[test]
    fn boundary_tie_is_transition() {
        // ν = 8: ν^{1/3} = 2 exactly, so z = ν + 2C₀ sits on the boundary.
        let c = EnvelopeConstants::new(5.0, 1.5, 3.0).unwrap();
        assert_eq!(
            classify_regime(o(8.0), a(11.0), &c).unwrap(),
            RegimeLabel::Transition
        );
        assert_eq!(
            classify_regime(o(8.0), a(11.0 + 1e-9), &c).unwrap(),
            RegimeLabel::Oscillatory
        );
    }

    #[test]
    fn rejects_below_z0() {
        let c = EnvelopeConstants::new(10.0, 1.0, 3.0).unwrap();
        assert!(classify_regime(o(1.0), a(9.0), &c).is_err());
        assert!(envelope_bounds(o(1.0), a(9.0), &c).is_err());
    }

    #[test]
    fn transition_bounds_at_order_1000() {
        let c = EnvelopeConstants::new(10.0, 1.0, 3.0).unwrap();
        let (lo, hi) = envelope_bounds(o(1000.0), a(1000.0), &c).unwrap();
        assert!((lo - 0.1 / 3.0).abs() < 1e-15);
        assert!((hi - 0.3).abs() < 1e-14);
    }

    #[test]
    fn oscillatory_zero_order_bounds() {
        let c = EnvelopeConstants::new(10.0, 1.0, 3.0).unwrap();
        let (lo, hi) = envelope_bounds(o(0.0), a(100.0), &c).unwrap();
        assert!((lo - 0.1 / 3.0).abs() < 1e-15);
        assert!((hi - 0.3).abs() < 1e-14);
    }

    #[test]
    fn singleton_calibration() {
        let grid = [(o(0.0), a(100.0))];
        let c = calibrate_envelope(&grid, &[1.0]).unwrap();
        let h = bessel::hankel_ln_abs(0.0, 100.0).exp();
        let want = (h * 10.0).max(1.0 / (h * 10.0)).max(1.0);
        assert_eq!(c.a0(), round_up_2sig(want));
    }

    #[test]
    fn side_conditions_hold_for_calibrated_constants() {
        let grid = calibration_grid(20.0, 5.0, 60.0);
        let c = calibrate_envelope(&grid, &[0.5, 1.0]).unwrap();
        assert!(c.satisfies_side_conditions(2));
        assert!(c.c0_tilde() >= 2.0);
    }

    #[test]
    fn c_tilde_covers_half_order() {
        for c0 in [0.3, 1.0, 2.0] {
            let ct = c0_tilde(c0);
            for nu in [0.5, 1.0, 3.0, 50.0] {
                assert!(nu + c0 * f64::cbrt(nu) <= ct * nu * (1.0 + 1e-12));
            }
        }
    }
}
