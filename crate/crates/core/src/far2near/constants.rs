//! Constants of the three frequency regimes, derived from the calibrated
//! Hankel envelope and the annulus.

use super::Far2NearError;
use crate::modal::AnnulusGeometry;
use crate::specfun::{unif_bounded_constant, EnvelopeConstants, CALIBRATED_HY_RATIO};
use std::f64::consts::E;

/// Free choices made before the constants are derived.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstantChoices {
    pub dim: usize,
    pub alpha: f64,
    /// Defaults to B0^{−1/2}, the log-midpoint of (1/B0, 1).
    pub b0: Option<f64>,
    /// Defaults to z0/R0.
    pub k0: Option<f64>,
    /// Declared wavenumber interval [k1, k2] of the bounded regime.
    pub bounded_interval: Option<(f64, f64)>,
    pub envelope: EnvelopeConstants,
    pub c1: f64,
}

impl Default for ConstantChoices {
    fn default() -> Self {
        Self {
            dim: 2,
            alpha: 1.0,
            b0: None,
            k0: None,
            bounded_interval: None,
            envelope: EnvelopeConstants::calibrated(),
            c1: CALIBRATED_HY_RATIO,
        }
    }
}

/// Constants of the bounded-wavenumber regime on [k1, k2].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundedConstants {
    pub k1: f64,
    pub k2: f64,
    /// k1·R0
    pub z1: f64,
    /// k2·B1·R0
    pub z2: f64,
    /// Uniform two-sided Hankel constant on [z1, z2].
    pub c_unif: f64,
    /// max{2C²/e, C⁴}
    pub a_tilde: f64,
    /// 1/B0
    pub b0_tilde: f64,
    /// max{N/2, e²z2/2}
    pub nu_hat0: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilityConstants {
    pub dim: usize,
    pub geometry: AnnulusGeometry,
    pub alpha: f64,
    pub c_alpha: f64,
    pub b0: f64,
    /// Smallest C ≥ e²/2 meeting the high-regime side conditions.
    pub c_high: f64,
    /// True when the side conditions pushed C above e²/2.
    pub c_enlarged: bool,
    /// √(C²−1)/C
    pub a: f64,
    /// a − log(4/3)
    pub a1: f64,
    /// log(e/2)
    pub a1_tilde: f64,
    /// A of the high regime.
    pub a_big: f64,
    /// Ã of the extreme regime.
    pub a_tilde: f64,
    /// B̃ = (N/2)·C
    pub b_tilde: f64,
    pub envelope: EnvelopeConstants,
    pub c0_tilde: f64,
    pub c1: f64,
    pub k0: f64,
    /// 3e·C̃0/2, the smallest B0 admitted by the extreme regime.
    pub b0_extreme_min: f64,
    pub bounded: Option<BoundedConstants>,
}

/// C_α = sup_{t ≥ e} log t / t^α = max{1, 1/(eα)}.
pub fn c_alpha(alpha: f64) -> f64 {
    (1.0 / (E * alpha)).max(1.0)
}

/// log(e/2)
pub const A1_TILDE: f64 = 0.306_852_819_440_054_7;

fn high_conditions_hold(c: f64, b0: f64, big_b0: f64, env: &EnvelopeConstants) -> bool {
    let a = (c * c - 1.0).sqrt() / c;
    c * (1.0 - env.c0() * env.z0().powf(-2.0 / 3.0)) >= 1.0
        && 2.0 * (1.0 - a).exp() / ((1.0 + a) * big_b0) <= b0
        && a >= 2.0 * (4.0f64 / 3.0).ln()
}

fn smallest_high_c(b0: f64, big_b0: f64, env: &EnvelopeConstants) -> f64 {
    let start = E * E / 2.0;
    if high_conditions_hold(start, b0, big_b0, env) {
        return start;
    }
    let mut lo = start;
    let mut hi = 2.0 * start;
    while !high_conditions_hold(hi, b0, big_b0, env) {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if high_conditions_hold(mid, b0, big_b0, env) {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    hi
}

impl StabilityConstants {
    pub fn derive(
        choices: &ConstantChoices,
        geometry: AnnulusGeometry,
    ) -> Result<Self, Far2NearError> {
        let env = choices.envelope;
        let dim = choices.dim;
        let bad = |m: String| Err(Far2NearError::BadInput(m));
        if dim < 2 {
            return bad(format!("dimension must be at least 2, got {dim}"));
        }
        if !(choices.alpha > 0.0 && choices.alpha.is_finite()) {
            return bad(format!("alpha must be positive, got {}", choices.alpha));
        }
        if !(choices.c1 >= 0.0 && choices.c1 < 1.0) {
            return bad(format!("c1 must lie in [0, 1), got {}", choices.c1));
        }
        if !env.satisfies_side_conditions(dim) {
            return Err(Far2NearError::SideConditions(format!(
                "z0 = {} is below the side-condition minimum for C0 = {}, N = {dim}",
                env.z0(),
                env.c0()
            )));
        }
        let big_b0 = geometry.b0();
        let b0 = choices.b0.unwrap_or(big_b0.powf(-0.5));
        if !(1.0 / big_b0 < b0 && b0 < 1.0) {
            return bad(format!(
                "b0 must lie in (1/B0, 1) = ({}, 1), got {b0}",
                1.0 / big_b0
            ));
        }
        let k0 = choices.k0.unwrap_or(env.z0() / geometry.r0());
        if k0 * geometry.r0() < env.z0() * (1.0 - 1e-12) {
            return bad(format!(
                "k0*R0 = {} must be at least z0 = {}",
                k0 * geometry.r0(),
                env.z0()
            ));
        }

        let c = smallest_high_c(b0, big_b0, &env);
        let a = (c * c - 1.0).sqrt() / c;
        let a1 = a - (4.0f64 / 3.0).ln();
        let (z0, c0, a0) = (env.z0(), env.c0(), env.a0());
        let c1 = choices.c1;

        let osc_floor =
            (2.0 * c0 * 0.5f64.powf(4.0 / 3.0) + c0 * c0 * 0.5f64.powf(2.0 / 3.0)).powf(-0.25);
        let a1_hat = a0 * (1.0 / z0.sqrt()).max(osc_floor);
        let a2_hat = a0 * 2f64.cbrt();
        let a3_hat = (1.0 + c1) / (1.0 - c1) * a0 * (2.0 / (a * a1.exp())).sqrt();
        let big_a1 = (a1_hat * z0.sqrt()).max(a2_hat * z0.sqrt()).max(a3_hat);
        let big_a2 = b0.sqrt() * a0 * a0 / a.sqrt();
        let a_big = (std::f64::consts::FRAC_PI_2 * big_a1 * big_a1).max(big_a2 * big_a2);
        let b_tilde = dim as f64 / 2.0 * c;

        let ct = env.c0_tilde();
        let c_hat = (c0 * z0.powf(4.0 / 3.0)).powf(-0.25).max(1.0);
        let a_hat = (2.0 * c0).powf(-0.25).max(1.0) * c_hat * a0 * a0;
        let a_tilde = (std::f64::consts::FRAC_PI_2 * a0 * a0 * ct / (ct * ct - 1.0).sqrt())
            .max(a_hat * a_hat);

        let bounded = match choices.bounded_interval {
            None => None,
            Some((k1, k2)) => {
                if !(0.0 < k1 && k1 < k2 && k2.is_finite()) {
                    return bad(format!(
                        "bounded interval needs 0 < k1 < k2, got [{k1}, {k2}]"
                    ));
                }
                let z1 = k1 * geometry.r0();
                let z2 = k2 * geometry.outer_radius();
                let nu_max = (4.0 * E * E * z2).max(40.0);
                let cu = unif_bounded_constant(z1, z2, nu_max);
                Some(BoundedConstants {
                    k1,
                    k2,
                    z1,
                    z2,
                    c_unif: cu,
                    a_tilde: (2.0 * cu * cu / E).max(cu.powi(4)),
                    b0_tilde: 1.0 / big_b0,
                    nu_hat0: (dim as f64 / 2.0).max(E * E * z2 / 2.0),
                })
            }
        };

        Ok(Self {
            dim,
            geometry,
            alpha: choices.alpha,
            c_alpha: c_alpha(choices.alpha),
            b0,
            c_high: c,
            c_enlarged: c > E * E / 2.0,
            a,
            a1,
            a1_tilde: A1_TILDE,
            a_big,
            a_tilde,
            b_tilde,
            envelope: env,
            c0_tilde: ct,
            c1,
            k0,
            b0_extreme_min: 1.5 * E * ct,
            bounded,
        })
    }

    /// Largest wavenumber of the high regime:
    /// (1/(B1R0))·(2/(3B̃))^{1+α}·(b0e^{a1}/2)^α·log(M/ε)/C_α.
    pub fn high_k_max(&self, epsilon: f64, m: f64) -> f64 {
        let al = self.alpha;
        (2.0 / (3.0 * self.b_tilde)).powf(1.0 + al)
            * (self.b0 * self.a1.exp() / 2.0).powf(al)
            * (m / epsilon).ln()
            / self.c_alpha
            / self.geometry.outer_radius()
    }

    /// Smallest wavenumber of the Lipschitz regime: C̃0·log(1/ε)/(log(4/3)·B0R0).
    pub fn lipschitz_k_min(&self, epsilon: f64) -> f64 {
        self.c0_tilde * (1.0 / epsilon).ln() / ((4.0f64 / 3.0).ln() * self.geometry.inner_radius())
    }

    /// Hölder exponent (log(1/b0)/C_α)·(b0e^{a1}/(3B̃))^α·(r/(B1R0))^{α/(1+α)}.
    pub fn holder_exponent(&self, r: f64) -> f64 {
        let al = self.alpha;
        (1.0 / self.b0).ln() / self.c_alpha
            * (self.b0 * self.a1.exp() / (3.0 * self.b_tilde)).powf(al)
            * (r / self.geometry.outer_radius()).powf(al / (1.0 + al))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom(b0: f64, b1: f64) -> AnnulusGeometry {
        AnnulusGeometry::new(1.2, b0, b1).unwrap()
    }

    #[test]
    fn c_alpha_is_one_above_omega() {
        // (1/α₀)^{1/α₀} = e at α₀ ≈ 0.567
        assert_eq!(c_alpha(0.5672), 1.0);
        assert_eq!(c_alpha(1.0), 1.0);
        assert!((c_alpha(0.1) - 1.0 / (0.1 * E)).abs() < 1e-15);
        // ln t ≤ C_α t^α on t ≥ e
        for al in [0.05, 0.2, 0.5] {
            let ca = c_alpha(al);
            for i in 0..2000 {
                let t = E * 1.01f64.powi(i);
                assert!(t.ln() <= ca * t.powf(al) * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn a1_tilde_is_log_e_over_two() {
        assert!((A1_TILDE - (E / 2.0).ln()).abs() < 1e-16);
    }

    #[test]
    fn derived_constants_meet_side_conditions() {
        for (b0, b1) in [(1.5, 2.0), (2.0, 3.0), (9.0, 10.0), (1.05, 1.2)] {
            let k = StabilityConstants::derive(&ConstantChoices::default(), geom(b0, b1)).unwrap();
            assert!(1.0 / b0 < k.b0 && k.b0 < 1.0);
            assert!(k.c_high >= E * E / 2.0);
            assert!(high_conditions_hold(k.c_high, k.b0, b0, &k.envelope));
            assert!(0.0 < k.a1 && k.a1 < 1.0);
            assert!(k.c0_tilde >= 2.0);
            assert!(k.k0 * 1.2 >= k.envelope.z0() * (1.0 - 1e-12));
        }
    }

    #[test]
    fn enlarges_c_for_thin_annulus() {
        let k = StabilityConstants::derive(&ConstantChoices::default(), geom(1.05, 1.2)).unwrap();
        assert!(k.c_enlarged);
        // the binding condition is tight at the returned C
        assert!(!high_conditions_hold(
            k.c_high * (1.0 - 1e-9),
            k.b0,
            1.05,
            &k.envelope
        ));
    }

    #[test]
    fn rejects_bad_choices() {
        let g = geom(2.0, 3.0);
        let mut ch = ConstantChoices {
            b0: Some(0.4),
            ..Default::default()
        };
        assert!(StabilityConstants::derive(&ch, g).is_err());
        ch.b0 = None;
        ch.k0 = Some(1.0);
        assert!(StabilityConstants::derive(&ch, g).is_err());
        ch.k0 = None;
        ch.bounded_interval = Some((0.3, 0.1));
        assert!(StabilityConstants::derive(&ch, g).is_err());
    }

    #[test]
    fn holder_exponent_at_outer_radius_has_unit_radius_factor() {
        let k = StabilityConstants::derive(&ConstantChoices::default(), geom(2.0, 3.0)).unwrap();
        let full = (1.0 / k.b0).ln() * k.b0 * k.a1.exp() / (3.0 * k.b_tilde);
        assert!((k.holder_exponent(3.6) - full).abs() < 1e-15);
        assert!(k.holder_exponent(2.4) < full);
    }
}
