//! Bessel functions of the first and second kind for real order ν ≥ 0 and
//! real argument z > 0.
//!
//! The ratio J'_ν/J_ν comes from its continued fraction, a backward
//! recurrence carries it down to a base order μ, and the pair (J_μ, Y_μ) is
//! fixed either by Temme's series (z < 2) or by Steed's continued fraction
//! for H_μ'/H_μ (z ≥ 2) together with the Wronskian. Y is then carried back
//! up to ν by forward recurrence. Both recurrences rescale on the fly and
//! report the accumulated scale, so results that leave the f64 range are
//! still available as a log-magnitude.

use std::f64::consts::{FRAC_PI_2, PI};

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAXIT: usize = 2_000_000;
const RESCALE_AT: f64 = 1e200;
const SMALL_ARG: f64 = 2.0;

/// A real number stored as `mantissa · exp(ln_scale)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledReal {
    pub mantissa: f64,
    pub ln_scale: f64,
}

impl ScaledReal {
    pub fn plain(x: f64) -> Self {
        Self {
            mantissa: x,
            ln_scale: 0.0,
        }
    }

    /// Natural log of the magnitude; `-inf` for an exact zero.
    pub fn ln_abs(&self) -> f64 {
        self.mantissa.abs().ln() + self.ln_scale
    }

    pub fn signum(&self) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            self.mantissa.signum()
        }
    }

    /// Collapse to an f64. Underflows to ±0 and overflows to ±inf silently;
    /// use [`ScaledReal::ln_abs`] to tell.
    pub fn value(&self) -> f64 {
        if self.ln_scale == 0.0 {
            return self.mantissa;
        }
        self.signum() * self.ln_abs().exp()
    }
}

/// 1/Γ(1+x) = Σ a_k x^k, accurate for |x| ≤ 1/2.
const RECIP_GAMMA_1P: [f64; 28] = [
    1.0,
    0.5772156649015329,
    -0.6558780715202539,
    -0.04200263503409524,
    0.16653861138229148,
    -0.04219773455554433,
    -0.009621971527876973,
    0.0072189432466631,
    -0.0011651675918590652,
    -0.00021524167411495098,
    0.0001280502823881162,
    -2.013485478078824e-05,
    -1.2504934821426706e-06,
    1.133027231981696e-06,
    -2.056338416977607e-07,
    6.116095104481416e-09,
    5.002007644469223e-09,
    -1.18127457048702e-09,
    1.0434267116911005e-10,
    7.782263439905071e-12,
    -3.696805618642206e-12,
    5.100370287454476e-13,
    -2.0583260535665066e-14,
    -5.348122539423018e-15,
    1.2267786282382608e-15,
    -1.1812593016974588e-16,
    1.1866922547516004e-18,
    1.4123806553180319e-18,
];

/// Temme's auxiliary gamma combinations for |μ| ≤ 1/2:
/// returns (Γ₁(μ), Γ₂(μ), 1/Γ(1+μ), 1/Γ(1−μ)).
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    let mu2 = mu * mu;
    let mut even = 0.0;
    let mut odd_over_mu = 0.0;
    let mut p = 1.0;
    for pair in RECIP_GAMMA_1P.chunks(2) {
        even += pair[0] * p;
        odd_over_mu += pair[1] * p;
        p *= mu2;
    }
    let gam1 = -odd_over_mu;
    let gam2 = even;
    (gam1, gam2, gam2 - mu * gam1, gam2 + mu * gam1)
}

/// J_ν(z) and Y_ν(z) in scaled form. Requires ν ≥ 0, z > 0 (not checked here).
pub(crate) fn jy_scaled(nu: f64, x: f64) -> (ScaledReal, ScaledReal) {
    if nu == 0.5 {
        let amp = (2.0 / (PI * x)).sqrt();
        let (s, c) = x.sin_cos();
        return (ScaledReal::plain(amp * s), ScaledReal::plain(-amp * c));
    }
    let nl = if x < SMALL_ARG {
        (nu + 0.5).floor() as usize
    } else {
        (nu - x + 1.5).floor().max(0.0) as usize
    };
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    // Continued fraction for J'_ν/J_ν (modified Lentz).
    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 0..MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            converged = true;
            break;
        }
    }
    debug_assert!(converged, "J ratio continued fraction did not converge");

    // Backward recurrence from ν down to μ, rescaling to stay in range.
    let mut rjl = isign;
    let mut rjpl = h * rjl;
    let rjl1 = rjl;
    let mut ln_growth = 0.0;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
        if rjl.abs() > RESCALE_AT {
            rjl /= RESCALE_AT;
            rjpl /= RESCALE_AT;
            ln_growth += RESCALE_AT.ln();
        }
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let (rjmu, mut rymu, mut ry1);
    if x < SMALL_ARG {
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fact = if pimu.abs() < EPS {
            1.0
        } else {
            pimu / pimu.sin()
        };
        let d = -x2.ln();
        let e = xmu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
        let mut ff = 2.0 / PI * fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let ee = e.exp();
        let mut p = ee / (gampl * PI);
        let mut q = 1.0 / (ee * PI * gammi);
        let pimu2 = 0.5 * pimu;
        let fact3 = if pimu2.abs() < EPS {
            1.0
        } else {
            pimu2.sin() / pimu2
        };
        let r = PI * pimu2 * fact3 * fact3;
        let mut cc = 1.0;
        let dd = -x2 * x2;
        let mut sum = ff + r * q;
        let mut sum1 = p;
        for i in 1..MAXIT {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            cc *= dd / fi;
            p /= fi - xmu;
            q /= fi + xmu;
            let del = cc * (ff + r * q);
            sum += del;
            let del1 = cc * p - fi * del;
            sum1 += del1;
            if del.abs() < (1.0 + sum.abs()) * EPS {
                break;
            }
        }
        rymu = -sum;
        ry1 = -sum1 * xi2;
        let rymup = xmu * xi * rymu - ry1;
        rjmu = w / (rymup - f * rymu);
    } else {
        // Steed's continued fraction for p + iq = (H_μ'/H_μ).
        let mut a = 0.25 - xmu2;
        let mut p = -0.5 * xi;
        let mut q = 1.0;
        let br = 2.0 * x;
        let mut bi = 2.0;
        let mut fact = a * xi / (p * p + q * q);
        let mut cr = br + q * fact;
        let mut ci = bi + p * fact;
        let mut den = br * br + bi * bi;
        let mut dr = br / den;
        let mut di = -bi / den;
        let mut dlr = cr * dr - ci * di;
        let mut dli = cr * di + ci * dr;
        let mut temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        for i in 2..MAXIT {
            a += 2.0 * (i as f64 - 1.0);
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if dr.abs() + di.abs() < FPMIN {
                dr = FPMIN;
            }
            fact = a / (cr * cr + ci * ci);
            cr = br + cr * fact;
            ci = bi - ci * fact;
            if cr.abs() + ci.abs() < FPMIN {
                cr = FPMIN;
            }
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (dlr - 1.0).abs() + dli.abs() < EPS {
                break;
            }
        }
        let gam = (p - f) / q;
        let mag = (w / ((p - f) * gam + q)).sqrt();
        rjmu = mag.copysign(rjl);
        rymu = rjmu * gam;
        let rymup = rymu * (p + q / gam);
        ry1 = xmu * xi * rymu - rymup;
    }

    let j = ScaledReal {
        mantissa: rjl1 * (rjmu / rjl),
        ln_scale: -ln_growth,
    };

    // Forward recurrence for Y from μ up to ν.
    let mut ln_y = 0.0;
    for i in 1..=nl {
        let rytemp = (xmu + i as f64) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = rytemp;
        if ry1.abs() > RESCALE_AT {
            ry1 /= RESCALE_AT;
            rymu /= RESCALE_AT;
            ln_y += RESCALE_AT.ln();
        }
    }
    let y = ScaledReal {
        mantissa: rymu,
        ln_scale: ln_y,
    };
    (normalize(j), normalize(y))
}

/// Fold the mantissa into the scale whenever a scale is present, so that
/// `value()` round-trips exactly for in-range results.
fn normalize(s: ScaledReal) -> ScaledReal {
    if s.ln_scale == 0.0 || s.mantissa == 0.0 {
        return s;
    }
    let ln = s.ln_abs();
    if ln.abs() < 700.0 {
        ScaledReal::plain(s.signum() * ln.exp())
    } else {
        let m = s.mantissa.abs();
        let e = m.ln().floor();
        ScaledReal {
            mantissa: s.signum() * (m.ln() - e).exp(),
            ln_scale: s.ln_scale + e,
        }
    }
}

/// ln |H⁽¹⁾_ν(z)|, finite for every ν ≥ 0, z > 0.
pub(crate) fn hankel_ln_abs(nu: f64, x: f64) -> f64 {
    let (j, y) = jy_scaled(nu, x);
    let lj = j.ln_abs();
    let ly = y.ln_abs();
    let m = lj.max(ly);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + 0.5 * ((2.0 * (lj - m)).exp() + (2.0 * (ly - m)).exp()).ln()
}

/// Phase-free large-argument reference: √(2/(πz))·e^{i(z − νπ/2 − π/4)}.
pub(crate) fn large_argument_leading(nu: f64, x: f64) -> num_complex::Complex64 {
    let phase = x - nu * FRAC_PI_2 - 0.25 * PI;
    num_complex::Complex64::from_polar((2.0 / (PI * x)).sqrt(), phase)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn temme_gammas_at_zero() {
        let (g1, g2, gp, gm) = temme_gammas(0.0);
        assert!((g1 + 0.5772156649015329).abs() < 1e-15);
        assert!((g2 - 1.0).abs() < 1e-15);
        assert_eq!(gp, gm);
    }

    #[test]
    fn recip_gamma_series_matches_known_values() {
        // 1/Γ(1.5) = 2/√π, 1/Γ(0.5) = 1/√π
        let (_, _, gp, gm) = temme_gammas(0.5);
        assert!((gp - 2.0 / PI.sqrt()).abs() < 1e-15);
        assert!((gm - 1.0 / PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn half_order_closed_form() {
        let (j, y) = jy_scaled(0.5, 1.0);
        let amp = (2.0 / PI).sqrt();
        assert!((j.value() - amp * 1f64.sin()).abs() < 1e-16);
        assert!((y.value() + amp * 1f64.cos()).abs() < 1e-16);
    }

    #[test]
    fn scaled_values_survive_overflow() {
        let (j, y) = jy_scaled(200.0, 1.0);
        assert_eq!(j.value(), 0.0);
        assert!(y.value().is_infinite());
        // ln|Y_ν(z)| ≈ ln Γ(ν) + ν ln(2/z) − ln π for z ≪ √ν
        assert!(y.ln_abs() > 700.0 && y.ln_abs() < 1000.0);
        assert!(j.ln_abs() < -700.0);
    }
}
