//! Instability radii for the inverse obstacle problem at fixed wavenumber:
//! decay caps on far-field bicoefficients, the error level ε̃(k) separating
//! the two branches, the radius δ(ε, k) and the ε-net count it beats.
//!
//! Everything is computed in log scale; the quantities are double
//! exponentials in k.

use crate::direct2d::{mie_bicoefficient_ln_abs, DirectError};
use crate::geometry::packing_lower_bound;
use std::f64::consts::E;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InstabilityError {
    #[error("invalid configuration: {0}")]
    BadConfig(String),
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error(transparent)]
    Direct(#[from] DirectError),
}

/// 1 + √(e²−1)/e ≈ 1.9299.
pub fn a_default() -> f64 {
    1.0 + (E * E - 1.0).sqrt() / E
}

/// (1 + √(e²−1))/e ≈ 1.2978, the other reading of the same expression.
pub fn a_alternative() -> f64 {
    (1.0 + (E * E - 1.0).sqrt()) / E
}

/// C̃ fitted on the unit disc (see [`fit_c_tilde_disc`]), rounded up.
pub const FITTED_C_TILDE_DISC: f64 = 5.0;

pub const C4: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InstabilityConfig {
    /// Sobolev index s ≥ 0.
    pub s: f64,
    pub dim: usize,
    pub m: usize,
    pub beta: f64,
    pub r0: f64,
    pub delta0: f64,
    /// Lowest admissible wavenumber (used for N = 2 only).
    pub k0: f64,
    pub c_tilde: f64,
    pub a: f64,
    /// The constant c̃ ≥ 1 of the decay threshold c̃·e·z(k).
    pub c_small: f64,
}

impl Default for InstabilityConfig {
    fn default() -> Self {
        Self {
            s: 0.0,
            dim: 2,
            m: 2,
            beta: 2.0,
            r0: 1.0,
            delta0: 0.1,
            k0: 0.5,
            c_tilde: FITTED_C_TILDE_DISC,
            a: a_default(),
            c_small: 1.0,
        }
    }
}

impl InstabilityConfig {
    pub fn validate(&self) -> Result<(), InstabilityError> {
        let bad = |m: String| Err(InstabilityError::BadConfig(m));
        if !(self.dim == 2 || self.dim == 3) {
            return bad(format!("dimension must be 2 or 3, got {}", self.dim));
        }
        if !(self.s >= 0.0 && self.s.is_finite()) {
            return bad(format!("s must be nonnegative, got {}", self.s));
        }
        if self.m < 2 {
            return bad(format!("m must be at least 2, got {}", self.m));
        }
        if !(self.r0 > 0.0 && self.delta0 > 0.0 && self.beta > 0.0 && self.k0 > 0.0) {
            return bad("beta, R0, delta0 and k0 must be positive".into());
        }
        if !(self.c_tilde >= 2.0) {
            return bad(format!("C-tilde must be at least 2, got {}", self.c_tilde));
        }
        if !(self.a > 1.0) {
            return bad(format!("a must exceed 1, got {}", self.a));
        }
        if !(self.c_small >= 1.0) {
            return bad(format!(
                "c-tilde (small) must be at least 1, got {}",
                self.c_small
            ));
        }
        Ok(())
    }

    fn n(&self) -> f64 {
        self.dim as f64
    }

    /// R = R0 + δ0.
    pub fn r(&self) -> f64 {
        self.r0 + self.delta0
    }

    /// R̃ = R + 1.
    pub fn r_tilde(&self) -> f64 {
        self.r() + 1.0
    }

    /// B̃(s) = max{c̃e², 4s + 3N/2 + 1}.
    pub fn b_tilde(&self) -> f64 {
        (self.c_small * E * E).max(4.0 * self.s + 1.5 * self.n() + 1.0)
    }

    /// C5 = 2C4(2C̃ + 1).
    pub fn c5(&self) -> f64 {
        2.0 * C4 * (2.0 * self.c_tilde + 1.0)
    }

    /// Sobolev weight exponent 2s + N − 1/2.
    fn weight_exponent(&self) -> f64 {
        2.0 * self.s + self.n() - 0.5
    }

    fn check_k(&self, k: f64) -> Result<(), InstabilityError> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(InstabilityError::Domain(format!(
                "k must be positive, got {k}"
            )));
        }
        if self.dim == 2 && k < self.k0 {
            return Err(InstabilityError::Domain(format!(
                "k = {k} is below k0 = {}",
                self.k0
            )));
        }
        Ok(())
    }
}

/// z(k) = max{1, k·R̃}.
pub fn z_of_k(k: f64, r_tilde: f64) -> f64 {
    (k * r_tilde).max(1.0)
}

/// Z(k) = B̃(s)·max{1, (R+1)k}.
pub fn big_z(k: f64, cfg: &InstabilityConfig) -> f64 {
    cfg.b_tilde() * z_of_k(k, cfg.r_tilde())
}

/// ln f(t) = (2s+N−1/2)·ln(1+t) − (t + (N−3)/2)·ln(at/(e·z(k))),
/// for t ≥ max{c̃·e·z(k), 2s+N} where f decreases.
pub fn ln_f_decay(t: f64, k: f64, cfg: &InstabilityConfig) -> Result<f64, InstabilityError> {
    let z = z_of_k(k, cfg.r_tilde());
    let lo = (cfg.c_small * E * z).max(2.0 * cfg.s + cfg.n());
    if !(t >= lo * (1.0 - 1e-14)) {
        return Err(InstabilityError::Domain(format!(
            "f needs t >= {lo}, got {t}"
        )));
    }
    Ok(ln_f_unchecked(t, z, cfg))
}

fn ln_f_unchecked(t: f64, z: f64, cfg: &InstabilityConfig) -> f64 {
    cfg.weight_exponent() * t.ln_1p() - (t + (cfg.n() - 3.0) / 2.0) * (cfg.a * t / (E * z)).ln()
}

/// ln(2C4·C̃·z(k)^{(N−1)/2}·f(t)), the left side of the equation for t̃.
fn ln_net_error(t: f64, z: f64, cfg: &InstabilityConfig) -> f64 {
    (2.0 * C4 * cfg.c_tilde).ln() + 0.5 * (cfg.n() - 1.0) * z.ln() + ln_f_unchecked(t, z, cfg)
}

/// ln ε̃(k) = ln(2C4·C̃·z(k)^{(N−1)/2}·f(B̃(s)·z(k))).
pub fn ln_eps_tilde(k: f64, cfg: &InstabilityConfig) -> Result<f64, InstabilityError> {
    cfg.validate()?;
    cfg.check_k(k)?;
    let z = z_of_k(k, cfg.r_tilde());
    Ok(ln_net_error(cfg.b_tilde() * z, z, cfg))
}

pub fn eps_tilde(k: f64, cfg: &InstabilityConfig) -> Result<f64, InstabilityError> {
    Ok(ln_eps_tilde(k, cfg)?.exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// ε ≥ ε̃(k): the net is cut at Z(k).
    Large,
    /// ε < ε̃(k): the net is cut at t̃ > Z(k).
    Small,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Large => "large",
            Branch::Small => "small",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InstabilityReport {
    pub k: f64,
    pub eps: f64,
    pub ln_eps_tilde: f64,
    pub branch: Branch,
    /// Solution t̃ > Z(k) of 2C4·C̃·z^{(N−1)/2}·f(t̃) = ε (Small branch only).
    pub t_tilde: Option<f64>,
    /// Cut-off used in the counting: Z(k) or t̃.
    pub cutoff: f64,
    pub ln_delta: f64,
    pub delta: f64,
    /// Lower bound on d_H(Σ1, Σ2) when the far-field difference has norm 2ε.
    pub dh_lower_bound: f64,
    /// ln of the ε-net cardinality bound.
    pub net_log_size: f64,
    /// ln of the packing count 2^{−N}(δ0/δ)^{(N−1)/m} at the returned δ.
    pub pack_log: f64,
    /// t̂ = 2 ln(b̃(k,s)/ε) and the radius with t̂ in place of t̃ (Small branch only).
    pub t_hat: Option<f64>,
    pub delta_relaxed: Option<f64>,
    /// δ0·2^{−m(N+3)/(N−1)}·(1 + (8/3)ln(b̃/ε))^{−2m−m/(N−1)} (Small branch only).
    pub delta_closed_form: Option<f64>,
}

/// ln δ for a net cut at T: ln δ0 − m(N+3)/(N−1)·ln 2 − 2m·ln(1+T)
/// − m/(N−1)·ln ln(C5(1+T)^{2s+N−1/2}/ε).
pub fn ln_delta_at_cutoff(t: f64, eps: f64, cfg: &InstabilityConfig) -> f64 {
    let (n, m) = (cfg.n(), cfg.m as f64);
    let inner = cfg.c5().ln() + cfg.weight_exponent() * t.ln_1p() - eps.ln();
    cfg.delta0.ln()
        - m * (n + 3.0) / (n - 1.0) * std::f64::consts::LN_2
        - 2.0 * m * t.ln_1p()
        - m / (n - 1.0) * inner.ln()
}

/// d_H lower bound for a far-field difference of H^s norm `diff` with a net cut at T.
pub fn dh_lower_bound(t: f64, diff: f64, cfg: &InstabilityConfig) -> f64 {
    ln_delta_at_cutoff(t, 0.5 * diff, cfg).exp()
}

/// ln of the ε-net size bound 4(1+T)^{2N−2}·ln(C5(1+T)^{2s+N−1/2}/ε).
pub fn net_log_size_at_cutoff(t: f64, eps: f64, cfg: &InstabilityConfig) -> f64 {
    let n = cfg.n();
    4.0 * (1.0 + t).powf(2.0 * n - 2.0)
        * (cfg.c5().ln() + cfg.weight_exponent() * t.ln_1p() - eps.ln())
}

/// b̃(k,s) = 2C4·C̃·(3e/(2a))^{2s+N−1/2}·z(k)^{2s+3N/2−1}, in log scale.
pub fn ln_b_tilde_small(k: f64, cfg: &InstabilityConfig) -> f64 {
    let z = z_of_k(k, cfg.r_tilde());
    (2.0 * C4 * cfg.c_tilde).ln()
        + cfg.weight_exponent() * (3.0 * E / (2.0 * cfg.a)).ln()
        + (2.0 * cfg.s + 1.5 * cfg.n() - 1.0) * z.ln()
}

/// Solve 2C4·C̃·z^{(N−1)/2}·f(t) = ε for t > Z(k), given ε < ε̃(k).
pub fn solve_t_tilde(eps: f64, k: f64, cfg: &InstabilityConfig) -> Result<f64, InstabilityError> {
    let z = z_of_k(k, cfg.r_tilde());
    let target = eps.ln();
    let mut lo = big_z(k, cfg);
    if ln_net_error(lo, z, cfg) <= target {
        return Err(InstabilityError::Domain(format!(
            "eps = {eps} is not below eps-tilde(k)"
        )));
    }
    let mut hi = 2.0 * lo;
    while ln_net_error(hi, z, cfg) > target {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(InstabilityError::Domain("no bracket for t-tilde".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ln_net_error(mid, z, cfg) > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// δ(ε, k) and the quantities of its derivation.
pub fn delta_of_eps(
    eps: f64,
    k: f64,
    cfg: &InstabilityConfig,
) -> Result<InstabilityReport, InstabilityError> {
    cfg.validate()?;
    cfg.check_k(k)?;
    if !(eps > 0.0 && eps < 1.0 / E) {
        return Err(InstabilityError::Domain(format!(
            "need 0 < eps < 1/e, got {eps}"
        )));
    }
    let ln_et = ln_eps_tilde(k, cfg)?;
    let (branch, t_tilde) = if eps.ln() >= ln_et {
        (Branch::Large, None)
    } else {
        (Branch::Small, Some(solve_t_tilde(eps, k, cfg)?))
    };
    let cutoff = t_tilde.unwrap_or_else(|| big_z(k, cfg));
    let ln_delta = ln_delta_at_cutoff(cutoff, eps, cfg);
    let delta = ln_delta.exp();
    let (t_hat, delta_relaxed, delta_closed_form) = match branch {
        Branch::Large => (None, None, None),
        Branch::Small => {
            let ln_ratio = ln_b_tilde_small(k, cfg) - eps.ln();
            let t_hat = 2.0 * ln_ratio;
            let (n, m) = (cfg.n(), cfg.m as f64);
            let closed = cfg.delta0.ln()
                - m * (n + 3.0) / (n - 1.0) * std::f64::consts::LN_2
                - (2.0 * m + m / (n - 1.0)) * (1.0 + 8.0 / 3.0 * ln_ratio).ln();
            (
                Some(t_hat),
                Some(ln_delta_at_cutoff(t_hat, eps, cfg).exp()),
                Some(closed.exp()),
            )
        }
    };
    Ok(InstabilityReport {
        k,
        eps,
        ln_eps_tilde: ln_et,
        branch,
        t_tilde,
        cutoff,
        ln_delta,
        delta,
        dh_lower_bound: dh_lower_bound(cutoff, 2.0 * eps, cfg),
        net_log_size: net_log_size_at_cutoff(cutoff, eps, cfg),
        pack_log: packing_lower_bound(delta, cfg.delta0, cfg.dim, cfg.m),
        t_hat,
        delta_relaxed,
        delta_closed_form,
    })
}

/// ln of the ε-net size bound at (ε, k), cut at Z(k) or t̃ by branch.
pub fn epsnet_log_size(eps: f64, k: f64, cfg: &InstabilityConfig) -> Result<f64, InstabilityError> {
    Ok(delta_of_eps(eps, k, cfg)?.net_log_size)
}

/// ln of the cap on |b_{i,l}(k)| with max{γ(v_i), γ(v_l)} = γ: below c̃·e·z(k)
/// the flat cap ln C̃, beyond it
/// ln C̃ + ((N−1)/2)ln z − (γ + (N−3)/2)·ln(aγ/(e·z)).
pub fn coeff_decay_bound(gamma_max: usize, k: f64, cfg: &InstabilityConfig) -> f64 {
    let z = z_of_k(k, cfg.r_tilde());
    let g = gamma_max as f64;
    if g < cfg.c_small * E * z {
        return cfg.c_tilde.ln();
    }
    cfg.c_tilde.ln() + 0.5 * (cfg.n() - 1.0) * z.ln()
        - (g + (cfg.n() - 3.0) / 2.0) * (cfg.a * g / (E * z)).ln()
}

/// Smallest C̃ ≥ 2 for which the disc of radius a obeys the bicoefficient caps
/// at every k of the grid and every degree γ ≤ 4·e·z(k).
pub fn fit_c_tilde_disc(
    a: f64,
    ks: &[f64],
    cfg: &InstabilityConfig,
) -> Result<f64, InstabilityError> {
    let unit = InstabilityConfig {
        c_tilde: 1.0,
        ..*cfg
    };
    let mut worst = 2f64.ln();
    for &k in ks {
        let z = z_of_k(k, cfg.r_tilde());
        let top = (4.0 * E * z).ceil() as usize;
        for gamma in 0..=top {
            let measured = mie_bicoefficient_ln_abs(k, a, gamma)?;
            worst = worst.max(measured - coeff_decay_bound(gamma, k, &unit));
        }
    }
    Ok(worst.exp())
}

/// First admissible k with ε̃(k) ≤ ε, by bisection on the decreasing ε̃; the
/// lowest admissible k when the Large branch already holds there.
pub fn k_threshold(eps: f64, cfg: &InstabilityConfig) -> Result<f64, InstabilityError> {
    let k_lo = if cfg.dim == 2 { cfg.k0 } else { 1e-12 };
    let target = eps.ln();
    if ln_eps_tilde(k_lo, cfg)? <= target {
        return Ok(k_lo);
    }
    let (mut lo, mut hi) = (k_lo, 2.0 * k_lo.max(1.0 / cfg.r_tilde()));
    while ln_eps_tilde(hi, cfg)? > target {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ln_eps_tilde(mid, cfg)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    Ok(hi)
}
