//! Near-field reconstruction from noisy far-field data by spectral cutoff,
//! with certified error bounds in the bounded, high and extreme wavenumber
//! regimes.
//!
//! The cutoff degree comes from the index equation
//!
//!   (2n/(e^a·k·r))^{2n}·ε² = b^{2n}·M²,
//!
//! which balances the amplified noise on kept modes against the a priori
//! decay of the discarded tail.

mod constants;
pub mod trial;

pub use constants::{c_alpha, BoundedConstants, ConstantChoices, StabilityConstants, A1_TILDE};

use crate::modal::{AnnulusGeometry, ModalError, ModalSpectrum};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Far2NearError {
    #[error("invalid input: {0}")]
    BadInput(String),
    #[error("side conditions fail: {0}")]
    SideConditions(String),
    #[error("index equation has no admissible solution: need {lhs} >= {rhs}")]
    NoSolution { lhs: f64, rhs: f64 },
    #[error("constants were derived for a different annulus")]
    GeometryMismatch,
    #[error(transparent)]
    Modal(#[from] ModalError),
}

/// Data of one reconstruction: far-field error ε, a priori bound M on
/// ∂B_{R0}, wavenumber and evaluation radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilityInputs {
    pub epsilon: f64,
    pub m: f64,
    pub k: f64,
    pub r: f64,
    pub geometry: AnnulusGeometry,
}

impl StabilityInputs {
    pub fn new(
        epsilon: f64,
        m: f64,
        k: f64,
        r: f64,
        geometry: AnnulusGeometry,
    ) -> Result<Self, Far2NearError> {
        if !(epsilon > 0.0 && epsilon <= m && m.is_finite()) {
            return Err(Far2NearError::BadInput(format!(
                "need 0 < epsilon <= M, got epsilon = {epsilon}, M = {m}"
            )));
        }
        if !(k > 0.0 && k.is_finite()) {
            return Err(Far2NearError::BadInput(format!(
                "wavenumber must be positive, got {k}"
            )));
        }
        let slack = 1e-12 * geometry.outer_radius();
        if r < geometry.inner_radius() - slack || r > geometry.outer_radius() + slack {
            return Err(Far2NearError::BadInput(format!(
                "r = {r} lies outside [{}, {}]",
                geometry.inner_radius(),
                geometry.outer_radius()
            )));
        }
        Ok(Self {
            epsilon,
            m,
            k,
            r,
            geometry,
        })
    }

    pub fn log_ratio(&self) -> f64 {
        (self.m / self.epsilon).ln()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Regime {
    Bounded,
    High,
    Extreme,
    Lipschitz,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Bounded => "bounded",
            Regime::High => "high",
            Regime::Extreme => "extreme",
            Regime::Lipschitz => "lipschitz",
        }
    }
}

/// Real root n of the index equation, the cutoff degree j0 and ν0 = j0 + (N−2)/2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationSolution {
    pub n: f64,
    pub j0: usize,
    pub nu0: f64,
}

impl TruncationSolution {
    /// The degree with 2ν0 − 1 ≤ 2n < 2ν0 + 1.
    fn from_n(n: f64, dim: usize) -> Self {
        let shift = (dim as f64 - 2.0) / 2.0;
        let j0 = (n + 0.5 - shift).floor().max(0.0) as usize;
        Self {
            n,
            j0,
            nu0: j0 as f64 + shift,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityReport {
    pub regime: Regime,
    /// Certified bound on the L²(∂B_r) reconstruction error; +∞ when a
    /// hypothesis fails.
    pub bound: f64,
    pub truncation: Option<TruncationSolution>,
    pub constants_used: StabilityConstants,
    pub hypothesis_ok: bool,
    pub failed_condition: Option<String>,
    /// Hölder exponent β1 of the high regime at this radius.
    pub holder_exponent: Option<f64>,
}

impl StabilityReport {
    pub(crate) fn failed(regime: Regime, constants: &StabilityConstants, why: String) -> Self {
        Self {
            regime,
            bound: f64::INFINITY,
            truncation: None,
            constants_used: *constants,
            hypothesis_ok: false,
            failed_condition: Some(why),
            holder_exponent: None,
        }
    }
}

/// Root n ≥ floor of log(M/ε) = n·log(2n/(b·e^a·kr)), by doubling then
/// bisection. The residual is decreasing once 2n/(b·e^a·kr) ≥ 1/e, so the
/// search starts there at the earliest.
pub fn solve_index_equation(
    log_ratio: f64,
    b: f64,
    a: f64,
    kr: f64,
    floor: f64,
) -> Result<f64, Far2NearError> {
    let scale = b * a.exp() * kr / 2.0;
    let g = |n: f64| log_ratio - n * (n / scale).ln();
    let lo0 = floor.max(scale / std::f64::consts::E);
    let g_lo = g(lo0);
    // Roundoff at a threshold wavenumber must not turn the boundary case away.
    let tol = 1e-12 * log_ratio.abs().max(1.0);
    if g_lo < 0.0 && g_lo >= -tol {
        return Ok(lo0);
    }
    if g_lo < 0.0 {
        return Err(Far2NearError::NoSolution {
            lhs: log_ratio,
            rhs: lo0 * (lo0 / scale).ln(),
        });
    }
    let mut lo = lo0;
    let mut hi = lo0.max(scale);
    while g(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm == 0.0 {
            return Ok(mid);
        }
        if gm > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn check_geometry(inputs: &StabilityInputs, c: &StabilityConstants) -> Result<(), Far2NearError> {
    if inputs.geometry == c.geometry {
        Ok(())
    } else {
        Err(Far2NearError::GeometryMismatch)
    }
}

/// Regime parameters (a, b, floor of n) of the index equation.
fn index_parameters(
    inputs: &StabilityInputs,
    c: &StabilityConstants,
    regime: Regime,
) -> Result<(f64, f64, f64), Far2NearError> {
    match regime {
        Regime::Bounded => {
            let bc = c.bounded.ok_or_else(|| {
                Far2NearError::BadInput("bounded regime needs a declared [k1, k2]".into())
            })?;
            Ok((c.a1_tilde, bc.b0_tilde, bc.nu_hat0 + 0.5))
        }
        Regime::High => Ok((c.a1, c.b0, 1.5 * c.b_tilde * inputs.k * inputs.r)),
        _ => Err(Far2NearError::BadInput(format!(
            "{} regime has no index equation",
            regime.as_str()
        ))),
    }
}

/// Cutoff for the bounded and high regimes. Fails unless
/// log(M/ε) ≥ C_α·(2/(b·e^a·kr))^α·floor^{1+α}, which guarantees a root
/// above the regime's floor.
pub fn solve_truncation(
    inputs: &StabilityInputs,
    c: &StabilityConstants,
    regime: Regime,
) -> Result<TruncationSolution, Far2NearError> {
    check_geometry(inputs, c)?;
    let (a, b, floor) = index_parameters(inputs, c, regime)?;
    let kr = inputs.k * inputs.r;
    let lhs = inputs.log_ratio();
    let rhs = c.c_alpha * (2.0 / (b * a.exp() * kr)).powf(c.alpha) * floor.powf(1.0 + c.alpha);
    if lhs < rhs * (1.0 - 1e-12) {
        return Err(Far2NearError::NoSolution { lhs, rhs });
    }
    let n = solve_index_equation(lhs, b, a, kr, floor)?;
    Ok(TruncationSolution::from_n(n, c.dim))
}

/// Largest degree with kr ≥ C̃0·(j + (N−2)/2), used above the high regime.
pub fn extreme_truncation(inputs: &StabilityInputs, c: &StabilityConstants) -> TruncationSolution {
    let shift = (c.dim as f64 - 2.0) / 2.0;
    let j0 = (inputs.k * inputs.r / c.c0_tilde - shift).floor().max(0.0) as usize;
    let nu0 = j0 as f64 + shift;
    TruncationSolution { n: nu0, j0, nu0 }
}

/// Spectral cutoff of the measured far field at degree j0. The result is
/// evaluated on ∂B_r with [`ModalSpectrum::evaluate_field`] or measured with
/// [`ModalSpectrum::nearfield_norm`].
pub fn reconstruct_nearfield(
    noisy: &ModalSpectrum,
    truncation: &TruncationSolution,
) -> ModalSpectrum {
    noisy.truncated(truncation.j0)
}

/// Bounded-wavenumber bound
/// √(2Ã)·B0·M·exp(−log B0·((e^{ã1}k1R0/2)^α·log(M/ε)/C_α)^{1/(1+α)}).
pub fn bounded_regime_bound(inputs: &StabilityInputs, c: &StabilityConstants) -> StabilityReport {
    let fail = |why: String| StabilityReport::failed(Regime::Bounded, c, why);
    if check_geometry(inputs, c).is_err() {
        return fail("constants derived for a different annulus".into());
    }
    let Some(bc) = c.bounded else {
        return fail("no bounded wavenumber interval declared".into());
    };
    if !(bc.k1 <= inputs.k && inputs.k <= bc.k2) {
        return fail(format!("k = {} outside [{}, {}]", inputs.k, bc.k1, bc.k2));
    }
    let al = c.alpha;
    let l = inputs.log_ratio();
    let scale = c.a1_tilde.exp() * bc.z1 / 2.0;
    let rhs = c.c_alpha * scale.recip().powf(al) * (bc.nu_hat0 + 0.5).powf(1.0 + al);
    if l < rhs {
        return fail(format!("log(M/eps) = {l} < {rhs}"));
    }
    let truncation = match solve_truncation(inputs, c, Regime::Bounded) {
        Ok(t) => t,
        Err(e) => return fail(e.to_string()),
    };
    let big_b0 = c.geometry.b0();
    let bound = (2.0 * bc.a_tilde).sqrt()
        * big_b0
        * inputs.m
        * (-big_b0.ln() * (scale.powf(al) * l / c.c_alpha).powf(1.0 / (1.0 + al))).exp();
    StabilityReport {
        regime: Regime::Bounded,
        bound,
        truncation: Some(truncation),
        constants_used: *c,
        hypothesis_ok: true,
        failed_condition: None,
        holder_exponent: None,
    }
}

/// High-regime bound
/// √(2AB1)·b0⁻¹·M·exp(−log(1/b0)·((b0e^{a1}kr/2)^α·log(M/ε)/C_α)^{1/(1+α)})
/// for k0 ≤ k ≤ k1(ε).
pub fn highfreq_bound(inputs: &StabilityInputs, c: &StabilityConstants) -> StabilityReport {
    let fail = |why: String| StabilityReport::failed(Regime::High, c, why);
    if check_geometry(inputs, c).is_err() {
        return fail("constants derived for a different annulus".into());
    }
    let k_max = c.high_k_max(inputs.epsilon, inputs.m);
    if !(c.k0 <= inputs.k && inputs.k <= k_max) {
        return fail(format!(
            "k = {} outside [k0, k1(eps)] = [{}, {k_max}]",
            inputs.k, c.k0
        ));
    }
    let truncation = match solve_truncation(inputs, c, Regime::High) {
        Ok(t) => t,
        Err(e) => return fail(e.to_string()),
    };
    let al = c.alpha;
    let l = inputs.log_ratio();
    let x = c.b0 * c.a1.exp() * inputs.k * inputs.r / 2.0;
    let bound = highfreq_prefactor(c)
        * inputs.m
        * (-(1.0 / c.b0).ln() * (x.powf(al) * l / c.c_alpha).powf(1.0 / (1.0 + al))).exp();
    StabilityReport {
        regime: Regime::High,
        bound,
        truncation: Some(truncation),
        constants_used: *c,
        hypothesis_ok: true,
        failed_condition: None,
        holder_exponent: Some(c.holder_exponent(inputs.r)),
    }
}

/// √(2AB1)/b0
fn highfreq_prefactor(c: &StabilityConstants) -> f64 {
    (2.0 * c.a_big * c.geometry.b1()).sqrt() / c.b0
}

/// Hölder form √(2AB1)·b0⁻¹·M^{1−β1}·ε^{β1} of the high-regime bound at k = k1(ε).
pub fn holder_bound(epsilon: f64, m: f64, r: f64, c: &StabilityConstants) -> f64 {
    let beta = c.holder_exponent(r);
    highfreq_prefactor(c) * m.powf(1.0 - beta) * epsilon.powf(beta)
}

/// Extreme-regime bound √(ÃB1)·(ε² + M²·(kr/C̃0)·(2/3)^{2kr/C̃0})^{1/2}.
pub fn extreme_bound(inputs: &StabilityInputs, c: &StabilityConstants) -> StabilityReport {
    let fail = |why: String| StabilityReport::failed(Regime::Extreme, c, why);
    if let Some(why) = extreme_hypothesis_failure(inputs, c) {
        return fail(why);
    }
    let bound = extreme_formula(inputs.epsilon, inputs.m, inputs.k * inputs.r, c);
    StabilityReport {
        regime: Regime::Extreme,
        bound,
        truncation: Some(extreme_truncation(inputs, c)),
        constants_used: *c,
        hypothesis_ok: true,
        failed_condition: None,
        holder_exponent: None,
    }
}

fn extreme_formula(epsilon: f64, m: f64, kr: f64, c: &StabilityConstants) -> f64 {
    let x = kr / c.c0_tilde;
    let tail = x * (2.0f64 / 3.0).powf(2.0 * x);
    (c.a_tilde * c.geometry.b1()).sqrt() * (epsilon * epsilon + m * m * tail).sqrt()
}

fn extreme_hypothesis_failure(inputs: &StabilityInputs, c: &StabilityConstants) -> Option<String> {
    if check_geometry(inputs, c).is_err() {
        return Some("constants derived for a different annulus".into());
    }
    if c.geometry.b0() < c.b0_extreme_min {
        return Some(format!(
            "B0 = {} below 3e*C0~/2 = {}",
            c.geometry.b0(),
            c.b0_extreme_min
        ));
    }
    if inputs.k < c.k0 {
        return Some(format!("k = {} below k0 = {}", inputs.k, c.k0));
    }
    None
}

/// C3(τ) = sup_{x>0} x^{2τ+1}·(8/9)^{2x} = ((2τ+1)/(2·log(9/8)))^{2τ+1}·e^{−(2τ+1)}.
pub fn lipschitz_c3(tau: f64) -> f64 {
    let p = 2.0 * tau + 1.0;
    (p / (2.0 * (9.0f64 / 8.0).ln())).powf(p) * (-p).exp()
}

/// Lipschitz bound (ÃB1(1 + C2²(C̃0/(B0R0))^{2τ}C3(τ)))^{1/2}·ε, valid when
/// M ≤ C2·k^τ for k ≥ k0 (the caller's assertion), ε ≤ 1/e and
/// k ≥ C̃0·log(1/ε)/(log(4/3)·B0R0).
pub fn lipschitz_bound(
    inputs: &StabilityInputs,
    c: &StabilityConstants,
    tau: f64,
    c2: f64,
) -> StabilityReport {
    let fail = |why: String| StabilityReport::failed(Regime::Lipschitz, c, why);
    if let Some(why) = extreme_hypothesis_failure(inputs, c) {
        return fail(why);
    }
    if !(tau > 0.0 && c2 > 0.0) {
        return fail(format!("need tau > 0 and C2 > 0, got {tau}, {c2}"));
    }
    if inputs.epsilon > (-1.0f64).exp() {
        return fail(format!("epsilon = {} exceeds 1/e", inputs.epsilon));
    }
    let k_min = c.lipschitz_k_min(inputs.epsilon);
    if inputs.k < k_min {
        return fail(format!("k = {} below {k_min}", inputs.k));
    }
    let ratio = c.c0_tilde / c.geometry.inner_radius();
    let factor =
        c.a_tilde * c.geometry.b1() * (1.0 + c2 * c2 * ratio.powf(2.0 * tau) * lipschitz_c3(tau));
    StabilityReport {
        regime: Regime::Lipschitz,
        bound: factor.sqrt() * inputs.epsilon,
        truncation: Some(extreme_truncation(inputs, c)),
        constants_used: *c,
        hypothesis_ok: true,
        failed_condition: None,
        holder_exponent: None,
    }
}

/// A priori growth M ≤ C2·k^τ asserted for the Lipschitz regime.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolynomialGrowth {
    pub tau: f64,
    pub c2: f64,
}

/// The regime by wavenumber (bounded below k0, high up to k1(ε), extreme
/// above), plus every other regime whose hypotheses hold; returns the
/// smallest certified bound, or the primary regime's failure if none applies.
pub fn select_regime(
    inputs: &StabilityInputs,
    c: &StabilityConstants,
    growth: Option<PolynomialGrowth>,
) -> StabilityReport {
    let primary = if inputs.k < c.k0 {
        bounded_regime_bound(inputs, c)
    } else if inputs.k <= c.high_k_max(inputs.epsilon, inputs.m) {
        highfreq_bound(inputs, c)
    } else {
        extreme_bound(inputs, c)
    };
    let mut candidates = vec![
        bounded_regime_bound(inputs, c),
        highfreq_bound(inputs, c),
        extreme_bound(inputs, c),
    ];
    if let Some(g) = growth {
        candidates.push(lipschitz_bound(inputs, c, g.tau, g.c2));
    }
    candidates
        .into_iter()
        .filter(|r| r.hypothesis_ok)
        .min_by(|a, b| a.bound.total_cmp(&b.bound))
        .unwrap_or(primary)
}

/// (C2²k²η1² + C3²k²M̃²/(−log((C2/C3)η1/M̃) + k)^{1/8})^{1/2} for
/// 0 < η1 ≤ (C3/C2)·M̃.
pub fn halfspace_bound_eta2(
    eta1: f64,
    k: f64,
    m_tilde: f64,
    c2: f64,
    c3: f64,
) -> Result<f64, Far2NearError> {
    if !(eta1 > 0.0 && k > 0.0 && m_tilde > 0.0 && c2 > 0.0 && c3 > 0.0) {
        return Err(Far2NearError::BadInput(
            "eta1, k, M~, C2, C3 must be positive".into(),
        ));
    }
    let top = c3 / c2 * m_tilde;
    if eta1 > top {
        return Err(Far2NearError::BadInput(format!(
            "eta1 = {eta1} exceeds (C3/C2)*M~ = {top}"
        )));
    }
    let log_term = -(c2 / c3 * eta1 / m_tilde).ln();
    let v = c2 * c2 * k * k * eta1 * eta1
        + c3 * c3 * k * k * m_tilde * m_tilde / (log_term + k).powf(0.125);
    Ok(v.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(b0: f64, b1: f64, interval: Option<(f64, f64)>, alpha: f64) -> StabilityConstants {
        let g = AnnulusGeometry::new(1.2, b0, b1).unwrap();
        let ch = ConstantChoices {
            alpha,
            bounded_interval: interval,
            ..Default::default()
        };
        StabilityConstants::derive(&ch, g).unwrap()
    }

    fn inputs(c: &StabilityConstants, eps: f64, m: f64, k: f64, r: f64) -> StabilityInputs {
        StabilityInputs::new(eps, m, k, r, c.geometry).unwrap()
    }

    #[test]
    fn index_equation_at_equal_data_and_bound() {
        let (b, a, kr): (f64, f64, f64) = (0.6, 0.4, 7.5);
        let n = solve_index_equation(0.0, b, a, kr, 0.0).unwrap();
        let want = b * a.exp() * kr / 2.0;
        assert!((n / want - 1.0).abs() < 1e-14);
    }

    #[test]
    fn index_equation_inverse_construction() {
        let (b, a, kr): (f64, f64, f64) = (0.7, 0.3, 12.0);
        for t in [std::f64::consts::E, 5.0, 40.0, 1e3] {
            let n_star = t * b * a.exp() * kr / 2.0;
            let l = n_star * t.ln();
            let n = solve_index_equation(l, b, a, kr, 1.0).unwrap();
            assert!((n / n_star - 1.0).abs() < 1e-13, "{t}: {n} vs {n_star}");
        }
    }

    #[test]
    fn index_equation_reports_failed_floor() {
        match solve_index_equation(1.0, 0.5, 0.3, 2.0, 50.0) {
            Err(Far2NearError::NoSolution { lhs, rhs }) => assert!(lhs < rhs),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn truncation_brackets_degree() {
        let c = setup(2.0, 3.0, None, 1.0 / std::f64::consts::E);
        let inp = inputs(&c, 1e-40, 1e40, 3.4, 3.0);
        let t = solve_truncation(&inp, &c, Regime::High).unwrap();
        assert!(2.0 * t.nu0 - 1.0 <= 2.0 * t.n && 2.0 * t.n < 2.0 * t.nu0 + 1.0);
        assert!(2.0 * t.n >= 3.0 * c.b_tilde * 3.4 * 3.0 * (1.0 - 1e-12));
    }

    #[test]
    fn bounded_boundary_case_is_admitted() {
        let c = setup(2.0, 3.0, Some((0.1, 0.2)), 1.0);
        let bc = c.bounded.unwrap();
        let rhs = (2.0 / (A1_TILDE.exp() * bc.z1)) * (bc.nu_hat0 + 0.5).powi(2);
        let m = 1.0;
        let eps = (-rhs).exp();
        let rep = bounded_regime_bound(&inputs(&c, eps, m, 0.15, 3.0), &c);
        assert!(rep.hypothesis_ok, "{:?}", rep.failed_condition);
        let rep = bounded_regime_bound(&inputs(&c, eps * 1.001, m, 0.15, 3.0), &c);
        assert!(!rep.hypothesis_ok);
    }

    #[test]
    fn bounded_bound_alpha_one_closed_form() {
        let c = setup(2.0, 3.0, Some((0.1, 0.2)), 1.0);
        let bc = c.bounded.unwrap();
        let (eps, m) = (1e-90, 2.0);
        let rep = bounded_regime_bound(&inputs(&c, eps, m, 0.12, 2.5), &c);
        assert!(rep.hypothesis_ok, "{:?}", rep.failed_condition);
        let l = (m / eps).ln();
        let want = (2.0 * bc.a_tilde).sqrt()
            * 2.0
            * m
            * (-(2f64).ln() * (std::f64::consts::E / 4.0 * bc.z1 * l).sqrt()).exp();
        assert!((rep.bound / want - 1.0).abs() < 1e-13);
    }

    #[test]
    fn bounded_bound_increases_with_noise() {
        let c = setup(2.0, 3.0, Some((0.1, 0.2)), 0.4);
        let mut prev = 0.0;
        for e in [1e-30, 1e-20, 1e-12, 1e-8] {
            let rep = bounded_regime_bound(&inputs(&c, e, 1.0, 0.15, 3.0), &c);
            assert!(rep.hypothesis_ok);
            assert!(rep.bound > prev);
            prev = rep.bound;
        }
    }

    #[test]
    fn holder_form_matches_at_window_top() {
        let c = setup(2.0, 3.0, None, 1.0 / std::f64::consts::E);
        let (eps, m) = (1e-6, 1e80);
        let k1 = c.high_k_max(eps, m);
        assert!(k1 > c.k0);
        for r in [2.4, 3.0, 3.6] {
            let rep = highfreq_bound(&inputs(&c, eps, m, k1, r), &c);
            assert!(rep.hypothesis_ok, "{:?}", rep.failed_condition);
            let h = holder_bound(eps, m, r, &c);
            assert!((rep.bound / h - 1.0).abs() < 1e-12, "{} vs {h}", rep.bound);
        }
    }

    #[test]
    fn highfreq_bound_decreases_in_k() {
        let c = setup(2.0, 3.0, None, 1.0);
        let (eps, m) = (1e-6, 1e300);
        let k1 = c.high_k_max(eps, m);
        let mut prev = f64::INFINITY;
        for i in 0..=20 {
            let k = c.k0 + (k1 - c.k0) * i as f64 / 20.0;
            let rep = highfreq_bound(&inputs(&c, eps, m, k, 3.0), &c);
            assert!(rep.hypothesis_ok, "{:?}", rep.failed_condition);
            assert!(rep.bound < prev);
            prev = rep.bound;
        }
        assert!(!highfreq_bound(&inputs(&c, eps, m, k1 * 1.01, 3.0), &c).hypothesis_ok);
    }

    #[test]
    fn extreme_examples() {
        let c = setup(9.0, 10.0, None, 1.0);
        let s = (c.a_tilde * 10.0).sqrt();
        assert_eq!(extreme_formula(1e-3, 0.0, 50.0, &c), s * 1e-3);
        let kr = 2.0 * c.c0_tilde;
        let tail = extreme_formula(0.0, 1.0, kr, &c) / s;
        assert!((tail * tail - 32.0 / 81.0).abs() < 1e-15);
        let thin = setup(2.0, 3.0, None, 1.0);
        assert!(!extreme_bound(&inputs(&thin, 1e-3, 1.0, 50.0, 3.0), &thin).hypothesis_ok);
    }

    #[test]
    fn lipschitz_threshold_and_linearity() {
        let c = setup(9.0, 10.0, None, 1.0);
        let e1 = (-1.0f64).exp();
        let want = c.c0_tilde / ((4.0f64 / 3.0).ln() * 9.0 * 1.2);
        assert!((c.lipschitz_k_min(e1) / want - 1.0).abs() < 1e-15);
        let k = c.lipschitz_k_min(1e-8) * 1.1;
        let a = lipschitz_bound(&inputs(&c, 1e-8, 1.0, k, 11.0), &c, 1.0, 1.0);
        let b = lipschitz_bound(&inputs(&c, 2e-8, 1.0, k, 11.0), &c, 1.0, 1.0);
        assert!(a.hypothesis_ok && b.hypothesis_ok);
        assert!((b.bound / a.bound - 2.0).abs() < 1e-15);
        let far = lipschitz_bound(&inputs(&c, 1e-8, 1.0, 10.0 * k, 11.0), &c, 1.0, 1.0);
        assert_eq!(far.bound.to_bits(), a.bound.to_bits());
        assert!(
            !lipschitz_bound(&inputs(&c, 1e-8, 1.0, 0.5 * k, 11.0), &c, 1.0, 1.0).hypothesis_ok
        );
    }

    #[test]
    fn lipschitz_c3_is_the_supremum() {
        for tau in [0.5, 1.0, 2.0] {
            let c3 = lipschitz_c3(tau);
            let mut best: f64 = 0.0;
            for i in 1..20000 {
                let x = i as f64 * 0.01;
                best = best.max(x.powf(2.0 * tau + 1.0) * (8.0f64 / 9.0).powf(2.0 * x));
            }
            assert!(best <= c3 * (1.0 + 1e-12) && best > c3 * (1.0 - 1e-6));
        }
    }

    #[test]
    fn select_regime_dispatch() {
        let c = setup(9.0, 10.0, Some((0.05, 0.3)), 1.0 / std::f64::consts::E);
        let (eps, m) = (1e-6, 1e300);
        let below = select_regime(
            &inputs(&c, 1e-300, 1.0, 0.9 * c.k0.min(0.3), 11.0),
            &c,
            None,
        );
        assert_eq!(below.regime, Regime::Bounded);
        let k1 = c.high_k_max(eps, m);
        let top = highfreq_bound(&inputs(&c, eps, m, k1, 11.0), &c);
        assert!(top.hypothesis_ok && top.holder_exponent.is_some());
        let g = PolynomialGrowth { tau: 1.0, c2: 1.0 };
        let kk = 5.0 * c.lipschitz_k_min(1e-6).max(k1);
        let rep = select_regime(&inputs(&c, 1e-6, 2.0, kk, 11.0), &c, Some(g));
        assert!(rep.hypothesis_ok);
        let ex = extreme_bound(&inputs(&c, 1e-6, 2.0, kk, 11.0), &c);
        assert!(rep.bound <= ex.bound);
    }

    #[test]
    fn halfspace_examples() {
        let (k, mt, c2, c3) = (3.0, 2.0, 1.5, 0.5);
        let eta1 = c3 / c2 * mt;
        let v = halfspace_bound_eta2(eta1, k, mt, c2, c3).unwrap();
        let want = k * (c2 * c2 * eta1 * eta1 + c3 * c3 * mt * mt / k.powf(0.125)).sqrt();
        assert!((v / want - 1.0).abs() < 1e-15);
        assert!(halfspace_bound_eta2(eta1 * 1.01, k, mt, c2, c3).is_err());
        let a = halfspace_bound_eta2(1e-3, k, mt, c2, c3).unwrap();
        let b = halfspace_bound_eta2(1e-9, k, mt, c2, c3).unwrap();
        assert!(b < a);
    }
}
