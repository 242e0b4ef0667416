//! Property tests for the structural invariants of each module.

use helmstab::far2near::{
    highfreq_bound, lipschitz_bound, solve_index_equation, ConstantChoices, StabilityConstants,
    StabilityInputs,
};
use helmstab::geometry::{hausdorff_distance, Profile, StarBoundary};
use helmstab::instability::{big_z, delta_of_eps, eps_tilde, Branch, InstabilityConfig};
use helmstab::modal::{AnnulusGeometry, ModalSpectrum};
use helmstab::specfun::{bessel_jy_scaled, hankel1, Argument, Order};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn jy_ln(nu: f64, z: f64) -> ((f64, f64), (f64, f64)) {
    let (j, y) = bessel_jy_scaled(Order::new(nu).unwrap(), Argument::new(z).unwrap());
    ((j.signum(), j.ln_abs()), (y.signum(), y.ln_abs()))
}

fn spectrum(dim: usize, k: f64, re: &[f64], im: &[f64]) -> ModalSpectrum {
    let coeffs = re
        .iter()
        .zip(im)
        .map(|(&a, &b)| Complex64::new(a, b))
        .collect();
    ModalSpectrum::from_coeffs(dim, k, coeffs).unwrap()
}

fn star(c: &[f64], s: &[f64]) -> StarBoundary {
    let mut cos = vec![1.0];
    cos.extend_from_slice(c);
    let mut sin = vec![0.0];
    sin.extend_from_slice(s);
    StarBoundary::fitted(Profile::Fourier { cos, sin }, 2).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Below the turning point J is positive and Y negative, and both shrink
    // toward larger |Y|, smaller J as the order grows.
    #[test]
    fn bessel_monotone_in_order(z in 0.1f64..100.0, lift in 0.0f64..50.0, step in 0.01f64..5.0) {
        let nu = z + lift;
        let ((sj1, j1), (sy1, y1)) = jy_ln(nu, z);
        let ((sj2, j2), (sy2, y2)) = jy_ln(nu + step, z);
        prop_assert!(sj1 > 0.0 && sj2 > 0.0 && sy1 < 0.0 && sy2 < 0.0);
        prop_assert!(j2 < j1);
        prop_assert!(y2 > y1);
    }

    #[test]
    fn large_argument_phase(nu in 0.0f64..20.0, t in 0.0f64..1.0) {
        let z = (100.0 * nu).max(1.0) * 10f64.powf(2.0 * t);
        let h = hankel1(Order::new(nu).unwrap(), Argument::new(z).unwrap()).unwrap();
        let phase = z - nu * PI / 2.0 - PI / 4.0;
        let w = h * (PI * z / 2.0).sqrt() * Complex64::from_polar(1.0, -phase);
        let mu = (nu * nu - 0.25).abs();
        let cap = 2.0 * mu / 2.0 / z * (mu / z).exp();
        prop_assert!((w - 1.0).norm() <= cap + 1e-12, "{} > {cap}", (w - 1.0).norm());
    }

    #[test]
    fn spectrum_norms_are_homogeneous(
        re in proptest::collection::vec(-1.0f64..1.0, 9),
        im in proptest::collection::vec(-1.0f64..1.0, 9),
        c_re in -3.0f64..3.0, c_im in -3.0f64..3.0,
        k in 0.5f64..10.0, r in 1.0f64..5.0, theta in 0.0f64..std::f64::consts::TAU,
    ) {
        let s = spectrum(2, k, &re, &im);
        let c = Complex64::new(c_re, c_im);
        let t = s.scaled(c);
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300);
        prop_assert!(close(t.farfield_norm(), c.norm() * s.farfield_norm()));
        prop_assert!(close(t.nearfield_norm(r).unwrap(), c.norm() * s.nearfield_norm(r).unwrap()));
        let (u, v) = (s.evaluate_field(r, theta).unwrap(), t.evaluate_field(r, theta).unwrap());
        prop_assert!((v - c * u).norm() <= 1e-12 * (c * u).norm().max(1e-300));
    }

    #[test]
    fn index_root_monotone(l in 1.0f64..500.0, dl in 0.0f64..100.0, b in 0.05f64..0.9, db in 0.0f64..0.09,
                           kr in 0.5f64..50.0) {
        let n = |l: f64, b: f64| solve_index_equation(l, b, 0.3, kr, 0.0).unwrap();
        prop_assert!(n(l + dl, b) >= n(l, b));
        // larger b shrinks the log, so the root moves up
        prop_assert!(n(l, b + db) >= n(l, b));
    }

    #[test]
    fn lipschitz_bound_ignores_k(eps_exp in -12.0f64..-1.0, f1 in 1.0f64..5.0, f2 in 1.0f64..5.0) {
        let g = AnnulusGeometry::new(1.0, 9.0, 10.0).unwrap();
        let c = StabilityConstants::derive(&ConstantChoices::default(), g).unwrap();
        let eps = 10f64.powf(eps_exp);
        let kmin = c.lipschitz_k_min(eps).max(c.k0);
        let at = |k: f64| {
            let inputs = StabilityInputs::new(eps, 1.0, k, g.inner_radius(), g).unwrap();
            lipschitz_bound(&inputs, &c, 1.0, 2.0)
        };
        let (a, b) = (at(kmin * f1), at(kmin * f2));
        prop_assert!(a.hypothesis_ok && b.hypothesis_ok);
        prop_assert_eq!(a.bound.to_bits(), b.bound.to_bits());
    }

    // bound(2k)/bound(k) = exp(−log(1/b0)·((b0e^{a1}r/2)^α·L/C_α)^{1/(1+α)}·k^{α/(1+α)}·(2^{α/(1+α)}−1))
    #[test]
    fn highfreq_bound_improves_exponentially(alpha in 0.3f64..1.5, t in 0.0f64..1.0) {
        let g = AnnulusGeometry::new(1.2, 2.0, 3.0).unwrap();
        let c = StabilityConstants::derive(&ConstantChoices { alpha, ..Default::default() }, g).unwrap();
        let (eps, m, r) = (1e-100, 1e200, g.outer_radius());
        let top = (c.high_k_max(eps, m) / 2.0).min(50.0 * c.k0);
        prop_assume!(top > c.k0 * 1.01);
        let k = c.k0 + t * (top - c.k0);
        let at = |k: f64| highfreq_bound(&StabilityInputs::new(eps, m, k, r, g).unwrap(), &c);
        let (b1, b2) = (at(k), at(2.0 * k));
        prop_assert!(b1.hypothesis_ok && b2.hypothesis_ok);
        let p = alpha / (1.0 + alpha);
        let x = (c.b0 * c.a1.exp() * r / 2.0).powf(alpha) * (m / eps).ln() / c.c_alpha;
        let rate = (1.0 / c.b0).ln() * x.powf(1.0 / (1.0 + alpha)) * k.powf(p) * (2f64.powf(p) - 1.0);
        prop_assert!(rate > 0.0);
        let ln_ratio = b2.bound.ln() - b1.bound.ln();
        prop_assert!(ln_ratio <= -rate * (1.0 - 1e-9), "{ln_ratio} vs {}", -rate);
    }

    #[test]
    fn hausdorff_is_a_metric(
        a in proptest::collection::vec(-0.08f64..0.08, 3), b in proptest::collection::vec(-0.08f64..0.08, 3),
        c in proptest::collection::vec(-0.08f64..0.08, 3), sa in proptest::collection::vec(-0.08f64..0.08, 3),
    ) {
        let zero = [0.0; 3];
        let (x, y, z) = (star(&a, &sa), star(&b, &zero), star(&c, &sa));
        let (xy, yx) = (hausdorff_distance(&x, &y), hausdorff_distance(&y, &x));
        prop_assert_eq!(xy.to_bits(), yx.to_bits());
        prop_assert_eq!(hausdorff_distance(&x, &x), 0.0);
        let tol = 1e-9;
        prop_assert!(hausdorff_distance(&x, &z) <= xy + hausdorff_distance(&y, &z) + tol);
    }

    #[test]
    fn branch_follows_threshold(dim in 2usize..4, k in 0.5f64..10.0, ln_eps in -300.0f64..-1.0) {
        let cfg = InstabilityConfig { dim, ..Default::default() };
        let eps = ln_eps.exp();
        let r = delta_of_eps(eps, k, &cfg).unwrap();
        let large = eps >= eps_tilde(k, &cfg).unwrap();
        prop_assert_eq!(r.branch == Branch::Large, large);
        if r.branch == Branch::Small {
            prop_assert!(r.cutoff > big_z(k, &cfg));
        }
    }
}
