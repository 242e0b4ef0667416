//! Library evaluation of each closed form on the frozen reference inputs.

use helmstab::far2near::{
    bounded_regime_bound, c_alpha, extreme_bound, halfspace_bound_eta2, highfreq_bound,
    lipschitz_bound, BoundedConstants, ConstantChoices, StabilityConstants, StabilityInputs,
    StabilityReport,
};
use helmstab::geometry::packing_lower_bound;
use helmstab::instability::{
    big_z, delta_of_eps, eps_tilde, ln_b_tilde_small, net_log_size_at_cutoff, solve_t_tilde,
    Branch, InstabilityConfig,
};
use helmstab::modal::AnnulusGeometry;

pub const FORMULAS: [&str; 13] = [
    "bounded_bound",
    "highfreq_bound",
    "extreme_bound",
    "lipschitz_bound",
    "halfspace_eta2",
    "eps_tilde",
    "delta_large",
    "delta_small",
    "t_tilde",
    "b_tilde_small",
    "big_z",
    "net_log_size",
    "packing",
];

/// Rows of one formula: inputs then the reference value.
pub fn rows(name: &str) -> Vec<Vec<f64>> {
    include_str!("../data/closed_forms.csv")
        .lines()
        .filter(|l| !l.starts_with('#'))
        .filter_map(|l| l.split_once(','))
        .filter(|(n, _)| *n == name)
        .map(|(_, rest)| rest.split(',').map(|t| t.parse().unwrap()).collect())
        .collect()
}

/// Worst relative error over the rows of `name` and the row count.
pub fn worst_error(name: &str) -> (f64, usize) {
    let set = rows(name);
    let worst = set
        .iter()
        .map(|row| {
            let (inputs, want) = row.split_at(row.len() - 1);
            let got = evaluate(name, inputs);
            if got.is_finite() {
                ((got - want[0]) / want[0]).abs()
            } else {
                f64::INFINITY
            }
        })
        .fold(0.0, f64::max);
    (worst, set.len())
}

fn constants(geometry: AnnulusGeometry, alpha: f64) -> StabilityConstants {
    let mut c = StabilityConstants::derive(&ConstantChoices::default(), geometry).unwrap();
    c.alpha = alpha;
    c.c_alpha = c_alpha(alpha);
    c
}

fn certified(r: StabilityReport) -> f64 {
    if r.hypothesis_ok {
        r.bound
    } else {
        f64::NAN
    }
}

/// Leading nine columns: s, dim, m, R0, delta0, C_tilde, a, c_small, k.
fn inst(p: &[f64]) -> (InstabilityConfig, f64) {
    let cfg = InstabilityConfig {
        s: p[0],
        dim: p[1] as usize,
        m: p[2] as usize,
        r0: p[3],
        delta0: p[4],
        c_tilde: p[5],
        a: p[6],
        c_small: p[7],
        k0: p[8].min(0.5),
        ..Default::default()
    };
    cfg.validate().unwrap();
    (cfg, p[8])
}

fn delta_on(p: &[f64], branch: Branch) -> f64 {
    let (cfg, k) = inst(p);
    let r = delta_of_eps(p[9], k, &cfg).unwrap();
    if r.branch == branch {
        r.delta
    } else {
        f64::NAN
    }
}

pub fn evaluate(name: &str, p: &[f64]) -> f64 {
    match name {
        "bounded_bound" => {
            let [alpha, r0, b0, b1, z1, k2, a_tilde, nu_hat0, m, eps, k, r] = p.try_into().unwrap();
            let g = AnnulusGeometry::new(r0, b0, b1).unwrap();
            let mut c = constants(g, alpha);
            c.bounded = Some(BoundedConstants {
                k1: z1 / r0,
                k2,
                z1,
                z2: k2 * b1 * r0,
                c_unif: 1.0,
                a_tilde,
                b0_tilde: 1.0 / b0,
                nu_hat0,
            });
            certified(bounded_regime_bound(
                &StabilityInputs::new(eps, m, k, r, g).unwrap(),
                &c,
            ))
        }
        "highfreq_bound" => {
            let [alpha, r0, big_b0, b1, b0, a1, a_big, b_tilde, k0, m, eps, k, r] =
                p.try_into().unwrap();
            let g = AnnulusGeometry::new(r0, big_b0, b1).unwrap();
            let mut c = constants(g, alpha);
            c.b0 = b0;
            c.a1 = a1;
            c.a_big = a_big;
            c.b_tilde = b_tilde;
            c.k0 = k0;
            certified(highfreq_bound(
                &StabilityInputs::new(eps, m, k, r, g).unwrap(),
                &c,
            ))
        }
        "extreme_bound" => {
            let [r0, b0, b1, a_tilde, c0t, k0, m, eps, k, r] = p.try_into().unwrap();
            let g = AnnulusGeometry::new(r0, b0, b1).unwrap();
            let mut c = constants(g, 1.0);
            c.a_tilde = a_tilde;
            c.c0_tilde = c0t;
            c.b0_extreme_min = b0;
            c.k0 = k0;
            certified(extreme_bound(
                &StabilityInputs::new(eps, m, k, r, g).unwrap(),
                &c,
            ))
        }
        "lipschitz_bound" => {
            let [r0, b0, b1, a_tilde, c0t, tau, c2, eps, k] = p.try_into().unwrap();
            let g = AnnulusGeometry::new(r0, b0, b1).unwrap();
            let mut c = constants(g, 1.0);
            c.a_tilde = a_tilde;
            c.c0_tilde = c0t;
            c.b0_extreme_min = b0;
            c.k0 = 0.0;
            let inputs = StabilityInputs::new(eps, eps, k, g.inner_radius(), g).unwrap();
            certified(lipschitz_bound(&inputs, &c, tau, c2))
        }
        "halfspace_eta2" => {
            let [eta1, k, mt, c2, c3] = p.try_into().unwrap();
            halfspace_bound_eta2(eta1, k, mt, c2, c3).unwrap()
        }
        "eps_tilde" => {
            let (cfg, k) = inst(p);
            eps_tilde(k, &cfg).unwrap()
        }
        "delta_large" => delta_on(p, Branch::Large),
        "delta_small" => delta_on(p, Branch::Small),
        "t_tilde" => {
            let (cfg, k) = inst(p);
            solve_t_tilde(p[9], k, &cfg).unwrap()
        }
        "b_tilde_small" => {
            let (cfg, k) = inst(p);
            ln_b_tilde_small(k, &cfg).exp()
        }
        "big_z" => {
            let (cfg, k) = inst(p);
            big_z(k, &cfg)
        }
        "net_log_size" => {
            let (cfg, k) = inst(p);
            net_log_size_at_cutoff(big_z(k, &cfg), p[9], &cfg)
        }
        "packing" => packing_lower_bound(p[0], p[1], p[2] as usize, p[3] as usize),
        other => panic!("unknown formula {other}"),
    }
}
