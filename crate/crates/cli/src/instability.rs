//! `instability table`: ε̃(k), the branch, δ(ε, k) and the counting bounds.

use crate::calibrate::report_or_default;
use crate::table::{fmt_f64, Table};
use crate::{schema, CliError, Outcome};
use helmstab::config::{KeySpec, KeyValues};
use helmstab::instability::{
    a_alternative, a_default, delta_of_eps, k_threshold, Branch, InstabilityConfig,
};

pub const SCHEMA: &[KeySpec] = &[
    KeySpec {
        name: "s",
        default: "0",
        help: "Sobolev index of the far-field norm",
    },
    KeySpec {
        name: "dim",
        default: "2",
        help: "space dimension, 2 or 3",
    },
    KeySpec {
        name: "m",
        default: "2",
        help: "boundary smoothness of the class",
    },
    KeySpec {
        name: "beta",
        default: "2",
        help: "C^m bound of the class",
    },
    KeySpec {
        name: "R0",
        default: "1",
        help: "inner radius of the class",
    },
    KeySpec {
        name: "delta0",
        default: "0.1",
        help: "radial width of the class",
    },
    KeySpec {
        name: "k0",
        default: "0.5",
        help: "lowest wavenumber (dimension 2)",
    },
    KeySpec {
        name: "C_tilde",
        default: "",
        help: "bicoefficient cap, >= 2 (calibration or fitted disc value when empty)",
    },
    KeySpec {
        name: "a",
        default: "stated",
        help: "stated = 1+sqrt(e^2-1)/e, alternative = (1+sqrt(e^2-1))/e, or a number > 1",
    },
    KeySpec {
        name: "c_small",
        default: "1",
        help: "decay threshold factor, >= 1",
    },
    KeySpec {
        name: "calibration",
        default: "",
        help: "calibration report supplying C_tilde",
    },
    KeySpec {
        name: "eps_grid",
        default: "log:1e-40:0.3:5",
        help: "far-field error levels in (0, 1/e)",
    },
    KeySpec {
        name: "k_grid",
        default: "log:0.5:20:8",
        help: "wavenumbers",
    },
    KeySpec {
        name: "out",
        default: "",
        help: "CSV path (stdout when empty)",
    },
];

pub const HEADER: [&str; 10] = [
    "k",
    "eps",
    "eps_tilde",
    "branch",
    "t_tilde",
    "delta",
    "dh_lower",
    "net_log",
    "pack_log",
    "k_eps",
];

pub fn instability_config(kv: &KeyValues) -> Result<InstabilityConfig, CliError> {
    let a = match kv.string("a")?.as_str() {
        "stated" => a_default(),
        "alternative" => a_alternative(),
        v => v.parse().map_err(|_| {
            schema(format!(
                "a must be stated, alternative or a number, got '{v}'"
            ))
        })?,
    };
    let c_tilde = match kv.f64_opt("C_tilde")? {
        Some(c) => c,
        None => report_or_default(kv)?.c_tilde.max(2.0),
    };
    let cfg = InstabilityConfig {
        s: kv.f64("s")?,
        dim: kv.usize("dim")?,
        m: kv.usize("m")?,
        beta: kv.f64("beta")?,
        r0: kv.f64("R0")?,
        delta0: kv.f64("delta0")?,
        k0: kv.f64("k0")?,
        c_tilde,
        a,
        c_small: kv.f64("c_small")?,
    };
    cfg.validate().map_err(schema)?;
    Ok(cfg)
}

pub fn run_instability(kv: &KeyValues) -> Result<Outcome, CliError> {
    let cfg = instability_config(kv)?;
    let ks = kv.grid("k_grid")?;
    let eps_grid = kv.grid("eps_grid")?;
    let mut table = Table::new(&HEADER);
    let mut out = Outcome::ok(String::new());
    for &eps in &eps_grid {
        let k_eps = k_threshold(eps, &cfg).map_err(schema)?;
        for &k in &ks {
            let r = delta_of_eps(eps, k, &cfg).map_err(schema)?;
            if !(r.pack_log > r.net_log_size) {
                out.all_ok = false;
                out.failures.push(format!(
                    "k = {k}, eps = {eps}: packing does not beat the net"
                ));
            }
            table.push(vec![
                fmt_f64(k),
                fmt_f64(eps),
                fmt_f64(r.ln_eps_tilde.exp()),
                r.branch.as_str().to_string(),
                match r.branch {
                    Branch::Small => fmt_f64(r.cutoff),
                    Branch::Large => "NA".into(),
                },
                fmt_f64(r.delta),
                fmt_f64(r.dh_lower_bound),
                fmt_f64(r.net_log_size),
                fmt_f64(r.pack_log),
                fmt_f64(k_eps),
            ]);
        }
    }
    out.text = table.render();
    Ok(out)
}
