//! `far2near sweep`: seeded reconstruction trials on a (k, ε) grid with the
//! certified bound next to the measured error.

use crate::calibrate::report_or_default;
use crate::table::{fmt_f64, Table};
use crate::{runtime, schema, CliError, Outcome};
use helmstab::config::{KeySpec, KeyValues};
use helmstab::far2near::trial::{run_trials, trial_seed, TrialOutcome, TrialPoint, TrialSetup};
use helmstab::far2near::{ConstantChoices, PolynomialGrowth, Regime, StabilityConstants};
use helmstab::modal::AnnulusGeometry;

pub const SCHEMA: &[KeySpec] = &[
    KeySpec {
        name: "R0",
        default: "1.2",
        help: "radius of the ball holding the obstacle",
    },
    KeySpec {
        name: "B0",
        default: "2",
        help: "inner annulus factor (r >= B0 R0)",
    },
    KeySpec {
        name: "B1",
        default: "3",
        help: "outer annulus factor (r <= B1 R0)",
    },
    KeySpec {
        name: "r",
        default: "",
        help: "evaluation radius (B1 R0 when empty)",
    },
    KeySpec {
        name: "alpha",
        default: "0.36787944117144233",
        help: "index-equation exponent (1/e widest high window)",
    },
    KeySpec {
        name: "b0",
        default: "",
        help: "high-regime base in (1/B0, 1) (B0^(-1/2) when empty)",
    },
    KeySpec {
        name: "k0",
        default: "",
        help: "lowest high-regime wavenumber (z0/R0 when empty)",
    },
    KeySpec {
        name: "bounded_k1",
        default: "",
        help: "bounded-regime interval start",
    },
    KeySpec {
        name: "bounded_k2",
        default: "",
        help: "bounded-regime interval end",
    },
    KeySpec {
        name: "calibration",
        default: "",
        help: "calibration report (shipped constants when empty)",
    },
    KeySpec {
        name: "disc_radius",
        default: "1",
        help: "radius of the sound-soft disc, <= R0",
    },
    KeySpec {
        name: "omega_deg",
        default: "0",
        help: "incidence angle in degrees",
    },
    KeySpec {
        name: "M",
        default: "1e80",
        help: "declared a priori bound (raised to the exact norm on the R0 circle)",
    },
    KeySpec {
        name: "eps_grid",
        default: "1e-6",
        help: "far-field noise norms",
    },
    KeySpec {
        name: "k_grid",
        default: "log:3.4:60:12",
        help: "wavenumbers",
    },
    KeySpec {
        name: "trials",
        default: "1",
        help: "noise draws per (k, eps)",
    },
    KeySpec {
        name: "seed",
        default: "1",
        help: "base seed of the ChaCha8 noise streams",
    },
    KeySpec {
        name: "tau",
        default: "",
        help: "growth exponent enabling the Lipschitz regime (with C2)",
    },
    KeySpec {
        name: "C2",
        default: "",
        help: "growth constant, M <= C2 k^tau",
    },
    KeySpec {
        name: "regime",
        default: "auto",
        help: "auto | bounded | high | extreme | lipschitz",
    },
    KeySpec {
        name: "out",
        default: "",
        help: "CSV path (stdout when empty)",
    },
];

pub const HEADER: [&str; 8] = [
    "k",
    "epsilon",
    "regime",
    "n",
    "j0",
    "bound",
    "measured_error",
    "ok",
];

fn parse_regime(s: &str) -> Result<Option<Regime>, CliError> {
    Ok(match s {
        "auto" => None,
        "bounded" => Some(Regime::Bounded),
        "high" => Some(Regime::High),
        "extreme" => Some(Regime::Extreme),
        "lipschitz" => Some(Regime::Lipschitz),
        other => return Err(schema(format!("unknown regime '{other}'"))),
    })
}

/// Constants and trial setup described by a sweep configuration.
pub fn sweep_setup(kv: &KeyValues) -> Result<(StabilityConstants, TrialSetup), CliError> {
    let geometry =
        AnnulusGeometry::new(kv.f64("R0")?, kv.f64("B0")?, kv.f64("B1")?).map_err(schema)?;
    let report = report_or_default(kv)?;
    let bounded_interval = match (kv.f64_opt("bounded_k1")?, kv.f64_opt("bounded_k2")?) {
        (Some(a), Some(b)) => Some((a, b)),
        (None, None) => None,
        _ => return Err(schema("bounded_k1 and bounded_k2 go together")),
    };
    let choices = ConstantChoices {
        alpha: kv.f64("alpha")?,
        b0: kv.f64_opt("b0")?,
        k0: kv.f64_opt("k0")?,
        bounded_interval,
        envelope: report.envelope,
        c1: report.c1,
        ..Default::default()
    };
    let constants = StabilityConstants::derive(&choices, geometry).map_err(schema)?;
    let growth = match (kv.f64_opt("tau")?, kv.f64_opt("C2")?) {
        (Some(tau), Some(c2)) => Some(PolynomialGrowth { tau, c2 }),
        (None, None) => None,
        _ => return Err(schema("tau and C2 go together")),
    };
    let setup = TrialSetup {
        disc_radius: kv.f64("disc_radius")?,
        omega_angle: kv.f64("omega_deg")?.to_radians(),
        declared_m: kv.f64("M")?,
        growth,
        forced_regime: parse_regime(&kv.string("regime")?)?,
    };
    Ok((constants, setup))
}

/// All trials of the sweep, in (k, ε, draw) order.
pub fn sweep_outcomes(kv: &KeyValues) -> Result<Vec<TrialOutcome>, CliError> {
    let (constants, setup) = sweep_setup(kv)?;
    let r = kv
        .f64_opt("r")?
        .unwrap_or(constants.geometry.outer_radius());
    let trials = kv.usize("trials")?;
    let seed = kv.u64("seed")?;
    let mut points = Vec::new();
    for k in kv.grid("k_grid")? {
        for eps in kv.grid("eps_grid")? {
            for _ in 0..trials {
                points.push(TrialPoint {
                    k,
                    epsilon: eps,
                    r,
                    seed: trial_seed(seed, points.len()),
                });
            }
        }
    }
    run_trials(&points, &setup, &constants).map_err(runtime)
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_else(|| "NA".into())
}

pub fn sweep_row(t: &TrialOutcome) -> Vec<String> {
    vec![
        fmt_f64(t.k),
        fmt_f64(t.epsilon),
        t.regime.as_str().to_string(),
        opt(t.n),
        t.j0.map(|j| j.to_string()).unwrap_or_else(|| "NA".into()),
        fmt_f64(t.bound),
        opt(t.measured_error),
        t.hypothesis_ok.to_string(),
    ]
}

pub fn run_stability_sweep(kv: &KeyValues) -> Result<Outcome, CliError> {
    let outcomes = sweep_outcomes(kv)?;
    let mut table = Table::new(&HEADER);
    let mut out = Outcome::ok(String::new());
    for t in &outcomes {
        table.push(sweep_row(t));
        if t.is_violation() {
            out.all_ok = false;
            out.failures.push(format!(
                "k = {}, eps = {}: measured error {:?} exceeds the bound {}",
                t.k, t.epsilon, t.measured_error, t.bound
            ));
        } else if !t.hypothesis_ok {
            out.all_ok = false;
            out.failures.push(format!(
                "k = {}, eps = {}: {}",
                t.k,
                t.epsilon,
                t.failed_condition.as_deref().unwrap_or("hypothesis failed")
            ));
        }
    }
    out.text = table.render();
    Ok(out)
}
