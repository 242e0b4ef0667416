//! `direct solve`: far field of a sound-soft star-shaped obstacle.

use crate::table::{fmt_f64, Table};
use crate::{runtime, schema, CliError, Outcome};
use helmstab::config::{KeySpec, KeyValues};
use helmstab::direct2d::{
    assemble_cfie, eval_farfield, farfield_samples, min_points, solve_density,
    verify_optical_theorem, verify_reciprocity, IncidentWave,
};
use helmstab::geometry::StarBoundary;

pub const SCHEMA: &[KeySpec] = &[
    KeySpec {
        name: "shape",
        default: "disc:1",
        help: "shape file, or disc:<radius>",
    },
    KeySpec {
        name: "k",
        default: "",
        help: "wavenumber",
    },
    KeySpec {
        name: "omega_deg",
        default: "0",
        help: "incidence angle in degrees",
    },
    KeySpec {
        name: "points",
        default: "256",
        help: "quadrature points (even; raised to 10 per wavelength)",
    },
    KeySpec {
        name: "samples",
        default: "256",
        help: "far-field directions written",
    },
    KeySpec {
        name: "out",
        default: "",
        help: "CSV path (stdout when empty)",
    },
];

pub fn load_shape(spec: &str) -> Result<StarBoundary, CliError> {
    if let Some(r) = spec.strip_prefix("disc:") {
        let r: f64 = r
            .parse()
            .map_err(|_| schema(format!("bad disc radius in '{spec}'")))?;
        if !(r > 0.0 && r.is_finite()) {
            return Err(schema(format!("disc radius must be positive, got {r}")));
        }
        return Ok(StarBoundary::disc(r));
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| schema(format!("cannot read shape {spec}: {e}")))?;
    StarBoundary::from_text(&text).map_err(schema)
}

/// `theta,re,im` after a `#` metadata header with the residual, the optical
/// theorem and reciprocity checks.
pub fn run_solve(kv: &KeyValues) -> Result<Outcome, CliError> {
    let shape = load_shape(&kv.string("shape")?)?;
    let k = kv.f64("k")?;
    let omega = kv.f64("omega_deg")?.to_radians();
    let m = kv.usize("samples")?;
    if m == 0 {
        return Err(schema("samples must be positive"));
    }
    let mut n = kv.usize("points")?.max(min_points(&shape, k));
    n += n % 2;
    let system = assemble_cfie(&shape, k, n).map_err(schema)?;
    let wave = IncidentWave::from_angle(k, omega).map_err(schema)?;
    let density = solve_density(&system, &wave).map_err(runtime)?;
    let ff = farfield_samples(system.grid(), &density, k, m).map_err(runtime)?;
    let forward = eval_farfield(system.grid(), &density, k, omega).map_err(runtime)?;
    // the check integrates |u∞|² by the trapezoid rule, so it gets its own dense grid
    let dense = farfield_samples(system.grid(), &density, k, m.max(512)).map_err(runtime)?;
    let optical = verify_optical_theorem(&dense, forward, k);
    let pairs: Vec<(f64, f64)> = (0..4)
        .map(|i| (0.3 + 1.1 * i as f64, 2.0 - 0.7 * i as f64))
        .collect();
    let reciprocity = verify_reciprocity(&system, &pairs).map_err(runtime)?;

    let mut table = Table::new(&["theta", "re", "im"]);
    table.meta("k", fmt_f64(k));
    table.meta("omega_deg", fmt_f64(kv.f64("omega_deg")?));
    table.meta("points", n.to_string());
    table.meta("relative_residual", fmt_f64(density.relative_residual));
    table.meta("optical_theorem_residual", fmt_f64(optical));
    table.meta("reciprocity_residual", fmt_f64(reciprocity));
    for w in system.warnings() {
        table.meta("warning", w.clone());
    }
    for (i, v) in ff.iter().enumerate() {
        let theta = std::f64::consts::TAU * i as f64 / m as f64;
        table.push(vec![fmt_f64(theta), fmt_f64(v.re), fmt_f64(v.im)]);
    }
    let mut out = Outcome::ok(table.render());
    if !(optical <= 1e-6 && reciprocity <= 1e-6) {
        out.all_ok = false;
        out.failures.push(format!(
            "optical theorem residual {optical:e}, reciprocity residual {reciprocity:e} (tolerance 1e-6)"
        ));
    }
    Ok(out)
}
