//! `calibrate`: envelope constants, the derived regime constants, C̃ and E0
//! in one `key = value` report that other subcommands accept via
//! `calibration = <file>`.

use crate::table::fmt_f64;
use crate::{runtime, schema, CliError, Outcome};
use helmstab::config::{KeySpec, KeyValues};
use helmstab::far2near::{ConstantChoices, StabilityConstants};
use helmstab::geometry::{fit_visibility_constant, shipped_hulls};
use helmstab::instability::{fit_c_tilde_disc, InstabilityConfig};
use helmstab::modal::AnnulusGeometry;
use helmstab::specfun::{
    calibrate_envelope, calibrate_hy_ratio, calibration_grid, EnvelopeConstants,
};
use rayon::prelude::*;

pub const SCHEMA: &[KeySpec] = &[
    KeySpec {
        name: "nu_max",
        default: "200",
        help: "largest order of the calibration grid (step 0.5)",
    },
    KeySpec {
        name: "z_min",
        default: "1",
        help: "smallest argument (grid ratio 1.05)",
    },
    KeySpec {
        name: "z_max",
        default: "400",
        help: "largest argument",
    },
    KeySpec {
        name: "c0_candidates",
        default: "0.25,0.5,0.75,1,1.25,1.5,1.75,2",
        help: "transition-width constants tried",
    },
    KeySpec {
        name: "R0",
        default: "1.2",
        help: "annulus inner obstacle radius",
    },
    KeySpec {
        name: "B0",
        default: "2",
        help: "annulus inner factor",
    },
    KeySpec {
        name: "B1",
        default: "3",
        help: "annulus outer factor",
    },
    KeySpec {
        name: "alpha",
        default: "1",
        help: "exponent of the index-equation relaxation",
    },
    KeySpec {
        name: "c_tilde_k_grid",
        default: "1:20:20",
        help: "wavenumbers of the disc fit of C-tilde",
    },
    KeySpec {
        name: "hull_samples",
        default: "512",
        help: "boundary samples per shape for the shipped hulls",
    },
    KeySpec {
        name: "visibility_dirs",
        default: "32",
        help: "directions per hull in the E0 fit",
    },
    KeySpec {
        name: "out",
        default: "",
        help: "report path (stdout when empty)",
    },
];

/// Keys of the report file.
pub const REPORT_SCHEMA: &[KeySpec] = &[
    KeySpec {
        name: "z0",
        default: "",
        help: "envelope threshold",
    },
    KeySpec {
        name: "C0",
        default: "",
        help: "transition width constant",
    },
    KeySpec {
        name: "A0",
        default: "",
        help: "envelope constant",
    },
    KeySpec {
        name: "C0_tilde",
        default: "",
        help: "max(2, 1 + C0 2^(2/3))",
    },
    KeySpec {
        name: "c1",
        default: "",
        help: "|H|/|Y| slack past the turning point",
    },
    KeySpec {
        name: "C",
        default: "",
        help: "high-regime constant",
    },
    KeySpec {
        name: "A_tilde",
        default: "",
        help: "extreme-regime constant",
    },
    KeySpec {
        name: "A",
        default: "",
        help: "high-regime constant",
    },
    KeySpec {
        name: "B_tilde",
        default: "",
        help: "(N/2) C",
    },
    KeySpec {
        name: "C_tilde",
        default: "",
        help: "far-field bicoefficient cap",
    },
    KeySpec {
        name: "E0",
        default: "",
        help: "visibility constant of the shipped hulls",
    },
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CalibrationReport {
    pub envelope: EnvelopeConstants,
    pub c1: f64,
    pub c_tilde: f64,
    pub e0: f64,
}

/// Read the envelope, c1 and C̃ back from a report file.
pub fn load_report(path: &str) -> Result<CalibrationReport, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| schema(format!("cannot read calibration {path}: {e}")))?;
    let kv = KeyValues::parse(&text, REPORT_SCHEMA)?;
    let envelope =
        EnvelopeConstants::new(kv.f64("z0")?, kv.f64("C0")?, kv.f64("A0")?).map_err(schema)?;
    Ok(CalibrationReport {
        envelope,
        c1: kv.f64("c1")?,
        c_tilde: kv.f64("C_tilde")?,
        e0: kv.f64("E0")?,
    })
}

/// Report from an optional `calibration` key, else the shipped constants.
pub fn report_or_default(kv: &KeyValues) -> Result<CalibrationReport, CliError> {
    match kv.raw("calibration") {
        Some(p) => load_report(p),
        None => Ok(CalibrationReport {
            envelope: EnvelopeConstants::calibrated(),
            c1: helmstab::specfun::CALIBRATED_HY_RATIO,
            c_tilde: helmstab::instability::FITTED_C_TILDE_DISC,
            e0: f64::NAN,
        }),
    }
}

pub fn run_calibration(kv: &KeyValues) -> Result<Outcome, CliError> {
    let grid = calibration_grid(kv.f64("nu_max")?, kv.f64("z_min")?, kv.f64("z_max")?);
    let candidates = kv.grid("c0_candidates")?;
    let envelope = calibrate_envelope(&grid, &candidates).map_err(runtime)?;
    let c1 = calibrate_hy_ratio(&grid, envelope.z0());
    let geometry =
        AnnulusGeometry::new(kv.f64("R0")?, kv.f64("B0")?, kv.f64("B1")?).map_err(schema)?;
    let choices = ConstantChoices {
        alpha: kv.f64("alpha")?,
        envelope,
        c1: c1.min(0.99),
        ..Default::default()
    };
    let c = StabilityConstants::derive(&choices, geometry).map_err(runtime)?;
    let c_tilde = fit_c_tilde_disc(
        1.0,
        &kv.grid("c_tilde_k_grid")?,
        &InstabilityConfig::default(),
    )
    .map_err(runtime)?;
    let dirs = kv.usize("visibility_dirs")?;
    let e0 = shipped_hulls(kv.usize("hull_samples")?)
        .par_iter()
        .map(|(_, hull)| fit_visibility_constant(hull, &[1e-3, 1e-2, 0.1, 1.0], dirs))
        .reduce(|| f64::INFINITY, f64::min);
    let pairs = [
        ("z0", envelope.z0()),
        ("C0", envelope.c0()),
        ("A0", envelope.a0()),
        ("C0_tilde", envelope.c0_tilde()),
        ("c1", c1),
        ("C", c.c_high),
        ("A_tilde", c.a_tilde),
        ("A", c.a_big),
        ("B_tilde", c.b_tilde),
        ("C_tilde", c_tilde),
        ("E0", e0),
    ];
    let text: String = pairs
        .iter()
        .map(|(k, v)| format!("{k} = {}\n", fmt_f64(*v)))
        .collect();
    let mut out = Outcome::ok(text);
    if !(e0 > 0.0) {
        out.all_ok = false;
        out.failures
            .push(format!("fitted E0 = {e0} is not positive"));
    }
    Ok(out)
}
