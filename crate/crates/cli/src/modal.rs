//! `modal mie` writes the disc's exact far-field spectrum; `modal norms`
//! tabulates near-field norms of a spectrum file along a radius grid.

use crate::table::{fmt_f64, Table};
use crate::{runtime, schema, CliError, Outcome};
use helmstab::config::{KeySpec, KeyValues};
use helmstab::direct2d::mie_spectrum;
use helmstab::modal::ModalSpectrum;

pub const MIE_SCHEMA: &[KeySpec] = &[
    KeySpec {
        name: "k",
        default: "",
        help: "wavenumber",
    },
    KeySpec {
        name: "a",
        default: "1",
        help: "disc radius",
    },
    KeySpec {
        name: "omega_deg",
        default: "0",
        help: "incidence angle in degrees",
    },
    KeySpec {
        name: "out",
        default: "",
        help: "spectrum file (stdout when empty)",
    },
];

pub const NORMS_SCHEMA: &[KeySpec] = &[
    KeySpec {
        name: "spectrum",
        default: "",
        help: "spectrum file: header 'N k degree', then 'j p re im'",
    },
    KeySpec {
        name: "r_grid",
        default: "",
        help: "radii: a,b,c or lo:hi:n or log:lo:hi:n",
    },
    KeySpec {
        name: "out",
        default: "",
        help: "CSV path (stdout when empty)",
    },
];

pub fn run_mie(kv: &KeyValues) -> Result<Outcome, CliError> {
    let s = mie_spectrum(
        kv.f64("k")?,
        kv.f64("a")?,
        kv.f64("omega_deg")?.to_radians(),
    )
    .map_err(schema)?;
    Ok(Outcome::ok(s.to_text()))
}

/// `r,nearfield_norm,farfield_norm`.
pub fn run_norms(kv: &KeyValues) -> Result<Outcome, CliError> {
    let path = kv.string("spectrum")?;
    let text =
        std::fs::read_to_string(&path).map_err(|e| schema(format!("cannot read {path}: {e}")))?;
    let s = ModalSpectrum::from_text(&text).map_err(schema)?;
    let mut table = Table::new(&["r", "nearfield_norm", "farfield_norm"]);
    let far = fmt_f64(s.farfield_norm());
    for r in kv.grid("r_grid")? {
        let n = s.nearfield_norm(r).map_err(runtime)?;
        table.push(vec![fmt_f64(r), fmt_f64(n), far.clone()]);
    }
    Ok(Outcome::ok(table.render()))
}
