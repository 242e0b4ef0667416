//! `hankel eval` and `hankel verify`.

use crate::calibrate::report_or_default;
use crate::table::{fmt_f64, Table};
use crate::{runtime, schema, CliError, Outcome};
use helmstab::config::{KeySpec, KeyValues};
use helmstab::specfun::{envelope_bounds_ln, hankel1, hankel1_ln_abs, Argument, Order};

pub const EVAL_SCHEMA: &[KeySpec] = &[
    KeySpec {
        name: "nu",
        default: "",
        help: "order, >= 0",
    },
    KeySpec {
        name: "z",
        default: "",
        help: "argument, > 0",
    },
    KeySpec {
        name: "out",
        default: "",
        help: "output path (stdout when empty)",
    },
];

pub const VERIFY_SCHEMA: &[KeySpec] = &[
    KeySpec {
        name: "grid",
        default: "",
        help: "file of 'nu z' or 'nu,z' lines",
    },
    KeySpec {
        name: "calibration",
        default: "",
        help: "calibration report (shipped constants when empty)",
    },
    KeySpec {
        name: "out",
        default: "",
        help: "CSV path (stdout when empty)",
    },
];

/// "re im abs" of H⁽¹⁾_ν(z).
pub fn run_eval(kv: &KeyValues) -> Result<Outcome, CliError> {
    let nu = Order::new(kv.f64("nu")?).map_err(schema)?;
    let z = Argument::new(kv.f64("z")?).map_err(schema)?;
    let h = hankel1(nu, z).map_err(runtime)?;
    Ok(Outcome::ok(format!(
        "{} {} {}\n",
        fmt_f64(h.re),
        fmt_f64(h.im),
        fmt_f64(h.norm())
    )))
}

/// Grid points from text; `#` comments and a `nu,z` header line are skipped.
pub fn parse_grid_file(text: &str) -> Result<Vec<(f64, f64)>, CliError> {
    let mut pts = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() || line.starts_with("nu") {
            continue;
        }
        let f: Vec<&str> = line
            .split([',', ' ', '\t'])
            .filter(|s| !s.is_empty())
            .collect();
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| schema(format!("grid line {}: cannot read '{s}'", i + 1)))
        };
        if f.len() < 2 {
            return Err(schema(format!("grid line {}: expected 'nu z'", i + 1)));
        }
        pts.push((num(f[0])?, num(f[1])?));
    }
    Ok(pts)
}

/// `nu,z,abs,lower,upper,regime,ok`: the calibrated envelope against |H|.
/// Points below z0 carry no claim and are written with regime `none`.
pub fn run_verify(kv: &KeyValues) -> Result<Outcome, CliError> {
    let path = kv.string("grid")?;
    let text =
        std::fs::read_to_string(&path).map_err(|e| schema(format!("cannot read {path}: {e}")))?;
    let env = report_or_default(kv)?.envelope;
    let mut table = Table::new(&["nu", "z", "abs", "lower", "upper", "regime", "ok"]);
    let mut out = Outcome::ok(String::new());
    for (nu_raw, z_raw) in parse_grid_file(&text)? {
        let nu = Order::new(nu_raw).map_err(schema)?;
        let z = Argument::new(z_raw).map_err(schema)?;
        let ln_h = hankel1_ln_abs(nu, z);
        let (lo, hi, label, ok) = match envelope_bounds_ln(nu, z, &env) {
            Ok((lo, hi, label)) => (lo.exp(), hi.exp(), label.as_str(), lo <= ln_h && ln_h <= hi),
            Err(_) => (0.0, f64::INFINITY, "none", true),
        };
        if !ok {
            out.all_ok = false;
            out.failures.push(format!(
                "|H| outside the envelope at nu = {nu_raw}, z = {z_raw}"
            ));
        }
        table.push(vec![
            fmt_f64(nu_raw),
            fmt_f64(z_raw),
            fmt_f64(ln_h.exp()),
            fmt_f64(lo),
            fmt_f64(hi),
            label.to_string(),
            ok.to_string(),
        ]);
    }
    out.text = table.render();
    Ok(out)
}
