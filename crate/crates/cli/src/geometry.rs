//! `geometry pack` materializes a δ-separated family of class members;
//! `geometry visibility` fits E0 for the shipped hulls.

use crate::table::{fmt_f64, Table};
use crate::{runtime, schema, CliError, Outcome};
use helmstab::config::{KeySpec, KeyValues};
use helmstab::geometry::{
    build_delta_discrete, fit_visibility_constant, hausdorff_distance, shipped_hulls, ObstacleClass,
};
use rayon::prelude::*;
use std::path::PathBuf;

pub const PACK_SCHEMA: &[KeySpec] = &[
    KeySpec {
        name: "delta",
        default: "",
        help: "separation (bump height)",
    },
    KeySpec {
        name: "count",
        default: "16",
        help: "members wanted",
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
        name: "class_delta",
        default: "0.1",
        help: "radial width of the class",
    },
    KeySpec {
        name: "delta0",
        default: "0.1",
        help: "largest admissible separation",
    },
    KeySpec {
        name: "out_dir",
        default: "pack",
        help: "directory for member_NNN.shape files",
    },
    KeySpec {
        name: "out",
        default: "",
        help: "manifest CSV path (out_dir/manifest.csv when empty)",
    },
];

pub const VISIBILITY_SCHEMA: &[KeySpec] = &[
    KeySpec {
        name: "samples",
        default: "512",
        help: "boundary samples per shape",
    },
    KeySpec {
        name: "dirs",
        default: "32",
        help: "outward directions per hull",
    },
    KeySpec {
        name: "d_grid",
        default: "0.001,0.01,0.1,1",
        help: "distances from the hull",
    },
    KeySpec {
        name: "out",
        default: "",
        help: "CSV path (stdout when empty)",
    },
];

/// Manifest `a,b,hausdorff,separated` over all member pairs.
pub fn run_pack(kv: &KeyValues) -> Result<Outcome, CliError> {
    let delta = kv.f64("delta")?;
    let class = ObstacleClass::new(
        kv.usize("m")?,
        kv.f64("beta")?,
        kv.f64("R0")?,
        kv.f64("class_delta")?,
    )
    .map_err(schema)?;
    let set = build_delta_discrete(delta, class, kv.f64("delta0")?, kv.usize("count")?)
        .map_err(schema)?;
    let dir = PathBuf::from(kv.string("out_dir")?);
    let n = set.members.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let dists: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| hausdorff_distance(&set.members[i], &set.members[j]))
        .collect();
    let mut table = Table::new(&["a", "b", "hausdorff", "separated"]);
    table.meta("delta", fmt_f64(delta));
    table.meta("cells", set.cells.to_string());
    table.meta("members", n.to_string());
    let mut out = Outcome::ok(String::new());
    // relative slack for the optimizer's last digits
    let floor = set.separation * (1.0 - 1e-9);
    for (&(i, j), &d) in pairs.iter().zip(&dists) {
        let ok = d >= floor;
        if !ok {
            out.all_ok = false;
            out.failures
                .push(format!("members {i} and {j} are only {d} apart"));
        }
        table.push(vec![
            i.to_string(),
            j.to_string(),
            fmt_f64(d),
            ok.to_string(),
        ]);
    }
    out.files = set
        .members
        .iter()
        .enumerate()
        .map(|(i, s)| (dir.join(format!("member_{i:03}.shape")), s.to_text()))
        .collect();
    if kv.raw("out").is_none() {
        out.files.push((dir.join("manifest.csv"), table.render()));
    }
    out.text = table.render();
    Ok(out)
}

/// `hull,E0` for every shipped hull.
pub fn run_visibility(kv: &KeyValues) -> Result<Outcome, CliError> {
    let ds = kv.grid("d_grid")?;
    if ds.iter().any(|&d| !(d > 0.0)) {
        return Err(schema("distances must be positive"));
    }
    let dirs = kv.usize("dirs")?;
    let hulls = shipped_hulls(kv.usize("samples")?);
    let fits: Vec<f64> = hulls
        .par_iter()
        .map(|(_, h)| fit_visibility_constant(h, &ds, dirs))
        .collect();
    let mut table = Table::new(&["hull", "E0"]);
    let mut out = Outcome::ok(String::new());
    for ((name, _), e0) in hulls.iter().zip(fits) {
        if !(e0 > 0.0) {
            out.all_ok = false;
            out.failures.push(format!("hull {name}: E0 = {e0}"));
        }
        table.push(vec![name.clone(), fmt_f64(e0)]);
    }
    if hulls.is_empty() {
        return Err(runtime("no shipped hulls"));
    }
    out.text = table.render();
    Ok(out)
}
