use clap::{Args, Parser, Subcommand};
use helmstab::config::{schema_help, KeySpec, KeyValues};
use helmstab_cli::{
    calibrate, direct, far2near, geometry, hankel, instability, load_config, modal, parse_override,
    CliError, Outcome,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Wavenumber-explicit stability experiments for outgoing Helmholtz waves.
///
/// Every command reads `key = value` settings from --config, then applies
/// --set key=value and the named flags. Exit codes: 0 success, 1 runtime
/// failure, 2 bad configuration, 3 failed hypothesis or check under --strict.
#[derive(Parser)]
#[command(name = "helmstab", version)]
struct Cli {
    /// Exit with code 3 when any row fails its hypothesis or check.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Configuration file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one key, repeatable.
    #[arg(long = "set", value_parser = parse_override)]
    set: Vec<(String, String)>,
    /// Output path (stdout when absent).
    #[arg(long)]
    out: Option<String>,
}

fn keys(schema: &[KeySpec]) -> String {
    format!(
        "Configuration keys (key = default  # meaning):\n{}",
        schema_help(schema)
    )
}

#[derive(Subcommand)]
enum Cmd {
    /// Hankel function values and envelope checks.
    #[command(subcommand)]
    Hankel(HankelCmd),
    /// Modal spectra of outgoing fields.
    #[command(subcommand)]
    Modal(ModalCmd),
    /// Direct scattering by a sound-soft star-shaped obstacle.
    #[command(subcommand)]
    Direct(DirectCmd),
    /// Near-field reconstruction from noisy far fields.
    #[command(subcommand)]
    Far2near(Far2nearCmd),
    /// Obstacle classes, separated families and visibility.
    #[command(subcommand)]
    Geometry(GeometryCmd),
    /// Instability radii for the inverse obstacle problem.
    #[command(subcommand)]
    Instability(InstabilityCmd),
    /// Calibrate the envelope and derived constants into a report.
    #[command(after_help = keys(calibrate::SCHEMA))]
    Calibrate {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum HankelCmd {
    /// Print "re im abs" of H1_nu(z).
    #[command(after_help = keys(hankel::EVAL_SCHEMA))]
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        nu: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// CSV nu,z,abs,lower,upper,regime,ok over a grid file.
    #[command(after_help = keys(hankel::VERIFY_SCHEMA))]
    Verify {
        #[arg(long)]
        grid: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum ModalCmd {
    /// Far-field spectrum of the sound-soft disc.
    #[command(after_help = keys(modal::MIE_SCHEMA))]
    Mie {
        #[arg(long)]
        k: Option<String>,
        #[arg(long)]
        a: Option<String>,
        #[arg(long = "omega-deg", allow_hyphen_values = true)]
        omega_deg: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// CSV r,nearfield_norm,farfield_norm for a spectrum file.
    #[command(after_help = keys(modal::NORMS_SCHEMA))]
    Norms {
        #[arg(long)]
        spectrum: Option<String>,
        #[arg(long = "r-grid")]
        r_grid: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum DirectCmd {
    /// Far-field samples theta,re,im with a metadata header.
    #[command(after_help = keys(direct::SCHEMA))]
    Solve {
        #[arg(long)]
        shape: Option<String>,
        #[arg(long)]
        k: Option<String>,
        #[arg(long = "omega-deg", allow_hyphen_values = true)]
        omega_deg: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum Far2nearCmd {
    /// CSV k,epsilon,regime,n,j0,bound,measured_error,ok.
    #[command(after_help = keys(far2near::SCHEMA))]
    Sweep {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum GeometryCmd {
    /// Shape files of a delta-separated family plus a separation manifest.
    #[command(after_help = keys(geometry::PACK_SCHEMA))]
    Pack {
        #[arg(long)]
        delta: Option<String>,
        #[arg(long)]
        count: Option<String>,
        #[arg(long = "out-dir")]
        out_dir: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// CSV hull,E0 for the shipped convex hulls.
    #[command(after_help = keys(geometry::VISIBILITY_SCHEMA))]
    Visibility {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum InstabilityCmd {
    /// CSV k,eps,eps_tilde,branch,t_tilde,delta,dh_lower,net_log,pack_log,k_eps.
    #[command(after_help = keys(instability::SCHEMA))]
    Table {
        #[arg(long)]
        s: Option<String>,
        #[arg(long = "eps-grid")]
        eps_grid: Option<String>,
        #[arg(long = "k-grid")]
        k_grid: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

type Runner = fn(&KeyValues) -> Result<Outcome, CliError>;

fn execute(
    schema: &[KeySpec],
    common: Common,
    flags: Vec<(&str, Option<String>)>,
    run: Runner,
    strict: bool,
) -> Result<bool, CliError> {
    let mut overrides = common.set;
    overrides.extend(
        flags
            .into_iter()
            .filter_map(|(k, v)| v.map(|v| (k.to_string(), v))),
    );
    if let Some(o) = common.out {
        overrides.push(("out".into(), o));
    }
    let kv = load_config(common.config.as_deref(), &overrides, schema)?;
    let outcome = run(&kv)?;
    outcome.emit(kv.raw("out").map(Path::new))?;
    for f in &outcome.failures {
        eprintln!("check failed: {f}");
    }
    Ok(outcome.all_ok || !strict)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let strict = cli.strict;
    let result = match cli.cmd {
        Cmd::Hankel(HankelCmd::Eval { nu, z, common }) => execute(
            hankel::EVAL_SCHEMA,
            common,
            vec![("nu", nu), ("z", z)],
            hankel::run_eval,
            strict,
        ),
        Cmd::Hankel(HankelCmd::Verify { grid, common }) => execute(
            hankel::VERIFY_SCHEMA,
            common,
            vec![("grid", grid)],
            hankel::run_verify,
            strict,
        ),
        Cmd::Modal(ModalCmd::Mie {
            k,
            a,
            omega_deg,
            common,
        }) => execute(
            modal::MIE_SCHEMA,
            common,
            vec![("k", k), ("a", a), ("omega_deg", omega_deg)],
            modal::run_mie,
            strict,
        ),
        Cmd::Modal(ModalCmd::Norms {
            spectrum,
            r_grid,
            common,
        }) => execute(
            modal::NORMS_SCHEMA,
            common,
            vec![("spectrum", spectrum), ("r_grid", r_grid)],
            modal::run_norms,
            strict,
        ),
        Cmd::Direct(DirectCmd::Solve {
            shape,
            k,
            omega_deg,
            common,
        }) => execute(
            direct::SCHEMA,
            common,
            vec![("shape", shape), ("k", k), ("omega_deg", omega_deg)],
            direct::run_solve,
            strict,
        ),
        Cmd::Far2near(Far2nearCmd::Sweep { common }) => execute(
            far2near::SCHEMA,
            common,
            vec![],
            far2near::run_stability_sweep,
            strict,
        ),
        Cmd::Geometry(GeometryCmd::Pack {
            delta,
            count,
            out_dir,
            common,
        }) => execute(
            geometry::PACK_SCHEMA,
            common,
            vec![("delta", delta), ("count", count), ("out_dir", out_dir)],
            geometry::run_pack,
            strict,
        ),
        Cmd::Geometry(GeometryCmd::Visibility { common }) => execute(
            geometry::VISIBILITY_SCHEMA,
            common,
            vec![],
            geometry::run_visibility,
            strict,
        ),
        Cmd::Instability(InstabilityCmd::Table {
            s,
            eps_grid,
            k_grid,
            common,
        }) => execute(
            instability::SCHEMA,
            common,
            vec![("s", s), ("eps_grid", eps_grid), ("k_grid", k_grid)],
            instability::run_instability,
            strict,
        ),
        Cmd::Calibrate { common } => execute(
            calibrate::SCHEMA,
            common,
            vec![],
            calibrate::run_calibration,
            strict,
        ),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
