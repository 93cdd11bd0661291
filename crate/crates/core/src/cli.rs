//! Command-line front end.
//!
//! Every run is deterministic. Errors map to exit codes by kind:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | verification failed |
//! | 2 | invalid arguments or parameters out of their domain |
//! | 3 | numerical failure (quadrature, root finding, degenerate geometry) |
//! | 4 | the hypersurface misses the slab of a warped product |
//! | 5 | file input/output |

use crate::assemble::{assemble, chart_grid, write_obj, write_points_csv, AssembleOptions, AssembledHypersurface};
use crate::error::{Error, Result};
use crate::export::csv_row;
use crate::families::{FamilyKind, FamilySpec, LambdaTable};
use crate::profile::{Profile, ProfileOptions};
use crate::spaceform::SpaceFormId;
use crate::verify::{
    cylinder_grid, graph_grid, umbilicity_report, CylinderSurface, GraphSurface, DEFAULT_STEP,
};
use crate::warp::{classify_warped, pull_back, write_warped_csv, WarpMetadata, WarpSpec, WarpTable, EXP_NEG_OFFSET};
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_EMPTY_SLAB: i32 = 4;
pub const EXIT_IO: i32 = 5;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "UMBILIC_THREADS";

#[derive(Parser, Debug)]
#[command(name = "umbilic", version, about = "Totally umbilical hypersurfaces of S^n x R, H^n x R and warped products")]
#[command(args_conflicts_with_subcommands = true)]
struct Cli {
    /// File of `key=value` lines supplying defaults for the subcommand flags.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate the profile `(s, rho, phi, lambda)`.
    Profile(ProfileArgs),
    /// Assemble the hypersurface and export a mesh or point cloud with metadata.
    Build(BuildArgs),
    /// Run the shape-operator oracle and report umbilicity.
    Verify(VerifyArgs),
    /// Transfer the hypersurface to a warped product.
    Warp(WarpArgs),
    /// Print topology and symmetry data, optionally for a warped transfer.
    Classify(ClassifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Space {
    S,
    H,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Sphere,
    Horosphere,
    Equidistant,
    Custom,
}

#[derive(Args, Debug, Clone)]
struct SurfaceArgs {
    /// Ambient space form; defaults to `h` for horospheres and equidistants.
    #[arg(long, value_enum)]
    space: Option<Space>,
    #[arg(long, value_enum, default_value = "sphere")]
    family: Family,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    c: f64,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// `s,lambda` CSV for the custom family.
    #[arg(long, value_name = "FILE")]
    lambda_table: Option<PathBuf>,
    /// Half-width of the chart box of flat leaves.
    #[arg(long, allow_negative_numbers = true)]
    chart_half_width: Option<f64>,
}

#[derive(Args, Debug)]
struct ProfileArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Output CSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    /// Rows in `s` per piece.
    #[arg(long, default_value_t = 64)]
    ns: usize,
    /// Samples along the slice of the mesh.
    #[arg(long, default_value_t = 48)]
    nv: usize,
    /// Chart samples per coordinate of point clouds (dim > 3).
    #[arg(long, default_value_t = 6)]
    nc: usize,
    #[arg(long, default_value_t = -2, allow_negative_numbers = true)]
    k_min: i32,
    #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
    k_max: i32,
    /// Output prefix: writes `<prefix>.obj` (or `.csv`) and `<prefix>.json`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    #[arg(long, default_value_t = DEFAULT_STEP)]
    h: f64,
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    #[arg(long)]
    ns: Option<usize>,
    #[arg(long)]
    nc: Option<usize>,
    /// Relative amplitude of a smooth perturbation of the height function.
    #[arg(long, allow_negative_numbers = true)]
    perturb: Option<f64>,
    /// Verify the vertical cylinder over the leaf with this parameter instead.
    #[arg(long, allow_negative_numbers = true)]
    cylinder: Option<f64>,
    /// Also write the report JSON to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct WarpArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    /// `t`, `exp-neg`, `const:<k>`, `cosh` or `table:<file>`.
    #[arg(long)]
    omega: String,
    /// Half-width of the recentred slab of a constant warping.
    #[arg(long)]
    delta: Option<f64>,
    /// Offset of the primitive of `exp(-t)`.
    #[arg(long, allow_negative_numbers = true)]
    offset: Option<f64>,
    #[arg(long, default_value_t = 64)]
    ns: usize,
    #[arg(long, default_value_t = 8)]
    nc: usize,
    /// Output prefix: writes `<prefix>.csv` and `<prefix>.json`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    #[arg(long)]
    omega: Option<String>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    offset: Option<f64>,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::DimensionMismatch { .. }
        | Error::NotUnit { .. }
        | Error::OutOfDomain { .. }
        | Error::InvalidParameter(_)
        | Error::Unsupported(_)
        | Error::WrongEndpoint { .. }
        | Error::Parse(_) => EXIT_INVALID,
        Error::Quadrature { .. } | Error::RootFinding(_) | Error::Degenerate(_) => EXIT_NUMERIC,
        Error::EmptySlab { .. } => EXIT_EMPTY_SLAB,
        Error::Io(_) => EXIT_IO,
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message: message.into(),
    }
}

/// Runs the command line `args` (including the program name), writing
/// results to standard output and diagnostics to standard error. Returns the
/// exit code.
pub fn run(args: Vec<String>) -> i32 {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run_to(args, &mut out) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn run_to<W: Write>(args: Vec<String>, out: &mut W) -> std::result::Result<i32, Failure> {
    let args = apply_config(args)?;
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return Ok(code);
        }
    };
    configure_threads()?;
    match cli.command {
        Command::Profile(a) => cmd_profile(&a, out),
        Command::Build(a) => cmd_build(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Warp(a) => cmd_warp(&a, out),
        Command::Classify(a) => cmd_classify(&a, out),
    }
}

fn configure_threads() -> std::result::Result<(), Failure> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| invalid(format!("{THREADS_ENV} must be a positive integer, got {value:?}")))?;
    // a second run in the same process keeps the pool it already has
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Splices `key=value` lines of the `--config` file into the arguments as
/// `--key value`, for keys not given on the command line.
fn apply_config(args: Vec<String>) -> std::result::Result<Vec<String>, Failure> {
    let mut path = None;
    let mut rest = Vec::with_capacity(args.len());
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            path = Some(it.next().ok_or_else(|| invalid("--config needs a file"))?);
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    let text = fs::read_to_string(&path).map_err(|e| Failure {
        code: EXIT_IO,
        message: format!("cannot read config {path}: {e}"),
    })?;
    let sub = rest
        .iter()
        .skip(1)
        .find(|a| !a.starts_with('-'))
        .cloned()
        .ok_or_else(|| invalid("a subcommand is required with --config"))?;
    let command = Cli::command();
    let sub_cmd = command
        .find_subcommand(&sub)
        .ok_or_else(|| invalid(format!("unknown subcommand {sub:?}")))?;
    let known: Vec<String> = sub_cmd
        .get_arguments()
        .filter_map(|a| a.get_long().map(String::from))
        .collect();
    let mut extra = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| invalid(format!("config line {}: expected key=value", lineno + 1)))?;
        let key = key.trim().replace('_', "-");
        if !known.contains(&key) || key == "help" || key == "version" {
            return Err(invalid(format!("config line {}: unknown key {key:?} for {sub}", lineno + 1)));
        }
        let flag = format!("--{key}");
        let given = rest.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if !given {
            extra.push(format!("{flag}={}", value.trim()));
        }
    }
    rest.extend(extra);
    Ok(rest)
}

fn family_spec(a: &SurfaceArgs) -> Result<FamilySpec> {
    let space_choice = match (a.space, a.family) {
        (Some(s), _) => s,
        (None, Family::Horosphere | Family::Equidistant) => Space::H,
        (None, _) => Space::S,
    };
    let space = match space_choice {
        Space::S => SpaceFormId::sphere(a.dim)?,
        Space::H => SpaceFormId::hyperbolic(a.dim)?,
    };
    let family = match a.family {
        Family::Sphere => FamilySpec::sphere(space)?,
        Family::Horosphere => FamilySpec::horosphere(space)?,
        Family::Equidistant => FamilySpec::equidistant(space)?,
        Family::Custom => {
            let path = a
                .lambda_table
                .as_ref()
                .ok_or_else(|| Error::InvalidParameter("the custom family needs --lambda-table".into()))?;
            FamilySpec::custom(space, LambdaTable::from_csv(&fs::read_to_string(path)?)?)
        }
    };
    match a.chart_half_width {
        Some(l) => family.with_chart_half_width(l),
        None => Ok(family),
    }
}

fn build_profile(a: &SurfaceArgs) -> Result<Profile> {
    Profile::new(family_spec(a)?, a.c, ProfileOptions::default())
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents)?;
    Ok(())
}

fn with_extension(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn cmd_profile<W: Write>(a: &ProfileArgs, out: &mut W) -> std::result::Result<i32, Failure> {
    if a.samples < 2 {
        return Err(invalid("--samples must be at least 2"));
    }
    let profile = build_profile(&a.surface)?;
    let (lo, hi) = profile.s_range();
    // truncated ends are open; singular ends are sampled exactly
    let closed = profile.rho(hi).is_ok();
    let intervals = if closed { a.samples - 1 } else { a.samples };
    let mut text = String::from("s,rho,phi,lambda\n");
    for i in 0..a.samples {
        let s = if closed && i + 1 == a.samples {
            hi
        } else {
            lo + (hi - lo) * i as f64 / intervals as f64
        };
        // the leaf degenerates to a point where lambda has its pole
        let lambda = match profile.lambda(s) {
            Ok(l) => l,
            Err(_) if s == lo && profile.family().kind().is_sphere() => f64::NEG_INFINITY,
            Err(e) => return Err(e.into()),
        };
        let row = [s, profile.rho(s)?, profile.phi(s)?, lambda];
        text.push_str(&csv_row(&row));
        text.push('\n');
    }
    match &a.out {
        Some(path) => write_file(path, text.as_bytes())?,
        None => out.write_all(text.as_bytes()).map_err(Error::from)?,
    }
    Ok(0)
}

fn assembled(a: &SurfaceArgs, periods: (i32, i32)) -> Result<AssembledHypersurface> {
    let profile = build_profile(a)?;
    if profile.family().kind() == FamilyKind::CustomLambda {
        return Err(Error::Unsupported("assembly of custom families".into()));
    }
    assemble(&profile, AssembleOptions { periods })
}

fn cmd_build<W: Write>(a: &BuildArgs, out: &mut W) -> std::result::Result<i32, Failure> {
    if a.k_min > a.k_max {
        return Err(invalid("--k-min must not exceed --k-max"));
    }
    if a.ns < 2 {
        return Err(invalid("--ns must be at least 2"));
    }
    let h = assembled(&a.surface, (a.k_min, a.k_max))?;
    let json = h.metadata().to_json();
    if let Some(prefix) = &a.out {
        let mut buf = Vec::new();
        if a.surface.dim <= 3 {
            write_obj(&h.slice_mesh(a.ns, a.nv)?, &mut buf)?;
            write_file(&with_extension(prefix, "obj"), &buf)?;
        } else {
            let charts = chart_grid(h.profile(), a.nc)?;
            write_points_csv(&h.sample(a.ns, &charts)?, &mut buf)?;
            write_file(&with_extension(prefix, "csv"), &buf)?;
        }
        write_file(&with_extension(prefix, "json"), format!("{json}\n").as_bytes())?;
    }
    writeln!(out, "{json}").map_err(Error::from)?;
    Ok(0)
}

fn cmd_verify<W: Write>(a: &VerifyArgs, out: &mut W) -> std::result::Result<i32, Failure> {
    if !(a.h > 0.0 && a.tol > 0.0) {
        return Err(invalid("--h and --tol must be positive"));
    }
    let low_dim = a.surface.dim <= 2;
    let ns = a.ns.unwrap_or(if low_dim { 20 } else { 8 });
    let nc = a.nc.unwrap_or(if low_dim { 10 } else { 5 });
    if ns < 1 || nc < 1 {
        return Err(invalid("--ns and --nc must be positive"));
    }
    let report = if let Some(s) = a.cylinder {
        if a.perturb.is_some() {
            return Err(invalid("--perturb applies to graphs, not cylinders"));
        }
        let family = family_spec(&a.surface)?;
        if family.kind() == FamilyKind::CustomLambda {
            return Err(Error::Unsupported("cylinders over custom leaves".into()).into());
        }
        let surface = CylinderSurface::new(family, s);
        umbilicity_report(&surface, &cylinder_grid(&surface, nc, ns)?, a.h, a.tol)?
    } else {
        let profile = build_profile(&a.surface)?;
        if profile.family().kind() == FamilyKind::CustomLambda {
            return Err(Error::Unsupported("graphs over custom leaves".into()).into());
        }
        let surface = match a.perturb {
            Some(amp) => GraphSurface::perturbed(profile, amp),
            None => GraphSurface::new(profile),
        };
        umbilicity_report(&surface, &graph_grid(&surface, ns, nc, None)?, a.h, a.tol)?
    };
    let json = report.to_json();
    if let Some(path) = &a.out {
        write_file(path, format!("{json}\n").as_bytes())?;
    }
    writeln!(out, "{json}").map_err(Error::from)?;
    Ok(if report.passed { 0 } else { EXIT_VERIFY_FAILED })
}

/// Parses `t`, `exp-neg` (or `exp(-t)`), `const:<k>`, `cosh` and
/// `table:<file>`.
fn warp_spec(omega: &str, delta: Option<f64>, offset: Option<f64>) -> Result<WarpSpec> {
    let omega = omega.trim();
    let no_delta = |name: &str| match delta {
        Some(_) => Err(Error::InvalidParameter(format!("--delta applies to constant warpings, not {name}"))),
        None => Ok(()),
    };
    if offset.is_some() && !matches!(omega, "exp-neg" | "exp(-t)") {
        return Err(Error::InvalidParameter(format!("--offset applies to exp-neg, not {omega}")));
    }
    match omega {
        "t" => {
            no_delta(omega)?;
            Ok(WarpSpec::identity())
        }
        "exp-neg" | "exp(-t)" => {
            no_delta(omega)?;
            WarpSpec::exp_neg(offset.unwrap_or(EXP_NEG_OFFSET))
        }
        "cosh" => {
            no_delta(omega)?;
            Ok(WarpSpec::cosh())
        }
        _ => {
            if let Some(k) = omega.strip_prefix("const:") {
                let k: f64 = k
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("constant warping {omega:?}: expected const:<k>")))?;
                match delta {
                    Some(d) if !(d > 0.0) => Err(Error::InvalidParameter(format!("--delta must be positive, got {d}"))),
                    Some(d) => WarpSpec::constant_with_delta(k, d),
                    None => WarpSpec::constant(k, f64::INFINITY),
                }
            } else if let Some(path) = omega.strip_prefix("table:") {
                no_delta("tables")?;
                Ok(WarpSpec::table(WarpTable::from_csv(&fs::read_to_string(path)?)?))
            } else {
                Err(Error::Parse(format!(
                    "unknown warping {omega:?}; expected t, exp-neg, const:<k>, cosh or table:<file>"
                )))
            }
        }
    }
}

fn cmd_warp<W: Write>(a: &WarpArgs, out: &mut W) -> std::result::Result<i32, Failure> {
    let spec = warp_spec(&a.omega, a.delta, a.offset)?;
    let h = assembled(&a.surface, AssembleOptions::default().periods)?;
    let charts = chart_grid(h.profile(), a.nc)?;
    let samples = h.sample(a.ns, &charts)?;
    let class = classify_warped(&spec, &h);
    let set = pull_back(&spec, &h, &samples)?;
    let json = WarpMetadata::new(&spec, &class, &set).to_json();
    if let Some(prefix) = &a.out {
        let mut buf = Vec::new();
        write_warped_csv(&set, &mut buf)?;
        write_file(&with_extension(prefix, "csv"), &buf)?;
        write_file(&with_extension(prefix, "json"), format!("{json}\n").as_bytes())?;
    }
    writeln!(out, "{json}").map_err(Error::from)?;
    Ok(0)
}

fn cmd_classify<W: Write>(a: &ClassifyArgs, out: &mut W) -> std::result::Result<i32, Failure> {
    let h = assembled(&a.surface, AssembleOptions::default().periods)?;
    let mut doc = serde_json::to_value(h.metadata()).expect("metadata serializes");
    match &a.omega {
        Some(omega) => {
            let spec = warp_spec(omega, a.delta, a.offset)?;
            let class = classify_warped(&spec, &h);
            let r = crate::export::round_sig;
            doc["warped"] = serde_json::json!({
                "omega": spec.name(),
                "delta": if class.delta.is_finite() {
                    serde_json::json!(r(class.delta))
                } else {
                    serde_json::json!("inf")
                },
                "topology": class.topology.name(),
                "complete": class.complete,
                "borderline": class.borderline,
            });
        }
        None if a.delta.is_some() || a.offset.is_some() => {
            return Err(invalid("--delta and --offset need --omega"));
        }
        None => {}
    }
    writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json")).map_err(Error::from)?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let args = std::iter::once("umbilic").chain(args.iter().copied()).map(String::from).collect();
        let code = match run_to(args, &mut buf) {
            Ok(c) => c,
            Err(f) => f.code,
        };
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn warp_spec_parsing() {
        assert_eq!(warp_spec("t", None, None).unwrap().name(), "t");
        assert_eq!(warp_spec("exp(-t)", None, None).unwrap().offset(), EXP_NEG_OFFSET);
        assert_eq!(warp_spec("exp-neg", None, Some(3.0)).unwrap().offset(), 3.0);
        assert_eq!(warp_spec("const:2", Some(0.5), None).unwrap().delta(), 0.5);
        assert!(warp_spec("const:2", None, None).unwrap().delta().is_infinite());
        assert!(matches!(warp_spec("t", Some(1.0), None), Err(Error::InvalidParameter(_))));
        assert!(matches!(warp_spec("cosh", None, Some(1.0)), Err(Error::InvalidParameter(_))));
        assert!(matches!(warp_spec("sinh", None, None), Err(Error::Parse(_))));
        assert!(matches!(warp_spec("const:x", None, None), Err(Error::Parse(_))));
    }

    #[test]
    fn exit_codes_by_kind() {
        assert_eq!(run_capture(&["profile", "--c", "-1"]).0, EXIT_INVALID);
        assert_eq!(run_capture(&["profile", "--family", "equidistant", "--c", "1.5"]).0, EXIT_INVALID);
        assert_eq!(run_capture(&["profile", "--family", "horosphere", "--space", "s"]).0, EXIT_INVALID);
        assert_eq!(run_capture(&["build", "--dim", "1"]).0, EXIT_INVALID);
        assert_eq!(run_capture(&["frobnicate"]).0, EXIT_INVALID);
        assert_eq!(
            run_capture(&["warp", "--omega", "exp-neg", "--offset", "-5", "--c", "2", "--ns", "4"]).0,
            EXIT_EMPTY_SLAB
        );
        assert_eq!(
            run_capture(&["profile", "--family", "custom", "--lambda-table", "/nonexistent/table.csv"]).0,
            EXIT_IO
        );
    }

    #[test]
    fn profile_to_stdout() {
        let (code, text) = run_capture(&["profile", "--c", "2", "--samples", "5"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "s,rho,phi,lambda");
        assert_eq!(lines.len(), 6);
        assert!(lines[1].ends_with("-inf"));
    }

    #[test]
    fn config_keys_are_validated() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.cfg");
        fs::write(&cfg, "# sphere of radius parameter 2\nc = 2\nsamples=3\n").unwrap();
        let cfg = cfg.to_str().unwrap();
        let (code, text) = run_capture(&["profile", "--config", cfg]);
        assert_eq!(code, 0);
        assert_eq!(text.lines().count(), 4);
        // the command line wins over the file
        let (code, text) = run_capture(&["profile", "--samples", "6", "--config", cfg]);
        assert_eq!(code, 0);
        assert_eq!(text.lines().count(), 7);
        let bad = dir.path().join("bad.cfg");
        fs::write(&bad, "radius=2\n").unwrap();
        assert_eq!(run_capture(&["profile", "--config", bad.to_str().unwrap()]).0, EXIT_INVALID);
        // keys belong to the subcommand they configure
        let other = dir.path().join("other.cfg");
        fs::write(&other, "omega=t\n").unwrap();
        assert_eq!(run_capture(&["profile", "--config", other.to_str().unwrap()]).0, EXIT_INVALID);
    }
}
