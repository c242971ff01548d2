//! `orthoplex` command-line tool.
//!
//! Exit codes: 0 success, 2 bad arguments, 3 invalid code or failed check,
//! 4 runtime failure. Errors go to stderr as a JSON object.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use orthoplex::analysis::{gsd_scan, logical_basis};
use orthoplex::defect::{reference_paths, PlanonPath};
use orthoplex::dynamics::{run_script, Script};
use orthoplex::manifest::{Metadata, ModelKind};
use orthoplex::{build_dislocation, CodeManifest, Error, LatticeShape, OrthoplexModel};

#[derive(Parser)]
#[command(name = "orthoplex", version, about = "Build and analyze orthoplex CSS codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Orthoplex3d,
    Orthoplex4d,
    OrthoplexPd,
    ToricHgp,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code and write its manifest.
    Build {
        #[arg(long, value_enum)]
        model: ModelArg,
        /// Comma-separated side lengths, e.g. 4,4,4.
        #[arg(long, value_delimiter = ',', required = true)]
        size: Vec<usize>,
        /// Axes with open boundaries, as letters (xz) or indices (0,2).
        #[arg(long)]
        open: Option<String>,
        /// Output path; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the CSS condition, the product complex and a fresh rebuild.
    Check { manifest: PathBuf },
    /// Print `n k`.
    Params { manifest: PathBuf },
    /// Tabulate k over a grid of periodic shapes as CSV.
    GsdScan {
        #[arg(long)]
        lx: String,
        #[arg(long)]
        ly: String,
        #[arg(long)]
        lz: String,
        #[arg(long)]
        lw: Option<String>,
    },
    /// Logical representatives with their commutation certificates.
    Logicals { manifest: PathBuf },
    /// Run an operator script and print the syndrome trace.
    Excite {
        manifest: PathBuf,
        #[arg(long)]
        script: PathBuf,
        /// Axis to project along after each step (x, y, z, w or an index).
        #[arg(long)]
        project: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Build the dislocation and report on it.
    Defect {
        /// One side length for a cube, or three.
        #[arg(long, value_delimiter = ',', default_value = "6")]
        size: Vec<usize>,
        /// Also count zero modes (dense; small lattices only).
        #[arg(long)]
        zero_modes: bool,
        /// Braid along the built-in reference paths (sides of at least 24).
        #[arg(long)]
        braid: bool,
        /// Braid along the paths in a JSON file (one path or a list).
        #[arg(long)]
        paths: Option<PathBuf>,
        /// List removed qubits.
        #[arg(long)]
        list_removed: bool,
    },
}

struct Failure {
    code: u8,
    kind: String,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            kind: "Usage".into(),
            message: message.into(),
        }
    }

    fn io(e: std::io::Error, what: &str) -> Self {
        Self {
            code: 4,
            kind: "Io".into(),
            message: format!("{what}: {e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidSize(_)
            | Error::InvalidDimension(_)
            | Error::DegreeOutOfRange { .. }
            | Error::ShapeTooSmall(_)
            | Error::SpecOutOfRange(_)
            | Error::InvalidCell { .. }
            | Error::InvalidPath(_)
            | Error::OffsetOutOfRange(_)
            | Error::NonClosingPath(_) => 2,
            Error::InvalidPartition(_) | Error::ContainmentViolation(_) | Error::ShapeMismatch(_) => 3,
            _ => 4,
        };
        Self {
            code,
            kind: e.kind().into(),
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn metadata() -> Metadata {
    Metadata {
        tool_version: env!("CARGO_PKG_VERSION").into(),
    }
}

fn emit(key: &str, value: impl Serialize) {
    let mut out = json!({ "metadata": metadata() });
    out[key] = serde_json::to_value(value).expect("report serializes");
    println!("{}", serde_json::to_string_pretty(&out).expect("json"));
}

fn parse_axis(s: &str) -> Result<usize, Failure> {
    match s {
        "x" => Ok(0),
        "y" => Ok(1),
        "z" => Ok(2),
        "w" => Ok(3),
        _ => s.parse().map_err(|_| Failure::usage(format!("bad axis {s:?}"))),
    }
}

fn open_axes(spec: &str) -> Result<Vec<usize>, Failure> {
    if spec.chars().all(|c| "xyzw".contains(c)) {
        spec.chars().map(|c| parse_axis(&c.to_string())).collect()
    } else {
        spec.split(',').map(|a| parse_axis(a.trim())).collect()
    }
}

/// Inclusive range `a..b`, or a single value.
fn parse_range(s: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure::usage(format!("bad range {s:?}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b): (usize, usize) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
            if a > b {
                return Err(bad());
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![s.parse().map_err(|_| bad())?]),
    }
}

fn load(path: &PathBuf) -> Result<CodeManifest, Failure> {
    Ok(CodeManifest::load(path)?)
}

fn cmd_build(model: ModelArg, size: Vec<usize>, open: Option<String>, out: Option<PathBuf>) -> CmdResult {
    let expected = match model {
        ModelArg::Orthoplex3d => Some(3),
        ModelArg::Orthoplex4d => Some(4),
        _ => None,
    };
    if let Some(p) = expected {
        if size.len() != p {
            return Err(Failure::usage(format!("this model needs {p} sizes, got {}", size.len())));
        }
    }
    let mut periodic = vec![true; size.len()];
    if let Some(spec) = open {
        for a in open_axes(&spec)? {
            *periodic
                .get_mut(a)
                .ok_or_else(|| Failure::usage(format!("axis {a} out of range")))? = false;
        }
    }
    let shape = LatticeShape::new(size, periodic)?;
    let manifest = match model {
        ModelArg::ToricHgp => CodeManifest::standard_hgp(&shape, 1)?,
        _ => CodeManifest::from_model(&OrthoplexModel::build(shape)?),
    }
    .with_metadata(metadata());
    if !manifest.check()?.pass {
        return Ok(3);
    }
    match out {
        Some(path) => manifest.save(path)?,
        None => println!("{}", manifest.to_json()),
    }
    Ok(0)
}

fn cmd_check(path: PathBuf) -> CmdResult {
    let report = load(&path)?.check()?;
    let pass = report.pass;
    emit("check", report);
    Ok(if pass { 0 } else { 3 })
}

fn cmd_params(path: PathBuf) -> CmdResult {
    let (n, k) = load(&path)?.code()?.params();
    println!("{n} {k}");
    Ok(0)
}

fn cmd_gsd_scan(lx: String, ly: String, lz: String, lw: Option<String>) -> CmdResult {
    let mut axes = vec![parse_range(&lx)?, parse_range(&ly)?, parse_range(&lz)?];
    if let Some(lw) = lw {
        axes.push(parse_range(&lw)?);
    }
    let mut grid: Vec<Vec<usize>> = vec![vec![]];
    for values in &axes {
        grid = grid
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |&v| {
                    let mut s = prefix.clone();
                    s.push(v);
                    s
                })
            })
            .collect();
    }
    let shapes = grid
        .iter()
        .map(|s| LatticeShape::periodic(s))
        .collect::<Result<Vec<_>, _>>()?;
    let records = gsd_scan(&shapes)?;
    let names = ["lx", "ly", "lz", "lw"];
    let mut out = String::new();
    writeln!(out, "{},n,k,predicted,match", names[..axes.len()].join(",")).unwrap();
    for r in records {
        let sizes: Vec<String> = r.sizes.iter().map(ToString::to_string).collect();
        let opt = |v: Option<String>| v.unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{}",
            sizes.join(","),
            r.n,
            r.k,
            opt(r.predicted.map(|p| p.to_string())),
            opt(r.matched.map(|m| m.to_string()))
        )
        .unwrap();
    }
    print!("{out}");
    Ok(0)
}

fn cmd_logicals(path: PathBuf) -> CmdResult {
    let code = load(&path)?.code()?;
    if !code.is_css() {
        return Err(Error::InvalidPartition("X and Z checks do not commute".into()).into());
    }
    let set = logical_basis(&code);
    let support = |v: &orthoplex::BitVector| v.ones().collect::<Vec<_>>();
    let certify = |v: &orthoplex::BitVector, checks: &orthoplex::BitMatrix| {
        checks.mul_vec(v).map(|s| s.is_zero()).unwrap_or(false)
    };
    let x: Vec<Value> = set
        .x
        .iter()
        .map(|v| json!({ "support": support(v), "commutes_with_z_checks": certify(v, &code.hz) }))
        .collect();
    let z: Vec<Value> = set
        .z
        .iter()
        .map(|v| json!({ "support": support(v), "commutes_with_x_checks": certify(v, &code.hx) }))
        .collect();
    emit(
        "logicals",
        json!({ "k": set.k(), "x": x, "z": z, "pairing_full_rank": set.pairing_full_rank() }),
    );
    Ok(0)
}

fn cmd_excite(path: PathBuf, script: PathBuf, project: Option<String>, seed: u64) -> CmdResult {
    let manifest = load(&path)?;
    if manifest.kind != ModelKind::OrthoplexPd {
        return Err(Failure::usage("excite needs an orthoplex manifest"));
    }
    let model = OrthoplexModel::build(manifest.shape()?)?;
    if model.code != manifest.code()? {
        return Err(Error::ShapeMismatch("manifest matrices differ from the lattice build".into()).into());
    }
    let text = std::fs::read_to_string(&script).map_err(|e| Failure::io(e, &script.display().to_string()))?;
    let script = Script::from_json(&text).map_err(|e| Failure::usage(format!("script: {e}")))?;
    let project = project.as_deref().map(parse_axis).transpose()?;
    let trace = run_script(&model, &script, seed, project)?;
    emit("trace", trace);
    Ok(0)
}

fn cmd_defect(size: Vec<usize>, zero_modes: bool, braid: bool, paths: Option<PathBuf>, list_removed: bool) -> CmdResult {
    let sizes = match size.as_slice() {
        [l] => vec![*l; 3],
        [_, _, _] => size.clone(),
        _ => return Err(Failure::usage("give one side length or three")),
    };
    let dm = build_dislocation(&LatticeShape::open(&sizes)?)?;
    let commutation = dm.commutation_check();
    let mut report = json!({
        "sizes": sizes,
        "removed": dm.removed.len(),
        "line": dm.line.len(),
        "touched": dm.touched,
        "generators": dm.generators.len(),
        "commutation": { "pass": commutation.pass, "anticommuting": commutation.anticommuting.len() },
    });
    if list_removed {
        report["removed_qubits"] = json!(dm.removed);
    }
    if zero_modes {
        report["zero_modes"] = json!(dm.zero_modes()?);
    }
    let mut to_braid: Vec<(String, PlanonPath)> = Vec::new();
    if braid {
        to_braid.extend(reference_paths().into_iter().map(|(n, p)| (n.to_string(), p)));
    }
    if let Some(file) = paths {
        let text = std::fs::read_to_string(&file).map_err(|e| Failure::io(e, &file.display().to_string()))?;
        let parsed: Vec<PlanonPath> = serde_json::from_str::<Vec<PlanonPath>>(&text)
            .or_else(|_| serde_json::from_str::<PlanonPath>(&text).map(|p| vec![p]))
            .map_err(|e| Failure::usage(format!("paths: {e}")))?;
        to_braid.extend(parsed.into_iter().enumerate().map(|(i, p)| (format!("path-{i}"), p)));
    }
    if !to_braid.is_empty() {
        let mut verdicts = serde_json::Map::new();
        for (name, path) in to_braid {
            let v = dm.braid_planon(&path)?;
            let mut entry = serde_json::to_value(&v).expect("verdict serializes");
            entry["transport_verified"] = json!(dm.check_transport(&v));
            verdicts.insert(name, entry);
        }
        report["braids"] = Value::Object(verdicts);
    }
    emit("defect", report);
    Ok(if commutation.pass { 0 } else { 3 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build { model, size, open, out } => cmd_build(model, size, open, out),
        Command::Check { manifest } => cmd_check(manifest),
        Command::Params { manifest } => cmd_params(manifest),
        Command::GsdScan { lx, ly, lz, lw } => cmd_gsd_scan(lx, ly, lz, lw),
        Command::Logicals { manifest } => cmd_logicals(manifest),
        Command::Excite {
            manifest,
            script,
            project,
            seed,
        } => cmd_excite(manifest, script, project, seed),
        Command::Defect {
            size,
            zero_modes,
            braid,
            paths,
            list_removed,
        } => cmd_defect(size, zero_modes, braid, paths, list_removed),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let body = json!({ "error": { "kind": f.kind, "message": f.message, "exit_code": f.code } });
            eprintln!("{body}");
            ExitCode::from(f.code)
        }
    }
}
