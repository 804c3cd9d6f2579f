//! Command-line driver: `compute`, `verify` and `export`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use crate::algebra::{normalize_presentation, presentation_to_json, presentation_to_text, Simplifier};
use crate::geometry::{arrangement_from_json, arrangement_to_json, build_family, Arrangement, FamilyTag, GeometryError};
use crate::sweep::{run_sweep, simplify_sweep, SimplifyLevel, SweepError, SweepOptions, SweepResult};
use crate::verify::{run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMITATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "quadline", version, about = "Fundamental groups of conic-line arrangement complements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep an arrangement and print its presentation and meridians.
    Compute(ComputeArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Write a presentation, arrangement or trace.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Level {
    None,
    Paper,
    Full,
}

impl From<Level> for SimplifyLevel {
    fn from(l: Level) -> SimplifyLevel {
        match l {
            Level::None => SimplifyLevel::None,
            Level::Paper => SimplifyLevel::Scripted,
            Level::Full => SimplifyLevel::Full,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Theorems,
    Corollaries,
    Invariants,
    All,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum What {
    Presentation,
    Arrangement,
    Trace,
}

#[derive(Debug, Args)]
struct Source {
    /// A, B, Bprime, Bprimeprime, C or Cprime.
    #[arg(required_unless_present = "arrangement")]
    family: Option<String>,
    /// Number of lines of the family.
    #[arg(required_unless_present = "arrangement")]
    n: Option<usize>,
    /// Arrangement JSON file instead of a family.
    #[arg(long, conflicts_with_all = ["family", "n"])]
    arrangement: Option<PathBuf>,
    /// Skip the relators of the final singular fiber.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    ignore_last_fiber: bool,
    /// Allow transport across multiple points.
    #[arg(long)]
    half_twist: bool,
}

#[derive(Debug, Args)]
struct ComputeArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, value_enum, default_value = "paper")]
    simplify: Level,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Also write the sweep trace as JSON.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: SuiteArg,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(0..=5))]
    n_max: u64,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..=8))]
    index_max: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Debug, Args)]
struct ExportArgs {
    #[arg(long, value_enum)]
    what: What,
    #[command(flatten)]
    source: Source,
    #[arg(long, value_enum, default_value = "paper")]
    simplify: Level,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Sweep(SweepError::NoScript(_)) => EXIT_USAGE,
            CliError::Geometry(GeometryError::InvalidParams(_) | GeometryError::Json(_)) => EXIT_USAGE,
            CliError::Sweep(SweepError::UnsupportedTransport(_)) => EXIT_LIMITATION,
            _ => EXIT_FAIL,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

fn arrangement(src: &Source) -> Result<Arrangement, CliError> {
    if let Some(path) = &src.arrangement {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        let v: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        return Ok(arrangement_from_json(&v)?);
    }
    let name = src.family.as_deref().unwrap_or_default();
    let family = FamilyTag::parse(name).ok_or_else(|| CliError::Usage(format!("unknown family {name:?}")))?;
    Ok(build_family(family, src.n.unwrap_or_default(), None)?)
}

fn sweep(src: &Source) -> Result<(Arrangement, SweepResult), CliError> {
    let arr = arrangement(src)?;
    let r = run_sweep(&arr, SweepOptions { ignore_last_fiber: src.ignore_last_fiber, half_twist: src.half_twist })?;
    Ok((arr, r))
}

fn simplified(arr: &Arrangement, r: &SweepResult, level: Level) -> Result<Simplifier, CliError> {
    Ok(simplify_sweep(arr.family, arr.n, r, level.into())?)
}

fn presentation_output(s: &Simplifier, format: Format) -> String {
    let p = normalize_presentation(&s.finish());
    let meridians = s.meridian_text();
    match format {
        Format::Text => {
            let mut out = presentation_to_text(&p);
            out.push_str("\nmeridians:\n");
            for (c, w) in meridians {
                out.push_str(&format!("  {c}: {w}\n"));
            }
            out
        }
        Format::Json => {
            let m: Vec<_> = meridians.into_iter().map(|(c, w)| json!({ "component": c, "word": w })).collect();
            let v = json!({ "presentation": presentation_to_json(&p), "text": presentation_to_text(&p), "meridians": m });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(io_err(path))
}

fn compute(a: &ComputeArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (arr, r) = sweep(&a.source)?;
    if let Some(path) = &a.trace {
        write_file(path, &format!("{}\n", serde_json::to_string_pretty(&r.trace_json()).expect("json")))?;
    }
    let s = simplified(&arr, &r, a.simplify)?;
    write!(out, "{}", presentation_output(&s, a.format)).map_err(io_err(Path::new("<stdout>")))?;
    Ok(EXIT_OK)
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let suite = match a.suite {
        SuiteArg::Theorems => Suite::Theorems,
        SuiteArg::Corollaries => Suite::Corollaries,
        SuiteArg::Invariants => Suite::Invariants,
        SuiteArg::All => Suite::All,
    };
    let report = run_suite(suite, a.n_max as usize, a.index_max as usize);
    let text = match a.format {
        Format::Text => report.to_text(),
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&report.to_json()).expect("json")),
    };
    write!(out, "{text}").map_err(io_err(Path::new("<stdout>")))?;
    Ok(if !report.failures().is_empty() {
        EXIT_FAIL
    } else if report.has_resource_limits() {
        EXIT_LIMITATION
    } else {
        EXIT_OK
    })
}

fn export(a: &ExportArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let contents = match a.what {
        What::Arrangement => {
            if a.format == Format::Text {
                return Err(CliError::Usage("arrangements export as json only".into()));
            }
            let arr = arrangement(&a.source)?;
            format!("{}\n", serde_json::to_string_pretty(&arrangement_to_json(&arr, true)?).expect("json"))
        }
        What::Trace => {
            if a.format == Format::Text {
                return Err(CliError::Usage("traces export as json only".into()));
            }
            let (_, r) = sweep(&a.source)?;
            format!("{}\n", serde_json::to_string_pretty(&r.trace_json()).expect("json"))
        }
        What::Presentation => {
            let (arr, r) = sweep(&a.source)?;
            let p = normalize_presentation(&simplified(&arr, &r, a.simplify)?.finish());
            match a.format {
                Format::Text => format!("{}\n", presentation_to_text(&p)),
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&presentation_to_json(&p)).expect("json")),
            }
        }
    };
    match &a.output {
        Some(path) => write_file(path, &contents)?,
        None => write!(out, "{contents}").map_err(io_err(Path::new("<stdout>")))?,
    }
    Ok(EXIT_OK)
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{}", e.render()) } else { write!(out, "{}", e.render()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Compute(a) => compute(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Export(a) => export(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

/// Entry point for the binary.
pub fn main_exit_code() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
