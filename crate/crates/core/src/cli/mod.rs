//! Command-line front end. [`run`] parses arguments, dispatches to the
//! library and renders one JSON document; the `dunkl` binary is a thin
//! wrapper around it.

pub mod json;
pub mod parser;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::almansi::{almansi_decompose, h_harmonic_decompose};
use crate::coxeter::{Family, RootSystem, WeightedRootSystem};
use crate::dunkl::DunklContext;
use crate::error::{Error, Result};
use crate::liouville::{classify, Grid};
use crate::poly::Polynomial;
use crate::scalar::{parse_scalar, Scalar};
use crate::sphereint::{NumericSettings, SphericalIntegrator, DEFAULT_SAMPLES, DEFAULT_SEED};

pub use json::{polynomial_from_json, polynomial_to_json};
pub use parser::parse_polynomial;

pub const SCHEMA_VERSION: u32 = 1;
/// Environment variable that replaces the default seed.
pub const SEED_ENV: &str = "DUNKL_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "dunkl",
    version,
    about = "Dunkl operators, h-harmonic decompositions and weighted spherical means for polynomials"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dunkl operator D_j f.
    Apply {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        poly: PolyArgs,
        /// Coordinate index, 1-based.
        #[arg(long)]
        j: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Dunkl Laplacian of f.
    Laplacian {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Whether f is h-harmonic, and its polyharmonic order.
    Harmonic {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Splits a homogeneous f into |x|^{2j}-weighted h-harmonics.
    Hdecomp {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Almansi decomposition f = Σ |x|^{2m} φ_m of a polyharmonic f.
    Almansi {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        poly: PolyArgs,
        /// Polyharmonic order: Δ_h^p f = 0.
        #[arg(long)]
        p: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Mean value property check for an h-harmonic f.
    Mean {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        numeric: NumericArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Weighted spherical mean M_1(r, f) at the given radii.
    M1 {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        numeric: NumericArgs,
        /// Comma-separated radii.
        #[arg(long, value_delimiter = ',', required = true)]
        radii: Vec<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Growth report and degree verdict for Δ_h^p f = 0.
    Classify {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        numeric: NumericArgs,
        /// Polyharmonic order: Δ_h^p f = 0.
        #[arg(long)]
        p: u32,
        /// Growth scale s >= 2(p-1).
        #[arg(long)]
        s: u32,
        /// Comma-separated radius grid (default 2^4, ..., 2^12).
        #[arg(long, value_delimiter = ',')]
        radii: Option<Vec<String>>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Root-system and multiplicity checks.
    Validate {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SystemArgs {
    /// Named family: Z2, A, B, D or I2.
    #[arg(long, conflicts_with = "roots_json")]
    pub family: Option<String>,
    /// Dimension for Z2, B and D.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Rank for A.
    #[arg(long)]
    pub rank: Option<usize>,
    /// Order parameter for I2.
    #[arg(long)]
    pub m: Option<usize>,
    /// Multiplicities, one per orbit, e.g. "1/2,1/2" (default all zero).
    /// Custom systems carry theirs in the JSON file, one per root.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "roots_json")]
    pub kappa: Option<String>,
    /// Custom system: {"dimension", "roots", "kappa", "unchecked_kappa"}.
    #[arg(long)]
    pub roots_json: Option<PathBuf>,
    /// Allow negative multiplicities.
    #[arg(long)]
    pub unchecked_kappa: bool,
    /// Floating-point arithmetic instead of exact rationals.
    #[arg(long)]
    pub float: bool,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct PolyArgs {
    /// Polynomial text, e.g. "3*x1^2*x2 - 1/2*x3".
    #[arg(long)]
    pub poly: Option<String>,
    /// File holding polynomial text or polynomial JSON.
    #[arg(long)]
    pub poly_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct NumericArgs {
    /// RNG seed for Monte Carlo (else DUNKL_SEED, else a fixed default).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte Carlo sample count.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Force numeric quadrature even where closed forms exist.
    #[arg(long)]
    pub numeric: bool,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write the JSON document here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Apply { .. } => "apply",
            Command::Laplacian { .. } => "laplacian",
            Command::Harmonic { .. } => "harmonic",
            Command::Hdecomp { .. } => "hdecomp",
            Command::Almansi { .. } => "almansi",
            Command::Mean { .. } => "mean",
            Command::M1 { .. } => "m1",
            Command::Classify { .. } => "classify",
            Command::Validate { .. } => "validate",
        }
    }

    fn system(&self) -> &SystemArgs {
        match self {
            Command::Apply { system, .. }
            | Command::Laplacian { system, .. }
            | Command::Harmonic { system, .. }
            | Command::Hdecomp { system, .. }
            | Command::Almansi { system, .. }
            | Command::Mean { system, .. }
            | Command::M1 { system, .. }
            | Command::Classify { system, .. }
            | Command::Validate { system, .. } => system,
        }
    }

    fn output(&self) -> &OutputArgs {
        match self {
            Command::Apply { output, .. }
            | Command::Laplacian { output, .. }
            | Command::Harmonic { output, .. }
            | Command::Hdecomp { output, .. }
            | Command::Almansi { output, .. }
            | Command::Mean { output, .. }
            | Command::M1 { output, .. }
            | Command::Classify { output, .. }
            | Command::Validate { output, .. } => output,
        }
    }
}

/// A finished command: JSON body plus whether it counts as success.
struct Rendered {
    body: Value,
    ok: bool,
    warnings: Vec<String>,
}

fn error_document(command: Option<&str>, code: &str, message: &str) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "ok": false,
        "error": { "code": code, "message": message },
    })
}

fn render(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    exit_code: 0,
                    stdout: e.to_string(),
                    stderr: String::new(),
                };
            }
            let message = e.to_string();
            let first = message.lines().next().unwrap_or("").trim_start_matches("error: ");
            return Outcome {
                exit_code: 2,
                stdout: render(&error_document(None, "usage_error", first)),
                stderr: message,
            };
        }
    };
    let name = cli.command.name();
    let result = if cli.command.system().float {
        execute::<f64>(&cli.command)
    } else {
        execute::<BigRational>(&cli.command)
    };
    let (doc, code, mut stderr) = match result {
        Ok(r) => {
            let mut doc = json!({
                "schema_version": SCHEMA_VERSION,
                "command": name,
                "ok": r.ok,
            });
            if let (Value::Object(d), Value::Object(b)) = (&mut doc, r.body) {
                d.extend(b);
            }
            let stderr: String = r.warnings.iter().map(|w| format!("warning: {w}\n")).collect();
            (doc, if r.ok { 0 } else { 1 }, stderr)
        }
        Err(e) => {
            let code = if e.is_usage() { 2 } else { 1 };
            (
                error_document(Some(name), e.code(), &e.to_string()),
                code,
                format!("error: {e}\n"),
            )
        }
    };
    let text = render(&doc);
    let stdout = match &cli.command.output().output {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => String::new(),
            Err(e) => {
                stderr.push_str(&format!("error: cannot write {}: {e}\n", path.display()));
                return Outcome {
                    exit_code: 2,
                    stdout: text,
                    stderr,
                };
            }
        },
        None => text,
    };
    Outcome {
        exit_code: code,
        stdout,
        stderr,
    }
}

fn parse_list<S: Scalar>(text: &str, what: &str) -> Result<Vec<S>> {
    text.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            parse_scalar(t).ok_or_else(|| {
                let hint = if S::EXACT { " (rationals like 1/2; decimals need --float)" } else { "" };
                Error::Input(format!("cannot parse {what} value {t:?}{hint}"))
            })
        })
        .collect()
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

fn custom_system<S: Scalar>(path: &Path, args: &SystemArgs, validate: bool) -> Result<WeightedRootSystem<S>> {
    let v: Value = serde_json::from_str(&read_file(path)?)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    let dim = v
        .get("dimension")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Input("root system JSON needs \"dimension\"".into()))? as usize;
    let roots = v
        .get("roots")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Input("root system JSON needs a \"roots\" array".into()))?
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::Input("each root must be an array".into()))?
                .iter()
                .map(|x| json::scalar_from_json::<S>(x, "root coordinate"))
                .collect::<Result<Vec<S>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let kappa = match v.get("kappa").and_then(Value::as_array) {
        Some(k) => k
            .iter()
            .map(|x| json::scalar_from_json::<S>(x, "kappa"))
            .collect::<Result<Vec<S>>>()?,
        None => vec![S::zero(); roots.len()],
    };
    let unchecked = args.unchecked_kappa || v.get("unchecked_kappa").and_then(Value::as_bool).unwrap_or(false);
    let system = RootSystem::new(dim, roots)?;
    if validate {
        WeightedRootSystem::new_unvalidated(system, kappa, unchecked)
    } else {
        WeightedRootSystem::new(system, kappa, unchecked)
    }
}

fn build_system<S: Scalar>(args: &SystemArgs, validate: bool) -> Result<WeightedRootSystem<S>> {
    if let Some(path) = &args.roots_json {
        return custom_system(path, args, validate);
    }
    let name = args
        .family
        .as_deref()
        .ok_or_else(|| Error::Input("give --family or --roots-json".into()))?;
    let param = args
        .dim
        .or(args.rank)
        .or(args.m)
        .ok_or_else(|| Error::Input("give --dim, --rank or --m for the family".into()))?;
    let family = Family::from_name(name, param)?;
    let kappa: Vec<S> = match &args.kappa {
        Some(text) => parse_list(text, "kappa")?,
        None => {
            let orbits = family.root_system::<S>()?.orbits().len();
            vec![S::zero(); orbits]
        }
    };
    WeightedRootSystem::build_named(family, &kappa, args.unchecked_kappa)
}

fn load_polynomial<S: Scalar>(args: &PolyArgs, dim: usize) -> Result<Polynomial<S>> {
    match (&args.poly, &args.poly_file) {
        (Some(text), _) => parse_polynomial(text, dim),
        (None, Some(path)) => {
            let text = read_file(path)?;
            if text.trim_start().starts_with('{') {
                let v: Value = serde_json::from_str(&text)
                    .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
                polynomial_from_json(&v, dim)
            } else {
                parse_polynomial(text.trim(), dim)
            }
        }
        (None, None) => Err(Error::Input("give --poly or --poly-file".into())),
    }
}

fn settings(args: &NumericArgs) -> Result<NumericSettings> {
    let seed = match args.seed {
        Some(s) => s,
        None => match std::env::var(SEED_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Error::Input(format!("{SEED_ENV}={v:?} is not an unsigned integer")))?,
            Err(_) => DEFAULT_SEED,
        },
    };
    Ok(NumericSettings {
        seed,
        samples: args.samples.unwrap_or(DEFAULT_SAMPLES).max(2),
        ..NumericSettings::default()
    })
}

fn integrator<S: Scalar>(ctx: &DunklContext<S>, args: &NumericArgs) -> Result<SphericalIntegrator<S>> {
    let settings = settings(args)?;
    Ok(if args.numeric {
        SphericalIntegrator::numeric(ctx, settings)
    } else {
        SphericalIntegrator::auto(ctx, settings)
    })
}

fn settings_value<S: Scalar>(intg: &SphericalIntegrator<S>) -> Value {
    json!({
        "seed": intg.settings().seed,
        "samples": intg.settings().samples,
        "mode": intg.mode(),
    })
}

fn poly_value<S: Scalar>(p: &Polynomial<S>) -> Value {
    json!({ "text": p.to_string(), "json": polynomial_to_json(p) })
}

fn system_summary<S: Scalar>(ws: &WeightedRootSystem<S>) -> Value {
    json!({
        "dimension": ws.dim(),
        "roots": ws.system().len(),
        "positive_roots": ws.system().positive_indices().len(),
        "gamma": json::scalar_value(ws.gamma()),
        "exact": S::EXACT,
    })
}

fn execute<S: Scalar>(cmd: &Command) -> Result<Rendered> {
    let args = cmd.system();
    let mut warnings = Vec::new();
    if args.unchecked_kappa {
        warnings.push(
            "--unchecked-kappa: multiplicities are not checked against the regular parameter set".into(),
        );
    }
    if let Command::Validate { .. } = cmd {
        let ws = build_system::<S>(args, true)?;
        let report = ws.validate();
        return Ok(Rendered {
            ok: report.all_passed(),
            body: json!({
                "system": system_summary(&ws),
                "all_passed": report.all_passed(),
                "failures": report.failures(),
                "checks": report.checks,
            }),
            warnings,
        });
    }
    let ws = build_system::<S>(args, false)?;
    let summary = system_summary(&ws);
    let ctx = DunklContext::new(ws);
    let n = ctx.dim();
    let mut body = match cmd {
        Command::Apply { poly, j, .. } => {
            let f = load_polynomial::<S>(poly, n)?;
            if *j == 0 || *j > n {
                return Err(Error::IndexOutOfRange { index: *j, dim: n });
            }
            json!({ "j": j, "input": poly_value(&f), "result": poly_value(&ctx.apply(j - 1, &f)?) })
        }
        Command::Laplacian { poly, .. } => {
            let f = load_polynomial::<S>(poly, n)?;
            json!({ "input": poly_value(&f), "result": poly_value(&ctx.laplacian(&f)?) })
        }
        Command::Harmonic { poly, .. } => {
            let f = load_polynomial::<S>(poly, n)?;
            json!({
                "input": poly_value(&f),
                "h_harmonic": ctx.is_h_harmonic(&f)?,
                "polyharmonic_order": ctx.polyharmonic_order(&f, None)?,
            })
        }
        Command::Hdecomp { poly, .. } => {
            let f = load_polynomial::<S>(poly, n)?;
            let dec = h_harmonic_decompose(&ctx, &f)?;
            let parts: Vec<Value> = dec
                .parts()
                .iter()
                .map(|(j, h)| json!({ "j": j, "degree": dec.degree() - 2 * j, "harmonic": poly_value(h) }))
                .collect();
            json!({ "input": poly_value(&f), "degree": dec.degree(), "parts": parts })
        }
        Command::Almansi { poly, p, .. } => {
            let f = load_polynomial::<S>(poly, n)?;
            let dec = almansi_decompose(&ctx, &f, *p)?;
            let parts: Vec<Value> = dec
                .parts()
                .iter()
                .enumerate()
                .map(|(m, phi)| json!({ "m": m, "phi": poly_value(phi) }))
                .collect();
            json!({ "input": poly_value(&f), "p": p, "parts": parts })
        }
        Command::Mean { poly, numeric, .. } => {
            let f = load_polynomial::<S>(poly, n)?;
            let intg = integrator(&ctx, numeric)?;
            let rep = intg.mean_value_check(&f)?;
            let c = intg.mean_value_constant();
            json!({
                "input": poly_value(&f),
                "lhs": rep.lhs.value,
                "lhs_error": rep.lhs.error,
                "lhs_over_c": rep.lhs.c_multiple.as_ref().map(json::scalar_value),
                "rhs": rep.rhs,
                "rhs_error": rep.rhs_error,
                "f_at_origin": json::scalar_value(&rep.f_at_origin),
                "c": c.value,
                "c_closed_form": c.closed_form.as_ref().map(|f| f.to_string()),
                "method": rep.lhs.method,
                "exact": rep.exact,
                "pass": rep.pass,
                "settings": settings_value(&intg),
            })
        }
        Command::M1 { poly, numeric, radii, .. } => {
            let f = load_polynomial::<S>(poly, n)?;
            let intg = integrator(&ctx, numeric)?;
            let c = intg.mean_value_constant().clone();
            let radii: Vec<S> = parse_list(&radii.join(","), "radius")?;
            let mut values = Vec::new();
            for r in &radii {
                let m = intg.m1(r, &f)?;
                values.push(json!({
                    "r": json::scalar_value(r),
                    "value": m.value,
                    "error": m.error,
                    "exact": m.exact_value(&c).map(|v| v.to_string()),
                    "method": m.method,
                }));
            }
            json!({ "input": poly_value(&f), "m1": values, "settings": settings_value(&intg) })
        }
        Command::Classify { poly, numeric, p, s, radii, .. } => {
            let f = load_polynomial::<S>(poly, n)?;
            let intg = integrator(&ctx, numeric)?;
            let grid = match radii {
                Some(r) => Grid::new(
                    parse_list::<S>(&r.join(","), "radius")?
                        .iter()
                        .map(|r| r.to_f64())
                        .collect(),
                )?,
                None => Grid::default(),
            };
            let rep = classify(&intg, &f, *p, *s, &grid)?;
            json!({
                "input": poly_value(&f),
                "verdict": rep.verdict.as_str(),
                "agrees_with_degree": rep.agrees,
                "report": serde_json::to_value(&rep).expect("report serializes"),
                "settings": settings_value(&intg),
            })
        }
        Command::Validate { .. } => unreachable!("handled above"),
    };
    if let Value::Object(b) = &mut body {
        b.insert("system".into(), summary);
    }
    Ok(Rendered {
        body,
        ok: true,
        warnings,
    })
}
