use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use invarforms::algebra::expr::{parse_form, parse_scalar, Context};
use invarforms::cohomology::{cohomology_dims, Theory};
use invarforms::feasibility::{build_ansatz, certificate_check, verify_witness, witness_search, Certificate, Mode, SearchOptions, SearchOutcome, BUNDLED};
use invarforms::structures::{default_point, load_catalog, parse_any};
use invarforms::suites::{canonical_json, run_suite, RunOptions, Status};
use invarforms::{AlgebraSpec, Error, Form, GaussRat};

const EXIT_INTERNAL: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_NONEXISTENCE: u8 = 3;
const EXIT_UNKNOWN: u8 = 4;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "invarforms", version, about = "Invariant forms on Lie algebras with complex structures")]
struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Jacobi identity, integrability and descriptive flags.
    Validate { input: String },
    /// Dimensions of a cohomology theory.
    Cohomology {
        input: String,
        #[arg(long)]
        theory: String,
        #[arg(long)]
        theta: Option<String>,
        #[arg(long = "param", value_name = "K=V")]
        params: Vec<String>,
    },
    /// Verify an explicit witness.
    Check {
        input: String,
        #[arg(long)]
        structure: String,
        #[arg(long)]
        omega: Option<String>,
        #[arg(long)]
        theta: Option<String>,
        #[arg(long = "param", value_name = "K=V")]
        params: Vec<String>,
    },
    /// Search for a witness; falls back to bundled certificates.
    Search {
        input: String,
        #[arg(long)]
        structure: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long = "param", value_name = "K=V")]
        params: Vec<String>,
    },
    /// Check a nonexistence certificate.
    Certify { input: String, certificate: String },
    /// Run a fixed suite: surfaces, nilmanifolds6, solvclasses, nakamura, lefschetz, cohomology or all.
    Reproduce {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Record wall-clock times.
        #[arg(long)]
        timings: bool,
    },
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Run = Result<(Value, String, u8), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok((value, text, code)) => {
            let mut out = std::io::stdout().lock();
            let _ = match cli.format {
                Format::Json => write!(out, "{}", canonical_json(&value)),
                Format::Text => writeln!(out, "{}", text),
            };
            ExitCode::from(code)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {}", msg);
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("{}", e);
            ExitCode::from(match e {
                Error::Io(_) => EXIT_INTERNAL,
                _ => EXIT_INVALID,
            })
        }
    }
}

fn run(cmd: Command) -> Run {
    match cmd {
        Command::Validate { input } => validate(&input),
        Command::Cohomology { input, theory, theta, params } => cohomology(&input, &theory, theta.as_deref(), &params),
        Command::Check { input, structure, omega, theta, params } => check(&input, &structure, omega.as_deref(), theta.as_deref(), &params),
        Command::Search { input, structure, seed, budget, params } => search(&input, &structure, seed, budget, &params),
        Command::Certify { input, certificate } => certify(&input, &certificate),
        Command::Reproduce { suite, seed, timings } => reproduce(&suite, seed, timings),
    }
}

/// A file path, an inline Salamon tuple, or the name of a catalog fixture.
fn load(input: &str) -> Result<(AlgebraSpec, bool), Error> {
    if Path::new(input).exists() {
        Ok((parse_any(&std::fs::read_to_string(input)?)?, false))
    } else if input.trim_start().starts_with('(') {
        Ok((parse_any(input)?, false))
    } else {
        Ok((load_catalog(input)?, true))
    }
}

fn parse_params(params: &[String]) -> Result<BTreeMap<String, GaussRat>, Failure> {
    let mut out = BTreeMap::new();
    for p in params {
        let (k, v) = p.split_once('=').ok_or_else(|| Failure::Usage(format!("--param expects K=V, got '{}'", p)))?;
        let value = parse_scalar(v, &Context::new())?
            .as_constant()
            .ok_or_else(|| Failure::Usage(format!("parameter value '{}' is not a number", v)))?;
        out.insert(k.trim().to_string(), value);
    }
    Ok(out)
}

/// Instantiated spec: explicit parameters, else catalog defaults.
fn instance(input: &str, params: &[String]) -> Result<AlgebraSpec, Failure> {
    let (spec, catalog) = load(input)?;
    let mut values = parse_params(params)?;
    if values.is_empty() && catalog && !spec.is_constant() {
        values = default_point(input)?;
    }
    if values.is_empty() {
        return Ok(spec);
    }
    Ok(spec.evaluate(&values)?)
}

fn validate(input: &str) -> Run {
    let (spec, _) = load(input)?;
    let r = spec.validate();
    let flag = |b: Option<bool>| b.map_or("n/a".to_string(), |v| v.to_string());
    let mut text = format!(
        "{}\n  jacobi      {}\n  integrable  {}\n  unimodular  {}\n  nilpotent   {}\n  abelian J   {}",
        spec.name,
        r.jacobi_valid,
        flag(r.integrable),
        r.unimodular,
        flag(r.nilpotent),
        flag(r.abelian_j)
    );
    for f in &r.failures {
        text.push_str(&format!("\n  failure: {}", f));
    }
    let code = if r.is_valid() { 0 } else { EXIT_INVALID };
    Ok((json!({ "algebra": spec.name, "report": r }), text, code))
}

fn cohomology(input: &str, theory: &str, theta: Option<&str>, params: &[String]) -> Run {
    let spec = instance(input, params)?;
    let theta = theta.map(|t| parse_form(t, &spec.context())).transpose()?;
    let r = cohomology_dims(&spec, &Theory::from_tag(theory, theta)?)?;
    Ok((serde_json::to_value(&r).map_err(Error::from)?, r.to_string(), 0))
}

fn mode(structure: &str) -> Result<Mode, Failure> {
    Mode::parse(structure).map_err(|e| Failure::Usage(e.to_string()))
}

fn check(input: &str, structure: &str, omega: Option<&str>, theta: Option<&str>, params: &[String]) -> Run {
    let mode = mode(structure)?;
    let spec = instance(input, params)?;
    let omega = omega.ok_or_else(|| Failure::Usage("check needs --omega".into()))?;
    let omega = parse_form(omega, &spec.context())?;
    let theta = match theta {
        Some(t) => parse_form(t, &spec.context())?,
        None => Form::zero(spec.frame()),
    };
    match verify_witness(&spec, mode, &omega, &theta) {
        Ok(w) => {
            let text = format!("{} {}: {}\n  omega {}\n  theta {}", spec.name, mode, Status::Witness, w.omega, w.theta);
            Ok((json!({ "algebra": spec.name, "status": Status::Witness, "witness": w }), text, 0))
        }
        Err(Error::Validation(msg)) => {
            let text = format!("{} {}: {}\n  {}", spec.name, mode, Status::Fail, msg);
            Ok((json!({ "algebra": spec.name, "status": Status::Fail, "reason": msg }), text, EXIT_INVALID))
        }
        Err(e) => Err(e.into()),
    }
}

fn search(input: &str, structure: &str, seed: u64, budget: Option<usize>, params: &[String]) -> Run {
    let mode = mode(structure)?;
    let spec = instance(input, params)?;
    let ansatz = build_ansatz(&spec, mode)?;
    let mut opts = SearchOptions { seed, ..Default::default() };
    if let Some(b) = budget {
        opts.budget = b;
    }
    match witness_search(&spec, &ansatz, opts)? {
        SearchOutcome::Found { witness, candidate } => {
            let text = format!("{} {}: {}\n  omega {}\n  theta {}", spec.name, mode, Status::Witness, witness.omega, witness.theta);
            Ok((json!({ "algebra": spec.name, "status": Status::Witness, "witness": witness, "candidate": candidate }), text, 0))
        }
        SearchOutcome::Unknown { candidates, samples } => {
            let values = parse_params(params)?;
            for b in BUNDLED.iter().filter(|b| b.fixture == spec.name) {
                let cert = b.certificate()?;
                if cert.mode()? != mode || !same_point(&cert, &values) {
                    continue;
                }
                let v = certificate_check(&load_catalog(b.fixture)?, None, &cert)?;
                if v.is_valid() {
                    let text = format!("{} {}: {} (certificate {})", spec.name, mode, Status::CertifiedNonexistence, b.name);
                    let value = json!({ "algebra": spec.name, "status": Status::CertifiedNonexistence, "certificate": b.name });
                    return Ok((value, text, EXIT_NONEXISTENCE));
                }
            }
            let text = format!("{} {}: {} after {} samples over {} Lee candidates", spec.name, mode, Status::Unknown, samples, candidates);
            let value = json!({ "algebra": spec.name, "status": Status::Unknown, "candidates": candidates, "samples": samples });
            Ok((value, text, EXIT_UNKNOWN))
        }
    }
}

/// Whether a certificate covers the requested parameter point.
fn same_point(cert: &Certificate, values: &BTreeMap<String, GaussRat>) -> bool {
    cert.params.iter().all(|(k, v)| {
        let want = parse_scalar(v, &Context::new()).ok().and_then(|s| s.as_constant());
        values.get(k).is_some_and(|x| Some(x) == want.as_ref())
    })
}

fn certify(input: &str, path: &str) -> Run {
    let (spec, _) = load(input)?;
    let cert = Certificate::from_json(&std::fs::read_to_string(path).map_err(Error::from)?)?;
    let v = certificate_check(&spec, None, &cert)?;
    let code = if v.is_valid() { 0 } else { EXIT_INVALID };
    Ok((json!({ "algebra": spec.name, "ansatz": cert.ansatz, "verdict": v }), format!("{}: {}", spec.name, v), code))
}

fn reproduce(suite: &str, seed: u64, timings: bool) -> Run {
    if suite.trim().is_empty() {
        return Err(Failure::Usage("--suite needs a name".into()));
    }
    let report = run_suite(suite, &RunOptions { seed, timings }).map_err(|e| match e {
        Error::UnknownName(m) => Failure::Usage(format!("unknown {}", m)),
        e => Failure::Lib(e),
    })?;
    let code = report.exit_code() as u8;
    Ok((serde_json::to_value(&report).map_err(Error::from)?, report.to_string(), code))
}
