//! Command-line front end for `subdiv-core`.
//!
//! Exit codes: 0 success, 1 oracle verdict FAIL, 2 parse error or missing
//! input, 3 invariant violation, 4 window too small, 5 infeasible system.

pub mod mask;
pub mod report;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use subdiv_core::analysis::{fmt_rationals, reproduction_degree, Window, DEFAULT_CAP};
use subdiv_core::constructors::{affine_solver, builtin, combine, AffineSolution, TauMode, BUILTIN_NAMES};
use subdiv_core::subdivision::{export_refinement_to_path, reproduction_oracle, GridData, PolySpec};
use subdiv_core::{analyze, format_rational, parse_rational, AnalysisOptions, Rational, Symbol};

pub use mask::{LoadedMask, MaskFile};
pub use report::{ReportJson, SolutionJson};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Invariant(_) => 3,
            CliError::WindowTooSmall(_) => 4,
            CliError::Infeasible(_) => 5,
        }
    }
}

impl From<subdiv_core::Error> for CliError {
    fn from(e: subdiv_core::Error) -> Self {
        use subdiv_core::Error as E;
        match e {
            E::Parse(_) | E::UnknownName(_) => CliError::Parse(e.to_string()),
            E::WindowTooSmall(_) => CliError::WindowTooSmall(e.to_string()),
            E::Infeasible => CliError::Infeasible(e.to_string()),
            _ => CliError::Invariant(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "subdiv", version, about = "Polynomial reproduction analysis for subdivision schemes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Zero conditions, tau and reproduction degree of a mask.
    Analyze {
        #[command(flatten)]
        input: Input,
        /// Upper bound on the degrees searched.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u32,
        /// Parametrization shift, e.g. "1/2,0".
        #[arg(long)]
        tau: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Runs exact subdivision of sampled polynomial data.
    Subdivide {
        #[command(flatten)]
        input: Input,
        /// Polynomial such as "x1^2 - 1/2*x1*x2 + 3".
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 3)]
        steps: u32,
        /// Initial data on [-B, B]^s.
        #[arg(long = "box", default_value_t = 8)]
        half_width: i64,
        #[arg(long)]
        tau: Option<String>,
        /// Compare every level with the sampled polynomial.
        #[arg(long, conflicts_with = "export")]
        oracle: bool,
        /// Write all levels as CSV.
        #[arg(long, required_unless_present = "oracle")]
        export: Option<PathBuf>,
    },
    /// Affine combinations meeting the reproduction conditions up to order k.
    Combine {
        /// Mask files or builtin names.
        #[arg(required = true)]
        sources: Vec<String>,
        #[arg(long)]
        k: u32,
        #[arg(long, conflicts_with = "free_tau", required_unless_present = "free_tau")]
        tau: Option<String>,
        #[arg(long)]
        free_tau: bool,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        force: bool,
    },
    /// Prints a mask in the JSON mask format.
    Mask {
        #[command(flatten)]
        input: Input,
    },
    /// Lists the builtin schemes.
    List,
}

#[derive(Debug, Args)]
pub struct Input {
    /// JSON mask file.
    #[arg(required_unless_present = "builtin", conflicts_with = "builtin")]
    pub file: Option<PathBuf>,
    #[arg(long)]
    pub builtin: Option<String>,
    /// Accept a dilation matrix that is not expanding.
    #[arg(long)]
    pub force: bool,
}

impl Input {
    pub fn load(&self) -> Result<LoadedMask, CliError> {
        match (&self.builtin, &self.file) {
            (Some(name), _) => Ok(builtin(name)?.into()),
            (None, Some(path)) => MaskFile::read(path)?.load(self.force),
            (None, None) => Err(CliError::Parse("no input given".into())),
        }
    }
}

pub fn parse_tau(text: &str, dim: usize) -> Result<Vec<Rational>, CliError> {
    let tau = text.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
    if tau.len() != dim {
        return Err(CliError::Invariant(format!("tau has {} entries, expected {dim}", tau.len())));
    }
    Ok(tau)
}

/// Result of one command: text for stdout and the exit code.
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Analyze { input, cap, tau, json } => cmd_analyze(input, *cap, tau.as_deref(), *json),
        Command::Subdivide {
            input,
            poly,
            steps,
            half_width,
            tau,
            oracle,
            export,
        } => cmd_subdivide(input, poly, *steps, *half_width, tau.as_deref(), *oracle, export.as_deref()),
        Command::Combine {
            sources,
            k,
            tau,
            free_tau,
            json,
            force,
        } => cmd_combine(sources, *k, tau.as_deref(), *free_tau, *json, *force),
        Command::Mask { input } => {
            let m = input.load()?;
            let file = MaskFile::from_symbol(Some(m.name), &m.symbol, &m.dilation);
            Ok(Outcome::ok(to_json(&file)?))
        }
        Command::List => {
            let mut out = String::new();
            for name in BUILTIN_NAMES {
                let b = builtin(name)?;
                writeln!(out, "{name:<18} {}", b.description).unwrap();
            }
            Ok(Outcome::ok(out))
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Io(e.to_string()))
}

pub fn cmd_analyze(input: &Input, cap: u32, tau: Option<&str>, json: bool) -> Result<Outcome, CliError> {
    let mask = input.load()?;
    let tau = match tau {
        Some(t) => Some(parse_tau(t, mask.symbol.dim())?),
        None => mask.tau.clone(),
    };
    let options = AnalysisOptions {
        cap,
        tau,
        ..AnalysisOptions::default()
    };
    let report = analyze(&mask.symbol, &mask.dilation, &options)?;
    if json {
        return to_json(&ReportJson::from(&report)).map(Outcome::ok);
    }
    let mut out = format!("scheme: {}\n{report}", mask.name);
    for n in &mask.notes {
        writeln!(out, "note: {n}").unwrap();
    }
    Ok(Outcome::ok(out))
}

fn default_tau(mask: &LoadedMask) -> Result<Vec<Rational>, CliError> {
    match &mask.tau {
        Some(t) => Ok(t.clone()),
        None => Ok(subdiv_core::analysis::compute_tau(&mask.symbol, &mask.dilation)?),
    }
}

pub fn cmd_subdivide(
    input: &Input,
    poly: &str,
    steps: u32,
    half_width: i64,
    tau: Option<&str>,
    oracle: bool,
    export: Option<&Path>,
) -> Result<Outcome, CliError> {
    let mask = input.load()?;
    let s = mask.symbol.dim();
    let pi = PolySpec::parse(poly, s)?;
    let tau = match tau {
        Some(t) => parse_tau(t, s)?,
        None => default_tau(&mask)?,
    };
    if half_width < 0 {
        return Err(CliError::WindowTooSmall(format!("box half-width {half_width} is negative")));
    }
    let window = Window::cube(s, half_width);
    if oracle {
        let v = reproduction_oracle(&mask.symbol, &mask.dilation, &tau, &pi, steps, &window)?;
        let out = match &v.mismatch {
            None => Outcome::ok(format!("PASS ({} exact comparisons over {steps} step(s), tau = {})\n", v.compared, fmt_rationals(&tau))),
            Some(mm) => Outcome {
                stdout: format!("FAIL {mm}\n"),
                code: 1,
            },
        };
        return Ok(out);
    }
    let path = export.ok_or_else(|| CliError::Parse("either --oracle or --export is required".into()))?;
    let a = mask.symbol.to_scalar::<f64>();
    let d0 = GridData::sample(&window, |alpha| subdiv_core::Scalar::to_f64(&pi.eval_int(alpha)));
    export_refinement_to_path(&a, &mask.dilation, &tau, &d0, steps, path).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(Outcome::ok(format!("wrote levels 0..{steps} to {}\n", path.display())))
}

fn load_source(source: &str, force: bool) -> Result<LoadedMask, CliError> {
    let path = Path::new(source);
    if path.exists() {
        return MaskFile::read(path)?.load(force);
    }
    if BUILTIN_NAMES.contains(&source) {
        return Ok(builtin(source)?.into());
    }
    Err(CliError::Parse(format!("{source} is neither a file nor a builtin name")))
}

pub fn cmd_combine(
    sources: &[String],
    k: u32,
    tau: Option<&str>,
    free_tau: bool,
    json: bool,
    force: bool,
) -> Result<Outcome, CliError> {
    let masks = sources.iter().map(|s| load_source(s, force)).collect::<Result<Vec<_>, _>>()?;
    let m = masks[0].dilation.clone();
    if let Some(other) = masks.iter().find(|x| x.dilation.matrix() != m.matrix()) {
        return Err(CliError::Invariant(format!(
            "{} uses dilation {}, {} uses {}",
            masks[0].name,
            m.matrix(),
            other.name,
            other.dilation.matrix()
        )));
    }
    let mode = match (tau, free_tau) {
        (_, true) => TauMode::Free,
        (Some(t), false) => TauMode::Fixed(parse_tau(t, m.dim())?),
        (None, false) => return Err(CliError::Parse("either --tau or --free-tau is required".into())),
    };
    let symbols: Vec<Symbol> = masks.iter().map(|x| x.symbol.clone()).collect();
    let sol = affine_solver(&symbols, &m, k, &mode)?;
    let check = combine(&symbols, &sol.basepoint)
        .ok()
        .and_then(|a| reproduction_degree(&a, &m, Some(&sol.tau.base), DEFAULT_CAP).ok())
        .map(|r| r.degree);
    if json {
        return to_json(&SolutionJson::new(&sol, check)).map(Outcome::ok);
    }
    Ok(Outcome::ok(render_solution(&masks, &sol, check)))
}

fn render_solution(masks: &[LoadedMask], sol: &AffineSolution, check: Option<i64>) -> String {
    let mut out = String::new();
    let names: Vec<&str> = masks.iter().map(|m| m.name.as_str()).collect();
    writeln!(out, "symbols: {}", names.join(", ")).unwrap();
    writeln!(out, "basepoint lambda = {}", fmt_rationals(&sol.basepoint)).unwrap();
    writeln!(out, "free directions: {}", sol.free_count()).unwrap();
    for (i, d) in sol.basis.iter().enumerate() {
        writeln!(out, "  t{} * {}", i + 1, fmt_rationals(d)).unwrap();
    }
    writeln!(out, "tau at basepoint = {}", fmt_rationals(&sol.tau.base)).unwrap();
    if sol.tau.directions.iter().any(|d| d.iter().any(|x| *x != Rational::from_integer(0.into()))) {
        for (i, d) in sol.tau.directions.iter().enumerate() {
            writeln!(out, "  tau direction t{}: {}", i + 1, fmt_rationals(d)).unwrap();
        }
    }
    if sol.residuals.is_empty() {
        writeln!(out, "residuals: none").unwrap();
    } else {
        writeln!(out, "residuals (must vanish):").unwrap();
        for r in &sol.residuals {
            writeln!(out, "  j = {}: {}", r.j, residual_text(&r.poly)).unwrap();
        }
    }
    match check {
        Some(d) => writeln!(out, "basepoint combination: kR = {d}").unwrap(),
        None => writeln!(out, "basepoint combination: kR unavailable").unwrap(),
    }
    out
}

/// Polynomial in the free parameters `t1, t2, ...`, e.g. `3 + 2*t2 - t2^2`.
pub fn residual_text(p: &Symbol) -> String {
    let mut out = String::new();
    for (e, c) in p.terms() {
        let vars: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &k)| k != 0)
            .map(|(i, &k)| if k == 1 { format!("t{}", i + 1) } else { format!("t{}^{k}", i + 1) })
            .collect();
        let neg = c < &Rational::from_integer(0.into());
        let abs = if neg { -c.clone() } else { c.clone() };
        let mut factors = Vec::new();
        if vars.is_empty() || abs != Rational::from_integer(1.into()) {
            factors.push(format_rational(&abs));
        }
        factors.extend(vars);
        let body = factors.join("*");
        match (out.is_empty(), neg) {
            (true, true) => out = format!("-{body}"),
            (true, false) => out = body,
            (false, true) => write!(out, " - {body}").unwrap(),
            (false, false) => write!(out, " + {body}").unwrap(),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
