//! The `arithdyn` command line: argument handling, dispatch and report output.
//!
//! [`run`] does all the work and returns what should be written to stdout and
//! stderr together with the exit code, so the binary is a thin wrapper and tests
//! can drive the tool in-process.

mod report;

use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use arithdyn::degrees::{self, DegreeConfig};
use arithdyn::expr::{parse_map, ParseError};
use arithdyn::orbit::{self, OrbitConfig};
use arithdyn::{Error, PolynomialMap, RationalPoint};

pub use report::SCHEMA;

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "arithdyn", version, about = "Dynamical degrees and heights of plane polynomial maps over Q")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Degree sequence deg f^n.
    Degrees,
    /// First and topological dynamical degrees.
    Dyndeg,
    /// Height of a point and its local decomposition.
    Height,
    /// Canonical height estimate.
    Canheight,
    /// Exact orbit with heights.
    Orbit,
    /// Periodic / height-growing classification.
    Classify,
    /// Degrees, orbits, estimates and the small-topological-degree report.
    Analyze,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Degrees => "degrees",
            Command::Dyndeg => "dyndeg",
            Command::Height => "height",
            Command::Canheight => "canheight",
            Command::Orbit => "orbit",
            Command::Classify => "classify",
            Command::Analyze => "analyze",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Map as "f1, f2" in x and y.
    #[arg(long, global = true)]
    pub map: Option<String>,
    /// Point as "num[/den],num[/den]"; may be repeated.
    #[arg(long = "point", global = true, allow_hyphen_values = true)]
    pub points: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[arg(long, env = "ARITHDYN_SEED", default_value_t = 0, global = true)]
    pub seed: u64,
    /// Iterates for orbits and estimates (N).
    #[arg(long, default_value_t = 16, global = true)]
    pub max_iter: usize,
    /// Largest bit size of an orbit coordinate.
    #[arg(long, default_value_t = orbit::DEFAULT_ORBIT_BIT_BUDGET, global = true)]
    pub bit_budget: u64,
    /// Convergence tolerance for the canonical height tail.
    #[arg(long, default_value_t = 1e-3, global = true)]
    pub tol: f64,
    /// Trials for the topological degree.
    #[arg(long, default_value_t = degrees::DEFAULT_TRIALS, global = true)]
    pub trials: usize,
    /// Largest degree computed in the degree sequence.
    #[arg(long, default_value_t = degrees::DEFAULT_DEGREE_BUDGET, global = true)]
    pub degree_budget: u64,
    /// Iterates requested from the degree sequence.
    #[arg(long, default_value_t = degrees::DEFAULT_MAX_ITERATES, global = true)]
    pub degree_iter: usize,
    /// Canonical heights below this count as zero.
    #[arg(long, default_value_t = orbit::DEFAULT_ZERO_THRESHOLD, global = true)]
    pub zero_threshold: f64,
    /// Height an orbit must exceed to be called height-growing.
    #[arg(long, default_value_t = 10.0, global = true)]
    pub height_bound: f64,
    /// Add wall-clock timings to the report (makes output non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
}

impl Options {
    fn degree_config(&self) -> DegreeConfig {
        DegreeConfig {
            max_iterates: self.degree_iter,
            degree_budget: self.degree_budget,
            max_order: degrees::DEFAULT_MAX_ORDER,
            trials: self.trials,
            seed: self.seed,
        }
    }

    fn orbit_config(&self) -> OrbitConfig {
        OrbitConfig { max_iter: self.max_iter, bit_budget: self.bit_budget, tol: self.tol }
    }
}

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Failure classes with their exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Parse { what: &'static str, error: ParseError },
    Point { input: String, message: String },
    Compute(Error),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) | Failure::Parse { .. } | Failure::Point { .. } => EXIT_PARSE,
            Failure::Compute(e) => match e {
                Error::NotDominant
                | Error::Precondition(_)
                | Error::DegenerateInput(_)
                | Error::GrowthExponentUndefined
                | Error::NonFiniteFiber => EXIT_PRECONDITION,
                Error::BudgetExceeded { .. } | Error::OrbitBudgetExceeded { .. } => EXIT_BUDGET,
                _ => EXIT_OTHER,
            },
        }
    }

    /// One-line JSON diagnostic.
    pub fn diagnostic(&self) -> String {
        let v = match self {
            Failure::Usage(m) => json!({"error": "usage", "code": self.code(), "message": m}),
            Failure::Parse { what, error } => json!({
                "error": "parse",
                "code": self.code(),
                "kind": error.kind.as_str(),
                "input": what,
                "line": error.line,
                "column": error.column,
                "message": error.message,
            }),
            Failure::Point { input, message } => json!({
                "error": "parse",
                "code": self.code(),
                "kind": "point",
                "input": input,
                "message": message,
            }),
            Failure::Compute(e) => json!({
                "error": error_name(e),
                "code": self.code(),
                "message": e.to_string(),
            }),
        };
        v.to_string()
    }
}

fn error_name(e: &Error) -> &'static str {
    match e {
        Error::BudgetExceeded { .. } | Error::OrbitBudgetExceeded { .. } => "budget_exceeded",
        Error::DegenerateInput(_) => "degenerate_input",
        Error::BadPrime { .. } => "bad_prime",
        Error::NotDominant => "not_dominant",
        Error::Precondition(_) => "precondition",
        Error::InternalInconsistency(_) => "internal_inconsistency",
        Error::Undetermined { .. } => "undetermined",
        Error::NonFiniteFiber => "non_finite_fiber",
        Error::GrowthExponentUndefined => "growth_exponent_undefined",
        Error::GrowthUndetermined(_) => "growth_undetermined",
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

/// Parses arguments and runs the requested subcommand.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { stdout: e.to_string(), stderr: String::new(), code: EXIT_OK };
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            let f = Failure::Usage(first.to_string());
            return Outcome { stdout: String::new(), stderr: f.diagnostic() + "\n", code: f.code() };
        }
    };
    match execute(&cli) {
        Ok(stdout) => Outcome { stdout, stderr: String::new(), code: EXIT_OK },
        Err(f) => Outcome { stdout: String::new(), stderr: f.diagnostic() + "\n", code: f.code() },
    }
}

fn require_map(opts: &Options) -> Result<PolynomialMap, Failure> {
    let Some(src) = &opts.map else {
        return Err(Failure::Usage("--map is required for this subcommand".into()));
    };
    parse_map(src).map_err(|error| Failure::Parse { what: "map", error })
}

fn require_points(opts: &Options) -> Result<Vec<RationalPoint>, Failure> {
    if opts.points.is_empty() {
        return Err(Failure::Usage("--point is required for this subcommand".into()));
    }
    parse_points(opts)
}

fn parse_points(opts: &Options) -> Result<Vec<RationalPoint>, Failure> {
    opts.points
        .iter()
        .map(|s| {
            s.parse::<RationalPoint>()
                .map_err(|e| Failure::Point { input: s.clone(), message: e.to_string() })
        })
        .collect()
}

/// Exit 4 when the budget stops the orbit before its first step.
fn no_step_within_budget(o: &orbit::Orbit, oc: &OrbitConfig) -> Result<(), Failure> {
    if oc.max_iter > 0 && o.last_index() == 0 && o.stop_reason == orbit::StopReason::BudgetExceeded {
        return Err(Error::OrbitBudgetExceeded { budget: oc.bit_budget, iterates: 0 }.into());
    }
    Ok(())
}

/// Runs a parsed command line, returning the text for stdout.
pub fn execute(cli: &Cli) -> Result<String, Failure> {
    let opts = &cli.opts;
    let start = Instant::now();
    let mut doc = report::Document::new(cli.command, opts);
    match cli.command {
        Command::Height => {
            let points = require_points(opts)?;
            if let Some(src) = &opts.map {
                let f = parse_map(src).map_err(|error| Failure::Parse { what: "map", error })?;
                doc.set_map(&f);
                doc.points = points.iter().map(|p| report::height_entry(p, Some(&f))).collect();
            } else {
                doc.points = points.iter().map(|p| report::height_entry(p, None)).collect();
            }
        }
        Command::Degrees => {
            let f = require_map(opts)?;
            doc.set_map(&f);
            let seq = degrees::lambda1(&f, &opts.degree_config())?.sequence;
            doc.degrees = report::to_value(&seq);
        }
        Command::Dyndeg => {
            let f = require_map(opts)?;
            doc.set_map(&f);
            let d = degrees::analyze_degrees(&f, &opts.degree_config())?;
            doc.degrees = report::to_value(&d);
        }
        Command::Canheight | Command::Orbit | Command::Classify | Command::Analyze => {
            let f = require_map(opts)?;
            doc.set_map(&f);
            let points = if cli.command == Command::Analyze { parse_points(opts)? } else { require_points(opts)? };
            let needs_degrees = cli.command != Command::Classify && cli.command != Command::Orbit;
            let dd = if needs_degrees {
                let d = degrees::analyze_degrees(&f, &opts.degree_config())?;
                doc.degrees = report::to_value(&d);
                Some(d)
            } else {
                f.clone().into_dominant()?;
                None
            };
            let oc = opts.orbit_config();
            let mut entries = Vec::new();
            let mut reports = Vec::new();
            for p in &points {
                let mut e = serde_json::Map::new();
                e.insert("point".into(), json!(p.to_string()));
                match cli.command {
                    Command::Orbit => {
                        let o = orbit::orbit(&f, p, oc.max_iter, oc.bit_budget);
                        no_step_within_budget(&o, &oc)?;
                        e.insert("orbit".into(), report::to_value(&o));
                    }
                    Command::Classify => {
                        let o = orbit::orbit(&f, p, oc.max_iter, oc.bit_budget);
                        no_step_within_budget(&o, &oc)?;
                        let c = orbit::classify_from_orbit(&o, opts.height_bound);
                        e.insert("class".into(), report::to_value(&c));
                        e.insert("iterations".into(), json!(o.last_index()));
                    }
                    Command::Canheight => {
                        let est = orbit::canonical_height(&f, p, dd.as_ref().unwrap(), &oc)?;
                        e.insert("canonical_height".into(), report::to_value(&est));
                    }
                    Command::Analyze => {
                        let d = dd.as_ref().unwrap();
                        let o = orbit::orbit(&f, p, oc.max_iter + 1, oc.bit_budget);
                        let class = orbit::classify_from_orbit(&o, opts.height_bound);
                        e.insert("height".into(), report::height_entry(p, Some(&f)));
                        e.insert("class".into(), report::to_value(&class));
                        if d.lambda1.cmp_integer(1) == std::cmp::Ordering::Greater {
                            let r = orbit::check_main_theorem(&f, p, d, opts.zero_threshold, &oc)?;
                            e.insert("canonical_height".into(), report::to_value(&r.hhat));
                            e.insert("arithmetic_degree".into(), report::to_value(&r.alpha));
                            let mut rj = report::to_value(&r);
                            if let Value::Object(m) = &mut rj {
                                m.remove("hhat");
                                m.remove("alpha");
                                m.insert("point".into(), json!(p.to_string()));
                                m.insert("hhat".into(), json!(r.hhat.value));
                                m.insert("alpha".into(), json!(r.alpha.extrapolated));
                            }
                            reports.push(rj);
                        } else {
                            let a = orbit::arithmetic_degree_from_orbit(&o, oc.max_iter);
                            e.insert("arithmetic_degree".into(), report::to_value(&a));
                            reports.push(json!({
                                "point": p.to_string(),
                                "hypothesis_ok": false,
                                "inequality_star_ok": null,
                                "notes": ["λ₁ = 1: canonical height is undefined"],
                            }));
                        }
                    }
                    _ => unreachable!(),
                }
                entries.push(Value::Object(e));
            }
            doc.points = entries;
            if cli.command == Command::Analyze {
                doc.report = Value::Array(reports);
            }
        }
    }
    if opts.timing {
        doc.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(match opts.format {
        Format::Json => doc.to_json(),
        Format::Csv => doc.to_csv(),
        Format::Text => doc.to_text(),
    })
}
