//! Run configuration: a TOML document with `[problem]`, `[model]` and
//! `[command]` sections.
//!
//! ```toml
//! [problem]
//! p = 0.5
//! r = 0.015
//! beta_range = "-5,5"
//!
//! [model]
//! family = "heston"
//! mu = "0.05,0.08"
//! rho = "-0.93,-0.75"
//! b = "0.1,0.2"
//! a = "3,10"
//! sigma = "0.82,0.93"
//!
//! [command]
//! name = "optimize"
//! epsilon = 0.01
//! ```
//!
//! Intervals are written `"lo,hi"`; a bare number or a two-element array is
//! also accepted. Overrides are layered as file < `--set section.key=value`
//! < dedicated flags. Keys that belong to a different command are ignored so
//! one file can drive several commands; keys no command knows are errors.

use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use letf_robust::mc::{DEFAULT_DT, DEFAULT_PATHS};
use letf_robust::optimizer::DEFAULT_EPSILON;
use letf_robust::{Interval, ModelSpec, Problem};
use toml::{Table, Value};

use crate::error::{config_err, CliError, Result};
use crate::output::Format;

/// Default number of β values in a sweep.
pub const DEFAULT_BETA_POINTS: usize = 201;
/// Default number of values on a scan axis.
pub const DEFAULT_SCAN_POINTS: usize = 16;
/// Default β range when `[problem]` omits it.
pub const DEFAULT_BETA_RANGE: Interval = Interval { lo: -5.0, hi: 5.0 };
/// Default simulation horizon in years.
pub const DEFAULT_HORIZON: f64 = 50.0;

const COMMON_KEYS: &[&str] = &["name", "output_path", "output_format"];
const RATE_KEYS: &[&str] = &["beta"];
const OPTIMIZE_KEYS: &[&str] = &["epsilon", "list_candidates"];
const SWEEP_KEYS: &[&str] = &["beta_points", "epsilon", "scan_axis", "scan_range", "scan_points"];
const VERIFY_KEYS: &[&str] = &[
    "beta", "horizon", "dt", "paths", "seed", "antithetic", "horizons", "dominance", "samples",
];

/// A parsed, typed run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelSpec,
    pub prob: Problem,
    pub command: Command,
    pub output: OutputSpec,
}

/// Exactly one command per run.
#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Rate { beta: f64 },
    Optimize { epsilon: f64, list_candidates: bool },
    Sweep(SweepOpts),
    Verify(VerifyOpts),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Rate { .. } => "rate",
            Command::Optimize { .. } => "optimize",
            Command::Sweep(_) => "sweep",
            Command::Verify(_) => "verify",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOpts {
    pub beta_points: usize,
    pub epsilon: f64,
    /// Scan of one box bound; without it the sweep is over β.
    pub scan: Option<Scan>,
}

/// Which end of a parameter interval a scan moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Lo,
    Hi,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scan {
    pub param: String,
    pub bound: Bound,
    pub range: Interval,
    pub points: usize,
}

impl Scan {
    /// Axis label such as `sigma_lo`.
    pub fn axis(&self) -> String {
        let end = match self.bound {
            Bound::Lo => "lo",
            Bound::Hi => "hi",
        };
        format!("{}_{end}", self.param)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOpts {
    pub beta: f64,
    pub horizon: f64,
    pub dt: f64,
    pub paths: usize,
    pub seed: u64,
    pub antithetic: bool,
    /// Horizons of the convergence check; empty skips it.
    pub horizons: Vec<f64>,
    pub dominance: bool,
    /// Uniform box samples added to the corners in the dominance check.
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    /// Destination file; standard output when absent.
    pub path: Option<PathBuf>,
    pub format: Format,
}

/// Reads a config file into a raw table.
pub fn load_table(path: &Path) -> Result<Table> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_table(&text)
}

pub fn parse_table(text: &str) -> Result<Table> {
    text.parse::<Table>()
        .map_err(|e| CliError::Config(format!("invalid TOML: {e}")))
}

/// Applies `section.key=value`. The value is read as a TOML literal when it
/// parses as one and as a string otherwise.
pub fn apply_override(table: &mut Table, assignment: &str) -> Result<()> {
    let Some((path, raw)) = assignment.split_once('=') else {
        return config_err(format!("--set expects section.key=value, got '{assignment}'"));
    };
    let Some((section, key)) = path.trim().split_once('.') else {
        return config_err(format!("--set key must be section.key, got '{path}'"));
    };
    let raw = raw.trim();
    let value = format!("v = {raw}")
        .parse::<Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_string()));
    set(table, section, key, value)
}

/// Sets one key, creating the section when needed.
pub fn set(table: &mut Table, section: &str, key: &str, value: Value) -> Result<()> {
    if !["problem", "model", "command"].contains(&section) {
        return config_err(format!("unknown section [{section}]"));
    }
    let entry = table
        .entry(section.to_string())
        .or_insert_with(|| Value::Table(Table::new()));
    match entry {
        Value::Table(t) => {
            t.insert(key.to_string(), value);
            Ok(())
        }
        _ => config_err(format!("[{section}] must be a table")),
    }
}

fn section<'a>(table: &'a Table, name: &str) -> Result<&'a Table> {
    match table.get(name) {
        Some(Value::Table(t)) => Ok(t),
        Some(_) => config_err(format!("[{name}] must be a table")),
        None => config_err(format!("missing section [{name}]")),
    }
}

fn number(v: &Value, what: &str) -> Result<f64> {
    match v {
        Value::Float(x) => Ok(*x),
        Value::Integer(i) => Ok(*i as f64),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("{what}: '{s}' is not a number"))),
        _ => config_err(format!("{what} must be a number")),
    }
}

fn count(v: &Value, what: &str) -> Result<u64> {
    match v {
        Value::Integer(i) if *i >= 0 => Ok(*i as u64),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("{what}: '{s}' is not a non-negative integer"))),
        _ => config_err(format!("{what} must be a non-negative integer")),
    }
}

fn flag(v: &Value, what: &str) -> Result<bool> {
    match v {
        Value::Boolean(b) => Ok(*b),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("{what}: '{s}' is not true or false"))),
        _ => config_err(format!("{what} must be true or false")),
    }
}

fn text<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| CliError::Config(format!("{what} must be a string")))
}

/// Comma-separated numbers, a number, or an array of numbers.
fn number_list(v: &Value, what: &str) -> Result<Vec<f64>> {
    match v {
        Value::String(s) => s
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Config(format!("{what}: '{}' is not a number", x.trim())))
            })
            .collect(),
        Value::Array(items) => items.iter().map(|x| number(x, what)).collect(),
        _ => Ok(vec![number(v, what)?]),
    }
}

fn interval(v: &Value, what: &str) -> Result<Interval> {
    match number_list(v, what)?.as_slice() {
        [x] => Ok(Interval::point(*x)),
        [lo, hi] => Interval::new(*lo, *hi)
            .map_err(|_| CliError::Config(format!("{what}: lower bound {lo} exceeds {hi}"))),
        _ => config_err(format!("{what} must be written \"lo,hi\"")),
    }
}

fn parse_problem(t: &Table) -> Result<Problem> {
    for k in t.keys() {
        if !["p", "r", "beta_range"].contains(&k.as_str()) {
            return config_err(format!("problem.{k} is not a known key"));
        }
    }
    let p = number(
        t.get("p").ok_or_else(|| CliError::Config("problem.p is missing".into()))?,
        "problem.p",
    )?;
    let r = t.get("r").map(|v| number(v, "problem.r")).transpose()?;
    let beta_range = t
        .get("beta_range")
        .map(|v| interval(v, "problem.beta_range"))
        .transpose()?
        .unwrap_or(DEFAULT_BETA_RANGE);
    Ok(Problem::new(p, r, beta_range))
}

fn parse_model(t: &Table) -> Result<ModelSpec> {
    let family = text(
        t.get("family")
            .ok_or_else(|| CliError::Config("model.family is missing".into()))?,
        "model.family",
    )?;
    let mut params = IndexMap::new();
    let mut r0 = None;
    for (k, v) in t {
        match k.as_str() {
            "family" => {}
            "r0" => r0 = Some(number(v, "model.r0")?),
            name => {
                params.insert(name.to_string(), interval(v, &format!("model.{name}"))?);
            }
        }
    }
    let spec = ModelSpec::from_params(family, &params, r0)?;
    if r0.is_some() && spec.needs_constant_rate() {
        return config_err(format!("model.r0 does not apply to {family}"));
    }
    Ok(spec)
}

fn parse_scan(t: &Table, model: &ModelSpec) -> Result<Option<Scan>> {
    let Some(axis) = t.get("scan_axis") else {
        for k in ["scan_range", "scan_points"] {
            if t.contains_key(k) {
                return config_err(format!("command.{k} needs command.scan_axis"));
            }
        }
        return Ok(None);
    };
    let axis = text(axis, "command.scan_axis")?;
    let (param, bound) = match axis.rsplit_once(['_', '.']) {
        Some((p, "lo")) => (p, Bound::Lo),
        Some((p, "hi")) => (p, Bound::Hi),
        _ => return config_err(format!("command.scan_axis '{axis}' must end in _lo or _hi")),
    };
    if !model.params().iter().any(|(n, _)| *n == param) {
        return config_err(format!(
            "command.scan_axis: {param} is not a {} parameter",
            model.family()
        ));
    }
    let range = interval(
        t.get("scan_range")
            .ok_or_else(|| CliError::Config("command.scan_range is missing".into()))?,
        "command.scan_range",
    )?;
    let points = t
        .get("scan_points")
        .map(|v| count(v, "command.scan_points"))
        .transpose()?
        .unwrap_or(DEFAULT_SCAN_POINTS as u64) as usize;
    if points < 1 {
        return config_err("command.scan_points must be at least 1");
    }
    Ok(Some(Scan {
        param: param.to_string(),
        bound,
        range,
        points,
    }))
}

fn required_beta(t: &Table) -> Result<f64> {
    number(
        t.get("beta")
            .ok_or_else(|| CliError::Config("command.beta is missing".into()))?,
        "command.beta",
    )
}

fn parse_command(t: &Table, model: &ModelSpec) -> Result<Command> {
    let name = text(
        t.get("name")
            .ok_or_else(|| CliError::Config("command.name is missing".into()))?,
        "command.name",
    )?;
    for k in t.keys() {
        let known = [COMMON_KEYS, RATE_KEYS, OPTIMIZE_KEYS, SWEEP_KEYS, VERIFY_KEYS]
            .iter()
            .any(|keys| keys.contains(&k.as_str()));
        if !known {
            return config_err(format!("command.{k} is not a known key"));
        }
    }
    let f = |k: &str, default: f64| -> Result<f64> {
        t.get(k)
            .map(|v| number(v, &format!("command.{k}")))
            .transpose()
            .map(|x| x.unwrap_or(default))
    };
    let n = |k: &str, default: u64| -> Result<u64> {
        t.get(k)
            .map(|v| count(v, &format!("command.{k}")))
            .transpose()
            .map(|x| x.unwrap_or(default))
    };
    let b = |k: &str| -> Result<bool> {
        t.get(k)
            .map(|v| flag(v, &format!("command.{k}")))
            .transpose()
            .map(|x| x.unwrap_or(false))
    };
    Ok(match name {
        "rate" => Command::Rate {
            beta: required_beta(t)?,
        },
        "optimize" => Command::Optimize {
            epsilon: f("epsilon", DEFAULT_EPSILON)?,
            list_candidates: b("list_candidates")?,
        },
        "sweep" => Command::Sweep(SweepOpts {
            beta_points: n("beta_points", DEFAULT_BETA_POINTS as u64)? as usize,
            epsilon: f("epsilon", DEFAULT_EPSILON)?,
            scan: parse_scan(t, model)?,
        }),
        "verify" => {
            let horizons = t
                .get("horizons")
                .map(|v| number_list(v, "command.horizons"))
                .transpose()?
                .unwrap_or_default();
            let horizon = match t.get("horizon") {
                Some(v) => number(v, "command.horizon")?,
                None => horizons.last().copied().unwrap_or(DEFAULT_HORIZON),
            };
            Command::Verify(VerifyOpts {
                beta: required_beta(t)?,
                horizon,
                dt: f("dt", DEFAULT_DT.min(horizon))?,
                paths: n("paths", DEFAULT_PATHS as u64)? as usize,
                seed: n("seed", 0)?,
                antithetic: b("antithetic")?,
                horizons,
                dominance: b("dominance")?,
                samples: n("samples", 0)? as usize,
            })
        }
        other => {
            return config_err(format!(
                "command.name '{other}' is not one of rate, optimize, sweep, verify"
            ))
        }
    })
}

fn parse_output(t: &Table) -> Result<OutputSpec> {
    let path = t
        .get("output_path")
        .map(|v| text(v, "command.output_path").map(PathBuf::from))
        .transpose()?;
    let format = match t.get("output_format") {
        Some(v) => {
            let s = text(v, "command.output_format")?;
            Format::parse(s)
                .ok_or_else(|| CliError::Config(format!("command.output_format '{s}' is not csv or json")))?
        }
        None => path
            .as_deref()
            .and_then(|p| p.extension())
            .and_then(|e| Format::parse(&e.to_string_lossy()))
            .unwrap_or(Format::Csv),
    };
    Ok(OutputSpec { path, format })
}

impl RunConfig {
    /// Builds a typed config from a raw table.
    pub fn from_table(table: &Table) -> Result<Self> {
        for k in table.keys() {
            if !["problem", "model", "command"].contains(&k.as_str()) {
                return config_err(format!("unknown section [{k}]"));
            }
        }
        let prob = parse_problem(section(table, "problem")?)?;
        let model = parse_model(section(table, "model")?)?;
        let cmd = section(table, "command")?;
        let command = parse_command(cmd, &model)?;
        let output = parse_output(cmd)?;
        Ok(Self {
            model,
            prob,
            command,
            output,
        })
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        Self::from_table(&parse_table(text)?)
    }

    /// Canonical TOML that parses back to an equal config.
    pub fn to_toml(&self) -> String {
        let mut problem = Table::new();
        problem.insert("p".into(), Value::Float(self.prob.p));
        if let Some(r) = self.prob.r {
            problem.insert("r".into(), Value::Float(r));
        }
        problem.insert("beta_range".into(), interval_value(self.prob.beta_range));

        let mut model = Table::new();
        model.insert("family".into(), Value::String(self.model.family().into()));
        for (name, iv) in self.model.params() {
            model.insert(name.into(), interval_value(iv));
        }
        if let Some(r0) = self.model.r0() {
            model.insert("r0".into(), Value::Float(r0));
        }

        let mut cmd = Table::new();
        cmd.insert("name".into(), Value::String(self.command.name().into()));
        let int = |x: u64| Value::Integer(x as i64);
        match &self.command {
            Command::Rate { beta } => {
                cmd.insert("beta".into(), Value::Float(*beta));
            }
            Command::Optimize {
                epsilon,
                list_candidates,
            } => {
                cmd.insert("epsilon".into(), Value::Float(*epsilon));
                cmd.insert("list_candidates".into(), Value::Boolean(*list_candidates));
            }
            Command::Sweep(s) => {
                cmd.insert("beta_points".into(), int(s.beta_points as u64));
                cmd.insert("epsilon".into(), Value::Float(s.epsilon));
                if let Some(scan) = &s.scan {
                    cmd.insert("scan_axis".into(), Value::String(scan.axis()));
                    cmd.insert("scan_range".into(), interval_value(scan.range));
                    cmd.insert("scan_points".into(), int(scan.points as u64));
                }
            }
            Command::Verify(v) => {
                cmd.insert("beta".into(), Value::Float(v.beta));
                cmd.insert("horizon".into(), Value::Float(v.horizon));
                cmd.insert("dt".into(), Value::Float(v.dt));
                cmd.insert("paths".into(), int(v.paths as u64));
                cmd.insert("seed".into(), int(v.seed));
                cmd.insert("antithetic".into(), Value::Boolean(v.antithetic));
                if !v.horizons.is_empty() {
                    cmd.insert(
                        "horizons".into(),
                        Value::Array(v.horizons.iter().map(|h| Value::Float(*h)).collect()),
                    );
                }
                cmd.insert("dominance".into(), Value::Boolean(v.dominance));
                cmd.insert("samples".into(), int(v.samples as u64));
            }
        }
        if let Some(p) = &self.output.path {
            cmd.insert(
                "output_path".into(),
                Value::String(p.to_string_lossy().into_owned()),
            );
        }
        cmd.insert(
            "output_format".into(),
            Value::String(self.output.format.as_str().into()),
        );

        let mut root = Table::new();
        root.insert("problem".into(), Value::Table(problem));
        root.insert("model".into(), Value::Table(model));
        root.insert("command".into(), Value::Table(cmd));
        toml::to_string(&root).expect("config tables always serialize")
    }
}

/// `"lo,hi"` with shortest round-trip digits.
fn interval_value(iv: Interval) -> Value {
    Value::String(format!("{:?},{:?}", iv.lo, iv.hi))
}
