//! `letf`: robust growth rates and optimal leverage from a TOML config.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use letf_cli::config::{apply_override, load_table, set};
use letf_cli::error::{config_err, EXIT_INFEASIBLE, EXIT_VERIFICATION};
use letf_cli::{run, CliError, Result, RunConfig};
use toml::{Table, Value};

#[derive(Parser, Debug)]
#[command(name = "letf", version, about = "Worst-case growth rates of leveraged ETFs")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Robust growth rate and worst-case parameters at one leverage ratio.
    Rate(RunArgs),
    /// Optimal leverage ratio.
    Optimize(RunArgs),
    /// Growth rate over a β grid, or optimal leverage along a box-bound scan.
    Sweep(RunArgs),
    /// Monte-Carlo verification of the analytic rate.
    Verify(RunArgs),
}

#[derive(Args, Debug)]
struct RunArgs {
    /// TOML file with [problem], [model] and [command] sections.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a config entry, e.g. `--set model.sigma=0.5,0.9`. Repeatable.
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
    overrides: Vec<String>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Leverage ratio for `rate` and `verify`.
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Error budget ε for certified grid optimization.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Monte-Carlo seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of Monte-Carlo paths.
    #[arg(long)]
    paths: Option<u64>,
    /// Monte-Carlo time step.
    #[arg(long)]
    dt: Option<f64>,
    /// Monte-Carlo horizon T.
    #[arg(long)]
    horizon: Option<f64>,
    /// Print the resolved config as canonical TOML and exit.
    #[arg(long)]
    print_config: bool,
}

impl Cmd {
    fn parts(&self) -> (&'static str, &RunArgs) {
        match self {
            Cmd::Rate(a) => ("rate", a),
            Cmd::Optimize(a) => ("optimize", a),
            Cmd::Sweep(a) => ("sweep", a),
            Cmd::Verify(a) => ("verify", a),
        }
    }
}

/// File, then `--set`, then dedicated flags.
fn resolve(name: &str, args: &RunArgs) -> Result<RunConfig> {
    let mut table = match &args.config {
        Some(p) => load_table(p)?,
        None => Table::new(),
    };
    for o in &args.overrides {
        apply_override(&mut table, o)?;
    }
    let cmd = |t: &mut Table, k: &str, v: Value| set(t, "command", k, v);
    cmd(&mut table, "name", Value::String(name.into()))?;
    if let Some(p) = &args.out {
        cmd(&mut table, "output_path", Value::String(p.to_string_lossy().into_owned()))?;
    }
    if let Some(f) = &args.format {
        cmd(&mut table, "output_format", Value::String(f.clone()))?;
    }
    let floats = [
        ("beta", args.beta),
        ("epsilon", args.epsilon),
        ("dt", args.dt),
        ("horizon", args.horizon),
    ];
    for (k, v) in floats {
        if let Some(x) = v {
            cmd(&mut table, k, Value::Float(x))?;
        }
    }
    for (k, v) in [("seed", args.seed), ("paths", args.paths)] {
        if let Some(n) = v {
            let n = i64::try_from(n).or_else(|_| config_err(format!("--{k} is too large")))?;
            cmd(&mut table, k, Value::Integer(n))?;
        }
    }
    RunConfig::from_table(&table)
}

/// Sizes rayon's global pool from `LETF_THREADS` (0 or unset = automatic).
fn init_threads() -> Result<()> {
    let Ok(raw) = std::env::var("LETF_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("LETF_THREADS='{raw}' is not a thread count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot size the thread pool: {e}")))
}

fn execute(cli: &Cli) -> Result<i32> {
    init_threads()?;
    let (name, args) = cli.command.parts();
    let cfg = resolve(name, args)?;
    if args.print_config {
        print!("{}", cfg.to_toml());
        return Ok(0);
    }
    let outcome = run(&cfg)?;
    match &cfg.output.path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            outcome.table.write(cfg.output.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            outcome.table.write(cfg.output.format, stdout.lock())?;
        }
    }
    match outcome.exit_code {
        EXIT_INFEASIBLE => eprintln!("letf: the robust rate is infeasible at the requested leverage"),
        EXIT_VERIFICATION => eprintln!("letf: at least one verification check failed"),
        _ => {}
    }
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("letf: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
