//! The four workflows. Each returns a [`Table`] and the exit code the run
//! should end with; writing the table is left to the caller.

use letf_robust::analytic::growth;
use letf_robust::mc::{dominance_check, growth_curve, SimRequest};
use letf_robust::optimizer::{certified_grid, lipschitz_m, optimize};
use letf_robust::search::grid_point;
use letf_robust::{
    Error, GrowthPoint, Interval, McEstimate, ModelSpec, OptimalLeverage, Problem, SimScheme,
};

use crate::config::{Bound, Command, RunConfig, Scan, SweepOpts, VerifyOpts};
use crate::error::{config_err, Result, EXIT_INFEASIBLE, EXIT_OK, EXIT_VERIFICATION};
use crate::output::{Cell, Table};

/// Result of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(table: Table) -> Self {
        Self {
            table,
            exit_code: EXIT_OK,
        }
    }
}

/// Runs the configured command.
pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    match &cfg.command {
        Command::Rate { beta } => cmd_rate(&cfg.model, &cfg.prob, *beta),
        Command::Optimize {
            epsilon,
            list_candidates,
        } => cmd_optimize(&cfg.model, &cfg.prob, *epsilon, *list_candidates),
        Command::Sweep(s) => cmd_sweep(&cfg.model, &cfg.prob, s),
        Command::Verify(v) => cmd_verify(&cfg.model, &cfg.prob, v),
    }
}

fn joined(pairs: impl IntoIterator<Item = (String, f64)>) -> String {
    pairs
        .into_iter()
        .map(|(k, v)| format!("{k}={}", crate::output::fmt_sig(v)))
        .collect::<Vec<_>>()
        .join(";")
}

/// Robust rate and worst-case parameters at one β.
pub fn cmd_rate(model: &ModelSpec, prob: &Problem, beta: f64) -> Result<Outcome> {
    let g = growth(model, prob, beta)?;
    let names: Vec<String> = model
        .params()
        .iter()
        .map(|(n, _)| format!("worst_{n}"))
        .collect();
    let mut cols = vec![
        "family",
        "beta",
        "rate",
        "feasible",
        "feasibility_note",
        "regime",
        "case",
        "inner_argmax",
    ];
    cols.extend(names.iter().map(String::as_str));
    let mut t = Table::new(&cols);
    t.push(rate_row(model, &g));
    Ok(Outcome {
        table: t,
        exit_code: if g.feasible { EXIT_OK } else { EXIT_INFEASIBLE },
    })
}

fn rate_row(model: &ModelSpec, g: &GrowthPoint) -> Vec<Cell> {
    let mut row: Vec<Cell> = vec![
        model.family().into(),
        g.beta.into(),
        g.rate.into(),
        g.feasible.into(),
        g.feasibility_note.clone().into(),
        format!("{:?}", g.worst.regime).into(),
        g.worst.case.map_or(Cell::Empty, |c| Cell::Int(c as i64)),
        g.worst
            .inner_argmax
            .as_ref()
            .map_or(Cell::Empty, |m| joined(m.iter().map(|(k, v)| (k.clone(), *v))).into()),
    ];
    for (name, _) in model.params() {
        row.push(g.worst.get(name).into());
    }
    row
}

/// Optimal leverage, optionally followed by every evaluated β.
pub fn cmd_optimize(
    model: &ModelSpec,
    prob: &Problem,
    epsilon: f64,
    list_candidates: bool,
) -> Result<Outcome> {
    let o = optimize(model, prob, epsilon)?;
    let mut t = Table::new(&[
        "row",
        "family",
        "method",
        "beta",
        "rate",
        "error_bound",
        "mesh",
        "lipschitz_m",
        "n_candidates",
        "n_skipped",
    ]);
    let grid = o.grid.as_ref();
    t.push(vec![
        "optimum".into(),
        model.family().into(),
        o.method.to_string().into(),
        o.beta_star.into(),
        o.rate_star.into(),
        o.error_bound.into(),
        grid.map(|g| g.mesh).into(),
        grid.map(|g| g.lipschitz_m).into(),
        o.candidates.len().into(),
        o.skipped.len().into(),
    ]);
    if list_candidates {
        push_evaluations(&mut t, &o);
    }
    Ok(Outcome::ok(t))
}

fn push_evaluations(t: &mut Table, o: &OptimalLeverage) {
    let row = |kind: &str, beta: f64, rate: Option<f64>| {
        let mut r = vec![kind.into(), Cell::Empty, Cell::Empty, beta.into(), rate.into()];
        r.resize(10, Cell::Empty);
        (beta, r)
    };
    let mut rows: Vec<(f64, Vec<Cell>)> = o
        .candidates
        .iter()
        .map(|c| row("candidate", c.beta, Some(c.rate)))
        .chain(o.skipped.iter().map(|&b| row("skipped", b, None)))
        .collect();
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (_, r) in rows {
        t.push(r);
    }
}

/// β sweep of the robust rate, or a scan of one box bound reporting `β*`.
pub fn cmd_sweep(model: &ModelSpec, prob: &Problem, opts: &SweepOpts) -> Result<Outcome> {
    match &opts.scan {
        None => beta_sweep(model, prob, opts.beta_points),
        Some(scan) => bound_scan(model, prob, scan, opts.epsilon),
    }
}

fn beta_sweep(model: &ModelSpec, prob: &Problem, points: usize) -> Result<Outcome> {
    if points < 1 {
        return config_err("command.beta_points must be at least 1");
    }
    let r = prob.beta_range;
    let mut t = Table::new(&["beta", "rate", "feasible"]);
    for i in 0..points {
        let beta = grid_point(r.lo, r.hi, points, i);
        let g = growth(model, prob, beta)?;
        t.push(vec![beta.into(), g.rate.into(), g.feasible.into()]);
    }
    Ok(Outcome::ok(t))
}

/// Box with one bound of `scan.param` moved to `value`.
pub fn scanned_model(model: &ModelSpec, scan: &Scan, value: f64) -> Result<ModelSpec> {
    let (_, iv) = model
        .params()
        .into_iter()
        .find(|(n, _)| *n == scan.param)
        .ok_or_else(|| Error::Validation(vec![format!("unknown parameter {}", scan.param)]))?;
    let (lo, hi) = match scan.bound {
        Bound::Lo => (value, iv.hi),
        Bound::Hi => (iv.lo, value),
    };
    if lo > hi {
        return config_err(format!(
            "scanning {} to {value} leaves an empty interval [{lo}, {hi}]",
            scan.axis()
        ));
    }
    Ok(model.with_param(&scan.param, Interval { lo, hi })?)
}

/// Optimal leverage along a scan axis. Grid families share one mesh, fixed by
/// the largest Lipschitz constant on the axis, so every row is optimized over
/// the same β grid.
pub fn bound_scan(model: &ModelSpec, prob: &Problem, scan: &Scan, epsilon: f64) -> Result<Outcome> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return config_err(format!("epsilon must be positive, got {epsilon}"));
    }
    let models: Vec<(f64, ModelSpec)> = (0..scan.points)
        .map(|i| {
            let v = grid_point(scan.range.lo, scan.range.hi, scan.points, i);
            scanned_model(model, scan, v).map(|m| (v, m))
        })
        .collect::<Result<_>>()?;
    let mut common_m: Option<f64> = None;
    for (_, m) in &models {
        match lipschitz_m(m, prob) {
            Ok(l) => common_m = Some(common_m.map_or(l, |c: f64| c.max(l))),
            Err(Error::Unsupported(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    let mut t = Table::new(&["axis", "value", "beta_star", "rate_star", "method", "error_bound"]);
    for (v, m) in &models {
        let o = match common_m {
            Some(l) => certified_grid(m, prob, epsilon, epsilon / l, l)?,
            None => optimize(m, prob, epsilon)?,
        };
        t.push(vec![
            scan.axis().into(),
            (*v).into(),
            o.beta_star.into(),
            o.rate_star.into(),
            o.method.to_string().into(),
            o.error_bound.into(),
        ]);
    }
    Ok(Outcome::ok(t))
}

/// Slack for comparing a finite-horizon estimate with the limit rate: three
/// standard errors for the exact GBM scheme, at least 0.02 otherwise.
pub fn analytic_tolerance(scheme: SimScheme, rate_std_err: f64) -> f64 {
    match scheme {
        SimScheme::ExactGbm => 3.0 * rate_std_err + 1e-12,
        _ => (0.02f64).max(3.0 * rate_std_err),
    }
}

/// Monte-Carlo checks of the analytic rate at the worst case, with optional
/// convergence and dominance checks.
pub fn cmd_verify(model: &ModelSpec, prob: &Problem, v: &VerifyOpts) -> Result<Outcome> {
    let g = growth(model, prob, v.beta)?;
    let Some(analytic) = g.rate else {
        return Err(Error::Infeasible {
            beta: v.beta,
            note: g.feasibility_note,
        }
        .into());
    };
    let pinned = model.pinned(&g.worst);
    let template = SimRequest {
        dt: v.dt,
        n_paths: v.paths,
        seed: v.seed,
        antithetic: v.antithetic,
        ..SimRequest::new(pinned, *prob, v.beta, v.horizon)
    };
    let worst = joined(pinned.params().into_iter().map(|(k, iv)| (k.to_string(), iv.lo)));
    let mut t = Table::new(&[
        "check",
        "beta",
        "horizon",
        "params",
        "analytic",
        "estimate",
        "rate_std_err",
        "tolerance",
        "gap",
        "pass",
        "note",
    ]);
    let mut all_pass = true;
    let note = |e: &McEstimate| {
        if e.std_err_of_mean == 0.0 {
            "zero variance".to_string()
        } else {
            String::new()
        }
    };

    if v.horizons.is_empty() {
        let e = growth_curve(&template, &[v.horizon])?.remove(0).1;
        let tol = analytic_tolerance(e.scheme, e.rate_std_err);
        let gap = e.estimate - analytic;
        let pass = gap.abs() <= tol;
        all_pass &= pass;
        t.push(vec![
            "analytic".into(),
            v.beta.into(),
            e.horizon_t.into(),
            worst.clone().into(),
            analytic.into(),
            e.estimate.into(),
            e.rate_std_err.into(),
            tol.into(),
            gap.into(),
            pass.into(),
            note(&e).into(),
        ]);
    } else {
        let req = SimRequest {
            horizon_t: *v.horizons.last().unwrap_or(&v.horizon),
            ..template
        };
        let curve = growth_curve(&req, &v.horizons)?;
        let first = &curve[0].1;
        let first_gap = (first.estimate - analytic).abs();
        for (k, (h, e)) in curve.iter().enumerate() {
            let gap = e.estimate - analytic;
            let combined = (first.rate_std_err.powi(2) + e.rate_std_err.powi(2)).sqrt();
            let mut pass = gap.abs() <= first_gap + 2.0 * combined + 1e-12;
            let mut tol = first_gap + 2.0 * combined;
            if k + 1 == curve.len() {
                let at_end = analytic_tolerance(e.scheme, e.rate_std_err);
                pass &= gap.abs() <= at_end;
                tol = tol.min(at_end);
            }
            all_pass &= pass;
            t.push(vec![
                "convergence".into(),
                v.beta.into(),
                (*h).into(),
                worst.clone().into(),
                analytic.into(),
                e.estimate.into(),
                e.rate_std_err.into(),
                tol.into(),
                gap.into(),
                pass.into(),
                note(e).into(),
            ]);
        }
    }

    if v.dominance {
        let report = dominance_check(model, prob, v.beta, v.samples, &template)?;
        for entry in &report.entries {
            all_pass &= entry.pass;
            t.push(vec![
                "dominance".into(),
                v.beta.into(),
                report.horizon_t.into(),
                joined(entry.params.iter().map(|(k, x)| (k.clone(), *x))).into(),
                report.analytic_rate.into(),
                entry.estimate.into(),
                entry.rate_std_err.into(),
                entry.slack.into(),
                (entry.estimate - report.analytic_rate).into(),
                entry.pass.into(),
                (if entry.corner { "corner" } else { "sample" }).into(),
            ]);
        }
    }

    Ok(Outcome {
        table: t,
        exit_code: if all_pass { EXIT_OK } else { EXIT_VERIFICATION },
    })
}
