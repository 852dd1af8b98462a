//! Monte-Carlo oracle for `(1/T) log E[L_T^p]` at a fixed parameter vector.
//!
//! Paths run in parallel on rayon's pool. Each path owns the ChaCha8 stream
//! indexed by its path number (antithetic pairs share one stream with the
//! second path negated), and reductions use a fixed pairwise tree, so
//! estimates are bit-identical for any thread count.

mod dominance;
mod paths;
mod rng;
mod sum;

pub use dominance::{dominance_check, dominance_slack, DominanceEntry, DominanceReport};
pub use rng::NormalStream;
pub use sum::{mean_and_std_err, pairwise_sum};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{validate, McEstimate, ModelSpec, Problem, SimScheme};
use paths::{simulate_path, PathSpec};

/// Default time step in years.
pub const DEFAULT_DT: f64 = 1.0 / 500.0;
/// Default number of paths.
pub const DEFAULT_PATHS: usize = 100_000;
/// Largest tolerated fraction of non-finite paths.
pub const MAX_NON_FINITE_FRACTION: f64 = 1e-3;

/// One simulation job at a single parameter vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimRequest {
    /// Model with every interval degenerate.
    pub model: ModelSpec,
    pub prob: Problem,
    pub beta: f64,
    pub horizon_t: f64,
    pub dt: f64,
    pub n_paths: usize,
    pub seed: u64,
    pub scheme: SimScheme,
    pub antithetic: bool,
}

impl SimRequest {
    /// Request with default step, path count and scheme.
    pub fn new(model: ModelSpec, prob: Problem, beta: f64, horizon_t: f64) -> Self {
        Self {
            model,
            prob,
            beta,
            horizon_t,
            dt: DEFAULT_DT.min(horizon_t),
            n_paths: DEFAULT_PATHS,
            seed: 0,
            scheme: SimScheme::for_model(&model),
            antithetic: false,
        }
    }

    /// Checks every invariant of the request.
    pub fn validate(&self) -> Result<()> {
        let mut errs = validate(&self.model, &self.prob).errors();
        if !self.model.is_degenerate() {
            errs.push("every model interval must be degenerate for simulation".into());
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            errs.push(format!("dt > 0 fails (dt = {})", self.dt));
        }
        if !(self.horizon_t >= self.dt && self.horizon_t.is_finite()) {
            errs.push(format!(
                "horizon_t >= dt fails (horizon_t = {}, dt = {})",
                self.horizon_t, self.dt
            ));
        }
        if self.n_paths < 100 {
            errs.push(format!("n_paths >= 100 fails (n_paths = {})", self.n_paths));
        }
        if self.antithetic && !self.n_paths.is_multiple_of(2) {
            errs.push("antithetic sampling needs an even n_paths".into());
        }
        if self.scheme != SimScheme::for_model(&self.model) {
            errs.push(format!(
                "scheme {} does not apply to {}",
                self.scheme,
                self.model.family()
            ));
        }
        if !self.beta.is_finite() {
            errs.push("beta is finite fails".into());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(errs))
        }
    }

    fn path_spec(&self) -> PathSpec {
        let r0 = match &self.model {
            ModelSpec::Vasicek(m) | ModelSpec::InvGarch(m) => m.r0_or_default(),
            _ => f64::NAN,
        };
        PathSpec {
            model: self.model,
            r: self.prob.r.unwrap_or(0.0),
            r0,
            p: self.prob.p,
            beta: self.beta,
        }
    }
}

/// Estimate at the request's horizon.
pub fn simulate_utility(req: &SimRequest) -> Result<McEstimate> {
    let mut curve = growth_curve(req, &[req.horizon_t])?;
    Ok(curve.remove(0).1)
}

/// Estimates at several horizons from the same paths.
///
/// The step is `dt` adjusted so that the largest horizon is a whole number of
/// steps; every other horizon must also fall on the step grid.
pub fn growth_curve(req: &SimRequest, horizons: &[f64]) -> Result<Vec<(f64, McEstimate)>> {
    let (h, record) = step_grid(req, horizons)?;
    let per_unit = unit_values(req, h, &record);
    let mut out = Vec::with_capacity(horizons.len());
    for (j, &t) in horizons.iter().enumerate() {
        let values: Vec<f64> = per_unit.iter().map(|v| v[j]).collect();
        out.push((t, summarize(req, t, h, &values)?));
    }
    Ok(out)
}

/// Per-path samples of `L_T^p` at the request's horizon, in path order.
/// Antithetic pairs are averaged into one sample.
pub fn terminal_values(req: &SimRequest) -> Result<Vec<f64>> {
    let (h, record) = step_grid(req, &[req.horizon_t])?;
    Ok(unit_values(req, h, &record)
        .into_iter()
        .map(|v| v[0])
        .collect())
}

/// Validates the request and returns the step with the step index of each horizon.
fn step_grid(req: &SimRequest, horizons: &[f64]) -> Result<(f64, Vec<usize>)> {
    req.validate()?;
    if horizons.is_empty() {
        return Err(Error::Validation(vec!["horizons must not be empty".into()]));
    }
    if horizons.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Validation(vec!["horizons must be increasing".into()]));
    }
    let t_max = *horizons.last().unwrap_or(&req.horizon_t);
    if horizons[0] < req.dt {
        return Err(Error::Validation(vec![format!(
            "every horizon must be >= dt = {}",
            req.dt
        )]));
    }
    let n_max = (t_max / req.dt).round().max(1.0) as usize;
    let h = t_max / n_max as f64;
    let mut record = Vec::with_capacity(horizons.len());
    for &t in horizons {
        let k = (t / h).round() as usize;
        if k == 0 || ((k as f64) * h - t).abs() > 1e-9 * t.max(1.0) {
            return Err(Error::Validation(vec![format!(
                "horizon {t} is not a multiple of the step {h}"
            )]));
        }
        record.push(k);
    }
    Ok((h, record))
}

/// `L_T^p` per path (or antithetic pair) at each recorded step.
fn unit_values(req: &SimRequest, h: f64, record: &[usize]) -> Vec<Vec<f64>> {
    let spec = req.path_spec();
    let units = if req.antithetic { req.n_paths / 2 } else { req.n_paths };
    (0..units)
        .into_par_iter()
        .map(|k| {
            let mut s = NormalStream::new(req.seed, k as u64, false);
            let first = simulate_path(&spec, &mut s, h, record);
            if req.antithetic {
                let mut s2 = NormalStream::new(req.seed, k as u64, true);
                let second = simulate_path(&spec, &mut s2, h, record);
                first
                    .iter()
                    .zip(&second)
                    .map(|(a, b)| {
                        if a.is_finite() && b.is_finite() {
                            0.5 * (a + b)
                        } else {
                            f64::NAN
                        }
                    })
                    .collect()
            } else {
                first
            }
        })
        .collect()
}

fn summarize(req: &SimRequest, t: f64, h: f64, values: &[f64]) -> Result<McEstimate> {
    let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    let per_unit = if req.antithetic { 2 } else { 1 };
    let non_finite = (values.len() - finite.len()) * per_unit;
    if non_finite as f64 > MAX_NON_FINITE_FRACTION * req.n_paths as f64 {
        return Err(Error::Simulation(format!(
            "{non_finite} of {} paths are non-finite at T = {t}",
            req.n_paths
        )));
    }
    let (mean, se) = mean_and_std_err(&finite);
    if !(mean > 0.0) {
        return Err(Error::Simulation(format!(
            "sample mean of L_T^p is {mean} at T = {t}"
        )));
    }
    let log_mean = mean.ln();
    Ok(McEstimate {
        horizon_t: t,
        n_paths: req.n_paths,
        dt: h,
        scheme: req.scheme,
        seed: req.seed,
        antithetic: req.antithetic,
        estimate: log_mean / t,
        mean,
        std_err_of_mean: se,
        log_mean,
        rate_std_err: se / (t * mean),
        non_finite_paths: non_finite,
        max_path_value: finite.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}
