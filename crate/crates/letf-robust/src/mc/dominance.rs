//! Worst-case dominance: every parameter vector in the box should grow at
//! least as fast as the analytic worst case.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::rng::NormalStream;
use super::{simulate_utility, SimRequest};
use crate::analytic::growth;
use crate::error::{Error, Result};
use crate::types::{Interval, ModelSpec, Problem, SimScheme};

/// Stream index reserved for drawing box samples.
const SAMPLER_STREAM: u64 = u64::MAX;

/// Result for one simulated parameter vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceEntry {
    pub params: IndexMap<String, f64>,
    pub corner: bool,
    pub estimate: f64,
    pub rate_std_err: f64,
    pub slack: f64,
    /// `estimate − (analytic_rate − slack)`; negative means a violation.
    pub margin: f64,
    pub pass: bool,
}

/// Outcome of [`dominance_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub beta: f64,
    pub analytic_rate: f64,
    pub horizon_t: f64,
    pub entries: Vec<DominanceEntry>,
    pub violations: usize,
}

impl DominanceReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// `max(0.02, 3 s.e.) + 5/T`: statistical noise plus a finite-horizon allowance
/// worth 0.05 at `T = 100`.
pub fn dominance_slack(rate_std_err: f64, horizon_t: f64) -> f64 {
    (0.02f64).max(3.0 * rate_std_err) + 5.0 / horizon_t
}

fn corners(model: &ModelSpec) -> Vec<Vec<(&'static str, f64)>> {
    let params = model.params();
    let mut out: Vec<Vec<(&'static str, f64)>> = vec![Vec::new()];
    for (name, iv) in params {
        let values: Vec<f64> = if iv.is_degenerate() {
            vec![iv.lo]
        } else {
            vec![iv.lo, iv.hi]
        };
        out = out
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push((name, v));
                    p
                })
            })
            .collect();
    }
    out
}

fn point_model(model: &ModelSpec, values: &[(&str, f64)]) -> Result<ModelSpec> {
    let params: IndexMap<String, Interval> = values
        .iter()
        .map(|(k, v)| (k.to_string(), Interval::point(*v)))
        .collect();
    ModelSpec::from_params(model.family(), &params, model.r0())
}

/// Simulates every corner of the box plus `n_samples` uniform draws and
/// compares each estimate with the analytic worst-case rate at `beta`.
///
/// `template` supplies horizon, step, path count, seed and antithetic flag;
/// its model and β are replaced.
pub fn dominance_check(
    model: &ModelSpec,
    prob: &Problem,
    beta: f64,
    n_samples: usize,
    template: &SimRequest,
) -> Result<DominanceReport> {
    let g = growth(model, prob, beta)?;
    let analytic = g.rate.ok_or_else(|| Error::Infeasible {
        beta,
        note: g.feasibility_note.clone(),
    })?;
    let mut vectors: Vec<(bool, Vec<(&'static str, f64)>)> =
        corners(model).into_iter().map(|c| (true, c)).collect();
    let mut sampler = NormalStream::new(template.seed, SAMPLER_STREAM, false);
    for _ in 0..n_samples {
        let v = model
            .params()
            .into_iter()
            .map(|(name, iv)| (name, iv.lerp(sampler.uniform())))
            .collect();
        vectors.push((false, v));
    }
    let mut entries = Vec::with_capacity(vectors.len());
    for (corner, values) in vectors {
        let pm = point_model(model, &values)?;
        let req = SimRequest {
            model: pm,
            prob: *prob,
            beta,
            scheme: SimScheme::for_model(&pm),
            ..*template
        };
        let est = simulate_utility(&req)?;
        let slack = dominance_slack(est.rate_std_err, est.horizon_t);
        let margin = est.estimate - (analytic - slack);
        entries.push(DominanceEntry {
            params: values.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            corner,
            estimate: est.estimate,
            rate_std_err: est.rate_std_err,
            slack,
            margin,
            pass: margin >= 0.0,
        });
    }
    let violations = entries.iter().filter(|e| !e.pass).count();
    Ok(DominanceReport {
        beta,
        analytic_rate: analytic,
        horizon_t: template.horizon_t,
        entries,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{FactorBox, GbmBox};

    #[test]
    fn corners_enumerate_non_degenerate_axes() {
        let m = ModelSpec::Cir(FactorBox {
            b: Interval { lo: 0.5, hi: 0.6 },
            a: Interval::point(1.0),
            sigma: Interval { lo: 0.4, hi: 0.5 },
        });
        let c = corners(&m);
        assert_eq!(c.len(), 4);
        assert!(c.iter().all(|v| v[1] == ("a", 1.0)));
    }

    #[test]
    fn gbm_box_has_no_violations() {
        let m = ModelSpec::Gbm(GbmBox {
            mu: Interval { lo: 0.06, hi: 0.10 },
            sigma: Interval { lo: 0.1, hi: 0.2 },
        });
        let prob = Problem::new(0.5, Some(0.02), Interval { lo: -5.0, hi: 5.0 });
        let template = SimRequest {
            model: m.pinned(&crate::analytic::growth(&m, &prob, 2.0).unwrap().worst),
            dt: 50.0,
            n_paths: 20_000,
            seed: 9,
            ..SimRequest::new(m, prob, 2.0, 50.0)
        };
        let report = dominance_check(&m, &prob, 2.0, 10, &template).unwrap();
        assert_eq!(report.entries.len(), 14);
        assert!(report.passed(), "{report:?}");
        assert!((report.analytic_rate - 0.03).abs() < 1e-15);
    }

    #[test]
    fn slack_budget_at_long_horizon() {
        assert!((dominance_slack(0.001, 100.0) - 0.07).abs() < 1e-15);
        assert!((dominance_slack(0.01, 100.0) - 0.08).abs() < 1e-15);
    }
}
