//! Lipschitz-certified β grid search.

use rayon::prelude::*;

use super::{candidates_32, candidates_cir, lipschitz_m, optimal_beta_gbm};
use crate::analytic::growth;
use crate::error::{Error, Result};
use crate::search::grid_point;
use crate::types::{
    best_candidate, Candidate, CertifiedGridConfig, Method, ModelSpec, OptimalLeverage, Problem,
};

/// Default target accuracy in `Λ`.
pub const DEFAULT_EPSILON: f64 = 0.01;

/// Grid argmax with mesh at most `epsilon / M`.
pub fn optimize_beta_grid(model: &ModelSpec, prob: &Problem, epsilon: f64) -> Result<OptimalLeverage> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Validation(vec![format!("epsilon > 0 fails (epsilon = {epsilon})")]));
    }
    let m = lipschitz_m(model, prob)?;
    certified_grid(model, prob, epsilon, epsilon / m, m)
}

/// Grid argmax with mesh at most `max_mesh`. Both range endpoints are
/// evaluated; infeasible points are skipped and listed.
pub fn certified_grid(
    model: &ModelSpec,
    prob: &Problem,
    epsilon: f64,
    max_mesh: f64,
    lipschitz_m: f64,
) -> Result<OptimalLeverage> {
    if !(max_mesh > 0.0 && max_mesh.is_finite()) {
        return Err(Error::Validation(vec![format!("mesh > 0 fails (mesh = {max_mesh})")]));
    }
    let range = prob.beta_range;
    let intervals = (range.width() / max_mesh).ceil().max(1.0) as usize;
    let n = intervals + 1;
    let points: Vec<Result<(f64, Option<f64>)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let beta = grid_point(range.lo, range.hi, n, i);
            growth(model, prob, beta).map(|g| (beta, g.rate))
        })
        .collect();
    let mut candidates = Vec::with_capacity(n);
    let mut skipped = Vec::new();
    for pt in points {
        match pt? {
            (beta, Some(rate)) => candidates.push(Candidate { beta, rate }),
            (beta, None) => skipped.push(beta),
        }
    }
    let best = best_candidate(&candidates).ok_or_else(|| Error::Infeasible {
        beta: f64::NAN,
        note: "every grid point is infeasible".into(),
    })?;
    Ok(OptimalLeverage {
        beta_star: best.beta,
        rate_star: best.rate,
        method: Method::CertifiedGrid,
        error_bound: epsilon,
        candidates,
        skipped,
        grid: Some(CertifiedGridConfig {
            epsilon,
            mesh: range.width() / intervals as f64,
            lipschitz_m,
            beta_range: range,
        }),
    })
}

/// Optimal leverage by the method that fits the family.
pub fn optimize(model: &ModelSpec, prob: &Problem, epsilon: f64) -> Result<OptimalLeverage> {
    match model {
        ModelSpec::Gbm(m) => optimal_beta_gbm(m, prob),
        ModelSpec::Cir(m) => candidates_cir(m, prob),
        ModelSpec::ThreeHalves(m) => candidates_32(m, prob),
        _ => optimize_beta_grid(model, prob, epsilon),
    }
}
