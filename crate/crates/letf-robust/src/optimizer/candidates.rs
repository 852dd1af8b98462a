//! Candidate sets for CIR and 3/2.
//!
//! On each regime `[β̲, 0)`, `[0, 1)`, `[1, β̄]` the worst-case parameters are
//! constant and `Λ = −p r(β−1) − c η(β)` is concave, with `η` convex. `Λ` is
//! continuous at 0 and 1, so its maximum is at a regime endpoint or at a
//! regime's stationary point `β = (1 + x)/2`, where
//! `x² = (K² − p)/((c/r)² − p)` and `x` has the sign of `−r`.

use crate::analytic::{cir_growth, cir_worst, threehalves_growth, threehalves_worst};
use crate::error::{Error, Result};
use crate::types::{
    best_candidate, validate, Candidate, FactorBox, GrowthPoint, Method, ModelSpec,
    OptimalLeverage, Problem,
};

/// Stationary point of `−p r(β−1) − c(−K/2 + sqrt(K²/4 + pβ(β−1)))`, if any.
pub fn stationary_beta(k: f64, c: f64, r: f64, p: f64) -> Option<f64> {
    if r == 0.0 {
        return Some(0.5);
    }
    let denom = (c / r).powi(2) - p;
    let num = k * k - p;
    if !(denom > 0.0) || num < 0.0 {
        return None;
    }
    let x = -r.signum() * (num / denom).sqrt();
    Some(0.5 * (1.0 + x))
}

fn regimes(prob: &Problem) -> [(f64, f64, f64); 3] {
    let (lo, hi) = (prob.beta_range.lo, prob.beta_range.hi);
    // (regime start, regime end, representative β)
    [(lo, 0.0, lo), (0.0, 1.0, 0.5), (1.0, hi, 1.0)]
}

fn from_candidates(
    betas: Vec<f64>,
    eval: impl Fn(f64) -> Result<GrowthPoint>,
) -> Result<OptimalLeverage> {
    let mut betas = betas;
    betas.sort_by(f64::total_cmp);
    betas.dedup();
    let mut candidates = Vec::new();
    let mut skipped = Vec::new();
    let mut notes = Vec::new();
    for beta in betas {
        let g = eval(beta)?;
        match g.rate {
            Some(rate) => candidates.push(Candidate { beta, rate }),
            None => {
                skipped.push(beta);
                notes.push(format!("beta = {beta}: {}", g.feasibility_note));
            }
        }
    }
    let best = best_candidate(&candidates).ok_or_else(|| Error::Infeasible {
        beta: f64::NAN,
        note: format!("every candidate is infeasible ({})", notes.join("; ")),
    })?;
    Ok(OptimalLeverage {
        beta_star: best.beta,
        rate_star: best.rate,
        method: Method::CandidateTable,
        error_bound: 0.0,
        candidates,
        skipped,
        grid: None,
    })
}

fn candidate_betas(prob: &Problem, r: f64, kc: impl Fn(f64) -> (f64, f64)) -> Vec<f64> {
    let mut betas = vec![prob.beta_range.lo, 0.0, 1.0, prob.beta_range.hi];
    for (start, end, rep) in regimes(prob) {
        let (k, c) = kc(rep);
        if let Some(b) = stationary_beta(k, c, r, prob.p) {
            if b >= start && b <= end {
                betas.push(b);
            }
        }
    }
    betas
}

/// Optimal leverage under CIR from the regime candidate set.
pub fn candidates_cir(model: &FactorBox, prob: &Problem) -> Result<OptimalLeverage> {
    validate(&ModelSpec::Cir(*model), prob).into_result()?;
    let r = prob.rate()?;
    let betas = candidate_betas(prob, r, |beta| {
        let (b, a, sigma) = cir_worst(model, beta);
        (2.0 * b / (sigma * sigma) - 1.0, a)
    });
    from_candidates(betas, |beta| cir_growth(model, prob, beta))
}

/// Optimal leverage under 3/2 from the regime candidate set.
pub fn candidates_32(model: &FactorBox, prob: &Problem) -> Result<OptimalLeverage> {
    validate(&ModelSpec::ThreeHalves(*model), prob).into_result()?;
    let r = prob.rate()?;
    let betas = candidate_betas(prob, r, |beta| {
        let (b, a, sigma) = threehalves_worst(model, beta);
        (2.0 * a / (sigma * sigma) + 1.0, b)
    });
    from_candidates(betas, |beta| threehalves_growth(model, prob, beta))
}
