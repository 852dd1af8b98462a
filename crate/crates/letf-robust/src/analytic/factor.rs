//! One-factor references: CIR and 3/2.

use crate::error::{Error, Result};
use crate::types::{FactorBox, GrowthPoint, ModelSpec, Problem, Regime, WorstCase};

use super::{check_inputs, eta_root};

/// `η = −(b/σ² − ½) + sqrt((b/σ² − ½)² + pβ(β−1))`.
pub fn cir_eta(b: f64, sigma: f64, beta: f64, p: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::Domain(format!("cir_eta needs sigma > 0, got {sigma}")));
    }
    eta_root(b / (sigma * sigma) - 0.5, p * beta * (beta - 1.0))
}

/// `η = −(a/σ² + ½) + sqrt((a/σ² + ½)² + pβ(β−1))`.
pub fn threehalves_eta(a: f64, sigma: f64, beta: f64, p: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::Domain(format!(
            "threehalves_eta needs sigma > 0, got {sigma}"
        )));
    }
    eta_root(a / (sigma * sigma) + 0.5, p * beta * (beta - 1.0))
}

/// Worst `(b, a, σ)` for CIR: `(b̲, ā, σ̄)` outside `[0, 1)`, `(b̄, a̲, σ̲)` inside.
pub fn cir_worst(model: &FactorBox, beta: f64) -> (f64, f64, f64) {
    match Regime::of(beta) {
        Regime::BetaIn01 => (model.b.hi, model.a.lo, model.sigma.lo),
        _ => (model.b.lo, model.a.hi, model.sigma.hi),
    }
}

/// Worst `(b, a, σ)` for 3/2: `(b̄, a̲, σ̄)` outside `[0, 1)`, `(b̲, ā, σ̲)` inside.
pub fn threehalves_worst(model: &FactorBox, beta: f64) -> (f64, f64, f64) {
    match Regime::of(beta) {
        Regime::BetaIn01 => (model.b.lo, model.a.hi, model.sigma.lo),
        _ => (model.b.hi, model.a.lo, model.sigma.hi),
    }
}

/// CIR rate for a single parameter vector: `−p r(β−1) − a η(b, σ)`.
pub fn cir_rate_at(b: f64, a: f64, sigma: f64, r: f64, p: f64, beta: f64) -> Result<f64> {
    Ok(-p * r * (beta - 1.0) - a * cir_eta(b, sigma, beta, p)?)
}

/// 3/2 rate for a single parameter vector: `−p r(β−1) − b η(a, σ)`.
pub fn threehalves_rate_at(b: f64, a: f64, sigma: f64, r: f64, p: f64, beta: f64) -> Result<f64> {
    Ok(-p * r * (beta - 1.0) - b * threehalves_eta(a, sigma, beta, p)?)
}

/// Robust CIR growth rate.
pub fn cir_growth(model: &FactorBox, prob: &Problem, beta: f64) -> Result<GrowthPoint> {
    check_inputs(&ModelSpec::Cir(*model), prob, beta)?;
    let r = prob.rate()?;
    let p = prob.p;
    let (b, a, sigma) = cir_worst(model, beta);
    let worst = WorstCase::new(Regime::of(beta), &[("b", b), ("a", a), ("sigma", sigma)]);
    let eta = cir_eta(b, sigma, beta, p)?;
    let proviso = 2.0 * b / (sigma * sigma) + eta + p * beta;
    if !(proviso > 0.0) {
        return Ok(GrowthPoint::infeasible(
            beta,
            worst,
            format!("2b*/sigma*² + eta + p*beta = {proviso} is not positive"),
        ));
    }
    Ok(GrowthPoint::feasible(beta, -p * r * (beta - 1.0) - a * eta, worst))
}

/// Robust 3/2 growth rate.
pub fn threehalves_growth(model: &FactorBox, prob: &Problem, beta: f64) -> Result<GrowthPoint> {
    check_inputs(&ModelSpec::ThreeHalves(*model), prob, beta)?;
    let r = prob.rate()?;
    let p = prob.p;
    let (b, a, sigma) = threehalves_worst(model, beta);
    let worst = WorstCase::new(Regime::of(beta), &[("b", b), ("a", a), ("sigma", sigma)]);
    let (a_lo, s_hi) = (model.a.lo, model.sigma.hi);
    let proviso =
        2.0 * (a_lo / (s_hi * s_hi) + 1.0) + threehalves_eta(a_lo, s_hi, beta, p)? - p * beta;
    if !(proviso > 0.0) {
        return Ok(GrowthPoint::infeasible(
            beta,
            worst,
            format!("2(a.lo/sigma.hi² + 1) + eta - p*beta = {proviso} is not positive"),
        ));
    }
    let eta = threehalves_eta(a, sigma, beta, p)?;
    Ok(GrowthPoint::feasible(beta, -p * r * (beta - 1.0) - b * eta, worst))
}
