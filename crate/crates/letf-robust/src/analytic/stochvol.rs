//! Stochastic-volatility references: Heston and 3/2 volatility.
//!
//! Both share `Λ(β) = p(r + β(μ* − r)) − b̄ max_σ η(σ, β)`; they differ only in
//! the `η` display and the feasibility condition.

use crate::error::{Error, Result};
use crate::search::maximize_1d;
use crate::types::{GrowthPoint, Interval, ModelSpec, Problem, Regime, StochVolBox, WorstCase};

use super::{check_inputs, mu_star};

/// Worst correlation: `ρ̄` for `β ≥ 0`, `ρ̲` for `β < 0`.
pub fn rho_star(beta: f64, rho: Interval) -> f64 {
    if beta >= 0.0 {
        rho.hi
    } else {
        rho.lo
    }
}

/// `(sqrt(A² + p(1−p)β²σ²) − A)/σ²`, written as `p(1−p)β²/(S + A)` for `A > 0`.
fn sv_eta(core: f64, sigma: f64, beta: f64, p: f64) -> f64 {
    let q = p * (1.0 - p) * beta * beta;
    let s = (core * core + q * sigma * sigma).sqrt();
    q / (s + core)
}

/// Heston `η(σ, β)` with `A = a̲ − pβρ*σ`.
pub fn heston_eta(sigma: f64, beta: f64, p: f64, rho_star: f64, a_lo: f64) -> Result<f64> {
    let margin = a_lo - p * beta.abs() * sigma;
    if !(margin > 0.0) {
        return Err(Error::Infeasible {
            beta,
            note: format!("a.lo - p|beta|sigma = {margin} is not positive"),
        });
    }
    Ok(sv_eta(a_lo - p * beta * rho_star * sigma, sigma, beta, p))
}

/// 3/2-volatility `η(σ, β)` with `A = a̲ − pβρ*σ + σ²/2`.
pub fn sv32_eta(sigma: f64, beta: f64, p: f64, rho_star: f64, a_lo: f64) -> Result<f64> {
    let margin = a_lo - p * beta.abs() * sigma + 0.5 * sigma * sigma;
    if !(margin > 0.0) {
        return Err(Error::Infeasible {
            beta,
            note: format!("a.lo - p|beta|sigma + sigma²/2 = {margin} is not positive"),
        });
    }
    Ok(sv_eta(
        a_lo - p * beta * rho_star * sigma + 0.5 * sigma * sigma,
        sigma,
        beta,
        p,
    ))
}

fn heston_margin(model: &StochVolBox, p: f64, beta: f64) -> f64 {
    model.a.lo - p * beta.abs() * model.sigma.hi
}

fn sv32_margin(model: &StochVolBox, p: f64, beta: f64) -> f64 {
    model.a.lo - p * beta.abs() * model.sigma.hi + 0.5 * model.sigma.lo * model.sigma.lo
}

fn sigma_star_with(
    eta: fn(f64, f64, f64, f64, f64) -> Result<f64>,
    model: &StochVolBox,
    p: f64,
    beta: f64,
) -> (f64, f64) {
    let rho = rho_star(beta, model.rho);
    let a_lo = model.a.lo;
    maximize_1d(
        |s| eta(s, beta, p, rho, a_lo).unwrap_or(f64::NEG_INFINITY),
        model.sigma.lo,
        model.sigma.hi,
    )
}

/// `σ*` maximizing the Heston `η` over the σ box, with `η(σ*)`.
pub fn heston_sigma_star(model: &StochVolBox, prob: &Problem, beta: f64) -> Result<(f64, f64)> {
    check_inputs(&ModelSpec::Heston(*model), prob, beta)?;
    let margin = heston_margin(model, prob.p, beta);
    if !(margin > 0.0) {
        return Err(Error::Infeasible {
            beta,
            note: format!("a.lo - p|beta|sigma.hi = {margin} is not positive"),
        });
    }
    Ok(sigma_star_with(heston_eta, model, prob.p, beta))
}

/// `σ*` maximizing the 3/2-volatility `η` over the σ box, with `η(σ*)`.
pub fn sv32_sigma_star(model: &StochVolBox, prob: &Problem, beta: f64) -> Result<(f64, f64)> {
    check_inputs(&ModelSpec::Sv32(*model), prob, beta)?;
    let margin = sv32_margin(model, prob.p, beta);
    if !(margin > 0.0) {
        return Err(Error::Infeasible {
            beta,
            note: format!("a.lo - p|beta|sigma.hi + sigma.lo²/2 = {margin} is not positive"),
        });
    }
    Ok(sigma_star_with(sv32_eta, model, prob.p, beta))
}

fn sv_growth(
    model: &StochVolBox,
    prob: &Problem,
    beta: f64,
    sigma_star: Result<(f64, f64)>,
) -> Result<GrowthPoint> {
    let r = prob.rate()?;
    let p = prob.p;
    let mu = mu_star(beta, model.mu);
    let rho = rho_star(beta, model.rho);
    let base = [("mu", mu), ("rho", rho), ("b", model.b.hi), ("a", model.a.lo)];
    match sigma_star {
        Ok((sigma, eta)) => {
            let mut params = base.to_vec();
            params.push(("sigma", sigma));
            let worst = WorstCase::new(Regime::of(beta), &params).with_inner(&[("sigma", sigma)]);
            let rate = p * (r + beta * (mu - r)) - model.b.hi * eta;
            Ok(GrowthPoint::feasible(beta, rate, worst))
        }
        Err(Error::Infeasible { note, .. }) => Ok(GrowthPoint::infeasible(
            beta,
            WorstCase::new(Regime::of(beta), &base),
            note,
        )),
        Err(e) => Err(e),
    }
}

/// Robust Heston growth rate.
pub fn heston_growth(model: &StochVolBox, prob: &Problem, beta: f64) -> Result<GrowthPoint> {
    let s = heston_sigma_star(model, prob, beta);
    sv_growth(model, prob, beta, s)
}

/// Robust 3/2-volatility growth rate.
pub fn sv32_growth(model: &StochVolBox, prob: &Problem, beta: f64) -> Result<GrowthPoint> {
    let s = sv32_sigma_star(model, prob, beta);
    sv_growth(model, prob, beta, s)
}
