//! Lipschitz constants `M` of `β ↦ Λ(β)`, so that a β grid with mesh
//! `h ≤ ε/M` locates the maximum of `Λ` to within `ε`.

use crate::error::{Error, Result};
use crate::search::{golden_max, grid_point, maximize_1d};
use crate::types::{validate, ModelSpec, Problem, ShortRateBox, StochVolBox};

/// Safety factor on grid-evaluated derivative bounds.
pub const SAFETY: f64 = 1.1;

const BETA_GRID: usize = 257;
const BOX_GRID: usize = 64;

fn sv_eta_beta(core: f64, sigma: f64, beta: f64, p: f64, rho: f64) -> f64 {
    let q = p * (1.0 - p);
    let s = (core * core + q * beta * beta * sigma * sigma).sqrt();
    let dcore = -p * rho * sigma;
    ((core * dcore + q * beta * sigma * sigma) / s - dcore) / (sigma * sigma)
}

/// `∂η/∂β` for the Heston `η`.
pub fn heston_eta_beta(sigma: f64, beta: f64, p: f64, rho: f64, a_lo: f64) -> f64 {
    sv_eta_beta(a_lo - p * beta * rho * sigma, sigma, beta, p, rho)
}

/// `∂η/∂β` for the 3/2-volatility `η`.
pub fn sv32_eta_beta(sigma: f64, beta: f64, p: f64, rho: f64, a_lo: f64) -> f64 {
    sv_eta_beta(
        a_lo - p * beta * rho * sigma + 0.5 * sigma * sigma,
        sigma,
        beta,
        p,
        rho,
    )
}

fn drift_term(mu: (f64, f64), r: f64, p: f64) -> f64 {
    p * (mu.0 - r).abs().max((mu.1 - r).abs())
}

/// `M = p max|μ − r| + b̄ sup_σ max(|η_β(σ, β̲; ρ̲)|, |η_β(σ, β̄; ρ̄)|)`.
///
/// `η` is convex in β with `η_β(σ, 0) = 0`, so on each sign regime `|η_β|`
/// peaks at the β endpoint.
pub fn lipschitz_m_heston(model: &StochVolBox, prob: &Problem) -> Result<f64> {
    validate(&ModelSpec::Heston(*model), prob).into_result()?;
    let r = prob.rate()?;
    let p = prob.p;
    let (blo, bhi) = (prob.beta_range.lo, prob.beta_range.hi);
    let margin = model.a.lo - p * blo.abs().max(bhi) * model.sigma.hi;
    if !(margin > 0.0) {
        return Err(Error::Infeasible {
            beta: if blo.abs() > bhi { blo } else { bhi },
            note: format!("a.lo - p max|beta| sigma.hi = {margin} is not positive"),
        });
    }
    let a = model.a.lo;
    let (_, sup) = maximize_1d(
        |s| {
            heston_eta_beta(s, blo, p, model.rho.lo, a)
                .abs()
                .max(heston_eta_beta(s, bhi, p, model.rho.hi, a).abs())
        },
        model.sigma.lo,
        model.sigma.hi,
    );
    Ok(drift_term((model.mu.lo, model.mu.hi), r, p) + model.b.hi * sup)
}

/// Heston construction for 3/2 volatility, with `sup|η_β|` from a dense β
/// grid over the feasible part of the range, times [`SAFETY`].
pub fn lipschitz_m_sv32(model: &StochVolBox, prob: &Problem) -> Result<f64> {
    validate(&ModelSpec::Sv32(*model), prob).into_result()?;
    let r = prob.rate()?;
    let p = prob.p;
    let a = model.a.lo;
    let s_lo = model.sigma.lo;
    let feasible = |beta: f64| a - p * beta.abs() * model.sigma.hi + 0.5 * s_lo * s_lo > 0.0;
    let mut sup: f64 = 0.0;
    let mut any = false;
    for i in 0..BETA_GRID {
        let beta = grid_point(prob.beta_range.lo, prob.beta_range.hi, BETA_GRID, i);
        if !feasible(beta) {
            continue;
        }
        any = true;
        let rho = if beta >= 0.0 { model.rho.hi } else { model.rho.lo };
        let (_, v) = maximize_1d(
            |s| sv32_eta_beta(s, beta, p, rho, a).abs(),
            model.sigma.lo,
            model.sigma.hi,
        );
        sup = sup.max(v);
    }
    if !any {
        return Err(Error::Infeasible {
            beta: prob.beta_range.hi,
            note: "3/2-volatility proviso fails on the whole beta range".into(),
        });
    }
    Ok(drift_term((model.mu.lo, model.mu.hi), r, p) + model.b.hi * SAFETY * sup)
}

type LambdaBeta = fn(f64, f64, f64, f64, f64, f64, f64) -> f64;

/// `∂λ/∂β` for Vasicek.
fn vasicek_lambda_beta(vs: f64, rho: f64, b: f64, a: f64, s: f64, beta: f64, p: f64) -> f64 {
    -p * p * (beta - 1.0) * (s / a).powi(2) + p * p * (2.0 * beta - 1.0) * vs * rho * s / a
        + p * b / a
}

/// `∂λ/∂β` for inverse GARCH.
fn invgarch_lambda_beta(vs: f64, rho: f64, b: f64, a: f64, s: f64, beta: f64, p: f64) -> f64 {
    -(p / (2.0 * a)) * (2.0 * p * (beta - 1.0) / a + 1.0) * s * s
        + p * p * (2.0 * beta - 1.0) * vs * rho * s / a
        + p * b / a
}

/// `sup |λ_β|` over the box and β range: `(ς, ρ, b)` enter linearly and sit at
/// corners; `(a, σ, β)` use a 64³ grid refined around the best cell.
fn sup_abs_lambda_beta(m: &ShortRateBox, prob: &Problem, f: LambdaBeta) -> f64 {
    let p = prob.p;
    let br = (prob.beta_range.lo, prob.beta_range.hi);
    let ar = (m.a.lo, m.a.hi);
    let sr = (m.sigma.lo, m.sigma.hi);
    let n = BOX_GRID;
    let ax = |i| grid_point(ar.0, ar.1, if ar.1 > ar.0 { n } else { 1 }, i);
    let sx = |i| grid_point(sr.0, sr.1, if sr.1 > sr.0 { n } else { 1 }, i);
    let bx = |i| grid_point(br.0, br.1, n, i);
    let na = if ar.1 > ar.0 { n } else { 1 };
    let ns = if sr.1 > sr.0 { n } else { 1 };
    let mut sup: f64 = 0.0;
    for vs in [m.varsigma.lo, m.varsigma.hi] {
        for rho in [m.rho.lo, m.rho.hi] {
            for b in [m.b.lo, m.b.hi] {
                let g = |a: f64, s: f64, beta: f64| f(vs, rho, b, a, s, beta, p).abs();
                let mut best = (0usize, 0usize, 0usize, f64::NEG_INFINITY);
                for i in 0..na {
                    for j in 0..ns {
                        for k in 0..n {
                            let v = g(ax(i), sx(j), bx(k));
                            if v > best.3 {
                                best = (i, j, k, v);
                            }
                        }
                    }
                }
                let (mut a, mut s, mut beta) = (ax(best.0), sx(best.1), bx(best.2));
                let mut val = best.3;
                let bracket = |c: usize, len: usize, pt: &dyn Fn(usize) -> f64| {
                    (pt(c.saturating_sub(1)), pt((c + 1).min(len - 1)))
                };
                let (a0, a1) = bracket(best.0, na, &ax);
                let (s0, s1) = bracket(best.1, ns, &sx);
                let (b0, b1) = bracket(best.2, n, &bx);
                for _ in 0..20 {
                    if a1 > a0 {
                        let (x, v) = golden_max(|x| g(x, s, beta), a0, a1, 1e-12);
                        if v > val {
                            a = x;
                            val = v;
                        }
                    }
                    if s1 > s0 {
                        let (x, v) = golden_max(|x| g(a, x, beta), s0, s1, 1e-12);
                        if v > val {
                            s = x;
                            val = v;
                        }
                    }
                    let (x, v) = golden_max(|x| g(a, s, x), b0, b1, 1e-12);
                    if v > val {
                        beta = x;
                        val = v;
                    }
                }
                sup = sup.max(val);
            }
        }
    }
    sup
}

fn short_rate_base(m: &ShortRateBox, prob: &Problem) -> f64 {
    let p = prob.p;
    let bmax = prob.beta_range.lo.abs().max(prob.beta_range.hi);
    p * m.mu.hi + p * (1.0 - p) * m.varsigma.hi * m.varsigma.hi * bmax
}

/// `M = pμ̄ + p(1−p)ς̄² max(|β̲|, β̄) + sup|λ_β|`.
pub fn lipschitz_m_vasicek(model: &ShortRateBox, prob: &Problem) -> Result<f64> {
    validate(&ModelSpec::Vasicek(*model), prob).into_result()?;
    Ok(short_rate_base(model, prob) + sup_abs_lambda_beta(model, prob, vasicek_lambda_beta))
}

/// Vasicek construction for inverse GARCH with [`SAFETY`] on `sup|λ_β|`.
pub fn lipschitz_m_invgarch(model: &ShortRateBox, prob: &Problem) -> Result<f64> {
    validate(&ModelSpec::InvGarch(*model), prob).into_result()?;
    Ok(short_rate_base(model, prob)
        + SAFETY * sup_abs_lambda_beta(model, prob, invgarch_lambda_beta))
}

/// Lipschitz constant for any family handled by the certified grid.
pub fn lipschitz_m(model: &ModelSpec, prob: &Problem) -> Result<f64> {
    match model {
        ModelSpec::Heston(m) => lipschitz_m_heston(m, prob),
        ModelSpec::Sv32(m) => lipschitz_m_sv32(m, prob),
        ModelSpec::Vasicek(m) => lipschitz_m_vasicek(m, prob),
        ModelSpec::InvGarch(m) => lipschitz_m_invgarch(m, prob),
        ModelSpec::Gbm(_) => Err(Error::Unsupported(
            "GBM has a closed-form optimum; use optimal_beta_gbm".into(),
        )),
        ModelSpec::Cir(_) => Err(Error::Unsupported(
            "CIR has a candidate table; use candidates_cir".into(),
        )),
        ModelSpec::ThreeHalves(_) => Err(Error::Unsupported(
            "3/2 has a candidate table; use candidates_32".into(),
        )),
    }
}
