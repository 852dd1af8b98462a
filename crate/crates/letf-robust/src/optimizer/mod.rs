//! Optimal leverage `β*`: closed form for GBM, candidate tables for CIR and
//! 3/2, Lipschitz-certified grid search for the remaining families.

mod candidates;
mod grid;
mod lipschitz;

pub use candidates::{candidates_32, candidates_cir, stationary_beta};
pub use grid::{certified_grid, optimize, optimize_beta_grid, DEFAULT_EPSILON};
pub use lipschitz::{
    heston_eta_beta, lipschitz_m, lipschitz_m_heston, lipschitz_m_invgarch, lipschitz_m_sv32,
    lipschitz_m_vasicek, sv32_eta_beta,
};

use crate::analytic::gbm_growth;
use crate::error::Result;
use crate::types::{validate, Candidate, GbmBox, Method, ModelSpec, OptimalLeverage, Problem};

/// Closed-form optimal leverage under GBM, clamped to the β range.
///
/// * `μ̄ < r`: `β* = (μ̄ − r)/((1−p)σ̄²)`
/// * `μ̲ ≤ r ≤ μ̄`: `β* = 0`
/// * `r < μ̲`: `β* = (μ̲ − r)/((1−p)σ̄²)`
pub fn optimal_beta_gbm(model: &GbmBox, prob: &Problem) -> Result<OptimalLeverage> {
    validate(&ModelSpec::Gbm(*model), prob).into_result()?;
    let r = prob.rate()?;
    let denom = (1.0 - prob.p) * model.sigma.hi * model.sigma.hi;
    let raw = if model.mu.hi < r {
        (model.mu.hi - r) / denom
    } else if r < model.mu.lo {
        (model.mu.lo - r) / denom
    } else {
        0.0
    };
    let beta = raw.clamp(prob.beta_range.lo, prob.beta_range.hi);
    let rate = gbm_growth(model, prob, beta)?.rate.unwrap_or(f64::NAN);
    Ok(OptimalLeverage {
        beta_star: beta,
        rate_star: rate,
        method: Method::ClosedForm,
        error_bound: 0.0,
        candidates: vec![Candidate { beta, rate }],
        skipped: Vec::new(),
        grid: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::Interval;

    fn gbm(mu: (f64, f64)) -> GbmBox {
        GbmBox {
            mu: Interval { lo: mu.0, hi: mu.1 },
            sigma: Interval { lo: 0.1, hi: 0.2 },
        }
    }

    fn prob() -> Problem {
        Problem::new(0.5, Some(0.02), Interval { lo: -5.0, hi: 5.0 })
    }

    fn brute(model: &GbmBox, prob: &Problem) -> f64 {
        (0..=100_000)
            .map(|i| -5.0 + 10.0 * i as f64 / 100_000.0)
            .map(|b| gbm_growth(model, prob, b).unwrap().rate.unwrap())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn case_three_long_leverage() {
        let m = gbm((0.06, 0.10));
        let o = optimal_beta_gbm(&m, &prob()).unwrap();
        assert!((o.beta_star - 2.0).abs() < 1e-12);
        assert!((o.rate_star - 0.03).abs() < 1e-12);
        assert_eq!(o.method, Method::ClosedForm);
        assert!(o.rate_star >= brute(&m, &prob()) - 1e-12);
    }

    #[test]
    fn case_one_inverse_leverage() {
        let m = gbm((0.01, 0.015));
        let o = optimal_beta_gbm(&m, &prob()).unwrap();
        assert!((o.beta_star + 0.25).abs() < 1e-12);
        // p r + ½ p (μ̄ − r)²/((1−p)σ̄²)
        assert!((o.rate_star - 0.0103125).abs() < 1e-12);
        assert!(o.rate_star >= brute(&m, &prob()) - 1e-12);
    }

    #[test]
    fn case_two_no_leverage() {
        let o = optimal_beta_gbm(&gbm((0.01, 0.03)), &prob()).unwrap();
        assert_eq!(o.beta_star, 0.0);
        assert_eq!(o.rate_star, 0.01);
    }

    #[test]
    fn closed_form_is_clamped() {
        let m = GbmBox {
            mu: Interval { lo: 0.5, hi: 0.6 },
            sigma: Interval { lo: 0.1, hi: 0.1 },
        };
        let o = optimal_beta_gbm(&m, &prob()).unwrap();
        assert_eq!(o.beta_star, 5.0);
    }
}
