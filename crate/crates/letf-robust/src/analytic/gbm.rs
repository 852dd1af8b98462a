use crate::error::Result;
use crate::types::{GbmBox, GrowthPoint, Interval, ModelSpec, Problem, Regime, WorstCase};

use super::check_inputs;

/// Worst drift: `μ̲` for `β ≥ 0`, `μ̄` for `β < 0`.
pub fn mu_star(beta: f64, mu: Interval) -> f64 {
    if beta >= 0.0 {
        mu.lo
    } else {
        mu.hi
    }
}

/// Growth rate for a single `(μ, σ)`.
pub fn gbm_rate_at(mu: f64, sigma: f64, r: f64, p: f64, beta: f64) -> f64 {
    p * r + p * (mu - r) * beta - 0.5 * p * (1.0 - p) * sigma * sigma * beta * beta
}

/// `Λ(β) = p r + p(μ* − r)β − ½ p(1−p) σ̄² β²`.
pub fn gbm_growth(model: &GbmBox, prob: &Problem, beta: f64) -> Result<GrowthPoint> {
    check_inputs(&ModelSpec::Gbm(*model), prob, beta)?;
    let r = prob.rate()?;
    let mu = mu_star(beta, model.mu);
    let sigma = model.sigma.hi;
    let worst = WorstCase::new(Regime::of(beta), &[("mu", mu), ("sigma", sigma)]);
    Ok(GrowthPoint::feasible(
        beta,
        gbm_rate_at(mu, sigma, r, prob.p, beta),
        worst,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> GbmBox {
        GbmBox {
            mu: Interval { lo: 0.06, hi: 0.10 },
            sigma: Interval { lo: 0.1, hi: 0.2 },
        }
    }

    fn prob() -> Problem {
        Problem::new(0.5, Some(0.02), Interval { lo: -5.0, hi: 5.0 })
    }

    #[test]
    fn mu_star_selects_by_sign() {
        let mu = Interval { lo: 0.05, hi: 0.08 };
        assert_eq!(mu_star(2.0, mu), 0.05);
        assert_eq!(mu_star(-1.0, mu), 0.08);
        assert_eq!(mu_star(0.0, Interval::point(0.05)), 0.05);
    }

    #[test]
    fn long_leverage_example() {
        let g = gbm_growth(&model(), &prob(), 2.0).unwrap();
        assert!((g.rate.unwrap() - 0.03).abs() < 1e-15);
        assert_eq!(g.worst.get("sigma"), Some(0.2));
        assert_eq!(g.worst.get("mu"), Some(0.06));
        assert!(g.feasible);
    }

    #[test]
    fn inverse_leverage_example() {
        let g = gbm_growth(&model(), &prob(), -1.0).unwrap();
        assert!((g.rate.unwrap() + 0.035).abs() < 1e-15);
        assert_eq!(g.worst.get("mu"), Some(0.10));
    }

    #[test]
    fn zero_leverage_earns_the_short_rate() {
        let g = gbm_growth(&model(), &prob(), 0.0).unwrap();
        assert_eq!(g.rate.unwrap(), 0.5 * 0.02);
        assert_eq!(g.worst.get("sigma"), Some(0.2));
    }

    #[test]
    fn out_of_range_beta_is_rejected() {
        assert!(gbm_growth(&model(), &prob(), 6.0).is_err());
    }
}
