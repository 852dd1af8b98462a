//! Closed-form worst-case growth rates `Λ(β)` and worst-case parameter
//! selectors for every model family.

mod factor;
mod gbm;
mod short_rate;
mod stochvol;

pub use factor::{
    cir_eta, cir_growth, cir_rate_at, cir_worst, threehalves_eta, threehalves_growth,
    threehalves_rate_at, threehalves_worst,
};
pub use gbm::{gbm_growth, gbm_rate_at, mu_star};
pub use short_rate::{
    invgarch_box_margin, invgarch_growth, invgarch_lambda, invgarch_proviso_inf,
    invgarch_worst_params, vasicek_growth, vasicek_lambda, vasicek_worst_params,
};
pub use stochvol::{
    heston_eta, heston_growth, heston_sigma_star, rho_star, sv32_eta, sv32_growth,
    sv32_sigma_star,
};

use crate::error::{Error, Result};
use crate::types::{validate, GrowthPoint, ModelSpec, Problem};

/// Robust growth rate of any family at `beta`.
pub fn growth(model: &ModelSpec, prob: &Problem, beta: f64) -> Result<GrowthPoint> {
    match model {
        ModelSpec::Gbm(m) => gbm_growth(m, prob, beta),
        ModelSpec::Cir(m) => cir_growth(m, prob, beta),
        ModelSpec::ThreeHalves(m) => threehalves_growth(m, prob, beta),
        ModelSpec::Heston(m) => heston_growth(m, prob, beta),
        ModelSpec::Sv32(m) => sv32_growth(m, prob, beta),
        ModelSpec::Vasicek(m) => vasicek_growth(m, prob, beta),
        ModelSpec::InvGarch(m) => invgarch_growth(m, prob, beta),
    }
}

/// Validates the model and problem and checks that `beta` is admissible.
pub(crate) fn check_inputs(model: &ModelSpec, prob: &Problem, beta: f64) -> Result<()> {
    validate(model, prob).into_result()?;
    if !beta.is_finite() || !prob.beta_range.contains(beta) {
        return Err(Error::Validation(vec![format!(
            "beta = {beta} is outside beta_range {}",
            prob.beta_range
        )]));
    }
    Ok(())
}

/// Smaller root-form of `-k + sqrt(k² + c)`, stable when `k > 0`.
pub(crate) fn eta_root(k: f64, c: f64) -> Result<f64> {
    let disc = k * k + c;
    if disc < 0.0 {
        return Err(Error::Domain(format!(
            "negative square-root argument {disc} in eta"
        )));
    }
    let s = disc.sqrt();
    if k > 0.0 {
        Ok(c / (k + s))
    } else {
        Ok(s - k)
    }
}
