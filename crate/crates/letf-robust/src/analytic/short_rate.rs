//! Stochastic short-rate families: Vasicek and inverse GARCH.
//!
//! In both, `Λ(β) = pβμ* − ½p(1−p)β²ς*² − λ(α*)`, where `α*` maximizes
//! `½p(1−p)β²ς² + λ` over the box. The β regime and the sign of the relevant
//! correlation bound fix the corner coordinates; the rest is an inner solve.
//!
//! | case | regime   | ρ test | inner problem (Vasicek) | inner problem (inverse GARCH) |
//! |------|----------|--------|-------------------------|-------------------------------|
//! | 1    | β ≥ 1    | ρ̄ ≥ 0  | (a, σ)                  | σ                             |
//! | 2    | β ≥ 1    | ρ̄ < 0  | (ς, a), σ = σ̲           | ς, σ = σ̲                      |
//! | 3    | 0 ≤ β < 1 | ρ̲ < 0 | (a, σ)                  | σ                             |
//! | 4    | 0 ≤ β < 1 | ρ̲ ≥ 0 | ς endpoints, a = ā, σ = σ̲ | (ς, σ)                      |
//! | 5    | β < 0    | ρ̄ ≥ 0  | (a, σ)                  | σ                             |
//! | 6    | β < 0    | ρ̄ < 0  | ς endpoints, a = ā, σ = σ̲ | (ς, σ)                      |

use crate::error::{Error, Result};
use crate::search::{endpoint_max, maximize_1d, maximize_2d};
use crate::types::{GrowthPoint, ModelSpec, Problem, Regime, ShortRateBox, WorstCase};

use super::{check_inputs, mu_star};

/// Vasicek eigenvalue
/// `λ = −½(p(β−1)σ/a)² + p²β(β−1)ςρσ/a + p(β−1)b/a`.
pub fn vasicek_lambda(
    varsigma: f64,
    rho: f64,
    b: f64,
    a: f64,
    sigma: f64,
    beta: f64,
    p: f64,
) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::Validation(vec![format!("a > 0 fails (a = {a})")]));
    }
    let q = p * (beta - 1.0) * sigma / a;
    Ok(-0.5 * q * q + p * p * beta * (beta - 1.0) * varsigma * rho * sigma / a
        + p * (beta - 1.0) * b / a)
}

/// Inverse-GARCH eigenvalue
/// `λ = −(p(β−1)/(2a))(p(β−1)/a + 1)σ² + p²β(β−1)ςρσ/a + p(β−1)b/a`.
pub fn invgarch_lambda(
    varsigma: f64,
    rho: f64,
    b_star: f64,
    a_star: f64,
    sigma: f64,
    beta: f64,
    p: f64,
) -> Result<f64> {
    if !(a_star > 0.0) {
        return Err(Error::Validation(vec![format!(
            "a_star > 0 fails (a_star = {a_star})"
        )]));
    }
    let c = p * (beta - 1.0) / a_star;
    Ok(-0.5 * c * (c + 1.0) * sigma * sigma
        + p * p * beta * (beta - 1.0) * varsigma * rho * sigma / a_star
        + c * b_star)
}

/// Case number, `(ς, ρ, b, a, σ)` and the inner solves' reported argmax.
type Selection = (u8, f64, f64, f64, f64, f64, Vec<(&'static str, f64)>);

/// Case-matched worst-case parameters for Vasicek.
pub fn vasicek_worst_params(model: &ShortRateBox, prob: &Problem, beta: f64) -> Result<WorstCase> {
    check_inputs(&ModelSpec::Vasicek(*model), prob, beta)?;
    Ok(vasicek_select(model, prob.p, beta))
}

fn vasicek_select(m: &ShortRateBox, p: f64, beta: f64) -> WorstCase {
    let half = 0.5 * p * (1.0 - p) * beta * beta;
    let lam = |vs: f64, rho: f64, b: f64, a: f64, s: f64| {
        vasicek_lambda(vs, rho, b, a, s, beta, p).unwrap_or(f64::NAN)
    };
    let mu = mu_star(beta, m.mu);
    let regime = Regime::of(beta);
    let (ar, sr) = ((m.a.lo, m.a.hi), (m.sigma.lo, m.sigma.hi));
    let (case, vs, rho, b, a, sigma, inner): Selection =
        match regime {
            Regime::BetaGe1 if m.rho.hi >= 0.0 => {
                let (vs, rho, b) = (m.varsigma.hi, m.rho.hi, m.b.hi);
                let ((a, s), _) = maximize_2d(|a, s| lam(vs, rho, b, a, s), ar, sr);
                (1, vs, rho, b, a, s, vec![("a", a), ("sigma", s)])
            }
            Regime::BetaGe1 => {
                let (rho, b, s) = (m.rho.hi, m.b.hi, m.sigma.lo);
                let ((vs, a), _) = maximize_2d(
                    |vs, a| half * vs * vs + lam(vs, rho, b, a, s),
                    (m.varsigma.lo, m.varsigma.hi),
                    ar,
                );
                (2, vs, rho, b, a, s, vec![("varsigma", vs), ("a", a)])
            }
            Regime::BetaIn01 if m.rho.lo < 0.0 => {
                let (vs, rho, b) = (m.varsigma.hi, m.rho.lo, m.b.lo);
                let ((a, s), _) = maximize_2d(|a, s| lam(vs, rho, b, a, s), ar, sr);
                (3, vs, rho, b, a, s, vec![("a", a), ("sigma", s)])
            }
            Regime::BetaIn01 => {
                let (rho, b, a, s) = (m.rho.lo, m.b.lo, m.a.hi, m.sigma.lo);
                let (vs, _) = endpoint_max(
                    |vs| half * vs * vs + lam(vs, rho, b, a, s),
                    m.varsigma.lo,
                    m.varsigma.hi,
                );
                (4, vs, rho, b, a, s, vec![("varsigma", vs)])
            }
            Regime::BetaNeg if m.rho.hi >= 0.0 => {
                let (vs, rho, b) = (m.varsigma.hi, m.rho.hi, m.b.lo);
                let ((a, s), _) = maximize_2d(|a, s| lam(vs, rho, b, a, s), ar, sr);
                (5, vs, rho, b, a, s, vec![("a", a), ("sigma", s)])
            }
            Regime::BetaNeg => {
                let (rho, b, a, s) = (m.rho.hi, m.b.lo, m.a.hi, m.sigma.lo);
                let (vs, _) = endpoint_max(
                    |vs| half * vs * vs + lam(vs, rho, b, a, s),
                    m.varsigma.lo,
                    m.varsigma.hi,
                );
                (6, vs, rho, b, a, s, vec![("varsigma", vs)])
            }
        };
    WorstCase::new(
        regime,
        &[
            ("mu", mu),
            ("varsigma", vs),
            ("rho", rho),
            ("b", b),
            ("a", a),
            ("sigma", sigma),
        ],
    )
    .with_inner(&inner)
    .with_case(case)
}

fn rate_from(worst: &WorstCase, p: f64, beta: f64, lambda: f64) -> f64 {
    let mu = worst.get("mu").unwrap_or(f64::NAN);
    let vs = worst.get("varsigma").unwrap_or(f64::NAN);
    p * beta * mu - 0.5 * p * (1.0 - p) * beta * beta * vs * vs - lambda
}

/// Robust Vasicek growth rate.
pub fn vasicek_growth(model: &ShortRateBox, prob: &Problem, beta: f64) -> Result<GrowthPoint> {
    let worst = vasicek_worst_params(model, prob, beta)?;
    let g = |k: &str| worst.get(k).unwrap_or(f64::NAN);
    let lambda = vasicek_lambda(g("varsigma"), g("rho"), g("b"), g("a"), g("sigma"), beta, prob.p)?;
    let rate = rate_from(&worst, prob.p, beta, lambda);
    Ok(GrowthPoint::feasible(beta, rate, worst))
}

/// `b̲ − p|β|ς̄σ̄ − σ̄²/2`; the inverse-GARCH box condition holds iff positive.
pub fn invgarch_box_margin(model: &ShortRateBox, p: f64, beta: f64) -> f64 {
    let s = model.sigma.hi;
    model.b.lo - p * beta.abs() * model.varsigma.hi * s - 0.5 * s * s
}

fn invgarch_ba(model: &ShortRateBox, beta: f64) -> (f64, f64) {
    if beta >= 1.0 {
        (model.b.hi, model.a.lo)
    } else {
        (model.b.lo, model.a.hi)
    }
}

/// Infimum over `(ς, ρ, σ)` in the box of
/// `b* + pβςρσ − p(β−1)σ²/a* − σ²`; the convergence proviso holds iff positive.
///
/// The expression is bilinear in `(ς, ρ)` and quadratic in `σ`, so the
/// infimum sits at a `(ς, ρ)` corner and at a σ endpoint or the vertex.
pub fn invgarch_proviso_inf(model: &ShortRateBox, p: f64, beta: f64) -> f64 {
    let (b, a) = invgarch_ba(model, beta);
    let quad = -(p * (beta - 1.0) / a + 1.0);
    let mut inf = f64::INFINITY;
    for vs in [model.varsigma.lo, model.varsigma.hi] {
        for rho in [model.rho.lo, model.rho.hi] {
            let lin = p * beta * vs * rho;
            let g = |s: f64| b + lin * s + quad * s * s;
            let mut pts = vec![model.sigma.lo, model.sigma.hi];
            if quad > 0.0 {
                let v = -lin / (2.0 * quad);
                if model.sigma.contains(v) {
                    pts.push(v);
                }
            }
            for s in pts {
                inf = inf.min(g(s));
            }
        }
    }
    inf
}

/// Case-matched worst-case parameters for inverse GARCH.
pub fn invgarch_worst_params(model: &ShortRateBox, prob: &Problem, beta: f64) -> Result<WorstCase> {
    check_inputs(&ModelSpec::InvGarch(*model), prob, beta)?;
    let margin = invgarch_box_margin(model, prob.p, beta);
    if !(margin > 0.0) {
        return Err(Error::Infeasible {
            beta,
            note: format!(
                "b.lo - p|beta| varsigma.hi sigma.hi - sigma.hi²/2 = {margin} is not positive"
            ),
        });
    }
    Ok(invgarch_select(model, prob.p, beta))
}

fn invgarch_select(m: &ShortRateBox, p: f64, beta: f64) -> WorstCase {
    let half = 0.5 * p * (1.0 - p) * beta * beta;
    let (b, a) = invgarch_ba(m, beta);
    let lam = |vs: f64, rho: f64, s: f64| {
        invgarch_lambda(vs, rho, b, a, s, beta, p).unwrap_or(f64::NAN)
    };
    // F = −½p(1−p)β²ς² − λ is minimized, i.e. G = −F maximized.
    let obj = |vs: f64, rho: f64, s: f64| half * vs * vs + lam(vs, rho, s);
    let mu = mu_star(beta, m.mu);
    let regime = Regime::of(beta);
    let sr = (m.sigma.lo, m.sigma.hi);
    let vr = (m.varsigma.lo, m.varsigma.hi);
    let (case, vs, rho, sigma, inner): (u8, f64, f64, f64, Vec<(&str, f64)>) = match regime {
        Regime::BetaGe1 if m.rho.hi >= 0.0 => {
            let (vs, rho) = (m.varsigma.hi, m.rho.hi);
            let (s, _) = maximize_1d(|s| obj(vs, rho, s), sr.0, sr.1);
            (1, vs, rho, s, vec![("sigma", s)])
        }
        Regime::BetaGe1 => {
            let (rho, s) = (m.rho.hi, m.sigma.lo);
            let (vs, _) = maximize_1d(|vs| obj(vs, rho, s), vr.0, vr.1);
            (2, vs, rho, s, vec![("varsigma", vs)])
        }
        Regime::BetaIn01 if m.rho.lo < 0.0 => {
            let (vs, rho) = (m.varsigma.hi, m.rho.lo);
            let (s, _) = maximize_1d(|s| obj(vs, rho, s), sr.0, sr.1);
            (3, vs, rho, s, vec![("sigma", s)])
        }
        Regime::BetaIn01 => {
            let rho = m.rho.lo;
            let ((vs, s), _) = maximize_2d(|vs, s| obj(vs, rho, s), vr, sr);
            (4, vs, rho, s, vec![("varsigma", vs), ("sigma", s)])
        }
        Regime::BetaNeg if m.rho.hi >= 0.0 => {
            let (vs, rho) = (m.varsigma.hi, m.rho.hi);
            let (s, _) = maximize_1d(|s| obj(vs, rho, s), sr.0, sr.1);
            (5, vs, rho, s, vec![("sigma", s)])
        }
        Regime::BetaNeg => {
            let rho = m.rho.hi;
            let ((vs, s), _) = maximize_2d(|vs, s| obj(vs, rho, s), vr, sr);
            (6, vs, rho, s, vec![("varsigma", vs), ("sigma", s)])
        }
    };
    WorstCase::new(
        regime,
        &[
            ("mu", mu),
            ("varsigma", vs),
            ("rho", rho),
            ("b", b),
            ("a", a),
            ("sigma", sigma),
        ],
    )
    .with_inner(&inner)
    .with_case(case)
}

/// Robust inverse-GARCH growth rate.
pub fn invgarch_growth(model: &ShortRateBox, prob: &Problem, beta: f64) -> Result<GrowthPoint> {
    let worst = match invgarch_worst_params(model, prob, beta) {
        Ok(w) => w,
        Err(Error::Infeasible { note, .. }) => {
            let (b, a) = invgarch_ba(model, beta);
            let worst = WorstCase::new(
                Regime::of(beta),
                &[("mu", mu_star(beta, model.mu)), ("b", b), ("a", a)],
            );
            return Ok(GrowthPoint::infeasible(beta, worst, note));
        }
        Err(e) => return Err(e),
    };
    let inf = invgarch_proviso_inf(model, prob.p, beta);
    if !(inf > 0.0) {
        return Ok(GrowthPoint::infeasible(
            beta,
            worst,
            format!(
                "inf of b* + p beta varsigma rho sigma - p(beta-1)sigma²/a* - sigma² = {inf} is not positive"
            ),
        ));
    }
    let g = |k: &str| worst.get(k).unwrap_or(f64::NAN);
    let lambda = invgarch_lambda(g("varsigma"), g("rho"), g("b"), g("a"), g("sigma"), beta, prob.p)?;
    let rate = rate_from(&worst, prob.p, beta, lambda);
    Ok(GrowthPoint::feasible(beta, rate, worst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::grid_point;
    use crate::types::Interval;
    use proptest::prelude::*;

    fn vasicek_box() -> ShortRateBox {
        ShortRateBox {
            mu: Interval { lo: 0.06, hi: 0.1 },
            varsigma: Interval { lo: 0.08, hi: 0.25 },
            rho: Interval { lo: -0.9, hi: -0.5 },
            b: Interval { lo: 0.06, hi: 0.1 },
            a: Interval { lo: 6.0, hi: 9.0 },
            sigma: Interval { lo: 0.2, hi: 0.5 },
            r0: None,
        }
    }

    fn garch_box() -> ShortRateBox {
        ShortRateBox {
            mu: Interval { lo: 0.05, hi: 0.08 },
            varsigma: Interval { lo: 0.1, hi: 0.2 },
            rho: Interval { lo: -0.6, hi: 0.4 },
            b: Interval { lo: 0.5, hi: 0.7 },
            a: Interval { lo: 6.0, hi: 9.0 },
            sigma: Interval { lo: 0.2, hi: 0.4 },
            r0: None,
        }
    }

    fn prob() -> Problem {
        Problem::new(0.5, None, Interval { lo: -5.0, hi: 5.0 })
    }

    /// Brute-force max of `½p(1−p)β²ς² + λ` over a full grid of the box,
    /// with ρ and b at their endpoints.
    fn brute_force(
        m: &ShortRateBox,
        p: f64,
        beta: f64,
        ba: Option<(f64, f64)>,
        lam: impl Fn(f64, f64, f64, f64, f64) -> f64,
        n: usize,
    ) -> f64 {
        let half = 0.5 * p * (1.0 - p) * beta * beta;
        let mut best = f64::NEG_INFINITY;
        let a_pts: Vec<f64> = match ba {
            Some((_, a)) => vec![a],
            None => (0..n).map(|i| grid_point(m.a.lo, m.a.hi, n, i)).collect(),
        };
        let b_pts: Vec<f64> = match ba {
            Some((b, _)) => vec![b],
            None => vec![m.b.lo, m.b.hi],
        };
        for rho in [m.rho.lo, m.rho.hi] {
            for &b in &b_pts {
                for i in 0..n {
                    let vs = grid_point(m.varsigma.lo, m.varsigma.hi, n, i);
                    for &a in &a_pts {
                        for k in 0..n {
                            let s = grid_point(m.sigma.lo, m.sigma.hi, n, k);
                            best = best.max(half * vs * vs + lam(vs, rho, b, a, s));
                        }
                    }
                }
            }
        }
        best
    }

    #[test]
    fn vasicek_lambda_examples() {
        assert_eq!(vasicek_lambda(0.1, -0.7, 0.08, 7.0, 0.3, 1.0, 0.5).unwrap(), 0.0);
        let l = vasicek_lambda(0.1, -0.7, 0.08, 7.0, 0.3, 2.0, 0.5).unwrap();
        let hand = -0.5 * (0.5f64 * 0.3 / 7.0).powi(2) + 0.25 * 2.0 * 0.1 * -0.7 * 0.3 / 7.0
            + 0.08 * 0.5 / 7.0;
        assert!((l - hand).abs() < 1e-16);
        assert!((l - 0.003984).abs() < 1e-6);
        let l0 = vasicek_lambda(0.1, -0.7, 0.08, 7.0, 0.0, 2.0, 0.5).unwrap();
        assert!((l0 - 0.5 * 0.08 / 7.0).abs() < 1e-16);
        assert!(vasicek_lambda(0.1, -0.7, 0.08, 0.0, 0.3, 2.0, 0.5).is_err());
    }

    #[test]
    fn invgarch_lambda_examples() {
        assert_eq!(invgarch_lambda(0.1, -0.7, 0.09, 8.0, 0.3, 1.0, 0.5).unwrap(), 0.0);
        let l = invgarch_lambda(0.1, -0.7, 0.09, 8.0, 0.3, 2.0, 0.5).unwrap();
        let hand = -(0.5 / 16.0) * (0.5 / 8.0 + 1.0) * 0.09 + (0.25 * 2.0 * 0.1 * -0.7 / 8.0) * 0.3
            + 0.5 * 0.09 / 8.0;
        assert!((l - hand).abs() < 1e-16);
        assert!((l - 0.001324).abs() < 1e-6);
        let l0 = invgarch_lambda(0.1, -0.7, 0.09, 8.0, 0.0, 2.0, 0.5).unwrap();
        assert!((l0 - 0.5 * 0.09 / 8.0).abs() < 1e-16);
    }

    #[test]
    fn vasicek_case_two() {
        let w = vasicek_worst_params(&vasicek_box(), &prob(), 2.0).unwrap();
        assert_eq!(w.case, Some(2));
        assert_eq!(w.get("b"), Some(0.1));
        assert_eq!(w.get("rho"), Some(-0.5));
        assert_eq!(w.get("sigma"), Some(0.2));
        assert_eq!(w.get("mu"), Some(0.06));
    }

    #[test]
    fn vasicek_case_four_uses_endpoints() {
        let mut m = vasicek_box();
        m.rho = Interval { lo: 0.2, hi: 0.6 };
        let w = vasicek_worst_params(&m, &prob(), 0.5).unwrap();
        assert_eq!(w.case, Some(4));
        assert_eq!(w.get("a"), Some(9.0));
        assert_eq!(w.get("sigma"), Some(0.2));
        let half = 0.5 * 0.5 * 0.5 * 0.25;
        let q = |vs: f64| half * vs * vs + 0.25 * 0.5 * -0.5 * 0.2 * 0.2 * vs / 9.0;
        let expect = if q(0.25) > q(0.08) { 0.25 } else { 0.08 };
        assert_eq!(w.get("varsigma"), Some(expect));
    }

    #[test]
    fn vasicek_case_five() {
        let mut m = vasicek_box();
        m.rho = Interval { lo: -0.3, hi: 0.4 };
        let w = vasicek_worst_params(&m, &prob(), -1.0).unwrap();
        assert_eq!(w.case, Some(5));
        assert_eq!(w.get("varsigma"), Some(0.25));
        assert_eq!(w.get("rho"), Some(0.4));
        assert_eq!(w.get("b"), Some(0.06));
        assert_eq!(w.get("mu"), Some(0.1));
    }

    #[test]
    fn vasicek_selection_matches_full_box_brute_force() {
        let boxes = [
            vasicek_box(),
            ShortRateBox { rho: Interval { lo: 0.1, hi: 0.7 }, ..vasicek_box() },
            ShortRateBox { rho: Interval { lo: -0.4, hi: 0.3 }, ..vasicek_box() },
            ShortRateBox { a: Interval { lo: 0.3, hi: 2.0 }, sigma: Interval { lo: 0.05, hi: 0.6 }, ..vasicek_box() },
        ];
        for m in boxes {
            for beta in [-4.0, -1.0, -0.2, 0.0, 0.3, 0.7, 1.0, 1.5, 3.0, 5.0] {
                let w = vasicek_worst_params(&m, &prob(), beta).unwrap();
                let g = |k: &str| w.get(k).unwrap();
                let half = 0.5 * 0.5 * 0.5 * beta * beta;
                let got = half * g("varsigma").powi(2)
                    + vasicek_lambda(g("varsigma"), g("rho"), g("b"), g("a"), g("sigma"), beta, 0.5).unwrap();
                let brute = brute_force(&m, 0.5, beta, None, |vs, r, b, a, s| {
                    vasicek_lambda(vs, r, b, a, s, beta, 0.5).unwrap()
                }, 41);
                assert!(got >= brute - 1e-12, "box {m:?} beta {beta}: {got} < {brute}");
                assert!(got <= brute + 1e-4, "box {m:?} beta {beta}: {got} >> {brute}");
                for (name, iv) in ModelSpec::Vasicek(m).params() {
                    assert!(iv.contains(g(name)), "{name} outside box");
                }
            }
        }
    }

    #[test]
    fn vasicek_growth_at_one_on_degenerate_box() {
        let m = ShortRateBox {
            mu: Interval::point(0.07),
            varsigma: Interval::point(0.15),
            rho: Interval::point(-0.5),
            b: Interval::point(0.08),
            a: Interval::point(7.0),
            sigma: Interval::point(0.3),
            r0: None,
        };
        let g = vasicek_growth(&m, &prob(), 1.0).unwrap();
        let expect = 0.5 * 0.07 - 0.5 * 0.25 * 0.15 * 0.15;
        assert!((g.rate.unwrap() - expect).abs() < 1e-15);
    }

    #[test]
    fn vasicek_growth_at_zero() {
        let m = vasicek_box();
        let g = vasicek_growth(&m, &prob(), 0.0).unwrap();
        let w = &g.worst;
        assert_eq!(w.case, Some(3));
        let (a, s) = (w.get("a").unwrap(), w.get("sigma").unwrap());
        let hand = -(-0.5 * 0.06 / a - 0.5 * (0.5 * s / a).powi(2));
        assert!((g.rate.unwrap() - hand).abs() < 1e-15);
        // With β = 0 the ρ term vanishes; the worst is the smallest a, largest σ... or not,
        // depending on the trade-off, so check against a grid.
        let mut best = f64::INFINITY;
        for i in 0..=400 {
            let a = 6.0 + 3.0 * i as f64 / 400.0;
            for k in 0..=400 {
                let s = 0.2 + 0.3 * k as f64 / 400.0;
                best = best.min(0.5 * 0.06 / a + 0.5 * (0.5 * s / a).powi(2));
            }
        }
        assert!((g.rate.unwrap() - best).abs() < 1e-9);
    }

    #[test]
    fn invgarch_case_labels() {
        let mut m = garch_box();
        m.rho = Interval { lo: 0.1, hi: 0.4 };
        let w = invgarch_worst_params(&m, &prob(), 2.0).unwrap();
        assert_eq!(w.case, Some(1));
        assert_eq!((w.get("b"), w.get("a")), (Some(0.7), Some(6.0)));
        assert_eq!((w.get("varsigma"), w.get("rho")), (Some(0.2), Some(0.4)));

        m.rho = Interval { lo: -0.6, hi: -0.1 };
        let w = invgarch_worst_params(&m, &prob(), -1.0).unwrap();
        assert_eq!(w.case, Some(6));
        assert_eq!((w.get("b"), w.get("a"), w.get("rho")), (Some(0.5), Some(9.0), Some(-0.1)));

        let w = invgarch_worst_params(&m, &prob(), 0.5).unwrap();
        assert_eq!(w.case, Some(3));
        assert_eq!((w.get("varsigma"), w.get("rho")), (Some(0.2), Some(-0.6)));

        let w = invgarch_worst_params(&m, &prob(), 2.0).unwrap();
        assert_eq!(w.case, Some(2));
        assert_eq!(w.get("sigma"), Some(0.2));
    }

    #[test]
    fn invgarch_selection_matches_full_box_brute_force() {
        let boxes = [
            garch_box(),
            ShortRateBox { rho: Interval { lo: 0.1, hi: 0.7 }, ..garch_box() },
            ShortRateBox { rho: Interval { lo: -0.8, hi: -0.2 }, ..garch_box() },
            ShortRateBox { a: Interval { lo: 0.3, hi: 0.8 }, ..garch_box() },
        ];
        for m in boxes {
            for beta in [-3.0, -1.0, -0.2, 0.0, 0.3, 0.7, 1.0, 1.5, 3.0] {
                let w = invgarch_worst_params(&m, &prob(), beta).unwrap();
                let g = |k: &str| w.get(k).unwrap();
                let half = 0.5 * 0.5 * 0.5 * beta * beta;
                let got = half * g("varsigma").powi(2)
                    + invgarch_lambda(g("varsigma"), g("rho"), g("b"), g("a"), g("sigma"), beta, 0.5).unwrap();
                let ba = invgarch_ba(&m, beta);
                let brute = brute_force(&m, 0.5, beta, Some(ba), |vs, r, b, a, s| {
                    invgarch_lambda(vs, r, b, a, s, beta, 0.5).unwrap()
                }, 201);
                assert!(got >= brute - 1e-12, "beta {beta}: {got} < {brute}");
                assert!(got <= brute + 1e-5, "beta {beta}: {got} >> {brute}");
            }
        }
    }

    #[test]
    fn invgarch_flipped_objective_gives_same_selection() {
        // max of ½(1−p)β²ς² − (β−1)/(2a)(p(β−1)/a + 1)σ² + pβ(β−1)ρςσ/a equals
        // (1/p)·max of the G objective, so the argmax must coincide.
        for (rho, beta) in [((0.1, 0.5), 0.4), ((-0.6, -0.1), -2.0), ((0.0, 0.3), 0.9)] {
            let m = ShortRateBox { rho: Interval { lo: rho.0, hi: rho.1 }, ..garch_box() };
            let w = invgarch_worst_params(&m, &prob(), beta).unwrap();
            assert!(matches!(w.case, Some(4) | Some(6)));
            let (b, a) = invgarch_ba(&m, beta);
            let _ = b;
            let rho_s = w.get("rho").unwrap();
            let p = 0.5;
            let flipped = |vs: f64, s: f64| {
                0.5 * (1.0 - p) * beta * beta * vs * vs
                    - (beta - 1.0) / (2.0 * a) * (p * (beta - 1.0) / a + 1.0) * s * s
                    + p * beta * (beta - 1.0) * rho_s * vs * s / a
            };
            let n = 801;
            let (mut bv, mut bs, mut best) = (0.0, 0.0, f64::NEG_INFINITY);
            for i in 0..n {
                let vs = grid_point(m.varsigma.lo, m.varsigma.hi, n, i);
                for k in 0..n {
                    let s = grid_point(m.sigma.lo, m.sigma.hi, n, k);
                    let v = flipped(vs, s);
                    if v > best {
                        best = v;
                        bv = vs;
                        bs = s;
                    }
                }
            }
            let tol = 2.0 * (m.sigma.hi - m.sigma.lo) / (n - 1) as f64;
            assert!((w.get("varsigma").unwrap() - bv).abs() <= tol, "varsigma {w:?} vs {bv}");
            assert!((w.get("sigma").unwrap() - bs).abs() <= tol, "sigma {w:?} vs {bs}");
        }
    }

    #[test]
    fn invgarch_growth_at_one_and_zero() {
        let m = garch_box();
        let g1 = invgarch_growth(&m, &prob(), 1.0).unwrap();
        let vs = g1.worst.get("varsigma").unwrap();
        assert!((g1.rate.unwrap() - (0.5 * 0.05 - 0.125 * vs * vs)).abs() < 1e-15);

        let g0 = invgarch_growth(&m, &prob(), 0.0).unwrap();
        let (b, a) = (0.5, 9.0);
        let mut best = f64::INFINITY;
        for i in 0..=2000 {
            let s = 0.2 + 0.2 * i as f64 / 2000.0;
            best = best.min(0.5 * b / a - (0.5 / (2.0 * a)) * (1.0 - 0.5 / a) * s * s);
        }
        assert!((g0.rate.unwrap() - best).abs() < 1e-12);
        let s = g0.worst.get("sigma").unwrap();
        // p(β−1) = −0.5 at β = 0.
        let pb = -0.5;
        let hand = -pb * b / a + (pb / (2.0 * a)) * ((pb / a) + 1.0) * s * s;
        assert!((g0.rate.unwrap() - hand).abs() < 1e-15);
    }

    #[test]
    fn invgarch_growth_degenerate_case_one() {
        let m = ShortRateBox {
            mu: Interval::point(0.07),
            varsigma: Interval::point(0.1),
            rho: Interval::point(0.2),
            b: Interval::point(0.09),
            a: Interval::point(8.0),
            sigma: Interval::point(0.3),
            r0: None,
        };
        let g = invgarch_growth(&m, &prob(), 2.0).unwrap();
        let lam = invgarch_lambda(0.1, 0.2, 0.09, 8.0, 0.3, 2.0, 0.5).unwrap();
        let expect = 2.0 * 0.5 * 0.07 - 0.5 * 0.25 * 4.0 * 0.01 - lam;
        assert!((g.rate.unwrap() - expect).abs() < 1e-15);
    }

    #[test]
    fn invgarch_box_condition_is_checked_per_beta() {
        let mut m = garch_box();
        m.b = Interval { lo: 0.25, hi: 0.3 };
        assert!(matches!(
            invgarch_worst_params(&m, &prob(), 5.0),
            Err(Error::Infeasible { .. })
        ));
        let g = invgarch_growth(&m, &prob(), 5.0).unwrap();
        assert!(!g.feasible && g.rate.is_none());
        assert!(invgarch_growth(&m, &prob(), 0.5).unwrap().feasible);
    }

    proptest! {
        #[test]
        fn invgarch_proviso_inf_is_exact(beta in -3.0f64..3.0, rlo in -1.0f64..0.5, dr in 0.0f64..0.5) {
            let m = ShortRateBox { rho: Interval { lo: rlo, hi: (rlo + dr).min(1.0) }, ..garch_box() };
            let inf = invgarch_proviso_inf(&m, 0.5, beta);
            let (b, a) = invgarch_ba(&m, beta);
            let n = 60;
            let mut brute = f64::INFINITY;
            for i in 0..n { for j in 0..n { for k in 0..n {
                let vs = grid_point(m.varsigma.lo, m.varsigma.hi, n, i);
                let rho = grid_point(m.rho.lo, m.rho.hi, n, j);
                let s = grid_point(m.sigma.lo, m.sigma.hi, n, k);
                brute = brute.min(b + 0.5 * beta * vs * rho * s - 0.5 * (beta - 1.0) * s * s / a - s * s);
            }}}
            prop_assert!(inf <= brute + 1e-12);
            prop_assert!(inf >= brute - 1e-3);
        }

        #[test]
        fn worst_components_lie_in_box(beta in -5.0f64..5.0, rlo in -1.0f64..0.9, dr in 0.0f64..1.0) {
            let m = ShortRateBox { rho: Interval { lo: rlo, hi: (rlo + dr).min(1.0) }, ..vasicek_box() };
            let w = vasicek_worst_params(&m, &prob(), beta).unwrap();
            for (name, iv) in ModelSpec::Vasicek(m).params() {
                prop_assert!(iv.contains(w.get(name).unwrap()));
            }
        }
    }
}
