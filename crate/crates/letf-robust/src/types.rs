//! Domain types: intervals, per-family parameter boxes, result records and
//! the validation report.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// A closed interval `[lo, hi]`. Degenerate intervals stand for known parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::Validation(vec![format!("interval [{lo}, {hi}] is not finite")]));
        }
        if lo > hi {
            return Err(Error::Validation(vec![format!("interval [{lo}, {hi}] has lo > hi")]));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Point at fraction `t` of the way from `lo` to `hi`.
    pub fn lerp(&self, t: f64) -> f64 {
        if t >= 1.0 {
            self.hi
        } else {
            self.lo + t * (self.hi - self.lo)
        }
    }

    fn is_ordered(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite() && self.lo <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Global problem parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Problem {
    /// Utility power, `0 < p < 1`.
    pub p: f64,
    /// Constant short rate; absent for the stochastic-rate families.
    pub r: Option<f64>,
    /// Admissible leverage ratios `[β̲, β̄]` with `β̲ < 0` and `β̄ > 1`.
    pub beta_range: Interval,
}

impl Problem {
    pub fn new(p: f64, r: Option<f64>, beta_range: Interval) -> Self {
        Self { p, r, beta_range }
    }

    /// The constant short rate, or a validation error when it is missing.
    pub fn rate(&self) -> Result<f64> {
        self.r
            .ok_or_else(|| Error::Validation(vec!["r is required for this model".into()]))
    }
}

/// Geometric Brownian motion reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GbmBox {
    pub mu: Interval,
    pub sigma: Interval,
}

/// One-factor reference with level `b`, speed `a` and volatility `sigma`
/// (CIR and 3/2 families).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorBox {
    pub b: Interval,
    pub a: Interval,
    pub sigma: Interval,
}

/// Stochastic-volatility reference (Heston and 3/2 volatility).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StochVolBox {
    pub mu: Interval,
    pub rho: Interval,
    pub b: Interval,
    pub a: Interval,
    pub sigma: Interval,
}

/// Stochastic short rate with a lognormal reference (Vasicek and inverse GARCH).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShortRateBox {
    pub mu: Interval,
    pub varsigma: Interval,
    pub rho: Interval,
    pub b: Interval,
    pub a: Interval,
    pub sigma: Interval,
    /// Initial short rate; only finite-horizon simulations depend on it.
    pub r0: Option<f64>,
}

impl ShortRateBox {
    /// `r0`, or the midpoint of `b̲/ā` and `b̄/a̲` when unset.
    pub fn r0_or_default(&self) -> f64 {
        self.r0
            .unwrap_or(0.5 * (self.b.lo / self.a.hi + self.b.hi / self.a.lo))
    }
}

/// The seven model families with their uncertainty boxes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ModelSpec {
    Gbm(GbmBox),
    Cir(FactorBox),
    ThreeHalves(FactorBox),
    Heston(StochVolBox),
    Sv32(StochVolBox),
    Vasicek(ShortRateBox),
    InvGarch(ShortRateBox),
}

/// Family names accepted by [`ModelSpec::from_params`].
pub const FAMILIES: [&str; 7] = [
    "gbm",
    "cir",
    "three_halves",
    "heston",
    "sv32",
    "vasicek",
    "inv_garch",
];

impl ModelSpec {
    pub fn family(&self) -> &'static str {
        match self {
            ModelSpec::Gbm(_) => "gbm",
            ModelSpec::Cir(_) => "cir",
            ModelSpec::ThreeHalves(_) => "three_halves",
            ModelSpec::Heston(_) => "heston",
            ModelSpec::Sv32(_) => "sv32",
            ModelSpec::Vasicek(_) => "vasicek",
            ModelSpec::InvGarch(_) => "inv_garch",
        }
    }

    /// Interval parameter names of a family, in canonical order.
    pub fn param_names(family: &str) -> Option<&'static [&'static str]> {
        Some(match family {
            "gbm" => &["mu", "sigma"],
            "cir" | "three_halves" => &["b", "a", "sigma"],
            "heston" | "sv32" => &["mu", "rho", "b", "a", "sigma"],
            "vasicek" | "inv_garch" => &["mu", "varsigma", "rho", "b", "a", "sigma"],
            _ => return None,
        })
    }

    /// Named interval parameters in canonical order.
    pub fn params(&self) -> Vec<(&'static str, Interval)> {
        match self {
            ModelSpec::Gbm(m) => vec![("mu", m.mu), ("sigma", m.sigma)],
            ModelSpec::Cir(m) | ModelSpec::ThreeHalves(m) => {
                vec![("b", m.b), ("a", m.a), ("sigma", m.sigma)]
            }
            ModelSpec::Heston(m) | ModelSpec::Sv32(m) => vec![
                ("mu", m.mu),
                ("rho", m.rho),
                ("b", m.b),
                ("a", m.a),
                ("sigma", m.sigma),
            ],
            ModelSpec::Vasicek(m) | ModelSpec::InvGarch(m) => vec![
                ("mu", m.mu),
                ("varsigma", m.varsigma),
                ("rho", m.rho),
                ("b", m.b),
                ("a", m.a),
                ("sigma", m.sigma),
            ],
        }
    }

    /// Initial short rate for the stochastic-rate families.
    pub fn r0(&self) -> Option<f64> {
        match self {
            ModelSpec::Vasicek(m) | ModelSpec::InvGarch(m) => m.r0,
            _ => None,
        }
    }

    /// Builds a model from its family name and named intervals. Missing
    /// parameters are reported together.
    pub fn from_params(
        family: &str,
        params: &IndexMap<String, Interval>,
        r0: Option<f64>,
    ) -> Result<Self> {
        let names = Self::param_names(family).ok_or_else(|| {
            Error::Validation(vec![format!(
                "unknown model family '{family}' (expected one of {})",
                FAMILIES.join(", ")
            )])
        })?;
        let missing: Vec<String> = names
            .iter()
            .filter(|n| !params.contains_key(**n))
            .map(|n| format!("model.{n} is missing"))
            .collect();
        if !missing.is_empty() {
            return Err(Error::Validation(missing));
        }
        let unknown: Vec<String> = params
            .keys()
            .filter(|k| !names.contains(&k.as_str()))
            .map(|k| format!("model.{k} is not a {family} parameter"))
            .collect();
        if !unknown.is_empty() {
            return Err(Error::Validation(unknown));
        }
        let g = |n: &str| params[n];
        let sv = || StochVolBox {
            mu: g("mu"),
            rho: g("rho"),
            b: g("b"),
            a: g("a"),
            sigma: g("sigma"),
        };
        let sr = || ShortRateBox {
            mu: g("mu"),
            varsigma: g("varsigma"),
            rho: g("rho"),
            b: g("b"),
            a: g("a"),
            sigma: g("sigma"),
            r0,
        };
        let fb = || FactorBox {
            b: g("b"),
            a: g("a"),
            sigma: g("sigma"),
        };
        Ok(match family {
            "gbm" => ModelSpec::Gbm(GbmBox {
                mu: g("mu"),
                sigma: g("sigma"),
            }),
            "cir" => ModelSpec::Cir(fb()),
            "three_halves" => ModelSpec::ThreeHalves(fb()),
            "heston" => ModelSpec::Heston(sv()),
            "sv32" => ModelSpec::Sv32(sv()),
            "vasicek" => ModelSpec::Vasicek(sr()),
            _ => ModelSpec::InvGarch(sr()),
        })
    }

    /// Copy with the named parameter replaced.
    pub fn with_param(&self, name: &str, value: Interval) -> Result<Self> {
        let mut params: IndexMap<String, Interval> = self
            .params()
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        match params.get_mut(name) {
            Some(slot) => *slot = value,
            None => {
                return Err(Error::Validation(vec![format!(
                    "model.{name} is not a {} parameter",
                    self.family()
                )]))
            }
        }
        Self::from_params(self.family(), &params, self.r0())
    }

    /// Copy with every parameter named in `worst` pinned to its value.
    pub fn pinned(&self, worst: &WorstCase) -> Self {
        let mut out = *self;
        for (name, value) in &worst.params {
            if let Ok(m) = out.with_param(name, Interval::point(*value)) {
                out = m;
            }
        }
        out
    }

    /// True when every interval is a single point.
    pub fn is_degenerate(&self) -> bool {
        self.params().iter().all(|(_, iv)| iv.is_degenerate())
    }

    /// True for the families driven by a constant short rate.
    pub fn needs_constant_rate(&self) -> bool {
        !matches!(self, ModelSpec::Vasicek(_) | ModelSpec::InvGarch(_))
    }

    /// Standing assumptions of the family that fail for this box.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (name, iv) in self.params() {
            if !iv.is_ordered() {
                out.push(Violation::error(format!("{name}.lo <= {name}.hi fails")));
            }
        }
        if !out.is_empty() {
            return out;
        }
        let mut need = |ok: bool, text: &str| {
            if !ok {
                out.push(Violation::error(format!("{text} fails")));
            }
        };
        match self {
            ModelSpec::Gbm(m) => {
                need(m.mu.lo > 0.0, "mu.lo > 0");
                need(m.sigma.lo > 0.0, "sigma.lo > 0");
            }
            ModelSpec::Cir(m) => {
                need(m.a.lo > 0.0, "a.lo > 0");
                need(m.sigma.lo > 0.0, "sigma.lo > 0");
                need(m.b.lo > m.sigma.hi * m.sigma.hi, "b.lo > sigma.hi²");
            }
            ModelSpec::ThreeHalves(m) => {
                need(m.b.lo > 0.0, "b.lo > 0");
                need(m.a.lo > 0.0, "a.lo > 0");
                need(m.sigma.lo > 0.0, "sigma.lo > 0");
            }
            ModelSpec::Heston(m) => {
                need(m.mu.lo > 0.0, "mu.lo > 0");
                need(m.a.lo > 0.0, "a.lo > 0");
                need(m.sigma.lo > 0.0, "sigma.lo > 0");
                need(m.rho.lo >= -1.0 && m.rho.hi <= 1.0, "-1 <= rho.lo <= rho.hi <= 1");
                if !(m.b.lo > 0.5 * m.sigma.hi * m.sigma.hi) {
                    out.push(Violation::warning("b.lo > sigma.hi²/2 fails"));
                }
                if !(m.b.lo > 0.0) {
                    out.push(Violation::error("b.lo > 0 fails"));
                }
            }
            ModelSpec::Sv32(m) => {
                need(m.mu.lo > 0.0, "mu.lo > 0");
                need(m.b.lo > 0.0, "b.lo > 0");
                need(m.sigma.lo > 0.0, "sigma.lo > 0");
                need(m.a.lo > -0.5 * m.sigma.lo * m.sigma.lo, "a.lo > -sigma.lo²/2");
                need(m.rho.lo >= -1.0 && m.rho.hi <= 1.0, "-1 <= rho.lo <= rho.hi <= 1");
            }
            ModelSpec::Vasicek(m) => {
                need(m.mu.lo > 0.0, "mu.lo > 0");
                need(m.varsigma.lo > 0.0, "varsigma.lo > 0");
                need(m.b.lo > 0.0, "b.lo > 0");
                need(m.a.lo > 0.0, "a.lo > 0");
                need(m.sigma.lo > 0.0, "sigma.lo > 0");
                need(m.rho.lo >= -1.0 && m.rho.hi <= 1.0, "-1 <= rho.lo <= rho.hi <= 1");
            }
            ModelSpec::InvGarch(m) => {
                need(m.mu.lo > 0.0, "mu.lo > 0");
                need(m.varsigma.lo > 0.0, "varsigma.lo > 0");
                need(m.a.lo > 0.0, "a.lo > 0");
                need(m.sigma.lo > 0.0, "sigma.lo > 0");
                need(m.rho.lo >= -1.0 && m.rho.hi <= 1.0, "-1 <= rho.lo <= rho.hi <= 1");
            }
        }
        out
    }

    /// Returns the model if no error-severity assumption fails.
    pub fn checked(self) -> Result<Self> {
        let errors: Vec<String> = self
            .violations()
            .into_iter()
            .filter(|v| v.severity == Severity::Error)
            .map(|v| v.message)
            .collect();
        if errors.is_empty() {
            Ok(self)
        } else {
            Err(Error::Validation(errors))
        }
    }
}

/// How serious a failed assumption is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    /// The model or problem is rejected.
    Error,
    /// Reported but accepted; the closed forms remain well defined.
    Warning,
}

/// One failed constraint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub message: String,
    pub severity: Severity,
}

impl Violation {
    pub fn error(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            severity: Severity::Error,
        }
    }

    pub fn warning(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            severity: Severity::Warning,
        }
    }
}

/// Outcome of [`validate`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn messages(&self) -> Vec<&str> {
        self.violations.iter().map(|v| v.message.as_str()).collect()
    }

    /// Error-severity messages only.
    pub fn errors(&self) -> Vec<String> {
        self.violations
            .iter()
            .filter(|v| v.severity == Severity::Error)
            .map(|v| v.message.clone())
            .collect()
    }

    /// `Err` when any error-severity violation is present.
    pub fn into_result(self) -> Result<()> {
        let errors = self.errors();
        if errors.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(errors))
        }
    }
}

/// Constraints of a problem on its own.
pub fn problem_violations(prob: &Problem) -> Vec<Violation> {
    let mut out = Vec::new();
    if !(prob.p > 0.0 && prob.p < 1.0) {
        out.push(Violation::error("0 < p < 1 fails"));
    }
    if !prob.beta_range.is_ordered() {
        out.push(Violation::error("beta_range.lo <= beta_range.hi fails"));
    } else {
        if !(prob.beta_range.lo < 0.0) {
            out.push(Violation::error("beta_range.lo < 0 fails"));
        }
        if !(prob.beta_range.hi > 1.0) {
            out.push(Violation::error("beta_range.hi > 1 fails"));
        }
    }
    if let Some(r) = prob.r {
        if !r.is_finite() {
            out.push(Violation::error("r is finite fails"));
        }
    }
    out
}

/// Every standing assumption of `model` and `prob` that fails.
pub fn validate(model: &ModelSpec, prob: &Problem) -> ValidationReport {
    let mut violations = problem_violations(prob);
    if model.needs_constant_rate() && prob.r.is_none() {
        violations.push(Violation::error("r is required for this model"));
    }
    violations.extend(model.violations());
    ValidationReport { violations }
}

/// β regime selecting the worst-case branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    BetaGe1,
    BetaIn01,
    BetaNeg,
}

impl Regime {
    /// Half-open convention: `β = 0` is in `[0, 1)`, `β = 1` in `[1, β̄]`.
    pub fn of(beta: f64) -> Self {
        if beta >= 1.0 {
            Regime::BetaGe1
        } else if beta >= 0.0 {
            Regime::BetaIn01
        } else {
            Regime::BetaNeg
        }
    }
}

/// Selected worst-case parameters for one β.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorstCase {
    pub params: IndexMap<String, f64>,
    /// Components produced by an inner optimization.
    pub inner_argmax: Option<IndexMap<String, f64>>,
    pub regime: Regime,
    /// Sign-of-ρ subcase (1 to 6) for the stochastic-rate families.
    pub case: Option<u8>,
}

impl WorstCase {
    pub fn new(regime: Regime, params: &[(&str, f64)]) -> Self {
        Self {
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            inner_argmax: None,
            regime,
            case: None,
        }
    }

    pub fn with_inner(mut self, inner: &[(&str, f64)]) -> Self {
        self.inner_argmax = Some(inner.iter().map(|(k, v)| (k.to_string(), *v)).collect());
        self
    }

    pub fn with_case(mut self, case: u8) -> Self {
        self.case = Some(case);
        self
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.params.get(name).copied()
    }
}

/// Robust rate at one β.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthPoint {
    pub beta: f64,
    /// `None` exactly when `feasible` is false.
    pub rate: Option<f64>,
    pub worst: WorstCase,
    pub feasible: bool,
    pub feasibility_note: String,
}

impl GrowthPoint {
    pub fn feasible(beta: f64, rate: f64, worst: WorstCase) -> Self {
        Self {
            beta,
            rate: Some(rate),
            worst,
            feasible: true,
            feasibility_note: String::new(),
        }
    }

    pub fn infeasible(beta: f64, worst: WorstCase, note: impl Into<String>) -> Self {
        Self {
            beta,
            rate: None,
            worst,
            feasible: false,
            feasibility_note: note.into(),
        }
    }
}

/// How an optimal leverage was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    ClosedForm,
    CandidateTable,
    CertifiedGrid,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::ClosedForm => "ClosedForm",
            Method::CandidateTable => "CandidateTable",
            Method::CertifiedGrid => "CertifiedGrid",
        };
        f.write_str(s)
    }
}

/// A β at which the robust rate was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub beta: f64,
    pub rate: f64,
}

/// Mesh parameters of a certified grid search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifiedGridConfig {
    pub epsilon: f64,
    pub mesh: f64,
    pub lipschitz_m: f64,
    pub beta_range: Interval,
}

/// Optimal leverage ratio and the evidence behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalLeverage {
    pub beta_star: f64,
    pub rate_star: f64,
    pub method: Method,
    /// Certified accuracy in Λ; zero for closed forms.
    pub error_bound: f64,
    pub candidates: Vec<Candidate>,
    /// Evaluation points skipped because a side condition failed.
    pub skipped: Vec<f64>,
    pub grid: Option<CertifiedGridConfig>,
}

/// Picks the best candidate; ties go to the smaller β.
pub fn best_candidate(candidates: &[Candidate]) -> Option<Candidate> {
    let mut best: Option<Candidate> = None;
    for c in candidates {
        best = match best {
            None => Some(*c),
            Some(b) if c.rate > b.rate || (c.rate == b.rate && c.beta < b.beta) => Some(*c),
            keep => keep,
        };
    }
    best
}

/// Discretization used by the Monte-Carlo oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SimScheme {
    ExactGbm,
    FullTruncationEuler,
    ExactOu,
    LogEulerInverse,
}

impl SimScheme {
    /// The scheme matching a model family.
    pub fn for_model(model: &ModelSpec) -> Self {
        match model {
            ModelSpec::Gbm(_) => SimScheme::ExactGbm,
            ModelSpec::Cir(_)
            | ModelSpec::ThreeHalves(_)
            | ModelSpec::Heston(_)
            | ModelSpec::Sv32(_) => SimScheme::FullTruncationEuler,
            ModelSpec::Vasicek(_) => SimScheme::ExactOu,
            ModelSpec::InvGarch(_) => SimScheme::LogEulerInverse,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "ExactGbm" | "exact_gbm" => SimScheme::ExactGbm,
            "FullTruncationEuler" | "full_truncation_euler" => SimScheme::FullTruncationEuler,
            "ExactOu" | "exact_ou" => SimScheme::ExactOu,
            "LogEulerInverse" | "log_euler_inverse" => SimScheme::LogEulerInverse,
            _ => return None,
        })
    }
}

impl fmt::Display for SimScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SimScheme::ExactGbm => "ExactGbm",
            SimScheme::FullTruncationEuler => "FullTruncationEuler",
            SimScheme::ExactOu => "ExactOu",
            SimScheme::LogEulerInverse => "LogEulerInverse",
        };
        f.write_str(s)
    }
}

/// Monte-Carlo estimate of `(1/T) log E[L_T^p]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub horizon_t: f64,
    pub n_paths: usize,
    pub dt: f64,
    pub scheme: SimScheme,
    pub seed: u64,
    pub antithetic: bool,
    /// `log_mean / horizon_t`.
    pub estimate: f64,
    /// Sample mean of `L_T^p`.
    pub mean: f64,
    /// Standard error of `mean`.
    pub std_err_of_mean: f64,
    /// `ln(mean)`.
    pub log_mean: f64,
    /// Delta-method standard error of `estimate`.
    pub rate_std_err: f64,
    pub non_finite_paths: usize,
    pub max_path_value: f64,
}
