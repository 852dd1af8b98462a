//! Path kernels. Each returns `L_t^p` at the requested step counts, with
//! `L_0 = X_0 = 1` and step size `h`.
//!
//! Terms carrying a `β` or `β(β−1)` factor are skipped when that factor is
//! zero, so degenerate states (a truncated factor at zero) cannot turn an
//! exact `0 · ∞` into NaN.

use super::rng::NormalStream;
use crate::types::ModelSpec;

/// One fixed parameter vector ready for simulation.
pub(crate) struct PathSpec {
    pub model: ModelSpec,
    pub r: f64,
    pub r0: f64,
    pub p: f64,
    pub beta: f64,
}

fn at(model: &ModelSpec, name: &str) -> f64 {
    model
        .params()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, iv)| iv.lo)
        .unwrap_or(f64::NAN)
}

/// Simulates one path and records `L^p` at each entry of `record`
/// (increasing step counts; the last is the total number of steps).
pub(crate) fn simulate_path(spec: &PathSpec, z: &mut NormalStream, h: f64, record: &[usize]) -> Vec<f64> {
    let mut out = Vec::with_capacity(record.len());
    let n_steps = *record.last().unwrap_or(&0);
    let m = &spec.model;
    let (p, beta, r) = (spec.p, spec.beta, spec.r);
    let bb1 = beta * (beta - 1.0);
    let sqh = h.sqrt();
    let mut next_rec = 0;
    let mut push = |step: usize, log_lp: f64, out: &mut Vec<f64>| {
        while next_rec < record.len() && record[next_rec] == step {
            out.push(log_lp.exp());
            next_rec += 1;
        }
    };
    match m {
        ModelSpec::Gbm(_) => {
            let (mu, sigma) = (at(m, "mu"), at(m, "sigma"));
            let drift = (beta * mu - (beta - 1.0) * r - 0.5 * beta * beta * sigma * sigma) * h;
            let vol = beta * sigma * sqh;
            let mut log_l = 0.0;
            for step in 1..=n_steps {
                let dz = z.draw();
                log_l += drift;
                if beta != 0.0 {
                    log_l += vol * dz;
                }
                push(step, p * log_l, &mut out);
            }
        }
        ModelSpec::Cir(_) => {
            let (b, a, sigma) = (at(m, "b"), at(m, "a"), at(m, "sigma"));
            let (mut x, mut int_inv) = (1.0f64, 0.0f64);
            for step in 1..=n_steps {
                let xp = x.max(0.0);
                int_inv += h / xp;
                x += (b - a * xp) * h + sigma * xp.sqrt() * sqh * z.draw();
                let t = step as f64 * h;
                let mut log_lp = -p * (beta - 1.0) * r * t;
                if beta != 0.0 {
                    log_lp += p * beta * x.max(0.0).ln();
                }
                if bb1 != 0.0 {
                    log_lp -= 0.5 * p * bb1 * sigma * sigma * int_inv;
                }
                push(step, log_lp, &mut out);
            }
        }
        ModelSpec::ThreeHalves(_) => {
            // Z = 1/X is CIR: dZ = ((a + σ²) − bZ)dt − σ√Z dB.
            let (b, a, sigma) = (at(m, "b"), at(m, "a"), at(m, "sigma"));
            let (mut zz, mut int_x) = (1.0f64, 0.0f64);
            for step in 1..=n_steps {
                let zp = zz.max(0.0);
                int_x += h / zp;
                zz += ((a + sigma * sigma) - b * zp) * h - sigma * zp.sqrt() * sqh * z.draw();
                let t = step as f64 * h;
                let mut log_lp = -p * (beta - 1.0) * r * t;
                if beta != 0.0 {
                    log_lp -= p * beta * zz.max(0.0).ln();
                }
                if bb1 != 0.0 {
                    log_lp -= 0.5 * p * bb1 * sigma * sigma * int_x;
                }
                push(step, log_lp, &mut out);
            }
        }
        ModelSpec::Heston(_) | ModelSpec::Sv32(_) => {
            let is_32 = matches!(m, ModelSpec::Sv32(_));
            let (mu, rho, b, a, sigma) =
                (at(m, "mu"), at(m, "rho"), at(m, "b"), at(m, "a"), at(m, "sigma"));
            let perp = (1.0 - rho * rho).max(0.0).sqrt();
            // Heston simulates ν; 3/2 volatility simulates Z = 1/ν, a CIR process.
            let mut state = if is_32 { (a + sigma * sigma) / b } else { b / a };
            let mut log_l = 0.0;
            for step in 1..=n_steps {
                let (z1, z2) = (z.draw(), z.draw());
                let sp = state.max(0.0);
                let nu = if is_32 { 1.0 / sp } else { sp };
                log_l += (beta * mu - (beta - 1.0) * r) * h;
                if beta != 0.0 {
                    log_l += -0.5 * beta * beta * nu * h
                        + beta * nu.sqrt() * sqh * (rho * z1 + perp * z2);
                }
                if is_32 {
                    state += ((a + sigma * sigma) - b * sp) * h - sigma * sp.sqrt() * sqh * z1;
                } else {
                    state += (b - a * sp) * h + sigma * sp.sqrt() * sqh * z1;
                }
                push(step, p * log_l, &mut out);
            }
        }
        ModelSpec::Vasicek(_) | ModelSpec::InvGarch(_) => {
            let is_garch = matches!(m, ModelSpec::InvGarch(_));
            let (mu, vs, rho, b, a, sigma) = (
                at(m, "mu"),
                at(m, "varsigma"),
                at(m, "rho"),
                at(m, "b"),
                at(m, "a"),
                at(m, "sigma"),
            );
            let perp = (1.0 - rho * rho).max(0.0).sqrt();
            let decay = (-a * h).exp();
            let ou_sd = sigma * ((1.0 - (-2.0 * a * h).exp()) / (2.0 * a)).sqrt();
            let mut rate = spec.r0;
            let mut inv = 1.0 / spec.r0;
            let (mut int_r, mut w) = (0.0f64, 0.0f64);
            let base = beta * mu - 0.5 * beta * beta * vs * vs;
            for step in 1..=n_steps {
                let (z1, z2) = (z.draw(), z.draw());
                let next = if is_garch {
                    // Z = 1/r solves dZ = ((σ² − b)Z + a)dt − σZ dB exactly given G.
                    let e = (-((b - 0.5 * sigma * sigma) * h + sigma * sqh * z1)).exp();
                    inv = e * inv + a * 0.5 * h * (e + 1.0);
                    1.0 / inv
                } else {
                    rate * decay + (b / a) * (1.0 - decay) + ou_sd * z1
                };
                int_r += 0.5 * (rate + next) * h;
                rate = next;
                w += sqh * (rho * z1 + perp * z2);
                let t = step as f64 * h;
                let mut log_l = base * t - (beta - 1.0) * int_r;
                if beta != 0.0 {
                    log_l += beta * vs * w;
                }
                push(step, p * log_l, &mut out);
            }
        }
    }
    out
}
