use serde::Serialize;

use super::moser::moser_constants;
use super::BoundContext;
use crate::error::{Error, Result};
use crate::numerics::ball_volume;
use crate::problem::{growth_constant_near_zero, ProblemSpec};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyBounds {
    /// K = (θ−2)²/(4θ²)·(1 − α|Ω|^{2/N}/S).
    pub k_const: f64,
    pub c_ar: f64,
    pub d: f64,
    pub ball_volume: f64,
    /// Bound on ‖u‖².
    pub norm_bound: f64,
    /// Bound on |u|_{2*}.
    pub hat_c: f64,
    pub beta: Option<f64>,
    pub rho: Option<f64>,
    pub level: Option<f64>,
}

pub fn energy_bounds(spec: &ProblemSpec, d: f64, ctx: &BoundContext, c_ar: f64) -> Result<EnergyBounds> {
    let theta = spec.theta;
    if !(theta > 2.0) {
        return Err(Error::domain(format!("theta must exceed 2, got {theta}")));
    }
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::domain(format!("d must be finite and > 0, got {d}")));
    }
    let n = spec.dimension as f64;
    let defect = ctx.alpha * ctx.omega_measure.powf(2.0 / n);
    if !(ctx.sobolev > defect) {
        return Err(Error::Hypothesis {
            hypothesis: "V1",
            detail: format!("S = {} does not exceed alpha |Omega|^(2/N) = {defect}", ctx.sobolev),
        });
    }
    let k_const = (theta - 2.0).powi(2) / (4.0 * theta * theta) * (1.0 - defect / ctx.sobolev);
    let ball = ball_volume(spec.dimension, spec.radius);
    let top = d + c_ar * ball;
    let norm_bound = top / k_const;
    let hat_c = (top / (k_const * (ctx.sobolev - defect))).sqrt();
    Ok(EnergyBounds {
        k_const,
        c_ar,
        d,
        ball_volume: ball,
        norm_bound,
        hat_c,
        beta: None,
        rho: None,
        level: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Thresholds {
    pub exponential: bool,
    pub k: f64,
    pub hat_c: f64,
    /// M̂: the L∞ bound evaluated at |u|_{2*} = Ĉ.
    pub m_hat: f64,
    /// Growth constant C near zero on [0, M̂].
    pub growth: f64,
    pub radius: f64,
    /// Standard mode: k·C·M̂^{q−2}·R^{(N−2)(q−2)}. Exponential mode: k·C.
    pub lambda_star: f64,
    /// C·M̂^{q−2}; present in standard mode when S₀ = 0.
    pub lambda_tilde_star: Option<f64>,
    /// â/(M̂ R^{N−2})^q in exponential mode.
    pub mu_star: Option<f64>,
}

pub fn thresholds(spec: &ProblemSpec, bounds: &EnergyBounds, ctx: &BoundContext) -> Result<Thresholds> {
    let m_hat = moser_constants(spec, ctx, bounds.hat_c)?.m;
    let growth = growth_constant_near_zero(spec, m_hat)?;
    let k = 2.0 * spec.theta / (spec.theta - 2.0);
    let r = spec.radius;
    let n = spec.dimension as f64;
    let (lambda_star, lambda_tilde_star, mu_star) = match spec.exponential {
        None => {
            let base = growth * m_hat.powf(spec.q - 2.0);
            let star = k * base * r.powf(spec.decay_exponent());
            (star, (spec.s0 == 0.0).then_some(base), None)
        }
        Some(e) => {
            let mu = 0.5 * e.a / (m_hat * r.powf(n - 2.0)).powf(spec.q);
            (k * growth, None, Some(mu))
        }
    };
    Ok(Thresholds {
        exponential: spec.exponential.is_some(),
        k,
        hat_c: bounds.hat_c,
        m_hat,
        growth,
        radius: r,
        lambda_star,
        lambda_tilde_star,
        mu_star,
    })
}
