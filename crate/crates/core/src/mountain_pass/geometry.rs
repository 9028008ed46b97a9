//! Mountain-pass geometry constants: the empirical (β, ρ) pair and the
//! upper bound d for the minimax level.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{ball_volume, logspace};
use crate::problem::hypotheses::validate_lower_bound;
use crate::problem::ProblemSpec;
use crate::radial::{DiscreteRadialFunction, Energy, RadialGrid};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaRho {
    pub beta: f64,
    pub rho: f64,
    pub trials: usize,
    pub warning: Option<String>,
}

fn random_direction(grid: &RadialGrid, rng: &mut ChaCha8Rng, reach: f64) -> DiscreteRadialFunction {
    let bumps: Vec<(f64, f64, f64)> = (0..3)
        .map(|_| {
            let amp = rng.random_range(-1.0..1.0);
            let centre = rng.random_range(0.0..reach);
            let width = rng.random_range(0.05..1.0) * reach.min(4.0);
            (amp, centre, width)
        })
        .collect();
    DiscreteRadialFunction::from_fn(grid, |r| {
        bumps
            .iter()
            .map(|&(a, c, w)| a * (-((r - c) / w).powi(2)).exp())
            .sum()
    })
}

/// Samples J on spheres ‖u‖ = ρ_j along random directions (plus `extra`
/// directions) for an increasing ladder of radii and returns the radius with
/// the largest floor among the leading radii whose floors are all positive.
pub fn estimate_beta_rho(
    energy: &Energy<'_>,
    trial_count: usize,
    seed: u64,
    extra: &[DiscreteRadialFunction],
) -> Result<BetaRho> {
    if trial_count < 8 {
        return Err(Error::Precondition(format!("need at least 8 trials, got {trial_count}")));
    }
    let grid = energy.grid();
    let reach = (2.0 * energy.spec().radius).min(grid.r_max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dirs = Vec::new();
    for d in (0..trial_count)
        .map(|_| random_direction(grid, &mut rng, reach))
        .chain(extra.iter().cloned())
    {
        if let Ok(n) = energy.norm(&d) {
            if n > 0.0 && n.is_finite() {
                dirs.push(d.scaled(1.0 / n));
            }
        }
    }
    let mut best = (0.0, 0.0);
    for rho in logspace(1e-3, 1.0, 31) {
        let floor = dirs
            .iter()
            .map(|d| energy.j(&d.scaled(rho)))
            .fold(f64::INFINITY, f64::min);
        if !(floor > 0.0) {
            break;
        }
        if floor > best.0 {
            best = (floor, rho);
        }
    }
    let warning = (best.0 <= 0.0).then(|| "no radius gave a positive energy floor".to_string());
    Ok(BetaRho {
        beta: best.0,
        rho: best.1,
        trials: dirs.len(),
        warning,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DConstant {
    pub d: f64,
    /// ∫(|∇φ|² + V∞φ²).
    pub a: f64,
    /// C₁∫|φ|^θ.
    pub b: f64,
    pub t_star: f64,
    pub c1: f64,
    pub c2: f64,
    pub v_infty: f64,
}

/// sup_t [t²A/2 − B t^θ] + c2·|B₀|, attained at t = (A/(θB))^{1/(θ−2)}.
pub fn d_from_moments(a: f64, b: f64, theta: f64, c2_volume: f64) -> (f64, f64) {
    let t = (a / (theta * b)).powf(1.0 / (theta - 2.0));
    (0.5 * t * t * a - b * t.powf(theta) + c2_volume, t)
}

/// The upper bound d for the mountain-pass level built from a bump profile φ on B_{r₀}.
pub fn compute_d(
    spec: &ProblemSpec,
    grid: &RadialGrid,
    bump: &DiscreteRadialFunction,
    c1: f64,
    c2: f64,
    v_infty: f64,
) -> Result<DConstant> {
    let s_max = 100.0 * spec.s0.max(1.0);
    validate_lower_bound(spec, c1, c2, s_max)?;
    let stiff = grid.stiffness();
    let w = grid.weights();
    let x = bump.values();
    let grad: f64 = x.windows(2).zip(stiff).map(|(p, &a)| a * (p[1] - p[0]).powi(2)).sum();
    let mass: f64 = x.iter().zip(w).map(|(u, w)| u * u * w).sum();
    let power: f64 = x.iter().zip(w).map(|(u, w)| u.abs().powf(spec.theta) * w).sum();
    let a = grad + v_infty * mass;
    let b = c1 * power;
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Precondition("bump has no mass on the grid".into()));
    }
    let volume = ball_volume(spec.dimension, spec.r0);
    let (d, t_star) = d_from_moments(a, b, spec.theta, c2 * volume);
    Ok(DConstant {
        d,
        a,
        b,
        t_star,
        c1,
        c2,
        v_infty,
    })
}
