//! Mountain-pass algorithm on ray paths with a Newton finish.
//!
//! The path from 0 to e is the ray through the current point u followed by a
//! far-field arc inside {J < 0}; its maximum is m(u) = max_t J(t·u). Each
//! iteration moves the maximizer along the gradient component B-orthogonal to
//! the ray, with Armijo backtracking on m, and re-inserts it at the new ray
//! maximum.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::radial::{DiscreteRadialFunction, Energy};

/// Relative room above the current path maximum granted to a Newton finish.
pub const LEVEL_SLACK: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MpaOptions {
    /// Segments of the initial straight path used to locate the first maximizer.
    pub path_points: usize,
    pub tol: f64,
    pub max_iter: usize,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
    /// Initial trial step along the Riesz direction.
    pub step: f64,
    pub newton: bool,
}

impl Default for MpaOptions {
    fn default() -> Self {
        MpaOptions {
            path_points: 64,
            tol: 1e-8,
            max_iter: 5000,
            armijo: 1e-4,
            step: 1.0,
            newton: true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveResult {
    #[serde(skip)]
    pub u: DiscreteRadialFunction,
    /// Level c = J(u).
    pub level: f64,
    /// Final path maximum before any Newton finish.
    pub level_estimate: f64,
    pub residual: f64,
    pub iterations: usize,
    pub newton_steps: usize,
    pub path_max_history: Vec<f64>,
    pub converged: bool,
    /// u ≥ −1e-8 nodewise (None in odd mode).
    pub nonnegative: Option<bool>,
    pub min_value: f64,
    pub diagnostics: Vec<String>,
}

/// d/dt J(t·phi).
pub fn ray_slope(energy: &Energy<'_>, phi: &DiscreteRadialFunction, q: f64, t: f64) -> f64 {
    let w = energy.grid().weights();
    let nl: f64 = phi
        .values()
        .iter()
        .zip(w)
        .enumerate()
        .map(|(i, (&x, &w))| if x == 0.0 { 0.0 } else { energy.g_at(i, t * x) * x * w })
        .sum();
    t * q - nl
}

/// The maximizer t·phi of J along the ray through phi, searched from `guess`.
pub fn ray_maximizer(
    energy: &Energy<'_>,
    phi: &DiscreteRadialFunction,
    guess: f64,
) -> Option<(DiscreteRadialFunction, f64)> {
    let q = energy.quadratic(phi);
    if !(q > 0.0) || phi.is_zero() {
        return None;
    }
    let slope = |t: f64| ray_slope(energy, phi, q, t);
    let mut t = if guess > 0.0 && guess.is_finite() { guess } else { 1.0 };
    let (mut lo, mut hi);
    if slope(t) > 0.0 {
        lo = t;
        loop {
            t *= 2.0;
            if t > 1e300 {
                return None;
            }
            if slope(t) <= 0.0 {
                hi = t;
                break;
            }
            lo = t;
        }
    } else {
        hi = t;
        loop {
            t *= 0.5;
            if t < 1e-300 {
                return None;
            }
            if slope(t) > 0.0 {
                lo = t;
                break;
            }
            hi = t;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    let u = phi.scaled(t);
    let level = energy.j(&u);
    Some((u, level))
}

fn scale(energy: &Energy<'_>, u: &DiscreteRadialFunction) -> f64 {
    energy.quadratic(u).max(0.0).sqrt().max(1.0)
}

/// Damped Newton iteration from `start`; returns the iterate once the residual
/// reaches `tol·max(1, ‖u‖)`, after up to three further full steps that keep
/// halving the residual.
pub fn newton_polish(
    energy: &Energy<'_>,
    start: &DiscreteRadialFunction,
    tol: f64,
    max_steps: usize,
) -> Option<(DiscreteRadialFunction, f64, usize)> {
    let mut u = start.clone();
    let mut g = energy.gradient(&u);
    let mut taken = 0;
    while g.residual > tol * scale(energy, &u) {
        if taken == max_steps {
            return None;
        }
        let delta = energy.newton_step(&u, &g.weak).ok()?;
        let mut lambda = 1.0;
        loop {
            let trial = u.axpy(lambda, &delta);
            let tg = energy.gradient(&trial);
            if tg.residual < g.residual {
                u = trial;
                g = tg;
                break;
            }
            lambda *= 0.5;
            if lambda < 1.0 / 64.0 {
                return None;
            }
        }
        taken += 1;
    }
    for _ in 0..3 {
        let Ok(delta) = energy.newton_step(&u, &g.weak) else { break };
        let trial = u.axpy(1.0, &delta);
        let tg = energy.gradient(&trial);
        if !(tg.residual < 0.5 * g.residual) {
            break;
        }
        u = trial;
        g = tg;
        taken += 1;
    }
    Some((u, g.residual, taken))
}

/// Newton finish from `u`, kept only if it stays at a positive level no higher
/// than the current path maximum (up to `LEVEL_SLACK`) and within half of ‖u‖ of the start.
fn polish_near(
    energy: &Energy<'_>,
    u: &DiscreteRadialFunction,
    current: f64,
    opts: &MpaOptions,
) -> Option<(DiscreteRadialFunction, f64, usize)> {
    let (w, res, steps) = newton_polish(energy, u, opts.tol, 50)?;
    let level = energy.j(&w);
    let moved = energy.norm_b(&w.axpy(-1.0, u));
    (level > 0.0 && level <= current * (1.0 + LEVEL_SLACK) && moved <= 0.5 * energy.norm_b(u)).then_some((w, res, steps))
}

/// Mountain-pass critical point of the penalized energy along paths from 0 to `e`.
pub fn mpa_solve(energy: &Energy<'_>, e: &DiscreteRadialFunction, opts: &MpaOptions) -> Result<SolveResult> {
    if opts.path_points < 8 {
        return Err(Error::Precondition(format!("need at least 8 path segments, got {}", opts.path_points)));
    }
    if !(energy.j(e) < 0.0) {
        return Err(Error::Precondition("endpoint must satisfy J(e) < 0".into()));
    }
    let m = opts.path_points;
    let k = (1..m)
        .map(|j| (j, energy.j(&e.scaled(j as f64 / m as f64))))
        .fold((1, f64::NEG_INFINITY), |best, x| if x.1 > best.1 { x } else { best })
        .0;
    let (mut u, mut current) = ray_maximizer(energy, e, k as f64 / m as f64)
        .ok_or_else(|| Error::Numerical("no interior maximum of J along the segment [0, e]".into()))?;
    let mut history = Vec::new();
    let mut diagnostics = Vec::new();
    let mut step = opts.step;
    let mut last_newton: Option<usize> = None;
    let mut newton_steps = 0;
    let mut finish: Option<(DiscreteRadialFunction, f64)> = None;
    let mut iterations = 0;

    while iterations < opts.max_iter {
        history.push(current);
        let g = energy.gradient(&u);
        let sc = scale(energy, &u);
        if g.residual <= opts.tol * sc {
            finish = Some(match opts.newton.then(|| polish_near(energy, &u, current, opts)).flatten() {
                Some((w, res, steps)) => {
                    newton_steps = steps;
                    (w, res)
                }
                None => (u.clone(), g.residual),
            });
            break;
        }
        if opts.newton && g.residual <= 0.05 * sc && last_newton.is_none_or(|it| iterations >= it + 20) {
            last_newton = Some(iterations);
            if let Some((w, res, steps)) = polish_near(energy, &u, current, opts) {
                newton_steps = steps;
                finish = Some((w, res));
                break;
            }
        }
        let uu = energy.inner_b(&u, &u);
        let dir = g.direction.axpy(-energy.inner_b(&g.direction, &u) / uu, &u);
        let slope: f64 = g.weak.iter().zip(dir.values()).map(|(a, b)| a * b).sum();
        let cap = 0.5 * uu.sqrt() / energy.norm_b(&dir).max(f64::MIN_POSITIVE);
        let mut alpha = (2.0 * step).min(cap);
        let noise = 64.0 * f64::EPSILON * current.abs();
        let mut accepted = None;
        if slope > 0.0 {
            while alpha >= 1e-14 * cap.min(1.0) {
                if let Some((w, level)) = ray_maximizer(energy, &u.axpy(-alpha, &dir), 1.0) {
                    let decrease = opts.armijo * alpha * slope;
                    let sufficient = level <= current - decrease;
                    // below the rounding floor of J, settle for a smaller residual
                    let resolved = || {
                        decrease < noise && level <= current + noise && energy.gradient(&w).residual < g.residual
                    };
                    if sufficient || resolved() {
                        accepted = Some((w, level, alpha));
                        break;
                    }
                }
                alpha *= 0.5;
            }
        }
        iterations += 1;
        match accepted {
            Some((w, level, a)) => {
                u = w;
                current = level;
                step = a;
            }
            None => {
                if opts.newton {
                    if let Some((w, res, steps)) = polish_near(energy, &u, current, opts) {
                        newton_steps = steps;
                        finish = Some((w, res));
                        break;
                    }
                }
                diagnostics.push(format!("line search stalled at iteration {iterations}"));
                break;
            }
        }
    }

    let level_estimate = current;
    let (u, residual, converged) = match finish {
        Some((u, r)) => (u, r, true),
        None => {
            let r = energy.gradient(&u).residual;
            diagnostics.push(format!("no convergence after {iterations} iterations (residual {r:e})"));
            (u, r, false)
        }
    };
    let level = energy.j(&u);
    let min_value = u.values().iter().copied().fold(f64::INFINITY, f64::min);
    let nonnegative = (!energy.spec().odd).then_some(min_value >= -1e-8);
    if nonnegative == Some(false) {
        diagnostics.push(format!("solution dips below zero (min {min_value:e})"));
    }
    Ok(SolveResult {
        u,
        level,
        level_estimate,
        residual,
        iterations,
        newton_steps,
        path_max_history: history,
        converged: converged && level > 0.0,
        nonnegative,
        min_value,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mountain_pass::{default_bump, find_endpoint_e, shooting_oracle};
    use crate::penalization::make_penalized;
    use crate::problem::fixtures::{p1, unit};
    use crate::radial::RadialGrid;

    #[test]
    fn sanity_case_matches_shooting() {
        let spec = unit(20.0);
        let grid = RadialGrid::new(3, 20.0, 2000).unwrap();
        let pen = make_penalized(&spec).unwrap();
        let energy = Energy::new(&grid, &pen).unwrap();
        let e = find_endpoint_e(&energy, &default_bump(&grid, spec.r0)).unwrap();
        let res = mpa_solve(&energy, &e, &MpaOptions::default()).unwrap();
        assert!(res.converged, "{:?}", res.diagnostics);
        assert!(res.residual <= 1e-8);
        assert!(res.path_max_history.windows(2).all(|w| w[1] <= w[0] + 1e-12 * w[0].abs().max(1.0)));
        let oracle = shooting_oracle(&spec, &grid).unwrap();
        let diff = res.u.axpy(-1.0, &oracle.profile).sup_norm();
        assert!(diff <= 1e-3 * oracle.profile.sup_norm());
        assert_eq!(res.nonnegative, Some(true));
    }

    #[test]
    fn descent_alone_reaches_tolerance() {
        let spec = unit(20.0);
        let grid = RadialGrid::new(3, 20.0, 1000).unwrap();
        let pen = make_penalized(&spec).unwrap();
        let energy = Energy::new(&grid, &pen).unwrap();
        let e = find_endpoint_e(&energy, &default_bump(&grid, spec.r0)).unwrap();
        let opts = MpaOptions {
            newton: false,
            ..MpaOptions::default()
        };
        let res = mpa_solve(&energy, &e, &opts).unwrap();
        assert!(res.converged, "{:?}", res.diagnostics);
        assert_eq!(res.newton_steps, 0);
        assert!(res.residual <= opts.tol * scale(&energy, &res.u));
        assert!(res.level > 0.0 && res.level <= res.path_max_history[0]);
    }

    #[test]
    fn ray_maximum_of_pure_power() {
        // J(tφ) = t²Q/2 − t³P/3 peaks at t = Q/P.
        let spec = unit(5.0);
        let grid = RadialGrid::new(3, 5.0, 500).unwrap();
        let pen = make_penalized(&spec).unwrap();
        let energy = Energy::new(&grid, &pen).unwrap();
        let phi = default_bump(&grid, 0.9);
        let q = energy.quadratic(&phi);
        let p: f64 = phi.values().iter().zip(grid.weights()).map(|(x, w)| x.powi(3) * w).sum();
        for guess in [1e-3, 1.0, 1e4] {
            let (u, level) = ray_maximizer(&energy, &phi, guess).unwrap();
            let t = u.sup_norm() / phi.sup_norm();
            assert!((t / (q / p) - 1.0).abs() < 1e-12);
            assert!((level - (q / p).powi(2) * q / 6.0).abs() < 1e-10 * level);
        }
        assert!(ray_maximizer(&energy, &DiscreteRadialFunction::zeros(&grid), 1.0).is_none());
    }

    #[test]
    fn concentrated_solution_for_large_potential() {
        let spec = p1(5000.0);
        let grid = RadialGrid::new(3, 10.0, 2000).unwrap();
        let pen = make_penalized(&spec).unwrap();
        let energy = Energy::new(&grid, &pen).unwrap();
        let e = find_endpoint_e(&energy, &default_bump(&grid, spec.r0)).unwrap();
        let res = mpa_solve(&energy, &e, &MpaOptions::default()).unwrap();
        assert!(res.converged, "{:?}", res.diagnostics);
        assert_eq!(res.nonnegative, Some(true));
        assert!(res.u.values()[0] > 1000.0);
    }
}
