use std::collections::BTreeMap;

use serde::Serialize;

use super::moser::{moser_constants, MoserConstants};
use super::{BoundContext, EnergyBounds};
use crate::penalization::PenalizedNonlinearity;
use crate::problem::ProblemSpec;
use crate::radial::{lp_norm_scaled, norm_e, DiscreteRadialFunction, RadialGrid};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub pass: bool,
    pub margin: f64,
    pub constants: BTreeMap<String, f64>,
    pub provenance: String,
    pub notes: Vec<String>,
}

impl CheckRecord {
    fn new(name: &str, pass: bool, margin: f64, provenance: &str) -> Self {
        Self {
            name: name.into(),
            pass,
            margin,
            constants: BTreeMap::new(),
            provenance: provenance.into(),
            notes: Vec::new(),
        }
    }

    fn with(mut self, key: &str, value: f64) -> Self {
        self.constants.insert(key.into(), value);
        self
    }
}

/// ‖u‖² ≤ K⁻¹(d + C_ar|B_R|).
pub fn check_norm_bound(
    grid: &RadialGrid,
    spec: &ProblemSpec,
    u: &DiscreteRadialFunction,
    bounds: &EnergyBounds,
) -> CheckRecord {
    let prov = "certificates::check_norm_bound (energy bound on the mountain-pass solution)";
    match norm_e(grid, spec, u) {
        Ok(norm) => {
            let sq = norm * norm;
            let margin = bounds.norm_bound - sq;
            CheckRecord::new("norm_bound", margin >= -1e-6 * bounds.norm_bound, margin, prov)
                .with("norm_squared", sq)
                .with("norm_bound", bounds.norm_bound)
                .with("K", bounds.k_const)
                .with("d", bounds.d)
                .with("C_ar", bounds.c_ar)
        }
        Err(e) => {
            let mut rec = CheckRecord::new("norm_bound", false, f64::NAN, prov);
            rec.notes.push(e.to_string());
            rec
        }
    }
}

/// |u(r)| ≤ M(R/r)^{N−2} at every node r ≥ R.
pub fn check_decay(grid: &RadialGrid, u: &DiscreteRadialFunction, m: f64, radius: f64) -> CheckRecord {
    let power = grid.dimension as f64 - 2.0;
    let start = grid.first_at_or_beyond(radius);
    let mut margin = f64::INFINITY;
    let mut pass = true;
    for i in start..grid.len() {
        let r = grid.nodes()[i];
        let bound = m * (radius / r).powf(power);
        let x = u.values()[i].abs();
        margin = margin.min(bound - x);
        if x > bound * (1.0 + 1e-8) {
            pass = false;
        }
    }
    CheckRecord::new(
        "decay",
        pass,
        margin,
        "certificates::check_decay (harmonic comparison beyond R)",
    )
    .with("M", m)
    .with("R", radius)
}

/// k|f(r,u)| ≤ V(r)|u| at every node r ≥ R, so the clamp is inactive along u.
pub fn check_consistency(
    grid: &RadialGrid,
    spec: &ProblemSpec,
    pen: &PenalizedNonlinearity,
    u: &DiscreteRadialFunction,
) -> CheckRecord {
    let k = pen.k();
    let start = grid.first_at_or_beyond(spec.radius);
    let mut margin = f64::INFINITY;
    let mut pass = true;
    for i in start..grid.len() {
        let r = grid.nodes()[i];
        let s = u.values()[i];
        let slack = spec.v(r) * s.abs() - k * spec.f(r, s).abs();
        margin = margin.min(slack);
        if slack < -1e-12 {
            pass = false;
        }
    }
    let identical = grid
        .nodes()
        .iter()
        .zip(u.values())
        .all(|(&r, &s)| pen.g(r, s).to_bits() == spec.f(r, s).to_bits());
    let mut rec = CheckRecord::new(
        "consistency",
        pass,
        margin,
        "certificates::check_consistency (penalization inactive along the solution)",
    )
    .with("k", k)
    .with("R", spec.radius);
    rec.notes.push(if identical {
        "g(r,u) = f(r,u) bitwise at every node".into()
    } else {
        "g(r,u) differs from f(r,u) at some node".into()
    });
    rec.pass = pass && identical;
    rec
}

/// sup|u| ≤ M(|u|_{2*}) on the grid.
pub fn check_linf(u: &DiscreteRadialFunction, moser: &MoserConstants) -> CheckRecord {
    let sup = u.sup_norm();
    CheckRecord::new(
        "linf_bound",
        sup <= moser.m * (1.0 + 1e-6),
        moser.m - sup,
        "certificates::moser_constants (L-infinity bound at the computed L^2* norm)",
    )
    .with("sup_u", sup)
    .with("M", moser.m)
    .with("u_norm_2star", moser.u_norm)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainStep {
    pub j: usize,
    /// ln of |v|_{2*σ^j}^{2σ^j}.
    pub ln_left: f64,
    /// ln of σ^{2j}S⁻¹(a₃+a₄)(X^{2σ^j} + X^{2σ^j−1}), X = |v|_{2*σ^{j−1}}.
    pub ln_right: f64,
    /// right/left.
    pub ratio: f64,
    pub pass: bool,
}

/// Both sides of the iterated Moser inequality for v = (u − a₂)⁺, evaluated
/// in log space.
pub fn moser_diagnostic(
    grid: &RadialGrid,
    spec: &ProblemSpec,
    u: &DiscreteRadialFunction,
    ctx: &BoundContext,
    j_max: usize,
) -> crate::Result<(Vec<ChainStep>, CheckRecord)> {
    let crit = spec.critical_exponent();
    let u_norm = lp_norm_scaled(grid, u, crit);
    let moser = moser_constants(spec, ctx, u_norm)?;
    let sigma = moser.sigma;
    let v = DiscreteRadialFunction::from_values(
        grid,
        u.values().iter().map(|&x| (x - spec.a2).max(0.0)).collect(),
    )?;
    let ln_factor = (moser.a3 + moser.a4).ln() - ctx.sobolev.ln();
    let mut steps = Vec::new();
    let mut notes = Vec::new();
    for j in 1..=j_max {
        let sj = sigma.powi(j as i32);
        let left_norm = lp_norm_scaled(grid, &v, crit * sj);
        let x = lp_norm_scaled(grid, &v, crit * sj / sigma);
        let (ln_left, ln_right, ratio) = if left_norm == 0.0 {
            (f64::NEG_INFINITY, f64::NEG_INFINITY, f64::INFINITY)
        } else {
            let ln_left = 2.0 * sj * left_norm.ln();
            let lx = x.ln();
            let hi = (2.0 * sj * lx).max((2.0 * sj - 1.0) * lx);
            let lo = (2.0 * sj * lx).min((2.0 * sj - 1.0) * lx);
            let ln_sum = hi + (lo - hi).exp().ln_1p();
            let ln_right = 2.0 * j as f64 * sigma.ln() + ln_factor + ln_sum;
            (ln_left, ln_right, (ln_right - ln_left).exp())
        };
        if ln_left.max(ln_right) > 300.0 * std::f64::consts::LN_10 {
            notes.push(format!("step {j}: sides exceed 1e300, compared in log space"));
        }
        steps.push(ChainStep {
            j,
            ln_left,
            ln_right,
            ratio,
            pass: ratio >= 1.0 - 1e-6,
        });
    }
    let worst = steps.iter().map(|s| s.ratio).fold(f64::INFINITY, f64::min);
    let mut rec = CheckRecord::new(
        "moser_chain",
        steps.iter().all(|s| s.pass),
        worst - 1.0,
        "certificates::moser_diagnostic (iterated L^p inequality)",
    )
    .with("sigma", sigma)
    .with("a3", moser.a3)
    .with("a4", moser.a4)
    .with("j_max", j_max as f64);
    rec.notes = notes;
    Ok((steps, rec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::penalization::make_penalized;
    use crate::problem::fixtures::{p1, unit};
    use crate::problem::sobolev_constant;

    fn ctx() -> BoundContext {
        BoundContext {
            alpha: 0.0,
            omega_measure: 0.0,
            sobolev: sobolev_constant(3).unwrap(),
        }
    }

    fn bounds(norm_bound: f64) -> EnergyBounds {
        EnergyBounds {
            k_const: 1.0 / 36.0,
            c_ar: 0.0,
            d: norm_bound / 36.0,
            ball_volume: 1.0,
            norm_bound,
            hat_c: 1.0,
            beta: None,
            rho: None,
            level: None,
        }
    }

    #[test]
    fn zero_passes_everything() {
        let grid = RadialGrid::new(3, 10.0, 200).unwrap();
        let spec = p1(5.0);
        let pen = make_penalized(&spec).unwrap();
        let z = DiscreteRadialFunction::zeros(&grid);
        let nb = check_norm_bound(&grid, &spec, &z, &bounds(36.0));
        assert!(nb.pass);
        assert_eq!(nb.margin, 36.0);
        assert!(check_decay(&grid, &z, 0.0, 1.0).pass);
        assert!(check_consistency(&grid, &spec, &pen, &z).pass);
        let (steps, rec) = moser_diagnostic(&grid, &spec, &z, &ctx(), 4).unwrap();
        assert!(rec.pass && steps.len() == 4);
    }

    #[test]
    fn norm_bound_arithmetic() {
        let grid = RadialGrid::new(3, 10.0, 400).unwrap();
        let spec = unit(1.0);
        let u = DiscreteRadialFunction::from_fn(&grid, |r| (-r).exp());
        let n2 = norm_e(&grid, &spec, &u).unwrap().powi(2);
        let u = u.scaled(1.0 / n2.sqrt());
        let rec = check_norm_bound(&grid, &spec, &u, &bounds(36.0));
        assert!(rec.pass);
        assert!((rec.margin - 35.0).abs() < 1e-12);
    }

    #[test]
    fn decay_equality_case() {
        let grid = RadialGrid::new(3, 10.0, 400).unwrap();
        let m = 2.0;
        let values = grid
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, &r)| if i + 1 == grid.len() { 0.0 } else { m * (1.0 / r.max(1.0)) })
            .collect();
        let u = DiscreteRadialFunction::from_values(&grid, values).unwrap();
        let rec = check_decay(&grid, &u, m, 1.0);
        assert!(rec.pass);
        assert!(rec.margin.abs() < 1e-14);
        let rec = check_decay(&grid, &u.scaled(1.001), m, 1.0);
        assert!(!rec.pass);
    }

    #[test]
    fn consistency_pointwise() {
        let grid = RadialGrid::new(3, 10.0, 400).unwrap();
        let spec = unit(1.0);
        let pen = make_penalized(&spec).unwrap();
        let small = DiscreteRadialFunction::from_fn(&grid, |r| if r >= 1.0 { 0.05 } else { 1.0 });
        let rec = check_consistency(&grid, &spec, &pen, &small);
        assert!(rec.pass, "{rec:?}");
        // the boundary node carries u = 0 and so margin 0
        assert_eq!(rec.margin, 0.0);
        let big = DiscreteRadialFunction::from_fn(&grid, |r| if r >= 1.0 { 1.0 } else { 0.0 });
        let rec = check_consistency(&grid, &spec, &pen, &big);
        assert!(!rec.pass);
        assert!((rec.margin + 5.0).abs() < 1e-15);
    }

    #[test]
    fn chain_is_scale_robust() {
        let grid = RadialGrid::new(3, 20.0, 2000).unwrap();
        let spec = p1(10.0);
        let u = DiscreteRadialFunction::from_fn(&grid, |r| 3.0 / (1.0 + r * r).powf(1.5));
        let (_, rec) = moser_diagnostic(&grid, &spec, &u, &ctx(), 4).unwrap();
        assert!(rec.pass, "{rec:?}");
        let (steps, rec) = moser_diagnostic(&grid, &spec, &u.scaled(1e6), &ctx(), 4).unwrap();
        assert!(rec.pass, "{steps:?}");
    }
}
