use std::f64::consts::PI;

use serde::Serialize;

use super::bounds::{energy_bounds, thresholds, EnergyBounds, Thresholds};
use super::BoundContext;
use crate::error::{Error, Result};
use crate::mountain_pass::{compute_d, DConstant};
use crate::problem::ProblemSpec;
use crate::radial::{DiscreteRadialFunction, RadialGrid};

#[derive(Debug, Clone, Serialize)]
pub struct MultiBump {
    pub l: usize,
    /// Shell edges a₀ = 0 < a₁ < … < a_l = r₀.
    pub edges: Vec<f64>,
    #[serde(skip)]
    pub bumps: Vec<DiscreteRadialFunction>,
    pub d_values: Vec<DConstant>,
    pub d_l: f64,
    pub bounds: EnergyBounds,
    pub thresholds: Thresholds,
}

/// l radial profiles with pairwise disjoint supports in B_{r₀}: a cos² cap on
/// [0, r₀/l] and sin² annuli on the remaining equal-width shells.
pub fn shell_bumps(grid: &RadialGrid, r0: f64, l: usize) -> Result<(Vec<f64>, Vec<DiscreteRadialFunction>)> {
    if l == 0 {
        return Err(Error::Precondition("need at least one bump".into()));
    }
    let width = r0 / l as f64;
    if width < 4.0 * grid.h {
        return Err(Error::Resolution(format!(
            "shell width {width} spans fewer than 4 cells of size {}",
            grid.h
        )));
    }
    let edges: Vec<f64> = (0..=l).map(|i| r0 * i as f64 / l as f64).collect();
    let bumps = (0..l)
        .map(|i| {
            let (a, b) = (edges[i], edges[i + 1]);
            DiscreteRadialFunction::from_fn(grid, move |r| {
                if i == 0 {
                    if r < b {
                        (PI * r / (2.0 * b)).cos().powi(2)
                    } else {
                        0.0
                    }
                } else if r > a && r < b {
                    (PI * (r - a) / (b - a)).sin().powi(2)
                } else {
                    0.0
                }
            })
        })
        .collect();
    Ok((edges, bumps))
}

/// D_l = max d_i over the shell bumps, with the threshold chain rerun from D_l.
#[allow(clippy::too_many_arguments)]
pub fn multi_bump_d_l(
    spec: &ProblemSpec,
    l: usize,
    grid: &RadialGrid,
    c1: f64,
    c2: f64,
    v_infty: f64,
    ctx: &BoundContext,
    c_ar: f64,
) -> Result<MultiBump> {
    let (edges, bumps) = shell_bumps(grid, spec.r0, l)?;
    let d_values = bumps
        .iter()
        .map(|b| compute_d(spec, grid, b, c1, c2, v_infty))
        .collect::<Result<Vec<_>>>()?;
    let d_l = d_values.iter().map(|d| d.d).fold(f64::NEG_INFINITY, f64::max);
    let bounds = energy_bounds(spec, d_l, ctx, c_ar)?;
    let thresholds = thresholds(spec, &bounds, ctx)?;
    Ok(MultiBump {
        l,
        edges,
        bumps,
        d_values,
        d_l,
        bounds,
        thresholds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mountain_pass::default_bump;
    use crate::problem::fixtures::p1;
    use crate::problem::{effective_v_infty, lower_bound_constants, sobolev_constant};

    fn setup() -> (ProblemSpec, RadialGrid, f64, f64, f64, BoundContext) {
        let spec = p1(10.0);
        let grid = RadialGrid::new(3, 10.0, 4000).unwrap();
        let (c1, c2) = lower_bound_constants(&spec).unwrap();
        let v = effective_v_infty(&spec);
        let ctx = BoundContext {
            alpha: 0.0,
            omega_measure: 0.0,
            sobolev: sobolev_constant(3).unwrap(),
        };
        (spec, grid, c1, c2, v, ctx)
    }

    #[test]
    fn single_bump_matches_scalar_chain() {
        let (spec, grid, c1, c2, v, ctx) = setup();
        let mb = multi_bump_d_l(&spec, 1, &grid, c1, c2, v, &ctx, 0.0).unwrap();
        let d = compute_d(&spec, &grid, &default_bump(&grid, spec.r0), c1, c2, v).unwrap();
        assert_eq!(mb.d_l, d.d);
        let b = energy_bounds(&spec, d.d, &ctx, 0.0).unwrap();
        assert_eq!(mb.thresholds.lambda_star, thresholds(&spec, &b, &ctx).unwrap().lambda_star);
    }

    #[test]
    fn supports_are_disjoint() {
        let (spec, grid, ..) = setup();
        let (_, bumps) = shell_bumps(&grid, spec.r0, 3).unwrap();
        for i in 0..grid.len() {
            let active = bumps.iter().filter(|b| b.values()[i] != 0.0).count();
            assert!(active <= 1);
        }
    }

    #[test]
    fn d_l_grows_with_l() {
        let (spec, grid, c1, c2, v, ctx) = setup();
        let ds: Vec<f64> = (1..=4)
            .map(|l| multi_bump_d_l(&spec, l, &grid, c1, c2, v, &ctx, 0.0).unwrap().d_l)
            .collect();
        assert!(ds.windows(2).all(|w| w[1] >= w[0]), "{ds:?}");
    }

    #[test]
    fn thin_shells_rejected() {
        let (spec, _, c1, c2, v, ctx) = setup();
        let coarse = RadialGrid::new(3, 10.0, 100).unwrap();
        assert!(matches!(
            multi_bump_d_l(&spec, 3, &coarse, c1, c2, v, &ctx, 0.0),
            Err(Error::Resolution(_))
        ));
    }
}
