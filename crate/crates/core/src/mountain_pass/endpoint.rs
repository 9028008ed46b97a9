use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::radial::{DiscreteRadialFunction, Energy, RadialGrid};

/// cos²(πr/(2r₀)) on [0, r₀), zero outside.
pub fn default_bump(grid: &RadialGrid, r0: f64) -> DiscreteRadialFunction {
    DiscreteRadialFunction::from_fn(grid, |r| {
        if r < r0 {
            (0.5 * PI * r / r0).cos().powi(2)
        } else {
            0.0
        }
    })
}

/// e = t·bump with t doubled from 1 until J(e) < 0.
pub fn find_endpoint_e(energy: &Energy<'_>, bump: &DiscreteRadialFunction) -> Result<DiscreteRadialFunction> {
    if bump.is_zero() || bump.values().iter().any(|&x| x < 0.0) {
        return Err(Error::Precondition("bump must be nonnegative and nonzero".into()));
    }
    let mut t = 1.0;
    for _ in 0..=60 {
        let e = bump.scaled(t);
        if energy.j(&e) < 0.0 {
            return Ok(e);
        }
        t *= 2.0;
    }
    Err(Error::Numerical(
        "superlinearity not visible at this resolution: J(t*bump) >= 0 after 60 doublings".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::penalization::make_penalized;
    use crate::problem::fixtures::p1;

    #[test]
    fn p1_endpoint_is_below_zero() {
        let spec = p1(10.0);
        let grid = RadialGrid::new(3, 10.0, 1000).unwrap();
        let pen = make_penalized(&spec).unwrap();
        let energy = Energy::new(&grid, &pen).unwrap();
        let bump = default_bump(&grid, spec.r0);
        let e = find_endpoint_e(&energy, &bump).unwrap();
        assert!(energy.j(&e) < 0.0);
        let ratio = e.sup_norm() / bump.sup_norm();
        assert_eq!(ratio, ratio.log2().round().exp2());
    }

    #[test]
    fn zero_bump_rejected() {
        let spec = p1(10.0);
        let grid = RadialGrid::new(3, 10.0, 100).unwrap();
        let pen = make_penalized(&spec).unwrap();
        let energy = Energy::new(&grid, &pen).unwrap();
        let zero = DiscreteRadialFunction::zeros(&grid);
        assert!(matches!(find_endpoint_e(&energy, &zero), Err(Error::Precondition(_))));
    }
}
