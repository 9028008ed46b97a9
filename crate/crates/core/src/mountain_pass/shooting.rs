//! Independent radial shooting solver for the ground state.

use crate::error::{Error, Result};
use crate::numerics::ode::DormandPrince;
use crate::problem::ProblemSpec;
use crate::radial::{DiscreteRadialFunction, RadialGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Fate {
    /// u crosses zero: initial value too large.
    Crossing,
    /// u turns upward while positive: initial value too small.
    Turning,
}

#[derive(Debug, Clone)]
pub struct ShootingResult {
    pub profile: DiscreteRadialFunction,
    pub initial_value: f64,
}

struct Shooter<'a> {
    spec: &'a ProblemSpec,
    grid: &'a RadialGrid,
    dp: DormandPrince,
}

impl Shooter<'_> {
    fn rhs(&self, r: f64, y: [f64; 2]) -> [f64; 2] {
        let n = self.spec.dimension as f64;
        [y[1], self.spec.v(r) * y[0] - self.spec.f(r, y[0]) - (n - 1.0) / r * y[1]]
    }

    /// Integrates from u(0) = s; returns the sampled profile (zeroed after the
    /// first event) and the fate.
    fn shoot(&self, s: f64) -> (Vec<f64>, Option<Fate>) {
        let n = self.spec.dimension as f64;
        let nodes = self.grid.nodes();
        let mut out = vec![0.0; nodes.len()];
        out[0] = s;
        let lap0 = self.spec.v(0.0) * s - self.spec.f(0.0, s);
        let r_start = 1e-3 * self.grid.h;
        let mut y = [s + lap0 * r_start * r_start / (2.0 * n), lap0 * r_start / n];
        let mut t = r_start;
        let mut step = 1e-3 * self.grid.h;
        let rhs = |r: f64, y: [f64; 2]| self.rhs(r, y);
        for (i, &r) in nodes.iter().enumerate().skip(1) {
            match self.dp.advance(&rhs, t, r, y, &mut step) {
                Some(next) => y = next,
                None => return (out, Some(if y[0] > 0.0 { Fate::Turning } else { Fate::Crossing })),
            }
            t = r;
            if y[0] < 0.0 {
                return (out, Some(Fate::Crossing));
            }
            if y[1] > 0.0 {
                return (out, Some(Fate::Turning));
            }
            out[i] = y[0];
        }
        (out, None)
    }

    fn fate(&self, s: f64) -> Fate {
        match self.shoot(s).1 {
            Some(f) => f,
            None => {
                // no event on the grid: decide from the growing mode at r_max
                let (profile, _) = self.shoot(s);
                let m = profile.len();
                let (a, b) = (profile[m - 3], profile[m - 2]);
                if b > a * (-self.spec.v(self.grid.r_max).max(0.0).sqrt() * self.grid.h).exp() {
                    Fate::Turning
                } else {
                    Fate::Crossing
                }
            }
        }
    }
}

/// Bisection on u(0) between crossing and turning trajectories of
/// u″ + (N−1)u′/r = V(r)u − f(r,u).
pub fn shooting_oracle(spec: &ProblemSpec, grid: &RadialGrid) -> Result<ShootingResult> {
    if !spec.nonlinearity.is_autonomous() {
        return Err(Error::Precondition("shooting oracle needs an autonomous nonlinearity".into()));
    }
    let shooter = Shooter {
        spec,
        grid,
        dp: DormandPrince::default(),
    };
    let (lo_bound, hi_bound) = (1e-6, 1e6);
    let mut lo = 1.0;
    let mut hi = 1.0;
    let start = shooter.fate(1.0);
    if start == Fate::Turning {
        while shooter.fate(hi) == Fate::Turning {
            lo = hi;
            hi *= 2.0;
            if hi > hi_bound {
                return Err(Error::OracleInconclusive(format!(
                    "no sign change of the shooting fate for u(0) in [{lo_bound}, {hi_bound}]"
                )));
            }
        }
    } else {
        while shooter.fate(lo) == Fate::Crossing {
            hi = lo;
            lo *= 0.5;
            if lo < lo_bound {
                return Err(Error::OracleInconclusive(format!(
                    "no sign change of the shooting fate for u(0) in [{lo_bound}, {hi_bound}]"
                )));
            }
        }
    }
    for _ in 0..200 {
        if hi - lo <= 1e-13 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        match shooter.fate(mid) {
            Fate::Turning => lo = mid,
            Fate::Crossing => hi = mid,
        }
    }
    let s = 0.5 * (lo + hi);
    let (mut values, _) = shooter.shoot(s);
    *values.last_mut().unwrap() = 0.0;
    Ok(ShootingResult {
        profile: DiscreteRadialFunction::from_values(grid, values)?,
        initial_value: s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::fixtures::unit;
    use crate::problem::Nonlinearity;

    #[test]
    fn linear_problem_is_inconclusive() {
        let mut spec = unit(20.0);
        spec.nonlinearity = Nonlinearity::power(0.0, 3.0);
        let grid = RadialGrid::new(3, 20.0, 400).unwrap();
        assert!(matches!(shooting_oracle(&spec, &grid), Err(Error::OracleInconclusive(_))));
    }

    #[test]
    fn ground_state_is_positive_and_decreasing() {
        let spec = unit(20.0);
        let grid = RadialGrid::new(3, 20.0, 2000).unwrap();
        let res = shooting_oracle(&spec, &grid).unwrap();
        let u = res.profile.values();
        assert!(u[..1000].iter().all(|&x| x > 0.0));
        assert!(u.windows(2).all(|w| w[1] <= w[0]));
        assert!((res.initial_value - GROUND_STATE_PEAK).abs() < 1e-8, "{}", res.initial_value);
    }

    const GROUND_STATE_PEAK: f64 = 4.191682954442566;
}
