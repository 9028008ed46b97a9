//! Shared fixtures for the solver benchmarks.

use vanish_core::mountain_pass::{default_bump, find_endpoint_e};
use vanish_core::problem::fixtures::{p1, unit};
use vanish_core::{make_penalized, DiscreteRadialFunction, PenalizedNonlinearity, ProblemSpec, RadialGrid};

pub struct Case {
    pub spec: ProblemSpec,
    pub grid: RadialGrid,
    pub pen: PenalizedNonlinearity,
}

impl Case {
    pub fn new(spec: ProblemSpec, r_max: f64, intervals: usize) -> Self {
        let grid = RadialGrid::new(spec.dimension, r_max, intervals).expect("grid");
        let pen = make_penalized(&spec).expect("penalization");
        Self { spec, grid, pen }
    }

    /// V ≡ 1, no effective penalization.
    pub fn sanity(intervals: usize) -> Self {
        Self::new(unit(20.0), 20.0, intervals)
    }

    pub fn prototype(lambda: f64, intervals: usize) -> Self {
        Self::new(p1(lambda), 10.0, intervals)
    }

    pub fn endpoint(&self) -> DiscreteRadialFunction {
        let energy = vanish_core::Energy::new(&self.grid, &self.pen).expect("energy");
        find_endpoint_e(&energy, &default_bump(&self.grid, self.spec.r0)).expect("endpoint")
    }
}
