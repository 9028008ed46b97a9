use serde::Serialize;

use super::grid::RadialGrid;
use crate::error::{Error, Result};
use crate::problem::ProblemSpec;

/// Nodal values u_0..u_M of a radial function, u_M = 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteRadialFunction {
    values: Vec<f64>,
}

impl DiscreteRadialFunction {
    pub fn zeros(grid: &RadialGrid) -> Self {
        DiscreteRadialFunction {
            values: vec![0.0; grid.len()],
        }
    }

    /// Samples `f` at the nodes and enforces the Dirichlet value at R_max.
    pub fn from_fn<F: Fn(f64) -> f64>(grid: &RadialGrid, f: F) -> Self {
        let mut values: Vec<f64> = grid.nodes().iter().map(|&r| f(r)).collect();
        *values.last_mut().unwrap() = 0.0;
        DiscreteRadialFunction { values }
    }

    pub fn from_values(grid: &RadialGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Precondition(format!(
                "profile has {} values, grid has {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if *values.last().unwrap() != 0.0 {
            return Err(Error::Precondition("profile must vanish at r_max".into()));
        }
        Ok(DiscreteRadialFunction { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scaled(&self, t: f64) -> Self {
        DiscreteRadialFunction {
            values: self.values.iter().map(|x| t * x).collect(),
        }
    }

    /// self + t·other.
    pub fn axpy(&self, t: f64, other: &Self) -> Self {
        DiscreteRadialFunction {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + t * b).collect(),
        }
    }

    /// (1 − t)·self + t·other.
    pub fn lerp(&self, other: &Self, t: f64) -> Self {
        DiscreteRadialFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| (1.0 - t) * a + t * b)
                .collect(),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0.0)
    }
}

/// Discrete E-norm [∫|∇u|² + V u²]^{1/2}.
pub fn norm_e(grid: &RadialGrid, spec: &ProblemSpec, u: &DiscreteRadialFunction) -> Result<f64> {
    let sq = quadratic_form(grid, |i| spec.v(grid.nodes()[i]), u.values());
    if sq < 0.0 {
        return Err(Error::Hypothesis {
            hypothesis: "V1",
            detail: format!("quadratic form is negative ({sq:e}) at this resolution"),
        });
    }
    Ok(sq.sqrt())
}

pub(crate) fn quadratic_form<V: Fn(usize) -> f64>(grid: &RadialGrid, v: V, u: &[f64]) -> f64 {
    let a = grid.stiffness();
    let grad: f64 = u.windows(2).zip(a).map(|(w, &a)| a * (w[1] - w[0]).powi(2)).sum();
    let mass: f64 = grid
        .weights()
        .iter()
        .zip(u)
        .enumerate()
        .map(|(i, (&w, &x))| if x == 0.0 { 0.0 } else { v(i) * x * x * w })
        .sum();
    grad + mass
}

/// (Σ|u_i|^e w_i)^{1/e}; `f64::INFINITY` gives the max norm.
pub fn lp_norm(grid: &RadialGrid, u: &DiscreteRadialFunction, exponent: f64) -> f64 {
    if exponent.is_infinite() {
        return u.sup_norm();
    }
    let s: f64 = u
        .values()
        .iter()
        .zip(grid.weights())
        .map(|(x, w)| x.abs().powf(exponent) * w)
        .sum();
    s.powf(1.0 / exponent)
}

/// L^e norm computed as m·(Σ(|u_i|/m)^e w_i)^{1/e} with m = max|u_i|, safe for large e.
pub fn lp_norm_scaled(grid: &RadialGrid, u: &DiscreteRadialFunction, exponent: f64) -> f64 {
    let m = u.sup_norm();
    if m == 0.0 || exponent.is_infinite() {
        return m;
    }
    let s: f64 = u
        .values()
        .iter()
        .zip(grid.weights())
        .map(|(x, w)| (x.abs() / m).powf(exponent) * w)
        .sum();
    m * s.powf(1.0 / exponent)
}
