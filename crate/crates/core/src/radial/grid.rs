use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::sphere_area;

/// Uniform radial mesh r_i = i·h on [0, R_max] with N-dimensional
/// control-volume weights.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialGrid {
    pub dimension: usize,
    pub r_max: f64,
    /// Number of intervals M (nodes are 0..=M).
    pub intervals: usize,
    pub h: f64,
    /// Surface area ω_{N−1} of the unit sphere.
    pub omega: f64,
    #[serde(skip)]
    nodes: Vec<f64>,
    #[serde(skip)]
    weights: Vec<f64>,
    #[serde(skip)]
    stiffness: Vec<f64>,
}

pub fn build_grid(dimension: usize, r_max: f64, intervals: usize) -> Result<RadialGrid> {
    RadialGrid::new(dimension, r_max, intervals)
}

impl RadialGrid {
    pub fn new(dimension: usize, r_max: f64, intervals: usize) -> Result<Self> {
        if dimension < 3 {
            return Err(Error::domain(format!("grid dimension must be >= 3, got {dimension}")));
        }
        if !(r_max > 0.0 && r_max.is_finite()) {
            return Err(Error::domain(format!("r_max must be positive, got {r_max}")));
        }
        if intervals < 16 {
            return Err(Error::domain(format!("need at least 16 intervals, got {intervals}")));
        }
        let n = dimension as i32;
        let h = r_max / intervals as f64;
        let omega = sphere_area(dimension);
        let nodes: Vec<f64> = (0..=intervals)
            .map(|i| if i == intervals { r_max } else { i as f64 * h })
            .collect();
        let mid = |i: usize| (i as f64 + 0.5) * h;
        let cap = |r: f64| omega * r.powi(n) / dimension as f64;
        let weights: Vec<f64> = (0..=intervals)
            .map(|i| {
                let lo = if i == 0 { 0.0 } else { mid(i - 1) };
                let hi = if i == intervals { r_max } else { mid(i) };
                cap(hi) - cap(lo)
            })
            .collect();
        let stiffness = (0..intervals).map(|i| omega * mid(i).powi(n - 1) / h).collect();
        Ok(RadialGrid {
            dimension,
            r_max,
            intervals,
            h,
            omega,
            nodes,
            weights,
            stiffness,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Volume weights w_i of the shells around each node.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Edge coefficients ω r_{i+1/2}^{N−1}/h of the gradient term.
    pub fn stiffness(&self) -> &[f64] {
        &self.stiffness
    }

    /// Index of the first node with r_i ≥ r.
    pub fn first_at_or_beyond(&self, r: f64) -> usize {
        self.nodes.partition_point(|&x| x < r)
    }
}
