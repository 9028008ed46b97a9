//! Radial mesh, norms and the discrete penalized energy.

pub mod energy;
pub mod function;
pub mod grid;

pub use energy::{energy_j, grad_j, Energy, Gradient};
pub use function::{lp_norm, lp_norm_scaled, norm_e, DiscreteRadialFunction};
pub use grid::{build_grid, RadialGrid};
