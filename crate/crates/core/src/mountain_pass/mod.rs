//! Mountain-pass critical point of the penalized energy, its geometry
//! constants and an independent shooting solver.

pub mod endpoint;
pub mod geometry;
pub mod shooting;
pub mod solver;

pub use endpoint::{default_bump, find_endpoint_e};
pub use geometry::{compute_d, d_from_moments, estimate_beta_rho, BetaRho, DConstant};
pub use shooting::{shooting_oracle, ShootingResult};
pub use solver::{mpa_solve, newton_polish, ray_maximizer, ray_slope, MpaOptions, SolveResult, LEVEL_SLACK};
