//! Penalized mountain-pass solver for −Δu + V(r)u = f(r, u) on ℝ^N with
//! potentials that may vanish at infinity, plus a posteriori certificates.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certificates;
pub mod config;
pub mod error;
pub mod mountain_pass;
pub mod numerics;
pub mod penalization;
pub mod pipeline;
pub mod problem;
pub mod radial;
pub mod report;

pub use error::{Error, Result};
pub use certificates::{CertificateReport, CheckRecord, Thresholds, Verdict};
pub use config::{parse_config, parse_config_str, RunConfig};
pub use mountain_pass::{mpa_solve, MpaOptions, SolveResult};
pub use penalization::{make_penalized, PenalizedNonlinearity};
pub use pipeline::{run, run_pipeline, Command, Report, RunOutput};
pub use problem::{HypothesisReport, Nonlinearity, Potential, ProblemSpec};
pub use radial::{DiscreteRadialFunction, Energy, RadialGrid};
