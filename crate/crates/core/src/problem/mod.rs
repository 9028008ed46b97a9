//! Problem description and hypothesis checks.

pub mod hypotheses;
pub mod nonlinearity;
pub mod potential;
pub mod sobolev;
pub mod spec;

pub use hypotheses::{
    ar_defect_constant, check_hypotheses, effective_v_infty, growth_constant_near_zero, lower_bound_constants,
    omega_stats, sup_on_bump, validate_lower_bound, weighted_infimum, HypothesisMode, HypothesisReport, OmegaStats,
    Probe, SweepEntry, V1Case, Witness,
};
pub use nonlinearity::{Modulation, Nonlinearity};
pub use potential::{Potential, TailWeight};
pub use sobolev::{instanton_rayleigh_quotient, sobolev_constant};
pub use spec::{ExponentialParams, ProblemSpec};

pub use spec::fixtures;
