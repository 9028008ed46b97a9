//! A posteriori certificates and the explicit constant chain behind the thresholds.

mod bounds;
mod checks;
mod moser;
mod multi_bump;
mod sweep;

use serde::Serialize;

pub use bounds::{energy_bounds, thresholds, EnergyBounds, Thresholds};
pub use checks::{
    check_consistency, check_decay, check_linf, check_norm_bound, moser_diagnostic, ChainStep, CheckRecord,
};
pub use moser::{moser_constants, moser_exponents, MoserConstants};
pub use multi_bump::{multi_bump_d_l, shell_bumps, MultiBump};
pub use sweep::{sweep_check, trend_of, PairThresholds, SweepReport, SweepRow, Trend};

use crate::problem::HypothesisReport;

/// Data from the negative part of V and the Sobolev constant entering the bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundContext {
    /// α with V ≥ −α on Ω.
    pub alpha: f64,
    /// |Ω|.
    pub omega_measure: f64,
    pub sobolev: f64,
}

impl BoundContext {
    pub fn from_report(report: &HypothesisReport) -> Self {
        Self {
            alpha: report.alpha,
            omega_measure: report.omega_measure,
            sobolev: report.sobolev_s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    SolvesOriginal,
    PenalizedOnly,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::SolvesOriginal => "solves-original",
            Verdict::PenalizedOnly => "penalized-only",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub checks: Vec<CheckRecord>,
    pub chain: Vec<ChainStep>,
    pub verdict: Verdict,
}

impl CertificateReport {
    /// The verdict is "solves-original" only when the consistency check ran and passed.
    pub fn assemble(checks: Vec<CheckRecord>, chain: Vec<ChainStep>) -> Self {
        let consistent = checks.iter().any(|c| c.name == "consistency" && c.pass && c.margin >= 0.0);
        let decay_ran = checks.iter().any(|c| c.name == "decay");
        let verdict = if consistent && decay_ran {
            Verdict::SolvesOriginal
        } else {
            Verdict::PenalizedOnly
        };
        Self { checks, chain, verdict }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}
