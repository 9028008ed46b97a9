use serde::Serialize;

use crate::error::{Error, Result};
use crate::problem::ProblemSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    UnboundedTrend,
    Bounded,
    Inconclusive,
}

impl Trend {
    pub fn label(self) -> &'static str {
        match self {
            Trend::UnboundedTrend => "unbounded trend",
            Trend::Bounded => "bounded",
            Trend::Inconclusive => "inconclusive",
        }
    }
}

/// Thresholds for one radius R_j.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairThresholds {
    pub lambda_star: f64,
    pub lambda_star_l: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub radius: f64,
    pub lambda: f64,
    /// Λ_j / R_j^{(N−2)(q−2)}.
    pub ratio: f64,
    pub lambda_star: f64,
    pub meets_lambda_star: bool,
    pub lambda_star_l: Option<f64>,
    pub meets_lambda_star_l: Option<bool>,
    /// ratio_j ≥ λ̃* when S₀ = 0.
    pub meets_lambda_tilde: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub trend: Trend,
    pub verdict: String,
}

/// Monotone-tail heuristic on a finite window of ratios.
pub fn trend_of(ratios: &[f64]) -> Trend {
    let n = ratios.len();
    if n < 3 {
        return Trend::Inconclusive;
    }
    let tail = &ratios[n / 2..];
    let increasing = tail.windows(2).all(|w| w[1] > w[0]);
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let last = ratios[n - 1];
    if increasing && ratios.iter().all(|&r| r <= last) && last >= 2.0 * min {
        Trend::UnboundedTrend
    } else if tail.windows(2).all(|w| w[1] <= w[0]) {
        Trend::Bounded
    } else {
        Trend::Inconclusive
    }
}

/// Per-pair comparisons Λ_j ≥ λ*(R_j) plus the trend of Λ_j/R_j^{(N−2)(q−2)}.
/// `thresholds_at` supplies the thresholds evaluated at radius R_j.
pub fn sweep_check<F>(pairs: &[(f64, f64)], spec: &ProblemSpec, thresholds_at: F, lambda_tilde: Option<f64>) -> Result<SweepReport>
where
    F: Fn(f64) -> Result<PairThresholds>,
{
    if pairs.is_empty() {
        return Err(Error::Precondition("sweep table is empty".into()));
    }
    if pairs.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(Error::Precondition("sweep radii must be strictly increasing".into()));
    }
    let gamma = spec.decay_exponent();
    let mut rows = Vec::with_capacity(pairs.len());
    for &(radius, lambda) in pairs {
        let t = thresholds_at(radius)?;
        let ratio = lambda / radius.powf(gamma);
        rows.push(SweepRow {
            radius,
            lambda,
            ratio,
            lambda_star: t.lambda_star,
            meets_lambda_star: lambda >= t.lambda_star,
            lambda_star_l: t.lambda_star_l,
            meets_lambda_star_l: t.lambda_star_l.map(|s| lambda >= s),
            meets_lambda_tilde: lambda_tilde.map(|s| ratio >= s),
        });
    }
    let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    let trend = trend_of(&ratios);
    let met = rows.iter().filter(|r| r.meets_lambda_star).count();
    let verdict = format!(
        "{} over {} pairs (finite window, limsup not decided); {met} pairs meet lambda_star",
        trend.label(),
        rows.len()
    );
    Ok(SweepReport { rows, trend, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::fixtures::p1;

    fn flat(_: f64) -> Result<PairThresholds> {
        Ok(PairThresholds {
            lambda_star: 3.0,
            lambda_star_l: None,
        })
    }

    #[test]
    fn linear_ratios_are_unbounded() {
        let pairs: Vec<(f64, f64)> = (1..=6).map(|j| (j as f64, (j * j) as f64)).collect();
        let rep = sweep_check(&pairs, &p1(1.0), flat, None).unwrap();
        let ratios: Vec<f64> = rep.rows.iter().map(|r| r.ratio).collect();
        assert_eq!(ratios, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(rep.trend, Trend::UnboundedTrend);
        let flags: Vec<bool> = rep.rows.iter().map(|r| r.meets_lambda_star).collect();
        assert_eq!(flags, vec![false, true, true, true, true, true]);
    }

    #[test]
    fn constant_lambda_is_bounded() {
        let pairs: Vec<(f64, f64)> = (1..=6).map(|j| (j as f64, 5.0)).collect();
        let rep = sweep_check(&pairs, &p1(1.0), flat, Some(2.0)).unwrap();
        assert_eq!(rep.trend, Trend::Bounded);
        assert_eq!(rep.rows[1].meets_lambda_tilde, Some(true));
        assert_eq!(rep.rows[3].meets_lambda_tilde, Some(false));
    }

    #[test]
    fn rejects_unsorted_radii() {
        assert!(sweep_check(&[(2.0, 1.0), (1.0, 1.0)], &p1(1.0), flat, None).is_err());
    }
}
