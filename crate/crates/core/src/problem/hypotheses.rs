//! Sampling-based checks of the structural hypotheses on V and f.

use serde::Serialize;

use super::potential::TailWeight;
use super::sobolev::sobolev_constant;
use super::spec::ProblemSpec;
use crate::error::{Error, Result};
use crate::numerics::roots::{bisect, golden_max, golden_min};
use crate::numerics::{ball_volume, comparison_slack, linspace, logspace};

/// Sample layout used by the hypothesis checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Probe {
    pub r_max: f64,
    /// Samples of V on [0, r_max].
    pub r_samples: usize,
    /// Radii at which f is sampled when it depends on r.
    pub f_radii: usize,
    pub s_min: f64,
    pub s_max: f64,
    pub s_per_decade: usize,
}

impl Probe {
    pub fn new(spec: &ProblemSpec, r_max: f64) -> Self {
        Probe {
            r_max,
            r_samples: 2001,
            f_radii: 17,
            s_min: 1e-8,
            s_max: (10.0 * spec.s0).max(1e3),
            s_per_decade: 16,
        }
    }

    /// Same window at twice the density.
    pub fn refined(&self) -> Self {
        Probe {
            r_samples: 2 * self.r_samples - 1,
            f_radii: 2 * self.f_radii - 1,
            s_per_decade: 2 * self.s_per_decade,
            ..self.clone()
        }
    }

    pub fn radii(&self) -> Vec<f64> {
        linspace(0.0, self.r_max, self.r_samples)
    }

    pub fn f_radii(&self, spec: &ProblemSpec) -> Vec<f64> {
        if spec.nonlinearity.is_autonomous() {
            vec![0.0]
        } else {
            linspace(0.0, self.r_max, self.f_radii)
        }
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        let decades = (self.s_max / self.s_min).log10().ceil().max(1.0) as usize;
        logspace(self.s_min, self.s_max, decades * self.s_per_decade + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HypothesisMode {
    Standard,
    Exponential,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum V1Case {
    NonnegativeWithWell,
    SignChanging,
}

/// Negative set Ω = {V < 0} on the probe.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmegaStats {
    pub measure: f64,
    pub alpha: f64,
    pub intervals: Vec<(f64, f64)>,
    pub bounded: bool,
    pub bounded_below: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub r: f64,
    pub s: f64,
    pub defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepEntry {
    pub radius: f64,
    pub lambda: f64,
    pub infimum: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub mode: HypothesisMode,
    pub f1_bound: f64,
    pub f1_ok: bool,
    pub f1_hat_bound: Option<f64>,
    pub f1_hat_ok: Option<bool>,
    pub f2_margin: f64,
    pub f2_ok: bool,
    pub f3_ok: bool,
    pub f3_witness: Option<Witness>,
    pub f4_ok: Option<bool>,
    pub v1_case: V1Case,
    pub omega_measure: f64,
    pub alpha: f64,
    pub omega_bounded: bool,
    pub sobolev_s: f64,
    pub v1_margin: f64,
    pub v1_ok: bool,
    pub v_sup_bump: f64,
    pub v_infty: f64,
    pub v12_ok: bool,
    pub v2_inf: f64,
    pub v2_ok: bool,
    pub v3_inf: f64,
    pub v4_inf: Option<f64>,
    pub v4_ok: Option<bool>,
    pub v6_inf: Option<f64>,
    pub v5: Vec<SweepEntry>,
    pub warnings: Vec<String>,
}

impl HypothesisReport {
    /// Labels of the hypotheses required by the active mode that failed.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let exp = self.mode == HypothesisMode::Exponential;
        if exp {
            if self.f1_hat_ok != Some(true) {
                out.push("f̂1");
            }
        } else if !self.f1_ok {
            out.push("f1");
        }
        if !self.f2_ok {
            out.push("f2");
        }
        if !self.f3_ok {
            out.push("f3");
        }
        if self.f4_ok == Some(false) {
            out.push("f4");
        }
        if !self.v1_ok {
            out.push("V1");
        }
        match self.mode {
            HypothesisMode::Standard => {
                if !self.v2_ok {
                    out.push("V2");
                }
            }
            HypothesisMode::Exponential => {
                if self.v4_ok != Some(true) {
                    out.push("V4");
                }
            }
            HypothesisMode::Sweep => {
                if self.v5.iter().any(|e| !e.ok) {
                    out.push("V5");
                }
            }
        }
        out
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }
}

fn negative_intervals(spec: &ProblemSpec, radii: &[f64]) -> Vec<(f64, f64)> {
    let v = |r: f64| spec.v(r);
    let mut out = Vec::new();
    let mut start = if v(radii[0]) < 0.0 { Some(radii[0]) } else { None };
    for w in radii.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (na, nb) = (v(a) < 0.0, v(b) < 0.0);
        if na != nb {
            let x = bisect(v, a, b, 1e-14).unwrap_or(0.5 * (a + b));
            if nb {
                start = Some(x);
            } else if let Some(s) = start.take() {
                out.push((s, x));
            }
        }
    }
    if let Some(s) = start {
        out.push((s, *radii.last().unwrap()));
    }
    out
}

/// Measure of Ω and α = −inf_Ω V, refining the probe until the sign pattern is stable.
pub fn omega_stats(spec: &ProblemSpec, probe: &Probe) -> OmegaStats {
    let mut p = probe.clone();
    let mut intervals = negative_intervals(spec, &p.radii());
    for _ in 0..4 {
        let finer = p.refined();
        let next = negative_intervals(spec, &finer.radii());
        let stable = next.len() == intervals.len();
        p = finer;
        intervals = next;
        if stable {
            break;
        }
    }
    let n = spec.dimension;
    let measure: f64 = intervals
        .iter()
        .map(|&(a, b)| ball_volume(n, b) - ball_volume(n, a))
        .sum();
    let radii = p.radii();
    let (imin, vmin) = radii
        .iter()
        .enumerate()
        .map(|(i, &r)| (i, spec.v(r)))
        .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    let bounded_below = vmin.is_finite();
    let mut alpha = 0.0;
    if bounded_below && vmin < 0.0 {
        let lo = radii[imin.saturating_sub(1)];
        let hi = radii[(imin + 1).min(radii.len() - 1)];
        let (_, refined) = golden_min(|r| spec.v(r), lo, hi, 1e-12);
        alpha = -refined.min(vmin);
    }
    let r_max = probe.r_max;
    let bounded = match spec.potential.positive_beyond() {
        Some(rho) => rho <= r_max || intervals.is_empty(),
        None => intervals.is_empty() && spec.v(r_max) >= 0.0,
    } && !intervals.iter().any(|&(_, b)| b >= r_max);
    OmegaStats {
        measure,
        alpha,
        intervals,
        bounded,
        bounded_below,
    }
}

/// inf_{r ≥ from} W(r)V(r): refined sampling on [from, r_max] plus the family tail bound.
/// Returns the value and whether the tail was certified by the family descriptor.
pub fn weighted_infimum(spec: &ProblemSpec, probe: &Probe, from: f64, weight: TailWeight) -> (f64, bool) {
    let wv = |r: f64| weight.apply(r, spec.v(r));
    if from >= probe.r_max {
        return match spec.potential.tail_infimum(weight, from) {
            Some(t) => (t, true),
            None => (wv(from), false),
        };
    }
    let rs = linspace(from, probe.r_max, probe.r_samples);
    let (imin, vmin) = rs
        .iter()
        .enumerate()
        .map(|(i, &r)| (i, wv(r)))
        .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    let lo = rs[imin.saturating_sub(1)];
    let hi = rs[(imin + 1).min(rs.len() - 1)];
    let (_, refined) = golden_min(wv, lo, hi, 1e-12);
    let interior = vmin.min(refined);
    match spec.potential.tail_infimum(weight, probe.r_max) {
        Some(t) => (interior.min(t), true),
        None => (interior, false),
    }
}

/// sup of V over the bump ball B_{r₀}.
pub fn sup_on_bump(spec: &ProblemSpec) -> f64 {
    let rs = linspace(0.0, spec.r0, 401);
    let (imax, vmax) = rs
        .iter()
        .enumerate()
        .map(|(i, &r)| (i, spec.v(r)))
        .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    let lo = rs[imax.saturating_sub(1)];
    let hi = rs[(imax + 1).min(rs.len() - 1)];
    let (_, refined) = golden_max(|r| spec.v(r), lo, hi, 1e-12);
    vmax.max(refined)
}

/// Effective bump ceiling V∞: configured value, else max(0, sup_{B_{r₀}} V).
pub fn effective_v_infty(spec: &ProblemSpec) -> f64 {
    spec.v_infty.unwrap_or_else(|| sup_on_bump(spec).max(0.0))
}

fn signed(magnitudes: &[f64], odd: bool) -> Vec<f64> {
    let mut out: Vec<f64> = magnitudes.to_vec();
    if odd {
        out.extend(magnitudes.iter().map(|s| -s));
    }
    out
}

/// Max over r of a log-evaluated ratio on two leading decades: (smallest, next).
fn near_zero_decades<F: Fn(f64, f64) -> f64>(radii: &[f64], s_min: f64, per_decade: usize, ln_ratio: F) -> (f64, f64) {
    let first = logspace(s_min, 10.0 * s_min, per_decade + 1);
    let second = logspace(10.0 * s_min, 100.0 * s_min, per_decade + 1);
    let sup = |ss: &[f64]| {
        let mut m: f64 = 0.0;
        for &r in radii {
            for &s in ss {
                m = m.max(ln_ratio(r, s).exp());
            }
        }
        m
    };
    (sup(&first), sup(&second[1..]))
}

fn diverging(smallest: f64, next: f64) -> bool {
    !smallest.is_finite() || (smallest > 0.0 && smallest > 1.5 * next)
}

pub fn check_hypotheses(
    spec: &ProblemSpec,
    probe: &Probe,
    mode: HypothesisMode,
    sweep: &[(f64, f64)],
) -> Result<HypothesisReport> {
    let odd = spec.odd;
    let q = spec.q;
    let f_radii = probe.f_radii(spec);
    let mags = probe.magnitudes();
    let mut warnings = Vec::new();

    // (f1): |s f|/|s|^q over the smallest decade
    let ln_f1 = |r: f64, s: f64| spec.nonlinearity.ln_abs(r, s, odd) + (1.0 - q) * s.ln();
    let (f1_bound, f1_next) = near_zero_decades(&f_radii, probe.s_min, probe.s_per_decade, ln_f1);
    let f1_ok = !diverging(f1_bound, f1_next);

    let (f1_hat_bound, f1_hat_ok) = match spec.exponential {
        Some(e) => {
            let ln = |r: f64, s: f64| spec.nonlinearity.ln_abs(r, s, odd) + e.a / s.powf(q);
            let (b, next) = near_zero_decades(&f_radii, probe.s_min, probe.s_per_decade, ln);
            (Some(b), Some(!diverging(b, next)))
        }
        None => (None, None),
    };

    // (f2)
    let mut f2_margin = f64::INFINITY;
    let mut f2_ok = true;
    for &r in &f_radii {
        for s in signed(&mags, true) {
            let bound = spec.a1 * s.abs().powf(spec.p - 1.0) + spec.a2;
            let gap = bound - spec.f(r, s).abs();
            f2_margin = f2_margin.min(gap);
            if gap < -comparison_slack(bound) {
                f2_ok = false;
            }
        }
    }

    // (f3): s f ≥ θF > 0 for |s| ≥ S₀
    let mut f3_mags: Vec<f64> = mags.iter().copied().filter(|&s| s >= spec.s0).collect();
    if spec.s0 > 0.0 {
        f3_mags.insert(0, spec.s0);
    }
    let mut f3_witness = None;
    'outer: for &r in &f_radii {
        for s in signed(&f3_mags, odd) {
            let f = spec.f(r, s);
            let big = spec.big_f(r, s);
            let lhs = s * f;
            let rhs = spec.theta * big;
            let underflow = big == 0.0 && f.abs() < 1e-300;
            let defect = lhs - rhs;
            if (defect < -comparison_slack(lhs.abs().max(rhs.abs())) || big <= 0.0) && !underflow {
                f3_witness = Some(Witness { r, s, defect });
                break 'outer;
            }
        }
    }
    let f3_ok = f3_witness.is_none();

    let f4_ok = odd.then(|| {
        f_radii.iter().all(|&r| {
            mags.iter().all(|&s| spec.f(r, -s) == -spec.f(r, s))
        })
    });

    // (V1) and (V12)
    let sobolev_s = sobolev_constant(spec.dimension)?;
    let omega = omega_stats(spec, probe);
    let v_sup_bump = sup_on_bump(spec);
    let v_infty = effective_v_infty(spec);
    let v12_ok = v_sup_bump <= v_infty + comparison_slack(v_infty);
    let (v1_case, omega_measure, alpha, v1_margin, v1_ok);
    if omega.intervals.is_empty() && omega.bounded_below {
        v1_case = V1Case::NonnegativeWithWell;
        omega_measure = 0.0;
        alpha = 0.0;
        v1_margin = f64::INFINITY;
        v1_ok = v12_ok && omega.bounded;
    } else {
        v1_case = V1Case::SignChanging;
        omega_measure = omega.measure;
        alpha = omega.alpha;
        v1_margin = if omega.measure > 0.0 {
            sobolev_s / omega.measure.powf(2.0 / spec.dimension as f64) - alpha
        } else {
            f64::INFINITY
        };
        v1_ok = omega.bounded && omega.bounded_below && v1_margin > 0.0;
    }
    if !omega.bounded_below {
        warnings.push("V is unbounded below on the probe".into());
    }

    // (V2)/(V3)
    let gamma = spec.decay_exponent();
    let (v2_inf, certified) = weighted_infimum(spec, probe, spec.radius, TailWeight::Power { gamma });
    if !certified {
        warnings.push(format!(
            "tail of r^{gamma}V beyond r = {} not certified by the {} family; sampled value used",
            probe.r_max,
            spec.potential.tag()
        ));
    }
    let v2_ok = v2_inf > 0.0 && v2_inf.is_finite() || v2_inf == f64::INFINITY;
    let v3_inf = v2_inf / spec.radius.powf(gamma);

    // (V4)/(V6)
    let (v4_inf, v4_ok, v6_inf) = match spec.exponential {
        Some(e) => {
            let kappa = (spec.dimension as f64 - 2.0) * q;
            let (v4, c4) = weighted_infimum(spec, probe, spec.radius, TailWeight::Exp { mu: e.mu, kappa });
            let mu6 = e.mu / spec.radius.powf(kappa);
            let (v6, c6) = weighted_infimum(spec, probe, spec.radius, TailWeight::Exp { mu: mu6, kappa });
            if !(c4 && c6) {
                warnings.push("exponential-weight tail not certified; sampled value used".into());
            }
            (Some(v4), Some(v4 > 0.0), Some(v6))
        }
        None => (None, None, None),
    };

    // (V5)
    let mut v5 = Vec::new();
    if mode == HypothesisMode::Sweep {
        if spec.s0 != 0.0 {
            warnings.push("sweep mode expects S0 = 0".into());
        }
        for &(radius, lambda) in sweep {
            let (inf, c) = weighted_infimum(spec, probe, radius, TailWeight::Power { gamma });
            if !c {
                warnings.push(format!("sweep tail at R = {radius} not certified"));
            }
            v5.push(SweepEntry {
                radius,
                lambda,
                infimum: inf,
                ok: inf >= lambda - comparison_slack(lambda),
            });
        }
    }

    Ok(HypothesisReport {
        mode,
        f1_bound,
        f1_ok,
        f1_hat_bound,
        f1_hat_ok,
        f2_margin,
        f2_ok,
        f3_ok,
        f3_witness,
        f4_ok,
        v1_case,
        omega_measure,
        alpha,
        omega_bounded: omega.bounded,
        sobolev_s,
        v1_margin,
        v1_ok,
        v_sup_bump,
        v_infty,
        v12_ok,
        v2_inf,
        v2_ok,
        v3_inf,
        v4_inf,
        v4_ok,
        v6_inf,
        v5,
        warnings,
    })
}

fn growth_radii(spec: &ProblemSpec) -> Vec<f64> {
    if spec.nonlinearity.is_autonomous() {
        vec![0.0]
    } else {
        linspace(0.0, 10.0 * spec.radius, 33)
    }
}

type LnRatio<'a> = Box<dyn Fn(f64, f64) -> f64 + 'a>;

/// C with |f(r,s)| ≤ C|s|^{q−1} for |s| ≤ cap, or in exponential mode
/// |f| ≤ C e^{−â/|s|^q}|s| with â = a/2.
pub fn growth_constant_near_zero(spec: &ProblemSpec, cap: f64) -> Result<f64> {
    if !(cap > 0.0 && cap.is_finite()) {
        return Err(Error::Precondition(format!("growth cap must be positive, got {cap}")));
    }
    let odd = spec.odd;
    let q = spec.q;
    let (label, ln_h): (&'static str, LnRatio<'_>) = match spec.exponential {
        None => ("f1", Box::new(move |r, s| spec.nonlinearity.ln_abs(r, s, odd) - (q - 1.0) * s.ln())),
        Some(e) => {
            let a_hat = 0.5 * e.a;
            (
                "f̂1",
                Box::new(move |r, s| spec.nonlinearity.ln_abs(r, s, odd) + a_hat / s.powf(q) - s.ln()),
            )
        }
    };
    let radii = growth_radii(spec);
    let h = |s: f64| radii.iter().map(|&r| ln_h(r, s).exp()).fold(0.0, f64::max);

    const PER_DECADE: i32 = 32;
    let k_lo = -12 * PER_DECADE;
    let k_hi = (cap.log10() * PER_DECADE as f64).floor() as i32;
    let mut grid: Vec<f64> = (k_lo..=k_hi)
        .map(|k| 10f64.powf(k as f64 / PER_DECADE as f64))
        .filter(|&s| s <= cap)
        .collect();
    if grid.last().is_none_or(|&s| s < cap) {
        grid.push(cap);
    }
    let values: Vec<f64> = grid.iter().map(|&s| h(s)).collect();
    if values.iter().any(|v| v.is_nan() || v.is_infinite()) {
        return Err(Error::Hypothesis {
            hypothesis: label,
            detail: "growth ratio is not finite near the origin".into(),
        });
    }
    if grid.len() > 2 * PER_DECADE as usize {
        let d = PER_DECADE as usize;
        let smallest = values[..=d].iter().copied().fold(0.0, f64::max);
        let next = values[d + 1..=2 * d].iter().copied().fold(0.0, f64::max);
        if diverging(smallest, next) {
            return Err(Error::Hypothesis {
                hypothesis: label,
                detail: format!("growth ratio diverges as s -> 0 ({smallest:e} vs {next:e} a decade up)"),
            });
        }
    }
    let (imax, vmax) = values
        .iter()
        .copied()
        .enumerate()
        .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    let lo = grid[imax.saturating_sub(1)];
    let hi = grid[(imax + 1).min(grid.len() - 1)];
    let (_, refined) = golden_max(h, lo, hi, 1e-12);
    Ok(vmax.max(refined))
}

/// C_ar = max(0, sup_{r ≤ R, |s| ≤ S₀(1+δ)} F − s f/θ); zero when S₀ = 0.
pub fn ar_defect_constant(spec: &ProblemSpec) -> f64 {
    if spec.s0 == 0.0 {
        return 0.0;
    }
    let top = spec.s0 * 1.01;
    let radii = if spec.nonlinearity.is_autonomous() {
        vec![0.0]
    } else {
        linspace(0.0, spec.radius, 33)
    };
    let mags = linspace(0.0, top, 2001);
    let mut best = 0.0;
    for &r in &radii {
        let defect = |s: f64| spec.big_f(r, s) - s * spec.f(r, s) / spec.theta;
        for sign in [1.0, -1.0] {
            if sign < 0.0 && !spec.odd {
                continue;
            }
            let vals: Vec<f64> = mags.iter().map(|&s| defect(sign * s)).collect();
            let (i, v) = vals
                .iter()
                .copied()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
            let lo = mags[i.saturating_sub(1)];
            let hi = mags[(i + 1).min(mags.len() - 1)];
            let (_, refined) = golden_max(|s| defect(sign * s), lo, hi, 1e-12);
            best = f64::max(best, v.max(refined));
        }
    }
    best
}

/// Constants C₁ > 0, C₂ ≥ 0 with F(r,s) ≥ C₁s^θ − C₂ on the bump ball, s ≥ 0.
pub fn lower_bound_constants(spec: &ProblemSpec) -> Result<(f64, f64)> {
    let s_ref = spec.s0.max(1.0);
    let radii = if spec.nonlinearity.is_autonomous() {
        vec![0.0]
    } else {
        linspace(0.0, spec.r0, 33)
    };
    let c1 = radii
        .iter()
        .map(|&r| spec.big_f(r, s_ref) / s_ref.powf(spec.theta))
        .fold(f64::INFINITY, f64::min);
    if !(c1 > 0.0 && c1.is_finite()) {
        return Err(Error::Hypothesis {
            hypothesis: "f3",
            detail: format!("F(r, {s_ref}) is not positive on the bump ball"),
        });
    }
    let mut c2: f64 = 0.0;
    for &r in &radii {
        for s in linspace(0.0, s_ref, 2001) {
            c2 = c2.max(c1 * s.powf(spec.theta) - spec.big_f(r, s));
        }
    }
    Ok((c1, c2 * (1.0 + 1e-8)))
}

/// Check F(r,s) ≥ c1 s^θ − c2 on B_{r₀} × [0, s_max] by sampling.
pub fn validate_lower_bound(spec: &ProblemSpec, c1: f64, c2: f64, s_max: f64) -> Result<()> {
    if !(c1 > 0.0) || !(c2 >= 0.0) {
        return Err(Error::Precondition(format!("need c1 > 0 and c2 >= 0, got ({c1}, {c2})")));
    }
    let radii = if spec.nonlinearity.is_autonomous() {
        vec![0.0]
    } else {
        linspace(0.0, spec.r0, 17)
    };
    for &r in &radii {
        for s in linspace(0.0, s_max, 4001) {
            let lower = c1 * s.powf(spec.theta) - c2;
            let big = spec.big_f(r, s);
            if big < lower - comparison_slack(lower) {
                let label = if s > spec.s0 { "f3" } else { "f2" };
                return Err(Error::Hypothesis {
                    hypothesis: label,
                    detail: format!("F({r}, {s}) = {big} below {c1} s^theta - {c2}"),
                });
            }
        }
    }
    Ok(())
}
