//! Stage orchestration: hypotheses → penalize → grid → geometry → solve →
//! certificates → thresholds.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::certificates::{
    check_consistency, check_decay, check_linf, check_norm_bound, energy_bounds, moser_constants, moser_diagnostic,
    multi_bump_d_l, sweep_check, thresholds, BoundContext, CertificateReport, CheckRecord, EnergyBounds,
    MoserConstants, MultiBump, PairThresholds, SweepReport, Thresholds,
};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::mountain_pass::{
    compute_d, default_bump, estimate_beta_rho, find_endpoint_e, mpa_solve, BetaRho, DConstant, SolveResult,
};
use crate::penalization::{make_penalized, PenalizedNonlinearity};
use crate::problem::{
    ar_defect_constant, check_hypotheses, effective_v_infty, lower_bound_constants, HypothesisMode,
    HypothesisReport, Probe, ProblemSpec,
};
use crate::radial::{lp_norm_scaled, DiscreteRadialFunction, Energy, RadialGrid};

/// Exponent bound on the Moser chain diagnostic.
pub const MOSER_CHAIN_STEPS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    /// Hypotheses only.
    Check,
    /// Full pipeline.
    Solve,
    /// Certificates for an externally supplied profile on the configured grid.
    Certify { r: Vec<f64>, u: Vec<f64> },
    /// Table mode over (R_j, Λ_j).
    Sweep,
    /// Constants only.
    Thresholds,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Solve => "solve",
            Command::Certify { .. } => "certify",
            Command::Sweep => "sweep",
            Command::Thresholds => "thresholds",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub stage: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Geometry {
    /// F(r,s) ≥ c1 s^θ − c2 on the bump ball.
    pub c1: f64,
    pub c2: f64,
    pub v_infty: f64,
    pub d: DConstant,
    pub c_ar: f64,
    pub bounds: EnergyBounds,
    pub beta_rho: Option<BetaRho>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveSummary {
    pub level: f64,
    pub level_estimate: f64,
    pub residual: f64,
    pub iterations: usize,
    pub newton_steps: usize,
    pub converged: bool,
    pub nonnegative: Option<bool>,
    pub min_value: f64,
    pub sup_norm: f64,
    pub path_max_first: f64,
    pub path_max_last: f64,
    pub path_max_monotone: bool,
    pub endpoint_energy: Option<f64>,
    pub diagnostics: Vec<String>,
}

impl SolveSummary {
    fn from_result(res: &SolveResult, endpoint_energy: Option<f64>) -> Self {
        let h = &res.path_max_history;
        Self {
            level: res.level,
            level_estimate: res.level_estimate,
            residual: res.residual,
            iterations: res.iterations,
            newton_steps: res.newton_steps,
            converged: res.converged,
            nonnegative: res.nonnegative,
            min_value: res.min_value,
            sup_norm: res.u.sup_norm(),
            path_max_first: h.first().copied().unwrap_or(f64::NAN),
            path_max_last: h.last().copied().unwrap_or(f64::NAN),
            path_max_monotone: h.windows(2).all(|w| w[1] <= w[0] + 1e-12 * w[0].abs().max(1.0)),
            endpoint_energy,
            diagnostics: res.diagnostics.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdSection {
    pub standard: Thresholds,
    /// Declared Λ ≥ λ*.
    pub declared_lambda_meets: bool,
    /// Sampled (V2) constant inf_{r ≥ R} r^{(N−2)(q−2)}V ≥ λ*, standard mode.
    pub v2_meets: Option<bool>,
    /// μ ≤ μ* and (V4) constant ≥ k·C, exponential mode.
    pub exponential_meets: Option<bool>,
    pub multi_bump: Option<MultiBump>,
    pub sweep: Option<SweepReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairOutcome {
    pub radius: f64,
    pub lambda: f64,
    pub thresholds: Option<Thresholds>,
    pub solve: Option<SolveSummary>,
    pub certificates: Option<CertificateReport>,
    pub failure: Option<Failure>,
}

impl PairOutcome {
    fn ok(&self) -> bool {
        self.failure.is_none()
            && self.solve.as_ref().is_some_and(|s| s.converged)
            && self.certificates.as_ref().is_some_and(|c| c.all_pass())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridInfo {
    pub dimension: usize,
    pub r_max: f64,
    pub intervals: usize,
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub command: String,
    pub version: String,
    pub grid: GridInfo,
    pub path_points: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub trials: usize,
    pub moser_chain_steps: usize,
    pub penalization_fallbacks: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub hypotheses: Option<HypothesisReport>,
    pub geometry: Option<Geometry>,
    pub solve: Option<SolveSummary>,
    pub certificates: Option<CertificateReport>,
    pub thresholds: Option<ThresholdSection>,
    pub sweep_pairs: Vec<PairOutcome>,
    pub provenance: Provenance,
    pub timings: Vec<Timing>,
    pub failure: Option<Failure>,
}

impl Report {
    /// Exit status contract: converged and every enabled certificate passed.
    pub fn success(&self, command: &Command) -> bool {
        if self.failure.is_some() {
            return false;
        }
        match command {
            Command::Check => self.hypotheses.as_ref().is_some_and(|h| h.passed()),
            Command::Thresholds => self.thresholds.is_some(),
            Command::Solve => {
                self.solve.as_ref().is_some_and(|s| s.converged)
                    && self.certificates.as_ref().is_some_and(|c| c.all_pass())
            }
            Command::Certify { .. } => self.certificates.as_ref().is_some_and(|c| c.all_pass()),
            Command::Sweep => self.thresholds.is_some() && self.sweep_pairs.iter().all(PairOutcome::ok),
        }
    }
}

/// One CSV row of the emitted profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileRow {
    pub r: f64,
    pub u: f64,
    pub v: f64,
    pub f: f64,
    pub g: f64,
    pub decay_bound: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: Report,
    pub profile: Option<Vec<ProfileRow>>,
}

impl RunOutput {
    pub fn success(&self, command: &Command) -> bool {
        self.report.success(command)
    }
}

#[derive(Default)]
struct Clock {
    timings: Vec<Timing>,
}

impl Clock {
    fn stage<T>(&mut self, name: &'static str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let start = Instant::now();
        let out = f().map_err(|e| e.at_stage(name));
        self.timings.push(Timing {
            stage: name.into(),
            seconds: start.elapsed().as_secs_f64(),
        });
        out
    }
}

fn failure_of(e: Error) -> Failure {
    match e {
        Error::Stage { stage, source } => Failure {
            stage: stage.into(),
            message: source.to_string(),
        },
        other => Failure {
            stage: "pipeline".into(),
            message: other.to_string(),
        },
    }
}

/// Full pipeline for the configured problem.
pub fn run_pipeline(cfg: &RunConfig) -> RunOutput {
    run(cfg, &Command::Solve)
}

pub fn run(cfg: &RunConfig, command: &Command) -> RunOutput {
    let grid_info = GridInfo {
        dimension: cfg.spec.dimension,
        r_max: cfg.grid.r_max,
        intervals: cfg.grid.nodes,
        h: cfg.grid.r_max / cfg.grid.nodes as f64,
    };
    let mut report = Report {
        hypotheses: None,
        geometry: None,
        solve: None,
        certificates: None,
        thresholds: None,
        sweep_pairs: Vec::new(),
        provenance: Provenance {
            command: command.name().into(),
            version: env!("CARGO_PKG_VERSION").into(),
            grid: grid_info,
            path_points: cfg.solver.path_points,
            tol: cfg.solver.tol,
            max_iter: cfg.solver.max_iter,
            seed: cfg.solver.seed,
            trials: cfg.solver.trials,
            moser_chain_steps: MOSER_CHAIN_STEPS,
            penalization_fallbacks: None,
        },
        timings: Vec::new(),
        failure: None,
    };
    let mut clock = Clock::default();
    let mut profile = None;
    if let Err(e) = execute(cfg, command, &mut report, &mut clock, &mut profile) {
        report.failure = Some(failure_of(e));
    }
    report.timings = clock.timings;
    RunOutput { report, profile }
}

fn hypothesis_mode(cfg: &RunConfig) -> HypothesisMode {
    if cfg.spec.exponential.is_some() {
        HypothesisMode::Exponential
    } else if cfg.is_sweep() {
        HypothesisMode::Sweep
    } else {
        HypothesisMode::Standard
    }
}

fn execute(
    cfg: &RunConfig,
    command: &Command,
    report: &mut Report,
    clock: &mut Clock,
    profile: &mut Option<Vec<ProfileRow>>,
) -> Result<()> {
    let spec = &cfg.spec;
    let pairs: Vec<(f64, f64)> = cfg.sweep.as_ref().map(|s| s.table.clone()).unwrap_or_default();
    let hyp = clock.stage("hypotheses", || {
        check_hypotheses(spec, &Probe::new(spec, cfg.grid.r_max), hypothesis_mode(cfg), &pairs)
    })?;
    report.hypotheses = Some(hyp.clone());
    let failed = hyp.failures();
    if let Some(&first) = failed.first() {
        return Err(Error::Hypothesis {
            hypothesis: first,
            detail: format!("failed hypotheses: {}", failed.join(", ")),
        }
        .at_stage("hypotheses"));
    }
    if *command == Command::Check {
        return Ok(());
    }

    let pen = clock.stage("penalize", || make_penalized(spec))?;
    let grid = clock.stage("grid", || RadialGrid::new(spec.dimension, cfg.grid.r_max, cfg.grid.nodes))?;
    let ctx = BoundContext::from_report(&hyp);
    let mut geo = clock.stage("geometry", || geometry(spec, &grid, &ctx))?;
    report.geometry = Some(geo.clone());

    match command {
        Command::Check => unreachable!(),
        Command::Thresholds | Command::Sweep => {}
        Command::Solve => {
            let solved = solve_and_certify(cfg, spec, &grid, &pen, &mut geo, &ctx, clock)?;
            report.solve = Some(solved.summary);
            report.certificates = Some(solved.certificates);
            *profile = Some(solved.rows);
            report.geometry = Some(geo.clone());
        }
        Command::Certify { r, u } => {
            let u = clock.stage("profile", || ingest_profile(&grid, r, u))?;
            let (certs, moser) =
                clock.stage("certificates", || certify(&grid, spec, &pen, &u, &geo.bounds, &ctx, None))?;
            report.certificates = Some(certs);
            *profile = Some(profile_rows(&grid, spec, &pen, &u, moser.m));
        }
    }
    report.provenance.penalization_fallbacks = Some(pen.fallback_count());

    let section = clock.stage("thresholds", || threshold_section(cfg, spec, &grid, &geo, &ctx, &hyp))?;
    report.thresholds = Some(section);

    if *command == Command::Sweep {
        let outcomes = clock.stage("sweep", || Ok(sweep_pairs(cfg, &ctx)))?;
        let by_radius = outcomes.clone();
        let tilde = report.thresholds.as_ref().and_then(|t| t.standard.lambda_tilde_star);
        let sweep = clock.stage("sweep", || {
            sweep_check(
                &pairs,
                spec,
                |radius| {
                    let o = by_radius
                        .iter()
                        .find(|o| o.radius == radius)
                        .ok_or_else(|| Error::Precondition(format!("no outcome for R = {radius}")))?;
                    let t = o.thresholds.as_ref().ok_or_else(|| {
                        Error::Precondition(format!(
                            "thresholds unavailable at R = {radius}: {}",
                            o.failure.as_ref().map(|f| f.message.as_str()).unwrap_or("unknown")
                        ))
                    })?;
                    Ok(PairThresholds {
                        lambda_star: t.lambda_star,
                        lambda_star_l: None,
                    })
                },
                tilde,
            )
        })?;
        if let Some(t) = report.thresholds.as_mut() {
            t.sweep = Some(sweep);
        }
        report.sweep_pairs = outcomes;
    }
    Ok(())
}

/// Constants c1, c2, V∞, d, C_ar and the energy bounds; independent of the solve.
pub fn geometry(spec: &ProblemSpec, grid: &RadialGrid, ctx: &BoundContext) -> Result<Geometry> {
    let (c1, c2) = lower_bound_constants(spec)?;
    let v_infty = effective_v_infty(spec);
    let bump = default_bump(grid, spec.r0);
    let d = compute_d(spec, grid, &bump, c1, c2, v_infty)?;
    let c_ar = ar_defect_constant(spec);
    let bounds = energy_bounds(spec, d.d, ctx, c_ar)?;
    Ok(Geometry {
        c1,
        c2,
        v_infty,
        d,
        c_ar,
        bounds,
        beta_rho: None,
    })
}

/// Thresholds at the configured radius, plus multi-bump data in odd mode or
/// when requested by the sweep table.
pub fn threshold_section(
    cfg: &RunConfig,
    spec: &ProblemSpec,
    grid: &RadialGrid,
    geo: &Geometry,
    ctx: &BoundContext,
    hyp: &HypothesisReport,
) -> Result<ThresholdSection> {
    let standard = thresholds(spec, &geo.bounds, ctx)?;
    let bumps = cfg.sweep.as_ref().and_then(|s| s.bumps).or(spec.odd.then_some(2));
    let multi_bump = bumps
        .map(|l| multi_bump_d_l(spec, l, grid, geo.c1, geo.c2, geo.v_infty, ctx, geo.c_ar))
        .transpose()?;
    let (v2_meets, exponential_meets) = match (spec.exponential, standard.mu_star) {
        (Some(e), Some(mu_star)) => (
            None,
            Some(e.mu <= mu_star && hyp.v4_inf.is_some_and(|v| v >= standard.lambda_star)),
        ),
        _ => (Some(hyp.v2_inf >= standard.lambda_star), None),
    };
    Ok(ThresholdSection {
        declared_lambda_meets: spec.lambda >= standard.lambda_star,
        standard,
        v2_meets,
        exponential_meets,
        multi_bump,
        sweep: None,
    })
}

struct SolvedRun {
    summary: SolveSummary,
    certificates: CertificateReport,
    rows: Vec<ProfileRow>,
}

fn solve_and_certify(
    cfg: &RunConfig,
    spec: &ProblemSpec,
    grid: &RadialGrid,
    pen: &PenalizedNonlinearity,
    geo: &mut Geometry,
    ctx: &BoundContext,
    clock: &mut Clock,
) -> Result<SolvedRun> {
    let energy = clock.stage("energy", || Energy::new(grid, pen))?;
    let bump = default_bump(grid, spec.r0);
    let e = clock.stage("endpoint", || find_endpoint_e(&energy, &bump))?;
    let endpoint_energy = energy.j(&e);
    let res = clock.stage("solve", || mpa_solve(&energy, &e, &cfg.solver.mpa_options()))?;
    let beta_rho = clock.stage("beta_rho", || {
        estimate_beta_rho(&energy, cfg.solver.trials.max(8), cfg.solver.seed, &[bump.clone(), res.u.clone()])
    })?;
    geo.bounds.beta = Some(beta_rho.beta);
    geo.bounds.rho = Some(beta_rho.rho);
    geo.bounds.level = Some(res.level);
    geo.beta_rho = Some(beta_rho);
    let (certificates, moser) = clock.stage("certificates", || {
        certify(grid, spec, pen, &res.u, &geo.bounds, ctx, Some((res.level, geo.d.d)))
    })?;
    let rows = profile_rows(grid, spec, pen, &res.u, moser.m);
    Ok(SolvedRun {
        summary: SolveSummary::from_result(&res, Some(endpoint_energy)),
        certificates,
        rows,
    })
}

/// All certificates for `u`. `level` carries (c, d) when a solve produced u.
pub fn certify(
    grid: &RadialGrid,
    spec: &ProblemSpec,
    pen: &PenalizedNonlinearity,
    u: &DiscreteRadialFunction,
    bounds: &EnergyBounds,
    ctx: &BoundContext,
    level: Option<(f64, f64)>,
) -> Result<(CertificateReport, MoserConstants)> {
    let mut checks: Vec<CheckRecord> = Vec::new();
    checks.push(check_norm_bound(grid, spec, u, bounds));
    let moser = moser_constants(spec, ctx, lp_norm_scaled(grid, u, spec.critical_exponent()))?;
    checks.push(check_linf(u, &moser));
    checks.push(check_decay(grid, u, moser.m, spec.radius));
    checks.push(check_consistency(grid, spec, pen, u));
    let (chain, record) = moser_diagnostic(grid, spec, u, ctx, MOSER_CHAIN_STEPS)?;
    checks.push(record);
    if let Some((c, d)) = level {
        checks.push(level_check(c, d));
    }
    Ok((CertificateReport::assemble(checks, chain), moser))
}

fn level_check(c: f64, d: f64) -> CheckRecord {
    let margin = d - c;
    let mut constants = std::collections::BTreeMap::new();
    constants.insert("c".to_string(), c);
    constants.insert("d".to_string(), d);
    CheckRecord {
        name: "level_bound".into(),
        pass: c > 0.0 && margin >= -1e-6 * d.abs(),
        margin,
        constants,
        provenance: "mountain_pass::compute_d (upper bound on the mountain-pass level)".into(),
        notes: Vec::new(),
    }
}

fn ingest_profile(grid: &RadialGrid, r: &[f64], u: &[f64]) -> Result<DiscreteRadialFunction> {
    if r.len() != grid.len() || u.len() != grid.len() {
        return Err(Error::Precondition(format!(
            "profile has {} rows, grid has {} nodes",
            r.len(),
            grid.len()
        )));
    }
    for (i, (&a, &b)) in r.iter().zip(grid.nodes()).enumerate() {
        if (a - b).abs() > 1e-12 * b.abs().max(1.0) {
            return Err(Error::Precondition(format!("row {i}: r = {a} does not match grid node {b}")));
        }
    }
    DiscreteRadialFunction::from_values(grid, u.to_vec())
}

pub fn profile_rows(
    grid: &RadialGrid,
    spec: &ProblemSpec,
    pen: &PenalizedNonlinearity,
    u: &DiscreteRadialFunction,
    m: f64,
) -> Vec<ProfileRow> {
    let power = spec.dimension as f64 - 2.0;
    grid.nodes()
        .iter()
        .zip(u.values())
        .map(|(&r, &s)| ProfileRow {
            r,
            u: s,
            v: spec.v(r),
            f: spec.f(r, s),
            g: pen.g(r, s),
            decay_bound: (r >= spec.radius).then(|| m * (spec.radius / r).powf(power)),
        })
        .collect()
}

/// Per-pair runs at R = R_j, each with its own grid and penalization.
fn sweep_pairs(cfg: &RunConfig, ctx: &BoundContext) -> Vec<PairOutcome> {
    let table = cfg.sweep.as_ref().map(|s| s.table.clone()).unwrap_or_default();
    table
        .par_iter()
        .map(|&(radius, lambda)| {
            let mut outcome = PairOutcome {
                radius,
                lambda,
                thresholds: None,
                solve: None,
                certificates: None,
                failure: None,
            };
            let spec = ProblemSpec {
                radius,
                lambda,
                ..cfg.spec.clone()
            };
            let mut clock = Clock::default();
            let mut run = || -> Result<()> {
                let pen = clock.stage("penalize", || make_penalized(&spec))?;
                let grid = clock.stage("grid", || RadialGrid::new(spec.dimension, cfg.grid.r_max, cfg.grid.nodes))?;
                let mut geo = clock.stage("geometry", || geometry(&spec, &grid, ctx))?;
                outcome.thresholds = Some(clock.stage("thresholds", || thresholds(&spec, &geo.bounds, ctx))?);
                let solved = solve_and_certify(cfg, &spec, &grid, &pen, &mut geo, ctx, &mut clock)?;
                outcome.solve = Some(solved.summary);
                outcome.certificates = Some(solved.certificates);
                Ok(())
            };
            if let Err(e) = run() {
                outcome.failure = Some(failure_of(e));
            }
            outcome
        })
        .collect()
}
