//! TOML run configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mountain_pass::MpaOptions;
use crate::problem::{ExponentialParams, Nonlinearity, Potential, ProblemSpec};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    problem: RawProblem,
    exponential: Option<ExponentialParams>,
    #[serde(default)]
    grid: GridConfig,
    #[serde(default)]
    solver: SolverConfig,
    sweep: Option<SweepConfig>,
    #[serde(default)]
    output: OutputConfig,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    dimension: usize,
    potential: Potential,
    nonlinearity: Nonlinearity,
    q: f64,
    p: f64,
    a1: f64,
    #[serde(default)]
    a2: f64,
    theta: f64,
    #[serde(default)]
    s0: f64,
    #[serde(rename = "radius_R")]
    radius: f64,
    lambda: f64,
    r0: f64,
    v_infty: Option<f64>,
    #[serde(default)]
    odd: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub r_max: f64,
    pub nodes: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            r_max: 10.0,
            nodes: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub path_points: usize,
    pub tol: f64,
    pub max_iter: usize,
    /// Seed for the random directions of the β/ρ estimate.
    pub seed: u64,
    /// Trial directions for the β/ρ estimate.
    pub trials: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            path_points: 64,
            tol: 1e-8,
            max_iter: 5000,
            seed: 42,
            trials: 24,
        }
    }
}

impl SolverConfig {
    pub fn mpa_options(&self) -> MpaOptions {
        MpaOptions {
            path_points: self.path_points,
            tol: self.tol,
            max_iter: self.max_iter,
            ..MpaOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Pairs (R_j, Λ_j).
    pub table: Vec<(f64, f64)>,
    /// Number of disjoint bumps l for the Λ*_l comparison.
    pub bumps: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub spec: ProblemSpec,
    pub grid: GridConfig,
    pub solver: SolverConfig,
    pub sweep: Option<SweepConfig>,
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn from_spec(spec: ProblemSpec) -> Self {
        Self {
            spec,
            grid: GridConfig::default(),
            solver: SolverConfig::default(),
            sweep: None,
            output: OutputConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        if !(self.grid.r_max.is_finite() && self.grid.r_max >= self.spec.radius) {
            return Err(Error::config(
                "grid.r_max",
                format!("must be finite and at least radius_R = {}, got {}", self.spec.radius, self.grid.r_max),
            ));
        }
        if self.grid.nodes < 16 {
            return Err(Error::config("grid.nodes", format!("must be >= 16, got {}", self.grid.nodes)));
        }
        if self.solver.path_points < 8 {
            return Err(Error::config(
                "solver.path_points",
                format!("must be >= 8, got {}", self.solver.path_points),
            ));
        }
        if !(self.solver.tol > 0.0 && self.solver.tol < 1.0) {
            return Err(Error::config("solver.tol", format!("must lie in (0, 1), got {}", self.solver.tol)));
        }
        if self.solver.max_iter == 0 {
            return Err(Error::config("solver.max_iter", "must be >= 1"));
        }
        if self.solver.trials == 0 {
            return Err(Error::config("solver.trials", "must be >= 1"));
        }
        if let Some(sweep) = &self.sweep {
            if sweep.table.is_empty() {
                return Err(Error::config("sweep.table", "must not be empty"));
            }
            for (j, &(r, l)) in sweep.table.iter().enumerate() {
                if !(r.is_finite() && r > 0.0 && l.is_finite() && l > 0.0) {
                    return Err(Error::config(
                        "sweep.table",
                        format!("entry {j} must hold finite positive (R, Lambda), got ({r}, {l})"),
                    ));
                }
            }
            if let Some(&(r, _)) = sweep.table.iter().find(|&&(r, _)| !(r > self.spec.r0 && r < self.grid.r_max)) {
                return Err(Error::config(
                    "sweep.table",
                    format!("radius {r} must lie in (r0, r_max) = ({}, {})", self.spec.r0, self.grid.r_max),
                ));
            }
            if sweep.table.windows(2).any(|w| !(w[1].0 > w[0].0)) {
                return Err(Error::config("sweep.table", "radii R_j must be strictly increasing"));
            }
            if sweep.bumps == Some(0) {
                return Err(Error::config("sweep.bumps", "must be >= 1"));
            }
        }
        Ok(())
    }

    pub fn is_sweep(&self) -> bool {
        self.sweep.is_some()
    }
}

/// Parses and validates a TOML document.
pub fn parse_config_str(text: &str) -> Result<RunConfig> {
    let de = toml::Deserializer::parse(text).map_err(|e| Error::config("<document>", e.to_string()))?;
    let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let key = e.path().to_string();
        Error::config(if key == "." { "<document>".to_string() } else { key }, e.into_inner().to_string())
    })?;
    let p = raw.problem;
    let cfg = RunConfig {
        spec: ProblemSpec {
            dimension: p.dimension,
            potential: p.potential,
            nonlinearity: p.nonlinearity,
            q: p.q,
            p: p.p,
            a1: p.a1,
            a2: p.a2,
            theta: p.theta,
            s0: p.s0,
            radius: p.radius,
            lambda: p.lambda,
            r0: p.r0,
            v_infty: p.v_infty,
            odd: p.odd,
            exponential: raw.exponential,
        },
        grid: raw.grid,
        solver: raw.solver,
        sweep: raw.sweep,
        output: raw.output,
    };
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const P1: &str = r#"
[problem]
dimension = 3
potential = { family = "power_decay", amplitude = 10.0, exponent = 1.0 }
nonlinearity = { family = "power_sum", c1 = 1.0, gamma1 = 3.0 }
q = 3.0
p = 3.0
a1 = 1.0
theta = 3.0
radius_R = 1.0
lambda = 10.0
r0 = 0.9
"#;

    fn key_of(text: &str) -> String {
        match parse_config_str(text) {
            Err(Error::Config { key, .. }) => key,
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_config_fills_defaults() {
        let cfg = parse_config_str(P1).unwrap();
        assert_eq!(cfg.grid, GridConfig::default());
        assert_eq!(cfg.solver.path_points, 64);
        assert_eq!(cfg.solver.seed, 42);
        assert_eq!(cfg.spec.a2, 0.0);
        assert!(!cfg.spec.odd);
        assert_eq!(cfg.spec.nonlinearity, Nonlinearity::power(1.0, 3.0));
    }

    #[test]
    fn supercritical_p_names_key() {
        assert_eq!(key_of(&P1.replace("p = 3.0", "p = 7.0")), "problem.p");
    }

    #[test]
    fn integer_literals_are_accepted() {
        let cfg = parse_config_str(&P1.replace("q = 3.0", "q = 3")).unwrap();
        assert_eq!(cfg.spec.q, 3.0);
    }

    #[test]
    fn unknown_key_is_located() {
        let text = P1.replace("r0 = 0.9", "r0 = 0.9\nbogus = 1");
        assert_eq!(key_of(&text), "problem.bogus");
        let text = P1.replace("exponent = 1.0", "exponent = 1.0, extra = 2");
        assert!(key_of(&text).starts_with("problem.potential"));
    }

    #[test]
    fn unknown_family_is_located() {
        let text = P1.replace("power_decay", "gaussian");
        assert_eq!(key_of(&text), "problem.potential.family");
    }

    #[test]
    fn missing_key_is_reported() {
        let text = P1.replace("theta = 3.0\n", "");
        match parse_config_str(&text) {
            Err(Error::Config { message, .. }) => assert!(message.contains("theta"), "{message}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sweep_radii_must_increase() {
        let text = format!("{P1}\n[sweep]\ntable = [[2.0, 1.0], [1.0, 4.0]]\n");
        assert_eq!(key_of(&text), "sweep.table");
        let text = format!("{P1}\n[sweep]\ntable = [[1.0, 1.0], [2.0, 4.0]]\n");
        assert!(parse_config_str(&text).unwrap().is_sweep());
    }

    #[test]
    fn exponential_section() {
        let text = format!("{P1}\n[exponential]\na = 1.0\nmu = 0.5\n");
        let cfg = parse_config_str(&text).unwrap();
        assert_eq!(cfg.spec.exponential, Some(ExponentialParams { a: 1.0, mu: 0.5 }));
    }
}
