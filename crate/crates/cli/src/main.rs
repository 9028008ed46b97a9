use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use vanish_core::config::{parse_config, RunConfig};
use vanish_core::pipeline::{run, Command, RunOutput};
use vanish_core::report::{read_profile_file, report_json, write_profile_file, write_report};

/// Exit status when the run finished but convergence or a certificate failed.
const EXIT_VERDICT: u8 = 1;
/// Exit status for configuration, usage and I/O problems.
const EXIT_CONFIG: u8 = 2;
/// Exit status when a pipeline stage aborted.
const EXIT_STAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "vanish", version, about = "Penalized mountain-pass solver with a posteriori certificates")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the structural hypotheses only.
    Check(Common),
    /// Run the full pipeline and write the report and profile.
    Solve(Common),
    /// Run the certificates on an external profile CSV.
    Certify {
        #[command(flatten)]
        common: Common,
        /// Profile CSV with `r` and `u` columns on the configured grid.
        #[arg(long)]
        profile: PathBuf,
    },
    /// Table mode over the [sweep] pairs.
    Sweep(Common),
    /// Threshold constants only.
    Thresholds(Common),
}

#[derive(Args)]
struct Common {
    /// TOML configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides [output] dir. Without either the report goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for the sphere-floor sampling.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of grid intervals M.
    #[arg(long)]
    mesh: Option<usize>,
    /// Truncation radius R_max.
    #[arg(long)]
    rmax: Option<f64>,
    /// Include wall-clock timings in the report (breaks byte-identical reruns).
    #[arg(long)]
    timings: bool,
}

fn load(common: &Common) -> anyhow::Result<RunConfig> {
    let mut cfg = parse_config(&common.config).with_context(|| format!("reading {}", common.config.display()))?;
    if let Some(seed) = common.seed {
        cfg.solver.seed = seed;
    }
    if let Some(m) = common.mesh {
        cfg.grid.nodes = m;
    }
    if let Some(r) = common.rmax {
        cfg.grid.r_max = r;
    }
    cfg.validate().context("after command-line overrides")?;
    Ok(cfg)
}

fn emit(out: &RunOutput, dir: Option<&Path>, timings: bool) -> anyhow::Result<()> {
    match dir {
        Some(dir) => {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join("report.json");
            write_report(&path, &out.report, timings).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("report: {}", path.display());
            if let Some(rows) = &out.profile {
                let path = dir.join("profile.csv");
                write_profile_file(&path, rows).with_context(|| format!("writing {}", path.display()))?;
                eprintln!("profile: {}", path.display());
            }
        }
        None => {
            let value = report_json(&out.report, timings)?;
            println!("{}", serde_json::to_string_pretty(&value)?);
        }
    }
    Ok(())
}

fn summarize(out: &RunOutput, command: &Command) {
    let r = &out.report;
    if let Some(h) = &r.hypotheses {
        let failed = h.failures();
        if failed.is_empty() {
            eprintln!("hypotheses: all passed");
        } else {
            eprintln!("hypotheses: failed {}", failed.join(", "));
        }
    }
    if let Some(s) = &r.solve {
        eprintln!(
            "solve: level {:.10e}, residual {:.3e}, {} iterations + {} Newton, converged {}",
            s.level, s.residual, s.iterations, s.newton_steps, s.converged
        );
    }
    if let Some(c) = &r.certificates {
        for check in &c.checks {
            eprintln!("  {:<12} {} (margin {:.3e})", check.name, if check.pass { "pass" } else { "FAIL" }, check.margin);
        }
        eprintln!("verdict: {}", c.verdict.label());
    }
    if let Some(t) = &r.thresholds {
        eprintln!("lambda_star: {:.10e} (declared Lambda meets: {})", t.standard.lambda_star, t.declared_lambda_meets);
        if let Some(s) = &t.sweep {
            eprintln!("sweep trend: {}", s.trend.label());
        }
    }
    if let Some(f) = &r.failure {
        eprintln!("aborted at stage `{}`: {}", f.stage, f.message);
    }
    eprintln!("{}: {}", command.name(), if out.success(command) { "ok" } else { "not ok" });
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, command) = match cli.command {
        Cmd::Check(c) => (c, None),
        Cmd::Solve(c) => (c, Some(Command::Solve)),
        Cmd::Certify { common, profile } => {
            let data = read_profile_file(&profile).with_context(|| format!("reading {}", profile.display()));
            match data {
                Ok((r, u)) => (common, Some(Command::Certify { r, u })),
                Err(e) => {
                    eprintln!("error: {e:#}");
                    return ExitCode::from(EXIT_CONFIG);
                }
            }
        }
        Cmd::Sweep(c) => (c, Some(Command::Sweep)),
        Cmd::Thresholds(c) => (c, Some(Command::Thresholds)),
    };
    let command = command.unwrap_or(Command::Check);
    let cfg = match load(&common) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if command == Command::Sweep && !cfg.is_sweep() {
        eprintln!("error: sweep needs a [sweep] table in the configuration");
        return ExitCode::from(EXIT_CONFIG);
    }
    let out = run(&cfg, &command);
    summarize(&out, &command);
    let dir = common.out.as_deref().or(cfg.output.dir.as_deref());
    if let Err(e) = emit(&out, dir, common.timings) {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_CONFIG);
    }
    if out.report.failure.is_some() {
        ExitCode::from(EXIT_STAGE)
    } else if out.success(&command) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERDICT)
    }
}
