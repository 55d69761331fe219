//! `magbag`: configurations, profiles, residual reports and verification suites.

mod config;

use std::io::Write;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use magbag_core::analysis::{RadialProfile, SphereQuadrature};
use magbag_core::glued::{residual_report, AnnulusQuadrature};
use magbag_core::verify::{run_suite, Suite, SuiteParams};
use magbag_core::{make_shell_config, ScaledMonopole};

use config::{Overrides, RunConfig};

#[derive(Parser)]
#[command(name = "magbag", version, about = "Magnetic-bag monopole configurations and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the shell point set as CSV
    Place(Common),
    /// Write min/mean/max of |Φ| on a radial grid as CSV (N = 1: single monopole)
    Profile(Common),
    /// Write the residual report as JSON
    Residual(Common),
    /// Run a verification suite and write a JSON array of checks
    Verify(Common),
}

#[derive(clap::Args)]
struct Common {
    #[command(flatten)]
    flags: Overrides,
    /// Flat JSON object with the same keys; flags take precedence
    #[arg(long)]
    config: Option<std::path::PathBuf>,
}

enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, allow_single) = match &cli.command {
        Command::Profile(c) => (c, true),
        Command::Place(c) | Command::Residual(c) | Command::Verify(c) => (c, false),
    };
    let cfg = match RunConfig::resolve(common.flags.clone(), common.config.as_deref(), allow_single) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Place(_) => place(&cfg),
        Command::Profile(_) => profile(&cfg),
        Command::Residual(_) => residual(&cfg),
        Command::Verify(_) => verify(&cfg),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(cfg: &RunConfig, body: &[u8]) -> anyhow::Result<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => std::io::stdout().write_all(body).context("writing to standard output"),
    }
}

fn place(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let shell = make_shell_config(cfg.n, cfg.m)?;
    for w in &shell.diagnostics.warnings {
        eprintln!("warning: {w}");
    }
    let mut buf = Vec::new();
    shell.write_csv(&mut buf)?;
    emit(cfg, &buf)?;
    Ok(Outcome::Pass)
}

fn profile(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let quad = SphereQuadrature::fibonacci(cfg.quad);
    let steps = cfg.steps.unwrap_or(200);
    let table = if cfg.n == 1 {
        let (lo, hi) = (cfg.r_min.unwrap_or(0.1), cfg.r_max.unwrap_or(10.0));
        RadialProfile::compute(&ScaledMonopole::unit(), lo, hi, steps, &quad)?
    } else {
        let shell = make_shell_config(cfg.n, cfg.m)?;
        let (lo, hi) = (cfg.r_min.unwrap_or(0.05 * shell.radius), cfg.r_max.unwrap_or(2.0 * shell.radius));
        RadialProfile::compute(&shell, lo, hi, steps, &quad)?
    };
    let mut buf = Vec::new();
    table.write_csv(&mut buf)?;
    emit(cfg, &buf)?;
    Ok(Outcome::Pass)
}

fn residual(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let shell = make_shell_config(cfg.n, cfg.m)?;
    let report = residual_report(&shell, &AnnulusQuadrature::DEFAULT);
    let mut body = serde_json::to_vec_pretty(&report.to_json())?;
    body.push(b'\n');
    emit(cfg, &body)?;
    Ok(Outcome::Pass)
}

fn verify(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let suite: Suite = cfg.suite.parse()?;
    let params = SuiteParams {
        n: cfg.n,
        m: cfg.m,
        quad: cfg.quad,
        h: cfg.h,
        r_min: cfg.r_min,
        r_max: cfg.r_max,
        steps: cfg.steps.unwrap_or(SuiteParams::default().steps),
    };
    let rows = run_suite(suite, &params)?;
    let mut body = serde_json::to_vec_pretty(&rows)?;
    body.push(b'\n');
    emit(cfg, &body)?;
    Ok(if rows.iter().any(|c| c.failed()) { Outcome::Fail } else { Outcome::Pass })
}
