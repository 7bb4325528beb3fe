use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hormander::Error;
use hormander::experiment::{self, ExperimentConfig, Suite, validate_config};

/// Verification suites for Hörmander spaces and the disk models.
///
/// Exit status: 0 when every record passes, 1 when any record fails,
/// 2 on configuration errors.
#[derive(Debug, Parser)]
#[command(name = "hormander", version)]
struct Cli {
    /// TOML experiment config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides `output_dir`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Single seed (overrides `seeds`).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Restrict to these suites; may be repeated.
    #[arg(long, global = true)]
    suite: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// RO membership and index estimation.
    Ro,
    /// Weighted norms and the exact order shift.
    Norm,
    /// Interpolation with a function parameter.
    Interp,
    /// Quotient norms on subdomains of the torus.
    Quotient,
    /// Disk boundary-value models.
    Bvp,
    /// Embedding and regularity criteria.
    Embed,
    /// Every suite listed in the config.
    Report,
}

impl Command {
    fn suites(&self) -> Option<Vec<Suite>> {
        Some(match self {
            Command::Ro => vec![Suite::Membership, Suite::Indices],
            Command::Norm => vec![Suite::Norms],
            Command::Interp => vec![Suite::Interp],
            Command::Quotient => vec![Suite::Quotient],
            Command::Bvp => vec![Suite::Bvp],
            Command::Embed => vec![Suite::Embedding],
            Command::Report => return None,
        })
    }
}

fn load(cli: &Cli) -> hormander::Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => validate_config(path)?,
        None => {
            let seed = cli.seed.ok_or_else(|| Error::Config("seeds required (use --config or --seed)".into()))?;
            let suites: Vec<String> = Suite::ALL.iter().map(|s| format!("\"{s}\"")).collect();
            ExperimentConfig::from_toml_str(&format!("suites = [{}]\nseeds = [{seed}]\n", suites.join(", ")))?
        }
    };
    let requested: Vec<Suite> = cli.suite.iter().map(|s| s.parse()).collect::<hormander::Result<_>>()?;
    cfg.suites = match cli.command.suites() {
        Some(fixed) if requested.is_empty() => fixed,
        Some(fixed) => {
            if let Some(bad) = requested.iter().find(|s| !fixed.contains(s)) {
                return Err(Error::Config(format!("suite `{bad}` is not part of this command")));
            }
            requested
        }
        None if requested.is_empty() => cfg.suites,
        None => requested,
    };
    if let Some(seed) = cli.seed {
        cfg.seeds = vec![seed];
    }
    if let Some(out) = &cli.out {
        cfg.output_dir = out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = match experiment::run(&cfg) {
        Ok(o) => o,
        Err(Error::Config(m)) => {
            eprintln!("config error: {m}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    for rep in &outcome.reports {
        println!(
            "{:<11} {:>4} records  {:>4} passed  {:>4} failed",
            rep.suite.name(),
            rep.records.len(),
            rep.passed(),
            rep.records.len() - rep.passed()
        );
        for r in rep.failures() {
            eprintln!(
                "FAIL [{}] {} :: {} (measured {:e}, tolerance {:e})",
                rep.suite, r.claim, r.case, r.measured, r.tolerance
            );
        }
    }
    println!("reports in {}", cfg.output_dir.display());
    if outcome.all_pass() { ExitCode::SUCCESS } else { ExitCode::from(1) }
}
