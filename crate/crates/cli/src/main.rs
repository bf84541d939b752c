use clap::{Parser, Subcommand, ValueEnum};
use conelab::{builtin_fixtures, run_checks, steer_fixture, Check, Registry, RunOptions, DEFAULT_TOL};
use conelab_core::classify;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "conelab", version, about = "Axiom checks for cones, Jordan algebras and their composites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Procedure {
    LocalTomography,
    InjectiveComposite,
    Classicality,
}

#[derive(Subcommand)]
enum Command {
    /// Run checks over a registry and compare against declared expectations.
    Check {
        /// Registry file; the built-in fixtures when omitted.
        #[arg(long)]
        registry: Option<PathBuf>,
        /// Comma-separated check names; all checks when omitted.
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
        #[arg(long, env = "CONELAB_SEED", default_value_t = conelab::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Include per-check wall-clock times (the report is then not byte-stable).
        #[arg(long)]
        timings: bool,
    },
    /// Print a registry as JSON; the built-in fixtures when no file is given.
    Fixtures {
        #[arg(long)]
        registry: Option<PathBuf>,
    },
    /// Rank/dimension counting over the simple Euclidean Jordan algebras.
    Classify {
        #[arg(value_enum)]
        procedure: Procedure,
        #[arg(long, default_value_t = 8)]
        max_rank: u64,
        /// Number of equal summands for the classicality count.
        #[arg(long, default_value_t = 1)]
        summands: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Steer a random ensemble from a composite fixture's canonical state.
    Steer {
        #[arg(long)]
        fixture: String,
        #[arg(long, default_value_t = 3)]
        parts: usize,
        #[arg(long, env = "CONELAB_SEED", default_value_t = conelab::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        registry: Option<PathBuf>,
    },
}

fn load(path: Option<&PathBuf>) -> Result<Registry, String> {
    match path {
        Some(p) => Registry::load(p).map_err(|e| e.to_string()),
        None => Ok(builtin_fixtures()),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Check { registry, checks, seed, tol, out, format, jobs, timings } => {
            if !(tol >= 0.0) {
                return Err(format!("--tol must be non-negative, got {tol}"));
            }
            let reg = load(registry.as_ref())?;
            let checks = if checks.is_empty() {
                Check::ALL.to_vec()
            } else {
                checks
                    .iter()
                    .map(|c| Check::parse(c.trim()).ok_or_else(|| format!("unknown check name `{c}`")))
                    .collect::<Result<_, _>>()?
            };
            let report = run_checks(&reg, &RunOptions { checks, seed, tol, jobs, timings });
            let text = match format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            emit(&text, out.as_ref())?;
            if !report.passed() {
                for m in &report.mismatches {
                    eprintln!("mismatch: {}: {} expected {}, got {}", m.fixture, m.check, m.expected, m.got);
                }
                return Ok(ExitCode::from(1));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Fixtures { registry } => {
            let reg = load(registry.as_ref())?;
            print!("{}", json(&reg));
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { procedure, max_rank, summands, format } => {
            let trace = match procedure {
                Procedure::LocalTomography => classify::survivors_local_tomography(max_rank),
                Procedure::InjectiveComposite => classify::survivors_injective_composite(max_rank),
                Procedure::Classicality => classify::survivors_classicality(max_rank, summands),
            }
            .map_err(|e| e.to_string())?;
            match format {
                Format::Text => print!("{}", trace.render()),
                Format::Json => print!("{}", json(&trace)),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Steer { fixture, parts, seed, tol, registry } => {
            let reg = load(registry.as_ref())?;
            let r = steer_fixture(&reg, &fixture, parts, seed, tol)?;
            print!("{}", json(&r));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
