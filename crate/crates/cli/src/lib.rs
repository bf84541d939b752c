//! Fixture registry, batch runner and reports for `conelab`.
//!
//! A registry is a JSON file of named systems, each with the verdicts it is
//! expected to produce. [`run_checks`] evaluates every selected check on
//! every fixture in parallel and merges the results in registry order, so
//! the report for a fixed seed is byte-stable.

pub mod checks;
pub mod registry;
pub mod report;

pub use checks::{Check, CheckResult, Expected, Outcome};
pub use registry::{builtin_fixtures, Built, FixtureSpec, Registry, RegistryError};
pub use report::{FixtureReport, Mismatch, Report, SCHEMA_VERSION};

use conelab_core::composite::{canonical_self_steering_state, random_ensemble, SteerOutcome};
use conelab_core::ovs::Element;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::time::Instant;

pub const DEFAULT_SEED: u64 = 7;
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub checks: Vec<Check>,
    pub seed: u64,
    pub tol: f64,
    pub jobs: usize,
    /// Record wall-clock times. Off by default: timings break byte stability.
    pub timings: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { checks: Check::ALL.to_vec(), seed: DEFAULT_SEED, tol: DEFAULT_TOL, jobs: 0, timings: false }
    }
}

fn kind_of(f: &FixtureSpec) -> &'static str {
    match f.system {
        registry::SystemSpec::Eja { .. } => "eja",
        registry::SystemSpec::Polyhedral { .. } => "polyhedral",
        registry::SystemSpec::SharedCorner => "shared-corner",
        registry::SystemSpec::Composite { .. } => "composite",
    }
}

pub fn run_fixture(reg: &Registry, f: &FixtureSpec, opts: &RunOptions) -> FixtureReport {
    let seed = f.seed.unwrap_or(opts.seed);
    let mut report = FixtureReport { fixture: f.name.clone(), kind: kind_of(f).into(), dim: None, seed, error: None, checks: vec![] };
    let built = match reg.build(f) {
        Ok(b) => b,
        Err(e) => {
            report.error = Some(e);
            return report;
        }
    };
    report.dim = Some(built.system().dim());
    for &check in &opts.checks {
        let start = Instant::now();
        let mut r = checks::run_check(&built, check, seed, opts.tol);
        if opts.timings {
            r.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        }
        r.expected = f.expect.get(&check).copied();
        report.checks.push(r);
    }
    report
}

/// Runs the selected checks on every fixture, `jobs` at a time (0 means
/// one per core).
pub fn run_checks(reg: &Registry, opts: &RunOptions) -> Report {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.jobs).build().expect("thread pool");
    let fixtures = pool.install(|| reg.fixtures.par_iter().map(|f| run_fixture(reg, f, opts)).collect());
    Report::new(opts.seed, opts.tol, fixtures)
}

#[derive(Debug, Clone, Serialize)]
pub struct SteerReport {
    pub fixture: String,
    pub seed: u64,
    pub state: Vec<f64>,
    pub ensemble: Vec<Vec<f64>>,
    pub result: SteerOutcome,
}

/// Steers a random `parts`-element ensemble of the B marginal from the
/// canonical self-steering state of a composite fixture.
pub fn steer_fixture(reg: &Registry, name: &str, parts: usize, seed: u64, tol: f64) -> Result<SteerReport, String> {
    let f = reg.get(name).ok_or_else(|| format!("unknown fixture `{name}`"))?;
    let Built::Composite(c) = reg.build(f)? else {
        return Err(format!("`{name}` is not a composite fixture"));
    };
    let w = canonical_self_steering_state(&c).map_err(|e| e.to_string())?;
    let marginal = c.conditioning_map(&w).map_err(|e| e.to_string())?.marginal;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ensemble = random_ensemble(&c.b, &marginal, parts, &mut rng).map_err(|e| e.to_string())?;
    let result = c.steer(&w, &ensemble, tol).map_err(|e| e.to_string())?;
    Ok(SteerReport {
        fixture: name.into(),
        seed,
        state: w.to_vec(),
        ensemble: ensemble.iter().map(Element::to_vec).collect(),
        result,
    })
}
