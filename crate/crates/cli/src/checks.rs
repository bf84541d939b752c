use crate::registry::Built;
use conelab_core::axioms::{self, AxiomVerdict, Status};
use conelab_core::composite::{canonical_self_steering_state, steering_order_iso_check};
use conelab_core::Error;
use serde::{Deserialize, Serialize};

/// Number of random pairs per sampled check.
pub const PAIRS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    #[serde(alias = "self-dual")]
    SelfDuality,
    #[serde(alias = "homogeneous")]
    Homogeneity,
    PureTransitivity,
    ContinuousPureTransitivity,
    #[serde(alias = "reducible")]
    Reducibility,
    Steering,
}

impl Check {
    pub const AXIOMS: [Check; 5] = [
        Check::SelfDuality,
        Check::Homogeneity,
        Check::PureTransitivity,
        Check::ContinuousPureTransitivity,
        Check::Reducibility,
    ];

    pub const ALL: [Check; 6] = [
        Check::SelfDuality,
        Check::Homogeneity,
        Check::PureTransitivity,
        Check::ContinuousPureTransitivity,
        Check::Reducibility,
        Check::Steering,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::SelfDuality => "self-duality",
            Check::Homogeneity => "homogeneity",
            Check::PureTransitivity => "pure-transitivity",
            Check::ContinuousPureTransitivity => "continuous-pure-transitivity",
            Check::Reducibility => "reducibility",
            Check::Steering => "steering",
        }
    }

    pub fn parse(s: &str) -> Option<Check> {
        serde_json::from_value(serde_json::Value::String(s.into())).ok()
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A declared expectation. `true`/`false` are shorthand for holds/fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", from = "ExpectedRepr")]
pub enum Expected {
    Holds,
    Fails,
    Inconclusive,
    Unsupported,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ExpectedRepr {
    Bool(bool),
    Status(Status),
}

impl From<ExpectedRepr> for Expected {
    fn from(r: ExpectedRepr) -> Self {
        match r {
            ExpectedRepr::Bool(true) | ExpectedRepr::Status(Status::Holds) => Expected::Holds,
            ExpectedRepr::Bool(false) | ExpectedRepr::Status(Status::Fails) => Expected::Fails,
            ExpectedRepr::Status(Status::Inconclusive) => Expected::Inconclusive,
            ExpectedRepr::Status(Status::Unsupported) => Expected::Unsupported,
        }
    }
}

impl std::fmt::Display for Expected {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Expected::Holds => "holds",
            Expected::Fails => "fails",
            Expected::Inconclusive => "inconclusive",
            Expected::Unsupported => "unsupported",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Holds,
    Fails,
    Inconclusive,
    Unsupported,
    /// The check does not apply to this kind of fixture.
    Skipped,
    Error,
}

impl Outcome {
    /// Skipped and unsupported results never count against a fixture.
    pub fn is_neutral(self) -> bool {
        matches!(self, Outcome::Skipped | Outcome::Unsupported)
    }

    pub fn matches(self, e: Expected) -> bool {
        self.is_neutral()
            || matches!(
                (self, e),
                (Outcome::Holds, Expected::Holds)
                    | (Outcome::Fails, Expected::Fails)
                    | (Outcome::Inconclusive, Expected::Inconclusive)
            )
    }
}

impl From<Status> for Outcome {
    fn from(s: Status) -> Self {
        match s {
            Status::Holds => Outcome::Holds,
            Status::Fails => Outcome::Fails,
            Status::Inconclusive => Outcome::Inconclusive,
            Status::Unsupported => Outcome::Unsupported,
        }
    }
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Outcome::Holds => "holds",
            Outcome::Fails => "fails",
            Outcome::Inconclusive => "inconclusive",
            Outcome::Unsupported => "unsupported",
            Outcome::Skipped => "skipped",
            Outcome::Error => "error",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: Check,
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<AxiomVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notice: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl CheckResult {
    fn bare(check: Check, outcome: Outcome, notice: impl Into<String>) -> Self {
        Self { check, outcome, verdict: None, notice: Some(notice.into()), expected: None, elapsed_ms: None }
    }

    pub fn mismatched(&self) -> bool {
        self.expected.is_some_and(|e| !self.outcome.matches(e))
    }
}

fn from_result(check: Check, r: conelab_core::Result<AxiomVerdict>) -> CheckResult {
    match r {
        Ok(v) => CheckResult { check, outcome: v.status.into(), verdict: Some(v), notice: None, expected: None, elapsed_ms: None },
        Err(e @ (Error::Precondition(_) | Error::Unsupported(_) | Error::NoWitnessConstructor(_) | Error::SearchSpaceExceeded(_))) => {
            CheckResult::bare(check, Outcome::Unsupported, e.to_string())
        }
        Err(e) => CheckResult::bare(check, Outcome::Error, e.to_string()),
    }
}

pub fn run_check(built: &Built, check: Check, seed: u64, tol: f64) -> CheckResult {
    let sys = built.system();
    let r = match check {
        Check::SelfDuality => axioms::check_self_duality(sys, tol),
        Check::Homogeneity => axioms::check_homogeneity(sys, PAIRS, seed, tol),
        Check::PureTransitivity => axioms::check_pure_transitivity(sys, PAIRS, seed, tol),
        Check::ContinuousPureTransitivity => axioms::check_continuous_pure_transitivity(sys, PAIRS, seed, tol),
        Check::Reducibility => axioms::check_reducibility(sys),
        Check::Steering => match built {
            Built::Single(_) => return CheckResult::bare(check, Outcome::Skipped, "steering applies to composite fixtures only"),
            Built::Composite(c) => canonical_self_steering_state(c).and_then(|w| steering_order_iso_check(c, &w, tol, seed)),
        },
    };
    from_result(check, r)
}
