use crate::eja::Family;
use crate::ovs::IsoViolation;
use crate::rational::ExactQ;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Holds,
    Fails,
    /// Checked by sampling only; no hard verdict.
    Inconclusive,
    /// No checker or constructor applies.
    Unsupported,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Inconclusive => "inconclusive",
            Status::Unsupported => "unsupported",
        })
    }
}

/// Re-checkable evidence for a positive verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    Map {
        matrix: Vec<Vec<f64>>,
        normalized: bool,
        /// For probabilistically reversible maps, `Φ♯Φ = p·id`.
        #[serde(skip_serializing_if = "Option::is_none")]
        p: Option<f64>,
    },
    ExactMap {
        matrix: Vec<Vec<ExactQ>>,
        /// `bijection[i] = j`: ray `i` goes to facet `j`.
        bijection: Vec<usize>,
    },
    InnerProduct {
        gram: Vec<Vec<ExactQ>>,
        bijection: Vec<usize>,
    },
    Path {
        times: Vec<f64>,
        states: Vec<Vec<f64>>,
        maps: Vec<Vec<Vec<f64>>>,
    },
    Measurement {
        effects: Vec<Vec<f64>>,
    },
    Sampled {
        pairs: usize,
        min_value: f64,
    },
    Note {
        text: String,
    },
}

/// Counterexample payload for a negative verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    NonIsomorphicSummands {
        first: SummandInvariant,
        second: SummandInvariant,
    },
    FaceProfile {
        first: usize,
        second: usize,
        samples: usize,
    },
    DisjointSummands {
        first: usize,
        second: usize,
    },
    NegativePairing {
        x: Vec<f64>,
        y: Vec<f64>,
        value: f64,
    },
    DualNotInCone {
        functional: Vec<f64>,
        pulled_back: Vec<f64>,
        margin: f64,
    },
    ExactDualNotInCone {
        normal: Vec<ExactQ>,
        pulled_back: Vec<ExactQ>,
    },
    /// Every ray/facet bijection was tried and none admitted a solution.
    Exhaustive {
        bijections: usize,
        incidence_consistent: usize,
    },
    /// The identity component of the automorphism group fixes every
    /// extremal ray, so orbits have dimension at most `ray_fixing < dim`.
    AutomorphismDimension {
        ray_fixing: usize,
        dim: usize,
    },
    /// Exhaustive search: no normalized automorphism maps ray `from` to `to`.
    NoAutomorphism {
        from: usize,
        to: usize,
        nodes: usize,
    },
    /// Finitely many pure states admit no nonconstant continuous path.
    FinitelyManyPure {
        count: usize,
    },
    RankDeficient {
        rank: usize,
        dim: usize,
    },
    OrderIsomorphism { detail: IsoViolation },
    /// The cone admits no nontrivial direct-sum decomposition.
    Irreducible {
        certificate: String,
    },
    Other {
        text: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandInvariant {
    pub index: usize,
    pub family: Family,
    pub rank: usize,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomVerdict {
    pub axiom: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<Violation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl AxiomVerdict {
    pub fn holds(axiom: &str, witness: Witness, margin: Option<f64>) -> Self {
        Self { axiom: axiom.into(), status: Status::Holds, witness: Some(witness), violation: None, margin, notes: vec![] }
    }

    pub fn fails(axiom: &str, violation: Violation, margin: Option<f64>) -> Self {
        Self { axiom: axiom.into(), status: Status::Fails, witness: None, violation: Some(violation), margin, notes: vec![] }
    }

    pub fn inconclusive(axiom: &str, witness: Option<Witness>, note: impl Into<String>) -> Self {
        Self {
            axiom: axiom.into(),
            status: Status::Inconclusive,
            witness,
            violation: None,
            margin: None,
            notes: vec![note.into()],
        }
    }

    pub fn unsupported(axiom: &str, note: impl Into<String>) -> Self {
        Self {
            axiom: axiom.into(),
            status: Status::Unsupported,
            witness: None,
            violation: None,
            margin: None,
            notes: vec![note.into()],
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn is_holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn is_fails(&self) -> bool {
        self.status == Status::Fails
    }
}

pub fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}
