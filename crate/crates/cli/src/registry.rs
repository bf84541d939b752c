//! Fixture registries: a JSON list of named systems with declared
//! expectations per check.

use crate::checks::{Check, Expected};
use conelab_core::composite::{CompositeModel, CompositeSystem};
use conelab_core::eja::{JordanAlgebra, SimpleFactor};
use conelab_core::ovs::{Functional, PolyhedralCone, System};
use conelab_core::rational::{self, Q};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum RegistryError {
    #[error("{origin}:{line}:{column}: at `{path}`: {message}")]
    Parse { origin: String, line: usize, column: usize, path: String, message: String },
    #[error("{origin}:{line}: at `{path}`: {message}")]
    Invalid { origin: String, line: usize, path: String, message: String },
    #[error("{origin}: {message}")]
    Io { origin: String, message: String },
}

/// Exact rational written as `{"num": n, "den": d}`; a bare integer is
/// accepted as shorthand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Rational {
    Fraction { num: i64, den: i64 },
    Integer(i64),
}

impl Rational {
    pub fn int(n: i64) -> Self {
        Rational::Fraction { num: n, den: 1 }
    }

    fn to_q(&self) -> Option<Q> {
        match *self {
            Rational::Fraction { den: 0, .. } => None,
            Rational::Fraction { num, den } => Some(rational::qr(num, den)),
            Rational::Integer(n) => Some(rational::q(n)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyName {
    RealSym,
    ComplexHerm,
    QuatHerm,
    Spin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorSpec {
    pub family: FamilyName,
    /// Rank of a matrix family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    /// Dimension of a spin factor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "kebab-case")]
pub enum SystemSpec {
    /// Direct sum of simple factors, or `classical: n` for the simplex.
    Eja {
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        summands: Vec<FactorSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        classical: Option<usize>,
    },
    Polyhedral { generators: Vec<Vec<Rational>>, unit: Vec<Rational> },
    SharedCorner,
    Composite { model: ModelName, factors: [String; 2] },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelName {
    MinTensor,
    MaxTensor,
    Hilbert,
    Classical,
}

impl From<ModelName> for CompositeModel {
    fn from(m: ModelName) -> Self {
        match m {
            ModelName::MinTensor => CompositeModel::MinTensor,
            ModelName::MaxTensor => CompositeModel::MaxTensor,
            ModelName::Hilbert => CompositeModel::Hilbert,
            ModelName::Classical => CompositeModel::Classical,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureSpec {
    pub name: String,
    #[serde(flatten)]
    pub system: SystemSpec,
    /// Overrides the run seed for this fixture.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub expect: BTreeMap<Check, Expected>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Registry {
    pub fixtures: Vec<FixtureSpec>,
}

/// A built fixture. Composites keep their factors for steering.
#[derive(Debug, Clone)]
pub enum Built {
    Single(Arc<System>),
    Composite(CompositeSystem),
}

impl Built {
    pub fn system(&self) -> &Arc<System> {
        match self {
            Built::Single(s) => s,
            Built::Composite(c) => &c.system,
        }
    }
}

fn line_of(text: &str, name: &str) -> usize {
    let needle = format!("\"{name}\"");
    text.lines().position(|l| l.contains(&needle)).map_or(0, |i| i + 1)
}

impl Registry {
    pub fn parse(text: &str, origin: &str) -> Result<Self, RegistryError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let reg: Registry = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            RegistryError::Parse { origin: origin.into(), line: inner.line(), column: inner.column(), path, message: inner.to_string() }
        })?;
        reg.validate(text, origin)?;
        Ok(reg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, RegistryError> {
        let origin = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| RegistryError::Io { origin: origin.clone(), message: e.to_string() })?;
        Self::parse(&text, &origin)
    }

    pub fn get(&self, name: &str) -> Option<&FixtureSpec> {
        self.fixtures.iter().find(|f| f.name == name)
    }

    /// Unique names, resolvable composite factors, and systems that build.
    fn validate(&self, text: &str, origin: &str) -> Result<(), RegistryError> {
        let invalid = |i: usize, field: &str, name: &str, message: String| RegistryError::Invalid {
            origin: origin.into(),
            line: line_of(text, name),
            path: format!("fixtures[{i}]{field}"),
            message,
        };
        let mut seen = HashMap::new();
        for (i, f) in self.fixtures.iter().enumerate() {
            if let Some(first) = seen.insert(f.name.as_str(), i) {
                return Err(invalid(i, ".name", &f.name, format!("duplicate fixture name (first at fixtures[{first}])")));
            }
        }
        for (i, f) in self.fixtures.iter().enumerate() {
            if let SystemSpec::Composite { factors, .. } = &f.system {
                for (k, factor) in factors.iter().enumerate() {
                    match self.get(factor) {
                        None => return Err(invalid(i, &format!(".params.factors[{k}]"), &f.name, format!("unknown fixture `{factor}`"))),
                        Some(g) if matches!(g.system, SystemSpec::Composite { .. }) => {
                            return Err(invalid(i, &format!(".params.factors[{k}]"), &f.name, "composite factors must be single systems".into()))
                        }
                        Some(_) => {}
                    }
                }
            }
            self.build(f).map_err(|e| invalid(i, ".params", &f.name, e))?;
        }
        Ok(())
    }

    pub fn build(&self, f: &FixtureSpec) -> Result<Built, String> {
        match &f.system {
            SystemSpec::Composite { model, factors } => {
                let part = |name: &String| -> Result<Arc<System>, String> {
                    let g = self.get(name).ok_or_else(|| format!("unknown fixture `{name}`"))?;
                    build_single(&g.system, &g.name)
                };
                let (a, b) = (part(&factors[0])?, part(&factors[1])?);
                CompositeSystem::new((*model).into(), a, b).map(Built::Composite).map_err(|e| e.to_string())
            }
            other => build_single(other, &f.name).map(Built::Single),
        }
    }
}

fn factor(spec: &FactorSpec) -> Result<SimpleFactor, String> {
    let need = |v: Option<usize>, what: &str| v.ok_or_else(|| format!("{:?} needs `{what}`", spec.family));
    let made = match spec.family {
        FamilyName::RealSym => SimpleFactor::real_sym(need(spec.rank, "rank")?),
        FamilyName::ComplexHerm => SimpleFactor::complex_herm(need(spec.rank, "rank")?),
        FamilyName::QuatHerm => SimpleFactor::quat_herm(need(spec.rank, "rank")?),
        FamilyName::Spin => SimpleFactor::spin(need(spec.dim, "dim")?),
    };
    made.map_err(|e| e.to_string())
}

fn build_single(spec: &SystemSpec, name: &str) -> Result<Arc<System>, String> {
    let sys = match spec {
        SystemSpec::Eja { summands, classical } => {
            let alg = match (summands.is_empty(), classical) {
                (true, Some(n)) => JordanAlgebra::classical(*n),
                (false, None) => JordanAlgebra::new(summands.iter().map(factor).collect::<Result<_, _>>()?),
                _ => return Err("give exactly one of `summands` and `classical`".into()),
            }
            .map_err(|e| e.to_string())?;
            System::jordan(alg, name)
        }
        SystemSpec::Polyhedral { generators, unit } => {
            let gens = generators
                .iter()
                .map(|g| g.iter().map(Rational::to_q).collect::<Option<Vec<Q>>>())
                .collect::<Option<Vec<_>>>()
                .ok_or("zero denominator")?;
            let unit = unit.iter().map(Rational::to_q).collect::<Option<Vec<Q>>>().ok_or("zero denominator")?;
            let cone = PolyhedralCone::new(gens).map_err(|e| e.to_string())?;
            let unit = Functional::from_slice(&rational::vec_to_f64(&unit));
            System::polyhedral(cone, unit, name).map_err(|e| e.to_string())?
        }
        SystemSpec::SharedCorner => {
            let mut s = System::shared_corner();
            s.label = name.into();
            s
        }
        SystemSpec::Composite { .. } => return Err("composite systems are built from the registry".into()),
    };
    Ok(Arc::new(sys))
}

fn ints(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
    rows.iter().map(|r| r.iter().map(|&v| Rational::int(v)).collect()).collect()
}

fn matrix(family: FamilyName, rank: usize) -> FactorSpec {
    FactorSpec { family, rank: Some(rank), dim: None }
}

fn spin(dim: usize) -> FactorSpec {
    FactorSpec { family: FamilyName::Spin, rank: None, dim: Some(dim) }
}

fn expect(pairs: &[(Check, Expected)]) -> BTreeMap<Check, Expected> {
    pairs.iter().cloned().collect()
}

/// Expectations in the order self-duality, homogeneity, pure
/// transitivity, continuous pure transitivity, reducibility.
fn five(v: [Expected; 5]) -> Vec<(Check, Expected)> {
    Check::AXIOMS.iter().copied().zip(v).collect()
}

fn fixture(name: &str, system: SystemSpec, exp: Vec<(Check, Expected)>) -> FixtureSpec {
    FixtureSpec { name: name.into(), system, seed: None, expect: expect(&exp) }
}

pub fn builtin_fixtures() -> Registry {
    use Expected::{Fails as F, Holds as H, Inconclusive as I, Unsupported as U};
    use FamilyName::*;
    let eja = |summands: Vec<FactorSpec>| SystemSpec::Eja { summands, classical: None };
    let simple = [H, H, H, H, F];
    let mut fixtures = Vec::new();
    for n in [2, 3, 4] {
        fixtures.push(fixture(
            &format!("classical-simplex-{n}"),
            SystemSpec::Eja { summands: vec![], classical: Some(n) },
            five([H, H, H, F, H]),
        ));
    }
    for (name, f) in [
        ("real-sym-2", matrix(RealSym, 2)),
        ("real-sym-3", matrix(RealSym, 3)),
        ("qubit", matrix(ComplexHerm, 2)),
        ("complex-herm-3", matrix(ComplexHerm, 3)),
        ("complex-herm-4", matrix(ComplexHerm, 4)),
        ("quat-herm-2", matrix(QuatHerm, 2)),
        ("spin-3", spin(3)),
        ("spin-4", spin(4)),
        ("spin-8", spin(8)),
    ] {
        fixtures.push(fixture(name, eja(vec![f]), five(simple)));
    }
    fixtures.push(fixture(
        "qubit-plus-qubit",
        eja(vec![matrix(ComplexHerm, 2), matrix(ComplexHerm, 2)]),
        five([H, H, H, F, H]),
    ));
    fixtures.push(fixture(
        "qubit-plus-rebit",
        eja(vec![matrix(ComplexHerm, 2), matrix(RealSym, 2)]),
        five([H, H, F, F, H]),
    ));
    let square = ints(&[&[1, 1, 1], &[1, -1, 1], &[-1, -1, 1], &[-1, 1, 1]]);
    let z3 = vec![Rational::int(0), Rational::int(0), Rational::int(1)];
    fixtures.push(fixture(
        "square-cone",
        SystemSpec::Polyhedral { generators: square, unit: z3.clone() },
        five([F, F, H, F, F]),
    ));
    // Integer vertices with the combinatorics of the regular pentagon.
    let pentagon = ints(&[&[3, 0, 1], &[1, 2, 1], &[-2, 2, 1], &[-2, -1, 1], &[1, -3, 1]]);
    fixtures.push(fixture("pentagon-cone", SystemSpec::Polyhedral { generators: pentagon, unit: z3 }, five([H, F, F, F, F])));
    fixtures.push(fixture("shared-corner", SystemSpec::SharedCorner, five([I, H, F, F, F])));
    let composite = |model, a: &str, b: &str| SystemSpec::Composite { model, factors: [a.into(), b.into()] };
    let mut hilbert = five(simple);
    hilbert.push((Check::Steering, H));
    fixtures.push(fixture("hilbert-two-qubit", composite(ModelName::Hilbert, "qubit", "qubit"), hilbert));
    let mut sq = five([U, F, H, F, F]);
    sq.push((Check::Steering, U));
    fixtures.push(fixture("min-tensor-square-square", composite(ModelName::MinTensor, "square-cone", "square-cone"), sq));
    let mut bits = five([H, H, H, F, H]);
    bits.push((Check::Steering, H));
    fixtures.push(fixture(
        "classical-bit-bit",
        composite(ModelName::Classical, "classical-simplex-2", "classical-simplex-2"),
        bits,
    ));
    Registry { fixtures }
}
