//! The simple-EJA classification table and rank/dimension counting
//! procedures over it. All arithmetic is on integers.
//!
//! Each procedure takes every simple candidate `W` of rank `r ≥ 2` and
//! dimension `d` and asks for a simple `E` of rank `r²` whose dimension is
//! `d²` (local tomography) or at least `d²` (injective composites and the
//! classicality route). A family survives when all its candidates pass.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassFamily {
    RealSym,
    ComplexHerm,
    QuatHerm,
    SpinFactor,
    Albert,
}

impl ClassFamily {
    pub const ALL: [ClassFamily; 5] =
        [ClassFamily::RealSym, ClassFamily::ComplexHerm, ClassFamily::QuatHerm, ClassFamily::SpinFactor, ClassFamily::Albert];

    const MATRIX: [ClassFamily; 3] = [ClassFamily::RealSym, ClassFamily::ComplexHerm, ClassFamily::QuatHerm];
}

impl std::fmt::Display for ClassFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ClassFamily::RealSym => "RealSym",
            ClassFamily::ComplexHerm => "ComplexHerm",
            ClassFamily::QuatHerm => "QuatHerm",
            ClassFamily::SpinFactor => "SpinFactor",
            ClassFamily::Albert => "Albert",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassRecord {
    pub family: ClassFamily,
    pub rank: u64,
    pub dim: u64,
}

/// Table dimension. For spin factors `param` is the dimension itself
/// (`≥ 3`, rank 2); otherwise it is the rank.
pub fn dim_of(family: ClassFamily, param: u64) -> Result<u64> {
    let bad = |msg: String| Err(Error::InvalidAlgebra(msg));
    match family {
        _ if param == 0 => bad("rank must be positive".into()),
        ClassFamily::RealSym => Ok(param * (param + 1) / 2),
        ClassFamily::ComplexHerm => Ok(param * param),
        ClassFamily::QuatHerm => Ok(param * (2 * param - 1)),
        ClassFamily::SpinFactor if param >= 3 => Ok(param),
        ClassFamily::SpinFactor => bad(format!("spin factor of dimension {param} is not simple")),
        ClassFamily::Albert if param == 3 => Ok(27),
        ClassFamily::Albert => bad(format!("the Albert algebra has rank 3, not {param}")),
    }
}

pub fn record(family: ClassFamily, param: u64) -> Result<ClassRecord> {
    let dim = dim_of(family, param)?;
    let rank = match family {
        ClassFamily::SpinFactor => 2,
        _ => param,
    };
    Ok(ClassRecord { family, rank, dim })
}

/// Simple algebras of the given rank, by dimension. Rank 2 also carries
/// every spin factor and is never asked for (targets have rank `r² ≥ 4`).
fn records_of_rank(rank: u64) -> Vec<ClassRecord> {
    let mut out: Vec<ClassRecord> = ClassFamily::MATRIX.iter().map(|&f| record(f, rank).expect("positive rank")).collect();
    if rank == 3 {
        out.push(record(ClassFamily::Albert, 3).expect("rank 3"));
    }
    out.sort_by_key(|r| r.dim);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Equal,
    AtLeast,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Equal => "=",
            Relation::AtLeast => ">=",
        }
    }

    fn accepts(self, dim: u64, need: u64) -> bool {
        match self {
            Relation::Equal => dim == need,
            Relation::AtLeast => dim >= need,
        }
    }
}

/// One candidate and the constraint it had to meet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub candidate: ClassRecord,
    pub required_rank: u64,
    pub required_dim: u64,
    pub options: Vec<ClassRecord>,
    pub passed: bool,
}

/// Spin factors of dimension `from..=to` all fail at once: their squared
/// dimension exceeds the largest rank-4 dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinTail {
    pub from: u64,
    pub to: u64,
    pub smallest_square: u64,
    pub largest_option: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NearMiss {
    pub summands: u64,
    pub family: ClassFamily,
    pub rank: u64,
    pub dim: u64,
    pub required_rank: u64,
    pub required_dim: u64,
    pub matched_by: ClassRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassTrace {
    pub procedure: String,
    pub max_rank: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summands: Option<u64>,
    pub relation: Relation,
    pub entries: Vec<TraceEntry>,
    pub spin_tail: Option<SpinTail>,
    pub survivors: Vec<ClassFamily>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub near_miss: Option<NearMiss>,
}

/// Spin dimensions are enumerated up to `4·max_rank⁴`.
pub fn spin_bound(max_rank: u64) -> u64 {
    4 * max_rank.pow(4)
}

fn check(candidate: ClassRecord, relation: Relation) -> TraceEntry {
    let required_rank = candidate.rank * candidate.rank;
    let required_dim = candidate.dim * candidate.dim;
    let options = records_of_rank(required_rank);
    let passed = options.iter().any(|o| relation.accepts(o.dim, required_dim));
    TraceEntry { candidate, required_rank, required_dim, options, passed }
}

fn survey(procedure: &str, max_rank: u64, summands: Option<u64>, relation: Relation) -> Result<ClassTrace> {
    if max_rank < 2 {
        return Err(Error::Precondition("max_rank must be at least 2".into()));
    }
    let mut entries = Vec::new();
    let mut survivors = Vec::new();
    let mut spin_tail = None;
    for family in ClassFamily::ALL {
        let candidates: Vec<ClassRecord> = match family {
            ClassFamily::SpinFactor => {
                // Individually while d² can still reach a rank-4 dimension.
                let largest = records_of_rank(4).last().expect("nonempty").dim;
                let mut n = 3;
                let mut out = Vec::new();
                while n * n <= largest {
                    out.push(record(family, n)?);
                    n += 1;
                }
                spin_tail = Some(SpinTail { from: n, to: spin_bound(max_rank), smallest_square: n * n, largest_option: largest });
                out
            }
            ClassFamily::Albert if max_rank < 3 => continue,
            ClassFamily::Albert => vec![record(family, 3)?],
            _ => (2..=max_rank).map(|r| record(family, r)).collect::<Result<_>>()?,
        };
        let checked: Vec<TraceEntry> = candidates.into_iter().map(|c| check(c, relation)).collect();
        let all = checked.iter().all(|e| e.passed) && family != ClassFamily::SpinFactor;
        if all {
            survivors.push(family);
        }
        entries.extend(checked);
    }
    Ok(ClassTrace { procedure: procedure.into(), max_rank, summands, relation, entries, spin_tail, survivors, near_miss: None })
}

/// Local tomography: `E = W ⊗ W` needs rank exactly `r²` and dimension exactly `d²`.
pub fn survivors_local_tomography(max_rank: u64) -> Result<ClassTrace> {
    survey("local-tomography", max_rank, None, Relation::Equal)
}

/// Injective composites: rank `r²`, dimension at least `d²`.
pub fn survivors_injective_composite(max_rank: u64) -> Result<ClassTrace> {
    survey("injective-composite", max_rank, None, Relation::AtLeast)
}

/// Direct sums of `summands` copies of a simple `W`: classical effects force
/// the composite of one summand pair into a single simple factor of rank
/// `r²`, so the count is the injective one, independent of `summands`.
pub fn survivors_classicality(max_rank: u64, summands: u64) -> Result<ClassTrace> {
    if summands == 0 {
        return Err(Error::Precondition("need at least one summand".into()));
    }
    let mut t = survey("classicality", max_rank, Some(summands), Relation::AtLeast)?;
    t.near_miss = Some(albert_near_miss());
    Ok(t)
}

/// Three Albert summands have rank 9 and dimension 81, and the composite
/// constraint (rank 81, dimension at least 81²) is met by `ComplexHerm(81)`.
/// Counting alone cannot rule this case out.
pub fn albert_near_miss() -> NearMiss {
    let k = 3;
    let rank = k * 3;
    let dim = k * 27;
    let (required_rank, required_dim) = (rank * rank, dim * dim);
    let matched_by = records_of_rank(required_rank)
        .into_iter()
        .find(|r| r.dim >= required_dim)
        .expect("a matrix family of rank 81 is large enough");
    NearMiss { summands: k, family: ClassFamily::Albert, rank, dim, required_rank, required_dim, matched_by }
}

fn join_dims(opts: &[ClassRecord]) -> String {
    opts.iter().map(|o| o.dim.to_string()).collect::<Vec<_>>().join(", ")
}

impl ClassTrace {
    /// Plain-text derivation, one line per candidate.
    pub fn render(&self) -> String {
        let rel = self.relation.symbol();
        let mut s = String::new();
        let _ = write!(s, "{} max_rank={}", self.procedure, self.max_rank);
        if let Some(k) = self.summands {
            let _ = write!(s, " summands={k}");
        }
        s.push('\n');
        let _ = writeln!(s, "constraint: simple E with rank(E) = r^2 and dim(E) {rel} d^2");
        for family in ClassFamily::ALL {
            for e in self.entries.iter().filter(|e| e.candidate.family == family) {
                let c = e.candidate;
                let _ = writeln!(
                    s,
                    "{} r={} d={}: need rank {}, dim {rel} {}; rank-{} dims [{}]; {}",
                    c.family,
                    c.rank,
                    c.dim,
                    e.required_rank,
                    e.required_dim,
                    e.required_rank,
                    join_dims(&e.options),
                    if e.passed { "pass" } else { "fail" }
                );
            }
            if family == ClassFamily::SpinFactor {
                if let Some(t) = &self.spin_tail {
                    let _ = writeln!(
                        s,
                        "SpinFactor r=2 d={}..{}: need rank 4, dim {rel} d^2 with d^2 >= {} > {} = largest rank-4 dim; fail",
                        t.from, t.to, t.smallest_square, t.largest_option
                    );
                }
            }
        }
        let names: Vec<String> = self.survivors.iter().map(|f| f.to_string()).collect();
        let _ = writeln!(s, "survivors: [{}]", names.join(", "));
        if let Some(n) = &self.near_miss {
            let _ = writeln!(
                s,
                "near-miss: {} x {} has rank {}, dim {}; needs rank {}, dim >= {}; {} r={} has dim {}; counting alone does not exclude it",
                n.summands, n.family, n.rank, n.dim, n.required_rank, n.required_dim, n.matched_by.family, n.matched_by.rank, n.matched_by.dim
            );
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_values() {
        assert_eq!(dim_of(ClassFamily::ComplexHerm, 3).unwrap(), 9);
        assert_eq!(dim_of(ClassFamily::RealSym, 2).unwrap(), 3);
        assert_eq!(dim_of(ClassFamily::Albert, 3).unwrap(), 27);
        assert_eq!(dim_of(ClassFamily::QuatHerm, 3).unwrap(), 15);
        assert!(dim_of(ClassFamily::Albert, 2).is_err());
        assert!(dim_of(ClassFamily::SpinFactor, 2).is_err());
    }

    #[test]
    fn albert_fails_by_nonexistence() {
        let t = survivors_local_tomography(3).unwrap();
        let e = t.entries.iter().find(|e| e.candidate.family == ClassFamily::Albert).unwrap();
        assert_eq!((e.required_rank, e.required_dim), (9, 729));
        assert_eq!(e.options.iter().map(|o| o.dim).collect::<Vec<_>>(), vec![45, 81, 153]);
        assert!(!e.passed);
    }

    #[test]
    fn injective_spin_nine_fails() {
        let e = check(record(ClassFamily::SpinFactor, 9).unwrap(), Relation::AtLeast);
        assert_eq!(e.required_dim, 81);
        assert!(!e.passed);
    }

    #[test]
    fn relaxation_is_monotone() {
        for m in 2..=8 {
            let lt = survivors_local_tomography(m).unwrap().survivors;
            let inj = survivors_injective_composite(m).unwrap().survivors;
            assert!(lt.iter().all(|f| inj.contains(f)), "max_rank {m}");
        }
    }
}
