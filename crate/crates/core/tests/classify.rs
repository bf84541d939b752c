use conelab_core::classify::*;
use std::collections::BTreeSet;
use ClassFamily::*;

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}.txt", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

#[test]
fn traces_match_the_brute_force_enumeration() {
    let cases: Vec<(&str, ClassTrace)> = vec![
        ("classify_lt_8", survivors_local_tomography(8).unwrap()),
        ("classify_lt_2", survivors_local_tomography(2).unwrap()),
        ("classify_inj_8", survivors_injective_composite(8).unwrap()),
        ("classify_inj_3", survivors_injective_composite(3).unwrap()),
        ("classify_cls_8_1", survivors_classicality(8, 1).unwrap()),
        ("classify_cls_8_2", survivors_classicality(8, 2).unwrap()),
        ("classify_cls_8_3", survivors_classicality(8, 3).unwrap()),
    ];
    for (name, trace) in cases {
        assert_eq!(trace.render(), golden(name), "{name}");
    }
}

#[test]
fn survivors_at_rank_eight() {
    assert_eq!(survivors_local_tomography(8).unwrap().survivors, vec![ComplexHerm]);
    assert_eq!(survivors_injective_composite(8).unwrap().survivors, vec![RealSym, ComplexHerm]);
    for k in 1..=3 {
        assert_eq!(survivors_classicality(8, k).unwrap().survivors, vec![RealSym, ComplexHerm]);
    }
}

#[test]
fn table_dimensions() {
    assert_eq!(dim_of(ComplexHerm, 3).unwrap(), 9);
    assert_eq!(dim_of(RealSym, 2).unwrap(), 3);
    assert_eq!(dim_of(Albert, 3).unwrap(), 27);
    assert_eq!(dim_of(QuatHerm, 3).unwrap(), 15);
    assert_eq!(record(SpinFactor, 7).unwrap(), ClassRecord { family: SpinFactor, rank: 2, dim: 7 });
    assert!(dim_of(Albert, 4).is_err());
    assert!(dim_of(SpinFactor, 2).is_err());
    assert!(dim_of(RealSym, 0).is_err());
}

fn entry(t: &ClassTrace, family: ClassFamily, dim: u64) -> &TraceEntry {
    t.entries.iter().find(|e| e.candidate.family == family && e.candidate.dim == dim).unwrap()
}

#[test]
fn albert_fails_both_counts() {
    let lt = survivors_local_tomography(3).unwrap();
    let e = entry(&lt, Albert, 27);
    assert_eq!((e.required_rank, e.required_dim, e.passed), (9, 729, false));
    let dims: Vec<u64> = e.options.iter().map(|o| o.dim).collect();
    assert_eq!(dims, vec![45, 81, 153]);
    let inj = survivors_injective_composite(3).unwrap();
    assert!(!entry(&inj, Albert, 27).passed);
}

#[test]
fn rank_two_entries() {
    let lt = survivors_local_tomography(2).unwrap();
    assert!(!entry(&lt, RealSym, 3).passed);
    let inj = survivors_injective_composite(8).unwrap();
    assert!(entry(&inj, RealSym, 3).passed);
    assert!(!inj.entries.iter().any(|e| e.candidate.family == SpinFactor && e.candidate.dim == 9));
    let tail = inj.spin_tail.clone().unwrap();
    assert!(tail.from <= 9 && 9 <= tail.to);
    assert_eq!(tail.largest_option, 28);
}

#[test]
fn classicality_entries() {
    let t = survivors_classicality(3, 3).unwrap();
    let e = entry(&t, ComplexHerm, 9);
    assert_eq!((e.required_rank, e.required_dim, e.passed), (9, 81, true));
    let e = entry(&t, QuatHerm, 15);
    assert_eq!((e.required_rank, e.required_dim, e.passed), (9, 225, false));
    assert!(!entry(&t, Albert, 27).passed);
}

#[test]
fn three_albert_summands_are_a_near_miss() {
    let n = albert_near_miss();
    assert_eq!((n.rank, n.dim, n.required_rank, n.required_dim), (9, 81, 81, 6561));
    assert_eq!(n.matched_by, ClassRecord { family: ComplexHerm, rank: 81, dim: 6561 });
}

#[test]
fn relaxing_the_constraint_never_loses_survivors() {
    for r in 2..=12 {
        let lt: BTreeSet<_> = survivors_local_tomography(r).unwrap().survivors.into_iter().collect();
        let inj: BTreeSet<_> = survivors_injective_composite(r).unwrap().survivors.into_iter().collect();
        assert!(inj.is_superset(&lt), "max_rank {r}");
    }
}

#[test]
fn small_ranks_are_rejected() {
    assert!(survivors_local_tomography(1).is_err());
    assert!(survivors_classicality(4, 0).is_err());
}

#[test]
fn spin_enumeration_covers_the_bound() {
    assert_eq!(spin_bound(8), 16384);
    let t = survivors_injective_composite(8).unwrap();
    assert_eq!(t.spin_tail.unwrap().to, 16384);
}
