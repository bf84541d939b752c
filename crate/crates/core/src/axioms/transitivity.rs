use super::{
    as_polyhedral, find_normalized_automorphism, invariant_of, rows, same_factor, AutomorphismSearch, AxiomVerdict, JordanView,
    Violation, Witness,
};
use crate::eja::{matrix_of, quat_j, Family, JordanAlgebra, SimpleFactor};
use crate::error::{Error, Result};
use crate::linalg::{CMat, C64};
use crate::ovs::{
    default_probes, face_dimension, is_extremal_ray, is_order_isomorphism, to_f64_matrix, ConeModel, Element, PolyhedralCone,
    PositiveMap, System,
};
use crate::rational;
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::sync::Arc;

pub const PROFILE_SAMPLES: usize = 200;
const PROFILE_SEED: u64 = 0x9F;

/// A plane rotation carrying one pure state of a simple factor to another;
/// `matrix(t)` is the rotation by `t·theta`.
enum Rotation {
    Identity,
    Unitary { a: DVector<C64>, w: DVector<C64>, quat: bool, theta: f64 },
    Spin { a: DVector<f64>, w: DVector<f64>, theta: f64 },
}

impl Rotation {
    fn between(f: &SimpleFactor, p1: &[f64], p2: &[f64]) -> Self {
        if f.dim == 1 {
            return Rotation::Identity;
        }
        match f.family {
            Family::SpinFactor => {
                let a = DVector::from_column_slice(&p1[1..]).normalize();
                let b = DVector::from_column_slice(&p2[1..]).normalize();
                let c = a.dot(&b);
                let w = &b - &a * c;
                let s = w.norm();
                if s > 1e-12 {
                    Rotation::Spin { w: w / s, theta: s.atan2(c), a }
                } else if c > 0.0 {
                    Rotation::Identity
                } else {
                    // Antipodal: rotate by π in a deterministic plane.
                    let k = a.iamin();
                    let mut e = DVector::zeros(a.len());
                    e[k] = 1.0;
                    let w = (&e - &a * a[k]).normalize();
                    Rotation::Spin { a, w, theta: PI }
                }
            }
            _ => {
                let quat = f.family == Family::QuatHerm;
                let v1 = dominant_column(&f.to_matrix(p1));
                let v2 = dominant_column(&f.to_matrix(p2));
                let aligned = if quat {
                    let jv2 = quat_j(&v2);
                    let proj = &v2 * v2.dotc(&v1) + &jv2 * jv2.dotc(&v1);
                    if proj.norm() > 1e-12 { proj.normalize() } else { v2 }
                } else {
                    let c = v1.dotc(&v2);
                    if c.norm() > 1e-14 { &v2 * (c.conj() / c.norm()) } else { v2 }
                };
                let c = v1.dotc(&aligned).re;
                let w = &aligned - &v1 * C64::new(c, 0.0);
                let s = w.norm();
                if s <= 1e-12 {
                    return Rotation::Identity;
                }
                Rotation::Unitary { w: w / C64::new(s, 0.0), theta: s.atan2(c), a: v1, quat }
            }
        }
    }

    /// Rotation by `t·theta` as a map on factor coordinates.
    fn matrix(&self, f: &SimpleFactor, t: f64) -> DMatrix<f64> {
        match self {
            Rotation::Identity => DMatrix::identity(f.dim, f.dim),
            Rotation::Spin { a, w, theta } => {
                let r = plane_rotation_real(a, w, t * theta);
                let mut m = DMatrix::identity(f.dim, f.dim);
                m.view_mut((1, 1), (f.dim - 1, f.dim - 1)).copy_from(&r);
                m
            }
            Rotation::Unitary { a, w, quat, theta } => {
                let mut u = plane_rotation(a, w, t * theta);
                if *quat {
                    let (ja, jw) = (quat_j(a), quat_j(w));
                    u += plane_rotation(&ja, &jw, t * theta) - CMat::identity(a.len(), a.len());
                }
                matrix_of(f.dim, |x| f.from_matrix(&(&u * f.to_matrix(x.as_slice()) * u.adjoint())))
            }
        }
    }
}

fn dominant_column(m: &CMat) -> DVector<C64> {
    let k = (0..m.ncols())
        .max_by(|&i, &j| m.column(i).norm().total_cmp(&m.column(j).norm()))
        .unwrap_or(0);
    m.column(k).normalize()
}

/// `I + (cos θ − 1)(aa† + ww†) + sin θ (wa† − aw†)` for orthonormal `a`, `w`.
fn plane_rotation(a: &DVector<C64>, w: &DVector<C64>, theta: f64) -> CMat {
    let n = a.len();
    let (s, c) = theta.sin_cos();
    CMat::identity(n, n) + (a * a.adjoint() + w * w.adjoint()) * C64::new(c - 1.0, 0.0)
        + (w * a.adjoint() - a * w.adjoint()) * C64::new(s, 0.0)
}

fn plane_rotation_real(a: &DVector<f64>, w: &DVector<f64>, theta: f64) -> DMatrix<f64> {
    let n = a.len();
    let (s, c) = theta.sin_cos();
    DMatrix::identity(n, n) + (a * a.transpose() + w * w.transpose()) * (c - 1.0) + (w * a.transpose() - a * w.transpose()) * s
}

/// Map on algebra coordinates: block `from` goes through `m` into block
/// `to`, block `to` moves unchanged to block `from`, the rest is fixed.
fn block_map(alg: &JordanAlgebra, from: usize, to: usize, m: &DMatrix<f64>) -> DMatrix<f64> {
    let d = alg.dim();
    let mut out = DMatrix::identity(d, d);
    let (of, ot) = (alg.offset(from), alg.offset(to));
    let (nf, nt) = (alg.summands()[from].dim, alg.summands()[to].dim);
    out.view_mut((of, of), (nf, nf)).fill(0.0);
    out.view_mut((ot, ot), (nt, nt)).fill(0.0);
    out.view_mut((ot, of), (nt, nf)).copy_from(m);
    if from != to {
        out.view_mut((of, ot), (nf, nt)).fill_with_identity();
    }
    out
}

fn ensure_pure(system: &System, w: &Element, tol: f64) -> Result<()> {
    w.expect_dim(system.dim())?;
    let u = system.unit.eval(w);
    if (u - 1.0).abs() > 1e-8 {
        return Err(Error::Precondition(format!("state is not normalized (unit value {u})")));
    }
    if !system.cone.membership(w, tol.max(1e-9) * w.norm().max(1.0))? || !is_extremal_ray(&system.cone, w, tol)? {
        return Err(Error::Precondition("state is not pure".into()));
    }
    Ok(())
}

struct JordanPair {
    view: JordanView,
    k1: usize,
    k2: usize,
    p1: Element,
    p2: Element,
}

fn locate(view: JordanView, w1: &Element, w2: &Element) -> Result<JordanPair> {
    let (p1, p2) = (view.to_alg(w1), view.to_alg(w2));
    let k1 = view.alg.summand_of(&p1, 1e-7).ok_or_else(|| Error::Precondition("pure state spans several summands".into()))?;
    let k2 = view.alg.summand_of(&p2, 1e-7).ok_or_else(|| Error::Precondition("pure state spans several summands".into()))?;
    Ok(JordanPair { view, k1, k2, p1, p2 })
}

/// Verifies a constructed map and turns it into a verdict; a map that fails
/// re-verification yields an inconclusive verdict, never a disproof.
fn verified(axiom: &str, system: &Arc<System>, matrix: DMatrix<f64>, w1: &Element, w2: &Element) -> Result<AxiomVerdict> {
    let map = PositiveMap::endo(matrix, system.clone())?;
    let residual = (map.apply(w1).coords - &w2.coords).norm();
    let iso = is_order_isomorphism(&map, 1e-7)?;
    if !iso.holds() || !map.normalized || residual > 1e-8 {
        return Ok(AxiomVerdict::inconclusive(
            axiom,
            None,
            format!("constructed map failed re-verification (residual {residual:.3e}); this is not a disproof"),
        ));
    }
    Ok(AxiomVerdict::holds(axiom, Witness::Map { matrix: rows(&map.matrix), normalized: true, p: None }, Some(residual)))
}

/// A normalized order automorphism taking pure `w1` to pure `w2`, or an
/// automorphism-invariant reason why none exists.
pub fn pure_transitivity_witness(system: &Arc<System>, w1: &Element, w2: &Element, tol: f64) -> Result<AxiomVerdict> {
    const AXIOM: &str = "pure-transitivity";
    ensure_pure(system, w1, tol)?;
    ensure_pure(system, w2, tol)?;
    if let Some(view) = JordanView::of(system) {
        let jp = locate(view, w1, w2)?;
        let alg = &jp.view.alg;
        let (f1, f2) = (&alg.summands()[jp.k1], &alg.summands()[jp.k2]);
        if jp.k1 != jp.k2 && !same_factor(f1, f2) {
            if f1.invariant() != f2.invariant() {
                return Ok(AxiomVerdict::fails(
                    AXIOM,
                    Violation::NonIsomorphicSummands { first: invariant_of(jp.k1, f1), second: invariant_of(jp.k2, f2) },
                    None,
                ));
            }
            return Ok(AxiomVerdict::unsupported(
                AXIOM,
                format!("summands {} and {} are isomorphic ({} vs {}) but no cross-family witness is constructed", jp.k1, jp.k2, f1.family, f2.family),
            ));
        }
        let rot = Rotation::between(f1, alg.part(&jp.p1, jp.k1), alg.part(&jp.p2, jp.k2));
        let m = block_map(alg, jp.k1, jp.k2, &rot.matrix(f1, 1.0));
        return verified(AXIOM, system, jp.view.pull_map(&m), w1, w2);
    }
    match &system.cone {
        ConeModel::SharedCorner => {
            let a = face_profile(system, w1, PROFILE_SAMPLES, tol)?;
            let b = face_profile(system, w2, PROFILE_SAMPLES, tol)?;
            if a != b {
                return Ok(AxiomVerdict::fails(AXIOM, Violation::FaceProfile { first: a, second: b, samples: PROFILE_SAMPLES }, None)
                    .with_note("normalized order isomorphisms preserve face dimensions of sums of pure states"));
            }
            Ok(AxiomVerdict::inconclusive(AXIOM, None, format!("equal face profiles ({a}); no witness constructor")))
        }
        _ => match as_polyhedral(system) {
            Some(p) => polyhedral_witness(AXIOM, system, &p, w1, w2),
            None => Ok(AxiomVerdict::unsupported(AXIOM, format!("no witness constructor for {} cone", system.cone.kind()))),
        },
    }
}

/// Normalized extremal rays `r/u(r)` in floating point.
fn normalized_rays(system: &System, p: &PolyhedralCone) -> Vec<Element> {
    p.extreme_ray_indices()
        .into_iter()
        .map(|i| {
            let x = Element::new(p.generators_f64()[i].clone());
            x.scale(1.0 / system.unit.eval(&x))
        })
        .collect()
}

fn ray_index(rays: &[Element], w: &Element) -> Result<usize> {
    rays.iter()
        .position(|r| (&r.coords - &w.coords).norm() <= 1e-7 * (1.0 + r.norm()))
        .ok_or_else(|| Error::Precondition("pure state does not match an extremal ray".into()))
}

fn polyhedral_witness(axiom: &str, system: &Arc<System>, p: &PolyhedralCone, w1: &Element, w2: &Element) -> Result<AxiomVerdict> {
    let rays = normalized_rays(system, p);
    let (i, j) = (ray_index(&rays, w1)?, ray_index(&rays, w2)?);
    let unit = rational::vec_from_f64(system.unit.coords.as_slice()).ok_or(Error::NonFinite)?;
    match find_normalized_automorphism(p, &unit, i, j) {
        AutomorphismSearch::Found { matrix, perm } => {
            let m = to_f64_matrix(&matrix);
            Ok(verified(axiom, system, m, w1, w2)?.with_note(format!("exact ray permutation {perm:?}")))
        }
        AutomorphismSearch::None { nodes } => {
            Ok(AxiomVerdict::fails(axiom, Violation::NoAutomorphism { from: i, to: j, nodes }, None)
                .with_note("exhaustive incidence-pruned search over ray assignments"))
        }
        AutomorphismSearch::Exceeded { nodes } => {
            Ok(AxiomVerdict::inconclusive(axiom, None, format!("automorphism search stopped after {nodes} nodes")))
        }
    }
}

/// `max` over sampled pure `σ` of `face_dimension(ω + σ)`. Normalized order
/// isomorphisms permute pure states and preserve face dimensions, so pure
/// states with different profiles are in different orbits.
pub fn face_profile(system: &System, w: &Element, samples: usize, tol: f64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(PROFILE_SEED);
    let probes = default_probes(system.dim());
    let mut best = 0;
    for s in system.cone.extremal_samples(samples, &mut rng) {
        let s = system.normalize(&s)?;
        best = best.max(face_dimension(&system.cone, &(w + &s), probes, tol)?);
    }
    Ok(best)
}

/// A path `ω_t = Φ_t(w1)` of pure states from `w1` to `w2` through normalized
/// order isomorphisms, sampled at `steps` equally spaced times in `[0, 1]`.
pub fn continuous_pure_transitivity(system: &Arc<System>, w1: &Element, w2: &Element, steps: usize, tol: f64) -> Result<AxiomVerdict> {
    const AXIOM: &str = "continuous-pure-transitivity";
    if steps < 2 {
        return Err(Error::Precondition("a path needs at least two steps".into()));
    }
    ensure_pure(system, w1, tol)?;
    ensure_pure(system, w2, tol)?;
    if let Some(view) = JordanView::of(system) {
        let jp = locate(view, w1, w2)?;
        if jp.k1 != jp.k2 {
            return Ok(AxiomVerdict::fails(AXIOM, Violation::DisjointSummands { first: jp.k1, second: jp.k2 }, None)
                .with_note("pure states of distinct summands lie in subspaces meeting only in 0"));
        }
        let alg = &jp.view.alg;
        let f = &alg.summands()[jp.k1];
        let rot = Rotation::between(f, alg.part(&jp.p1, jp.k1), alg.part(&jp.p2, jp.k1));
        let (mut times, mut states, mut maps) = (vec![], vec![], vec![]);
        let mut worst = 0.0f64;
        for k in 0..steps {
            let t = k as f64 / (steps - 1) as f64;
            let m = jp.view.pull_map(&block_map(alg, jp.k1, jp.k1, &rot.matrix(f, t)));
            let map = PositiveMap::endo(m, system.clone())?;
            let wt = map.apply(w1);
            if !map.normalized || ensure_pure(system, &wt, tol).is_err() {
                return Ok(AxiomVerdict::inconclusive(AXIOM, None, format!("path point at t = {t} failed the purity check")));
            }
            if k == steps - 1 {
                worst = (wt.coords - &w2.coords).norm();
            }
            times.push(t);
            states.push(map.apply(w1).to_vec());
            maps.push(rows(&map.matrix));
        }
        if worst > 1e-8 {
            return Ok(AxiomVerdict::inconclusive(AXIOM, None, format!("path ends {worst:.3e} away from the target")));
        }
        return Ok(AxiomVerdict::holds(AXIOM, Witness::Path { times, states, maps }, Some(worst)));
    }
    match &system.cone {
        ConeModel::SharedCorner => {
            let v = pure_transitivity_witness(system, w1, w2, tol)?;
            Ok(match v.violation {
                Some(violation) => AxiomVerdict::fails(AXIOM, violation, None).with_note("no normalized order isomorphism at all"),
                None => AxiomVerdict::inconclusive(AXIOM, None, "no path constructor for this cone"),
            })
        }
        _ => match as_polyhedral(system) {
            Some(p) => {
                let count = p.extreme_ray_indices().len();
                if (&w1.coords - &w2.coords).norm() <= 1e-9 {
                    return Ok(AxiomVerdict::holds(AXIOM, Witness::Note { text: "constant path".into() }, None));
                }
                Ok(AxiomVerdict::fails(AXIOM, Violation::FinitelyManyPure { count }, None))
            }
            None => Ok(AxiomVerdict::unsupported(AXIOM, format!("no path constructor for {} cone", system.cone.kind()))),
        },
    }
}

/// Pure states `p₂ = (0,1,0,0,0)` and `(1,0,0,0,0)` of the shared-corner cone.
pub fn shared_corner_pair() -> (Element, Element) {
    (Element::basis(5, 1), Element::basis(5, 0))
}

fn random_pure_in(view: &JordanView, k: usize, rng: &mut ChaCha8Rng) -> Element {
    view.from_alg(&view.alg.random_pure_in(k, rng))
}

/// Pure transitivity of a whole system: seeded random pairs for Jordan
/// cones (or one pair from two non-isomorphic summands), every ray pair for
/// polyhedral cones, the designated pair for the shared-corner cone.
pub fn check_pure_transitivity(system: &Arc<System>, pairs: usize, seed: u64, tol: f64) -> Result<AxiomVerdict> {
    const AXIOM: &str = "pure-transitivity";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if let Some(view) = JordanView::of(system) {
        let s = view.alg.summands();
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                if !same_factor(&s[i], &s[j]) {
                    let (a, b) = (random_pure_in(&view, i, &mut rng), random_pure_in(&view, j, &mut rng));
                    return pure_transitivity_witness(system, &a, &b, tol);
                }
            }
        }
        let mut first = None;
        for _ in 0..pairs {
            let a = view.from_alg(&view.alg.random_pure(&mut rng));
            let b = view.from_alg(&view.alg.random_pure(&mut rng));
            let v = pure_transitivity_witness(system, &a, &b, tol)?;
            if !v.is_holds() {
                return Ok(v);
            }
            first.get_or_insert(v);
        }
        return Ok(first
            .map(|v| v.with_note(format!("{pairs} random pure pairs")))
            .unwrap_or_else(|| AxiomVerdict::inconclusive(AXIOM, None, "no pairs requested")));
    }
    match &system.cone {
        ConeModel::SharedCorner => {
            let (a, b) = shared_corner_pair();
            pure_transitivity_witness(system, &a, &b, tol)
        }
        _ => match as_polyhedral(system) {
            Some(p) => {
                let rays = normalized_rays(system, &p);
                let mut last = None;
                for r in &rays {
                    let v = pure_transitivity_witness(system, &rays[0], r, tol)?;
                    if !v.is_holds() {
                        return Ok(v);
                    }
                    last = Some(v);
                }
                Ok(last.expect("a cone has rays").with_note(format!("ray 0 reaches all {} rays", rays.len())))
            }
            None => Ok(AxiomVerdict::unsupported(AXIOM, format!("no witness constructor for {} cone", system.cone.kind()))),
        },
    }
}

/// Continuous pure transitivity of a whole system: random pairs with
/// 16-step paths on simple Jordan cones, a cross-summand pair on direct sums.
pub fn check_continuous_pure_transitivity(system: &Arc<System>, pairs: usize, seed: u64, tol: f64) -> Result<AxiomVerdict> {
    const AXIOM: &str = "continuous-pure-transitivity";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if let Some(view) = JordanView::of(system) {
        if view.alg.summands().len() > 1 {
            let (a, b) = (random_pure_in(&view, 0, &mut rng), random_pure_in(&view, 1, &mut rng));
            return continuous_pure_transitivity(system, &a, &b, 16, tol);
        }
        let mut first = None;
        for _ in 0..pairs {
            let a = random_pure_in(&view, 0, &mut rng);
            let b = random_pure_in(&view, 0, &mut rng);
            let v = continuous_pure_transitivity(system, &a, &b, 16, tol)?;
            if !v.is_holds() {
                return Ok(v);
            }
            first.get_or_insert(v);
        }
        return Ok(first
            .map(|v| v.with_note(format!("{pairs} random pure pairs, 16 steps each")))
            .unwrap_or_else(|| AxiomVerdict::inconclusive(AXIOM, None, "no pairs requested")));
    }
    match &system.cone {
        ConeModel::SharedCorner => {
            let (a, b) = shared_corner_pair();
            continuous_pure_transitivity(system, &a, &b, 16, tol)
        }
        _ => match as_polyhedral(system) {
            Some(p) => {
                let rays = normalized_rays(system, &p);
                if rays.len() < 2 {
                    return Ok(AxiomVerdict::holds(AXIOM, Witness::Note { text: "single pure state".into() }, None));
                }
                continuous_pure_transitivity(system, &rays[0], &rays[1], 16, tol)
            }
            None => Ok(AxiomVerdict::unsupported(AXIOM, format!("no path constructor for {} cone", system.cone.kind()))),
        },
    }
}
