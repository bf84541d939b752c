use super::{as_polyhedral, AxiomVerdict, JordanView, Violation, Witness};
use crate::error::{Error, Result};
use crate::lp::feasible_point;
use crate::ovs::{Element, PolyhedralCone, System};
use crate::rational::{self, dot, exact_vec, is_positive_definite, nullspace, q, ExactQ, Q, QVec};
use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const MAX_SEARCH_RAYS: usize = 12;
/// Above this many rays the bijections are enumerated with incidence pruning.
const FULL_ENUMERATION_RAYS: usize = 8;
const SAMPLE_SEED: u64 = 0x5D;

fn check_spd(inner: &DMatrix<f64>, dim: usize) -> Result<()> {
    if inner.nrows() != dim || inner.ncols() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: inner.nrows() });
    }
    let asym = (inner - inner.transpose()).norm();
    if asym > 1e-12 * inner.norm().max(1.0) {
        return Err(Error::NotSpd("matrix is not symmetric".into()));
    }
    if inner.clone().cholesky().is_none() {
        return Err(Error::NotSpd("matrix is not positive definite".into()));
    }
    Ok(())
}

/// `C = C*` with respect to `⟨x, y⟩ = xᵀ G y`. Exact for polyhedral cones,
/// sampled for Jordan cones, inconclusive otherwise unless a negative pairing
/// turns up.
pub fn check_self_dual(system: &System, inner: &DMatrix<f64>, tol: f64) -> Result<AxiomVerdict> {
    const AXIOM: &str = "self-duality";
    let dim = system.dim();
    check_spd(inner, dim)?;
    if let Some(p) = as_polyhedral(system) {
        if !p.is_full_dimensional() {
            return Ok(AxiomVerdict::fails(AXIOM, Violation::Other { text: "cone is not full-dimensional".into() }, None));
        }
        let g: Vec<QVec> = (0..dim)
            .map(|r| rational::vec_from_f64(inner.row(r).iter().copied().collect::<Vec<_>>().as_slice()))
            .collect::<Option<_>>()
            .ok_or(Error::NonFinite)?;
        for (a, b) in p.generators().iter().tuple_combinations() {
            let v = dot(a, &rational::mat_vec(&g, b));
            if v.is_negative() {
                return Ok(AxiomVerdict::fails(
                    AXIOM,
                    Violation::NegativePairing {
                        x: rational::vec_to_f64(a),
                        y: rational::vec_to_f64(b),
                        value: rational::to_f64(&v),
                    },
                    None,
                ));
            }
        }
        let ginv = rational::inverse(&g).ok_or_else(|| Error::NotSpd("singular".into()))?;
        for n in p.facets() {
            let y = rational::mat_vec(&ginv, n);
            if !p.contains(&y, &Q::zero()) {
                return Ok(AxiomVerdict::fails(
                    AXIOM,
                    Violation::ExactDualNotInCone { normal: exact_vec(n), pulled_back: exact_vec(&y) },
                    None,
                ));
            }
        }
        return Ok(AxiomVerdict::holds(AXIOM, Witness::InnerProduct { gram: exact_rows(&g), bijection: vec![] }, None)
            .with_note("exact: generator pairings and pulled-back facet normals"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let samples = system.cone.extremal_samples(60, &mut rng);
    let mut min_pair = f64::INFINITY;
    let mut pairs = 0;
    for (x, y) in samples.iter().tuple_combinations() {
        pairs += 1;
        let v = x.coords.dot(&(inner * &y.coords)) / (x.norm() * y.norm());
        if v < min_pair {
            min_pair = v;
        }
        if v < -tol {
            return Ok(AxiomVerdict::fails(
                AXIOM,
                Violation::NegativePairing { x: x.to_vec(), y: y.to_vec(), value: v },
                Some(v),
            ));
        }
    }
    let Some(view) = JordanView::of(system) else {
        return Ok(AxiomVerdict::inconclusive(
            AXIOM,
            Some(Witness::Sampled { pairs, min_value: min_pair }),
            "sampled pairings are nonnegative; the dual inclusion cannot be certified by sampling",
        ));
    };
    // Dual inclusion: supporting functionals at boundary points (gradients
    // of the smallest eigenvalue) pulled back through G must be members.
    let ginv = inner.clone().try_inverse().ok_or_else(|| Error::NotSpd("singular".into()))?;
    let mut worst = f64::INFINITY;
    for _ in 0..30 {
        let b = simple_boundary(&view, &mut rng)?;
        let f = min_eigen_gradient(&view, &b)?;
        let y = Element::new(&ginv * &f);
        let m = system.cone.spectral_margin(&y).unwrap_or(0.0) / y.norm().max(1e-300);
        worst = worst.min(m);
        if m < -1e-5 {
            return Ok(AxiomVerdict::fails(
                AXIOM,
                Violation::DualNotInCone { functional: f.iter().copied().collect(), pulled_back: y.to_vec(), margin: m },
                Some(m),
            ));
        }
    }
    Ok(AxiomVerdict::holds(AXIOM, Witness::Sampled { pairs, min_value: min_pair }, Some(min_pair.min(worst)))
        .with_note("pure-state pairings nonnegative; pulled-back supporting functionals at 30 boundary points are cone members"))
}

/// Boundary point whose smallest eigenvalue is zero and simple.
fn simple_boundary<R: rand::Rng>(view: &JordanView, rng: &mut R) -> Result<Element> {
    let a = &view.alg;
    let spec = a.spectral(&a.random_interior(rng))?;
    let (imin, _) = spec
        .eigenvalues
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &l)| if l < acc.1 { (i, l) } else { acc });
    let mut out = DVector::zeros(a.dim());
    for (i, c) in spec.idempotents.iter().enumerate() {
        if i != imin {
            out += &c.coords * spec.eigenvalues[i].max(0.5);
        }
    }
    Ok(view.from_alg(&Element::new(out)))
}

fn min_eigen_gradient(view: &JordanView, x: &Element) -> Result<DVector<f64>> {
    let h = 1e-6;
    let d = x.dim();
    let mut g = DVector::zeros(d);
    for k in 0..d {
        let mut p = x.coords.clone();
        p[k] += h;
        let mut m = x.coords.clone();
        m[k] -= h;
        let lp = view.alg.min_eigenvalue(&view.to_alg(&Element::new(p)))?;
        let lm = view.alg.min_eigenvalue(&view.to_alg(&Element::new(m)))?;
        g[k] = (lp - lm) / (2.0 * h);
    }
    Ok(g)
}

/// Self-duality with the system's natural inner product: the trace form for
/// Jordan cones, an exact SPD search for polyhedral ones, Euclidean otherwise.
pub fn check_self_duality(system: &System, tol: f64) -> Result<AxiomVerdict> {
    if let Some(view) = JordanView::of(system) {
        let g = view.to_alg.transpose() * view.alg.gram() * &view.to_alg;
        return check_self_dual(system, &g, tol);
    }
    if let Some(p) = as_polyhedral(system) {
        return search_spd_self_duality(&p);
    }
    let d = system.dim();
    check_self_dual(system, &DMatrix::identity(d, d), tol)
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    Spd,
    Weak,
}

/// Searches ray→facet bijections for an SPD Gram matrix `G` with
/// `G rᵢ = μᵢ n_σ(i)`, `μᵢ > 0`; a solution makes the cone self-dual under
/// `xᵀ G y`. Every bijection failing yields an exhaustive certificate.
pub fn search_spd_self_duality(p: &PolyhedralCone) -> Result<AxiomVerdict> {
    search(p, Mode::Spd)
}

/// Same search for any invertible `T` with `T(C) = C*`.
pub fn search_weak_self_duality(p: &PolyhedralCone) -> Result<AxiomVerdict> {
    search(p, Mode::Weak)
}

enum Solve {
    Found(QVec),
    Infeasible,
    Undecided,
}

fn search(p: &PolyhedralCone, mode: Mode) -> Result<AxiomVerdict> {
    let axiom = match mode {
        Mode::Spd => "spd-self-duality",
        Mode::Weak => "weak-self-duality",
    };
    let rays: Vec<QVec> = p.extreme_ray_indices().into_iter().map(|i| p.generators()[i].clone()).collect();
    let n = rays.len();
    if n > MAX_SEARCH_RAYS {
        return Err(Error::SearchSpaceExceeded(format!("{n} extremal rays (cap {MAX_SEARCH_RAYS})")));
    }
    if !p.is_full_dimensional() {
        return Ok(AxiomVerdict::fails(axiom, Violation::Other { text: "cone is not full-dimensional".into() }, None));
    }
    let facets = p.facets().to_vec();
    if facets.len() != n {
        return Ok(AxiomVerdict::fails(axiom, Violation::Exhaustive { bijections: 0, incidence_consistent: 0 }, None)
            .with_note(format!("{n} extremal rays but {} facets: no bijection exists", facets.len())));
    }
    let inc: Vec<Vec<bool>> = rays.iter().map(|r| facets.iter().map(|f| dot(r, f).is_zero()).collect()).collect();
    if n == p.dim() {
        // Simplicial: G = R⁻ᵀR⁻¹ sends each ray to the normal of the
        // facet opposite it.
        let rinv = rational::inverse(&transpose(&rays)).ok_or_else(|| Error::Precondition("singular ray matrix".into()))?;
        let gram: Vec<QVec> = (0..n)
            .map(|i| (0..n).map(|j| (0..n).fold(Q::zero(), |s, k| s + &rinv[k][i] * &rinv[k][j])).collect())
            .collect();
        let bijection: Vec<usize> = (0..n).map(|i| (0..n).find(|&j| !inc[i][j]).expect("a facet misses each ray")).collect();
        let witness = match mode {
            Mode::Spd => Witness::InnerProduct { gram: exact_rows(&gram), bijection },
            Mode::Weak => Witness::ExactMap { matrix: exact_rows(&gram), bijection },
        };
        return Ok(AxiomVerdict::holds(axiom, witness, None).with_note("simplicial cone: inverse Gram matrix of the rays"));
    }
    let consistent = |perm: &[usize]| incidence_consistent(&inc, perm);
    let perms: Vec<Vec<usize>> = if n <= FULL_ENUMERATION_RAYS {
        (0..n).permutations(n).collect()
    } else {
        pruned_bijections(&inc)
    };
    let (mut examined, mut n_consistent, mut undecided) = (0, 0, 0);
    for perm in &perms {
        examined += 1;
        if consistent(perm) {
            n_consistent += 1;
        }
        match solve_bijection(&rays, &facets, perm, mode) {
            Solve::Found(v) => {
                let d = p.dim();
                let witness = match mode {
                    Mode::Spd => Witness::InnerProduct { gram: exact_rows(&sym_matrix(&v, d)), bijection: perm.clone() },
                    Mode::Weak => Witness::ExactMap { matrix: exact_rows(&full_matrix(&v, d)), bijection: perm.clone() },
                };
                return Ok(AxiomVerdict::holds(axiom, witness, None));
            }
            Solve::Infeasible => {}
            Solve::Undecided => undecided += 1,
        }
    }
    if undecided > 0 {
        return Ok(AxiomVerdict::inconclusive(
            axiom,
            None,
            format!("{undecided} of {examined} bijections have multi-dimensional solution spaces that were not decided"),
        ));
    }
    let mut v = AxiomVerdict::fails(axiom, Violation::Exhaustive { bijections: examined, incidence_consistent: n_consistent }, None);
    if n > FULL_ENUMERATION_RAYS {
        v = v.with_note("only incidence-consistent bijections enumerated; the others cannot carry an order isomorphism");
    }
    Ok(v)
}

fn incidence_consistent(inc: &[Vec<bool>], perm: &[usize]) -> bool {
    let n = inc.len();
    let common = |i: usize, k: usize| (0..n).filter(|&j| inc[i][j] && inc[k][j]).count();
    let fcommon = |a: usize, b: usize| (0..n).filter(|&l| inc[l][a] && inc[l][b]).count();
    (0..n).all(|i| common(i, i) == fcommon(perm[i], perm[i]))
        && (0..n).tuple_combinations().all(|(i, k)| common(i, k) == fcommon(perm[i], perm[k]))
}

/// Incidence-consistent bijections by backtracking.
fn pruned_bijections(inc: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = inc.len();
    let common = |i: usize, k: usize| (0..n).filter(|&j| inc[i][j] && inc[k][j]).count();
    let fcommon = |a: usize, b: usize| (0..n).filter(|&l| inc[l][a] && inc[l][b]).count();
    let mut out = Vec::new();
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(
        perm: &mut Vec<usize>,
        used: &mut [bool],
        n: usize,
        ok: &dyn Fn(&[usize], usize) -> bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        if perm.len() == n {
            out.push(perm.clone());
            return;
        }
        for a in 0..n {
            if !used[a] && ok(perm, a) {
                used[a] = true;
                perm.push(a);
                rec(perm, used, n, ok, out);
                perm.pop();
                used[a] = false;
            }
        }
    }
    let ok = |perm: &[usize], a: usize| {
        let i = perm.len();
        common(i, i) == fcommon(a, a) && perm.iter().enumerate().all(|(k, &b)| common(k, i) == fcommon(b, a))
    };
    rec(&mut perm, &mut used, n, &ok, &mut out);
    out
}

fn sym_index(i: usize, j: usize, d: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * d - i * (i + 1) / 2 + j
}

fn sym_matrix(v: &[Q], d: usize) -> Vec<QVec> {
    (0..d).map(|i| (0..d).map(|j| v[sym_index(i, j, d)].clone()).collect()).collect()
}

fn full_matrix(v: &[Q], d: usize) -> Vec<QVec> {
    (0..d).map(|i| (0..d).map(|j| v[i * d + j].clone()).collect()).collect()
}

fn solve_bijection(rays: &[QVec], facets: &[QVec], perm: &[usize], mode: Mode) -> Solve {
    let d = rays[0].len();
    let n = rays.len();
    let nmat = match mode {
        Mode::Spd => d * (d + 1) / 2,
        Mode::Weak => d * d,
    };
    let cols = nmat + n;
    let mut eqs: Vec<QVec> = Vec::with_capacity(n * d);
    for (k, ray) in rays.iter().enumerate() {
        let normal = &facets[perm[k]];
        for r in 0..d {
            let mut row = vec![Q::zero(); cols];
            for c in 0..d {
                let idx = match mode {
                    Mode::Spd => sym_index(r, c, d),
                    Mode::Weak => r * d + c,
                };
                row[idx] += &ray[c];
            }
            row[nmat + k] = -normal[r].clone();
            eqs.push(row);
        }
    }
    let basis = nullspace(&eqs, cols);
    if basis.is_empty() {
        return Solve::Infeasible;
    }
    let accept = |v: &QVec| -> bool {
        if !v[nmat..].iter().all(|m| m.is_positive()) {
            return false;
        }
        match mode {
            Mode::Spd => is_positive_definite(&sym_matrix(v, d)),
            Mode::Weak => !rational::determinant(&full_matrix(v, d)).is_zero(),
        }
    };
    let neg = |v: &QVec| -> QVec { v.iter().map(|x| -x.clone()).collect() };
    if basis.len() == 1 {
        let v = &basis[0];
        if accept(v) {
            return Solve::Found(v.clone());
        }
        let nv = neg(v);
        return if accept(&nv) { Solve::Found(nv) } else { Solve::Infeasible };
    }
    let mut candidates: Vec<QVec> = Vec::new();
    for v in &basis {
        candidates.push(v.clone());
        candidates.push(neg(v));
    }
    let sum: QVec = (0..cols).map(|i| basis.iter().fold(Q::zero(), |s, v| s + &v[i])).collect();
    candidates.push(neg(&sum));
    candidates.push(sum);
    // Coefficients with every μ ≥ 1 (and diagonal of G ≥ 1 in the SPD case).
    let k = basis.len();
    let mut rows_a: Vec<QVec> = Vec::new();
    let mut rhs: QVec = Vec::new();
    let mut bounded: Vec<usize> = (nmat..cols).collect();
    if mode == Mode::Spd {
        bounded.extend((0..d).map(|i| sym_index(i, i, d)));
    }
    let nb = bounded.len();
    for (t, &idx) in bounded.iter().enumerate() {
        let mut row = vec![Q::zero(); 2 * k + nb];
        for (j, v) in basis.iter().enumerate() {
            row[j] = v[idx].clone();
            row[k + j] = -v[idx].clone();
        }
        row[2 * k + t] = q(-1);
        rows_a.push(row);
        rhs.push(q(1));
    }
    let lp = feasible_point(&rows_a, &rhs);
    if let Some(z) = &lp {
        let c: QVec = (0..k).map(|j| &z[j] - &z[k + j]).collect();
        let point: QVec = (0..cols).map(|i| (0..k).fold(Q::zero(), |s, j| s + &c[j] * &basis[j][i])).collect();
        // Deterministic perturbations guard against a singular LP vertex.
        for (step, v) in basis.iter().enumerate() {
            let w = Q::new(1.into(), (7 * (step + 1)).into());
            candidates.push(point.iter().zip(v).map(|(a, b)| a + &w * b).collect());
        }
        candidates.push(point);
    }
    if let Some(v) = candidates.into_iter().find(|v| accept(v)) {
        return Solve::Found(v);
    }
    // No positive scales at all: the bijection is infeasible outright.
    let mu_rows: Vec<QVec> = rows_a.iter().take(n).cloned().collect();
    let mu_only: Vec<QVec> = mu_rows
        .into_iter()
        .map(|mut r| {
            r.truncate(2 * k + n);
            r
        })
        .collect();
    if feasible_point(&mu_only, &vec![q(1); n]).is_none() {
        Solve::Infeasible
    } else {
        Solve::Undecided
    }
}

fn exact_rows(m: &[QVec]) -> Vec<Vec<ExactQ>> {
    m.iter().map(|r| exact_vec(r)).collect()
}

fn transpose(m: &[QVec]) -> Vec<QVec> {
    (0..m[0].len()).map(|c| m.iter().map(|r| r[c].clone()).collect()).collect()
}
