use super::{as_polyhedral, AxiomVerdict, JordanView, Violation, Witness};
use crate::error::{Error, Result};
use crate::linalg::null_space;
use crate::ovs::{Element, Functional, System};
use crate::rational::{nullspace, QVec};
use nalgebra::{DMatrix, DVector};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SAMPLE_SEED: u64 = 0xCE;

/// True iff `e` takes only the values 0 and 1 on pure states. On Jordan
/// cones this holds exactly when `e` restricted to each summand is 0 or the
/// summand unit; otherwise it is checked on sampled pure states.
pub fn classical_effect_test(system: &System, e: &Functional, tol: f64) -> Result<bool> {
    e.expect_dim(system.dim())?;
    if !(tol >= 0.0) {
        return Err(Error::NegativeTolerance(tol));
    }
    let rest = Functional::new(&system.unit.coords - &e.coords);
    for f in [e, &rest] {
        match system.cone.dual_membership(f, tol) {
            Ok(false) => return Err(Error::Precondition("effect is not in [0, u]".into())),
            Ok(true) | Err(Error::Unsupported(_)) => {}
            Err(err) => return Err(err),
        }
    }
    if let Some(view) = JordanView::of(system) {
        let a = &view.alg;
        // Trace-form representative of e in algebra coordinates.
        let ea = view.from_alg.transpose() * &e.coords;
        let g = a.gram();
        let y = Element::new(DVector::from_fn(a.dim(), |i, _| ea[i] / g[(i, i)]));
        let spec = a.spectral(&y)?;
        for k in 0..a.summands().len() {
            let vals: Vec<f64> = spec.eigenvalues.iter().zip(&spec.summand).filter(|(_, &s)| s == k).map(|(l, _)| *l).collect();
            let zero = vals.iter().all(|l| l.abs() <= tol);
            let one = vals.iter().all(|l| (l - 1.0).abs() <= tol);
            if !(zero || one) {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    for x in system.cone.extremal_samples(200, &mut rng) {
        let v = e.eval(&x) / system.unit.eval(&x);
        if v.abs() > tol && (v - 1.0).abs() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    parent[i] = r;
    r
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    parent[ra] = rb;
}

/// Connected components of the linear matroid on `n` vectors, from the
/// fundamental circuits of a greedy basis. `circuit(basis, e)` returns the
/// basis positions with nonzero coefficient in `e`, or `None` when `e` is
/// independent of the basis.
fn components(n: usize, mut circuit: impl FnMut(&[usize], usize) -> Option<Vec<usize>>) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    let mut basis: Vec<usize> = Vec::new();
    let mut rest = Vec::new();
    for e in 0..n {
        match circuit(&basis, e) {
            None => basis.push(e),
            Some(_) => rest.push(e),
        }
    }
    for e in rest {
        for pos in circuit(&basis, e).unwrap_or_default() {
            union(&mut parent, e, basis[pos]);
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort();
    out
}

fn exact_components(rays: &[QVec]) -> Vec<Vec<usize>> {
    components(rays.len(), |basis, e| {
        let d = rays[e].len();
        let k = basis.len();
        let eqs: Vec<QVec> = (0..d)
            .map(|r| basis.iter().map(|&b| rays[b][r].clone()).chain(std::iter::once(rays[e][r].clone())).collect())
            .collect();
        let ns = nullspace(&eqs, k + 1);
        let v = ns.into_iter().find(|v| !v[k].is_zero())?;
        Some((0..k).filter(|&i| !v[i].is_zero()).collect())
    })
}

fn float_components(xs: &[DVector<f64>]) -> Vec<Vec<usize>> {
    components(xs.len(), |basis, e| {
        let mut cols: Vec<DVector<f64>> = basis.iter().map(|&b| xs[b].normalize()).collect();
        cols.push(xs[e].normalize());
        let ns = null_space(&DMatrix::from_columns(&cols), 1e-9);
        if ns.ncols() == 0 {
            return None;
        }
        let v = ns.column(0);
        let k = basis.len();
        let top = v.amax();
        Some((0..k).filter(|&i| v[i].abs() > 1e-8 * top).collect())
    })
}

/// Whether the cone is a direct sum of two nonzero cones. `holds` means
/// reducible. Jordan cones read the summands off the algebra; polyhedral
/// cones use the matroid of extremal rays, whose components are exactly the
/// direct summands. Other cones use sampled extremal rays, which certify
/// irreducibility when their matroid is connected and spans.
pub fn check_reducibility(system: &System) -> Result<AxiomVerdict> {
    const AXIOM: &str = "reducibility";
    if let Some(view) = JordanView::of(system) {
        let dims: Vec<usize> = view.alg.summands().iter().map(|s| s.dim).collect();
        if dims.len() > 1 {
            return Ok(AxiomVerdict::holds(AXIOM, Witness::Note { text: format!("summand dimensions {dims:?}") }, None));
        }
        return Ok(AxiomVerdict::fails(
            AXIOM,
            Violation::Irreducible { certificate: format!("simple algebra {}", view.alg.summands()[0].family) },
            None,
        ));
    }
    if let Some(p) = as_polyhedral(system) {
        let rays: Vec<QVec> = p.extreme_ray_indices().into_iter().map(|i| p.generators()[i].clone()).collect();
        let comps = exact_components(&rays);
        if comps.len() > 1 {
            let sizes: Vec<usize> = comps.iter().map(Vec::len).collect();
            return Ok(AxiomVerdict::holds(AXIOM, Witness::Note { text: format!("ray matroid components of sizes {sizes:?}") }, None));
        }
        return Ok(AxiomVerdict::fails(
            AXIOM,
            Violation::Irreducible { certificate: format!("matroid of {} extremal rays is connected", rays.len()) },
            None,
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let xs: Vec<DVector<f64>> = system.cone.extremal_samples(3 * system.dim(), &mut rng).into_iter().map(|x| x.coords).collect();
    let spans = crate::linalg::numerical_rank(&DMatrix::from_columns(&xs), 1e-9) == system.dim();
    let comps = float_components(&xs);
    if spans && comps.len() == 1 {
        return Ok(AxiomVerdict::fails(
            AXIOM,
            Violation::Irreducible { certificate: format!("matroid of {} sampled extremal rays is connected and spans", xs.len()) },
            None,
        ));
    }
    Ok(AxiomVerdict::inconclusive(AXIOM, None, format!("{} sampled components; sampling cannot certify a decomposition", comps.len())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn orthant_splits_into_singletons() {
        let rays: Vec<QVec> = (0..3).map(|k| (0..3).map(|i| q(i64::from(i == k))).collect()).collect();
        assert_eq!(exact_components(&rays).len(), 3);
    }

    #[test]
    fn square_is_connected() {
        let rays: Vec<QVec> = [[1, 1, 1], [1, -1, 1], [-1, -1, 1], [-1, 1, 1]]
            .iter()
            .map(|r| r.iter().map(|&v| q(v)).collect())
            .collect();
        assert_eq!(exact_components(&rays).len(), 1);
    }

    #[test]
    fn square_plus_ray_has_two_components() {
        let rays: Vec<QVec> = [[1, 1, 1, 0], [1, -1, 1, 0], [-1, -1, 1, 0], [-1, 1, 1, 0], [0, 0, 0, 1]]
            .iter()
            .map(|r| r.iter().map(|&v| q(v)).collect())
            .collect();
        let c = exact_components(&rays);
        assert_eq!(c, vec![vec![0, 1, 2, 3], vec![4]]);
    }
}
