//! Faces and extremal rays.

use super::{ConeModel, Element};
use crate::composite::Realization;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, null_space, numerical_rank, CMat, C64};
use crate::rational::{self, Q};
use nalgebra::{DMatrix, DVector};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub const BISECTION_DEPTH: usize = 60;
const PROBE_SEED: u64 = 0xFACE;

/// Default probe count: the ambient basis plus four random directions per dimension.
pub fn default_probes(dim: usize) -> usize {
    5 * dim
}

/// Dimension of the span of the smallest face containing `x`.
///
/// The first `dim` probes are the ambient basis, the rest are seeded random
/// directions. Each probe is tested by bisection for `x ± εd` in the cone.
/// For spectral cones the probes are first projected onto the subspace
/// `{d : L(d) = P L(d) P}` (`P` the range projector of the lift `L(x)`),
/// which is the face span; bisection then certifies each direction.
/// Polyhedral cones use exact arithmetic.
pub fn face_dimension(cone: &ConeModel, x: &Element, probes: usize, tol: f64) -> Result<usize> {
    let dim = cone.dim();
    x.expect_dim(dim)?;
    if !(tol > 0.0) {
        return Err(Error::NegativeTolerance(tol));
    }
    if probes < dim {
        return Err(Error::Precondition(format!(
            "{probes} probes cannot span a {dim}-dimensional space"
        )));
    }
    if !cone.membership(x, tol)? {
        return Err(Error::Precondition("point is not in the cone".into()));
    }
    if x.norm() < tol {
        return Ok(0);
    }
    if let Some(d) = exact_face_dimension(cone, x, tol)? {
        return Ok(d);
    }
    let subspace = lift_face_span(cone, x, tol);
    Ok(certify(cone, x, probes, tol, subspace.as_ref()))
}

/// `face_dimension(x) == 1`. Spectral cones of Jordan algebras take the
/// fast path: exactly one eigenvalue above threshold.
pub fn is_extremal_ray(cone: &ConeModel, x: &Element, tol: f64) -> Result<bool> {
    x.expect_dim(cone.dim())?;
    if x.norm() < tol {
        return Err(Error::Precondition("the zero element spans no ray".into()));
    }
    if let ConeModel::Jordan(a) = cone {
        if !cone.membership(x, tol)? {
            return Err(Error::Precondition("point is not in the cone".into()));
        }
        let spec = a.spectral(x)?;
        let thr = rank_threshold(tol) * spec.max_eigenvalue().abs().max(1e-300);
        return Ok(spec.eigenvalues.iter().filter(|&&l| l > thr).count() == 1);
    }
    if let ConeModel::Composite(c) = cone {
        if let Some(m) = c.hilbert_matrix(x.coords.as_slice()) {
            if !cone.membership(x, tol)? {
                return Err(Error::Precondition("point is not in the cone".into()));
            }
            let vals = hermitian_eigen(&m).0;
            let thr = rank_threshold(tol) * vals[0].abs().max(1e-300);
            return Ok(vals.iter().filter(|&&l| l > thr).count() == 1);
        }
    }
    Ok(face_dimension(cone, x, default_probes(cone.dim()), tol)? == 1)
}

/// Generic route regardless of cone kind (used to cross-check fast paths).
pub fn is_extremal_ray_generic(cone: &ConeModel, x: &Element, tol: f64) -> Result<bool> {
    if x.norm() < tol {
        return Err(Error::Precondition("the zero element spans no ray".into()));
    }
    Ok(face_dimension(cone, x, default_probes(cone.dim()), tol)? == 1)
}

fn rank_threshold(tol: f64) -> f64 {
    tol.sqrt()
}

fn exact_face_dimension(cone: &ConeModel, x: &Element, tol: f64) -> Result<Option<usize>> {
    let xq = || rational::vec_from_f64(x.coords.as_slice()).ok_or(Error::NonFinite);
    match cone {
        ConeModel::Polyhedral(p) => Ok(Some(p.face_dimension_exact(&snap_to_cone(p, &xq()?, tol))?)),
        ConeModel::Composite(c) => match &c.realization {
            Realization::Generated(p) => Ok(Some(p.face_dimension_exact(&snap_to_cone(p, &xq()?, tol))?)),
            Realization::Halfspaces(normals) => {
                // Face span = orthogonal complement of the active normals.
                let scale = x.norm();
                let active: Vec<_> = normals
                    .iter()
                    .filter(|n| {
                        let v: f64 = n.iter().zip(x.coords.iter()).map(|(a, b)| rational::to_f64(a) * b).sum();
                        v.abs() <= tol * scale
                    })
                    .cloned()
                    .collect();
                Ok(Some(cone.dim() - rational::rank(&active)))
            }
            Realization::Orthant => Ok(Some(count_positive(x, tol))),
            _ => Ok(None),
        },
        ConeModel::Jordan(a) if a.is_classical() => Ok(Some(count_positive(x, tol))),
        _ => Ok(None),
    }
}

fn count_positive(x: &Element, tol: f64) -> usize {
    let scale = x.norm();
    x.coords.iter().filter(|&&v| v > tol * scale).count()
}

/// Exact LP face computations need an exact member; points within `tol`
/// of the cone are replaced by their generator combination with negative
/// coefficients clipped to zero.
fn snap_to_cone(p: &crate::ovs::PolyhedralCone, x: &[Q], tol: f64) -> Vec<Q> {
    if p.contains(x, &Q::zero()) {
        return x.to_vec();
    }
    let slack = rational::from_f64(tol).unwrap_or_else(Q::zero);
    match p.coefficients(x, &slack) {
        Some(lam) => {
            let mut out = vec![Q::zero(); p.dim()];
            for (l, g) in lam.iter().zip(p.generators()) {
                if l > &Q::zero() {
                    for (o, gi) in out.iter_mut().zip(g) {
                        *o += l * gi;
                    }
                }
            }
            out
        }
        None => x.to_vec(),
    }
}

/// Orthonormal basis of `{d : L(d) = P L(d) P}` for cones with a PSD lift.
fn lift_face_span(cone: &ConeModel, x: &Element, tol: f64) -> Option<DMatrix<f64>> {
    let blocks = cone.lift(x.coords.as_slice())?;
    let dim = cone.dim();
    let scale = blocks
        .iter()
        .map(|b| hermitian_eigen(b).0.first().copied().unwrap_or(0.0).abs())
        .fold(0.0, f64::max)
        .max(1e-300);
    let thr = rank_threshold(tol) * scale;
    // Complement projectors I − P per block.
    let complements: Vec<CMat> = blocks
        .iter()
        .map(|b| {
            let (vals, vecs) = hermitian_eigen(b);
            let n = b.nrows();
            let mut q = CMat::identity(n, n);
            for (i, &l) in vals.iter().enumerate() {
                if l > thr {
                    let v = vecs.column(i);
                    q -= &v * v.adjoint();
                }
            }
            q
        })
        .collect();
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(dim);
    for k in 0..dim {
        let e = DVector::from_fn(dim, |i, _| f64::from(i == k));
        let lifted = cone.lift(e.as_slice())?;
        let mut col = Vec::new();
        for (q, l) in complements.iter().zip(&lifted) {
            let m: CMat = q * l;
            col.extend(m.iter().flat_map(|z: &C64| [z.re, z.im]));
        }
        columns.push(col);
    }
    let nrows = columns[0].len();
    let m = DMatrix::from_fn(nrows, dim, |r, c| columns[c][r]);
    // Complements of full-rank blocks are rounding noise; a relative
    // threshold would read structure into it.
    if m.amax() < 1e-10 {
        return Some(DMatrix::identity(dim, dim));
    }
    Some(null_space(&m, 1e-10))
}

fn certify(cone: &ConeModel, x: &Element, probes: usize, tol: f64, subspace: Option<&DMatrix<f64>>) -> usize {
    let dim = cone.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    let xn = x.norm();
    let floor = rank_threshold(tol) * xn * 1e-3;
    let mut feasible: Vec<DVector<f64>> = Vec::new();
    for p in 0..probes {
        let raw = if p < dim {
            DVector::from_fn(dim, |i, _| f64::from(i == p))
        } else {
            DVector::from_fn(dim, |_, _| StandardNormal.sample(&mut rng))
        };
        let d = match subspace {
            Some(q) => q * (q.transpose() * raw),
            None => raw,
        };
        let dn = d.norm();
        if dn < 1e-12 {
            continue;
        }
        let d = d / dn;
        let mut eps = xn;
        for _ in 0..BISECTION_DEPTH {
            if eps < floor {
                break;
            }
            let plus = Element::new(&x.coords + &d * eps);
            let minus = Element::new(&x.coords - &d * eps);
            let ok = cone.membership(&plus, tol * xn).unwrap_or(false)
                && cone.membership(&minus, tol * xn).unwrap_or(false);
            if ok {
                feasible.push(d.clone());
                break;
            }
            eps /= 2.0;
        }
    }
    if feasible.is_empty() {
        return 0;
    }
    numerical_rank(&DMatrix::from_columns(&feasible), 1e-8)
}
