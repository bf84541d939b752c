use super::{shared_corner, Element, Functional, PolyhedralCone};
use crate::composite::{CompositeCone, Realization};
use crate::eja::{JordanAlgebra, SimpleFactor};
use crate::error::{Error, Result};
use crate::linalg::{min_eigenvalue, CMat, C64};
use crate::rational::{self, q, QVec};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use std::sync::Arc;

/// A closed pointed cone with a membership oracle.
#[derive(Debug, Clone)]
pub enum ConeModel {
    Polyhedral(Arc<PolyhedralCone>),
    Jordan(Arc<JordanAlgebra>),
    SharedCorner,
    Composite(Arc<CompositeCone>),
}

impl ConeModel {
    pub fn polyhedral(cone: PolyhedralCone) -> Self {
        ConeModel::Polyhedral(Arc::new(cone))
    }

    pub fn jordan(alg: JordanAlgebra) -> Self {
        ConeModel::Jordan(Arc::new(alg))
    }

    pub fn dim(&self) -> usize {
        match self {
            ConeModel::Polyhedral(p) => p.dim(),
            ConeModel::Jordan(a) => a.dim(),
            ConeModel::SharedCorner => shared_corner::DIM,
            ConeModel::Composite(c) => c.dim(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ConeModel::Polyhedral(_) => "polyhedral",
            ConeModel::Jordan(_) => "eja",
            ConeModel::SharedCorner => "shared-corner",
            ConeModel::Composite(_) => "composite",
        }
    }

    pub fn algebra(&self) -> Option<&JordanAlgebra> {
        match self {
            ConeModel::Jordan(a) => Some(a),
            _ => None,
        }
    }

    pub fn simple_factor(&self) -> Option<&SimpleFactor> {
        self.algebra().filter(|a| a.is_simple()).map(|a| &a.summands()[0])
    }

    pub fn is_classical(&self) -> bool {
        self.algebra().is_some_and(|a| a.is_classical())
    }

    /// Exact extremal generators, when the cone is polyhedral.
    pub fn exact_generators(&self) -> Option<Vec<QVec>> {
        match self {
            ConeModel::Polyhedral(p) => Some(p.generators().to_vec()),
            ConeModel::Jordan(a) if a.is_classical() => Some(standard_basis(a.dim())),
            ConeModel::Composite(c) => match &c.realization {
                Realization::Generated(p) => Some(p.generators().to_vec()),
                Realization::Orthant => Some(standard_basis(c.dim())),
                _ => None,
            },
            _ => None,
        }
    }

    /// Exact facet normals, when the cone is polyhedral.
    pub fn exact_facets(&self) -> Option<Vec<QVec>> {
        match self {
            ConeModel::Polyhedral(p) => Some(p.facets().to_vec()),
            ConeModel::Jordan(a) if a.is_classical() => Some(standard_basis(a.dim())),
            ConeModel::Composite(c) => match &c.realization {
                Realization::Generated(p) => Some(p.facets().to_vec()),
                Realization::Halfspaces(h) => Some(h.clone()),
                Realization::Orthant => Some(standard_basis(c.dim())),
                _ => None,
            },
            _ => None,
        }
    }

    fn check_input(&self, x: &DVector<f64>, tol: f64) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        if !(tol >= 0.0) {
            return Err(Error::NegativeTolerance(tol));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(())
    }

    /// `x ≥ 0` within `tol`: exact LP feasibility with coefficients
    /// `≥ −tol` for polyhedral cones, smallest spectral value `≥ −tol`
    /// for spectral cones.
    pub fn membership(&self, x: &Element, tol: f64) -> Result<bool> {
        self.check_input(&x.coords, tol)?;
        match self {
            ConeModel::Polyhedral(p) => {
                let xq = rational::vec_from_f64(x.coords.as_slice()).ok_or(Error::NonFinite)?;
                Ok(p.contains(&xq, &rational::from_f64(tol).ok_or(Error::NonFinite)?))
            }
            ConeModel::Jordan(a) => Ok(a.min_eigenvalue(x)? >= -tol),
            ConeModel::SharedCorner => Ok(shared_corner::margin(x.coords.as_slice()) >= -tol),
            ConeModel::Composite(c) => c.membership(x.coords.as_slice(), tol),
        }
    }

    /// Smallest spectral value of a spectral cone (`None` for polyhedral ones).
    pub fn spectral_margin(&self, x: &Element) -> Option<f64> {
        match self {
            ConeModel::Jordan(a) => a.min_eigenvalue(x).ok(),
            ConeModel::SharedCorner => Some(shared_corner::margin(x.coords.as_slice())),
            ConeModel::Composite(c) => match &c.realization {
                Realization::Hilbert { .. } => {
                    c.hilbert_matrix(x.coords.as_slice()).map(|m| min_eigenvalue(&m))
                }
                Realization::Orthant => Some(x.coords.iter().copied().fold(f64::INFINITY, f64::min)),
                _ => None,
            },
            ConeModel::Polyhedral(_) => None,
        }
    }

    /// `f ≥ 0` on the cone, within `tol`.
    pub fn dual_membership(&self, f: &Functional, tol: f64) -> Result<bool> {
        self.check_input(&f.coords, tol)?;
        match self {
            ConeModel::Polyhedral(p) => {
                let fq = rational::vec_from_f64(f.coords.as_slice()).ok_or(Error::NonFinite)?;
                Ok(p.dual_contains(&fq, &rational::from_f64(tol).ok_or(Error::NonFinite)?))
            }
            ConeModel::Jordan(a) => {
                // Trace-form identification of V* with V.
                let g = a.gram();
                let y = Element::new(DVector::from_fn(a.dim(), |i, _| f.coords[i] / g[(i, i)]));
                Ok(a.min_eigenvalue(&y)? >= -tol)
            }
            ConeModel::SharedCorner => Ok(shared_corner::dual_margin(f.coords.as_slice()) >= -tol),
            ConeModel::Composite(c) => c.dual_membership(f.coords.as_slice(), tol),
        }
    }

    /// Self-adjoint matrices, linear in `x`, whose joint positive
    /// semidefiniteness is membership. `None` for polyhedral cones.
    pub fn lift(&self, x: &[f64]) -> Option<Vec<CMat>> {
        match self {
            ConeModel::Jordan(a) => Some(
                a.summands()
                    .iter()
                    .enumerate()
                    .map(|(k, s)| s.lift(&x[a.offset(k)..a.offset(k) + s.dim]))
                    .collect(),
            ),
            ConeModel::SharedCorner => Some(shared_corner::lift(x)),
            ConeModel::Composite(c) => match &c.realization {
                Realization::Hilbert { .. } => c.hilbert_matrix(x).map(|m| vec![m]),
                Realization::Orthant => {
                    Some(x.iter().map(|&v| CMat::from_element(1, 1, C64::new(v, 0.0))).collect())
                }
                _ => None,
            },
            ConeModel::Polyhedral(_) => None,
        }
    }

    /// Extremal elements used as positivity probes: all generators of a
    /// polyhedral cone, otherwise frames plus `count` random pure states.
    pub fn extremal_samples<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<Element> {
        if let Some(gens) = self.exact_generators() {
            return gens.iter().map(|g| Element::from_slice(&rational::vec_to_f64(g))).collect();
        }
        match self {
            ConeModel::Jordan(a) => {
                let mut out = Vec::new();
                for (k, s) in a.summands().iter().enumerate() {
                    let single = JordanAlgebra::simple(s.clone());
                    if let Ok(frame) = single.canonical_frame() {
                        out.extend(frame.states.iter().map(|w| a.embed(k, &w.coords)));
                    }
                }
                out.extend((0..count).map(|_| a.random_pure(rng)));
                out
            }
            ConeModel::SharedCorner => {
                let mut out = vec![
                    Element::basis(5, 1),
                    Element::basis(5, 2),
                    Element::basis(5, 0),
                ];
                out.extend((0..count).map(|_| Element::new(shared_corner::random_pure(rng))));
                out
            }
            ConeModel::Composite(c) => crate::composite::composite_extremal_samples(c, count, rng),
            ConeModel::Polyhedral(_) => unreachable!("handled by exact generators"),
        }
    }
}

fn standard_basis(n: usize) -> Vec<QVec> {
    (0..n).map(|k| (0..n).map(|i| q(i64::from(i == k))).collect()).collect()
}

/// Dense matrix helper for exact inputs.
pub fn to_f64_matrix(rows: &[QVec]) -> DMatrix<f64> {
    let r = rows.len();
    let c = rows.first().map_or(0, |x| x.len());
    DMatrix::from_fn(r, c, |i, j| rational::to_f64(&rows[i][j]))
}
