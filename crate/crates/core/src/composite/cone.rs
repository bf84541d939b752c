use crate::eja::Family;
use crate::error::{Error, Result};
use crate::linalg::{kron, min_eigenvalue, CMat, C64};
use crate::ovs::{ConeModel, PolyhedralCone};
use crate::rational::{self, dot, Q, QVec};
use nalgebra::DVector;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CompositeModel {
    MinTensor,
    MaxTensor,
    /// Both factors complex Hermitian: the positive cone of the tensor
    /// product Hilbert space.
    Hilbert,
    /// Both factors classical simplices.
    Classical,
}

impl std::fmt::Display for CompositeModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CompositeModel::MinTensor => "min-tensor",
            CompositeModel::MaxTensor => "max-tensor",
            CompositeModel::Hilbert => "hilbert",
            CompositeModel::Classical => "classical",
        })
    }
}

/// How membership in the composite cone is decided.
#[derive(Debug, Clone)]
pub enum Realization {
    /// Pairwise products of exact factor generators.
    Generated(PolyhedralCone),
    /// Products of exact factor facet normals, `{w : (f⊗g)·w ≥ 0}`.
    Halfspaces(Vec<QVec>),
    /// `Σ w_ij Bᵢ⊗Bⱼ ⪰ 0` over the factors' trace-orthonormal bases.
    Hilbert { basis: Vec<CMat> },
    Orthant,
    /// Max tensor of non-polyhedral factors; only the sampling certificate applies.
    SampledMax,
}

/// Cone of a bipartite system in product coordinates `(i, j) ↦ i·dim_B + j`.
#[derive(Debug, Clone)]
pub struct CompositeCone {
    pub model: CompositeModel,
    pub a: ConeModel,
    pub b: ConeModel,
    pub realization: Realization,
}

impl CompositeCone {
    pub fn new(model: CompositeModel, a: ConeModel, b: ConeModel) -> Result<Self> {
        let realization = match model {
            CompositeModel::Classical => {
                if !(a.is_classical() && b.is_classical()) {
                    return Err(Error::Precondition("classical composite needs simplex factors".into()));
                }
                Realization::Orthant
            }
            CompositeModel::Hilbert => {
                let (Some(fa), Some(fb)) = (a.simple_factor(), b.simple_factor()) else {
                    return Err(Error::Precondition("hilbert composite needs simple factors".into()));
                };
                if fa.family != Family::ComplexHerm || fb.family != Family::ComplexHerm {
                    return Err(Error::Precondition("hilbert composite needs complex Hermitian factors".into()));
                }
                let ba: Vec<CMat> = (0..fa.dim).map(|k| fa.to_matrix(unit_vec(fa.dim, k).as_slice())).collect();
                let bb: Vec<CMat> = (0..fb.dim).map(|k| fb.to_matrix(unit_vec(fb.dim, k).as_slice())).collect();
                let basis = ba.iter().flat_map(|x| bb.iter().map(move |y| kron(x, y))).collect();
                Realization::Hilbert { basis }
            }
            CompositeModel::MinTensor => {
                let (Some(ga), Some(gb)) = (a.exact_generators(), b.exact_generators()) else {
                    return Err(Error::Unsupported(
                        "min-tensor membership needs polyhedral factors".into(),
                    ));
                };
                let gens = ga.iter().flat_map(|x| gb.iter().map(move |y| tensor_q(x, y))).collect();
                Realization::Generated(PolyhedralCone::new(gens)?)
            }
            CompositeModel::MaxTensor => match (a.exact_facets(), b.exact_facets()) {
                (Some(fa), Some(fb)) => {
                    Realization::Halfspaces(fa.iter().flat_map(|x| fb.iter().map(move |y| tensor_q(x, y))).collect())
                }
                _ => Realization::SampledMax,
            },
        };
        Ok(Self { model, a, b, realization })
    }

    pub fn dim(&self) -> usize {
        self.a.dim() * self.b.dim()
    }

    pub fn hilbert_matrix(&self, x: &[f64]) -> Option<CMat> {
        let Realization::Hilbert { basis } = &self.realization else {
            return None;
        };
        let n = basis[0].nrows();
        let mut m = CMat::zeros(n, n);
        for (b, &c) in basis.iter().zip(x) {
            m += b * C64::new(c, 0.0);
        }
        Some(m)
    }

    /// Coordinates of a Hermitian matrix on the product basis.
    pub fn hilbert_coords(&self, m: &CMat) -> Option<DVector<f64>> {
        let Realization::Hilbert { basis } = &self.realization else {
            return None;
        };
        Some(DVector::from_iterator(
            basis.len(),
            basis.iter().map(|b| (b.adjoint() * m).trace().re),
        ))
    }

    pub fn membership(&self, x: &[f64], tol: f64) -> Result<bool> {
        match &self.realization {
            Realization::Generated(p) => {
                let xq = rational::vec_from_f64(x).ok_or(Error::NonFinite)?;
                Ok(p.contains(&xq, &rational::from_f64(tol).ok_or(Error::NonFinite)?))
            }
            Realization::Halfspaces(normals) => {
                let xq = rational::vec_from_f64(x).ok_or(Error::NonFinite)?;
                let slack = rational::from_f64(tol).ok_or(Error::NonFinite)?;
                Ok(normals.iter().all(|n| dot(n, &xq) >= -slack.clone()))
            }
            Realization::Hilbert { .. } => Ok(min_eigenvalue(&self.hilbert_matrix(x).unwrap()) >= -tol),
            Realization::Orthant => Ok(x.iter().all(|&v| v >= -tol)),
            Realization::SampledMax => Err(Error::Unsupported(
                "max-tensor membership of non-polyhedral factors is only available through the \
                 sampling certificate (composite::max_tensor_membership)"
                    .into(),
            )),
        }
    }

    pub fn dual_membership(&self, f: &[f64], tol: f64) -> Result<bool> {
        match &self.realization {
            Realization::Generated(p) => {
                let fq = rational::vec_from_f64(f).ok_or(Error::NonFinite)?;
                Ok(p.dual_contains(&fq, &rational::from_f64(tol).ok_or(Error::NonFinite)?))
            }
            Realization::Halfspaces(normals) => {
                let dual = PolyhedralCone::new(normals.clone())?;
                let fq = rational::vec_from_f64(f).ok_or(Error::NonFinite)?;
                Ok(dual.contains(&fq, &rational::from_f64(tol).ok_or(Error::NonFinite)?))
            }
            // Product bases are trace-orthonormal and the cone is self-dual.
            Realization::Hilbert { .. } | Realization::Orthant => self.membership(f, tol),
            Realization::SampledMax => Err(Error::Unsupported("dual of a sampled max tensor".into())),
        }
    }
}

pub fn tensor(x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
    DVector::from_iterator(x.len() * y.len(), x.iter().flat_map(|a| y.iter().map(move |b| a * b)))
}

pub fn tensor_q(x: &[Q], y: &[Q]) -> QVec {
    x.iter().flat_map(|a| y.iter().map(move |b| a * b)).collect()
}

fn unit_vec(n: usize, k: usize) -> DVector<f64> {
    let mut e = DVector::zeros(n);
    e[k] = 1.0;
    e
}
