//! Axiom checkers: self-duality, homogeneity, pure transitivity,
//! reducibility and classical effects.

mod automorphism;
mod effects;
mod homogeneity;
mod self_dual;
mod transitivity;
mod verdict;

pub use automorphism::{find_normalized_automorphism, ray_fixing_dimension, AutomorphismSearch};
pub use effects::{check_reducibility, classical_effect_test};
pub use homogeneity::{check_homogeneity, homogeneity_witness, random_interior, HomogeneityWitness};
pub use self_dual::{check_self_dual, check_self_duality, search_spd_self_duality, search_weak_self_duality, MAX_SEARCH_RAYS};
pub use transitivity::{
    check_continuous_pure_transitivity, check_pure_transitivity, continuous_pure_transitivity, face_profile,
    pure_transitivity_witness, shared_corner_pair, PROFILE_SAMPLES,
};
pub use verdict::{rows, AxiomVerdict, Status, SummandInvariant, Violation, Witness};

use crate::composite::Realization;
use crate::eja::{JordanAlgebra, SimpleFactor};
use crate::ovs::{ConeModel, Element, Functional, PolyhedralCone, System};
use nalgebra::{DMatrix, DVector};

/// A system whose cone is a Jordan-algebraic cone up to a coordinate change:
/// `x_alg = to_alg · x`.
#[derive(Debug, Clone)]
pub struct JordanView {
    pub alg: JordanAlgebra,
    pub to_alg: DMatrix<f64>,
    pub from_alg: DMatrix<f64>,
}

impl JordanView {
    pub fn of(system: &System) -> Option<Self> {
        match &system.cone {
            ConeModel::Jordan(a) => {
                let d = a.dim();
                Some(Self { alg: (**a).clone(), to_alg: DMatrix::identity(d, d), from_alg: DMatrix::identity(d, d) })
            }
            ConeModel::Composite(c) => match &c.realization {
                Realization::Orthant => {
                    let d = c.dim();
                    Some(Self {
                        alg: JordanAlgebra::classical(d).ok()?,
                        to_alg: DMatrix::identity(d, d),
                        from_alg: DMatrix::identity(d, d),
                    })
                }
                Realization::Hilbert { basis } => {
                    let n = basis[0].nrows();
                    let f = SimpleFactor::complex_herm(n).ok()?;
                    let cols: Vec<_> = basis.iter().map(|b| f.from_matrix(b)).collect();
                    let to_alg = DMatrix::from_columns(&cols);
                    let from_alg = to_alg.clone().try_inverse()?;
                    Some(Self { alg: JordanAlgebra::simple(f), to_alg, from_alg })
                }
                _ => None,
            },
            _ => None,
        }
    }

    pub fn is_identity(&self) -> bool {
        let d = self.to_alg.nrows();
        (&self.to_alg - DMatrix::<f64>::identity(d, d)).norm() == 0.0
    }

    /// Transports an algebra-coordinate map to system coordinates.
    pub fn pull_map(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        &self.from_alg * m * &self.to_alg
    }

    pub fn to_alg(&self, x: &Element) -> Element {
        Element::new(&self.to_alg * &x.coords)
    }

    pub fn from_alg(&self, x: &Element) -> Element {
        Element::new(&self.from_alg * &x.coords)
    }

    /// `max f(x)/u(x)` over the cone for an interior unit `u = tr(v ·)`:
    /// substituting `x = U_{v^{-1/2}} z` turns `u` into the trace, so the
    /// maximum is `λ_max(U_{v^{-1/2}} y)` with `f = tr(y ·)`.
    pub fn max_over_base(&self, unit: &Functional, f: &Functional) -> Option<f64> {
        let a = &self.alg;
        let g = a.gram();
        let dual = |h: &Functional| {
            let c = self.from_alg.transpose() * &h.coords;
            Element::new(DVector::from_fn(a.dim(), |i, _| c[i] / g[(i, i)]))
        };
        let (v, y) = (dual(unit), dual(f));
        let v_inv_half = a.spectral_map(&v, |l| if l > 0.0 { 1.0 / l.sqrt() } else { f64::NAN }).ok()?;
        let z = Element::new(a.quadratic_rep_matrix(&v_inv_half).ok()? * &y.coords);
        a.spectral(&z).ok().map(|s| s.max_eigenvalue()).filter(|m| m.is_finite())
    }
}

/// `max { f(x) : x in the base }`, through the Jordan view when the cone
/// has one.
pub fn max_over_base(system: &System, f: &Functional) -> Option<f64> {
    match JordanView::of(system) {
        Some(view) if !matches!(system.cone, ConeModel::Jordan(_)) => view.max_over_base(&system.unit, f),
        _ => system.max_over_base(f),
    }
}

/// Exact polyhedral description of a system's cone, when one exists.
pub fn as_polyhedral(system: &System) -> Option<PolyhedralCone> {
    match &system.cone {
        ConeModel::Polyhedral(p) => Some((**p).clone()),
        ConeModel::Composite(c) => match &c.realization {
            Realization::Generated(p) => Some(p.clone()),
            Realization::Halfspaces(normals) => {
                let dual = PolyhedralCone::new(normals.clone()).ok()?;
                PolyhedralCone::new(dual.facets().to_vec()).ok()
            }
            Realization::Orthant => PolyhedralCone::new(system.cone.exact_generators()?).ok(),
            _ => None,
        },
        ConeModel::Jordan(a) if a.is_classical() => PolyhedralCone::new(system.cone.exact_generators()?).ok(),
        _ => None,
    }
}

pub(crate) fn invariant_of(index: usize, f: &SimpleFactor) -> SummandInvariant {
    SummandInvariant { index, family: f.family, rank: f.rank, dim: f.dim }
}

pub(crate) fn same_factor(a: &SimpleFactor, b: &SimpleFactor) -> bool {
    // RealSym(1) and ComplexHerm(1) are both the ray ℝ₊.
    a == b || (a.dim == 1 && b.dim == 1)
}
