use super::{shared_corner, ConeModel, Element, Functional, PolyhedralCone};
use crate::eja::JordanAlgebra;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// A cone with a distinguished interior unit functional. Normalized states
/// are cone members with `unit(x) = 1`; effects are the interval `[0, unit]`.
#[derive(Debug, Clone)]
pub struct System {
    pub cone: ConeModel,
    pub unit: Functional,
    pub label: String,
}

impl System {
    /// Checks that the unit is strictly positive on the cone's extremal
    /// samples (so the base is bounded) and lies in the dual cone.
    pub fn new(cone: ConeModel, unit: Functional, label: impl Into<String>) -> Result<Self> {
        unit.expect_dim(cone.dim())?;
        let mut rng = ChaCha8Rng::seed_from_u64(0x0417);
        for x in cone.extremal_samples(32, &mut rng) {
            let v = unit.eval(&x);
            if !(v > 1e-12 * x.norm()) {
                return Err(Error::Precondition(format!(
                    "unit is not strictly positive on extremal element {:?}",
                    x.to_vec()
                )));
            }
        }
        Ok(Self { cone, unit, label: label.into() })
    }

    pub fn jordan(alg: JordanAlgebra, label: impl Into<String>) -> Self {
        let unit = Functional::new(alg.trace_functional());
        Self { cone: ConeModel::jordan(alg), unit, label: label.into() }
    }

    pub fn polyhedral(cone: PolyhedralCone, unit: Functional, label: impl Into<String>) -> Result<Self> {
        Self::new(ConeModel::polyhedral(cone), unit, label)
    }

    pub fn shared_corner() -> Self {
        Self {
            cone: ConeModel::SharedCorner,
            unit: Functional::new(shared_corner::unit()),
            label: "shared-corner".into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn algebra(&self) -> Option<&JordanAlgebra> {
        self.cone.algebra()
    }

    /// Rescale a nonzero cone member into the base.
    pub fn normalize(&self, x: &Element) -> Result<Element> {
        let v = self.unit.eval(x);
        if !(v > 0.0) {
            return Err(Error::Precondition("element has nonpositive unit value".into()));
        }
        Ok(x.scale(1.0 / v))
    }

    /// Smallest normalized spectral value, used as an interiority margin.
    pub fn interior_margin(&self, x: &Element) -> Option<f64> {
        let u = self.unit.eval(x);
        self.cone.spectral_margin(x).map(|m| m / u.abs().max(1e-300))
    }

    /// `max { f(x) : x in the base }`, for dual-cone members `f`.
    pub fn max_over_base(&self, f: &Functional) -> Option<f64> {
        match &self.cone {
            ConeModel::Jordan(a) => {
                // f(x) = tr(y*x) with y = G⁻¹f, maximal on the base at λ_max(y).
                let g = a.gram();
                let y = Element::new(DVector::from_fn(a.dim(), |i, _| f.coords[i] / g[(i, i)]));
                a.spectral(&y).ok().map(|s| s.max_eigenvalue())
            }
            ConeModel::SharedCorner => Some(shared_corner::max_over_base(f.coords.as_slice())),
            _ => self.cone.exact_generators().map(|gens| {
                gens.iter()
                    .map(|g| {
                        let x = Element::from_slice(&crate::rational::vec_to_f64(g));
                        f.eval(&x) / self.unit.eval(&x)
                    })
                    .fold(f64::NEG_INFINITY, f64::max)
            }),
        }
    }
}

/// A dense linear map between systems, carrier of order-isomorphism witnesses.
#[derive(Debug, Clone)]
pub struct PositiveMap {
    pub matrix: DMatrix<f64>,
    pub source: Arc<System>,
    pub target: Arc<System>,
    pub normalized: bool,
}

impl PositiveMap {
    /// Builds the map and sets `normalized` when `Mᵀ u_W = u_V` to 1e-9.
    pub fn new(matrix: DMatrix<f64>, source: Arc<System>, target: Arc<System>) -> Result<Self> {
        if matrix.ncols() != source.dim() {
            return Err(Error::DimensionMismatch { expected: source.dim(), got: matrix.ncols() });
        }
        if matrix.nrows() != target.dim() {
            return Err(Error::DimensionMismatch { expected: target.dim(), got: matrix.nrows() });
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut map = Self { matrix, source, target, normalized: false };
        map.normalized = map.normalization_residual() < 1e-9 * (1.0 + map.source.unit.norm());
        Ok(map)
    }

    pub fn endo(matrix: DMatrix<f64>, system: Arc<System>) -> Result<Self> {
        Self::new(matrix, system.clone(), system)
    }

    pub fn apply(&self, x: &Element) -> Element {
        Element::new(&self.matrix * &x.coords)
    }

    /// Dual map on functionals.
    pub fn apply_dual(&self, f: &Functional) -> Functional {
        Functional::new(self.matrix.transpose() * &f.coords)
    }

    /// `‖f*(u_W) − u_V‖`.
    pub fn normalization_residual(&self) -> f64 {
        (self.apply_dual(&self.target.unit).coords - &self.source.unit.coords).norm()
    }

    pub fn compose(&self, first: &PositiveMap) -> Result<PositiveMap> {
        PositiveMap::new(&self.matrix * &first.matrix, first.source.clone(), self.target.clone())
    }
}
