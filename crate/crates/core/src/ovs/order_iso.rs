use super::{ConeModel, Element, PositiveMap, System};
use crate::error::{Error, Result};
use crate::linalg::singular_extremes;
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

const SAMPLE_SEED: u64 = 0x0150;
const SAMPLES: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum IsoViolation {
    Singular { kernel: Vec<f64> },
    ForwardNotPositive { element: Vec<f64>, image: Vec<f64> },
    InverseNotPositive { element: Vec<f64>, image: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum OrderIsoVerdict {
    /// `condition` is the 2-norm condition number; `checked` counts the
    /// extremal elements tested in each direction.
    Yes { condition: f64, checked: usize, margin: f64 },
    No { violation: IsoViolation, condition: f64 },
}

impl OrderIsoVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, OrderIsoVerdict::Yes { .. })
    }
}

/// Checks that `map` is invertible, sends source extremals into the target
/// cone, and that its inverse sends target extremals into the source cone.
pub fn is_order_isomorphism(map: &PositiveMap, tol: f64) -> Result<OrderIsoVerdict> {
    check_square(&map.matrix, &map.source, &map.target)?;
    is_order_isomorphism_between(&map.matrix, &map.source.cone, &map.target.cone, tol)
}

/// Same check for a bare matrix between two cones.
pub fn is_order_isomorphism_between(
    m: &DMatrix<f64>,
    source: &ConeModel,
    target: &ConeModel,
    tol: f64,
) -> Result<OrderIsoVerdict> {
    if !(tol >= 0.0) {
        return Err(Error::NegativeTolerance(tol));
    }
    if m.nrows() != m.ncols() || source.dim() != target.dim() || m.ncols() != source.dim() {
        return Err(Error::Precondition("order isomorphism needs a square map between equal dimensions".into()));
    }
    let (smin, smax, kernel) = singular_extremes(m);
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if smin <= 1e-12 * smax.max(1e-300) {
        return Ok(OrderIsoVerdict::No {
            violation: IsoViolation::Singular { kernel: kernel.iter().copied().collect() },
            condition,
        });
    }
    let inv = m.clone().try_inverse().ok_or_else(|| Error::Precondition("inversion failed".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let forward = source.extremal_samples(SAMPLES, &mut rng);
    let backward = target.extremal_samples(SAMPLES, &mut rng);
    let mut margin = f64::INFINITY;
    for x in &forward {
        let y = Element::new(m * &x.coords);
        if !positive(target, &y, tol, &mut margin)? {
            return Ok(OrderIsoVerdict::No {
                violation: IsoViolation::ForwardNotPositive { element: x.to_vec(), image: y.to_vec() },
                condition,
            });
        }
    }
    for x in &backward {
        let y = Element::new(&inv * &x.coords);
        if !positive(source, &y, tol, &mut margin)? {
            return Ok(OrderIsoVerdict::No {
                violation: IsoViolation::InverseNotPositive { element: x.to_vec(), image: y.to_vec() },
                condition,
            });
        }
    }
    Ok(OrderIsoVerdict::Yes { condition, checked: forward.len().min(backward.len()), margin })
}

fn positive(cone: &ConeModel, y: &Element, tol: f64, margin: &mut f64) -> Result<bool> {
    let scale = y.norm().max(1.0);
    if let Some(m) = cone.spectral_margin(y) {
        *margin = margin.min(m / scale);
    }
    cone.membership(y, tol * scale)
}

fn check_square(m: &DMatrix<f64>, s: &System, t: &System) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::Precondition("matrix is not square".into()));
    }
    if s.dim() != t.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), got: t.dim() });
    }
    Ok(())
}

/// Effects in `[0, u]` summing to `u`.
pub fn validate_measurement(system: &System, effects: &[super::Functional], tol: f64) -> Result<bool> {
    if effects.is_empty() {
        return Err(Error::Precondition("empty measurement".into()));
    }
    if !(tol >= 0.0) {
        return Err(Error::NegativeTolerance(tol));
    }
    let dim = system.dim();
    let mut total = DVector::zeros(dim);
    for e in effects {
        e.expect_dim(dim)?;
        total += &e.coords;
    }
    let unit = &system.unit.coords;
    if (&total - unit).norm() > tol * (1.0 + unit.norm()) {
        return Ok(false);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let samples = system.cone.extremal_samples(SAMPLES, &mut rng);
    for e in effects {
        let rest = super::Functional::new(unit - &e.coords);
        for f in [e, &rest] {
            match system.cone.dual_membership(f, tol) {
                Ok(false) => return Ok(false),
                Ok(true) => {}
                Err(Error::Unsupported(_)) => {}
                Err(err) => return Err(err),
            }
        }
        for x in &samples {
            let v = e.eval(x) / system.unit.eval(x);
            if v < -tol || v > 1.0 + tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
