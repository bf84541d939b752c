//! Ordered vector spaces: elements, cones, systems and positive maps.

mod cone;
mod element;
mod face;
mod order_iso;
mod polyhedral;
pub mod shared_corner;
mod system;

pub use cone::{to_f64_matrix, ConeModel};
pub use element::{Element, Functional};
pub use face::{default_probes, face_dimension, is_extremal_ray, is_extremal_ray_generic, BISECTION_DEPTH};
pub use order_iso::{
    is_order_isomorphism, is_order_isomorphism_between, validate_measurement, IsoViolation, OrderIsoVerdict,
};
pub use polyhedral::PolyhedralCone;
pub use system::{PositiveMap, System};

/// Default tolerance for spectral memberships.
pub const TOL: f64 = 1e-9;
/// Default tolerance for iterated witnesses.
pub const WITNESS_TOL: f64 = 1e-7;
