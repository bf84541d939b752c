#![allow(dead_code)]

use conelab_core::eja::{JordanAlgebra, SimpleFactor};
use conelab_core::linalg::{CMat, C64};
use conelab_core::ovs::{Element, Functional, PolyhedralCone, System};
use std::sync::Arc;

pub fn qubit_factor() -> SimpleFactor {
    SimpleFactor::complex_herm(2).unwrap()
}

pub fn qubit() -> Arc<System> {
    Arc::new(System::jordan(JordanAlgebra::simple(qubit_factor()), "qubit"))
}

pub fn jordan(summands: Vec<SimpleFactor>, label: &str) -> Arc<System> {
    Arc::new(System::jordan(JordanAlgebra::new(summands).unwrap(), label))
}

pub fn simplex(n: usize) -> Arc<System> {
    Arc::new(System::jordan(JordanAlgebra::classical(n).unwrap(), format!("simplex-{n}")))
}

pub fn polyhedral(gens: &[&[i64]], unit: &[f64], label: &str) -> Arc<System> {
    let p = PolyhedralCone::from_integers(gens).unwrap();
    Arc::new(System::polyhedral(p, Functional::from_slice(unit), label).unwrap())
}

pub fn square() -> Arc<System> {
    polyhedral(&[&[1, 1, 1], &[1, -1, 1], &[-1, -1, 1], &[-1, 1, 1]], &[0.0, 0.0, 1.0], "square")
}

pub fn triangle() -> Arc<System> {
    polyhedral(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], &[1.0, 1.0, 1.0], "triangle")
}

/// Integer pentagon with the combinatorics of the regular one.
pub fn pentagon() -> Arc<System> {
    polyhedral(
        &[&[3, 0, 1], &[1, 2, 1], &[-2, 2, 1], &[-2, -1, 1], &[1, -3, 1]],
        &[0.0, 0.0, 1.0],
        "pentagon",
    )
}

pub fn shared_corner() -> Arc<System> {
    Arc::new(System::shared_corner())
}

/// 2×2 complex Hermitian matrix in trace-orthonormal coordinates.
pub fn herm2(entries: [[(f64, f64); 2]; 2]) -> Element {
    let m = CMat::from_fn(2, 2, |r, c| C64::new(entries[r][c].0, entries[r][c].1));
    Element::new(qubit_factor().from_matrix(&m))
}

pub fn real2(a: f64, b: f64, c: f64, d: f64) -> Element {
    herm2([[(a, 0.0), (b, 0.0)], [(c, 0.0), (d, 0.0)]])
}

/// Effect functional `X ↦ tr(E X)` for a Hermitian `E`.
pub fn effect_of(system: &System, e: &Element) -> Functional {
    Functional::new(system.algebra().unwrap().gram() * &e.coords)
}
