//! The five-dimensional cone of pairs of 2×2 positive semidefinite blocks
//! sharing their (1,1) entry:
//!
//! ```text
//! x = (x₁, x₂, x₃, x₄, x₅)  ↦  [[x₁, x₄], [x₄, x₂]] ⪰ 0  and  [[x₁, x₅], [x₅, x₃]] ⪰ 0
//! ```
//!
//! It is homogeneous (lower-triangular congruences with a shared corner act
//! transitively on the interior) but not self-dual. Its extremal rays come
//! in two families: `p₂ = (0,1,0,0,0)`, `p₃ = (0,0,1,0,0)` and the rank-one
//! pairs `(1, s², t², s, t)`. Equivalently, it is the image of the 3×3
//! positive semidefinite cone under `Z ↦ (Z₀₀, Z₁₁, Z₂₂, Z₀₁, Z₀₂)`.

use crate::linalg::{min_eigenvalue, real_to_complex, CMat};
use nalgebra::{DMatrix, DVector, Matrix2};
use rand::Rng;
use rand_distr::StandardNormal;

pub const DIM: usize = 5;

pub fn basepoint() -> DVector<f64> {
    DVector::from_column_slice(&[1.0, 1.0, 1.0, 0.0, 0.0])
}

/// Unit functional `x₁ + x₂ + x₃`.
pub fn unit() -> DVector<f64> {
    basepoint()
}

pub fn blocks(x: &[f64]) -> (Matrix2<f64>, Matrix2<f64>) {
    (
        Matrix2::new(x[0], x[3], x[3], x[1]),
        Matrix2::new(x[0], x[4], x[4], x[2]),
    )
}

pub fn lift(x: &[f64]) -> Vec<CMat> {
    let (a, b) = blocks(x);
    vec![
        real_to_complex(&DMatrix::from_column_slice(2, 2, a.as_slice())),
        real_to_complex(&DMatrix::from_column_slice(2, 2, b.as_slice())),
    ]
}

/// Smallest eigenvalue over the two blocks.
pub fn margin(x: &[f64]) -> f64 {
    lift(x).iter().map(min_eigenvalue).fold(f64::INFINITY, f64::min)
}

/// 3×3 matrix `M(f)` with `f·x = tr(M(f) Z)`; the dual cone is `{f : M(f) ⪰ 0}`.
pub fn dual_matrix(f: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(
        3,
        3,
        &[f[0], f[3] / 2.0, f[4] / 2.0, f[3] / 2.0, f[1], 0.0, f[4] / 2.0, 0.0, f[2]],
    )
}

pub fn dual_margin(f: &[f64]) -> f64 {
    min_eigenvalue(&real_to_complex(&dual_matrix(f)))
}

/// `max { f·x : x in the base }` for the unit `x₁ + x₂ + x₃`.
pub fn max_over_base(f: &[f64]) -> f64 {
    dual_matrix(f).symmetric_eigenvalues().iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Normalized pure state from a nonzero `z ∈ ℝ³`.
pub fn pure_from(z: &[f64; 3]) -> DVector<f64> {
    let n = z.iter().map(|v| v * v).sum::<f64>();
    DVector::from_column_slice(&[z[0] * z[0], z[1] * z[1], z[2] * z[2], z[0] * z[1], z[0] * z[2]]) / n
}

pub fn random_pure<R: Rng + ?Sized>(rng: &mut R) -> DVector<f64> {
    let z = [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)];
    pure_from(&z)
}

pub fn random_interior<R: Rng + ?Sized>(rng: &mut R) -> DVector<f64> {
    let a: f64 = rng.random_range(0.3..2.0);
    let b1: f64 = rng.random_range(-1.0..1.0);
    let b2: f64 = rng.random_range(-1.0..1.0);
    let c1: f64 = rng.random_range(0.3..2.0);
    let c2: f64 = rng.random_range(0.3..2.0);
    group_element(&GroupParams { a, b1, c1, b2, c2 }) * basepoint()
}

/// Parameters of the congruence `(B₁, B₂) ↦ (T₁B₁T₁ᵀ, T₂B₂T₂ᵀ)` with
/// `Tᵢ = [[a, 0], [bᵢ, cᵢ]]`.
#[derive(Debug, Clone, Copy)]
pub struct GroupParams {
    pub a: f64,
    pub b1: f64,
    pub c1: f64,
    pub b2: f64,
    pub c2: f64,
}

impl GroupParams {
    /// The element taking the basepoint to an interior `x` (per-block
    /// Cholesky factors with the shared corner `a = √x₁`).
    pub fn to_point(x: &[f64]) -> Option<Self> {
        if x[0] <= 0.0 {
            return None;
        }
        let a = x[0].sqrt();
        let b1 = x[3] / a;
        let b2 = x[4] / a;
        let r1 = x[1] - b1 * b1;
        let r2 = x[2] - b2 * b2;
        if r1 <= 0.0 || r2 <= 0.0 {
            return None;
        }
        Some(Self { a, b1, c1: r1.sqrt(), b2, c2: r2.sqrt() })
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: 1.0 / self.a,
            b1: -self.b1 / (self.a * self.c1),
            c1: 1.0 / self.c1,
            b2: -self.b2 / (self.a * self.c2),
            c2: 1.0 / self.c2,
        }
    }
}

#[rustfmt::skip]
pub fn group_element(p: &GroupParams) -> DMatrix<f64> {
    let GroupParams { a, b1, c1, b2, c2 } = *p;
    // Rows: x₁', x₂', x₃', x₄', x₅'.
    DMatrix::from_row_slice(
        5,
        5,
        &[
            a * a, 0.0, 0.0, 0.0, 0.0,
            b1 * b1, c1 * c1, 0.0, 2.0 * b1 * c1, 0.0,
            b2 * b2, 0.0, c2 * c2, 0.0, 2.0 * b2 * c2,
            a * b1, 0.0, 0.0, a * c1, 0.0,
            a * b2, 0.0, 0.0, 0.0, a * c2,
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn group_element_moves_basepoint() {
        let x = [4.0, 2.0, 2.0, 2.0, 2.0];
        let p = GroupParams::to_point(&x).unwrap();
        let y = group_element(&p) * basepoint();
        assert!((y - DVector::from_column_slice(&x)).norm() < 1e-12);
        let id = group_element(&p) * group_element(&p.inverse());
        assert!((id - DMatrix::identity(5, 5)).norm() < 1e-12);
    }

    #[test]
    fn pure_states_are_rank_one_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let x = random_pure(&mut rng);
            let (a, b) = blocks(x.as_slice());
            assert!(a.determinant().abs() < 1e-12 && b.determinant().abs() < 1e-12);
            assert!((unit().dot(&x) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dual_contains_unit() {
        assert!(dual_margin(unit().as_slice()) > 0.0);
        assert!((max_over_base(unit().as_slice()) - 1.0).abs() < 1e-12);
    }
}
