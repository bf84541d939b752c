//! Euclidean Jordan algebras: finite direct sums of simple factors.

mod factor;
mod frames;

pub use factor::{matrix_of, quat_j, random_unit, Family, FactorSpectrum, SimpleFactor};
pub use frames::{CentralSummand, Frame};

use crate::error::{Error, Result};
use crate::ovs::Element;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JordanAlgebra {
    summands: Vec<SimpleFactor>,
    offsets: Vec<usize>,
    dim: usize,
    rank: usize,
}

/// `Σ λᵢ cᵢ` with pairwise orthogonal primitive idempotents summing to the
/// unit. `summand[i]` names the simple summand carrying `cᵢ`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub idempotents: Vec<Element>,
    pub summand: Vec<usize>,
}

impl SpectralDecomposition {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn reconstruct(&self, dim: usize) -> Element {
        let mut out = DVector::zeros(dim);
        for (l, c) in self.eigenvalues.iter().zip(&self.idempotents) {
            out += &c.coords * *l;
        }
        Element::new(out)
    }
}

impl JordanAlgebra {
    pub fn new(summands: Vec<SimpleFactor>) -> Result<Self> {
        if summands.is_empty() {
            return Err(Error::InvalidAlgebra("no summands".into()));
        }
        let mut offsets = Vec::with_capacity(summands.len());
        let mut dim = 0;
        for s in &summands {
            offsets.push(dim);
            dim += s.dim;
        }
        let rank = summands.iter().map(|s| s.rank).sum();
        Ok(Self { summands, offsets, dim, rank })
    }

    pub fn simple(factor: SimpleFactor) -> Self {
        Self::new(vec![factor]).expect("one summand")
    }

    /// The classical simplex cone ℝ₊ⁿ as `n` copies of the one-dimensional algebra.
    pub fn classical(n: usize) -> Result<Self> {
        Self::new((0..n).map(|_| SimpleFactor::real_sym(1)).collect::<Result<Vec<_>>>()?)
    }

    pub fn summands(&self) -> &[SimpleFactor] {
        &self.summands
    }

    pub fn offset(&self, k: usize) -> usize {
        self.offsets[k]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_simple(&self) -> bool {
        self.summands.len() == 1
    }

    /// True when every summand is one-dimensional.
    pub fn is_classical(&self) -> bool {
        self.summands.iter().all(|s| s.dim == 1)
    }

    fn check(&self, x: &Element) -> Result<()> {
        x.expect_dim(self.dim)?;
        if x.coords.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(())
    }

    pub fn part<'a>(&self, x: &'a Element, k: usize) -> &'a [f64] {
        &x.coords.as_slice()[self.offsets[k]..self.offsets[k] + self.summands[k].dim]
    }

    pub fn embed(&self, k: usize, y: &DVector<f64>) -> Element {
        let mut out = DVector::zeros(self.dim);
        out.rows_mut(self.offsets[k], self.summands[k].dim).copy_from(y);
        Element::new(out)
    }

    fn map_parts<F: FnMut(&SimpleFactor, &[f64]) -> DVector<f64>>(&self, x: &Element, mut f: F) -> Element {
        let mut out = DVector::zeros(self.dim);
        for (k, s) in self.summands.iter().enumerate() {
            let y = f(s, self.part(x, k));
            out.rows_mut(self.offsets[k], s.dim).copy_from(&y);
        }
        Element::new(out)
    }

    pub fn unit(&self) -> Element {
        self.map_parts(&Element::zeros(self.dim), |s, _| s.unit())
    }

    /// The trace functional, strictly positive on nonzero cone members.
    pub fn trace_functional(&self) -> DVector<f64> {
        self.map_parts(&Element::zeros(self.dim), |s, _| s.trace_functional()).coords
    }

    /// Gram matrix of the trace form `⟨a, b⟩ = tr(a*b)` in coordinates.
    pub fn gram(&self) -> DMatrix<f64> {
        let mut d = DVector::zeros(self.dim);
        for (k, s) in self.summands.iter().enumerate() {
            d.rows_mut(self.offsets[k], s.dim).fill(s.gram_scale());
        }
        DMatrix::from_diagonal(&d)
    }

    pub fn jordan_product(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        let mut out = DVector::zeros(self.dim);
        for (k, s) in self.summands.iter().enumerate() {
            let y = s.product(self.part(a, k), self.part(b, k));
            out.rows_mut(self.offsets[k], s.dim).copy_from(&y);
        }
        Ok(Element::new(out))
    }

    pub fn trace(&self, x: &Element) -> f64 {
        self.trace_functional().dot(&x.coords)
    }

    /// `tr(a*b)`, the spectral trace of the Jordan product.
    pub fn trace_inner(&self, a: &Element, b: &Element) -> Result<f64> {
        Ok(self.trace(&self.jordan_product(a, b)?))
    }

    pub fn spectral(&self, a: &Element) -> Result<SpectralDecomposition> {
        self.check(a)?;
        let mut eigenvalues = Vec::with_capacity(self.rank);
        let mut idempotents = Vec::with_capacity(self.rank);
        let mut summand = Vec::with_capacity(self.rank);
        for (k, s) in self.summands.iter().enumerate() {
            let spec = s.spectral(self.part(a, k))?;
            for (l, c) in spec.eigenvalues.into_iter().zip(spec.idempotents) {
                eigenvalues.push(l);
                idempotents.push(self.embed(k, &c));
                summand.push(k);
            }
        }
        Ok(SpectralDecomposition { eigenvalues, idempotents, summand })
    }

    /// Smallest eigenvalue over all summands.
    pub fn min_eigenvalue(&self, a: &Element) -> Result<f64> {
        Ok(self.spectral(a)?.min_eigenvalue())
    }

    /// `Σ f(λᵢ) cᵢ`.
    pub fn spectral_map<F: Fn(f64) -> f64>(&self, a: &Element, f: F) -> Result<Element> {
        let spec = self.spectral(a)?;
        let mut out = DVector::zeros(self.dim);
        for (l, c) in spec.eigenvalues.iter().zip(&spec.idempotents) {
            out += &c.coords * f(*l);
        }
        Ok(Element::new(out))
    }

    /// Matrix of the quadratic representation `U_a x = 2 a*(a*x) − (a*a)*x`.
    pub fn quadratic_rep_matrix(&self, a: &Element) -> Result<DMatrix<f64>> {
        self.check(a)?;
        let a2 = self.jordan_product(a, a)?;
        let mut cols = Vec::with_capacity(self.dim);
        for k in 0..self.dim {
            let e = Element::basis(self.dim, k);
            let ax = self.jordan_product(a, &e)?;
            let aax = self.jordan_product(a, &ax)?;
            let a2x = self.jordan_product(&a2, &e)?;
            cols.push(&aax.coords * 2.0 - &a2x.coords);
        }
        Ok(DMatrix::from_columns(&cols))
    }

    /// Index of the unique summand carrying `x`, if `x` lives in one summand.
    pub fn summand_of(&self, x: &Element, tol: f64) -> Option<usize> {
        let scale = x.norm().max(1e-300);
        let carrying: Vec<usize> = (0..self.summands.len())
            .filter(|&k| self.part(x, k).iter().map(|v| v * v).sum::<f64>().sqrt() > tol * scale)
            .collect();
        match carrying.as_slice() {
            [k] => Some(*k),
            _ => None,
        }
    }

    /// Random trace-normalized pure state of summand `k`.
    pub fn random_pure_in<R: Rng + ?Sized>(&self, k: usize, rng: &mut R) -> Element {
        self.embed(k, &self.summands[k].random_pure(rng))
    }

    /// Random pure state of a uniformly chosen summand.
    pub fn random_pure<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        let k = rng.random_range(0..self.summands.len());
        self.random_pure_in(k, rng)
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        self.map_parts(&Element::zeros(self.dim), |s, _| s.random_element(rng))
    }

    /// Random strictly interior element: random frame, eigenvalues in [0.2, 2].
    pub fn random_interior<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        let a = self.random_element(rng);
        let spec = self.spectral(&a).expect("finite random element");
        let mut out = DVector::zeros(self.dim);
        for c in &spec.idempotents {
            out += &c.coords * rng.random_range(0.2..2.0);
        }
        Element::new(out)
    }

    /// Random boundary element: at least one eigenvalue is exactly zero.
    pub fn random_boundary<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        let a = self.random_element(rng);
        let spec = self.spectral(&a).expect("finite random element");
        let n = spec.idempotents.len();
        let zero = rng.random_range(0..n);
        let mut out = DVector::zeros(self.dim);
        for (i, c) in spec.idempotents.iter().enumerate() {
            let l = if i == zero || rng.random_bool(0.3) { 0.0 } else { rng.random_range(0.2..2.0) };
            out += &c.coords * l;
        }
        if out.norm() == 0.0 {
            out += &spec.idempotents[(zero + 1) % n].coords;
        }
        Element::new(out)
    }
}

#[cfg(test)]
mod tests;
