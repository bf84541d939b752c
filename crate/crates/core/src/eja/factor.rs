//! Simple Euclidean Jordan algebras in real coordinates.
//!
//! Matrix families use coordinates orthonormal for the trace form: the
//! diagonal entries first, then for each pair `i < j` (row-major) the
//! components of the off-diagonal entry scaled by √2 (one component for
//! real, two for complex, four for quaternionic entries). Quaternionic
//! matrices are realized as complex `2r × 2r` matrices through
//! `a + bi + cj + dk ↦ [[a+bi, c+di], [−c+di, a−bi]]`.
//!
//! Spin factors use coordinates `(s, x)`; their trace form is `2(st + x·y)`.

use crate::error::{Error, Result};
use crate::linalg::{gram_schmidt_extend, hermitian_eigen, outer, CMat, C64};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    RealSym,
    ComplexHerm,
    QuatHerm,
    SpinFactor,
}

impl Family {
    /// Real components of one off-diagonal matrix entry.
    fn entry_width(self) -> usize {
        match self {
            Family::RealSym => 1,
            Family::ComplexHerm => 2,
            Family::QuatHerm => 4,
            Family::SpinFactor => 0,
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Family::RealSym => "RealSym",
            Family::ComplexHerm => "ComplexHerm",
            Family::QuatHerm => "QuatHerm",
            Family::SpinFactor => "SpinFactor",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimpleFactor {
    pub family: Family,
    pub rank: usize,
    pub dim: usize,
}

/// Eigenvalues with primitive idempotents, in coordinates of one factor.
#[derive(Debug, Clone)]
pub struct FactorSpectrum {
    pub eigenvalues: Vec<f64>,
    pub idempotents: Vec<DVector<f64>>,
}

impl SimpleFactor {
    pub fn real_sym(rank: usize) -> Result<Self> {
        Self::matrix(Family::RealSym, rank)
    }

    pub fn complex_herm(rank: usize) -> Result<Self> {
        Self::matrix(Family::ComplexHerm, rank)
    }

    pub fn quat_herm(rank: usize) -> Result<Self> {
        Self::matrix(Family::QuatHerm, rank)
    }

    pub fn matrix(family: Family, rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidAlgebra("rank must be positive".into()));
        }
        let dim = match family {
            Family::RealSym => rank * (rank + 1) / 2,
            Family::ComplexHerm => rank * rank,
            Family::QuatHerm => rank * (2 * rank - 1),
            Family::SpinFactor => {
                return Err(Error::InvalidAlgebra("spin factors are built with SimpleFactor::spin".into()))
            }
        };
        Ok(Self { family, rank, dim })
    }

    /// Spin factor `ℝ ⊕ ℝⁿ` of total dimension `dim = n + 1 ≥ 3`.
    pub fn spin(dim: usize) -> Result<Self> {
        if dim < 3 {
            return Err(Error::InvalidAlgebra(format!(
                "spin factor dimension {dim} < 3 is not simple"
            )));
        }
        Ok(Self { family: Family::SpinFactor, rank: 2, dim })
    }

    pub fn is_matrix(&self) -> bool {
        self.family != Family::SpinFactor
    }

    /// Side length of the complex matrix realizing the factor.
    pub fn matrix_size(&self) -> usize {
        match self.family {
            Family::QuatHerm => 2 * self.rank,
            _ => self.rank,
        }
    }

    /// Isomorphism invariant of simple factors: (rank, dim).
    pub fn invariant(&self) -> (usize, usize) {
        (self.rank, self.dim)
    }

    pub fn unit(&self) -> DVector<f64> {
        let mut u = DVector::zeros(self.dim);
        match self.family {
            Family::SpinFactor => u[0] = 1.0,
            _ => (0..self.rank).for_each(|i| u[i] = 1.0),
        }
        u
    }

    /// Coordinates of the trace functional `x ↦ tr(x)`.
    pub fn trace_functional(&self) -> DVector<f64> {
        match self.family {
            Family::SpinFactor => {
                let mut u = DVector::zeros(self.dim);
                u[0] = 2.0;
                u
            }
            _ => self.unit(),
        }
    }

    /// Diagonal of the trace-form Gram matrix.
    pub fn gram_scale(&self) -> f64 {
        match self.family {
            Family::SpinFactor => 2.0,
            _ => 1.0,
        }
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let r = self.rank;
        (0..r).flat_map(move |i| (i + 1..r).map(move |j| (i, j)))
    }

    /// Self-adjoint complex matrix of a matrix-family element.
    pub fn to_matrix(&self, x: &[f64]) -> CMat {
        debug_assert!(self.is_matrix());
        let n = self.matrix_size();
        let r = self.rank;
        let w = self.family.entry_width();
        let mut m = CMat::zeros(n, n);
        let quat = self.family == Family::QuatHerm;
        for i in 0..r {
            if quat {
                m[(2 * i, 2 * i)] = C64::new(x[i], 0.0);
                m[(2 * i + 1, 2 * i + 1)] = C64::new(x[i], 0.0);
            } else {
                m[(i, i)] = C64::new(x[i], 0.0);
            }
        }
        for (k, (i, j)) in self.pairs().enumerate() {
            let c = &x[r + k * w..r + (k + 1) * w];
            match self.family {
                Family::RealSym => {
                    let v = C64::new(c[0] / SQRT_2, 0.0);
                    m[(i, j)] = v;
                    m[(j, i)] = v;
                }
                Family::ComplexHerm => {
                    let v = C64::new(c[0] / SQRT_2, c[1] / SQRT_2);
                    m[(i, j)] = v;
                    m[(j, i)] = v.conj();
                }
                Family::QuatHerm => {
                    let z = C64::new(c[0] / SQRT_2, c[1] / SQRT_2);
                    let w = C64::new(c[2] / SQRT_2, c[3] / SQRT_2);
                    let block = [[z, w], [-w.conj(), z.conj()]];
                    for a in 0..2 {
                        for b in 0..2 {
                            m[(2 * i + a, 2 * j + b)] = block[a][b];
                            m[(2 * j + b, 2 * i + a)] = block[a][b].conj();
                        }
                    }
                }
                Family::SpinFactor => unreachable!(),
            }
        }
        m
    }

    /// Orthogonal projection of a complex matrix back onto coordinates.
    pub fn from_matrix(&self, m: &CMat) -> DVector<f64> {
        debug_assert!(self.is_matrix());
        let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
        let r = self.rank;
        let w = self.family.entry_width();
        let mut x = DVector::zeros(self.dim);
        let quat = self.family == Family::QuatHerm;
        for i in 0..r {
            x[i] = if quat {
                0.5 * (h[(2 * i, 2 * i)].re + h[(2 * i + 1, 2 * i + 1)].re)
            } else {
                h[(i, i)].re
            };
        }
        for (k, (i, j)) in self.pairs().enumerate() {
            let base = r + k * w;
            match self.family {
                Family::RealSym => x[base] = SQRT_2 * h[(i, j)].re,
                Family::ComplexHerm => {
                    x[base] = SQRT_2 * h[(i, j)].re;
                    x[base + 1] = SQRT_2 * h[(i, j)].im;
                }
                Family::QuatHerm => {
                    let z = 0.5 * (h[(2 * i, 2 * j)] + h[(2 * i + 1, 2 * j + 1)].conj());
                    let wv = 0.5 * (h[(2 * i, 2 * j + 1)] - h[(2 * i + 1, 2 * j)].conj());
                    x[base] = SQRT_2 * z.re;
                    x[base + 1] = SQRT_2 * z.im;
                    x[base + 2] = SQRT_2 * wv.re;
                    x[base + 3] = SQRT_2 * wv.im;
                }
                Family::SpinFactor => unreachable!(),
            }
        }
        x
    }

    /// Linear lift into self-adjoint matrices whose positive semidefinite
    /// cone pulls back to this factor's cone. Spin factors use the arrow
    /// matrix `[[s, xᵀ], [x, s·I]]`.
    pub fn lift(&self, x: &[f64]) -> CMat {
        match self.family {
            Family::SpinFactor => {
                let n = self.dim;
                let mut m = CMat::zeros(n, n);
                for i in 0..n {
                    m[(i, i)] = C64::new(x[0], 0.0);
                }
                for i in 1..n {
                    m[(0, i)] = C64::new(x[i], 0.0);
                    m[(i, 0)] = C64::new(x[i], 0.0);
                }
                m
            }
            _ => self.to_matrix(x),
        }
    }

    pub fn product(&self, a: &[f64], b: &[f64]) -> DVector<f64> {
        match self.family {
            Family::SpinFactor => {
                let (s, t) = (a[0], b[0]);
                let mut out = DVector::zeros(self.dim);
                out[0] = s * t + (1..self.dim).map(|i| a[i] * b[i]).sum::<f64>();
                for i in 1..self.dim {
                    out[i] = s * b[i] + t * a[i];
                }
                out
            }
            _ => {
                let ma = self.to_matrix(a);
                let mb = self.to_matrix(b);
                let p = (&ma * &mb + &mb * &ma) * C64::new(0.5, 0.0);
                self.from_matrix(&p)
            }
        }
    }

    /// Spectral trace (sum of eigenvalues).
    pub fn trace(&self, x: &[f64]) -> f64 {
        self.trace_functional().iter().zip(x).map(|(u, v)| u * v).sum()
    }

    pub fn spectral(&self, x: &[f64]) -> Result<FactorSpectrum> {
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        match self.family {
            Family::SpinFactor => Ok(self.spin_spectral(x)),
            _ => Ok(self.matrix_spectral(x)),
        }
    }

    fn spin_spectral(&self, x: &[f64]) -> FactorSpectrum {
        let s = x[0];
        let v = DVector::from_column_slice(&x[1..]);
        let norm = v.norm();
        let dir = if norm > 1e-300 {
            v / norm
        } else {
            let mut e = DVector::zeros(self.dim - 1);
            e[0] = 1.0;
            e
        };
        let idem = |sign: f64| {
            let mut c = DVector::zeros(self.dim);
            c[0] = 0.5;
            for i in 1..self.dim {
                c[i] = 0.5 * sign * dir[i - 1];
            }
            c
        };
        FactorSpectrum { eigenvalues: vec![s + norm, s - norm], idempotents: vec![idem(1.0), idem(-1.0)] }
    }

    fn matrix_spectral(&self, x: &[f64]) -> FactorSpectrum {
        let m = self.to_matrix(x);
        let n = m.nrows();
        let (values, vectors) = hermitian_eigen(&m);
        let scale = values.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        let cluster_tol = 1e-9 * scale;
        let quat = self.family == Family::QuatHerm;

        let mut eigenvalues = Vec::with_capacity(self.rank);
        let mut idempotents = Vec::with_capacity(self.rank);
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && (values[start] - values[end]).abs() <= cluster_tol {
                end += 1;
            }
            if quat && (end - start) % 2 == 1 && end < n {
                end += 1;
            }
            let cols = vectors.columns(start, end - start);
            let projector = &cols * cols.adjoint();
            let lambda = values[start..end].iter().sum::<f64>() / (end - start) as f64;
            // Split the eigenspace deterministically from basis order.
            let mut basis: Vec<DVector<C64>> = Vec::new();
            for k in 0..n {
                if basis.len() == end - start {
                    break;
                }
                let candidate = projector.column(k).into_owned();
                if gram_schmidt_extend(&mut basis, &candidate, 1e-6) {
                    let v = basis.last().unwrap().clone();
                    let mut p = outer(&v);
                    if quat {
                        let jv = quat_j(&v);
                        basis.push(jv.clone());
                        p += outer(&jv);
                    }
                    eigenvalues.push(lambda);
                    idempotents.push(self.from_matrix(&p));
                }
            }
            start = end;
        }
        FactorSpectrum { eigenvalues, idempotents }
    }

    /// Random pure state normalized to unit trace.
    pub fn random_pure<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<f64> {
        match self.family {
            Family::SpinFactor => {
                let v = random_unit(rng, self.dim - 1);
                let mut c = DVector::zeros(self.dim);
                c[0] = 0.5;
                for i in 1..self.dim {
                    c[i] = 0.5 * v[i - 1];
                }
                c
            }
            _ => {
                let v = self.random_vector(rng);
                self.pure_from_vector(&v)
            }
        }
    }

    /// Random unit vector of the underlying (real, complex or symplectic)
    /// column space.
    pub fn random_vector<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<C64> {
        let n = self.matrix_size();
        let complex = self.family != Family::RealSym;
        let v = DVector::from_fn(n, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = if complex { rng.sample(StandardNormal) } else { 0.0 };
            C64::new(re, im)
        });
        let norm = v.norm();
        v / C64::new(norm, 0.0)
    }

    /// Rank-one projector of a unit vector (with its symplectic partner for
    /// quaternionic factors).
    pub fn pure_from_vector(&self, v: &DVector<C64>) -> DVector<f64> {
        let mut p = outer(v);
        if self.family == Family::QuatHerm {
            p += outer(&quat_j(v));
        }
        self.from_matrix(&p)
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<f64> {
        DVector::from_fn(self.dim, |_, _| rng.sample(StandardNormal))
    }
}

/// The antiunitary `J(x, y) = (−ȳ, x̄)` on consecutive coordinate pairs; it
/// commutes with every matrix in the image of the quaternionic embedding.
pub fn quat_j(v: &DVector<C64>) -> DVector<C64> {
    let mut out = DVector::zeros(v.len());
    for k in 0..v.len() / 2 {
        out[2 * k] = -v[2 * k + 1].conj();
        out[2 * k + 1] = v[2 * k].conj();
    }
    out
}

pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let norm = v.norm();
        if norm > 1e-8 {
            return v / norm;
        }
    }
}

/// Dense matrix of the linear map `x ↦ f(x)` on `dim`-dimensional coordinates.
pub fn matrix_of<F: Fn(&DVector<f64>) -> DVector<f64>>(dim: usize, f: F) -> DMatrix<f64> {
    let cols: Vec<DVector<f64>> = (0..dim)
        .map(|k| {
            let mut e = DVector::zeros(dim);
            e[k] = 1.0;
            f(&e)
        })
        .collect();
    DMatrix::from_columns(&cols)
}
