//! Finitely generated cones in exact rational arithmetic.

use crate::error::{Error, Result};
use crate::lp::{feasible_point, maximize, LpOutcome};
use crate::rational::{self, dot, normalize_max, nullspace, q, Q, QVec};
use itertools::Itertools;
use nalgebra::DVector;
use num_traits::{Signed, Zero};
use std::sync::{Arc, OnceLock};

/// Clones share the lazily enumerated facets.
#[derive(Debug, Clone)]
pub struct PolyhedralCone {
    generators: Vec<QVec>,
    generators_f64: Vec<DVector<f64>>,
    dim: usize,
    full_dimensional: bool,
    facets: Arc<OnceLock<Vec<QVec>>>,
}

impl PartialEq for PolyhedralCone {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators
    }
}

impl PolyhedralCone {
    pub fn new(generators: Vec<QVec>) -> Result<Self> {
        let dim = generators
            .first()
            .map(|g| g.len())
            .ok_or_else(|| Error::Precondition("polyhedral cone needs generators".into()))?;
        if dim == 0 {
            return Err(Error::Precondition("zero-dimensional generators".into()));
        }
        for g in &generators {
            if g.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: g.len() });
            }
            if g.iter().all(|v| v.is_zero()) {
                return Err(Error::Precondition("zero generator".into()));
            }
        }
        let full_dimensional = rational::rank(&generators) == dim;
        let generators_f64 = generators
            .iter()
            .map(|g| DVector::from_vec(rational::vec_to_f64(g)))
            .collect();
        Ok(Self { generators, generators_f64, dim, full_dimensional, facets: Arc::new(OnceLock::new()) })
    }

    pub fn from_integers(gens: &[&[i64]]) -> Result<Self> {
        Self::new(gens.iter().map(|g| g.iter().map(|&v| q(v)).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[QVec] {
        &self.generators
    }

    pub fn generators_f64(&self) -> &[DVector<f64>] {
        &self.generators_f64
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.full_dimensional
    }

    /// Columns are the generators.
    fn generator_matrix(&self) -> Vec<QVec> {
        (0..self.dim)
            .map(|r| self.generators.iter().map(|g| g[r].clone()).collect())
            .collect()
    }

    /// Exact LP feasibility of `x = Σ λᵢ gᵢ` with `λᵢ ≥ −slack`.
    pub fn contains(&self, x: &[Q], slack: &Q) -> bool {
        // With facets at hand most queries are settled exactly without the
        // LP: n·x ≥ 0 on every facet means x is in the cone, and λ ≥ −slack
        // forces n·x ≥ −slack·Σ n·gᵢ.
        if let Some(facets) = self.cheap_facets() {
            let mut inside = true;
            for n in facets {
                let v = dot(n, x);
                if v.is_negative() {
                    inside = false;
                    let bound = self.generators.iter().fold(Q::zero(), |s, g| s + dot(n, g));
                    if v < -(slack * bound) {
                        return false;
                    }
                }
            }
            if inside {
                return true;
            }
        }
        self.coefficients(x, slack).is_some()
    }

    fn cheap_facets(&self) -> Option<&[QVec]> {
        const MAX_SUBSETS: usize = 50_000;
        if !self.full_dimensional {
            return None;
        }
        if self.facets.get().is_none() && binomial(self.generators.len(), self.dim - 1) > MAX_SUBSETS {
            return None;
        }
        Some(self.facets())
    }

    /// Coefficients `λ` with `x = Σ λᵢ gᵢ`, `λᵢ ≥ −slack`.
    pub fn coefficients(&self, x: &[Q], slack: &Q) -> Option<QVec> {
        let a = self.generator_matrix();
        // λ = μ − slack with μ ≥ 0.
        let shifted: QVec = (0..self.dim)
            .map(|r| &x[r] + slack * self.generators.iter().fold(Q::zero(), |s, g| s + &g[r]))
            .collect();
        feasible_point(&a, &shifted).map(|mu| mu.into_iter().map(|m| m - slack).collect())
    }

    /// Indices of generators spanning the smallest face containing `x`:
    /// those `g` with `x − εg` in the cone for some `ε > 0`.
    pub fn face_generators(&self, x: &[Q]) -> Result<Vec<usize>> {
        if !self.contains(x, &Q::zero()) {
            return Err(Error::Precondition("point is not in the cone".into()));
        }
        let base = self.generator_matrix();
        let mut out = Vec::new();
        for (k, g) in self.generators.iter().enumerate() {
            let a: Vec<QVec> = base
                .iter()
                .enumerate()
                .map(|(r, row)| {
                    let mut row = row.clone();
                    row.push(g[r].clone());
                    row
                })
                .collect();
            let mut c = vec![Q::zero(); self.generators.len()];
            c.push(q(1));
            match maximize(&a, x, &c) {
                LpOutcome::Optimal { value, .. } if value.is_positive() => out.push(k),
                LpOutcome::Unbounded => out.push(k),
                _ => {}
            }
        }
        Ok(out)
    }

    pub fn face_dimension_exact(&self, x: &[Q]) -> Result<usize> {
        if x.iter().all(|v| v.is_zero()) {
            return Ok(0);
        }
        // The smallest face is cut out by the facets through x.
        if let Some(facets) = self.cheap_facets() {
            let vals: Vec<Q> = facets.iter().map(|n| dot(n, x)).collect();
            if vals.iter().any(|v| v.is_negative()) {
                return Err(Error::Precondition("point is not in the cone".into()));
            }
            let active: Vec<QVec> = facets.iter().zip(&vals).filter(|(_, v)| v.is_zero()).map(|(n, _)| n.clone()).collect();
            return Ok(self.dim - rational::rank(&active));
        }
        let gens: Vec<QVec> = self.face_generators(x)?.into_iter().map(|k| self.generators[k].clone()).collect();
        Ok(rational::rank(&gens))
    }

    /// Generators that span extremal rays (others are redundant).
    pub fn extreme_ray_indices(&self) -> Vec<usize> {
        (0..self.generators.len())
            .filter(|&k| self.face_dimension_exact(&self.generators[k]).map(|d| d == 1).unwrap_or(false))
            .collect()
    }

    /// `f · g ≥ −slack` for every generator.
    pub fn dual_contains(&self, f: &[Q], slack: &Q) -> bool {
        self.generators.iter().all(|g| dot(f, g) >= -slack.clone())
    }

    /// Facet normals (extreme rays of the dual cone), by exhaustive
    /// enumeration of `dim − 1` generator subsets. Normals are scaled to
    /// max-entry one.
    pub fn facets(&self) -> &[QVec] {
        self.facets.get_or_init(|| self.enumerate_facets())
    }

    fn enumerate_facets(&self) -> Vec<QVec> {
        let d = self.dim;
        let mut out: Vec<QVec> = Vec::new();
        if d == 1 {
            let sign = if self.generators[0][0].is_positive() { 1 } else { -1 };
            return vec![vec![q(sign)]];
        }
        for subset in (0..self.generators.len()).combinations(d - 1) {
            let rows: Vec<QVec> = subset.iter().map(|&i| self.generators[i].clone()).collect();
            let ns = nullspace(&rows, d);
            if ns.len() != 1 {
                continue;
            }
            let mut n = normalize_max(&ns[0]);
            let vals: Vec<Q> = self.generators.iter().map(|g| dot(&n, g)).collect();
            if vals.iter().all(|v| !v.is_negative()) {
            } else if vals.iter().all(|v| !v.is_positive()) {
                n = n.into_iter().map(|v| -v).collect();
            } else {
                continue;
            }
            if !out.contains(&n) {
                out.push(n);
            }
        }
        out
    }

    /// Generator/facet incidence: `incidence[i][j]` iff generator `i` lies on facet `j`.
    pub fn incidence(&self) -> Vec<Vec<bool>> {
        let facets = self.facets();
        self.generators
            .iter()
            .map(|g| facets.iter().map(|f| dot(f, g).is_zero()).collect())
            .collect()
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k.min(n.saturating_sub(k))).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}
