//! Exact automorphism search for polyhedral cones.

use crate::ovs::PolyhedralCone;
use crate::rational::{self, dot, nullspace, Q, QVec};
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq)]
pub enum AutomorphismSearch {
    /// `matrix` maps normalized ray `i` to normalized ray `perm[i]`.
    Found { matrix: Vec<QVec>, perm: Vec<usize> },
    /// The whole incidence-pruned tree was explored.
    None { nodes: usize },
    Exceeded { nodes: usize },
}

const NODE_LIMIT: usize = 200_000;

/// Searches for a linear automorphism `T` of the cone with `u∘T = u` and
/// `T r̂_from = r̂_to`, where `r̂` are the extremal rays scaled to `u(r̂) = 1`.
///
/// Rays are assigned in an order that reaches full rank quickly; once the
/// assigned rays span, `T` is determined and checked to permute all rays.
/// Pairs of rays must keep their number of common facets.
pub fn find_normalized_automorphism(p: &PolyhedralCone, unit: &[Q], from: usize, to: usize) -> AutomorphismSearch {
    let rays: Vec<QVec> = p
        .extreme_ray_indices()
        .into_iter()
        .map(|i| {
            let g = &p.generators()[i];
            let s = dot(unit, g);
            g.iter().map(|v| v / &s).collect()
        })
        .collect();
    let n = rays.len();
    let d = p.dim();
    let facets = p.facets();
    let inc: Vec<Vec<bool>> = rays.iter().map(|r| facets.iter().map(|f| dot(r, f).is_zero()).collect()).collect();
    let common: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).map(|k| (0..facets.len()).filter(|&j| inc[i][j] && inc[k][j]).count()).collect())
        .collect();

    // Domain order: `from`, then rays raising the rank.
    let mut order = vec![from];
    let mut span = vec![rays[from].clone()];
    for i in 0..n {
        if i != from && rational::rank(&[span.clone(), vec![rays[i].clone()]].concat()) > span.len() {
            span.push(rays[i].clone());
            order.push(i);
        }
    }
    let depth = order.len();
    if depth < d {
        return AutomorphismSearch::None { nodes: 0 };
    }

    let mut state = Search { rays: &rays, common: &common, order: &order, d, nodes: 0, images: vec![] };
    let mut used = vec![false; n];
    used[to] = true;
    state.images.push(to);
    if common[from][from] != common[to][to] {
        return AutomorphismSearch::None { nodes: 1 };
    }
    match state.rec(&mut used) {
        Some((matrix, perm)) => AutomorphismSearch::Found { matrix, perm },
        None if state.nodes >= NODE_LIMIT => AutomorphismSearch::Exceeded { nodes: state.nodes },
        None => AutomorphismSearch::None { nodes: state.nodes },
    }
}

struct Search<'a> {
    rays: &'a [QVec],
    common: &'a [Vec<usize>],
    order: &'a [usize],
    d: usize,
    nodes: usize,
    images: Vec<usize>,
}

impl Search<'_> {
    fn rec(&mut self, used: &mut [bool]) -> Option<(Vec<QVec>, Vec<usize>)> {
        self.nodes += 1;
        if self.nodes >= NODE_LIMIT {
            return None;
        }
        let k = self.images.len();
        if k == self.d {
            return self.complete();
        }
        let i = self.order[k];
        for a in 0..self.rays.len() {
            if used[a] || self.common[i][i] != self.common[a][a] {
                continue;
            }
            let ok = self.order[..k].iter().zip(&self.images).all(|(&j, &b)| self.common[i][j] == self.common[a][b]);
            if !ok {
                continue;
            }
            used[a] = true;
            self.images.push(a);
            let found = self.rec(used);
            self.images.pop();
            used[a] = false;
            if found.is_some() {
                return found;
            }
            if self.nodes >= NODE_LIMIT {
                return None;
            }
        }
        None
    }

    /// Solves `T r̂ᵢ = r̂_σ(i)` on the assigned basis and checks every ray.
    fn complete(&self) -> Option<(Vec<QVec>, Vec<usize>)> {
        let d = self.d;
        // Rows of T: solve B^T t_r = images_r, B the basis as rows.
        let basis: Vec<QVec> = self.order[..d].iter().map(|&i| self.rays[i].clone()).collect();
        let binv = rational::inverse(&transpose(&basis))?;
        // T = R' B⁻¹ with columns of B the basis rays.
        let targets: Vec<QVec> = self.images.iter().map(|&a| self.rays[a].clone()).collect();
        let rprime = transpose(&targets);
        let t: Vec<QVec> = (0..d)
            .map(|r| (0..d).map(|c| (0..d).fold(Q::zero(), |s, k| s + &rprime[r][k] * &binv[k][c])).collect())
            .collect();
        let mut perm = vec![usize::MAX; self.rays.len()];
        let mut hit = vec![false; self.rays.len()];
        for (i, r) in self.rays.iter().enumerate() {
            let img = rational::mat_vec(&t, r);
            let j = self.rays.iter().position(|s| *s == img)?;
            if hit[j] {
                return None;
            }
            hit[j] = true;
            perm[i] = j;
        }
        Some((t, perm))
    }
}

fn transpose(m: &[QVec]) -> Vec<QVec> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols).map(|c| (0..rows).map(|r| m[r][c].clone()).collect()).collect()
}

/// Dimension of `{T : T rᵢ ∈ ℝ rᵢ for every extremal ray}`, the Lie algebra
/// containing that of the identity component of the automorphism group.
pub fn ray_fixing_dimension(p: &PolyhedralCone) -> usize {
    let rays: Vec<QVec> = p.extreme_ray_indices().into_iter().map(|i| p.generators()[i].clone()).collect();
    let d = p.dim();
    let n = rays.len();
    let cols = d * d + n;
    let mut eqs = Vec::with_capacity(n * d);
    for (k, r) in rays.iter().enumerate() {
        for row in 0..d {
            let mut e = vec![Q::zero(); cols];
            for c in 0..d {
                e[row * d + c] = r[c].clone();
            }
            e[d * d + k] = -r[row].clone();
            eqs.push(e);
        }
    }
    nullspace(&eqs, cols).len()
}
