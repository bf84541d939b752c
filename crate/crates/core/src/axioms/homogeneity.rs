use super::{as_polyhedral, ray_fixing_dimension, rows, AxiomVerdict, JordanView, Violation, Witness};
use crate::error::{Error, Result};
use crate::ovs::shared_corner::{self, GroupParams};
use crate::ovs::{is_order_isomorphism, ConeModel, Element, Functional, PositiveMap, System};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// An order automorphism with `Φ(ρ) = σ`, together with its probabilistic
/// inverse `Φ♯ = pΦ⁻¹`, scaled so that `u∘Φ♯ ≤ u` on the cone.
#[derive(Debug, Clone)]
pub struct HomogeneityWitness {
    pub map: PositiveMap,
    pub sharp: DMatrix<f64>,
    pub p: f64,
    /// `‖Φ(ρ) − σ‖`.
    pub residual: f64,
}

impl HomogeneityWitness {
    /// `‖Φ♯Φ − p·id‖`.
    pub fn reversibility_residual(&self) -> f64 {
        let d = self.map.matrix.nrows();
        (&self.sharp * &self.map.matrix - DMatrix::identity(d, d) * self.p).norm()
    }
}

/// Builds `Φ` with `Φ(ρ) = σ` for interior `ρ`, `σ`: `U_{σ^½}U_{ρ^{-½}}` on
/// Jordan cones, the shared-corner congruence group, or a diagonal rescaling
/// of a simplicial cone. Other cones have no constructor.
pub fn homogeneity_witness(system: &Arc<System>, rho: &Element, sigma: &Element, tol: f64) -> Result<HomogeneityWitness> {
    let d = system.dim();
    rho.expect_dim(d)?;
    sigma.expect_dim(d)?;
    let matrix = if let Some(view) = JordanView::of(system) {
        let a = &view.alg;
        let (r, s) = (view.to_alg(rho), view.to_alg(sigma));
        for x in [&r, &s] {
            if a.min_eigenvalue(x)? <= tol * x.norm().max(1.0) {
                return Err(Error::Precondition("homogeneity needs interior points".into()));
            }
        }
        let r_inv_half = a.spectral_map(&r, |l| 1.0 / l.sqrt())?;
        let s_half = a.spectral_map(&s, f64::sqrt)?;
        let m = a.quadratic_rep_matrix(&s_half)? * a.quadratic_rep_matrix(&r_inv_half)?;
        view.pull_map(&m)
    } else if matches!(system.cone, ConeModel::SharedCorner) {
        let interior = |x: &Element| shared_corner::margin(x.coords.as_slice()) > tol;
        let (Some(pr), Some(ps)) = (
            GroupParams::to_point(rho.coords.as_slice()).filter(|_| interior(rho)),
            GroupParams::to_point(sigma.coords.as_slice()).filter(|_| interior(sigma)),
        ) else {
            return Err(Error::Precondition("homogeneity needs interior points".into()));
        };
        shared_corner::group_element(&ps) * shared_corner::group_element(&pr.inverse())
    } else if let Some(p) = as_polyhedral(system).filter(|p| p.is_full_dimensional() && p.extreme_ray_indices().len() == d) {
        let rays: Vec<DVector<f64>> = p.extreme_ray_indices().into_iter().map(|i| p.generators_f64()[i].clone()).collect();
        let r = DMatrix::from_columns(&rays);
        let rinv = r.clone().try_inverse().ok_or_else(|| Error::Precondition("singular ray matrix".into()))?;
        let (lam, mu) = (&rinv * &rho.coords, &rinv * &sigma.coords);
        let scale = lam.amax().max(mu.amax()).max(1e-300);
        if lam.iter().chain(mu.iter()).any(|&c| c <= tol * scale) {
            return Err(Error::Precondition("homogeneity needs interior points".into()));
        }
        let diag = DVector::from_fn(d, |i, _| mu[i] / lam[i]);
        &r * DMatrix::from_diagonal(&diag) * rinv
    } else {
        return Err(Error::NoWitnessConstructor(format!("homogeneity of {} cone", system.cone.kind())));
    };
    let map = PositiveMap::endo(matrix, system.clone())?;
    let inv = map.matrix.clone().try_inverse().ok_or_else(|| Error::Precondition("witness is singular".into()))?;
    let pulled = Functional::new(inv.transpose() * &system.unit.coords);
    let top = super::max_over_base(system, &pulled)
        .ok_or_else(|| Error::Unsupported("maximum of a functional over the base".into()))?;
    let p = 1.0 / top;
    let residual = (map.apply(rho).coords - &sigma.coords).norm();
    Ok(HomogeneityWitness { sharp: inv * p, p, residual, map })
}

/// Random strictly interior element, when the cone supports sampling one.
pub fn random_interior<R: Rng + ?Sized>(system: &System, rng: &mut R) -> Option<Element> {
    if let Some(view) = JordanView::of(system) {
        return Some(view.from_alg(&view.alg.random_interior(rng)));
    }
    match &system.cone {
        ConeModel::SharedCorner => Some(Element::new(shared_corner::random_interior(rng))),
        cone => {
            let gens = cone.exact_generators()?;
            let mut x = DVector::zeros(cone.dim());
            for g in &gens {
                x += DVector::from_vec(crate::rational::vec_to_f64(g)) * rng.random_range(0.2..2.0);
            }
            Some(Element::new(x))
        }
    }
}

/// Homogeneity on `pairs` seeded random interior pairs. Every witness is
/// re-checked as an order isomorphism and for `Φ(ρ) = σ` to 1e-8. Polyhedral
/// cones that are not simplicial fail by an automorphism-dimension count.
pub fn check_homogeneity(system: &Arc<System>, pairs: usize, seed: u64, tol: f64) -> Result<AxiomVerdict> {
    const AXIOM: &str = "homogeneity";
    let d = system.dim();
    if JordanView::of(system).is_none() && !matches!(system.cone, ConeModel::SharedCorner) {
        if let Some(p) = as_polyhedral(system) {
            let rf = ray_fixing_dimension(&p);
            if rf < d {
                return Ok(AxiomVerdict::fails(AXIOM, Violation::AutomorphismDimension { ray_fixing: rf, dim: d }, None)
                    .with_note("automorphisms permute finitely many rays, so their identity component fixes each ray"));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut first: Option<HomogeneityWitness> = None;
    let mut worst = 0.0f64;
    for _ in 0..pairs {
        let (Some(rho), Some(sigma)) = (random_interior(system, &mut rng), random_interior(system, &mut rng)) else {
            return Ok(AxiomVerdict::unsupported(AXIOM, "no interior sampler for this cone"));
        };
        let w = match homogeneity_witness(system, &rho, &sigma, tol) {
            Ok(w) => w,
            Err(Error::NoWitnessConstructor(what)) => return Ok(AxiomVerdict::unsupported(AXIOM, format!("no witness constructor for {what}"))),
            Err(e) => return Err(e),
        };
        let iso = is_order_isomorphism(&w.map, 1e-7)?;
        let scale = sigma.norm().max(1.0);
        if !iso.holds() || w.residual > 1e-8 * scale {
            return Ok(AxiomVerdict::inconclusive(
                AXIOM,
                None,
                format!("constructed map failed re-verification (residual {:.3e}); this is not a disproof", w.residual),
            ));
        }
        worst = worst.max(w.residual / scale);
        first.get_or_insert(w);
    }
    let Some(w) = first else {
        return Ok(AxiomVerdict::inconclusive(AXIOM, None, "no pairs requested"));
    };
    Ok(AxiomVerdict::holds(AXIOM, Witness::Map { matrix: rows(&w.map.matrix), normalized: w.map.normalized, p: Some(w.p) }, Some(worst))
        .with_note(format!("{pairs} random interior pairs, each witness re-verified as an order isomorphism")))
}
