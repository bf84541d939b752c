//! Bipartite systems: tensor cones, marginals, conditioning maps and steering.

mod cone;

pub use cone::{tensor, tensor_q, CompositeCone, CompositeModel, Realization};

use crate::axioms::{rows, AxiomVerdict, Violation, Witness};
use crate::error::{Error, Result};
use crate::linalg::{numerical_rank, singular_extremes, C64};
use crate::lp::feasible_point;
use crate::ovs::{
    face_dimension, is_extremal_ray, is_order_isomorphism_between, validate_measurement, ConeModel, Element,
    Functional, PolyhedralCone, System,
};
use crate::rational::{self, q, Q, QVec};
use nalgebra::{DMatrix, DVector};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

#[derive(Debug, Clone)]
pub struct CompositeSystem {
    pub a: Arc<System>,
    pub b: Arc<System>,
    pub model: CompositeModel,
    /// The composite as a system with unit `u_A ⊗ u_B`.
    pub system: Arc<System>,
}

impl CompositeSystem {
    pub fn new(model: CompositeModel, a: Arc<System>, b: Arc<System>) -> Result<Self> {
        let cone = CompositeCone::new(model, a.cone.clone(), b.cone.clone())?;
        let unit = Functional::new(tensor(&a.unit.coords, &b.unit.coords));
        let label = format!("{model}({}, {})", a.label, b.label);
        let system = Arc::new(System { cone: ConeModel::Composite(Arc::new(cone)), unit, label });
        Ok(Self { a, b, model, system })
    }

    pub fn cone(&self) -> &CompositeCone {
        match &self.system.cone {
            ConeModel::Composite(c) => c,
            _ => unreachable!("composite systems carry composite cones"),
        }
    }

    pub fn dim(&self) -> usize {
        self.a.dim() * self.b.dim()
    }

    /// `dim V_AB = dim V_A · dim V_B`, which holds by representation.
    pub fn locally_tomographic(&self) -> bool {
        self.system.dim() == self.a.dim() * self.b.dim()
    }

    pub fn product_state(&self, wa: &Element, wb: &Element) -> Result<Element> {
        wa.expect_dim(self.a.dim())?;
        wb.expect_dim(self.b.dim())?;
        if !self.a.cone.membership(wa, crate::ovs::TOL)? || !self.b.cone.membership(wb, crate::ovs::TOL)? {
            return Err(Error::Precondition("product factors must be cone members".into()));
        }
        Ok(Element::new(tensor(&wa.coords, &wb.coords)))
    }

    pub fn product_effect(&self, ea: &Functional, eb: &Functional) -> Result<Functional> {
        ea.expect_dim(self.a.dim())?;
        eb.expect_dim(self.b.dim())?;
        Ok(Functional::new(tensor(&ea.coords, &eb.coords)))
    }

    /// `dim_A × dim_B` coefficient matrix of a bipartite element.
    pub fn reshape(&self, w: &Element) -> Result<DMatrix<f64>> {
        w.expect_dim(self.dim())?;
        let db = self.b.dim();
        Ok(DMatrix::from_fn(self.a.dim(), db, |i, j| w.coords[i * db + j]))
    }

    pub fn marginal(&self, w: &Element, side: Side) -> Result<Element> {
        let m = self.reshape(w)?;
        Ok(Element::new(match side {
            Side::A => &m * &self.b.unit.coords,
            Side::B => m.transpose() * &self.a.unit.coords,
        }))
    }

    pub fn conditioning_map(&self, w: &Element) -> Result<ConditioningMap> {
        let m = self.reshape(w)?;
        let matrix = m.transpose();
        let marginal = self.marginal(w, Side::B)?;
        let residual = (&matrix * &self.a.unit.coords - &marginal.coords).norm();
        Ok(ConditioningMap { matrix, marginal, residual })
    }

    /// Finds effects `eᵢ` on A with `ω̂(eᵢ) = ωᵢ`.
    pub fn steer(&self, w: &Element, ensemble: &[Element], tol: f64) -> Result<SteerOutcome> {
        if ensemble.is_empty() {
            return Err(Error::Precondition("empty ensemble".into()));
        }
        let map = self.conditioning_map(w)?;
        let scale = map.marginal.norm().max(1.0);
        let mut total = DVector::zeros(self.b.dim());
        for part in ensemble {
            part.expect_dim(self.b.dim())?;
            if !self.b.cone.membership(part, tol * scale)? {
                return Err(Error::Precondition("ensemble member is not in the cone".into()));
            }
            total += &part.coords;
        }
        if (&total - &map.marginal.coords).norm() > tol * scale {
            return Err(Error::Precondition("ensemble does not sum to the marginal".into()));
        }
        let m = &map.matrix;
        // Targets outside the image of ω̂ cannot be reached by any effect.
        let svd = m.clone().svd(true, true);
        for (k, part) in ensemble.iter().enumerate() {
            let pre = svd.solve(&part.coords, 1e-12 * svd.singular_values.max()).map_err(|e| Error::Precondition(e.into()))?;
            let res = (m * &pre - &part.coords).norm();
            if res > tol.max(1e-10) * scale {
                return Ok(SteerOutcome::Infeasible {
                    reason: format!("ensemble member {k} lies outside the image of the conditioning map (residual {res:.3e})"),
                });
            }
        }
        let (smin, smax, _) = singular_extremes(m);
        let invertible = m.nrows() == m.ncols() && smin > 1e-12 * smax;
        if invertible {
            let inv = m.clone().try_inverse().ok_or_else(|| Error::Precondition("inversion failed".into()))?;
            let effects: Vec<Functional> =
                ensemble.iter().map(|p| Functional::new(&inv * &p.coords)).collect();
            let residual = reconstruction_residual(m, &effects, ensemble);
            // The preimage is unique, so a failed validation is a disproof.
            return Ok(if validate_measurement(&self.a, &effects, tol.max(1e-9))? {
                SteerOutcome::Measurement { effects, residual }
            } else {
                SteerOutcome::Infeasible { reason: "the unique preimage is not a measurement".into() }
            });
        }
        let Some(gens) = self.a.cone.exact_generators() else {
            return Ok(SteerOutcome::Unsupported {
                reason: "non-invertible conditioning map on a non-polyhedral factor".into(),
            });
        };
        self.steer_lp(m, &map.marginal, ensemble, &gens)
    }

    fn steer_lp(&self, m: &DMatrix<f64>, marginal: &Element, ensemble: &[Element], gens: &[QVec]) -> Result<SteerOutcome> {
        let da = self.a.dim();
        let db = self.b.dim();
        let n = ensemble.len();
        let ng = gens.len();
        let mq: Vec<QVec> = (0..db)
            .map(|r| rational::vec_from_f64(m.row(r).iter().copied().collect::<Vec<_>>().as_slice()))
            .collect::<Option<_>>()
            .ok_or(Error::NonFinite)?;
        let mut targets: Vec<QVec> = ensemble
            .iter()
            .map(|p| rational::vec_from_f64(p.coords.as_slice()))
            .collect::<Option<_>>()
            .ok_or(Error::NonFinite)?;
        // Close the sum exactly onto the marginal.
        let mq_marg = rational::vec_from_f64(marginal.coords.as_slice()).ok_or(Error::NonFinite)?;
        let head: QVec = (0..db)
            .map(|r| targets[..n - 1].iter().fold(Q::zero(), |s, t| s + &t[r]))
            .collect();
        targets[n - 1] = (0..db).map(|r| &mq_marg[r] - &head[r]).collect();
        let unit = rational::vec_from_f64(self.a.unit.coords.as_slice()).ok_or(Error::NonFinite)?;
        // Variables per part: e⁺ (da), e⁻ (da), t (ng).
        let block = 2 * da + ng;
        let nvar = n * block;
        let mut rows_a: Vec<QVec> = Vec::new();
        let mut rhs: QVec = Vec::new();
        for (k, t) in targets.iter().enumerate() {
            for r in 0..db {
                let mut row = vec![Q::zero(); nvar];
                for c in 0..da {
                    row[k * block + c] = mq[r][c].clone();
                    row[k * block + da + c] = -mq[r][c].clone();
                }
                rows_a.push(row);
                rhs.push(t[r].clone());
            }
            for (g_idx, g) in gens.iter().enumerate() {
                let mut row = vec![Q::zero(); nvar];
                for c in 0..da {
                    row[k * block + c] = g[c].clone();
                    row[k * block + da + c] = -g[c].clone();
                }
                row[k * block + 2 * da + g_idx] = q(-1);
                rows_a.push(row);
                rhs.push(Q::zero());
            }
        }
        for c in 0..da {
            let mut row = vec![Q::zero(); nvar];
            for k in 0..n {
                row[k * block + c] = q(1);
                row[k * block + da + c] = q(-1);
            }
            rows_a.push(row);
            rhs.push(unit[c].clone());
        }
        Ok(match feasible_point(&rows_a, &rhs) {
            None => SteerOutcome::Infeasible { reason: "exact LP over effect coordinates is infeasible".into() },
            Some(z) => {
                let effects: Vec<Functional> = (0..n)
                    .map(|k| {
                        Functional::new(DVector::from_fn(da, |c, _| {
                            rational::to_f64(&(&z[k * block + c] - &z[k * block + da + c]))
                        }))
                    })
                    .collect();
                let residual = reconstruction_residual(m, &effects, ensemble);
                SteerOutcome::Measurement { effects, residual }
            }
        })
    }
}

fn reconstruction_residual(m: &DMatrix<f64>, effects: &[Functional], ensemble: &[Element]) -> f64 {
    effects
        .iter()
        .zip(ensemble)
        .map(|(e, p)| (m * &e.coords - &p.coords).norm())
        .fold(0.0, f64::max)
}

/// `ω̂ : V_A* → V_B`, `ω̂(e)(f) = ω(e ⊗ f)`, as a `dim_B × dim_A` matrix.
#[derive(Debug, Clone)]
pub struct ConditioningMap {
    pub matrix: DMatrix<f64>,
    pub marginal: Element,
    /// `‖ω̂(u_A) − ω_B‖`, zero up to rounding by construction.
    pub residual: f64,
}

impl ConditioningMap {
    pub fn apply(&self, e: &Functional) -> Element {
        Element::new(&self.matrix * &e.coords)
    }

    pub fn rank(&self) -> usize {
        numerical_rank(&self.matrix, 1e-10)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum SteerOutcome {
    Measurement { effects: Vec<Functional>, residual: f64 },
    Infeasible { reason: String },
    Unsupported { reason: String },
}

/// Random decomposition of an interior element into `parts` cone members.
pub fn random_ensemble<R: Rng + ?Sized>(system: &System, total: &Element, parts: usize, rng: &mut R) -> Result<Vec<Element>> {
    if parts == 0 {
        return Err(Error::Precondition("ensemble needs at least one part".into()));
    }
    if let Some(alg) = system.algebra() {
        // Split Σ yₖ of random interior yₖ and move the sum onto `total`
        // with Φ = U_{t^½} U_{s^{-½}}, an automorphism.
        let ys: Vec<Element> = (0..parts).map(|_| alg.random_interior(rng)).collect();
        let s = ys.iter().skip(1).fold(ys[0].clone(), |acc, y| &acc + y);
        let s_inv_half = alg.spectral_map(&s, |l| 1.0 / l.sqrt())?;
        let t_half = alg.spectral_map(total, |l| l.max(0.0).sqrt())?;
        let phi = alg.quadratic_rep_matrix(&t_half)? * alg.quadratic_rep_matrix(&s_inv_half)?;
        let mut out: Vec<Element> = ys.iter().map(|y| Element::new(&phi * &y.coords)).collect();
        let head = out[..parts - 1].iter().fold(DVector::zeros(alg.dim()), |acc, y| acc + &y.coords);
        out[parts - 1] = Element::new(&total.coords - head);
        return Ok(out);
    }
    let Some(gens) = system.cone.exact_generators() else {
        return Err(Error::Unsupported("random ensembles need a Jordan or polyhedral cone".into()));
    };
    let p = PolyhedralCone::new(gens.clone())?;
    let xq = rational::vec_from_f64(total.coords.as_slice()).ok_or(Error::NonFinite)?;
    let lam = p
        .coefficients(&xq, &Q::zero())
        .ok_or_else(|| Error::Precondition("total is not in the cone".into()))?;
    let mut out = vec![DVector::zeros(system.dim()); parts];
    for (l, g) in lam.iter().zip(p.generators_f64()) {
        let w: Vec<f64> = (0..parts).map(|_| rng.random_range(0.05..1.0)).collect();
        let sum: f64 = w.iter().sum();
        for (o, wk) in out.iter_mut().zip(&w) {
            *o += g * (rational::to_f64(l) * wk / sum);
        }
    }
    let head = out[..parts - 1].iter().fold(DVector::zeros(system.dim()), |acc, y| acc + y);
    out[parts - 1] = &total.coords - head;
    Ok(out.into_iter().map(Element::new).collect())
}

/// Effects of A as `P·K` for a cone model `K`: Jordan factors use the
/// trace-form Gram matrix, polyhedral factors their exact facet cone.
fn effect_cone(system: &System) -> Option<(ConeModel, DMatrix<f64>)> {
    if let Some(alg) = system.algebra() {
        return Some((system.cone.clone(), alg.gram()));
    }
    let facets = system.cone.exact_facets()?;
    let p = PolyhedralCone::new(facets).ok()?;
    let d = system.dim();
    Some((ConeModel::polyhedral(p), DMatrix::identity(d, d)))
}

const STEER_SPOT_CHECKS: usize = 20;

/// An injective conditioning map onto an interior marginal is an order
/// isomorphism of the effect cone onto `B₊`, and then every ensemble of the
/// marginal is steerable. Spot-verified with `steer` on 20 ensembles.
pub fn steering_order_iso_check(comp: &CompositeSystem, w: &Element, tol: f64, seed: u64) -> Result<AxiomVerdict> {
    const AXIOM: &str = "steering-order-isomorphism";
    let map = comp.conditioning_map(w)?;
    let wb = &map.marginal;
    let interior = match comp.b.cone.spectral_margin(wb) {
        Some(m) => m > tol * wb.norm().max(1.0),
        None => face_dimension(&comp.b.cone, wb, crate::ovs::default_probes(comp.b.dim()), tol)? == comp.b.dim(),
    };
    if !interior {
        return Err(Error::Precondition("the B marginal is on the boundary".into()));
    }
    let rank = map.rank();
    if rank < comp.a.dim() || comp.a.dim() != comp.b.dim() {
        return Ok(AxiomVerdict::fails(AXIOM, Violation::RankDeficient { rank, dim: comp.a.dim() }, None));
    }
    let Some((effects, param)) = effect_cone(&comp.a) else {
        return Ok(AxiomVerdict::unsupported(AXIOM, "no exact description of the effect cone of A"));
    };
    let verdict = is_order_isomorphism_between(&(&map.matrix * &param), &effects, &comp.b.cone, tol)?;
    let margin = match &verdict {
        crate::ovs::OrderIsoVerdict::Yes { margin, .. } => *margin,
        crate::ovs::OrderIsoVerdict::No { violation, .. } => {
            return Ok(AxiomVerdict::fails(AXIOM, Violation::OrderIsomorphism { detail: violation.clone() }, None));
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for k in 0..STEER_SPOT_CHECKS {
        let ens = random_ensemble(&comp.b, wb, 3, &mut rng)?;
        match comp.steer(w, &ens, 1e-8)? {
            SteerOutcome::Measurement { residual, .. } => worst = worst.max(residual),
            other => {
                return Ok(AxiomVerdict::fails(
                    AXIOM,
                    Violation::Other { text: format!("spot check {k}: steer returned {other:?}") },
                    None,
                ));
            }
        }
    }
    Ok(AxiomVerdict::holds(
        AXIOM,
        Witness::Map { matrix: rows(&map.matrix), normalized: false, p: None },
        Some(if margin.is_finite() { margin } else { 0.0 }),
    )
    .with_note(format!(
        "injective conditioning map is an order isomorphism onto the cone; steer verified on {STEER_SPOT_CHECKS} ensembles, worst residual {worst:.3e}"
    )))
}

/// Bipartite element of a system with itself whose conditioning map is the
/// identity on trace-form coordinates, scaled by `1/r` (with the transpose
/// for the Hilbert composite).
pub fn canonical_self_steering_state(comp: &CompositeSystem) -> Result<Element> {
    let (Some(a), Some(b)) = (comp.a.algebra(), comp.b.algebra()) else {
        return Err(Error::Precondition("self-steering state needs Jordan factors".into()));
    };
    if a != b {
        return Err(Error::Precondition("self-steering state needs two copies of one system".into()));
    }
    if !a.is_simple() && !a.is_classical() {
        return Err(Error::Precondition("non-simple factor: construct per summand and mix".into()));
    }
    let r = a.rank() as f64;
    let d = a.dim();
    let w = match comp.model {
        CompositeModel::Hilbert => {
            let f = &a.summands()[0];
            let basis: Vec<_> = (0..d).map(|k| f.to_matrix(DVector::from_fn(d, |i, _| f64::from(i == k)).as_slice())).collect();
            DMatrix::from_fn(d, d, |i, j| (basis[i].transpose() * &basis[j]).trace().re / r)
        }
        _ => {
            let g = a.gram();
            DMatrix::from_fn(d, d, |i, j| if i == j { 1.0 / (r * g[(i, i)]) } else { 0.0 })
        }
    };
    Ok(Element::new(DVector::from_fn(d * d, |k, _| w[(k / d, k % d)])))
}

/// Whether `wa ⊗ wb` spans an extremal ray of the composite cone.
pub fn purity_preservation_check(comp: &CompositeSystem, wa: &Element, wb: &Element, tol: f64) -> Result<bool> {
    if !is_extremal_ray(&comp.a.cone, wa, tol)? || !is_extremal_ray(&comp.b.cone, wb, tol)? {
        return Err(Error::Precondition("factor states must be pure".into()));
    }
    let w = comp.product_state(wa, wb)?;
    is_extremal_ray(&comp.system.cone, &w, tol)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "certificate", rename_all = "kebab-case")]
pub enum MaxTensorCertificate {
    /// A product effect with negative value: `w` is not in the max tensor.
    Rejected { effect_a: Vec<f64>, effect_b: Vec<f64>, value: f64 },
    /// Nonnegative on every sampled and locally minimized product effect.
    AcceptedSampled { pairs: usize, min_value: f64 },
}

impl MaxTensorCertificate {
    pub fn accepted(&self) -> bool {
        matches!(self, MaxTensorCertificate::AcceptedSampled { .. })
    }
}

/// Sampling certificate for max-tensor membership: `(e ⊗ f)·w ≥ 0` over
/// sampled extremal effect pairs, each refined by alternating exact
/// minimization over the other factor's extremal effects.
pub fn max_tensor_membership(comp: &CompositeSystem, w: &Element, samples: usize, tol: f64, seed: u64) -> Result<MaxTensorCertificate> {
    let m = comp.reshape(w)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ea = extremal_effects(&comp.a, samples, &mut rng)?;
    let eb = extremal_effects(&comp.b, samples, &mut rng)?;
    let mut best = (f64::INFINITY, DVector::zeros(0), DVector::zeros(0));
    let mut pairs = 0;
    for e in &ea {
        for f in &eb {
            pairs += 1;
            let (mut e, mut f) = (e.clone(), f.clone());
            let mut v = e.dot(&(&m * &f));
            for _ in 0..5 {
                let (vf, fnew) = minimize_effect(&comp.b, &(m.transpose() * &e), &eb)?;
                f = fnew;
                let (ve, enew) = minimize_effect(&comp.a, &(&m * &f), &ea)?;
                e = enew;
                let nv = vf.min(ve);
                if nv >= v - 1e-15 {
                    v = v.min(nv);
                    break;
                }
                v = nv;
            }
            if v < best.0 {
                best = (v, e, f);
            }
        }
    }
    Ok(if best.0 < -tol {
        MaxTensorCertificate::Rejected {
            effect_a: best.1.iter().copied().collect(),
            effect_b: best.2.iter().copied().collect(),
            value: best.0,
        }
    } else {
        MaxTensorCertificate::AcceptedSampled { pairs, min_value: best.0 }
    })
}

fn extremal_effects<R: Rng + ?Sized>(system: &System, count: usize, rng: &mut R) -> Result<Vec<DVector<f64>>> {
    if let Some(alg) = system.algebra() {
        let g = alg.gram();
        return Ok(system.cone.extremal_samples(count, rng).into_iter().map(|x| &g * &x.coords).collect());
    }
    match system.cone.exact_facets() {
        Some(f) => Ok(f.iter().map(|n| DVector::from_vec(rational::vec_to_f64(n))).collect()),
        None => Err(Error::Unsupported(format!("extremal effects of {}", system.cone.kind()))),
    }
}

/// `min { h·f : f extremal effect, normalized on the unit's dual scale }`.
fn minimize_effect(system: &System, h: &DVector<f64>, pool: &[DVector<f64>]) -> Result<(f64, DVector<f64>)> {
    if let Some(alg) = system.algebra() {
        // h·(G c) = ⟨h, c⟩_tr, minimal at the bottom idempotent of h.
        let spec = alg.spectral(&Element::new(h.clone()))?;
        let (i, l) = spec
            .eigenvalues
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, &l)| if l < acc.1 { (i, l) } else { acc });
        return Ok((l, alg.gram() * &spec.idempotents[i].coords));
    }
    Ok(pool
        .iter()
        .map(|f| (h.dot(f), f.clone()))
        .fold((f64::INFINITY, DVector::zeros(h.len())), |acc, x| if x.0 < acc.0 { x } else { acc }))
}

/// Extremal elements used as positivity probes for composite cones.
pub fn composite_extremal_samples<R: Rng + ?Sized>(c: &CompositeCone, count: usize, rng: &mut R) -> Vec<Element> {
    match &c.realization {
        Realization::Generated(p) => p.generators_f64().iter().map(|g| Element::new(g.clone())).collect(),
        Realization::Orthant => (0..c.dim()).map(|k| Element::basis(c.dim(), k)).collect(),
        Realization::Halfspaces(normals) => match PolyhedralCone::new(normals.clone()) {
            // Facets of the dual are the extremal rays.
            Ok(dual) => dual.facets().iter().map(|r| Element::from_slice(&rational::vec_to_f64(r))).collect(),
            Err(_) => Vec::new(),
        },
        Realization::Hilbert { basis } => {
            let n = basis[0].nrows();
            let pa = c.a.extremal_samples(2, rng);
            let pb = c.b.extremal_samples(2, rng);
            let mut out: Vec<Element> = pa.iter().flat_map(|x| pb.iter().map(move |y| Element::new(tensor(&x.coords, &y.coords)))).collect();
            for _ in 0..count {
                let v = DVector::<C64>::from_fn(n, |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
                let v = &v / C64::new(v.norm(), 0.0);
                let m = &v * v.adjoint();
                out.push(Element::new(c.hilbert_coords(&m).expect("hilbert realization")));
            }
            out
        }
        Realization::SampledMax => {
            let pa = c.a.extremal_samples(count, rng);
            let pb = c.b.extremal_samples(count, rng);
            pa.iter().flat_map(|x| pb.iter().map(move |y| Element::new(tensor(&x.coords, &y.coords)))).collect()
        }
    }
}
