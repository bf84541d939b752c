//! Acceptance run: one line per criterion, nonzero exit if any fails.

use conelab::registry::SystemSpec;
use conelab::{builtin_fixtures, Built, Registry};
use conelab_core::axioms::{
    check_self_dual, continuous_pure_transitivity, homogeneity_witness, pure_transitivity_witness, random_interior,
    search_spd_self_duality, search_weak_self_duality, shared_corner_pair, AxiomVerdict, Violation, Witness,
};
use conelab_core::classify::{albert_near_miss, survivors_classicality, survivors_injective_composite, survivors_local_tomography, ClassFamily};
use conelab_core::composite::{
    canonical_self_steering_state, purity_preservation_check, random_ensemble, steering_order_iso_check, CompositeModel,
    CompositeSystem, Side, SteerOutcome,
};
use conelab_core::eja::{JordanAlgebra, SimpleFactor};
use conelab_core::linalg::{kron, outer};
use conelab_core::ovs::{is_extremal_ray, validate_measurement, Element, Functional, PolyhedralCone, System};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn built(reg: &Registry, name: &str) -> Built {
    reg.build(reg.get(name).unwrap_or_else(|| panic!("no fixture {name}"))).unwrap()
}

fn eja_fixtures(reg: &Registry) -> Vec<(String, Arc<System>)> {
    reg.fixtures
        .iter()
        .filter(|f| matches!(f.system, SystemSpec::Eja { .. }))
        .map(|f| (f.name.clone(), built(reg, &f.name).system().clone()))
        .collect()
}

fn kind(v: &AxiomVerdict) -> String {
    match (&v.witness, &v.violation) {
        (_, Some(x)) => format!("{:?}", x),
        (Some(w), None) => format!("{:?}", std::mem::discriminant(w)),
        _ => format!("{}", v.status),
    }
}

fn koecher_vinberg(reg: &Registry) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    let fixtures = eja_fixtures(reg);
    for (name, sys) in &fixtures {
        let a = sys.algebra().unwrap();
        let v = check_self_dual(sys, &a.gram(), 1e-9).map_err(|e| format!("{name}: {e}"))?;
        ensure!(v.is_holds(), "{name}: trace form self-duality {}", kind(&v));
        for k in 0..50 {
            let (r, s) = (a.random_interior(&mut rng), a.random_interior(&mut rng));
            let w = homogeneity_witness(sys, &r, &s, 1e-9).map_err(|e| format!("{name} pair {k}: {e}"))?;
            ensure!(w.residual < 1e-8, "{name} pair {k}: residual {:.3e}", w.residual);
            worst = worst.max(w.residual);
        }
    }
    Ok(format!("{} fixtures self-dual under the trace form; 50 witnesses each, worst residual {worst:.1e}", fixtures.len()))
}

fn shared_corner(reg: &Registry) -> Outcome {
    let sys = built(reg, "shared-corner").system().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst = 0.0f64;
    for k in 0..50 {
        let r = random_interior(&sys, &mut rng).unwrap();
        let s = random_interior(&sys, &mut rng).unwrap();
        let w = homogeneity_witness(&sys, &r, &s, 1e-9).map_err(|e| format!("pair {k}: {e}"))?;
        ensure!(w.residual < 1e-9, "pair {k}: residual {:.3e}", w.residual);
        worst = worst.max(w.residual);
    }
    let (a, b) = shared_corner_pair();
    let v = pure_transitivity_witness(&sys, &a, &b, 1e-9).map_err(|e| e.to_string())?;
    let Some(Violation::FaceProfile { first, second, .. }) = v.violation else {
        return Err(format!("expected a face-profile violation, got {}", kind(&v)));
    };
    let (hi, lo) = (first.max(second), first.min(second));
    ensure!(hi == 5 && lo <= 3, "profiles {first} vs {second}");
    Ok(format!("50 homogeneity witnesses (worst residual {worst:.1e}); pure pair has face profiles {first} vs {second}"))
}

fn pure_transitivity_dichotomy(reg: &Registry) -> Outcome {
    let sys = built(reg, "qubit-plus-qubit").system().clone();
    let a = sys.algebra().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for k in 0..50 {
        let (w1, w2) = (a.random_pure(&mut rng), a.random_pure(&mut rng));
        let v = pure_transitivity_witness(&sys, &w1, &w2, 1e-9).map_err(|e| format!("pair {k}: {e}"))?;
        ensure!(v.is_holds(), "pair {k}: {}", kind(&v));
    }
    let mixed = built(reg, "qubit-plus-rebit").system().clone();
    let b = mixed.algebra().unwrap();
    let (w1, w2) = (b.random_pure_in(0, &mut rng), b.random_pure_in(1, &mut rng));
    let v = pure_transitivity_witness(&mixed, &w1, &w2, 1e-9).map_err(|e| e.to_string())?;
    let Some(Violation::NonIsomorphicSummands { first, second }) = v.violation else {
        return Err(format!("qubit-plus-rebit: expected non-isomorphic summands, got {}", kind(&v)));
    };
    Ok(format!(
        "50 pairs connected on CH(2)+CH(2); CH(2)+RS(2) separated by summand dims {} vs {}",
        first.dim, second.dim
    ))
}

fn continuous_dichotomy(reg: &Registry) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let (mut simple, mut cross) = (0, 0);
    for (name, sys) in eja_fixtures(reg) {
        let a = sys.algebra().unwrap().clone();
        if a.is_simple() && !a.is_classical() {
            for k in 0..5 {
                let (w1, w2) = (a.random_pure(&mut rng), a.random_pure(&mut rng));
                let v = continuous_pure_transitivity(&sys, &w1, &w2, 16, 1e-9).map_err(|e| format!("{name} {k}: {e}"))?;
                let Some(Witness::Path { states, .. }) = &v.witness else {
                    return Err(format!("{name} {k}: no path ({})", kind(&v)));
                };
                ensure!(states.len() == 16, "{name}: {} states", states.len());
                for s in states {
                    let x = Element::from_slice(s);
                    ensure!(is_extremal_ray(&sys.cone, &x, 1e-9).unwrap_or(false), "{name}: impure path state");
                }
            }
            simple += 1;
        } else {
            let n = a.summands().len();
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let (w1, w2) = (a.random_pure_in(i, &mut rng), a.random_pure_in(j, &mut rng));
                    let v = continuous_pure_transitivity(&sys, &w1, &w2, 16, 1e-9).map_err(|e| format!("{name}: {e}"))?;
                    ensure!(
                        v.violation == Some(Violation::DisjointSummands { first: i, second: j }),
                        "{name} ({i},{j}): {}",
                        kind(&v)
                    );
                    cross += 1;
                }
            }
        }
    }
    Ok(format!("16-step pure paths on {simple} simple fixtures; {cross} cross-summand pairs obstructed"))
}

fn square_separation(reg: &Registry) -> Outcome {
    let sys = built(reg, "square-cone").system().clone();
    let conelab_core::ovs::ConeModel::Polyhedral(p) = &sys.cone else { unreachable!() };
    let weak = search_weak_self_duality(p).map_err(|e| e.to_string())?;
    let Some(Witness::ExactMap { matrix, bijection }) = &weak.witness else {
        return Err(format!("weak search: {}", kind(&weak)));
    };
    check_ray_to_facet(p, matrix, bijection)?;
    let spd = search_spd_self_duality(p).map_err(|e| e.to_string())?;
    let Some(Violation::Exhaustive { bijections, incidence_consistent }) = spd.violation else {
        return Err(format!("SPD search: {}", kind(&spd)));
    };
    ensure!(bijections == 24, "{bijections} bijections");
    Ok(format!("exact order isomorphism onto the dual; SPD infeasible over all {bijections} bijections ({incidence_consistent} incidence-consistent)"))
}

/// `M rᵢ` is a positive multiple of facet normal `n_σ(i)`, exactly.
fn check_ray_to_facet(p: &PolyhedralCone, m: &[Vec<conelab_core::rational::ExactQ>], bijection: &[usize]) -> Result<(), String> {
    use conelab_core::rational::{mat_vec, Q};
    use num_traits::{Signed, Zero};
    let m: Vec<Vec<Q>> = m.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect();
    let rays = p.extreme_ray_indices();
    for (i, &k) in rays.iter().enumerate() {
        let img = mat_vec(&m, &p.generators()[k]);
        let n = &p.facets()[bijection[i]];
        let j = n.iter().position(|v| !v.is_zero()).unwrap();
        let mu = &img[j] / &n[j];
        ensure!(mu.is_positive(), "ray {i}: non-positive multiple");
        ensure!(img.iter().zip(n).all(|(a, b)| *a == &mu * b), "ray {i}: image is not on facet {}", bijection[i]);
    }
    Ok(())
}

fn classification() -> Outcome {
    use ClassFamily::*;
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tests/golden");
    let golden = |name: &str| std::fs::read_to_string(format!("{dir}/{name}.txt")).map_err(|e| format!("{name}: {e}"));
    let lt = survivors_local_tomography(8).map_err(|e| e.to_string())?;
    ensure!(lt.survivors == vec![ComplexHerm], "local tomography: {:?}", lt.survivors);
    ensure!(lt.render() == golden("classify_lt_8")?, "local tomography trace differs from the brute-force oracle");
    let inj = survivors_injective_composite(8).map_err(|e| e.to_string())?;
    ensure!(inj.survivors == vec![RealSym, ComplexHerm], "injective: {:?}", inj.survivors);
    ensure!(inj.render() == golden("classify_inj_8")?, "injective trace differs from the brute-force oracle");
    for k in 1..=3 {
        let t = survivors_classicality(8, k).map_err(|e| e.to_string())?;
        ensure!(t.survivors == vec![RealSym, ComplexHerm], "classicality k={k}: {:?}", t.survivors);
        ensure!(t.render() == golden(&format!("classify_cls_8_{k}"))?, "classicality k={k} trace differs");
    }
    let n = albert_near_miss();
    ensure!((n.required_rank, n.required_dim) == (81, 6561), "near miss {n:?}");
    ensure!(n.matched_by.family == ComplexHerm && n.matched_by.rank == 81, "near miss {n:?}");
    Ok("survivors {CH}, {RS, CH}, {RS, CH} x3; 5 traces byte-identical; 3 Albert summands match CH(81)".into())
}

fn steering(reg: &Registry) -> Outcome {
    let Built::Composite(qq) = built(reg, "hilbert-two-qubit") else { unreachable!() };
    let Built::Composite(bb) = built(reg, "classical-bit-bit") else { unreachable!() };
    for (name, c) in [("two qubits", &qq), ("bit pair", &bb)] {
        let w = canonical_self_steering_state(c).map_err(|e| e.to_string())?;
        let v = steering_order_iso_check(c, &w, 1e-9, 1).map_err(|e| format!("{name}: {e}"))?;
        ensure!(v.is_holds(), "{name}: {}", kind(&v));
    }
    let w = canonical_self_steering_state(&qq).unwrap();
    let half = c_marginal(&qq, &w);
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut worst = 0.0f64;
    for k in 0..20 {
        let ens = random_ensemble(&qq.b, &half, 3, &mut rng).map_err(|e| e.to_string())?;
        match qq.steer(&w, &ens, 1e-9).map_err(|e| e.to_string())? {
            SteerOutcome::Measurement { effects, residual } => {
                ensure!(residual < 1e-8, "ensemble {k}: residual {residual:.3e}");
                ensure!(validate_measurement(&qq.a, &effects, 1e-9).unwrap_or(false), "ensemble {k}: invalid measurement");
                worst = worst.max(residual);
            }
            other => return Err(format!("ensemble {k}: {other:?}")),
        }
    }
    let zero = qq.a.algebra().unwrap().random_pure(&mut rng);
    let product = qq.product_state(&zero, &half).unwrap();
    let f = qq.b.algebra().unwrap().spectral(&half).unwrap();
    let ens: Vec<Element> = f.idempotents.iter().map(|p| p.scale(0.5)).collect();
    let out = qq.steer(&product, &ens, 1e-9).map_err(|e| e.to_string())?;
    ensure!(matches!(out, SteerOutcome::Infeasible { .. }), "product state: {out:?}");
    Ok(format!("both canonical states steer; 20 ensembles of I/2 recovered (worst residual {worst:.1e}); product state infeasible"))
}

fn c_marginal(c: &CompositeSystem, w: &Element) -> Element {
    c.marginal(w, Side::B).unwrap()
}

fn square() -> Arc<System> {
    let p = PolyhedralCone::from_integers(&[&[1, 1, 1], &[1, -1, 1], &[-1, -1, 1], &[-1, 1, 1]]).unwrap();
    Arc::new(System::polyhedral(p, Functional::from_slice(&[0.0, 0.0, 1.0]), "square").unwrap())
}

fn random_ray(sys: &System, rng: &mut ChaCha8Rng) -> Element {
    if let Some(a) = sys.algebra() {
        return a.random_pure(rng);
    }
    let gens = sys.cone.exact_generators().unwrap();
    let g = Element::from_slice(&conelab_core::rational::vec_to_f64(&gens[rng.random_range(0..gens.len())]));
    sys.normalize(&g).unwrap()
}

fn purity(reg: &Registry) -> Outcome {
    let qubit = built(reg, "qubit").system().clone();
    let simplex3 = built(reg, "classical-simplex-3").system().clone();
    let models = [
        (CompositeModel::Hilbert, qubit.clone()),
        (CompositeModel::MinTensor, square()),
        (CompositeModel::MaxTensor, square()),
        (CompositeModel::Classical, simplex3),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    for (model, f) in &models {
        let c = CompositeSystem::new(*model, f.clone(), f.clone()).unwrap();
        for k in 0..50 {
            let (wa, wb) = (random_ray(f, &mut rng), random_ray(f, &mut rng));
            let ok = purity_preservation_check(&c, &wa, &wb, 1e-9).map_err(|e| format!("{model} {k}: {e}"))?;
            ensure!(ok, "{model} pair {k}: product of pure states is not pure");
        }
    }
    // Pure two-qubit states: a pure marginal occurs exactly for products,
    // and then the state equals the product of its marginals.
    let c = CompositeSystem::new(CompositeModel::Hilbert, qubit.clone(), qubit).unwrap();
    let q = SimpleFactor::complex_herm(2).unwrap();
    let (mut products, mut worst) = (0, 0.0f64);
    for k in 0..50 {
        let product = k % 2 == 0;
        let m = if product {
            kron(&outer(&q.random_vector(&mut rng)), &outer(&q.random_vector(&mut rng)))
        } else {
            outer(&SimpleFactor::complex_herm(4).unwrap().random_vector(&mut rng))
        };
        let w = Element::new(c.cone().hilbert_coords(&m).unwrap());
        let (wa, wb) = (c.marginal(&w, Side::A).unwrap(), c.marginal(&w, Side::B).unwrap());
        let pure_marginal = is_extremal_ray(&c.a.cone, &wa, 1e-9).unwrap();
        ensure!(pure_marginal == product, "sample {k}: marginal purity {pure_marginal}, product {product}");
        if pure_marginal {
            let d = (c.product_state(&wa, &wb).unwrap().coords - &w.coords).norm();
            ensure!(d < 1e-9, "sample {k}: distance to product {d:.3e}");
            worst = worst.max(d);
            products += 1;
        }
    }
    Ok(format!(
        "50 pure product pairs stay pure under {} models; {products}/50 spot samples had pure marginals, all products (worst {worst:.1e})",
        models.len()
    ))
}

fn identities() -> Outcome {
    let families = [
        SimpleFactor::real_sym(3),
        SimpleFactor::complex_herm(3),
        SimpleFactor::complex_herm(4),
        SimpleFactor::quat_herm(2),
        SimpleFactor::quat_herm(3),
        SimpleFactor::spin(8),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let (mut jw, mut ew) = (0.0f64, 0.0f64);
    for f in families {
        let a = JordanAlgebra::simple(f.unwrap());
        for _ in 0..500 {
            let (x, y, z) = (a.random_element(&mut rng), a.random_element(&mut rng), a.random_element(&mut rng));
            let p = |u: &Element, v: &Element| a.jordan_product(u, v).unwrap();
            let xx = p(&x, &x);
            let jordan = (p(&xx, &p(&y, &x)).coords - p(&p(&xx, &y), &x).coords).norm() / (1.0 + x.norm().powi(3) * y.norm());
            let euclid = (a.trace_inner(&p(&x, &y), &z).unwrap() - a.trace_inner(&y, &p(&x, &z)).unwrap()).abs()
                / (1.0 + x.norm() * y.norm() * z.norm());
            ensure!(jordan < 1e-10, "Jordan identity defect {jordan:.3e}");
            ensure!(euclid < 1e-10, "Euclidean identity defect {euclid:.3e}");
            jw = jw.max(jordan);
            ew = ew.max(euclid);
        }
    }
    Ok(format!("6 families x 500 triples; worst relative defects {jw:.1e} (Jordan), {ew:.1e} (Euclidean)"))
}

fn main() {
    let reg = builtin_fixtures();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("trace-form self-duality and homogeneity of EJA fixtures", Box::new(|| koecher_vinberg(&reg))),
        ("shared-corner cone: homogeneous, not pure transitive", Box::new(|| shared_corner(&reg))),
        ("pure transitivity of direct sums", Box::new(|| pure_transitivity_dichotomy(&reg))),
        ("continuous pure transitivity", Box::new(|| continuous_dichotomy(&reg))),
        ("square cone: weakly but not SPD self-dual", Box::new(|| square_separation(&reg))),
        ("classification traces", Box::new(classification)),
        ("steering", Box::new(|| steering(&reg))),
        ("purity of products and pure marginals", Box::new(|| purity(&reg))),
        ("Jordan and Euclidean identities", Box::new(identities)),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match result {
            Ok(detail) => println!("criterion {}: pass  {title}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {title}: {why}", i + 1);
            }
        }
    }
    println!("\n{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
