mod common;

use common::*;
use conelab_core::eja::{JordanAlgebra, SimpleFactor};
use conelab_core::ovs::{default_probes, face_dimension, Element, System};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn factor(k: usize) -> SimpleFactor {
    match k % 5 {
        0 => SimpleFactor::real_sym(3).unwrap(),
        1 => SimpleFactor::complex_herm(3).unwrap(),
        2 => SimpleFactor::quat_herm(2).unwrap(),
        3 => SimpleFactor::spin(6).unwrap(),
        _ => SimpleFactor::complex_herm(2).unwrap(),
    }
}

fn systems() -> Vec<Arc<System>> {
    vec![qubit(), square(), pentagon(), shared_corner(), simplex(3), jordan(vec![factor(2)], "q2"), jordan(vec![factor(3)], "spin6")]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jordan_and_euclidean_identities(k in 0usize..5, seed in any::<u64>()) {
        let a = JordanAlgebra::simple(factor(k));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y, z) = (a.random_element(&mut rng), a.random_element(&mut rng), a.random_element(&mut rng));
        let xx = a.jordan_product(&x, &x).unwrap();
        let lhs = a.jordan_product(&xx, &a.jordan_product(&y, &x).unwrap()).unwrap();
        let rhs = a.jordan_product(&a.jordan_product(&xx, &y).unwrap(), &x).unwrap();
        let scale = 1.0 + x.norm().powi(3) * y.norm();
        prop_assert!((lhs.coords - rhs.coords).norm() < 1e-10 * scale);
        let l = a.trace_inner(&a.jordan_product(&x, &y).unwrap(), &z).unwrap();
        let r = a.trace_inner(&y, &a.jordan_product(&x, &z).unwrap()).unwrap();
        prop_assert!((l - r).abs() < 1e-10 * (1.0 + x.norm() * y.norm() * z.norm()));
    }

    #[test]
    fn membership_is_scale_invariant(idx in 0usize..7, seed in any::<u64>(), scale in 1e-3f64..1e3) {
        let sys = &systems()[idx];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = Element::new(nalgebra::DVector::from_fn(sys.dim(), |_, _| rand::Rng::random_range(&mut rng, -1.0..1.0)));
        let a = sys.cone.membership(&x, 0.0).unwrap();
        let b = sys.cone.membership(&x.scale(scale), 0.0).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn quadratic_maps_preserve_the_cone(k in 0usize..5, seed in any::<u64>()) {
        let a = JordanAlgebra::simple(factor(k));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = a.random_interior(&mut rng);
        let x = a.random_pure(&mut rng);
        let u = a.quadratic_rep_matrix(&p).unwrap();
        let y = Element::new(&u * &x.coords);
        prop_assert!(a.min_eigenvalue(&y).unwrap() > -1e-9 * y.norm());
    }
}

#[test]
fn face_dimension_is_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for sys in systems() {
        let samples = sys.cone.extremal_samples(6, &mut rng);
        let probes = default_probes(sys.dim());
        for (i, y) in samples.iter().enumerate() {
            let y = sys.normalize(y).unwrap();
            let other = sys.normalize(&samples[(i + 1) % samples.len()]).unwrap();
            let x = &y + &other;
            let fy = face_dimension(&sys.cone, &y, probes, 1e-9).unwrap();
            let fx = face_dimension(&sys.cone, &x, probes, 1e-9).unwrap();
            assert!(fy <= fx, "{}: {fy} > {fx}", sys.label);
        }
    }
}
