mod common;

use common::*;
use conelab_core::eja::{matrix_of, JordanAlgebra, SimpleFactor};
use conelab_core::linalg::C64;
use conelab_core::ovs::{
    default_probes, face_dimension, is_extremal_ray, is_extremal_ray_generic, is_order_isomorphism, validate_measurement,
    Element, Functional, IsoViolation, OrderIsoVerdict, PolyhedralCone, PositiveMap, System,
};
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

#[test]
fn membership_examples() {
    let q = qubit();
    assert!(q.cone.membership(&real2(1.0, 0.0, 0.0, 0.0), 1e-12).unwrap());
    assert!(!q.cone.membership(&real2(1.0, 0.0, 0.0, -1.0), 1e-12).unwrap());
    let sq = square();
    assert!(sq.cone.membership(&Element::from_slice(&[0.0, 0.0, 1.0]), 0.0).unwrap());
    assert!(!sq.cone.membership(&Element::from_slice(&[1.5, 0.0, 1.0]), 1e-9).unwrap());
}

#[test]
fn membership_rejects_wrong_dimension_and_negative_tolerance() {
    let sq = square();
    assert!(sq.cone.membership(&Element::from_slice(&[0.0, 1.0]), 0.0).is_err());
    assert!(sq.cone.membership(&Element::from_slice(&[0.0, 0.0, 1.0]), -1.0).is_err());
}

#[test]
fn face_dimension_examples() {
    let psd = jordan(vec![SimpleFactor::real_sym(2).unwrap()], "psd2");
    let probes = default_probes(3);
    let id = psd.algebra().unwrap().unit();
    assert_eq!(face_dimension(&psd.cone, &id, probes, 1e-9).unwrap(), 3);
    assert_eq!(face_dimension(&psd.cone, &Element::from_slice(&[1.0, 0.0, 0.0]), probes, 1e-9).unwrap(), 1);

    let sc = shared_corner();
    let x = Element::from_slice(&[0.0, 1.0, 1.0, 0.0, 0.0]);
    assert_eq!(face_dimension(&sc.cone, &x, default_probes(5), 1e-9).unwrap(), 2);
    assert_eq!(face_dimension(&sc.cone, &Element::from_slice(&[1.0, 1.0, 1.0, 0.0, 0.0]), default_probes(5), 1e-9).unwrap(), 5);
}

#[test]
fn polyhedral_face_dimensions() {
    let sq = square();
    let probes = default_probes(3);
    assert_eq!(face_dimension(&sq.cone, &Element::from_slice(&[1.0, 1.0, 1.0]), probes, 1e-9).unwrap(), 1);
    assert_eq!(face_dimension(&sq.cone, &Element::from_slice(&[1.0, 0.0, 1.0]), probes, 1e-9).unwrap(), 2);
    assert_eq!(face_dimension(&sq.cone, &Element::from_slice(&[0.0, 0.0, 1.0]), probes, 1e-9).unwrap(), 3);
}

#[test]
fn extremality_examples() {
    let q = qubit();
    let plus = real2(0.5, 0.5, 0.5, 0.5);
    assert!(is_extremal_ray(&q.cone, &plus, 1e-9).unwrap());
    let s3 = simplex(3);
    assert!(!is_extremal_ray(&s3.cone, &Element::from_slice(&[1.0, 1.0, 0.0]), 1e-9).unwrap());
    assert!(is_extremal_ray(&s3.cone, &Element::from_slice(&[0.0, 2.0, 0.0]), 1e-9).unwrap());
    let sc = shared_corner();
    let (s, t) = (1.0, 2.0);
    let x = Element::from_slice(&[1.0, s * s, t * t, s, t]);
    assert!(is_extremal_ray(&sc.cone, &x, 1e-9).unwrap());
    assert!(!is_extremal_ray(&sc.cone, &Element::from_slice(&[1.0, 1.0, 1.0, 0.0, 0.0]), 1e-9).unwrap());
}

#[test]
fn extremality_fast_and_generic_paths_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for f in [SimpleFactor::real_sym(3).unwrap(), SimpleFactor::complex_herm(2).unwrap(), SimpleFactor::spin(4).unwrap()] {
        let alg = JordanAlgebra::simple(f);
        let sys = System::jordan(alg.clone(), "x");
        for _ in 0..100 {
            let x = alg.random_boundary(&mut rng);
            let fast = is_extremal_ray(&sys.cone, &x, 1e-9).unwrap();
            let slow = is_extremal_ray_generic(&sys.cone, &x, 1e-9).unwrap();
            assert_eq!(fast, slow, "{:?}", x.to_vec());
        }
    }
}

#[test]
fn measurement_examples() {
    let q = qubit();
    let e0 = effect_of(&q, &real2(1.0, 0.0, 0.0, 0.0));
    let e1 = effect_of(&q, &real2(0.0, 0.0, 0.0, 1.0));
    assert!(validate_measurement(&q, &[e0, e1], 1e-9).unwrap());
    let id = q.unit.clone();
    assert!(!validate_measurement(&q, &[id.clone(), id], 1e-9).unwrap());
    let sq = square();
    let half = Functional::from_slice(&[0.0, 0.0, 0.5]);
    assert!(validate_measurement(&sq, &[half.clone(), half], 1e-12).unwrap());
    assert!(validate_measurement(&sq, &[], 1e-9).is_err());
}

fn conjugation(u: &nalgebra::DMatrix<C64>) -> DMatrix<f64> {
    let f = qubit_factor();
    matrix_of(4, |x| f.from_matrix(&(u * f.to_matrix(x.as_slice()) * u.adjoint())))
}

#[test]
fn qubit_automorphisms_are_order_isomorphisms() {
    let q = qubit();
    let (c, s) = (0.6f64, 0.8f64);
    let u = DMatrix::from_row_slice(2, 2, &[C64::new(c, 0.0), C64::new(0.0, -s), C64::new(0.0, -s), C64::new(c, 0.0)]);
    let map = PositiveMap::endo(conjugation(&u), q.clone()).unwrap();
    assert!(map.normalized);
    assert!(is_order_isomorphism(&map, 1e-9).unwrap().holds());

    let f = qubit_factor();
    let t = matrix_of(4, |x| f.from_matrix(&f.to_matrix(x.as_slice()).transpose()));
    let map = PositiveMap::endo(t, q).unwrap();
    assert!(is_order_isomorphism(&map, 1e-9).unwrap().holds());
}

#[test]
fn shears_of_the_simplex_are_not_order_isomorphisms() {
    let s2 = simplex(2);
    for m in [[1.0, 1.0, 0.0, 1.0], [1.0, 0.0, 1.0, 1.0]] {
        let map = PositiveMap::endo(DMatrix::from_row_slice(2, 2, &m), s2.clone()).unwrap();
        match is_order_isomorphism(&map, 1e-9).unwrap() {
            OrderIsoVerdict::No { violation: IsoViolation::InverseNotPositive { image, .. }, .. } => {
                assert!(image.iter().any(|v| *v < 0.0));
            }
            other => panic!("expected an inverse violation, got {other:?}"),
        }
    }
}

#[test]
fn singular_maps_carry_their_kernel() {
    let s2 = simplex(2);
    let map = PositiveMap::endo(DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]), s2).unwrap();
    match is_order_isomorphism(&map, 1e-9).unwrap() {
        OrderIsoVerdict::No { violation: IsoViolation::Singular { kernel }, .. } => {
            let k = DVector::from_vec(kernel);
            assert!((k[0] + k[1]).abs() < 1e-9 && k.norm() > 0.5);
        }
        other => panic!("expected singular, got {other:?}"),
    }
}

#[test]
fn shared_corner_group_acts_on_the_cone() {
    use conelab_core::ovs::shared_corner::{group_element, GroupParams};
    let sc = shared_corner();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        let x = conelab_core::ovs::shared_corner::random_interior(&mut rng);
        let g = GroupParams::to_point(x.as_slice()).unwrap();
        let m = group_element(&g);
        let base = Element::new(conelab_core::ovs::shared_corner::basepoint());
        assert!((&m * &base.coords - &x).norm() < 1e-10);
        let map = PositiveMap::endo(m, sc.clone()).unwrap();
        assert!(is_order_isomorphism(&map, 1e-9).unwrap().holds());
    }
}

#[test]
fn system_rejects_units_that_vanish_on_the_cone() {
    let p = conelab_core::ovs::PolyhedralCone::from_integers(&[&[1, 0], &[0, 1]]).unwrap();
    assert!(System::polyhedral(p, Functional::from_slice(&[1.0, 0.0]), "bad").is_err());
}

#[test]
fn normalization_flag_follows_the_unit() {
    let s2: Arc<System> = simplex(2);
    let swap = PositiveMap::endo(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]), s2.clone()).unwrap();
    assert!(swap.normalized);
    let scale = PositiveMap::endo(DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]), s2).unwrap();
    assert!(!scale.normalized);
}

#[test]
fn facet_membership_agrees_with_the_lp() {
    use conelab_core::rational::{qr, Q};
    let p = PolyhedralCone::from_integers(&[&[3, 0, 1], &[1, 2, 1], &[-2, 2, 1], &[-2, -1, 1], &[1, -3, 1]]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let x: Vec<Q> = (0..3).map(|_| qr(rand::Rng::random_range(&mut rng, -40..40), 10)).collect();
        for slack in [qr(0, 1), qr(1, 10), qr(2, 1)] {
            assert_eq!(p.contains(&x, &slack), p.coefficients(&x, &slack).is_some(), "{x:?}");
        }
    }
    // Face dimensions from active facets: vertex, edge midpoint, interior.
    assert_eq!(p.face_dimension_exact(&p.generators()[0]).unwrap(), 1);
    let mid: Vec<Q> = (0..3).map(|i| &p.generators()[0][i] + &p.generators()[1][i]).collect();
    assert_eq!(p.face_dimension_exact(&mid).unwrap(), 2);
    assert_eq!(p.face_dimension_exact(&[qr(0, 1), qr(0, 1), qr(1, 1)]).unwrap(), 3);
}
