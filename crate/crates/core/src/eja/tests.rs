use super::*;
use crate::linalg::{CMat, C64};
use crate::ovs::{is_order_isomorphism, PositiveMap, System};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn alg(f: SimpleFactor) -> JordanAlgebra {
    JordanAlgebra::simple(f)
}

fn herm(f: &SimpleFactor, entries: &[[(f64, f64); 2]; 2]) -> Element {
    let m = CMat::from_fn(2, 2, |r, c| C64::new(entries[r][c].0, entries[r][c].1));
    Element::new(f.from_matrix(&m))
}

fn close(a: &Element, b: &Element, tol: f64) -> bool {
    (&a.coords - &b.coords).norm() < tol
}

#[test]
fn diagonal_product() {
    let a = alg(SimpleFactor::real_sym(2).unwrap());
    let x = Element::from_slice(&[1.0, 2.0, 0.0]);
    let y = Element::from_slice(&[3.0, 4.0, 0.0]);
    assert!(close(&a.jordan_product(&x, &y).unwrap(), &Element::from_slice(&[3.0, 8.0, 0.0]), 1e-14));
}

#[test]
fn spin_unit_is_neutral() {
    let a = alg(SimpleFactor::spin(4).unwrap());
    let b = Element::from_slice(&[0.0, 1.0, 0.0, 0.0]);
    assert!(close(&a.jordan_product(&a.unit(), &b).unwrap(), &b, 1e-14));
}

#[test]
fn anticommuting_paulis() {
    let f = SimpleFactor::complex_herm(2).unwrap();
    let x = herm(&f, &[[(0.0, 0.0), (1.0, 0.0)], [(1.0, 0.0), (0.0, 0.0)]]);
    let z = herm(&f, &[[(1.0, 0.0), (0.0, 0.0)], [(0.0, 0.0), (-1.0, 0.0)]]);
    let p = alg(f).jordan_product(&x, &z).unwrap();
    assert!(p.norm() < 1e-14);
}

#[test]
fn spectral_examples() {
    let f = SimpleFactor::complex_herm(2).unwrap();
    let a = alg(f.clone());
    let x = herm(&f, &[[(3.0, 0.0), (0.0, 0.0)], [(0.0, 0.0), (-1.0, 0.0)]]);
    let s = a.spectral(&x).unwrap();
    assert_eq!(s.eigenvalues.len(), 2);
    assert!((s.eigenvalues[0] - 3.0).abs() < 1e-12 && (s.eigenvalues[1] + 1.0).abs() < 1e-12);
    assert!(close(&s.idempotents[0], &Element::from_slice(&[1.0, 0.0, 0.0, 0.0]), 1e-12));

    let spin = alg(SimpleFactor::spin(4).unwrap());
    let s = spin.spectral(&Element::from_slice(&[2.0, 1.0, 0.0, 0.0])).unwrap();
    assert_eq!(s.eigenvalues, vec![3.0, 1.0]);
    assert!(close(&s.idempotents[0], &Element::from_slice(&[0.5, 0.5, 0.0, 0.0]), 1e-15));
    assert!(close(&s.idempotents[1], &Element::from_slice(&[0.5, -0.5, 0.0, 0.0]), 1e-15));
    for c in &s.idempotents {
        assert!(close(&spin.jordan_product(c, c).unwrap(), c, 1e-15));
    }

    let q = alg(SimpleFactor::quat_herm(2).unwrap());
    let s = q.spectral(&q.unit()).unwrap();
    assert!(s.eigenvalues.iter().all(|l| (l - 1.0).abs() < 1e-12));
}

#[test]
fn spectral_idempotents_are_orthogonal() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for f in families() {
        let a = alg(f);
        let x = a.random_element(&mut rng);
        let s = a.spectral(&x).unwrap();
        assert!(close(&s.reconstruct(a.dim()), &x, 1e-9));
        let mut sum = Element::zeros(a.dim());
        for (i, ci) in s.idempotents.iter().enumerate() {
            sum = &sum + ci;
            for (j, cj) in s.idempotents.iter().enumerate() {
                let p = a.jordan_product(ci, cj).unwrap();
                let want = if i == j { ci.clone() } else { Element::zeros(a.dim()) };
                assert!(close(&p, &want, 1e-9));
            }
        }
        assert!(close(&sum, &a.unit(), 1e-9));
    }
}

#[test]
fn quadratic_representation_examples() {
    let f = SimpleFactor::complex_herm(2).unwrap();
    let a = alg(f.clone());
    let d = herm(&f, &[[(1.0, 0.0), (0.0, 0.0)], [(0.0, 0.0), (2.0, 0.0)]]);
    let ones = herm(&f, &[[(1.0, 0.0), (1.0, 0.0)], [(1.0, 0.0), (1.0, 0.0)]]);
    let u = a.quadratic_rep_matrix(&d).unwrap();
    let want = herm(&f, &[[(1.0, 0.0), (2.0, 0.0)], [(2.0, 0.0), (4.0, 0.0)]]);
    assert!(close(&Element::new(&u * &ones.coords), &want, 1e-12));

    for f in families() {
        let a = alg(f);
        let id = a.quadratic_rep_matrix(&a.unit()).unwrap();
        assert!((id - DMatrix::<f64>::identity(a.dim(), a.dim())).norm() < 1e-12);
    }

    let spin = alg(SimpleFactor::spin(3).unwrap());
    let x = Element::from_slice(&[1.0, 1.0, 0.0]);
    let ux = spin.quadratic_rep_matrix(&x).unwrap();
    assert!(close(&Element::new(&ux * &spin.unit().coords), &Element::from_slice(&[2.0, 2.0, 0.0]), 1e-14));
}

#[test]
fn quadratic_representation_is_order_isomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for f in families() {
        let a = alg(f);
        let sys = Arc::new(System::jordan(a.clone(), "x"));
        let x = a.random_interior(&mut rng);
        let u = a.quadratic_rep_matrix(&x).unwrap();
        assert!(close(&Element::new(&u * &a.unit().coords), &a.jordan_product(&x, &x).unwrap(), 1e-10));
        let map = PositiveMap::endo(u, sys).unwrap();
        assert!(is_order_isomorphism(&map, 1e-8).unwrap().holds());
    }
}

#[test]
fn trace_inner_examples() {
    let f = SimpleFactor::complex_herm(2).unwrap();
    let a = alg(f.clone());
    let p = herm(&f, &[[(1.0, 0.0), (0.0, 0.0)], [(0.0, 0.0), (0.0, 0.0)]]);
    assert!((a.trace_inner(&p, &p).unwrap() - 1.0).abs() < 1e-15);
    for f in families() {
        let a = alg(f.clone());
        assert!((a.trace_inner(&a.unit(), &a.unit()).unwrap() - f.rank as f64).abs() < 1e-12);
    }
    let spin = alg(SimpleFactor::spin(3).unwrap());
    let v = spin.trace_inner(&Element::from_slice(&[1.0, 0.0, 0.0]), &Element::from_slice(&[0.0, 1.0, 0.0])).unwrap();
    assert_eq!(v, 0.0);
}

#[test]
fn gram_matches_trace_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for f in families() {
        let a = alg(f);
        let g = a.gram();
        let (x, y) = (a.random_element(&mut rng), a.random_element(&mut rng));
        let direct = a.trace_inner(&x, &y).unwrap();
        assert!((x.coords.dot(&(&g * &y.coords)) - direct).abs() < 1e-10 * (1.0 + direct.abs()));
    }
}

#[test]
fn central_decomposition_examples() {
    let c2 = SimpleFactor::complex_herm(2).unwrap();
    let r2 = SimpleFactor::real_sym(2).unwrap();
    let two = JordanAlgebra::new(vec![c2.clone(), c2.clone()]).unwrap();
    let d = two.central_decomposition().unwrap();
    assert_eq!(d.len(), 2);
    assert!(d.iter().all(|s| s.factor.rank == 2 && s.factor.dim == 4));
    let mixed = JordanAlgebra::new(vec![c2, r2]).unwrap();
    let dims: Vec<usize> = mixed.central_decomposition().unwrap().iter().map(|s| s.factor.dim).collect();
    assert_eq!(dims, vec![4, 3]);
    assert_eq!(alg(SimpleFactor::complex_herm(3).unwrap()).central_decomposition().unwrap().len(), 1);
}

#[test]
fn canonical_frames_are_dual() {
    for f in families() {
        let a = alg(f.clone());
        let fr = a.canonical_frame().unwrap();
        assert_eq!(fr.states.len(), f.rank);
        for (i, w) in fr.states.iter().enumerate() {
            for (j, e) in fr.effects.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((e.eval(w) - want).abs() < 1e-12, "{:?} {i} {j}", f.family);
            }
        }
    }
    let spin = alg(SimpleFactor::spin(3).unwrap());
    let fr = spin.canonical_frame().unwrap();
    assert_eq!(spin.trace_inner(&fr.states[0], &fr.states[1]).unwrap(), 0.0);
    assert!(JordanAlgebra::classical(2).unwrap().canonical_frame().is_err());
}

#[test]
fn overlap_state_has_equal_overlaps() {
    for f in families() {
        let a = alg(f.clone());
        let w = a.overlap_state().unwrap();
        let fr = a.canonical_frame().unwrap();
        let want = 1.0 / f.rank as f64;
        for e in &fr.effects {
            assert!((e.eval(&w) - want).abs() < 1e-12, "{:?}", f.family);
        }
        assert!((a.trace(&w) - 1.0).abs() < 1e-12);
        let s = a.spectral(&w).unwrap();
        assert_eq!(s.eigenvalues.iter().filter(|l| **l > 1e-9).count(), 1);
    }
}

#[test]
fn positive_elements_are_squares() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for f in families() {
        let a = alg(f);
        for _ in 0..40 {
            let x = a.random_interior(&mut rng);
            let b = a.spectral_map(&x, f64::sqrt).unwrap();
            assert!(close(&a.jordan_product(&b, &b).unwrap(), &x, 1e-9));
            assert!(a.min_eigenvalue(&x).unwrap() > 0.0);
        }
    }
}

fn families() -> Vec<SimpleFactor> {
    vec![
        SimpleFactor::real_sym(3).unwrap(),
        SimpleFactor::complex_herm(3).unwrap(),
        SimpleFactor::quat_herm(2).unwrap(),
        SimpleFactor::quat_herm(3).unwrap(),
        SimpleFactor::spin(5).unwrap(),
    ]
}
