use std::f64::consts::PI;

use approx::assert_relative_eq;
use cone_moduli::quadrature::tanh_sinh;
use cone_moduli::{load, lobachevsky, nu, tetra_volume, volume_report, ShapeAssignment};
use num_complex::Complex64;
use proptest::prelude::*;

/// `-∫₀^θ log|2 sin t| dt` by quadrature.
fn lobachevsky_by_quadrature(theta: f64) -> f64 {
    -tanh_sinh(|t| (2.0 * t.sin()).abs().ln(), 0.0, theta, 1e-14).value
}

#[test]
fn lobachevsky_identities_on_grid() {
    for k in 0..1000 {
        let x = -4.0 + 8.0 * k as f64 / 999.0;
        let l = lobachevsky(x);
        assert!((lobachevsky(-x) + l).abs() < 1e-12, "odd at {x}");
        assert!((lobachevsky(x + PI) - l).abs() < 1e-12, "periodic at {x}");
        let dup = 2.0 * l + 2.0 * lobachevsky(x + PI / 2.0);
        assert!((lobachevsky(2.0 * x) - dup).abs() < 1e-12, "duplication at {x}");
    }
}

#[test]
fn lobachevsky_matches_quadrature() {
    for theta in [0.1, 0.5, PI / 6.0, PI / 4.0, PI / 3.0, 1.2, 1.5] {
        assert_relative_eq!(lobachevsky(theta), lobachevsky_by_quadrature(theta), epsilon = 1e-12);
    }
}

#[test]
fn regular_ideal_tetrahedron_volume() {
    let regular = 3.0 * lobachevsky_by_quadrature(PI / 3.0);
    assert_relative_eq!(nu(), regular, epsilon = 1e-12);
    let w = Complex64::new(0.5, 3f64.sqrt() / 2.0);
    assert_relative_eq!(tetra_volume(w).unwrap(), regular, epsilon = 1e-12);
}

#[test]
fn complete_volumes_of_bundled_census() {
    let fig8 = load("figure8").unwrap().assemble();
    let w = Complex64::new(0.5, 3f64.sqrt() / 2.0);
    let r = volume_report(&fig8, &ShapeAssignment::uniform(2, w)).unwrap();
    assert_relative_eq!(r.total, 6.0 * lobachevsky_by_quadrature(PI / 3.0), epsilon = 1e-11);
    assert!(r.bound_satisfied);

    let wh = load("whitehead").unwrap().assemble();
    let r = volume_report(&wh, &ShapeAssignment::new(vec![Complex64::new(1.0, 1.0), Complex64::new(0.5, 0.5), Complex64::new(0.5, 0.5), Complex64::new(0.5, 0.5)])).unwrap();
    assert_relative_eq!(r.total, 8.0 * lobachevsky_by_quadrature(PI / 4.0), epsilon = 1e-11);
    assert!(r.bound_satisfied);
}

fn shape() -> impl Strategy<Value = Complex64> {
    (-3.0f64..3.0, 0.01f64..3.0)
        .prop_map(|(re, im)| Complex64::new(re, im))
        .prop_filter("away from 0 and 1", |z| z.norm() > 1e-3 && (z - 1.0).norm() > 1e-3)
}

proptest! {
    #[test]
    fn volume_flips_sign_under_conjugation(z in shape()) {
        let v = tetra_volume(z).unwrap();
        prop_assert!(v > 0.0);
        prop_assert!((tetra_volume(z.conj()).unwrap() + v).abs() < 1e-12);
    }

    #[test]
    fn volume_is_invariant_under_shape_rotation(z in shape()) {
        let v = tetra_volume(z).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let z1 = one / (one - z);
        let z2 = one - one / z;
        prop_assert!((tetra_volume(z1).unwrap() - v).abs() < 1e-11);
        prop_assert!((tetra_volume(z2).unwrap() - v).abs() < 1e-11);
    }

    #[test]
    fn volume_is_bounded_by_regular(z in shape()) {
        prop_assert!(tetra_volume(z).unwrap() <= nu() + 1e-12);
    }
}
