use cone_moduli::mobius::DEFAULT_CLASSIFY_TOL;
use cone_moduli::{IsometryClass, MobiusTransform};
use num_complex::Complex64;
use proptest::prelude::*;

fn entry() -> impl Strategy<Value = Complex64> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn transform() -> impl Strategy<Value = MobiusTransform> {
    (entry(), entry(), entry(), entry())
        .prop_filter("well-conditioned determinant", |(a, b, c, d)| (a * d - b * c).norm() > 0.1)
        .prop_map(|(a, b, c, d)| MobiusTransform::new(a, b, c, d).unwrap())
}

fn same_kind(x: IsometryClass, y: IsometryClass) -> bool {
    std::mem::discriminant(&x) == std::mem::discriminant(&y)
}

proptest! {
    #[test]
    fn classification_is_conjugation_invariant(a in transform(), p in transform()) {
        let tr = a.trace();
        // Stay clear of the parabolic boundary, where rounding decides.
        prop_assume!((tr * tr - 4.0).norm() > 1e-4);
        prop_assume!(tr.im.abs() > 1e-6 || tr.re.abs() < 2.0 - 1e-6 || tr.re.abs() > 2.0 + 1e-6);
        let b = a.conjugate_by(&p);
        let (ca, cb) = (a.classify(DEFAULT_CLASSIFY_TOL), b.classify(DEFAULT_CLASSIFY_TOL));
        prop_assert!(same_kind(ca, cb), "{ca:?} vs {cb:?}");
        prop_assert!((a.trace() - b.trace()).norm() < 1e-8 * (1.0 + tr.norm()));
        match (ca, cb) {
            (IsometryClass::Elliptic { rotation_angle: x }, IsometryClass::Elliptic { rotation_angle: y }) => {
                prop_assert!((x - y).abs() < 1e-6);
            }
            (
                IsometryClass::Loxodromic { translation_length: x, .. },
                IsometryClass::Loxodromic { translation_length: y, .. },
            ) => prop_assert!((x - y).abs() < 1e-6),
            _ => {}
        }
    }

    #[test]
    fn determinant_stays_one(a in transform(), b in transform()) {
        let c = a * b;
        prop_assert!((c.det() - 1.0).norm() < 1e-10);
        prop_assert!(c.trace().re >= 0.0);
        prop_assert!((a * a.inverse()).is_identity(1e-9));
    }

    #[test]
    fn rotation_angle_round_trips(theta in 0.01f64..std::f64::consts::PI, p in transform()) {
        let r = MobiusTransform::rotation(theta).conjugate_by(&p);
        match r.classify(DEFAULT_CLASSIFY_TOL) {
            IsometryClass::Elliptic { rotation_angle } => prop_assert!((rotation_angle - theta).abs() < 1e-6),
            other => prop_assert!(false, "{other:?}"),
        }
    }
}
