use num_complex::Complex64;
use proptest::prelude::*;
use tentspace::{AnalyticFunction, DiskPoint};

fn point(max_r: f64) -> impl Strategy<Value = DiskPoint> {
    (0.0..max_r, 0.0..std::f64::consts::TAU)
        .prop_map(|(r, t)| DiskPoint::from_polar(r, t).unwrap())
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| Complex64::new(a, b))
}

fn family() -> impl Strategy<Value = AnalyticFunction> {
    let exponent = prop_oneof![Just(1.0), 0.2..3.0f64];
    prop_oneof![
        prop::collection::vec(complex(), 1..8)
            .prop_map(|c| AnalyticFunction::polynomial(c).unwrap()),
        (point(0.95), exponent.clone()).prop_map(|(b, alpha)| AnalyticFunction::KernelPrimitive { b, alpha }),
        point(0.95).prop_map(|b| AnalyticFunction::LogKernel { b }),
        point(0.95).prop_map(|w| AnalyticFunction::NormalizedLogSquare { w }),
        (point(0.95), 0.1..2.5f64, complex())
            .prop_map(|(b, gamma, scale)| AnalyticFunction::PowerKernel { b, gamma, scale }),
        (point(0.95), exponent.clone()).prop_map(|(a, alpha)| AnalyticFunction::HFamily { a, alpha }),
        (point(0.95), exponent).prop_map(|(a, alpha)| AnalyticFunction::PsiFamily { a, alpha }),
    ]
}

/// Central difference along the real direction, with the step scaled to the
/// distance from the nearest pole.
fn finite_difference(f: &AnalyticFunction, z: DiskPoint) -> Complex64 {
    let h = 1e-5 * (1.0 - z.norm()).max(1e-3);
    let at = |dz: f64| f.eval(DiskPoint::from_complex(z.z() + dz).unwrap());
    (at(h) - at(-h)) / (2.0 * h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn derivative_matches_finite_difference(f in family(), z in point(0.9)) {
        let exact = f.deriv_at(z);
        let fd = finite_difference(&f, z);
        prop_assert!((fd - exact).norm() <= 1e-6 * exact.norm().max(1e-3), "{f}: {fd} vs {exact}");
        prop_assert!((f.deriv().eval(z) - exact).norm() <= 1e-12 * exact.norm().max(1.0));
    }

    #[test]
    fn scaling_and_sums_are_pointwise(f in family(), g in family(), c in complex(), z in point(0.9)) {
        let scaled = f.clone().scaled(c);
        prop_assert_eq!(scaled.eval(z), c * f.eval(z));
        let sum = AnalyticFunction::Sum { terms: vec![f.clone(), g.clone()] };
        let expect = f.eval(z) + g.eval(z);
        prop_assert!((sum.eval(z) - expect).norm() <= 1e-14 * expect.norm().max(1.0));
    }

    #[test]
    fn text_form_round_trips(f in family()) {
        let parsed: AnalyticFunction = f.to_string().parse().unwrap();
        let z = DiskPoint::new(0.3, -0.2).unwrap();
        prop_assert!((parsed.eval(z) - f.eval(z)).norm() <= 1e-9 * f.eval(z).norm().max(1.0));
    }
}
