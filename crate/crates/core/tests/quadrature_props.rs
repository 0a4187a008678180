use num_complex::Complex64;
use proptest::prelude::*;
use tentspace::disk::Arc;
use tentspace::quadrature::{integrate_disk, RadialWeight, Region, WeightedIntegral};
use tentspace::{CarlesonBox, QuadratureSpec};

fn kernel(a: Complex64, c: f64) -> impl Fn(Complex64) -> f64 + Sync {
    move |z: Complex64| (Complex64::new(1.0, 0.0) - a.conj() * z).norm().powf(-c)
}

fn center() -> impl Strategy<Value = Complex64> {
    (0.0..0.99f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn linear_in_the_integrand(a in center(), c in 0.5..3.0f64, k in -3.0..3.0f64, q in -0.5..2.0f64) {
        let spec = QuadratureSpec::default();
        let f = kernel(a, c);
        let g = |z: Complex64| 1.0 + z.re * z.re;
        // the combined integrand carries the same singular structure as f
        let f1 = integrate_disk(&f, q, &spec).unwrap();
        let g1 = integrate_disk(g, q, &spec).unwrap();
        let h1 = integrate_disk(|z| k * f(z) + g(z), q, &spec).unwrap();
        let expect = k * f1.value + g1.value;
        let tol = k.abs() * f1.error_estimate + g1.error_estimate + h1.error_estimate
            + 1e-12 * (k.abs() * f1.value + g1.value);
        prop_assert!((h1.value - expect).abs() <= tol.max(1e-13), "{} vs {expect}", h1.value);
    }

    #[test]
    fn box_halves_add_up(center in 0.0..1.0f64, k in 0u32..8, a in center(), c in 0.5..3.0f64) {
        let spec = QuadratureSpec::default();
        let arc = Arc::new(center, (-(k as f64)).exp2()).unwrap();
        let whole = Region::carleson_box(&CarlesonBox::new(arc));
        let mid = 0.5 * (whole.theta0 + whole.theta1);
        let left = Region { theta1: mid, ..whole };
        let right = Region { theta0: mid, ..whole };
        let foci = [a];
        let run = |r: Region| {
            WeightedIntegral::new(RadialWeight::Power { q: 0.0 }, r)
                .with_foci(&foci)
                .run(kernel(a, c), &spec)
                .unwrap()
        };
        let (w, l, r) = (run(whole), run(left), run(right));
        let err = 2.0 * (w.error_estimate + l.error_estimate + r.error_estimate);
        prop_assert!(
            (l.value + r.value - w.value).abs() <= err + 1e-12 * w.value,
            "{} + {} vs {}", l.value, r.value, w.value
        );
    }

    #[test]
    fn nonnegative_integrands_give_nonnegative_values(a in center(), c in 0.0..4.0f64, q in -0.9..3.0f64) {
        let spec = QuadratureSpec::default().with_nodes(32, 64);
        let v = integrate_disk(kernel(a, c), q, &spec).unwrap();
        prop_assert!(v.value >= 0.0);
        prop_assert!(v.error_estimate >= 0.0);
    }
}

#[test]
fn refinement_reduces_error() {
    for beta in [-0.5, 0.5, 2.0] {
        let coarse = QuadratureSpec::default().with_nodes(32, 64);
        let fine = QuadratureSpec::default().with_nodes(64, 128);
        let a = Complex64::new(0.0, 0.9);
        let e1 = integrate_disk(kernel(a, 2.5), beta, &coarse).unwrap();
        let e2 = integrate_disk(kernel(a, 2.5), beta, &fine).unwrap();
        assert!(e2.error_estimate <= e1.error_estimate, "beta {beta}: {e1:?} {e2:?}");
    }
}
