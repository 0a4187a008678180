use proptest::prelude::*;
use tentspace::carleson::{carleson_constant, log_carleson_constant, two_kernel_integral};
use tentspace::measures::{restrict, Atom};
use tentspace::{DiskPoint, MeasureSpec, QuadratureSpec};

fn point(max_r: f64) -> impl Strategy<Value = DiskPoint> {
    (0.0..max_r, 0.0..std::f64::consts::TAU)
        .prop_map(|(r, t)| DiskPoint::from_polar(r, t).unwrap())
}

fn measure() -> impl Strategy<Value = MeasureSpec> {
    prop_oneof![
        (1.05..3.0f64).prop_map(|sigma| MeasureSpec::PowerDensity { sigma }),
        (1.05..3.0f64, 0.0..3.0f64).prop_map(|(sigma, tau)| MeasureSpec::LogPowerDensity { sigma, tau }),
        prop::collection::vec((point(0.99), 0.01..2.0f64), 1..5).prop_map(|a| MeasureSpec::Atomic {
            atoms: a.into_iter().map(|(point, mass)| Atom { point, mass }).collect(),
        }),
    ]
}

fn with_atom(mu: &MeasureSpec, atom: Atom) -> MeasureSpec {
    match mu {
        MeasureSpec::Atomic { atoms } => {
            let mut atoms = atoms.clone();
            atoms.push(atom);
            MeasureSpec::Atomic { atoms }
        }
        _ => unreachable!(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn log_constant_at_zero_is_the_box_constant(mu in measure(), s in 0.5..3.0f64, d in 2u32..9) {
        let spec = QuadratureSpec::default();
        let a = carleson_constant(&mu, s, d, &spec).unwrap();
        let b = log_carleson_constant(&mu, 0.0, s, d, &spec).unwrap();
        prop_assert_eq!(a.value, b.value);
    }

    #[test]
    fn adding_an_atom_never_lowers_the_constant(
        atoms in prop::collection::vec((point(0.99), 0.01..2.0f64), 1..5),
        extra in point(0.999),
        mass in 0.0..2.0f64,
        s in 0.5..3.0f64,
    ) {
        let spec = QuadratureSpec::default();
        let mu = MeasureSpec::Atomic {
            atoms: atoms.into_iter().map(|(point, mass)| Atom { point, mass }).collect(),
        };
        let more = with_atom(&mu, Atom { point: extra, mass });
        let a = carleson_constant(&mu, s, 8, &spec).unwrap().value;
        let b = carleson_constant(&more, s, 8, &spec).unwrap().value;
        prop_assert!(b >= a);
    }

    #[test]
    fn restriction_never_raises_the_constant(mu in measure(), r in 0.05..0.999f64, s in 0.5..3.0f64) {
        let spec = QuadratureSpec::default();
        let a = carleson_constant(&mu, s, 8, &spec).unwrap();
        let b = carleson_constant(&restrict(&mu, r).unwrap(), s, 8, &spec).unwrap();
        prop_assert!(b.value <= a.value * (1.0 + 1e-9) + 1e-15, "{} > {}", b.value, a.value);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn two_kernel_integral_is_symmetric(a in point(0.95), b in point(0.95), s in 0.0..2.0f64, dr in 0.1..3.0f64) {
        let r = 1.0 + s / 2.0 + dr;
        let spec = QuadratureSpec::default();
        let ab = two_kernel_integral(a, b, s, r, r, &spec).unwrap();
        let ba = two_kernel_integral(b, a, s, r, r, &spec).unwrap();
        prop_assert!((ab.value - ba.value).abs() <= 1e-7 * ab.value, "{} vs {}", ab.value, ba.value);
    }
}
