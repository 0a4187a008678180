use num_complex::Complex64;
use proptest::prelude::*;
use tentspace::disk::{
    bergman_distance, build_r_lattice, covering_multiplicity, dyadic_arcs, dyadic_level,
    mobius_deriv, mobius_map, one_minus_phi_sq, pseudo_distance,
};
use tentspace::DiskPoint;

fn point(max_r: f64) -> impl Strategy<Value = DiskPoint> {
    (0.0..max_r, 0.0..std::f64::consts::TAU)
        .prop_map(|(r, t)| DiskPoint::from_polar(r, t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn mobius_is_an_involution(a in point(0.999), z in point(0.999)) {
        let back = mobius_map(a, mobius_map(a, z));
        prop_assert!((back.z() - z.z()).norm() <= 1e-12);
    }

    #[test]
    fn one_minus_phi_sq_is_symmetric(a in point(0.999), z in point(0.999)) {
        prop_assert_eq!(one_minus_phi_sq(a, z), one_minus_phi_sq(z, a));
    }

    #[test]
    fn one_minus_phi_sq_matches_derivative(a in point(0.99), z in point(0.99)) {
        let lhs = one_minus_phi_sq(a, z);
        let rhs = z.defect() * mobius_deriv(a, z).norm();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.max(1e-300).max(1.0));
    }

    #[test]
    fn bergman_distance_is_a_metric(z in point(0.99), w in point(0.99), v in point(0.99)) {
        let d = bergman_distance;
        prop_assert!((d(z, w) - d(w, z)).abs() <= 1e-12);
        prop_assert!(d(z, v) <= d(z, w) + d(w, v) + 1e-12);
        prop_assert!(pseudo_distance(z, w) < 1.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn derivative_matches_finite_difference(a in point(0.95), z in point(0.95)) {
        let h = 1e-5;
        let step = |dz: Complex64| DiskPoint::from_complex(z.z() + dz).unwrap();
        let fd = (mobius_map(a, step(Complex64::new(h, 0.0))).z()
            - mobius_map(a, step(Complex64::new(-h, 0.0))).z())
            / (2.0 * h);
        let exact = mobius_deriv(a, z);
        prop_assert!((fd - exact).norm() <= 1e-6 * exact.norm(), "{fd} vs {exact}");
    }

    #[test]
    fn every_angle_is_covered_at_every_level(t in 0.0f64..1.0, k in 0u32..12) {
        let arcs = dyadic_level(k);
        prop_assert!(arcs.iter().all(|a| a.length == (-(k as f64)).exp2()));
        prop_assert!(arcs.iter().any(|a| a.contains_turn(t)));
    }
}

#[test]
fn dyadic_family_size() {
    for d in 0..10 {
        assert_eq!(dyadic_arcs(d).unwrap().len(), (1usize << (d + 2)) - 3);
    }
    assert!(dyadic_arcs(25).is_err());
}

#[test]
fn lattice_separation_and_covering() {
    let r = 0.6;
    let cap = 0.9;
    let lattice = build_r_lattice(r, cap).unwrap();
    for (i, a) in lattice.iter().enumerate() {
        for b in &lattice[..i] {
            assert!(bergman_distance(*a, *b) >= 0.5 * r - 1e-12);
        }
    }
    let probes: Vec<DiskPoint> = (0..40)
        .flat_map(|i| {
            (0..16).map(move |j| {
                DiskPoint::from_polar(cap * i as f64 / 40.0, 0.37 + j as f64 * 0.39).unwrap()
            })
        })
        .collect();
    for z in &probes {
        assert!(lattice.iter().any(|a| bergman_distance(*a, *z) <= r), "{z:?} uncovered");
    }
    let m = covering_multiplicity(&lattice, r, &probes).unwrap();
    assert!((1..=64).contains(&m), "multiplicity {m}");
}
