use tentspace_web::{density, lattice, profile};

#[test]
fn lattice_is_flat_pairs_starting_at_the_origin() {
    let pts = lattice(0.5, 0.6).unwrap();
    assert_eq!(pts.len() % 2, 0);
    assert_eq!(&pts[..2], &[0.0, 0.0]);
    assert!(pts.chunks(2).all(|p| p[0].hypot(p[1]) < 1.0));
    assert!(lattice(0.5, 1.0).is_err());
}

#[test]
fn area_profile_tends_to_two() {
    let v = profile("power:2", 0.0, 2.0, 8).unwrap();
    assert_eq!(v.len(), 9);
    assert!(v.windows(2).all(|w| w[1] <= w[0]));
    assert!((v[8] - (2.0 - 2f64.powi(-8))).abs() < 1e-6, "{}", v[8]);
    assert!(profile("nope:1", 0.0, 2.0, 4).is_err());
    assert!(profile("power:2", 0.0, 2.0, 20).is_err());
}

#[test]
fn identity_density_is_one_minus_r_squared() {
    let n = 21;
    let v = density("poly:0,1", 1.0, n).unwrap();
    assert_eq!(v.len(), n * n);
    assert!(v[0].is_nan());
    let center = v[(n / 2) * n + n / 2];
    assert!((center - 1.0).abs() < 1e-15);
    let h = 2.0 / (n - 1) as f64;
    let (x, y) = (-1.0 + 13.0 * h, 1.0 - 7.0 * h);
    assert!((v[7 * n + 13] - (1.0 - x * x - y * y)).abs() < 1e-12);
    assert!(density("poly:0,1", 1.0, 1).is_err());
}
