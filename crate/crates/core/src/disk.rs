//! Geometry of the unit disk: Möbius maps, the hyperbolic metric, Carleson
//! boxes over boundary arcs, dyadic arc families and r-lattices.
//!
//! Boundary angles are stored as fractions of the full turn, so the normalized
//! arc length of the whole circle is exactly 1.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Deepest dyadic level accepted by [`dyadic_arcs`].
pub const MAX_DYADIC_DEPTH: u32 = 24;

/// A point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskPoint {
    pub re: f64,
    pub im: f64,
}

impl DiskPoint {
    pub const ORIGIN: DiskPoint = DiskPoint { re: 0.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(re.is_finite() && im.is_finite()) || re * re + im * im >= 1.0 {
            return Err(Error::OutsideDisk { re, im });
        }
        Ok(Self { re, im })
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    pub fn from_polar(radius: f64, angle: f64) -> Result<Self> {
        Self::from_complex(Complex64::from_polar(radius, angle))
    }

    /// Real point `t`; panics unless `|t| < 1`. Meant for literals.
    pub fn real(t: f64) -> Self {
        Self::new(t, 0.0).expect("real disk point must satisfy |t| < 1")
    }

    /// Wraps a value known to lie in the disk up to rounding.
    pub(crate) fn assume(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }

    pub fn z(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn norm(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    /// `1 - |z|^2`.
    pub fn defect(self) -> f64 {
        1.0 - self.norm_sqr()
    }

    /// Angle as a fraction of the full turn, in `[0, 1)`.
    pub fn turn(self) -> f64 {
        let t = self.im.atan2(self.re) / TAU;
        if t < 0.0 {
            (t + 1.0).min(1.0 - f64::EPSILON)
        } else {
            t
        }
    }
}

/// A boundary arc, with center and length both measured in turns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub center: f64,
    pub length: f64,
}

impl Arc {
    pub fn new(center: f64, length: f64) -> Result<Self> {
        if !(length > 0.0 && length <= 1.0) {
            return Err(Error::InvalidArc(format!("length {length} not in (0, 1]")));
        }
        if !center.is_finite() {
            return Err(Error::InvalidArc("non-finite center".into()));
        }
        Ok(Self {
            center: center.rem_euclid(1.0),
            length,
        })
    }

    pub fn full() -> Self {
        Self {
            center: 0.0,
            length: 1.0,
        }
    }

    /// Closed membership of a boundary angle given in turns.
    pub fn contains_turn(&self, t: f64) -> bool {
        let d = (t - self.center).rem_euclid(1.0);
        d.min(1.0 - d) <= 0.5 * self.length
    }

    /// Angular extent in radians, `[start, end]` with `end - start = 2π·length`.
    pub fn radians(&self) -> (f64, f64) {
        let half = PI * self.length;
        let c = TAU * self.center;
        (c - half, c + half)
    }

    /// Dyadic level `k` for arcs of length `2^-k`.
    pub fn level(&self) -> u32 {
        (-self.length.log2()).round().max(0.0) as u32
    }

    /// The two halves of the arc.
    pub fn split(&self) -> (Arc, Arc) {
        let quarter = 0.25 * self.length;
        (
            Arc {
                center: (self.center - quarter).rem_euclid(1.0),
                length: 0.5 * self.length,
            },
            Arc {
                center: (self.center + quarter).rem_euclid(1.0),
                length: 0.5 * self.length,
            },
        )
    }

    /// The point `(1 - |I|)ζ` where `ζ` is the arc center.
    pub fn top_point(&self) -> DiskPoint {
        DiskPoint::assume(Complex64::from_polar(1.0 - self.length, TAU * self.center))
    }
}

/// The Carleson box `S(I) = {1 - |I| < |z| < 1, z/|z| ∈ I}`.
///
/// Points on the inner circle or on the radial edges count as inside; the
/// origin is never inside since `z/|z|` is undefined there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarlesonBox {
    pub arc: Arc,
}

impl CarlesonBox {
    pub fn new(arc: Arc) -> Self {
        Self { arc }
    }

    pub fn contains(&self, z: DiskPoint) -> bool {
        let r = z.norm();
        if r == 0.0 || r >= 1.0 || r < 1.0 - self.arc.length {
            return false;
        }
        self.arc.contains_turn(z.turn())
    }

    /// Upper end of the box in the variable `u = 1 - |z|^2`.
    pub fn u_extent(&self) -> f64 {
        let l = self.arc.length;
        l * (2.0 - l)
    }
}

/// Parameters `(p, α, s)` of the space `F(p, pα - 2, s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceParams {
    pub p: f64,
    pub alpha: f64,
    pub s: f64,
}

impl SpaceParams {
    pub fn new(p: f64, alpha: f64, s: f64) -> Result<Self> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(invalid(format!("p = {p} must be positive")));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(invalid(format!("alpha = {alpha} must be positive")));
        }
        if !(s >= 0.0 && s.is_finite()) {
            return Err(invalid(format!("s = {s} must be nonnegative")));
        }
        if s + p * alpha <= 1.0 {
            return Err(invalid(format!(
                "s + p·alpha = {} must exceed 1 for a nontrivial space",
                s + p * alpha
            )));
        }
        Ok(Self { p, alpha, s })
    }

    /// The weight exponent `q = pα - 2`.
    pub fn q(&self) -> f64 {
        self.p * self.alpha - 2.0
    }

    /// `s + p(α - 1)`, the Carleson exponent governing embeddings when `α ≠ 1`.
    pub fn shifted_exponent(&self) -> f64 {
        self.s + self.p * (self.alpha - 1.0)
    }
}

/// `1 - ā z`.
#[inline]
pub(crate) fn one_minus_conj_mul(a: Complex64, z: Complex64) -> Complex64 {
    Complex64::new(1.0 - (a.re * z.re + a.im * z.im), -(a.re * z.im - a.im * z.re))
}

/// `|1 - ā z|^2`, written so that swapping `a` and `z` gives the identical bits.
#[inline]
pub(crate) fn kernel_sq(a: Complex64, z: Complex64) -> f64 {
    let s = a.re * z.re + a.im * z.im;
    let t = a.re * z.im - a.im * z.re;
    (1.0 - s) * (1.0 - s) + t * t
}

/// The disk automorphism `φ_a(z) = (a - z) / (1 - ā z)`.
pub fn mobius_map(a: DiskPoint, z: DiskPoint) -> DiskPoint {
    DiskPoint::assume(mobius_c(a.z(), z.z()))
}

#[inline]
pub(crate) fn mobius_c(a: Complex64, z: Complex64) -> Complex64 {
    (a - z) / one_minus_conj_mul(a, z)
}

/// `φ_a'(z) = -(1 - |a|^2) / (1 - ā z)^2`.
pub fn mobius_deriv(a: DiskPoint, z: DiskPoint) -> Complex64 {
    mobius_deriv_c(a.z(), z.z())
}

#[inline]
pub(crate) fn mobius_deriv_c(a: Complex64, z: Complex64) -> Complex64 {
    let w = one_minus_conj_mul(a, z);
    -(1.0 - a.norm_sqr()) / (w * w)
}

/// `1 - |φ_a(z)|^2`, computed as `(1 - |z|^2)(1 - |a|^2) / |1 - ā z|^2`.
pub fn one_minus_phi_sq(a: DiskPoint, z: DiskPoint) -> f64 {
    (1.0 - z.norm_sqr()) * (1.0 - a.norm_sqr()) / kernel_sq(a.z(), z.z())
}

/// Pseudo-hyperbolic distance `|φ_z(w)|`.
pub fn pseudo_distance(z: DiskPoint, w: DiskPoint) -> f64 {
    let d = (z.z() - w.z()).norm_sqr();
    (d / kernel_sq(z.z(), w.z())).sqrt()
}

/// Hyperbolic distance `β(z, w) = ½ log((1 + ρ) / (1 - ρ))` with `ρ = |φ_z(w)|`.
pub fn bergman_distance(z: DiskPoint, w: DiskPoint) -> f64 {
    let rho = pseudo_distance(z, w);
    if rho == 0.0 {
        return 0.0;
    }
    // log(1 + ρ) - ½ log(1 - ρ²), with 1 - ρ² taken from the stable product form.
    let gap = one_minus_phi_sq(z, w).min(1.0);
    rho.ln_1p() - 0.5 * gap.ln()
}

/// Hyperbolic radius `β(0, t)` of a Euclidean radius `t`.
pub fn hyperbolic_radius(t: f64) -> f64 {
    t.atanh()
}

/// Deterministic r-lattice: rings at hyperbolic radii `k·r/2` and equiangular
/// points per ring, spaced so adjacent ring points are at distance at least
/// `r/2`. Rings continue until one reaches `radius_cap`, so the hyperbolic
/// disks of radius `r` cover `{|z| ≤ radius_cap}`.
pub fn build_r_lattice(r: f64, radius_cap: f64) -> Result<Vec<DiskPoint>> {
    if !(r > 0.0 && r <= 2.0) {
        return Err(invalid(format!("lattice r = {r} must lie in (0, 2]")));
    }
    if !(radius_cap > 0.0 && radius_cap < 1.0) {
        return Err(invalid(format!("radius cap {radius_cap} must lie in (0, 1)")));
    }
    let step = 0.5 * r;
    let cap_rho = hyperbolic_radius(radius_cap);
    let chord = step.tanh();
    let mut points = vec![DiskPoint::ORIGIN];
    let mut k = 1usize;
    loop {
        let rho = k as f64 * step;
        let t = rho.tanh();
        if t >= 1.0 - 1e-15 {
            break;
        }
        let count = ring_count(t, chord);
        for j in 0..count {
            let theta = TAU * j as f64 / count as f64;
            points.push(DiskPoint::assume(Complex64::from_polar(t, theta)));
        }
        if rho >= cap_rho {
            break;
        }
        k += 1;
    }
    Ok(points)
}

/// Number of equiangular points on the circle `|z| = t` whose neighbours are
/// pseudo-hyperbolically at least `chord` apart.
fn ring_count(t: f64, chord: f64) -> usize {
    let t2 = t * t;
    let c2 = chord * chord;
    let cos_min = (2.0 * t2 - c2 * (1.0 + t2 * t2)) / (2.0 * t2 * (1.0 - c2));
    if cos_min <= -1.0 {
        return 1;
    }
    let min_angle = cos_min.min(1.0).acos();
    ((TAU / min_angle) * (1.0 - 1e-12)).floor().max(1.0) as usize
}

/// Largest number of lattice points within hyperbolic distance `radius` of a
/// probe point.
pub fn covering_multiplicity(
    lattice: &[DiskPoint],
    radius: f64,
    probe: &[DiskPoint],
) -> Result<usize> {
    if probe.is_empty() {
        return Err(invalid("probe list is empty"));
    }
    if !(radius > 0.0) {
        return Err(invalid(format!("radius {radius} must be positive")));
    }
    Ok(probe
        .iter()
        .map(|&z| {
            lattice
                .iter()
                .filter(|&&a| bergman_distance(a, z) <= radius)
                .count()
        })
        .max()
        .unwrap_or(0))
}

/// Dyadic arcs of lengths `2^-k`, `k = 0..=max_depth`, on two grids per level:
/// centers `j·2^-k` followed by centers `(j + ½)·2^-k`. Level 0 is the single
/// full circle.
pub fn dyadic_arcs(max_depth: u32) -> Result<Vec<Arc>> {
    if max_depth > MAX_DYADIC_DEPTH {
        return Err(invalid(format!(
            "dyadic depth {max_depth} exceeds the cap {MAX_DYADIC_DEPTH}"
        )));
    }
    let mut arcs = Vec::with_capacity((1usize << (max_depth + 2)) - 3);
    for k in 0..=max_depth {
        arcs.extend(dyadic_level(k));
    }
    Ok(arcs)
}

/// Arcs of a single dyadic level, in enumeration order.
pub fn dyadic_level(k: u32) -> Vec<Arc> {
    let n = 1usize << k;
    let length = 1.0 / n as f64;
    if k == 0 {
        return vec![Arc::full()];
    }
    let aligned = (0..n).map(|j| j as f64 * length);
    let shifted = (0..n).map(|j| (j as f64 + 0.5) * length);
    aligned
        .chain(shifted)
        .map(|center| Arc { center, length })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> DiskPoint {
        DiskPoint::new(re, im).unwrap()
    }

    #[test]
    fn rejects_points_on_or_outside_circle() {
        assert!(DiskPoint::new(1.0, 0.0).is_err());
        assert!(DiskPoint::new(0.6, 0.8).is_err());
        assert!(DiskPoint::new(f64::NAN, 0.0).is_err());
        assert!(DiskPoint::new(0.6, 0.79).is_ok());
    }

    #[test]
    fn mobius_examples() {
        let w = mobius_map(DiskPoint::ORIGIN, c(0.5, 0.0));
        assert_eq!((w.re, w.im), (-0.5, 0.0));
        let w = mobius_map(c(0.3, 0.0), DiskPoint::ORIGIN);
        assert_eq!((w.re, w.im), (0.3, 0.0));
        let a = c(0.3, 0.4);
        let z = c(0.1, -0.2);
        let back = mobius_map(a, mobius_map(a, z));
        assert!((back.z() - z.z()).norm() < 1e-15);
    }

    #[test]
    fn mobius_derivative_examples() {
        assert_eq!(mobius_deriv(DiskPoint::ORIGIN, c(0.4, -0.3)), Complex64::new(-1.0, 0.0));
        assert!((mobius_deriv(c(0.5, 0.0), DiskPoint::ORIGIN) - Complex64::new(-0.75, 0.0)).norm() < 1e-15);
        assert!((mobius_deriv(c(0.5, 0.0), c(0.5, 0.0)) + Complex64::new(4.0 / 3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn one_minus_phi_sq_examples() {
        assert!((one_minus_phi_sq(DiskPoint::ORIGIN, c(0.6, 0.0)) - 0.64).abs() < 1e-15);
        assert_eq!(one_minus_phi_sq(DiskPoint::ORIGIN, DiskPoint::ORIGIN), 1.0);
        assert!((one_minus_phi_sq(c(0.5, 0.0), c(0.5, 0.0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn distance_examples() {
        assert_eq!(bergman_distance(DiskPoint::ORIGIN, DiskPoint::ORIGIN), 0.0);
        assert!((bergman_distance(DiskPoint::ORIGIN, c(0.5, 0.0)) - 0.5 * 3f64.ln()).abs() < 1e-15);
        // ρ = |0.3 - 0.3i| / |1 - 0.09i|
        let rho = (0.18f64 / (1.0 + 0.0081)).sqrt();
        let expected = 0.5 * ((1.0 + rho) / (1.0 - rho)).ln();
        let d = bergman_distance(c(0.3, 0.0), c(0.0, 0.3));
        assert!((d - expected).abs() < 1e-14);
        assert_eq!(d, bergman_distance(c(0.0, 0.3), c(0.3, 0.0)));
    }

    #[test]
    fn lattice_rejects_bad_parameters() {
        assert!(build_r_lattice(0.0, 0.5).is_err());
        assert!(build_r_lattice(2.5, 0.5).is_err());
        assert!(build_r_lattice(1.0, 1.0).is_err());
        assert!(build_r_lattice(1.0, 0.0).is_err());
    }

    #[test]
    fn lattice_contains_origin() {
        for r in [0.2, 0.7, 1.3, 2.0] {
            let l = build_r_lattice(r, 0.8).unwrap();
            assert_eq!(l[0], DiskPoint::ORIGIN);
        }
    }

    #[test]
    fn multiplicity_examples() {
        let lattice = [DiskPoint::ORIGIN];
        assert_eq!(covering_multiplicity(&lattice, 0.3, &[DiskPoint::ORIGIN]).unwrap(), 1);
        let lattice = [DiskPoint::ORIGIN, c(0.9, 0.0)];
        assert_eq!(covering_multiplicity(&lattice, 0.1, &[c(0.5, 0.0)]).unwrap(), 0);
        assert!(covering_multiplicity(&lattice, 0.1, &[]).is_err());
    }

    #[test]
    fn dyadic_small_depths() {
        let a0 = dyadic_arcs(0).unwrap();
        assert_eq!(a0, vec![Arc::full()]);
        let a1 = dyadic_arcs(1).unwrap();
        assert_eq!(a1.len(), 5);
        assert_eq!(a1.iter().filter(|a| a.length == 0.5).count(), 4);
        let mut centers: Vec<f64> = a1[1..].iter().map(|a| a.center).collect();
        centers.dedup();
        assert_eq!(centers.len(), 4);
        assert!(dyadic_arcs(MAX_DYADIC_DEPTH + 1).is_err());
        assert_eq!(dyadic_arcs(6).unwrap().len(), (1 << 8) - 3);
    }

    #[test]
    fn box_membership() {
        let b = CarlesonBox::new(Arc::new(0.0, 0.6).unwrap());
        assert!(b.contains(c(0.5, 0.0)));
        let b = CarlesonBox::new(Arc::new(0.0, 0.4).unwrap());
        assert!(!b.contains(c(0.5, 0.0)));
        // inner circle counts as inside
        let b = CarlesonBox::new(Arc::new(0.0, 0.5).unwrap());
        assert!(b.contains(c(0.5, 0.0)));
        // the origin is in no box
        assert!(!CarlesonBox::new(Arc::full()).contains(DiskPoint::ORIGIN));
        // angular wrap-around
        let b = CarlesonBox::new(Arc::new(0.98, 0.1).unwrap());
        assert!(b.contains(DiskPoint::from_polar(0.95, 0.02 * TAU).unwrap()));
        assert!(!b.contains(DiskPoint::from_polar(0.95, 0.1 * TAU).unwrap()));
    }

    #[test]
    fn space_params_validation() {
        assert!(SpaceParams::new(2.0, 1.0, 1.0).is_ok());
        assert!(SpaceParams::new(0.5, 1.0, 0.5).is_err());
        assert!(SpaceParams::new(-1.0, 1.0, 1.0).is_err());
        assert!(SpaceParams::new(1.0, 0.0, 2.0).is_err());
        let sp = SpaceParams::new(1.0, 2.0, 0.5).unwrap();
        assert_eq!(sp.q(), 0.0);
        assert_eq!(sp.shifted_exponent(), 1.5);
    }
}
