//! Carleson and logarithmic Carleson constants, their kernel forms, and the
//! two-kernel integral estimates.

use serde::{Deserialize, Serialize};

use crate::disk::{kernel_sq, one_minus_conj_mul, DiskPoint};
use crate::error::{invalid, Result};
use crate::measures::MeasureSpec;
use crate::norms::{arc_sup, arc_values, kernel_sup, ConstantReport};
use crate::quadrature::{QuadratureSpec, RadialWeight, Region, WeightedIntegral};
use crate::search::SearchParams;

/// `sup_I μ(S(I)) / |I|^s` over the dyadic family.
pub fn carleson_constant(
    mu: &MeasureSpec,
    s: f64,
    depth: u32,
    spec: &QuadratureSpec,
) -> Result<ConstantReport> {
    log_carleson_constant(mu, 0.0, s, depth, spec)
}

/// `sup_I (log 2/|I|)^p μ(S(I)) / |I|^s` over the dyadic family.
pub fn log_carleson_constant(
    mu: &MeasureSpec,
    p: f64,
    s: f64,
    depth: u32,
    spec: &QuadratureSpec,
) -> Result<ConstantReport> {
    if !(p >= 0.0 && s >= 0.0) {
        return Err(invalid(format!("need p >= 0 and s >= 0, got p = {p}, s = {s}")));
    }
    let values = arc_values(mu, None, 1.0, p, s, depth, spec)?;
    Ok(arc_sup(&values, 1.0, spec.rel_tol))
}

/// `sup_a (log 2/(1-|a|^2))^p ∫ (1-|a|^2)^t / |1 - āz|^(s+t) dμ`.
pub fn blasco_constant(
    mu: &MeasureSpec,
    p: f64,
    s: f64,
    t: f64,
    search: &SearchParams,
    spec: &QuadratureSpec,
) -> Result<ConstantReport> {
    if !(p >= 0.0) {
        return Err(invalid(format!("p = {p} must be nonnegative")));
    }
    kernel_sup(mu, None, 1.0, p, s, t, search, spec)
}

/// `(k, sup over arcs with |I| ≤ 2^-k)` for `k = 0..=depth`.
pub fn vanishing_profile(
    mu: &MeasureSpec,
    p: f64,
    s: f64,
    depth: u32,
    spec: &QuadratureSpec,
) -> Result<Vec<(u32, f64)>> {
    if !(p >= 0.0 && s >= 0.0) {
        return Err(invalid(format!("need p >= 0 and s >= 0, got p = {p}, s = {s}")));
    }
    let values = arc_values(mu, None, 1.0, p, s, depth, spec)?;
    let mut per_level = vec![0.0f64; depth as usize + 1];
    for (arc, r) in &values {
        let k = arc.level() as usize;
        per_level[k] = per_level[k].max(r.value);
    }
    let mut out = vec![(0u32, 0.0); depth as usize + 1];
    let mut running = 0.0f64;
    for k in (0..=depth as usize).rev() {
        running = running.max(per_level[k]);
        out[k] = (k as u32, running);
    }
    Ok(out)
}

/// Which case of the two-kernel estimate applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `r, t < 2 + s`.
    BothSmall,
    /// `t < 2 + s < r`.
    ADominant,
    /// `r < 2 + s < t`.
    BDominant,
    /// `r, t > 2 + s`.
    BothLarge,
    /// `r = 2 + s` or `t = 2 + s`: no bound claimed.
    Boundary,
}

impl Regime {
    pub fn classify(s: f64, r: f64, t: f64) -> Self {
        let c = 2.0 + s;
        let eq = |x: f64| (x - c).abs() <= 1e-12 * c.abs().max(1.0);
        if eq(r) || eq(t) {
            Self::Boundary
        } else if r < c && t < c {
            Self::BothSmall
        } else if t < c && r > c {
            Self::ADominant
        } else if r < c && t > c {
            Self::BDominant
        } else {
            Self::BothLarge
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::BothSmall => "both_small",
            Self::ADominant => "a_dominant",
            Self::BDominant => "b_dominant",
            Self::BothLarge => "both_large",
            Self::Boundary => "boundary",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoKernelEstimate {
    pub value: f64,
    /// The regime's bound with constant 1; `None` on the boundary.
    pub bound: Option<f64>,
    pub regime: Regime,
    pub converged: bool,
}

fn check_exponents(s: f64, r: f64, t: f64) -> Result<()> {
    if !(s > -1.0) {
        return Err(invalid(format!("s = {s} must exceed -1")));
    }
    if !(r > 0.0 && t > 0.0) {
        return Err(invalid(format!("r = {r} and t = {t} must be positive")));
    }
    if !(r + t - s - 2.0 > 0.0) {
        return Err(invalid(format!("need r + t - s - 2 > 0, got {}", r + t - s - 2.0)));
    }
    Ok(())
}

/// `∫ (1-|z|^2)^s / (|1 - āz|^r |1 - b̄z|^t) dA`.
fn two_kernel_value(
    a: DiskPoint,
    b: DiskPoint,
    s: f64,
    r: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, bool)> {
    let foci = [a.z(), b.z()];
    let job = WeightedIntegral::new(RadialWeight::Power { q: s }, Region::disk()).with_foci(&foci);
    let (az, bz) = (a.z(), b.z());
    let res = job.run(
        |z| kernel_sq(az, z).powf(-0.5 * r) * kernel_sq(bz, z).powf(-0.5 * t),
        spec,
    )?;
    Ok((res.value, res.converged))
}

/// The two-kernel integral together with the bound of the applicable regime.
pub fn two_kernel_integral(
    a: DiskPoint,
    b: DiskPoint,
    s: f64,
    r: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<TwoKernelEstimate> {
    check_exponents(s, r, t)?;
    let (value, converged) = two_kernel_value(a, b, s, r, t, spec)?;
    let regime = Regime::classify(s, r, t);
    let cross = one_minus_conj_mul(a.z(), b.z()).norm();
    let a_form = a.defect().powf(-(r - s - 2.0)) * cross.powf(-t);
    let b_form = b.defect().powf(-(t - s - 2.0)) * cross.powf(-r);
    let bound = match regime {
        Regime::BothSmall => Some(cross.powf(-(r + t - s - 2.0))),
        Regime::ADominant => Some(a_form),
        Regime::BDominant => Some(b_form),
        Regime::BothLarge => Some(a_form + b_form),
        Regime::Boundary => None,
    };
    Ok(TwoKernelEstimate {
        value,
        bound,
        regime,
        converged,
    })
}

/// `I(a, b) (1 - |a|^2)^(r+t-s-2)`, bounded in `a, b` when
/// `0 < r + t - s - 2 < r`.
pub fn two_kernel_decay_ratio(
    a: DiskPoint,
    b: DiskPoint,
    s: f64,
    r: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_exponents(s, r, t)?;
    let e = r + t - s - 2.0;
    if !(e < r) {
        return Err(invalid(format!("need r + t - s - 2 < r, got {e} >= {r}")));
    }
    let (value, _) = two_kernel_value(a, b, s, r, t, spec)?;
    Ok(value * a.defect().powf(e))
}

/// Least-squares line through `(x, y)`: returns `(slope, rms residual)`.
pub fn fit_slope(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 2 {
        return Err(invalid("slope fit needs at least two points"));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(invalid("slope fit needs distinct abscissae"));
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let rss: f64 = points
        .iter()
        .map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2))
        .sum();
    Ok((slope, (rss / n).sqrt()))
}

/// Slope of `log2 value` against the depth `k` over `k ∈ [lo, hi]`.
pub fn depth_slope(profile: &[(f64, f64)], lo: f64, hi: f64) -> Result<(f64, f64)> {
    let pts: Vec<(f64, f64)> = profile
        .iter()
        .filter(|p| p.0 >= lo && p.0 <= hi && p.1 > 0.0)
        .map(|p| (p.0, p.1.log2()))
        .collect();
    fit_slope(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::restrict;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn area_is_two_carleson() {
        let r = carleson_constant(&MeasureSpec::area(), 2.0, 12, &spec()).unwrap();
        assert!(r.value >= 1.98 && r.value <= 2.0, "{}", r.value);
        let p0 = log_carleson_constant(&MeasureSpec::area(), 0.0, 2.0, 12, &spec()).unwrap();
        assert_eq!(p0, r);
    }

    #[test]
    fn origin_atom_is_invisible() {
        let r = carleson_constant(&MeasureSpec::atom(DiskPoint::ORIGIN, 1.0), 1.0, 6, &spec()).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn power_density_growth() {
        let mu = MeasureSpec::PowerDensity { sigma: 1.5 };
        let bounded = carleson_constant(&mu, 1.5, 12, &spec()).unwrap();
        let (slope, _) = depth_slope(&bounded.profile, 4.0, 12.0).unwrap();
        assert!(slope.abs() < 0.05, "{slope}");
        let growing = carleson_constant(&mu, 2.0, 12, &spec()).unwrap();
        let (slope, _) = depth_slope(&growing.profile, 4.0, 12.0).unwrap();
        assert!((slope - 0.5).abs() < 0.1, "{slope}");
    }

    #[test]
    fn vanishing_examples() {
        let mu = MeasureSpec::PowerDensity { sigma: 2.5 };
        let v = vanishing_profile(&mu, 0.0, 1.5, 12, &spec()).unwrap();
        let pts: Vec<(f64, f64)> = v.iter().map(|&(k, v)| (k as f64, v)).collect();
        let (slope, _) = depth_slope(&pts, 4.0, 12.0).unwrap();
        assert!((slope + 1.0).abs() < 0.2, "{slope}");
        let atom = MeasureSpec::atom(DiskPoint::real(0.5), 1.0);
        let v = vanishing_profile(&atom, 0.0, 1.0, 8, &spec()).unwrap();
        assert!(v.iter().skip(2).all(|&(_, x)| x == 0.0));
        assert!(v[1].1 > 0.0);
    }

    #[test]
    fn log_growth_slope() {
        let mu = MeasureSpec::PowerDensity { sigma: 1.5 };
        let r = log_carleson_constant(&mu, 1.0, 1.5, 12, &spec()).unwrap();
        let pts: Vec<(f64, f64)> = r
            .profile
            .iter()
            .filter(|p| p.0 >= 4.0)
            .map(|&(k, v)| ((k * 2f64.ln()).ln(), v.ln()))
            .collect();
        let (slope, _) = fit_slope(&pts).unwrap();
        assert!((slope - 1.0).abs() < 0.2, "{slope}");
    }

    #[test]
    fn blasco_atom_oracle() {
        let atom = MeasureSpec::atom(DiskPoint::real(0.5), 1.0);
        let r = blasco_constant(&atom, 0.0, 1.0, 1.0, &SearchParams::default(), &spec()).unwrap();
        let oracle = (0..=100_000)
            .map(|i| {
                let a = -0.999 + 1.998 * i as f64 / 100_000.0;
                (1.0 - a * a) / (1.0 - 0.5 * a).powi(2)
            })
            .fold(0.0, f64::max);
        assert!((r.value - oracle).abs() < 1e-6 * oracle, "{} vs {oracle}", r.value);
        let m = MeasureSpec::atom(DiskPoint::ORIGIN, 3.0);
        let r = blasco_constant(&m, 0.0, 1.0, 2.0, &SearchParams::default(), &spec()).unwrap();
        assert!((r.value - 3.0).abs() < 1e-12);
    }

    #[test]
    fn two_kernel_at_origin() {
        for (s, r, t) in [(0.0, 1.5, 1.5), (0.5, 3.0, 1.0), (1.0, 3.0, 3.0)] {
            let e = two_kernel_integral(DiskPoint::ORIGIN, DiskPoint::ORIGIN, s, r, t, &spec()).unwrap();
            assert!((e.value - 1.0 / (s + 1.0)).abs() < 1e-10);
        }
        assert_eq!(Regime::classify(0.0, 2.0, 1.0), Regime::Boundary);
        assert_eq!(Regime::classify(0.0, 3.0, 1.0), Regime::ADominant);
        assert!(two_kernel_integral(DiskPoint::ORIGIN, DiskPoint::ORIGIN, 0.0, 1.0, 0.5, &spec()).is_err());
    }

    #[test]
    fn two_kernel_symmetric() {
        let a = DiskPoint::new(0.6, 0.3).unwrap();
        let b = DiskPoint::new(-0.2, 0.85).unwrap();
        let x = two_kernel_integral(a, b, 0.0, 1.5, 1.5, &spec()).unwrap().value;
        let y = two_kernel_integral(b, a, 0.0, 1.5, 1.5, &spec()).unwrap().value;
        assert!((x - y).abs() < 1e-8 * x);
    }

    #[test]
    fn decay_ratio_window() {
        let a = DiskPoint::real(0.5);
        assert!(two_kernel_decay_ratio(a, a, 0.0, 1.0, 3.0, &spec()).is_err());
        let v = two_kernel_decay_ratio(DiskPoint::ORIGIN, DiskPoint::ORIGIN, 0.8, 1.6, 2.0, &spec()).unwrap();
        assert!((v - 1.0 / 1.8).abs() < 1e-10);
    }

    #[test]
    fn restriction_never_increases() {
        let mu = MeasureSpec::LogPowerDensity { sigma: 1.5, tau: 1.0 };
        let base = carleson_constant(&mu, 1.5, 10, &spec()).unwrap().value;
        for r in [0.5, 0.9, 0.99] {
            let v = carleson_constant(&restrict(&mu, r).unwrap(), 1.5, 10, &spec()).unwrap().value;
            assert!(v <= base * (1.0 + 1e-12));
        }
    }
}
