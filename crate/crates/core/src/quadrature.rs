//! Weighted integration over the disk and over Carleson boxes.
//!
//! Integrals are taken in the variables `u = 1 - |z|^2` and `θ`, where the
//! normalized area measure becomes `dA = du dθ / 2π`. The radial axis is cut
//! into a first panel `[0, h]` carrying the boundary weight (Gauss–Jacobi for
//! `u^q`, a Gauss–Laguerre substitution for `u^q (log 2/u)^-τ`) followed by
//! geometrically growing Gauss–Legendre panels. The angular axis uses the
//! trapezoid rule when nothing is singular near the boundary, and otherwise
//! Gauss–Legendre panels graded toward the angles of the integrand's foci.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Sub};
use std::sync::{Arc as Shared, Mutex, OnceLock};

use gauss_quad::{GaussJacobi, GaussLaguerre, GaussLegendre};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::disk::{CarlesonBox, DiskPoint};
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub radial_nodes: usize,
    pub angular_nodes: usize,
    pub refinement_levels: usize,
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            radial_nodes: 128,
            angular_nodes: 256,
            refinement_levels: 3,
            rel_tol: 1e-7,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.radial_nodes < 8 {
            return Err(invalid(format!("radial_nodes = {} < 8", self.radial_nodes)));
        }
        if self.angular_nodes < 16 {
            return Err(invalid(format!("angular_nodes = {} < 16", self.angular_nodes)));
        }
        if self.refinement_levels < 2 {
            return Err(invalid("refinement_levels must be at least 2"));
        }
        if !(self.rel_tol > 0.0) {
            return Err(invalid(format!("rel_tol = {} must be positive", self.rel_tol)));
        }
        Ok(())
    }

    pub fn with_nodes(mut self, radial: usize, angular: usize) -> Self {
        self.radial_nodes = radial;
        self.angular_nodes = angular;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult<V = f64> {
    pub value: V,
    pub error_estimate: f64,
    pub nodes_used: usize,
    pub converged: bool,
}

impl<V: Value> QuadratureResult<V> {
    pub(crate) fn from_levels(fine: V, coarse: V, nodes_used: usize, rel_tol: f64) -> Self {
        let error_estimate = (fine - coarse).magnitude();
        let converged = error_estimate <= rel_tol * fine.magnitude() + 1e-14;
        Self {
            value: fine,
            error_estimate,
            nodes_used,
            converged,
        }
    }

    /// An exactly known value (atoms, closed forms).
    pub fn exact(value: V) -> Self {
        Self {
            value,
            error_estimate: 0.0,
            nodes_used: 0,
            converged: true,
        }
    }
}

/// Scalar types a quadrature can accumulate.
pub trait Value:
    Copy + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl Value for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Value for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Pairwise summation in the given order.
pub(crate) fn pairwise_sum<V: Value>(xs: &[V]) -> V {
    match xs.len() {
        0 => V::zero(),
        1 => xs[0],
        n if n <= 8 => xs[1..].iter().fold(xs[0], |a, &b| a + b),
        n => {
            let (lo, hi) = xs.split_at(n / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}

/// Radial weight in the variable `u = 1 - |z|^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RadialWeight {
    /// `u^q`, `q > -1`.
    Power { q: f64 },
    /// `u^q (log 2/u)^-τ`; needs `q > -1`, or `q = -1` with `τ > 1`.
    LogPower { q: f64, tau: f64 },
}

impl RadialWeight {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Power { q } => {
                if !(q > -1.0 && q.is_finite()) {
                    return Err(invalid(format!(
                        "weight exponent q = {q} must exceed -1 for an integrable weight"
                    )));
                }
            }
            Self::LogPower { q, tau } => {
                let ok = (q > -1.0 && q.is_finite() && tau.is_finite() && tau >= 0.0)
                    || (q == -1.0 && tau > 1.0 && tau.is_finite());
                if !ok {
                    return Err(invalid(format!(
                        "log-power weight (q = {q}, tau = {tau}) is not integrable at the boundary"
                    )));
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn at(&self, u: f64) -> f64 {
        match *self {
            Self::Power { q } => u.powf(q),
            Self::LogPower { q, tau } => u.powf(q) * (std::f64::consts::LN_2 - u.ln()).powf(-tau),
        }
    }

    /// `∫_0^h` of the weight, in closed form when available.
    #[allow(clippy::redundant_guards)]
    pub fn mass_up_to(&self, h: f64) -> Option<f64> {
        match *self {
            Self::Power { q } => Some(h.powf(q + 1.0) / (q + 1.0)),
            Self::LogPower { tau, .. } if tau == 0.0 => self.plain().mass_up_to(h),
            Self::LogPower { q, tau } if q == -1.0 => {
                Some((std::f64::consts::LN_2 - h.ln()).powf(1.0 - tau) / (tau - 1.0))
            }
            _ => None,
        }
    }

    fn plain(&self) -> Self {
        match *self {
            Self::Power { q } | Self::LogPower { q, .. } => Self::Power { q },
        }
    }
}

/// Integration region `{u_min < u ≤ u_max, θ ∈ [theta0, theta1]}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub u_min: f64,
    pub u_max: f64,
    pub theta0: f64,
    pub theta1: f64,
}

impl Region {
    pub fn disk() -> Self {
        Self {
            u_min: 0.0,
            u_max: 1.0,
            theta0: 0.0,
            theta1: TAU,
        }
    }

    pub fn carleson_box(b: &CarlesonBox) -> Self {
        let (theta0, theta1) = b.arc.radians();
        Self {
            u_min: 0.0,
            u_max: b.u_extent().min(1.0),
            theta0,
            theta1,
        }
    }

    /// Keeps only `|z| > r`.
    pub fn outside_radius(mut self, r: f64) -> Self {
        if r > 0.0 {
            self.u_max = self.u_max.min(1.0 - r * r);
        }
        self
    }

    /// A polar rectangle away from the boundary: `u ∈ [u_min, u_max]`.
    pub fn band(u_min: f64, u_max: f64, theta0: f64, theta1: f64) -> Self {
        Self {
            u_min,
            u_max,
            theta0,
            theta1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.u_max <= self.u_min || self.theta1 <= self.theta0
    }

    pub fn is_full_circle(&self) -> bool {
        self.theta1 - self.theta0 >= TAU * (1.0 - 1e-15)
    }

    fn width(&self) -> f64 {
        self.theta1 - self.theta0
    }
}

/// Per-level orders of the composite rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Rule {
    pub radial: usize,
    pub angular: usize,
    pub trapezoid: usize,
}

impl Rule {
    pub fn fine(spec: &QuadratureSpec) -> Self {
        Self {
            radial: (spec.radial_nodes / 8).max(2),
            angular: (spec.angular_nodes / 16).max(2),
            trapezoid: spec.angular_nodes,
        }
    }

    pub fn coarse(spec: &QuadratureSpec) -> Self {
        let f = Self::fine(spec);
        let l = spec.refinement_levels as f64;
        let shrink = |n: usize| ((n as f64 * (l - 1.0) / l).ceil() as usize).max(2);
        let drop = |n: usize| n.saturating_sub(spec.refinement_levels - 1).max(2);
        Self {
            radial: drop(f.radial),
            angular: drop(f.angular),
            trapezoid: shrink(f.trapezoid),
        }
    }

    /// A cheaper single level used to rank candidate points in searches.
    pub fn scout(spec: &QuadratureSpec) -> Self {
        let f = Self::fine(spec);
        Self {
            radial: (f.radial / 2).saturating_sub(2).max(4),
            angular: (f.angular / 2).saturating_sub(2).max(4),
            trapezoid: (f.trapezoid / 2).max(32),
        }
    }
}

// ---------------------------------------------------------------------------
// Node caches

#[derive(Hash, PartialEq, Eq, Clone, Copy)]
enum RuleKey {
    Legendre(usize),
    Jacobi(usize, u64),
    Laguerre(usize),
}

type Nodes = Shared<Vec<(f64, f64)>>;

fn cached(key: RuleKey) -> Result<Nodes> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, Nodes>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("rule cache poisoned").get(&key) {
        return Ok(v.clone());
    }
    let rule_err = |e: &dyn std::fmt::Display| Error::Rule(e.to_string());
    let pairs = match key {
        RuleKey::Legendre(n) => GaussLegendre::new(n)
            .map_err(|e| rule_err(&e))?
            .into_node_weight_pairs(),
        RuleKey::Jacobi(n, beta) => GaussJacobi::new(n, 0.0, f64::from_bits(beta))
            .map_err(|e| rule_err(&e))?
            .into_node_weight_pairs(),
        RuleKey::Laguerre(n) => GaussLaguerre::new(n, 0.0)
            .map_err(|e| rule_err(&e))?
            .into_node_weight_pairs(),
    };
    let mut pairs = pairs;
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let shared = Shared::new(pairs);
    cache
        .lock()
        .expect("rule cache poisoned")
        .insert(key, shared.clone());
    Ok(shared)
}

fn legendre(n: usize) -> Result<Nodes> {
    cached(RuleKey::Legendre(n))
}

/// Gauss–Legendre nodes mapped to `[a, b]`.
pub(crate) fn legendre_on(n: usize, a: f64, b: f64) -> Result<Vec<(f64, f64)>> {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    Ok(legendre(n)?
        .iter()
        .map(|&(x, w)| (mid + half * x, half * w))
        .collect())
}

/// Nodes and weights for `∫_0^h weight(u) g(u) du`.
#[allow(clippy::redundant_guards)]
fn first_panel(weight: RadialWeight, h: f64, n: usize) -> Result<Vec<(f64, f64)>> {
    match weight {
        RadialWeight::Power { q } => jacobi_panel(q, h, n),
        RadialWeight::LogPower { q, tau } if tau == 0.0 => jacobi_panel(q, h, n),
        RadialWeight::LogPower { q, tau } => {
            // In v = log(2/u) the weight is 2^(q+1) e^(-(q+1)v) v^(-τ). The
            // first few doublings of v get Legendre panels; the far tail,
            // where v^(-τ) is flat on the scale of the exponential, is
            // left to Gauss–Laguerre.
            let v_h = std::f64::consts::LN_2 - h.ln();
            let v_end = (16.0 * v_h).min(600.0);
            let mut out = Vec::new();
            let mut v = v_h;
            while v < v_end {
                let next = (2.0 * v).min(v_end);
                for (x, w) in legendre_on(n, v, next)? {
                    let u = 2.0 * (-x).exp();
                    out.push((u, w * u * u.powf(q) * x.powf(-tau)));
                }
                v = next;
            }
            out.extend(log_tail(q, tau, v.max(v_h), n)?);
            Ok(out)
        }
    }
}

/// `∫_0^{2e^{-v0}} u^q log(2/u)^(-τ) g(u) du` by Gauss–Laguerre.
fn log_tail(q: f64, tau: f64, v0: f64, n: usize) -> Result<Vec<(f64, f64)>> {
    let lag = cached(RuleKey::Laguerre(n))?;
    let h = 2.0 * (-v0).exp();
    if h == 0.0 {
        return Ok(Vec::new());
    }
    if q > -1.0 {
        // v = v0 + w/λ with λ = q + 1
        let lambda = q + 1.0;
        let pref = h.powf(lambda) / lambda;
        Ok(lag
            .iter()
            .map(|&(w, wt)| {
                let u = h * (-w / lambda).exp();
                (u, pref * wt * (v0 + w / lambda).powf(-tau))
            })
            .collect())
    } else {
        // q = -1: v = v0 · exp(w / (τ - 1))
        let k = tau - 1.0;
        let pref = v0.powf(-k) / k;
        Ok(lag
            .iter()
            .map(|&(w, wt)| {
                let v = v0 * (w / k).exp();
                (2.0 * (-v).exp(), pref * wt)
            })
            .collect())
    }
}

fn jacobi_panel(q: f64, h: f64, n: usize) -> Result<Vec<(f64, f64)>> {
    let nodes = if q == 0.0 {
        legendre(n)?
    } else {
        cached(RuleKey::Jacobi(n, q.to_bits()))?
    };
    let scale = (0.5 * h).powf(q + 1.0);
    Ok(nodes
        .iter()
        .map(|&(x, w)| (0.5 * h * (1.0 + x), scale * w))
        .collect())
}

// ---------------------------------------------------------------------------
// Composite rule

/// A weighted integral `∫_region F(z) weight(u) dA(z)` together with the
/// information used to grade the composite rule.
#[derive(Debug, Clone)]
pub struct WeightedIntegral<'a> {
    pub weight: RadialWeight,
    pub region: Region,
    /// Interior points reflecting singularities of the integrand outside the disk.
    pub foci: &'a [Complex64],
    /// Polynomial degree of the integrand's analytic factors.
    pub degree: usize,
}

struct Focus {
    theta: f64,
    scale: f64,
}

impl<'a> WeightedIntegral<'a> {
    pub fn new(weight: RadialWeight, region: Region) -> Self {
        Self {
            weight,
            region,
            foci: &[],
            degree: 0,
        }
    }

    pub fn with_foci(mut self, foci: &'a [Complex64]) -> Self {
        self.foci = foci;
        self
    }

    pub fn with_degree(mut self, degree: usize) -> Self {
        self.degree = degree;
        self
    }

    /// Two-level evaluation with an error estimate.
    pub fn run<V, F>(&self, f: F, spec: &QuadratureSpec) -> Result<QuadratureResult<V>>
    where
        V: Value,
        F: Fn(Complex64) -> V + Sync,
    {
        spec.validate()?;
        self.weight.validate()?;
        if self.region.is_empty() {
            return Ok(QuadratureResult::exact(V::zero()));
        }
        let (fine, n1) = self.evaluate(&f, Rule::fine(spec))?;
        let (coarse, n2) = self.evaluate(&f, Rule::coarse(spec))?;
        Ok(QuadratureResult::from_levels(fine, coarse, n1 + n2, spec.rel_tol))
    }

    /// One level of the composite rule; returns the value and the node count.
    pub(crate) fn evaluate<V, F>(&self, f: &F, rule: Rule) -> Result<(V, usize)>
    where
        V: Value,
        F: Fn(Complex64) -> V + Sync,
    {
        if self.region.is_empty() {
            return Ok((V::zero(), 0));
        }
        let (foci, region) = self.relevant_foci();
        let panels = self.radial_panels(&foci, &region);
        let work = |k: usize| -> Result<(V, usize)> {
            let (lo, hi) = panels[k];
            let radial = if k == 0 && region.u_min <= 0.0 {
                first_panel(self.weight, hi, rule.radial)?
            } else {
                legendre_on(rule.radial, lo, hi)?
                    .into_iter()
                    .map(|(u, w)| (u, w * self.weight.at(u)))
                    .collect()
            };
            let angular = self.angular_nodes(&foci, &region, lo, rule)?;
            let trig: Vec<(f64, f64, f64)> = angular
                .iter()
                .map(|&(t, w)| {
                    let (s, c) = t.sin_cos();
                    (c, s, w)
                })
                .collect();
            let mut rows = Vec::with_capacity(radial.len());
            for &(u, wu) in &radial {
                let r = (1.0 - u).max(0.0).sqrt();
                let mut acc = V::zero();
                for &(c, s, wt) in &trig {
                    acc = acc + f(Complex64::new(r * c, r * s)) * wt;
                }
                rows.push(acc * wu);
            }
            Ok((pairwise_sum(&rows), radial.len() * trig.len()))
        };
        let parts: Vec<Result<(V, usize)>> = map_indices(panels.len(), work);
        let mut values = Vec::with_capacity(parts.len());
        let mut nodes = 0;
        for p in parts {
            let (v, n) = p?;
            values.push(v);
            nodes += n;
        }
        Ok((pairwise_sum(&values) * (1.0 / TAU), nodes))
    }

    /// Foci that influence the region, with their angle and radial scale. For
    /// the full circle the angular window is re-centred on the first focus so
    /// no focus sits on the seam.
    fn relevant_foci(&self) -> (Vec<Focus>, Region) {
        let mut region = self.region;
        let full = region.is_full_circle();
        let extent = region.u_max.max(region.width().min(1.0));
        let mut foci = Vec::new();
        for c in self.foci {
            let scale_u = 1.0 - c.norm_sqr();
            if scale_u >= 0.5 {
                continue;
            }
            let theta = c.im.atan2(c.re);
            let gap = if full {
                0.0
            } else {
                angular_gap(theta, region.theta0, region.theta1)
            };
            let scale = scale_u.max(gap);
            if scale < extent {
                foci.push(Focus {
                    theta,
                    scale: scale_u,
                });
            }
        }
        if full {
            if let Some(f0) = foci.first() {
                region.theta0 = f0.theta - PI;
                region.theta1 = f0.theta + PI;
            }
        }
        (foci, region)
    }

    fn radial_panels(&self, foci: &[Focus], region: &Region) -> Vec<(f64, f64)> {
        let u_max = region.u_max;
        if region.u_min > 0.0 {
            return geometric_panels(region.u_min, u_max);
        }
        let mut h = 0.25f64;
        for f in foci {
            h = h.min(0.5 * f.scale);
        }
        if self.degree > 0 {
            h = h.min(0.5 / (self.degree as f64 + 1.0));
        }
        h = h.min(u_max).max(u_max * 1e-300);
        let mut panels = vec![(0.0, h)];
        panels.extend(geometric_panels(h, u_max));
        panels
    }

    fn angular_nodes(
        &self,
        foci: &[Focus],
        region: &Region,
        u_lo: f64,
        rule: Rule,
    ) -> Result<Vec<(f64, f64)>> {
        let (t0, t1) = (region.theta0, region.theta1);
        let max_width = (PI / 4.0) / (1.0 + self.degree as f64 / 8.0);
        if foci.is_empty() && region.is_full_circle() {
            let n = rule.trapezoid.max(4 * self.degree + 16);
            let w = TAU / n as f64;
            return Ok((0..n).map(|j| (t0 + w * j as f64, w)).collect());
        }
        let mut cuts = vec![t0, t1];
        for f in foci {
            let d = 0.5 * (u_lo + f.scale);
            for shift in [-TAU, 0.0, TAU] {
                let c = f.theta + shift;
                if c > t0 && c < t1 {
                    cuts.push(c);
                }
                let mut step = d;
                while step < TAU {
                    for x in [c - step, c + step] {
                        if x > t0 && x < t1 {
                            cuts.push(x);
                        }
                    }
                    step *= 2.0;
                }
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|b, a| (*b - *a).abs() <= 1e-13 * (1.0 + a.abs()));
        let mut out = Vec::new();
        for pair in cuts.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let pieces = ((b - a) / max_width).ceil().max(1.0) as usize;
            let step = (b - a) / pieces as f64;
            for k in 0..pieces {
                let lo = a + step * k as f64;
                let hi = if k + 1 == pieces { b } else { lo + step };
                out.extend(legendre_on(rule.angular, lo, hi)?);
            }
        }
        Ok(out)
    }
}

/// Panels `[x, 2x]` covering `[start, end]`, without slivers at the end.
fn geometric_panels(start: f64, end: f64) -> Vec<(f64, f64)> {
    let mut panels = Vec::new();
    let mut x = start;
    while x < end {
        let mut next = (2.0 * x).min(end);
        if end - next < 0.25 * x {
            next = end;
        }
        panels.push((x, next));
        x = next;
    }
    panels
}

/// Distance from angle `t` to the interval `[a, b]` on the circle.
fn angular_gap(t: f64, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let d = (t - mid).rem_euclid(TAU);
    let d = d.min(TAU - d);
    (d - half).max(0.0)
}

#[cfg(feature = "parallel")]
pub(crate) fn map_indices<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indices<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (0..n).map(f).collect()
}

// ---------------------------------------------------------------------------
// Public entry points

/// `∫_D F(z) (1 - |z|^2)^q dA(z)` with the normalized area measure.
pub fn integrate_disk<F>(integrand: F, q: f64, spec: &QuadratureSpec) -> Result<QuadratureResult>
where
    F: Fn(Complex64) -> f64 + Sync,
{
    WeightedIntegral::new(RadialWeight::Power { q }, Region::disk()).run(integrand, spec)
}

/// Complex-valued variant of [`integrate_disk`].
pub fn integrate_disk_complex<F>(
    integrand: F,
    q: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult<Complex64>>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    WeightedIntegral::new(RadialWeight::Power { q }, Region::disk()).run(integrand, spec)
}

/// `∫_{S(I)} F(z) (1 - |z|^2)^q dA(z)`.
pub fn integrate_box<F>(
    integrand: F,
    b: &CarlesonBox,
    q: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult>
where
    F: Fn(Complex64) -> f64 + Sync,
{
    WeightedIntegral::new(RadialWeight::Power { q }, Region::carleson_box(b)).run(integrand, spec)
}

/// `∫_0^1` along the segment `[0, z]` of a field, i.e. the antiderivative
/// `h(z) - h(0)` of `h' = field`. Panels are graded toward the endpoint so
/// fields with poles just outside the disk are resolved.
pub fn segment_integral<F>(field: F, z: DiskPoint, panels_per_octave: usize) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    let zc = z.z();
    let modulus = z.norm();
    let mut cuts = vec![0.0, 1.0];
    if modulus > 0.0 {
        // 1 - |z|t doubles from one cut to the next
        let mut gap = 1.0 - modulus;
        loop {
            gap *= 2.0;
            let t = (1.0 - gap) / modulus;
            if t <= 0.0 {
                break;
            }
            cuts.push(t);
        }
    }
    cuts.sort_by(f64::total_cmp);
    let n = panels_per_octave.max(2) * 4;
    let mut parts = Vec::new();
    for w in cuts.windows(2) {
        let mut acc = Complex64::new(0.0, 0.0);
        for (t, wt) in legendre_on(n, w[0], w[1])? {
            acc += field(zc * t) * wt;
        }
        parts.push(acc);
    }
    Ok(pairwise_sum(&parts) * zc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk::Arc;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn log_power_masses() {
        // ∫_0^1 u^q log(2/u)^(-τ) du, evaluated with mpmath at 30 digits in
        // v = log(2/u); q = -1 is 1/log 2
        let cases = [
            (0.5, 2.0, 0.571_539_727_112_220_8),
            (-0.5, 1.0, 1.133_011_408_082_326),
            (-1.0, 2.0, std::f64::consts::LOG2_E),
            (1.0, 3.0, 0.547_285_901_190_825_3),
        ];
        let spec = QuadratureSpec::default();
        let focus = [Complex64::new(0.0, 0.999)];
        for (q, tau, exact) in cases {
            for foci in [&[][..], &focus[..]] {
                let r = WeightedIntegral::new(RadialWeight::LogPower { q, tau }, Region::disk())
                    .with_foci(foci)
                    .run(|_| 1.0, &spec)
                    .unwrap();
                assert!(rel(r.value, exact) < 1e-10, "q={q} tau={tau}: {} vs {exact}", r.value);
                assert!(r.converged, "q={q} tau={tau}: {:e}", r.error_estimate);
            }
        }
    }

    #[test]
    fn closed_form_weights() {
        let spec = QuadratureSpec::default();
        for beta in [-0.5, 0.0, 0.5, 2.0, 4.5] {
            let r = integrate_disk(|_| 1.0, beta, &spec).unwrap();
            assert!(rel(r.value, 1.0 / (1.0 + beta)) < 1e-12, "beta {beta}: {}", r.value);
            assert!(r.converged);
        }
    }

    #[test]
    fn second_moment() {
        let r = integrate_disk(|z| z.norm_sqr(), 0.0, &QuadratureSpec::default()).unwrap();
        assert!(rel(r.value, 0.5) < 1e-13);
    }

    #[test]
    fn rejects_nonintegrable_weight() {
        assert!(integrate_disk(|_| 1.0, -1.0, &QuadratureSpec::default()).is_err());
        assert!(integrate_disk(|_| 1.0, -1.5, &QuadratureSpec::default()).is_err());
        let w = RadialWeight::LogPower { q: -1.0, tau: 1.0 };
        assert!(w.validate().is_err());
        assert!(RadialWeight::LogPower { q: -1.0, tau: 1.5 }.validate().is_ok());
    }

    #[test]
    fn rejects_small_node_counts() {
        let spec = QuadratureSpec::default().with_nodes(4, 64);
        assert!(integrate_disk(|_| 1.0, 0.0, &spec).is_err());
    }

    #[test]
    fn box_area() {
        let spec = QuadratureSpec::default();
        let b = CarlesonBox::new(Arc::new(0.3, 0.5).unwrap());
        let r = integrate_box(|_| 1.0, &b, 0.0, &spec).unwrap();
        assert!(rel(r.value, 0.375) < 1e-13);
        let b = CarlesonBox::new(Arc::full());
        let r = integrate_box(|_| 1.0, &b, 0.0, &spec).unwrap();
        assert!(rel(r.value, 1.0) < 1e-13);
    }

    #[test]
    fn log_power_weights_match_closed_forms() {
        // q = -1, tau = 2: ∫_0^1 u^-1 (log 2/u)^-2 du = 1 / log 2
        let w = RadialWeight::LogPower { q: -1.0, tau: 2.0 };
        let r = WeightedIntegral::new(w, Region::disk())
            .run(|_| 1.0, &QuadratureSpec::default())
            .unwrap();
        assert!(rel(r.value, 1.0 / std::f64::consts::LN_2) < 1e-9, "{}", r.value);
        // q = 0.5, tau = 1: compare with a fine substitution oracle
        let w = RadialWeight::LogPower { q: 0.5, tau: 1.0 };
        let r = WeightedIntegral::new(w, Region::disk())
            .run(|_| 1.0, &QuadratureSpec::default())
            .unwrap();
        // oracle: ∫_0^1 u^0.5/log(2/u) du by midpoint rule in t = u^1.5
        let n = 2_000_000;
        let mut s = 0.0;
        for k in 0..n {
            let t = (k as f64 + 0.5) / n as f64;
            let u = t.powf(1.0 / 1.5);
            s += 1.0 / (std::f64::consts::LN_2 - u.ln());
        }
        let oracle = s / n as f64 / 1.5;
        assert!(rel(r.value, oracle) < 1e-8, "{} vs {}", r.value, oracle);
    }

    #[test]
    fn near_singular_kernel_against_midpoint_oracle() {
        let f = |z: Complex64| 1.0 / (Complex64::new(1.0, 0.0) - 0.9 * z).norm_sqr();
        let foci = [Complex64::new(0.9, 0.0)];
        let r = WeightedIntegral::new(RadialWeight::Power { q: 0.0 }, Region::disk())
            .with_foci(&foci)
            .run(f, &QuadratureSpec::default())
            .unwrap();
        // closed form: Σ 0.81^n/(n+1) = -ln(1-0.81)/0.81
        let exact = -(0.19f64).ln() / 0.81;
        assert!(rel(r.value, exact) < 1e-10, "{} vs {exact}", r.value);
        let plain = integrate_disk(f, 0.0, &QuadratureSpec::default()).unwrap();
        assert!(rel(plain.value, exact) < 1e-5);
    }

    #[test]
    fn strongly_focused_kernel() {
        // ∫ (1-|a|^2)^2 / |1 - āz|^4 dA = 1 for every a
        let a = Complex64::from_polar(0.999, 1.0);
        let f = move |z: Complex64| {
            let w = Complex64::new(1.0, 0.0) - a.conj() * z;
            let d = 1.0 - a.norm_sqr();
            d * d / w.norm_sqr().powi(2)
        };
        let foci = [a];
        let r = WeightedIntegral::new(RadialWeight::Power { q: 0.0 }, Region::disk())
            .with_foci(&foci)
            .run(f, &QuadratureSpec::default())
            .unwrap();
        assert!(rel(r.value, 1.0) < 1e-9, "{}", r.value);
        assert!(r.converged);
    }

    #[test]
    fn segment_integral_recovers_log() {
        let b = Complex64::new(0.99, 0.0);
        let z = DiskPoint::new(0.98, 0.1).unwrap();
        let field = move |w: Complex64| b.conj() / (Complex64::new(1.0, 0.0) - b.conj() * w);
        let got = segment_integral(field, z, 4).unwrap();
        let expect = -(Complex64::new(1.0, 0.0) - b.conj() * z.z()).ln();
        assert!((got - expect).norm() < 1e-10, "{got} vs {expect}");
    }

    #[test]
    fn pairwise_sum_is_order_fixed() {
        let xs: Vec<f64> = (0..1000).map(|k| 1.0 / (k as f64 + 1.0)).collect();
        assert_eq!(pairwise_sum(&xs).to_bits(), pairwise_sum(&xs.clone()).to_bits());
    }
}
