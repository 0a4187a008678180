//! Positive measures on the disk and their integration.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::disk::{dyadic_arcs, kernel_sq, Arc, CarlesonBox, DiskPoint, SpaceParams};
use crate::error::{invalid, Error, Result};
use crate::funcspace::{parse_real, split_top, AnalyticFunction};
use crate::quadrature::{
    map_indices, pairwise_sum, QuadratureResult, QuadratureSpec, RadialWeight,
    Region, Rule, WeightedIntegral,
};

/// Radial part of a separable density, in the variable `u = 1 - |z|^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadialProfile {
    /// `(σ - 1) u^(σ-2)`, a probability density.
    Power { sigma: f64 },
    /// `u^(σ-2) (log 2/u)^-τ`.
    LogPower { sigma: f64, tau: f64 },
}

impl RadialProfile {
    fn validate(&self) -> Result<()> {
        match *self {
            Self::Power { sigma } => {
                if !(sigma > 1.0 && sigma.is_finite()) {
                    return Err(invalid(format!(
                        "power density needs sigma > 1 for finite mass, got {sigma}"
                    )));
                }
            }
            Self::LogPower { sigma, tau } => {
                let ok = sigma.is_finite()
                    && tau.is_finite()
                    && tau >= 0.0
                    && (sigma > 1.0 || (sigma == 1.0 && tau > 1.0));
                if !ok {
                    return Err(invalid(format!(
                        "log-power density needs sigma > 1, or sigma = 1 with tau > 1, got ({sigma}, {tau})"
                    )));
                }
            }
        }
        Ok(())
    }

    fn weight(&self) -> (f64, RadialWeight) {
        match *self {
            Self::Power { sigma } => (sigma - 1.0, RadialWeight::Power { q: sigma - 2.0 }),
            Self::LogPower { sigma, tau } => (1.0, RadialWeight::LogPower { q: sigma - 2.0, tau }),
        }
    }
}

/// Angular part of a separable density, as a function of the angle in turns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AngularProfile {
    Uniform,
    /// `1 + amp · cos(2π(t - center))`, `|amp| ≤ 1`.
    Cosine { center: f64, amp: f64 },
}

impl AngularProfile {
    fn validate(&self) -> Result<()> {
        if let Self::Cosine { center, amp } = *self {
            if !(center.is_finite() && amp.abs() <= 1.0) {
                return Err(invalid(format!(
                    "cosine profile needs |amp| <= 1, got amp = {amp}"
                )));
            }
        }
        Ok(())
    }

    #[inline]
    fn at(&self, z: Complex64) -> f64 {
        match *self {
            Self::Uniform => 1.0,
            Self::Cosine { center, amp } => {
                let r = z.norm();
                if r == 0.0 {
                    return 1.0;
                }
                let rot = Complex64::from_polar(1.0, -TAU * center);
                1.0 + amp * (z * rot).re / r
            }
        }
    }

    /// `∫_I profile(t) dt` over an arc.
    fn mass(&self, arc: &Arc) -> f64 {
        match *self {
            Self::Uniform => arc.length,
            Self::Cosine { center, amp } => {
                arc.length
                    + amp * (TAU * (arc.center - center)).cos() * (PI * arc.length).sin() / PI
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub point: DiskPoint,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasureSpec {
    /// `(σ - 1)(1 - |z|^2)^(σ-2) dA`.
    PowerDensity { sigma: f64 },
    /// `(1 - |z|^2)^(σ-2) (log 2/(1-|z|^2))^-τ dA`.
    LogPowerDensity { sigma: f64, tau: f64 },
    Separable {
        radial: RadialProfile,
        angular: AngularProfile,
    },
    Atomic { atoms: Vec<Atom> },
    /// `|g'(z)|^p (1 - |z|^2)^(s + pα - 2) dA`.
    Induced {
        g: AnalyticFunction,
        params: SpaceParams,
    },
    /// The inner measure on `{|z| ≥ r}`.
    Restricted { inner: Box<MeasureSpec>, r: f64 },
}

/// One absolutely continuous piece after flattening restrictions.
#[derive(Debug, Clone)]
pub(crate) struct Density<'a> {
    coef: f64,
    weight: RadialWeight,
    angular: AngularProfile,
    induced: Option<(&'a AnalyticFunction, f64)>,
    r_cut: f64,
}

impl Density<'_> {
    #[inline]
    fn factor(&self, z: Complex64) -> f64 {
        let mut v = self.coef * self.angular.at(z);
        if let Some((g, p)) = self.induced {
            v *= g.deriv_c(z).norm().powf(p);
        }
        v
    }

    pub(crate) fn foci(&self) -> Vec<Complex64> {
        self.induced.map(|(g, _)| g.foci()).unwrap_or_default()
    }

    fn degree(&self) -> usize {
        match self.induced {
            Some((g, p)) => (g.degree() as f64 * p.max(1.0)).ceil() as usize,
            None => usize::from(matches!(self.angular, AngularProfile::Cosine { .. })),
        }
    }

    fn cut_u(&self) -> f64 {
        1.0 - self.r_cut * self.r_cut
    }
}

/// A measure reduced to densities and atoms.
#[derive(Debug, Clone, Default)]
pub(crate) struct Resolved<'a> {
    pub densities: Vec<Density<'a>>,
    pub atoms: Vec<(Complex64, f64)>,
}

impl MeasureSpec {
    pub fn area() -> Self {
        Self::PowerDensity { sigma: 2.0 }
    }

    pub fn zero() -> Self {
        Self::Atomic { atoms: Vec::new() }
    }

    pub fn atom(point: DiskPoint, mass: f64) -> Self {
        Self::Atomic {
            atoms: vec![Atom { point, mass }],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::PowerDensity { sigma } => RadialProfile::Power { sigma: *sigma }.validate(),
            Self::LogPowerDensity { sigma, tau } => RadialProfile::LogPower {
                sigma: *sigma,
                tau: *tau,
            }
            .validate(),
            Self::Separable { radial, angular } => {
                radial.validate()?;
                angular.validate()
            }
            Self::Atomic { atoms } => {
                for a in atoms {
                    if !(a.mass > 0.0 && a.mass.is_finite()) {
                        return Err(invalid(format!("atom mass {} must be positive", a.mass)));
                    }
                    DiskPoint::new(a.point.re, a.point.im)?;
                }
                Ok(())
            }
            Self::Induced { params, .. } => {
                SpaceParams::new(params.p, params.alpha, params.s).map(|_| ())
            }
            Self::Restricted { inner, r } => {
                if !(*r > 0.0 && *r < 1.0) {
                    return Err(invalid(format!("restriction radius {r} must lie in (0, 1)")));
                }
                inner.validate()
            }
        }
    }

    pub(crate) fn resolve(&self) -> Resolved<'_> {
        let mut out = Resolved::default();
        self.resolve_into(0.0, &mut out);
        out
    }

    fn resolve_into<'a>(&'a self, r_cut: f64, out: &mut Resolved<'a>) {
        let mut push = |coef, weight, angular, induced| {
            out.densities.push(Density {
                coef,
                weight,
                angular,
                induced,
                r_cut,
            })
        };
        match self {
            Self::PowerDensity { sigma } => {
                let (c, w) = RadialProfile::Power { sigma: *sigma }.weight();
                push(c, w, AngularProfile::Uniform, None);
            }
            Self::LogPowerDensity { sigma, tau } => {
                let (c, w) = RadialProfile::LogPower {
                    sigma: *sigma,
                    tau: *tau,
                }
                .weight();
                push(c, w, AngularProfile::Uniform, None);
            }
            Self::Separable { radial, angular } => {
                let (c, w) = radial.weight();
                push(c, w, *angular, None);
            }
            Self::Induced { g, params } => {
                let q = params.s + params.q();
                push(1.0, RadialWeight::Power { q }, AngularProfile::Uniform, Some((g, params.p)));
            }
            Self::Atomic { atoms } => {
                for a in atoms {
                    if a.point.norm() >= r_cut {
                        out.atoms.push((a.point.z(), a.mass));
                    }
                }
            }
            Self::Restricted { inner, r } => inner.resolve_into(r_cut.max(*r), out),
        }
    }

    /// Whether the measure is identically zero.
    pub fn is_zero(&self) -> bool {
        let res = self.resolve();
        res.densities.is_empty() && res.atoms.is_empty()
    }
}

/// `μ` restricted to `{|z| ≥ r}`; nested restrictions collapse to the larger radius.
pub fn restrict(mu: &MeasureSpec, r: f64) -> Result<MeasureSpec> {
    if !(r > 0.0 && r < 1.0) {
        return Err(invalid(format!("restriction radius {r} must lie in (0, 1)")));
    }
    Ok(match mu {
        MeasureSpec::Restricted { inner, r: r0 } => MeasureSpec::Restricted {
            inner: inner.clone(),
            r: r.max(*r0),
        },
        other => MeasureSpec::Restricted {
            inner: Box::new(other.clone()),
            r,
        },
    })
}

// ---------------------------------------------------------------------------
// Integration

/// Where an integral against `μ` is taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Disk,
    Box(CarlesonBox),
}

impl Domain {
    fn region(&self) -> Region {
        match self {
            Self::Disk => Region::disk(),
            Self::Box(b) => Region::carleson_box(b),
        }
    }

    fn contains(&self, z: Complex64) -> bool {
        match self {
            Self::Disk => true,
            Self::Box(b) => b.contains(DiskPoint::assume(z)),
        }
    }
}

/// An integrand `F` together with the hints used to grade quadrature rules.
pub(crate) struct Integrand<'a, F> {
    pub f: F,
    pub foci: &'a [Complex64],
    pub degree: usize,
}

/// `∫_domain F dμ`, two-level with an error estimate.
pub(crate) fn integrate_measure<F>(
    mu: &MeasureSpec,
    integrand: &Integrand<'_, F>,
    domain: Domain,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult>
where
    F: Fn(Complex64) -> f64 + Sync,
{
    spec.validate()?;
    let fine = integrate_measure_rule(mu, integrand, domain, Rule::fine(spec))?;
    let coarse = integrate_measure_rule(mu, integrand, domain, Rule::coarse(spec))?;
    let error_estimate = (fine.0 - coarse.0).abs();
    Ok(QuadratureResult {
        value: fine.0,
        error_estimate,
        nodes_used: fine.1 + coarse.1,
        converged: error_estimate <= spec.rel_tol * fine.0.abs() + 1e-14,
    })
}

/// A single level of [`integrate_measure`].
pub(crate) fn integrate_measure_rule<F>(
    mu: &MeasureSpec,
    integrand: &Integrand<'_, F>,
    domain: Domain,
    rule: Rule,
) -> Result<(f64, usize)>
where
    F: Fn(Complex64) -> f64 + Sync,
{
    let res = mu.resolve();
    let mut parts = Vec::new();
    let mut nodes = 0;
    for d in &res.densities {
        let mut foci = integrand.foci.to_vec();
        foci.extend(d.foci());
        let region = domain.region().outside_radius(d.r_cut);
        let job = WeightedIntegral::new(d.weight, region)
            .with_foci(&foci)
            .with_degree(integrand.degree + d.degree());
        let (v, n) = job.evaluate(&|z| (integrand.f)(z) * d.factor(z), rule)?;
        parts.push(v);
        nodes += n;
    }
    for &(z, m) in &res.atoms {
        if domain.contains(z) {
            parts.push(m * (integrand.f)(z));
        }
    }
    Ok((pairwise_sum(&parts), nodes))
}

/// `μ(S(I))`.
pub fn measure_of_box(
    mu: &MeasureSpec,
    b: &CarlesonBox,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult> {
    mu.validate()?;
    spec.validate()?;
    if let Some(v) = closed_box_mass(mu, b, spec)? {
        return Ok(v);
    }
    let integrand = Integrand {
        f: |_| 1.0,
        foci: &[],
        degree: 0,
    };
    integrate_measure(mu, &integrand, Domain::Box(*b), spec)
}

/// Total mass `μ(D)`.
pub fn total_mass(mu: &MeasureSpec, spec: &QuadratureSpec) -> Result<QuadratureResult> {
    mu.validate()?;
    let integrand = Integrand {
        f: |_| 1.0,
        foci: &[],
        degree: 0,
    };
    integrate_measure(mu, &integrand, Domain::Disk, spec)
}

/// Kernel `(1 - |a|^2)^t / |1 - āz|^(s+t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kernel {
    pub a: DiskPoint,
    pub s: f64,
    pub t: f64,
}

impl Kernel {
    pub fn validate(&self) -> Result<()> {
        if !(self.s > 0.0 && self.t > 0.0) {
            return Err(invalid(format!(
                "kernel exponents need s > 0 and t > 0, got s = {}, t = {}",
                self.s, self.t
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn at(&self, z: Complex64) -> f64 {
        let a = self.a.z();
        self.a.defect().powf(self.t) * kernel_sq(a, z).powf(-0.5 * (self.s + self.t))
    }
}

/// `∫ |f|^p · [kernel] dμ`.
pub fn integrate_p_power(
    mu: &MeasureSpec,
    f: &AnalyticFunction,
    p: f64,
    kernel: Option<Kernel>,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult> {
    mu.validate()?;
    if !(p > 0.0) {
        return Err(invalid(format!("p = {p} must be positive")));
    }
    if let Some(k) = kernel {
        k.validate()?;
    }
    let mut foci = f.foci();
    if let Some(k) = kernel {
        foci.push(k.a.z());
    }
    let degree = (f.degree() as f64 * p.max(1.0)).ceil() as usize;
    let integrand = Integrand {
        f: |z: Complex64| {
            let v = f.eval_c(z).norm().powf(p);
            match kernel {
                Some(k) => v * k.at(z),
                None => v,
            }
        },
        foci: &foci,
        degree,
    };
    integrate_measure(mu, &integrand, Domain::Disk, spec)
}

// ---------------------------------------------------------------------------
// Closed-form box masses

/// `∫_0^U weight(u) du` by a 1-D composite rule.
fn radial_mass(weight: RadialWeight, u_max: f64, spec: &QuadratureSpec) -> Result<QuadratureResult> {
    if u_max <= 0.0 {
        return Ok(QuadratureResult::exact(0.0));
    }
    if let Some(v) = weight.mass_up_to(u_max) {
        return Ok(QuadratureResult::exact(v));
    }
    // one angular node: the rule integrates dθ/2π exactly for constants
    let region = Region {
        u_min: 0.0,
        u_max,
        theta0: 0.0,
        theta1: TAU,
    };
    let job = WeightedIntegral::new(weight, region);
    let mut fine = Rule::fine(spec);
    let mut coarse = Rule::coarse(spec);
    fine.trapezoid = 1;
    coarse.trapezoid = 1;
    let hi = job.evaluate(&|_| 1.0, fine)?;
    let lo = job.evaluate(&|_| 1.0, coarse)?;
    let err = (hi.0 - lo.0).abs();
    Ok(QuadratureResult {
        value: hi.0,
        error_estimate: err,
        nodes_used: hi.1 + lo.1,
        converged: err <= spec.rel_tol * hi.0.abs() + 1e-14,
    })
}

/// `μ(S(I))` without 2-D quadrature when the measure allows it.
fn closed_box_mass(
    mu: &MeasureSpec,
    b: &CarlesonBox,
    spec: &QuadratureSpec,
) -> Result<Option<QuadratureResult>> {
    let res = mu.resolve();
    if res.densities.iter().any(|d| d.induced.is_some()) {
        return Ok(None);
    }
    let mut value = 0.0;
    let mut err = 0.0;
    let mut nodes = 0;
    let mut converged = true;
    for d in &res.densities {
        let u_top = b.u_extent().min(d.cut_u());
        let r = radial_mass(d.weight, u_top, spec)?;
        value += d.coef * d.angular.mass(&b.arc) * r.value;
        err += d.coef * d.angular.mass(&b.arc) * r.error_estimate;
        nodes += r.nodes_used;
        converged &= r.converged;
    }
    for &(z, m) in &res.atoms {
        if b.contains(DiskPoint::assume(z)) {
            value += m;
        }
    }
    Ok(Some(QuadratureResult {
        value,
        error_estimate: err,
        nodes_used: nodes,
        converged,
    }))
}

// ---------------------------------------------------------------------------
// Dyadic box families

/// `∫_{S(I)} F dμ` for every arc of `dyadic_arcs(depth)`, in that order.
///
/// Boxes over the standard dyadic intervals `[m 2^-k, (m+1) 2^-k]` nest, and
/// every arc of the family is a union of two such intervals one level down,
/// so all box integrals are assembled from the integrals over the cells
/// `{1 - 2^-k ≤ |z| < 1 - 2^-k-1} × [m 2^-k-1, (m+1) 2^-k-1]` plus one tail
/// box per deepest interval.
pub(crate) fn dyadic_box_integrals<F>(
    mu: &MeasureSpec,
    integrand: &Integrand<'_, F>,
    unit: bool,
    depth: u32,
    spec: &QuadratureSpec,
) -> Result<Vec<QuadratureResult>>
where
    F: Fn(Complex64) -> f64 + Sync,
{
    mu.validate()?;
    spec.validate()?;
    let arcs = dyadic_arcs(depth)?;
    let res = mu.resolve();
    if unit && res.densities.iter().all(|d| d.induced.is_none()) {
        return closed_family(&res, &arcs, depth, spec);
    }
    let fine = cell_tree(&res, integrand, depth, Rule::cell(spec))?;
    let coarse = cell_tree(&res, integrand, depth, Rule::cell_coarse(spec))?;
    let mut out = Vec::with_capacity(arcs.len());
    for arc in &arcs {
        let hi = fine.box_value(arc);
        let lo = coarse.box_value(arc);
        let atoms: f64 = res
            .atoms
            .iter()
            .filter(|(z, _)| CarlesonBox::new(*arc).contains(DiskPoint::assume(*z)))
            .map(|&(z, m)| m * (integrand.f)(z))
            .sum();
        let err = (hi - lo).abs();
        out.push(QuadratureResult {
            value: hi + atoms,
            error_estimate: err,
            nodes_used: fine.nodes + coarse.nodes,
            converged: err <= spec.rel_tol * (hi + atoms).abs() + 1e-14,
        });
    }
    Ok(out)
}

fn closed_family(
    res: &Resolved<'_>,
    arcs: &[Arc],
    depth: u32,
    spec: &QuadratureSpec,
) -> Result<Vec<QuadratureResult>> {
    // radial masses depend only on the level and the cut
    let mut radial: Vec<Vec<QuadratureResult>> = Vec::new();
    for d in &res.densities {
        let per_level = (0..=depth)
            .map(|k| {
                let l = (-(k as f64)).exp2();
                radial_mass(d.weight, (l * (2.0 - l)).min(d.cut_u()), spec)
            })
            .collect::<Result<Vec<_>>>()?;
        radial.push(per_level);
    }
    Ok(arcs
        .iter()
        .map(|arc| {
            let k = arc.level() as usize;
            let mut value = 0.0;
            let mut err = 0.0;
            let mut nodes = 0;
            let mut converged = true;
            for (d, r) in res.densities.iter().zip(&radial) {
                let ang = d.coef * d.angular.mass(arc);
                value += ang * r[k].value;
                err += ang * r[k].error_estimate;
                nodes += r[k].nodes_used;
                converged &= r[k].converged;
            }
            let b = CarlesonBox::new(*arc);
            for &(z, m) in &res.atoms {
                if b.contains(DiskPoint::assume(z)) {
                    value += m;
                }
            }
            QuadratureResult {
                value,
                error_estimate: err,
                nodes_used: nodes,
                converged,
            }
        })
        .collect())
}

/// Cell integrals of the density part of a measure.
struct CellTree {
    depth: u32,
    /// `band[k][m]`: level-k band over the interval `[m, m+1] 2^-(k+1)`.
    band: Vec<Vec<f64>>,
    /// `boxes[k][m]`: box over the standard interval `[m, m+1] 2^-k`, `k ≤ depth + 1`.
    boxes: Vec<Vec<f64>>,
    nodes: usize,
}

fn cell_tree<F>(
    res: &Resolved<'_>,
    integrand: &Integrand<'_, F>,
    depth: u32,
    rule: Rule,
) -> Result<CellTree>
where
    F: Fn(Complex64) -> f64 + Sync,
{
    let d = depth as usize;
    let mut cells: Vec<(usize, usize, bool)> = Vec::new();
    for k in 0..=d {
        for m in 0..(1usize << (k + 1)) {
            cells.push((k, m, false));
        }
    }
    for m in 0..(1usize << (d + 1)) {
        cells.push((d + 1, m, true));
    }
    let foci_per: Vec<Vec<Complex64>> = res
        .densities
        .iter()
        .map(|den| {
            let mut v = integrand.foci.to_vec();
            v.extend(den.foci());
            v
        })
        .collect();
    let eval = |idx: usize| -> Result<(f64, usize)> {
        let (k, m, is_tail) = cells[idx];
        let (t0, t1, u_lo, u_hi) = if is_tail {
            let width = TAU / (1usize << (d + 1)) as f64;
            let l = (-((d + 1) as f64)).exp2();
            (width * m as f64, width * (m + 1) as f64, 0.0, l * (2.0 - l))
        } else {
            let width = TAU / (1usize << (k + 1)) as f64;
            let l = (-(k as f64)).exp2();
            let h = 0.5 * l;
            (width * m as f64, width * (m + 1) as f64, h * (2.0 - h), l * (2.0 - l))
        };
        let mut total = 0.0;
        let mut nodes = 0;
        for (den, foci) in res.densities.iter().zip(&foci_per) {
            let hi = u_hi.min(den.cut_u());
            if hi <= u_lo {
                continue;
            }
            let region = Region::band(u_lo, hi, t0, t1);
            let job = WeightedIntegral::new(den.weight, region)
                .with_foci(foci)
                .with_degree(integrand.degree + den.degree());
            let (v, n) = job.evaluate(&|z| (integrand.f)(z) * den.factor(z), rule)?;
            total += v;
            nodes += n;
        }
        Ok((total, nodes))
    };
    let values = map_indices(cells.len(), eval);
    let mut band: Vec<Vec<f64>> = (0..=d).map(|k| vec![0.0; 1 << (k + 1)]).collect();
    let mut tail = vec![0.0; 1 << (d + 1)];
    let mut nodes = 0;
    for (&(k, m, is_tail), v) in cells.iter().zip(values) {
        let (v, n) = v?;
        nodes += n;
        if is_tail {
            tail[m] = v;
        } else {
            band[k][m] = v;
        }
    }
    let mut boxes: Vec<Vec<f64>> = vec![Vec::new(); d + 2];
    boxes[d + 1] = tail;
    for k in (0..=d).rev() {
        boxes[k] = (0..(1usize << k))
            .map(|m| {
                band[k][2 * m] + band[k][2 * m + 1] + boxes[k + 1][2 * m] + boxes[k + 1][2 * m + 1]
            })
            .collect();
    }
    Ok(CellTree {
        depth,
        band,
        boxes,
        nodes,
    })
}

impl CellTree {
    /// Integral over `S(I)` for an arc of the dyadic family.
    fn box_value(&self, arc: &Arc) -> f64 {
        let k = arc.level() as usize;
        debug_assert!(k <= self.depth as usize);
        let n = 1usize << k;
        // index of the arc's left end in units of 2^-(k+1)
        let left = ((arc.center - 0.5 * arc.length) * (2 * n) as f64).round() as i64;
        let left = left.rem_euclid(2 * n as i64) as usize;
        if left.is_multiple_of(2) {
            // a standard dyadic interval
            return self.boxes[k][left / 2];
        }
        if k == 0 {
            return self.boxes[0][0];
        }
        // straddles two standard intervals of level k + 1
        let m0 = left;
        let m1 = (left + 1) % (2 * n);
        let half = |m: usize| self.band[k][m] + self.boxes[k + 1][m];
        half(m0) + half(m1)
    }
}

impl Rule {
    /// Orders for the small cells of dyadic box families.
    pub(crate) fn cell(spec: &QuadratureSpec) -> Self {
        let f = Self::fine(spec);
        Self {
            radial: (f.radial / 2).max(4),
            angular: (f.angular / 2).max(4),
            trapezoid: f.trapezoid,
        }
    }

    pub(crate) fn cell_coarse(spec: &QuadratureSpec) -> Self {
        let f = Self::cell(spec);
        Self {
            radial: (f.radial * 3 / 4).max(3),
            angular: (f.angular * 3 / 4).max(3),
            trapezoid: f.trapezoid * 3 / 4,
        }
    }
}

// ---------------------------------------------------------------------------
// Text grammar

pub const MEASURE_KINDS: &str = "power, logpower, sep, atoms, induced, restrict";

impl fmt::Display for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Power { sigma } => write!(f, "power,{sigma}"),
            Self::LogPower { sigma, tau } => write!(f, "logpower,{sigma},{tau}"),
        }
    }
}

impl fmt::Display for AngularProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Uniform => write!(f, "uniform"),
            Self::Cosine { center, amp } => write!(f, "cosine,{center},{amp}"),
        }
    }
}

impl fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PowerDensity { sigma } => write!(f, "power:{sigma}"),
            Self::LogPowerDensity { sigma, tau } => write!(f, "logpower:{sigma},{tau}"),
            Self::Separable { radial, angular } => write!(f, "sep:{radial}/{angular}"),
            Self::Atomic { atoms } => {
                let body: Vec<String> = atoms
                    .iter()
                    .map(|a| format!("{},{},{}", a.point.re, a.point.im, a.mass))
                    .collect();
                write!(f, "atoms:{}", body.join(";"))
            }
            Self::Induced { g, params } => {
                write!(f, "induced:{},{},{};{}", params.p, params.alpha, params.s, g)
            }
            Self::Restricted { inner, r } => write!(f, "restrict:{r};{inner}"),
        }
    }
}

fn parse_radial(s: &str) -> Result<RadialProfile> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        ["power", sigma] => Ok(RadialProfile::Power {
            sigma: parse_real(sigma)?,
        }),
        ["logpower", sigma, tau] => Ok(RadialProfile::LogPower {
            sigma: parse_real(sigma)?,
            tau: parse_real(tau)?,
        }),
        _ => Err(Error::Parse(format!(
            "bad radial profile '{s}'; valid: power,σ | logpower,σ,τ"
        ))),
    }
}

fn parse_angular(s: &str) -> Result<AngularProfile> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        ["uniform"] => Ok(AngularProfile::Uniform),
        ["cosine", center, amp] => Ok(AngularProfile::Cosine {
            center: parse_real(center)?,
            amp: parse_real(amp)?,
        }),
        _ => Err(Error::Parse(format!(
            "bad angular profile '{s}'; valid: uniform | cosine,center,amp"
        ))),
    }
}

impl FromStr for MeasureSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, body) = s.split_once(':').ok_or_else(|| {
            Error::Parse(format!("missing ':' in '{s}'; valid kinds: {MEASURE_KINDS}"))
        })?;
        let mu = match kind.trim() {
            "power" => Self::PowerDensity {
                sigma: parse_real(body)?,
            },
            "logpower" => {
                let (a, b) = body
                    .split_once(',')
                    .ok_or_else(|| Error::Parse("logpower takes σ,τ".into()))?;
                Self::LogPowerDensity {
                    sigma: parse_real(a)?,
                    tau: parse_real(b)?,
                }
            }
            "sep" => {
                let (r, a) = body
                    .split_once('/')
                    .ok_or_else(|| Error::Parse("sep takes <radial>/<angular>".into()))?;
                Self::Separable {
                    radial: parse_radial(r.trim())?,
                    angular: parse_angular(a.trim())?,
                }
            }
            "atoms" => {
                let mut atoms = Vec::new();
                for item in body.split(';').filter(|t| !t.trim().is_empty()) {
                    let parts: Vec<&str> = item.split(',').collect();
                    if parts.len() != 3 {
                        return Err(Error::Parse(format!(
                            "atom '{item}' must be re,im,mass"
                        )));
                    }
                    atoms.push(Atom {
                        point: DiskPoint::new(parse_real(parts[0])?, parse_real(parts[1])?)?,
                        mass: parse_real(parts[2])?,
                    });
                }
                Self::Atomic { atoms }
            }
            "induced" => {
                let (head, g) = body
                    .split_once(';')
                    .ok_or_else(|| Error::Parse("induced takes p,alpha,s;<function>".into()))?;
                let nums: Vec<&str> = head.split(',').collect();
                if nums.len() != 3 {
                    return Err(Error::Parse("induced takes p,alpha,s;<function>".into()));
                }
                Self::Induced {
                    g: g.parse()?,
                    params: SpaceParams::new(
                        parse_real(nums[0])?,
                        parse_real(nums[1])?,
                        parse_real(nums[2])?,
                    )?,
                }
            }
            "restrict" => {
                let parts = split_top(body, ';');
                if parts.len() < 2 {
                    return Err(Error::Parse("restrict takes r;<measure>".into()));
                }
                let inner_txt = body[parts[0].len() + 1..].to_string();
                Self::Restricted {
                    inner: Box::new(inner_txt.parse()?),
                    r: parse_real(parts[0])?,
                }
            }
            other => {
                return Err(Error::Parse(format!(
                    "unknown measure kind '{other}'; valid kinds: {MEASURE_KINDS}"
                )))
            }
        };
        mu.validate()?;
        Ok(mu)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn arc(center: f64, length: f64) -> CarlesonBox {
        CarlesonBox::new(Arc::new(center, length).unwrap())
    }

    #[test]
    fn area_box_examples() {
        let r = measure_of_box(&MeasureSpec::area(), &arc(0.1, 0.25), &spec()).unwrap();
        assert!((r.value - 7.0 / 64.0).abs() < 1e-15);
    }

    #[test]
    fn atom_box_examples() {
        let mu = MeasureSpec::atom(DiskPoint::real(0.5), 1.0);
        assert_eq!(measure_of_box(&mu, &arc(0.0, 0.6), &spec()).unwrap().value, 1.0);
        assert_eq!(measure_of_box(&mu, &arc(0.0, 0.4), &spec()).unwrap().value, 0.0);
    }

    #[test]
    fn kernel_integral_examples() {
        let one = AnalyticFunction::real_poly(&[1.0]);
        let mu = MeasureSpec::atom(DiskPoint::real(0.5), 1.0);
        let k = Kernel { a: DiskPoint::ORIGIN, s: 1.0, t: 1.0 };
        let r = integrate_p_power(&mu, &one, 1.0, Some(k), &spec()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-15);
        let mu = MeasureSpec::atom(DiskPoint::real(0.5), 2.0);
        let k = Kernel { a: DiskPoint::real(0.5), s: 1.0, t: 1.0 };
        let r = integrate_p_power(&mu, &one, 1.0, Some(k), &spec()).unwrap();
        assert!((r.value - 8.0 / 3.0).abs() < 1e-14);
        let z = AnalyticFunction::monomial(1);
        let r = integrate_p_power(&MeasureSpec::area(), &z, 2.0, None, &spec()).unwrap();
        assert!((r.value - 0.5).abs() < 1e-13);
    }

    #[test]
    fn restriction_examples() {
        let mu = MeasureSpec::atom(DiskPoint::real(0.5), 1.0);
        assert!(restrict(&mu, 0.6).unwrap().is_zero());
        let kept = restrict(&mu, 0.4).unwrap();
        assert_eq!(total_mass(&kept, &spec()).unwrap().value, 1.0);
        for r in [0.3, 0.7, 0.95] {
            let m = total_mass(&restrict(&MeasureSpec::area(), r).unwrap(), &spec()).unwrap();
            assert!((m.value - (1.0 - r * r)).abs() < 1e-13, "{r}: {}", m.value);
        }
        let twice = restrict(&restrict(&MeasureSpec::area(), 0.3).unwrap(), 0.8).unwrap();
        assert_eq!(twice, restrict(&MeasureSpec::area(), 0.8).unwrap());
        assert!(restrict(&MeasureSpec::area(), 1.0).is_err());
    }

    #[test]
    fn infinite_mass_densities_rejected() {
        assert!(MeasureSpec::PowerDensity { sigma: 1.0 }.validate().is_err());
        assert!(MeasureSpec::LogPowerDensity { sigma: 1.0, tau: 1.0 }.validate().is_err());
        assert!(MeasureSpec::LogPowerDensity { sigma: 1.0, tau: 2.0 }.validate().is_ok());
    }

    #[test]
    fn power_density_is_normalized() {
        for sigma in [1.2, 2.0, 3.5] {
            let m = total_mass(&MeasureSpec::PowerDensity { sigma }, &spec()).unwrap();
            assert!((m.value - 1.0).abs() < 1e-12, "{sigma}: {}", m.value);
        }
    }

    #[test]
    fn closed_form_and_quadrature_box_masses_agree() {
        let mus = [
            MeasureSpec::LogPowerDensity { sigma: 1.5, tau: 2.0 },
            MeasureSpec::Separable {
                radial: RadialProfile::Power { sigma: 1.5 },
                angular: AngularProfile::Cosine { center: 0.2, amp: 0.5 },
            },
            restrict(&MeasureSpec::PowerDensity { sigma: 2.5 }, 0.8).unwrap(),
        ];
        for mu in &mus {
            for b in [arc(0.2, 0.25), arc(0.9, 0.5), arc(0.0, 1.0)] {
                let closed = measure_of_box(mu, &b, &spec()).unwrap();
                let integrand = Integrand { f: |_| 1.0, foci: &[], degree: 0 };
                let quad = integrate_measure(mu, &integrand, Domain::Box(b), &spec()).unwrap();
                assert!(
                    (closed.value - quad.value).abs() < 1e-9 * closed.value.max(1e-12),
                    "{mu}: {} vs {}",
                    closed.value,
                    quad.value
                );
            }
        }
    }

    #[test]
    fn dyadic_family_matches_direct_boxes() {
        let g: AnalyticFunction = "log:0.9".parse().unwrap();
        let mu = MeasureSpec::Induced {
            g,
            params: SpaceParams::new(2.0, 1.0, 1.5).unwrap(),
        };
        let integrand = Integrand { f: |_| 1.0, foci: &[], degree: 0 };
        let depth = 5;
        let fam = dyadic_box_integrals(&mu, &integrand, true, depth, &spec()).unwrap();
        let arcs = dyadic_arcs(depth).unwrap();
        assert_eq!(fam.len(), arcs.len());
        for (a, r) in arcs.iter().zip(&fam) {
            let direct = measure_of_box(&mu, &CarlesonBox::new(*a), &spec()).unwrap();
            assert!(
                (direct.value - r.value).abs() <= 1e-8 * direct.value + 1e-14,
                "{a:?}: {} vs {}",
                direct.value,
                r.value
            );
        }
    }

    #[test]
    fn grammar_round_trip() {
        for t in [
            "power:2",
            "logpower:1.5,2",
            "sep:power,1.5/cosine,0.25,0.5",
            "sep:logpower,1,2/uniform",
            "atoms:0.5,0,1;0,-0.3,2.5",
            "atoms:",
            "induced:2,1,1;log:0.9",
            "restrict:0.9;restrict:0.5;power:3",
        ] {
            let mu: MeasureSpec = t.parse().unwrap();
            let again: MeasureSpec = mu.to_string().parse().unwrap();
            assert_eq!(mu, again, "{t}");
        }
        let err = "blob:1".parse::<MeasureSpec>().unwrap_err().to_string();
        assert!(err.contains("logpower") && err.contains("induced"));
        assert!("power:1".parse::<MeasureSpec>().is_err());
        assert!("atoms:0.5,0,-1".parse::<MeasureSpec>().is_err());
    }
}
