//! Norms and seminorms: `F(p, q, s)`, its logarithmic variant, α-Bloch,
//! `H^∞`, weighted Dirichlet and tent-space norms.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::disk::{dyadic_arcs, kernel_sq, Arc, DiskPoint, SpaceParams};
use crate::error::{invalid, Result};
use crate::funcspace::{AnalyticFunction, DerivativeField};
use crate::measures::{
    dyadic_box_integrals, integrate_measure, integrate_measure_rule, Domain, Integrand, Kernel,
    MeasureSpec,
};
use crate::quadrature::{
    map_indices, QuadratureResult, QuadratureSpec, RadialWeight, Region, Rule, WeightedIntegral,
};
use crate::search::{ascend, maximize, Level, SearchOutcome, SearchParams};

/// Where a supremum was attained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Maximizer {
    Point { point: DiskPoint },
    Arc { arc: Arc },
    None,
}

/// A supremum together with where it was found and how it behaves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantReport {
    pub value: f64,
    pub maximizer: Maximizer,
    pub samples_evaluated: usize,
    pub converged: bool,
    /// `(parameter, value)` pairs: `|a|` for searches over the disk, the depth
    /// for dyadic families.
    pub profile: Vec<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ConstantReport {
    pub(crate) fn zero() -> Self {
        Self {
            value: 0.0,
            maximizer: Maximizer::None,
            samples_evaluated: 0,
            converged: true,
            profile: Vec::new(),
            note: None,
        }
    }

    fn from_search(out: SearchOutcome, root: f64) -> Self {
        let r = |v: f64| v.max(0.0).powf(root);
        Self {
            value: r(out.value),
            maximizer: Maximizer::Point {
                point: out.maximizer,
            },
            samples_evaluated: out.samples,
            converged: out.converged,
            profile: out.profile.into_iter().map(|(x, v)| (x, r(v))).collect(),
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Evaluates a weighted disk integral at the requested search level.
pub(crate) fn run_level<F>(
    job: &WeightedIntegral<'_>,
    f: F,
    level: Level,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult>
where
    F: Fn(Complex64) -> f64 + Sync,
{
    match level {
        Level::Full => job.run(f, spec),
        Level::Scout => {
            let (v, n) = job.evaluate(&f, Rule::scout(spec))?;
            Ok(QuadratureResult {
                value: v,
                error_estimate: 0.0,
                nodes_used: n,
                converged: true,
            })
        }
    }
}

/// `log(2 / (1 - |a|^2))`.
pub fn log_factor(a: DiskPoint) -> f64 {
    (2.0 / a.defect()).ln()
}

fn derivative_degree(f: &DerivativeField, p: f64) -> usize {
    (f.degree() as f64 * p.max(1.0)).ceil() as usize
}

/// `∫ |f'|^p (1-|z|^2)^q (1-|φ_a(z)|^2)^s dA` as a function of `a`, optionally
/// times `log(2/(1-|a|^2))^p`.
fn f_space_sup(
    f: &DerivativeField,
    params: &SpaceParams,
    logarithmic: bool,
    search: &SearchParams,
    spec: &QuadratureSpec,
) -> Result<ConstantReport> {
    let SpaceParams { p, s, .. } = *params;
    if !(s > 0.0) {
        return Err(invalid(format!("s = {s} must be positive")));
    }
    spec.validate()?;
    if f.is_zero() {
        return Ok(ConstantReport::zero());
    }
    let weight = RadialWeight::Power { q: params.q() + s };
    weight.validate()?;
    let base_foci = f.foci();
    let degree = derivative_degree(f, p);
    let objective = |a: DiskPoint, level: Level| -> Result<QuadratureResult> {
        let mut foci = base_foci.clone();
        foci.push(a.z());
        let job = WeightedIntegral::new(weight, Region::disk())
            .with_foci(&foci)
            .with_degree(degree);
        let pre = a.defect().powf(s) * if logarithmic { log_factor(a).powf(p) } else { 1.0 };
        let az = a.z();
        let mut r = run_level(&job, |z| f.eval_c(z).norm().powf(p) * kernel_sq(az, z).powf(-s), level, spec)?;
        r.value *= pre;
        r.error_estimate *= pre;
        Ok(r)
    };
    let out = maximize(objective, &base_foci, search)?;
    let mut report = ConstantReport::from_search(out, 1.0 / p);
    if !report.converged {
        report.note = Some("inner quadrature did not reach the requested tolerance".into());
    }
    Ok(report)
}

/// `‖f‖_{F(p, q, s)}` with `q = pα - 2`, from the derivative field.
pub fn fps_seminorm(
    f: &DerivativeField,
    params: &SpaceParams,
    search: &SearchParams,
    spec: &QuadratureSpec,
) -> Result<ConstantReport> {
    f_space_sup(f, params, false, search, spec)
}

/// The logarithmic `F(p, q, s)` seminorm.
pub fn log_f_seminorm(
    f: &DerivativeField,
    params: &SpaceParams,
    search: &SearchParams,
    spec: &QuadratureSpec,
) -> Result<ConstantReport> {
    f_space_sup(f, params, true, search, spec)
}

/// `|f(0)| + ‖f‖_{F(p, q, s)}`.
pub fn full_norm(
    f: &AnalyticFunction,
    params: &SpaceParams,
    search: &SearchParams,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let semi = fps_seminorm(&f.deriv(), params, search, spec)?;
    Ok(f.eval(DiskPoint::ORIGIN).norm() + semi.value)
}

/// Radii `1 - 2^-k`, `k = 0..=14`, times 128 angles.
fn radial_grid() -> Vec<DiskPoint> {
    let mut pts = Vec::new();
    for k in 0..=14 {
        let r = 1.0 - (-(k as f64)).exp2();
        let n = if k == 0 { 1 } else { 128 };
        for j in 0..n {
            let theta = TAU * j as f64 / n as f64;
            pts.push(DiskPoint::assume(Complex64::from_polar(r, theta)));
        }
    }
    pts
}

const GRID_CAP: f64 = 1.0 - 1.0 / 16384.0;

/// Grid maximum of a pointwise functional followed by local ascent.
fn pointwise_sup<F>(g: F, extra: &[DiskPoint]) -> Result<ConstantReport>
where
    F: Fn(DiskPoint) -> f64 + Sync,
{
    let mut pts = radial_grid();
    pts.extend_from_slice(extra);
    let vals = map_indices(pts.len(), |i| g(pts[i]));
    let mut best = 0;
    for i in 1..pts.len() {
        if vals[i] > vals[best] {
            best = i;
        }
    }
    let mut profile: Vec<(f64, f64)> = Vec::new();
    for (p, &v) in pts.iter().zip(&vals) {
        let r = p.norm();
        match profile.iter_mut().find(|e| (e.0 - r).abs() < 1e-12) {
            Some(e) => e.1 = e.1.max(v),
            None => profile.push((r, v)),
        }
    }
    profile.sort_by(|a, b| a.0.total_cmp(&b.0));
    let params = SearchParams {
        cap: GRID_CAP.max(pts[best].norm()),
        max_steps: 400,
        min_step: 1e-9,
        ..SearchParams::default()
    };
    let (point, value, evals) = ascend(&|a| Ok(g(a)), pts[best], vals[best], 0.05, &params)?;
    Ok(ConstantReport {
        value,
        maximizer: Maximizer::Point { point },
        samples_evaluated: pts.len() + evals,
        converged: true,
        profile,
        note: None,
    })
}

/// `‖f‖_{B^α} = sup |f'(z)| (1 - |z|^2)^α`.
pub fn bloch_norm(f: &DerivativeField, alpha: f64) -> Result<ConstantReport> {
    if !(alpha > 0.0) {
        return Err(invalid(format!("alpha = {alpha} must be positive")));
    }
    let extra: Vec<DiskPoint> = f
        .foci()
        .into_iter()
        .filter_map(|c| DiskPoint::from_complex(c).ok())
        .collect();
    pointwise_sup(|z| f.eval(z).norm() * z.defect().powf(alpha), &extra)
}

/// `|f(0)| + ‖f‖_{B^α}`.
pub fn bloch_full_norm(f: &AnalyticFunction, alpha: f64) -> Result<f64> {
    Ok(f.eval(DiskPoint::ORIGIN).norm() + bloch_norm(&f.deriv(), alpha)?.value)
}

/// `sup |f|`; polynomials are additionally scanned on a circle next to the
/// boundary, where their maximum modulus lives.
pub fn hinf_norm(f: &AnalyticFunction) -> Result<ConstantReport> {
    let mut extra: Vec<DiskPoint> = f
        .foci()
        .into_iter()
        .filter_map(|c| DiskPoint::from_complex(c).ok())
        .collect();
    let scan = f.as_polynomial().is_some();
    if scan {
        let n = 1024 + 16 * f.degree();
        let r = 1.0 - 1e-9;
        extra.extend((0..n).map(|j| DiskPoint::assume(Complex64::from_polar(r, TAU * j as f64 / n as f64))));
    }
    let mut report = pointwise_sup(|z| f.eval(z).norm(), &extra)?;
    if scan {
        report.note = Some("includes an angular scan at |z| = 1 - 1e-9".into());
    }
    Ok(report)
}

/// `|f(0)| + ((γ + 1) ∫ |f'|^p (1 - |z|^2)^γ dA)^(1/p)`.
pub fn dirichlet_norm(
    f: &AnalyticFunction,
    p: f64,
    gamma: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !(gamma > -1.0) {
        return Err(invalid(format!("gamma = {gamma} must exceed -1")));
    }
    if !(p > 0.0) {
        return Err(invalid(format!("p = {p} must be positive")));
    }
    let d = f.deriv();
    let at_zero = f.eval(DiskPoint::ORIGIN).norm();
    if d.is_zero() {
        return Ok(at_zero);
    }
    let foci = d.foci();
    let job = WeightedIntegral::new(RadialWeight::Power { q: gamma }, Region::disk())
        .with_foci(&foci)
        .with_degree(derivative_degree(&d, p));
    let r = job.run(|z| d.eval_c(z).norm().powf(p), spec)?;
    Ok(at_zero + ((gamma + 1.0) * r.value).powf(1.0 / p))
}

/// Per-arc values `(log 2/|I|)^log_p |I|^-s ∫_{S(I)} |f|^p dμ` over
/// `dyadic_arcs(depth)`, in that order.
pub(crate) fn arc_values(
    mu: &MeasureSpec,
    f: Option<&AnalyticFunction>,
    p: f64,
    log_p: f64,
    s: f64,
    depth: u32,
    spec: &QuadratureSpec,
) -> Result<Vec<(Arc, QuadratureResult)>> {
    let arcs = dyadic_arcs(depth)?;
    let constant = match f {
        None => Some(1.0),
        Some(g) => g.as_polynomial().and_then(|c| {
            (c.iter().skip(1).all(|x| *x == Complex64::new(0.0, 0.0)))
                .then(|| c.first().map_or(0.0, |x| x.norm()).powf(p))
        }),
    };
    let boxes = match (constant, f) {
        (Some(c), _) => {
            let unit = Integrand {
                f: |_: Complex64| 1.0,
                foci: &[],
                degree: 0,
            };
            let mut v = dyadic_box_integrals(mu, &unit, true, depth, spec)?;
            if c != 1.0 {
                for r in &mut v {
                    r.value *= c;
                    r.error_estimate *= c;
                }
            }
            v
        }
        (None, Some(g)) => {
            let foci = g.foci();
            let integrand = Integrand {
                f: |z: Complex64| g.eval_c(z).norm().powf(p),
                foci: &foci,
                degree: (g.degree() as f64 * p.max(1.0)).ceil() as usize,
            };
            dyadic_box_integrals(mu, &integrand, false, depth, spec)?
        }
        (None, None) => unreachable!(),
    };
    Ok(arcs
        .into_iter()
        .zip(boxes)
        .map(|(arc, mut r)| {
            let w = arc.length.powf(-s) * (2.0 / arc.length).ln().powf(log_p);
            r.value *= w;
            r.error_estimate *= w;
            (arc, r)
        })
        .collect())
}

/// Sup over an arc family with a per-depth profile of partial sups over
/// levels `≤ k`. Converged when no per-arc error exceeds `rel_tol` times the
/// sup, so small boxes with loose relative accuracy do not count.
pub(crate) fn arc_sup(values: &[(Arc, QuadratureResult)], root: f64, rel_tol: f64) -> ConstantReport {
    let mut best: Option<usize> = None;
    let mut profile: Vec<(f64, f64)> = Vec::new();
    let mut running = 0.0f64;
    let mut worst = 0.0f64;
    for (i, (arc, r)) in values.iter().enumerate() {
        worst = worst.max(r.error_estimate);
        if best.map_or(r.value > 0.0, |b| r.value > values[b].1.value) {
            best = Some(i);
        }
        running = running.max(r.value);
        let k = arc.level() as f64;
        match profile.last_mut() {
            Some(last) if last.0 == k => last.1 = running,
            _ => profile.push((k, running)),
        }
    }
    let converged = worst <= rel_tol * running + 1e-14;
    let r = |v: f64| v.max(0.0).powf(root);
    ConstantReport {
        value: best.map_or(0.0, |b| r(values[b].1.value)),
        maximizer: best.map_or(Maximizer::None, |b| Maximizer::Arc { arc: values[b].0 }),
        samples_evaluated: values.len(),
        converged,
        profile: profile.into_iter().map(|(k, v)| (k, r(v))).collect(),
        note: None,
    }
}

/// `‖f‖_{T^∞_{p,s}(μ)}`: the p-th root of `sup_I |I|^-s ∫_{S(I)} |f|^p dμ`
/// over the dyadic family.
pub fn tent_norm(
    f: &AnalyticFunction,
    mu: &MeasureSpec,
    p: f64,
    s: f64,
    depth: u32,
    spec: &QuadratureSpec,
) -> Result<ConstantReport> {
    if !(p > 0.0 && s >= 0.0) {
        return Err(invalid(format!("tent norm needs p > 0 and s >= 0, got p = {p}, s = {s}")));
    }
    let values = arc_values(mu, Some(f), p, 0.0, s, depth, spec)?;
    let mut report = arc_sup(&values, 1.0 / p, spec.rel_tol);
    if !report.converged {
        report.note = Some("some box integrals did not reach the requested tolerance".into());
    }
    Ok(report)
}

/// `sup_a log(2/(1-|a|^2))^log_p ∫ (1-|a|^2)^t / |1 - āz|^(s+t) |f|^p dμ`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn kernel_sup(
    mu: &MeasureSpec,
    f: Option<&AnalyticFunction>,
    p: f64,
    log_p: f64,
    s: f64,
    t: f64,
    search: &SearchParams,
    spec: &QuadratureSpec,
) -> Result<ConstantReport> {
    mu.validate()?;
    spec.validate()?;
    Kernel {
        a: DiskPoint::ORIGIN,
        s,
        t,
    }
    .validate()?;
    let mut base_foci = f.map(|g| g.foci()).unwrap_or_default();
    let mut seed_foci = base_foci.clone();
    seed_foci.extend(mu.resolve().atoms.iter().map(|&(z, _)| z));
    seed_foci.extend(mu.resolve().densities.iter().flat_map(|d| d.foci()));
    base_foci.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let degree = f.map_or(0, |g| (g.degree() as f64 * p.max(1.0)).ceil() as usize);
    let objective = |a: DiskPoint, level: Level| -> Result<QuadratureResult> {
        let k = Kernel { a, s, t };
        let mut foci = base_foci.clone();
        foci.push(a.z());
        let integrand = Integrand {
            f: |z: Complex64| {
                let v = k.at(z);
                match f {
                    Some(g) => v * g.eval_c(z).norm().powf(p),
                    None => v,
                }
            },
            foci: &foci,
            degree,
        };
        let pre = if log_p == 0.0 { 1.0 } else { log_factor(a).powf(log_p) };
        let mut r = match level {
            Level::Full => integrate_measure(mu, &integrand, Domain::Disk, spec)?,
            Level::Scout => {
                let (v, n) = integrate_measure_rule(mu, &integrand, Domain::Disk, Rule::scout(spec))?;
                QuadratureResult {
                    value: v,
                    error_estimate: 0.0,
                    nodes_used: n,
                    converged: true,
                }
            }
        };
        r.value *= pre;
        r.error_estimate *= pre;
        Ok(r)
    };
    let out = maximize(objective, &seed_foci, search)?;
    Ok(ConstantReport::from_search(out, 1.0))
}

/// `sup_a ∫ (1-|a|^2)^t / |1 - āz|^(s+t) |f|^p dμ` (not rooted); comparable
/// to the p-th power of [`tent_norm`].
pub fn tent_norm_kernel_form(
    f: &AnalyticFunction,
    mu: &MeasureSpec,
    p: f64,
    s: f64,
    t: f64,
    search: &SearchParams,
    spec: &QuadratureSpec,
) -> Result<ConstantReport> {
    if !(p > 0.0) {
        return Err(invalid(format!("p = {p} must be positive")));
    }
    kernel_sup(mu, Some(f), p, 0.0, s, t, search, spec)
}
