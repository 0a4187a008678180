//! Maximization of functionals `a ↦ Φ(a)` over the disk.
//!
//! Seeds come from an r-lattice, a few rings close to the boundary and rays
//! through the integrand's foci. Seeds are ranked with a cheap quadrature
//! level, the best ones are refined by coordinate ascent in Möbius
//! coordinates, and every point that contributes to the reported value is
//! re-evaluated at full accuracy.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::disk::{build_r_lattice, mobius_c, pseudo_distance, DiskPoint};
use crate::error::{invalid, Result};
use crate::quadrature::{map_indices, QuadratureResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchParams {
    /// Hyperbolic lattice parameter of the seed lattice.
    pub lattice_r: f64,
    /// Euclidean radius up to which the lattice is laid out.
    pub lattice_cap: f64,
    /// No sample has `|a|` above this.
    pub cap: f64,
    /// Points per outer ring.
    pub outer_angles: usize,
    pub top_k: usize,
    pub max_steps: usize,
    pub min_step: f64,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            lattice_r: 0.4,
            lattice_cap: 0.9,
            cap: 0.999,
            outer_angles: 32,
            top_k: 3,
            max_steps: 50,
            min_step: 1e-4,
        }
    }
}

impl SearchParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.cap > 0.0 && self.cap < 1.0) {
            return Err(invalid(format!("search cap {} must lie in (0, 1)", self.cap)));
        }
        if !(self.lattice_cap > 0.0 && self.lattice_cap <= self.cap) {
            return Err(invalid("lattice cap must lie in (0, cap]"));
        }
        if !(self.lattice_r > 0.0 && self.lattice_r <= 2.0) {
            return Err(invalid(format!("lattice r = {} must lie in (0, 2]", self.lattice_r)));
        }
        if self.outer_angles == 0 || self.top_k == 0 {
            return Err(invalid("outer_angles and top_k must be positive"));
        }
        if !(self.min_step > 0.0) {
            return Err(invalid("min_step must be positive"));
        }
        Ok(())
    }

    /// Seed points: lattice, outer rings `1 - 2^-k` up to the cap, and rays
    /// through the given foci.
    pub fn seeds(&self, foci: &[Complex64]) -> Result<Vec<DiskPoint>> {
        self.validate()?;
        let mut pts = build_r_lattice(self.lattice_r, self.lattice_cap)?;
        pts.retain(|p| p.norm() <= self.cap);
        let mut radii: Vec<f64> = (4..=10)
            .map(|k| 1.0 - (-(k as f64)).exp2())
            .filter(|&r| r > self.lattice_cap && r < self.cap)
            .collect();
        radii.push(self.cap);
        for &r in &radii {
            for j in 0..self.outer_angles {
                let theta = TAU * j as f64 / self.outer_angles as f64;
                pts.push(DiskPoint::assume(Complex64::from_polar(r, theta)));
            }
        }
        for c in foci {
            if c.norm() < 1e-9 {
                continue;
            }
            let dir = c / c.norm();
            let mut ray: Vec<f64> = (1..=10).map(|k| 1.0 - (-(k as f64)).exp2()).collect();
            ray.push(c.norm());
            ray.push(self.cap);
            for r in ray {
                if r <= self.cap {
                    pts.push(DiskPoint::assume(dir * r));
                }
            }
        }
        Ok(pts)
    }
}

/// Accuracy requested from an objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Level {
    Scout,
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct SearchOutcome {
    pub value: f64,
    pub maximizer: DiskPoint,
    pub samples: usize,
    pub converged: bool,
    /// `(|a|, value)` per ring of seeds, at full accuracy.
    pub profile: Vec<(f64, f64)>,
}

fn clamp(z: Complex64, cap: f64) -> DiskPoint {
    let r = z.norm();
    if r > cap {
        DiskPoint::assume(z * (cap / r))
    } else {
        DiskPoint::assume(z)
    }
}

/// Coordinate ascent in the Möbius chart around the current point: the
/// candidates are `φ_a(±δ)`, `φ_a(±iδ)`; `δ` halves after a failed sweep.
pub(crate) fn ascend<F>(
    f: &F,
    start: DiskPoint,
    start_value: f64,
    step: f64,
    params: &SearchParams,
) -> Result<(DiskPoint, f64, usize)>
where
    F: Fn(DiskPoint) -> Result<f64>,
{
    let mut best = start;
    let mut best_value = start_value;
    let mut delta = step;
    let mut evals = 0;
    let dirs = [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
    ];
    for _ in 0..params.max_steps {
        if delta < params.min_step {
            break;
        }
        let mut moved = false;
        for d in dirs {
            let cand = clamp(mobius_c(best.z(), d * delta), params.cap);
            if pseudo_distance(cand, best) < 1e-15 {
                continue;
            }
            let v = f(cand)?;
            evals += 1;
            if v > best_value {
                best = cand;
                best_value = v;
                moved = true;
                break;
            }
        }
        if !moved {
            delta *= 0.5;
        }
    }
    Ok((best, best_value, evals))
}

/// Maximizes `objective` over `{|a| ≤ cap}`.
pub(crate) fn maximize<F>(
    objective: F,
    foci: &[Complex64],
    params: &SearchParams,
) -> Result<SearchOutcome>
where
    F: Fn(DiskPoint, Level) -> Result<QuadratureResult> + Sync,
{
    let seeds = params.seeds(foci)?;
    let scout: Vec<f64> = map_indices(seeds.len(), |i| {
        objective(seeds[i], Level::Scout).map(|r| r.value)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let mut samples = seeds.len();

    // best scout point per radius
    let mut rings: Vec<(f64, usize)> = Vec::new();
    for (i, p) in seeds.iter().enumerate() {
        let r = p.norm();
        match rings.iter_mut().find(|(rr, _)| (rr - r).abs() < 1e-12) {
            Some(entry) => {
                if scout[i] > scout[entry.1] {
                    entry.1 = i;
                }
            }
            None => rings.push((r, i)),
        }
    }
    rings.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut order: Vec<usize> = (0..seeds.len()).collect();
    order.sort_by(|&i, &j| scout[j].total_cmp(&scout[i]).then(i.cmp(&j)));
    let mut starts: Vec<usize> = Vec::new();
    for &i in &order {
        if starts.len() == params.top_k {
            break;
        }
        if starts
            .iter()
            .all(|&j| pseudo_distance(seeds[i], seeds[j]) > 0.3)
        {
            starts.push(i);
        }
    }

    let step = 0.5 * (0.5 * params.lattice_r).tanh();
    let climbs: Vec<(DiskPoint, f64, usize)> = map_indices(starts.len(), |k| {
        let i = starts[k];
        let f = |a: DiskPoint| objective(a, Level::Scout).map(|r| r.value);
        ascend(&f, seeds[i], scout[i], step, params)
    })
    .into_iter()
    .collect::<Result<_>>()?;

    let mut finals: Vec<DiskPoint> = rings.iter().map(|&(_, i)| seeds[i]).collect();
    for c in &climbs {
        samples += c.2;
        finals.push(c.0);
    }
    let full: Vec<QuadratureResult> = map_indices(finals.len(), |i| objective(finals[i], Level::Full))
        .into_iter()
        .collect::<Result<_>>()?;
    samples += finals.len();

    let profile = rings
        .iter()
        .zip(&full)
        .map(|(&(r, _), res)| (r, res.value))
        .collect();
    let mut best = 0;
    for i in 1..full.len() {
        if full[i].value > full[best].value {
            best = i;
        }
    }
    Ok(SearchOutcome {
        value: full[best].value,
        maximizer: finals[best],
        samples,
        converged: full[best].converged,
        profile,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(v: f64) -> Result<QuadratureResult> {
        Ok(QuadratureResult::exact(v))
    }

    #[test]
    fn finds_interior_peak() {
        let target = Complex64::new(0.31, -0.52);
        let out = maximize(
            |a, _| exact(-(a.z() - target).norm_sqr()),
            &[],
            &SearchParams::default(),
        )
        .unwrap();
        assert!((out.maximizer.z() - target).norm() < 1e-3, "{:?}", out.maximizer);
        assert!(out.value >= out.profile.iter().map(|p| p.1).fold(f64::MIN, f64::max));
    }

    #[test]
    fn respects_cap() {
        let params = SearchParams::default();
        let out = maximize(|a, _| exact(a.norm()), &[], &params).unwrap();
        assert!(out.maximizer.norm() <= params.cap + 1e-15);
        assert!((out.value - params.cap).abs() < 1e-12);
    }

    #[test]
    fn seeds_follow_foci() {
        let params = SearchParams::default();
        let focus = Complex64::new(0.0, 0.995);
        let seeds = params.seeds(&[focus]).unwrap();
        assert!(seeds.iter().any(|p| (p.z() - focus).norm() < 1e-12));
        assert!(seeds.iter().all(|p| p.norm() <= params.cap + 1e-15));
    }
}
