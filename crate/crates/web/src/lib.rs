//! Browser bindings: lattice points, per-depth Carleson profiles and
//! Bloch-type density fields, as flat `f64` arrays for canvas drawing.

// `!(x > 0.0)` guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use tentspace::carleson::vanishing_profile;
use tentspace::disk::build_r_lattice;
use tentspace::{AnalyticFunction, DiskPoint, MeasureSpec, QuadratureSpec};
use wasm_bindgen::prelude::*;

/// Depth cap for the interactive profile; deeper levels take seconds.
pub const MAX_DEPTH: u32 = 10;
pub const MAX_GRID: usize = 400;

/// `[re0, im0, re1, im1, ...]`.
pub fn lattice(r: f64, cap: f64) -> Result<Vec<f64>, String> {
    let points = build_r_lattice(r, cap).map_err(|e| e.to_string())?;
    Ok(points.iter().flat_map(|z| [z.re, z.im]).collect())
}

/// `sup` over dyadic arcs of length at most `2^-k` of
/// `(log 2/|I|)^p μ(S(I)) / |I|^s`, for `k = 0..=depth`.
pub fn profile(measure: &str, p: f64, s: f64, depth: u32) -> Result<Vec<f64>, String> {
    if depth > MAX_DEPTH {
        return Err(format!("depth {depth} exceeds {MAX_DEPTH}"));
    }
    let mu: MeasureSpec = measure.parse().map_err(|e: tentspace::Error| e.to_string())?;
    let spec = QuadratureSpec::default().with_nodes(64, 128);
    let rows = vanishing_profile(&mu, p, s, depth, &spec).map_err(|e| e.to_string())?;
    Ok(rows.into_iter().map(|(_, v)| v).collect())
}

/// `|f'(z)| (1-|z|^2)^α` on an `n x n` grid over `[-1, 1]^2`, row by row from
/// the top; `NaN` outside the disk.
pub fn density(function: &str, alpha: f64, n: usize) -> Result<Vec<f64>, String> {
    if !(2..=MAX_GRID).contains(&n) {
        return Err(format!("grid size {n} must lie in 2..={MAX_GRID}"));
    }
    if !(alpha > 0.0) {
        return Err(format!("alpha = {alpha} must be positive"));
    }
    let f: AnalyticFunction = function.parse().map_err(|e: tentspace::Error| e.to_string())?;
    let d = f.deriv();
    let h = 2.0 / (n - 1) as f64;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let y = 1.0 - i as f64 * h;
        for j in 0..n {
            let x = -1.0 + j as f64 * h;
            out.push(match DiskPoint::new(x, y) {
                Ok(z) => d.eval(z).norm() * z.defect().powf(alpha),
                Err(_) => f64::NAN,
            });
        }
    }
    Ok(out)
}

#[wasm_bindgen(js_name = latticePoints)]
pub fn lattice_points(r: f64, cap: f64) -> Result<Vec<f64>, JsError> {
    lattice(r, cap).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = carlesonProfile)]
pub fn carleson_profile(measure: &str, p: f64, s: f64, depth: u32) -> Result<Vec<f64>, JsError> {
    profile(measure, p, s, depth).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = blochDensity)]
pub fn bloch_density(function: &str, alpha: f64, n: usize) -> Result<Vec<f64>, JsError> {
    density(function, alpha, n).map_err(|e| JsError::new(&e))
}
