//! Riemann–Stieltjes operators `J_g f = ∫_0^z f g'`, `I_g f = ∫_0^z f' g`,
//! the multiplier `M_g f = f g`, and embedding ratios
//! `F(p, pα - 2, s) → T^∞_{p,s}(μ)`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::carleson::{carleson_constant, log_carleson_constant};
use crate::disk::{DiskPoint, SpaceParams};
use crate::error::{invalid, Error, Result};
use crate::funcspace::{AnalyticFunction, DerivativeField, DEGREE_CAP};
use crate::measures::MeasureSpec;
use crate::norms::{fps_seminorm, full_norm, hinf_norm, log_f_seminorm, tent_norm, ConstantReport};
use crate::quadrature::{map_indices, segment_integral, QuadratureSpec};
use crate::search::SearchParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Operator {
    Jg,
    Ig,
    Mg,
}

pub const OPERATOR_KINDS: &str = "jg, ig, mg";

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Jg => "jg",
            Self::Ig => "ig",
            Self::Mg => "mg",
        })
    }
}

impl FromStr for Operator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "jg" => Ok(Self::Jg),
            "ig" => Ok(Self::Ig),
            "mg" => Ok(Self::Mg),
            other => Err(Error::Parse(format!(
                "unknown operator '{other}', expected one of: {OPERATOR_KINDS}"
            ))),
        }
    }
}

/// `(J_g f)' = f g'`.
pub fn jg_deriv(f: &AnalyticFunction, g: &AnalyticFunction) -> DerivativeField {
    DerivativeField::Product {
        value: f.clone(),
        deriv_of: g.clone(),
    }
}

/// `(I_g f)' = f' g`.
pub fn ig_deriv(f: &AnalyticFunction, g: &AnalyticFunction) -> DerivativeField {
    DerivativeField::Product {
        value: g.clone(),
        deriv_of: f.clone(),
    }
}

/// `(M_g f)' = f' g + f g'`.
pub fn mg_deriv(f: &AnalyticFunction, g: &AnalyticFunction) -> DerivativeField {
    DerivativeField::Sum(vec![ig_deriv(f, g), jg_deriv(f, g)])
}

/// The image of `f` under an operator: its value at the origin and its
/// derivative field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorImage {
    pub value_at_zero: Complex64,
    pub derivative: DerivativeField,
}

impl Operator {
    pub fn apply(&self, f: &AnalyticFunction, g: &AnalyticFunction) -> OperatorImage {
        match self {
            Self::Jg => OperatorImage {
                value_at_zero: Complex64::new(0.0, 0.0),
                derivative: jg_deriv(f, g),
            },
            Self::Ig => OperatorImage {
                value_at_zero: Complex64::new(0.0, 0.0),
                derivative: ig_deriv(f, g),
            },
            Self::Mg => OperatorImage {
                value_at_zero: f.eval(DiskPoint::ORIGIN) * g.eval(DiskPoint::ORIGIN),
                derivative: mg_deriv(f, g),
            },
        }
    }

    /// Exact coefficients of the image when `f` and `g` are polynomials.
    pub fn apply_polynomial(
        &self,
        f: &AnalyticFunction,
        g: &AnalyticFunction,
    ) -> Result<AnalyticFunction> {
        let (Some(fc), Some(gc)) = (f.as_polynomial(), g.as_polynomial()) else {
            return Err(invalid("coefficient mode needs two polynomials"));
        };
        let coeffs = match self {
            Self::Mg => cauchy_product(&fc, &gc)?,
            Self::Jg => antiderivative(&cauchy_product(&fc, &derivative(&gc))?),
            Self::Ig => antiderivative(&cauchy_product(&derivative(&fc), &gc)?),
        };
        AnalyticFunction::polynomial(coeffs)
    }

    /// `(T f)(z)` by integrating the derivative field along `[0, z]`.
    pub fn value_at(
        &self,
        f: &AnalyticFunction,
        g: &AnalyticFunction,
        z: DiskPoint,
    ) -> Result<Complex64> {
        let image = self.apply(f, g);
        let d = image.derivative;
        Ok(image.value_at_zero + segment_integral(|w| d.eval_c(w), z, 8)?)
    }
}

fn cauchy_product(a: &[Complex64], b: &[Complex64]) -> Result<Vec<Complex64>> {
    if a.is_empty() || b.is_empty() {
        return Ok(vec![Complex64::new(0.0, 0.0)]);
    }
    let degree = a.len() + b.len() - 2;
    if degree > DEGREE_CAP {
        return Err(Error::DegreeCap {
            degree,
            cap: DEGREE_CAP,
        });
    }
    let mut out = vec![Complex64::new(0.0, 0.0); degree + 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    Ok(out)
}

fn derivative(c: &[Complex64]) -> Vec<Complex64> {
    if c.len() <= 1 {
        return vec![Complex64::new(0.0, 0.0)];
    }
    c.iter().enumerate().skip(1).map(|(k, x)| x * k as f64).collect()
}

fn antiderivative(c: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0)];
    out.extend(c.iter().enumerate().map(|(k, x)| x / (k + 1) as f64));
    out
}

/// The fixed eight-function battery used for operator-norm surrogates:
/// `z`, `z^3`, kernel primitives at `b = 0.5, 0.9`, log kernels at
/// `b = 0.5, 0.9`, the normalized log square at `w = 0.9`, and `ψ_a` at
/// `a = 0.5`.
pub fn standard_battery(alpha: f64) -> Vec<AnalyticFunction> {
    vec![
        AnalyticFunction::monomial(1),
        AnalyticFunction::monomial(3),
        AnalyticFunction::KernelPrimitive {
            b: DiskPoint::real(0.5),
            alpha,
        },
        AnalyticFunction::KernelPrimitive {
            b: DiskPoint::real(0.9),
            alpha,
        },
        AnalyticFunction::LogKernel {
            b: DiskPoint::real(0.5),
        },
        AnalyticFunction::LogKernel {
            b: DiskPoint::real(0.9),
        },
        AnalyticFunction::NormalizedLogSquare {
            w: DiskPoint::real(0.9),
        },
        AnalyticFunction::PsiFamily {
            a: DiskPoint::real(0.5),
            alpha,
        },
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub function: String,
    pub numerator: f64,
    pub denominator: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub rows: Vec<RatioRow>,
    pub max_ratio: f64,
    /// Index of the row attaining `max_ratio`.
    pub argmax: usize,
}

impl RatioReport {
    fn from_rows(rows: Vec<RatioRow>) -> Self {
        let mut argmax = 0;
        for (i, r) in rows.iter().enumerate() {
            if r.ratio > rows[argmax].ratio {
                argmax = i;
            }
        }
        let max_ratio = rows.get(argmax).map_or(0.0, |r| r.ratio);
        Self {
            rows,
            max_ratio,
            argmax,
        }
    }

    pub fn median_ratio(&self) -> f64 {
        median(self.rows.iter().map(|r| r.ratio).collect())
    }
}

/// Median of a list (mean of the middle pair for even lengths).
pub fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// `‖f‖^p_{T^∞_{p,s}(μ)} / |‖f‖|^p_{F(p, pα-2, s)}` for each battery member.
pub fn embedding_ratio(
    battery: &[AnalyticFunction],
    mu: &MeasureSpec,
    params: &SpaceParams,
    depth: u32,
    search: &SearchParams,
    spec: &QuadratureSpec,
) -> Result<RatioReport> {
    if battery.is_empty() {
        return Err(invalid("battery is empty"));
    }
    let p = params.p;
    let rows = map_indices(battery.len(), |i| -> Result<RatioRow> {
        let f = &battery[i];
        let norm = full_norm(f, params, search, spec)?;
        if !(norm > 0.0) {
            return Err(invalid(format!("function {f} has zero norm")));
        }
        let tent = if mu.is_zero() {
            0.0
        } else {
            tent_norm(f, mu, p, params.s, depth, spec)?.value
        };
        let (num, den) = (tent.powf(p), norm.powf(p));
        Ok(RatioRow {
            function: f.to_string(),
            numerator: num,
            denominator: den,
            ratio: num / den,
        })
    });
    Ok(RatioReport::from_rows(rows.into_iter().collect::<Result<_>>()?))
}

/// The three views on the boundedness of an operator with symbol `g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorReport {
    pub operator: Operator,
    pub symbol: String,
    /// The functional of `g` characterizing boundedness.
    pub membership_label: String,
    pub membership: ConstantReport,
    /// Carleson-type constant of the induced measure `|g'|^p (1-|z|^2)^(s+pα-2) dA`.
    pub induced_label: String,
    pub induced: ConstantReport,
    /// `|‖T f‖| / |‖f‖|` over the battery.
    pub ratios: RatioReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<String>,
}

/// Whether boundedness for `α > 1` has a box characterization at these parameters.
pub fn large_alpha_characterized(params: &SpaceParams) -> bool {
    let gamma = params.shifted_exponent();
    let p = params.p;
    let at_one = (gamma - 1.0).abs() < 1e-12;
    p <= 1.0 || (gamma > 1.0 && !at_one) || (p <= 2.0 && at_one)
}

pub const NO_CRITERION: &str = "no known criterion in this parameter regime";

#[allow(clippy::too_many_arguments)]
pub fn operator_boundedness_report(
    g: &AnalyticFunction,
    params: &SpaceParams,
    op: Operator,
    battery: &[AnalyticFunction],
    depth: u32,
    search: &SearchParams,
    spec: &QuadratureSpec,
) -> Result<OperatorReport> {
    if battery.is_empty() {
        return Err(invalid("battery is empty"));
    }
    let SpaceParams { p, alpha, s } = *params;
    let gamma = params.shifted_exponent();
    let (membership_label, membership) = match op {
        Operator::Jg if alpha == 1.0 => (
            "logarithmic F(p, p-2, s) seminorm of g".to_string(),
            log_f_seminorm(&g.deriv(), params, search, spec)?,
        ),
        Operator::Jg if alpha > 1.0 => (
            format!("F(p, p-2, {gamma}) seminorm of g"),
            fps_seminorm(&g.deriv(), &SpaceParams::new(p, 1.0, gamma)?, search, spec)?,
        ),
        Operator::Jg => (
            "F(p, p alpha-2, s) seminorm of g".to_string(),
            fps_seminorm(&g.deriv(), params, search, spec)?,
        ),
        Operator::Ig | Operator::Mg => ("sup norm of g".to_string(), hinf_norm(g)?),
    };
    let induced_mu = MeasureSpec::Induced {
        g: g.clone(),
        params: *params,
    };
    let (induced_label, induced) = if alpha == 1.0 {
        (
            format!("({p}, {s})-logarithmic Carleson constant of the induced measure"),
            log_carleson_constant(&induced_mu, p, s, depth, spec)?,
        )
    } else if alpha > 1.0 {
        (
            format!("{gamma}-Carleson constant of the induced measure"),
            carleson_constant(&induced_mu, gamma, depth, spec)?,
        )
    } else {
        (
            format!("{s}-Carleson constant of the induced measure"),
            carleson_constant(&induced_mu, s, depth, spec)?,
        )
    };
    let rows = map_indices(battery.len(), |i| -> Result<RatioRow> {
        let f = &battery[i];
        let den = full_norm(f, params, search, spec)?;
        if !(den > 0.0) {
            return Err(invalid(format!("function {f} has zero norm")));
        }
        let image = op.apply(f, g);
        let num = image.value_at_zero.norm() + fps_seminorm(&image.derivative, params, search, spec)?.value;
        Ok(RatioRow {
            function: f.to_string(),
            numerator: num,
            denominator: den,
            ratio: num / den,
        })
    });
    let ratios = RatioReport::from_rows(rows.into_iter().collect::<Result<_>>()?);
    let flag = (alpha > 1.0 && !large_alpha_characterized(params)).then(|| NO_CRITERION.to_string());
    Ok(OperatorReport {
        operator: op,
        symbol: g.to_string(),
        membership_label,
        membership,
        induced_label,
        induced,
        ratios,
        flag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn field_examples() {
        let z = AnalyticFunction::monomial(1);
        let one = AnalyticFunction::constant(c(1.0));
        let w = DiskPoint::new(0.3, -0.4).unwrap();
        assert!((jg_deriv(&one, &z).eval(w) - c(1.0)).norm() < 1e-15);
        let z2 = AnalyticFunction::monomial(2);
        assert!((jg_deriv(&z, &z2).eval(w) - 2.0 * w.z() * w.z()).norm() < 1e-15);
        assert!((ig_deriv(&z2, &z).eval(w) - 2.0 * w.z() * w.z()).norm() < 1e-15);
        assert!((mg_deriv(&z, &z).eval(w) - 2.0 * w.z()).norm() < 1e-15);
        let jf = Operator::Jg.apply_polynomial(&z, &z2).unwrap();
        assert_eq!(jf.as_polynomial().unwrap()[3], c(2.0 / 3.0));
    }

    #[test]
    fn value_recovery_matches_derivative() {
        let f = AnalyticFunction::LogKernel {
            b: DiskPoint::real(0.7),
        };
        let g = AnalyticFunction::monomial(1);
        let z = DiskPoint::new(0.4, 0.5).unwrap();
        let h = 1e-5;
        let zp = DiskPoint::new(0.4 + h, 0.5).unwrap();
        let zm = DiskPoint::new(0.4 - h, 0.5).unwrap();
        let fd = (Operator::Jg.value_at(&f, &g, zp).unwrap() - Operator::Jg.value_at(&f, &g, zm).unwrap())
            / (2.0 * h);
        assert!((fd - jg_deriv(&f, &g).eval(z)).norm() < 1e-6);
    }

    #[test]
    fn psi_multiplier_step() {
        let a = DiskPoint::new(0.5, 0.2).unwrap();
        let psi = AnalyticFunction::PsiFamily { a, alpha: 1.0 };
        let g = AnalyticFunction::real_poly(&[1.0, -2.0, 0.5]);
        let lhs = mg_deriv(&psi, &g).eval(a);
        let rhs = g.eval(a) * psi.deriv_at(a);
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn degree_cap_enforced() {
        let big = AnalyticFunction::monomial(200);
        assert!(matches!(
            Operator::Mg.apply_polynomial(&big, &big),
            Err(Error::DegreeCap { .. })
        ));
    }

    #[test]
    fn constant_symbol() {
        let params = SpaceParams::new(2.0, 1.0, 1.0).unwrap();
        let g = AnalyticFunction::constant(c(2.0));
        let battery = vec![AnalyticFunction::monomial(1), AnalyticFunction::real_poly(&[0.5, 1.0, 1.0])];
        let search = SearchParams::default();
        let spec = QuadratureSpec::default();
        let j = operator_boundedness_report(&g, &params, Operator::Jg, &battery, 4, &search, &spec).unwrap();
        assert!(j.ratios.rows.iter().all(|r| r.ratio == 0.0));
        let i = operator_boundedness_report(&g, &params, Operator::Ig, &battery, 4, &search, &spec).unwrap();
        // I_g f = 2 (f - f(0)), so the ratio is 2 seminorm / full norm
        let semi = fps_seminorm(&battery[1].deriv(), &params, &search, &spec).unwrap().value;
        assert!((i.ratios.rows[1].ratio - 2.0 * semi / (0.5 + semi)).abs() < 1e-9);
        assert!((i.ratios.rows[0].ratio - 2.0).abs() < 1e-9);
    }

    #[test]
    fn zero_measure_embeds_trivially() {
        let params = SpaceParams::new(2.0, 1.0, 1.5).unwrap();
        let r = embedding_ratio(
            &standard_battery(1.0)[..2],
            &MeasureSpec::zero(),
            &params,
            4,
            &SearchParams::default(),
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert_eq!(r.max_ratio, 0.0);
    }

    #[test]
    fn regime_flag() {
        assert!(large_alpha_characterized(&SpaceParams::new(0.5, 2.0, 0.5).unwrap()));
        assert!(large_alpha_characterized(&SpaceParams::new(2.0, 1.25, 0.5).unwrap()));
        assert!(!large_alpha_characterized(&SpaceParams::new(3.0, 1.1, 0.7).unwrap()));
    }
}
