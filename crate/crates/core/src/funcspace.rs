//! Analytic functions on the disk: polynomials and closed-form kernel
//! families, with exact derivatives and a small text grammar.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::disk::{mobius_c, mobius_deriv_c, one_minus_conj_mul, DiskPoint};
use crate::error::{Error, Result};

/// Largest polynomial degree accepted anywhere in the crate.
pub const DEGREE_CAP: usize = 256;

const LN2: f64 = std::f64::consts::LN_2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnalyticFunction {
    /// `Σ c_k z^k`.
    Polynomial { coeffs: Vec<Complex64> },
    /// `(1 - b̄z)^(1-α) / (1 - α)`, and `log(2 / (1 - b̄z))` when `α = 1`.
    /// The derivative is `-b̄ (1 - b̄z)^-α` for `α ≠ 1` and `b̄ / (1 - b̄z)` at `α = 1`.
    KernelPrimitive { b: DiskPoint, alpha: f64 },
    /// `log(2 / (1 - b̄z))`.
    LogKernel { b: DiskPoint },
    /// `(log 2/(1-|w|^2))^-1 · (log 2/(1-w̄z))^2`.
    NormalizedLogSquare { w: DiskPoint },
    /// `scale · (1 - b̄z)^-γ`.
    PowerKernel { b: DiskPoint, gamma: f64, scale: Complex64 },
    /// `(1 - |a|^2) / (α (1 - āz)^α)`.
    HFamily { a: DiskPoint, alpha: f64 },
    /// `(1 - |a|^2)^2 (1 - āz)^(-α-1) - (1 - |a|^2)(1 - āz)^-α`.
    PsiFamily { a: DiskPoint, alpha: f64 },
    Sum { terms: Vec<AnalyticFunction> },
    Scaled { c: Complex64, inner: Box<AnalyticFunction> },
}

impl AnalyticFunction {
    pub fn polynomial(coeffs: Vec<Complex64>) -> Result<Self> {
        let degree = coeffs.len().saturating_sub(1);
        if degree > DEGREE_CAP {
            return Err(Error::DegreeCap {
                degree,
                cap: DEGREE_CAP,
            });
        }
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidParameter("non-finite coefficient".into()));
        }
        Ok(Self::Polynomial { coeffs })
    }

    /// Real-coefficient polynomial; panics past the degree cap.
    pub fn real_poly(coeffs: &[f64]) -> Self {
        Self::polynomial(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
            .expect("polynomial within the degree cap")
    }

    pub fn constant(c: Complex64) -> Self {
        Self::Polynomial { coeffs: vec![c] }
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        Self::Polynomial { coeffs }
    }

    pub fn scaled(self, c: Complex64) -> Self {
        Self::Scaled {
            c,
            inner: Box::new(self),
        }
    }

    pub fn eval(&self, z: DiskPoint) -> Complex64 {
        self.eval_c(z.z())
    }

    pub(crate) fn eval_c(&self, z: Complex64) -> Complex64 {
        match self {
            Self::Polynomial { coeffs } => horner(coeffs, z),
            Self::KernelPrimitive { b, alpha } => {
                let w = one_minus_conj_mul(b.z(), z);
                if *alpha == 1.0 {
                    log_two_over(w)
                } else {
                    w.powf(1.0 - alpha) / (1.0 - alpha)
                }
            }
            Self::LogKernel { b } => log_two_over(one_minus_conj_mul(b.z(), z)),
            Self::NormalizedLogSquare { w } => {
                let l = log_two_over(one_minus_conj_mul(w.z(), z));
                l * l / (LN2 - w.defect().ln())
            }
            Self::PowerKernel { b, gamma, scale } => {
                scale * one_minus_conj_mul(b.z(), z).powf(-gamma)
            }
            Self::HFamily { a, alpha } => {
                let w = one_minus_conj_mul(a.z(), z);
                a.defect() / alpha * w.powf(-alpha)
            }
            Self::PsiFamily { a, alpha } => {
                let w = one_minus_conj_mul(a.z(), z);
                let d = a.defect();
                let base = w.powf(-alpha);
                d * d * base / w - d * base
            }
            Self::Sum { terms } => terms.iter().map(|t| t.eval_c(z)).sum(),
            Self::Scaled { c, inner } => c * inner.eval_c(z),
        }
    }

    /// Exact derivative at `z`.
    pub fn deriv_at(&self, z: DiskPoint) -> Complex64 {
        self.deriv_c(z.z())
    }

    pub(crate) fn deriv_c(&self, z: Complex64) -> Complex64 {
        match self {
            Self::Polynomial { coeffs } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, c) in coeffs.iter().enumerate().skip(1).rev() {
                    acc = acc * z + c * k as f64;
                }
                acc
            }
            Self::KernelPrimitive { b, alpha } => {
                let d = b.z().conj() * one_minus_conj_mul(b.z(), z).powf(-alpha);
                if *alpha == 1.0 {
                    d
                } else {
                    -d
                }
            }
            Self::LogKernel { b } => b.z().conj() / one_minus_conj_mul(b.z(), z),
            Self::NormalizedLogSquare { w } => {
                let v = one_minus_conj_mul(w.z(), z);
                2.0 * log_two_over(v) * w.z().conj() / v / (LN2 - w.defect().ln())
            }
            Self::PowerKernel { b, gamma, scale } => {
                let w = one_minus_conj_mul(b.z(), z);
                scale * gamma * b.z().conj() * w.powf(-gamma) / w
            }
            Self::HFamily { a, alpha } => {
                let w = one_minus_conj_mul(a.z(), z);
                a.z().conj() * a.defect() * w.powf(-alpha) / w
            }
            Self::PsiFamily { a, alpha } => {
                let w = one_minus_conj_mul(a.z(), z);
                let d = a.defect();
                let base = w.powf(-alpha) / w;
                a.z().conj() * (d * d * (alpha + 1.0) * base / w - d * alpha * base)
            }
            Self::Sum { terms } => terms.iter().map(|t| t.deriv_c(z)).sum(),
            Self::Scaled { c, inner } => c * inner.deriv_c(z),
        }
    }

    /// The derivative as an evaluable field.
    pub fn deriv(&self) -> DerivativeField {
        DerivativeField::Derivative(self.clone())
    }

    /// Points inside the disk that reflect the poles and branch points of the
    /// closed forms. Quadrature grades its panels toward them.
    pub fn foci(&self) -> Vec<Complex64> {
        let mut out = Vec::new();
        self.collect_foci(&mut out);
        out
    }

    fn collect_foci(&self, out: &mut Vec<Complex64>) {
        match self {
            Self::Polynomial { .. } => {}
            Self::KernelPrimitive { b, .. }
            | Self::LogKernel { b }
            | Self::PowerKernel { b, .. } => out.push(b.z()),
            Self::NormalizedLogSquare { w } => out.push(w.z()),
            Self::HFamily { a, .. } | Self::PsiFamily { a, .. } => out.push(a.z()),
            Self::Sum { terms } => terms.iter().for_each(|t| t.collect_foci(out)),
            Self::Scaled { inner, .. } => inner.collect_foci(out),
        }
    }

    /// Polynomial degree contributing angular oscillation (0 for closed forms).
    pub fn degree(&self) -> usize {
        match self {
            Self::Polynomial { coeffs } => coeffs.len().saturating_sub(1),
            Self::Sum { terms } => terms.iter().map(|t| t.degree()).max().unwrap_or(0),
            Self::Scaled { inner, .. } => inner.degree(),
            _ => 0,
        }
    }

    /// Whether the function is a polynomial (possibly through sums and scalings).
    pub fn as_polynomial(&self) -> Option<Vec<Complex64>> {
        match self {
            Self::Polynomial { coeffs } => Some(coeffs.clone()),
            Self::Scaled { c, inner } => inner
                .as_polynomial()
                .map(|v| v.into_iter().map(|x| c * x).collect()),
            Self::Sum { terms } => {
                let mut acc: Vec<Complex64> = Vec::new();
                for t in terms {
                    let v = t.as_polynomial()?;
                    if v.len() > acc.len() {
                        acc.resize(v.len(), Complex64::new(0.0, 0.0));
                    }
                    for (a, b) in acc.iter_mut().zip(v) {
                        *a += b;
                    }
                }
                Some(acc)
            }
            _ => None,
        }
    }
}

/// `(ψ_a(a), ψ_a'(a))`.
pub fn psi_properties(a: DiskPoint, alpha: f64) -> (Complex64, Complex64) {
    let psi = AnalyticFunction::PsiFamily { a, alpha };
    (psi.eval(a), psi.deriv_at(a))
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

#[inline]
fn log_two_over(w: Complex64) -> Complex64 {
    Complex64::new(LN2, 0.0) - w.ln()
}

/// An evaluable map `z ↦ h'(z)` for some analytic `h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeField {
    /// `f'`.
    Derivative(AnalyticFunction),
    /// `value(z) · deriv_of'(z)`.
    Product {
        value: AnalyticFunction,
        deriv_of: AnalyticFunction,
    },
    Sum(Vec<DerivativeField>),
    Scaled(Complex64, Box<DerivativeField>),
    /// `inner(φ_a(z)) · φ_a'(z)`, the derivative of `h∘φ_a` when `inner = h'`.
    MobiusPullback { inner: Box<DerivativeField>, a: DiskPoint },
    /// A field known to vanish identically.
    Zero,
}

impl DerivativeField {
    pub fn eval(&self, z: DiskPoint) -> Complex64 {
        self.eval_c(z.z())
    }

    pub(crate) fn eval_c(&self, z: Complex64) -> Complex64 {
        match self {
            Self::Derivative(f) => f.deriv_c(z),
            Self::Product { value, deriv_of } => value.eval_c(z) * deriv_of.deriv_c(z),
            Self::Sum(terms) => terms.iter().map(|t| t.eval_c(z)).sum(),
            Self::Scaled(c, inner) => c * inner.eval_c(z),
            Self::MobiusPullback { inner, a } => {
                inner.eval_c(mobius_c(a.z(), z)) * mobius_deriv_c(a.z(), z)
            }
            Self::Zero => Complex64::new(0.0, 0.0),
        }
    }

    pub fn scaled(self, c: Complex64) -> Self {
        Self::Scaled(c, Box::new(self))
    }

    pub fn foci(&self) -> Vec<Complex64> {
        match self {
            Self::Derivative(f) => f.foci(),
            Self::Product { value, deriv_of } => {
                let mut v = value.foci();
                v.extend(deriv_of.foci());
                v
            }
            Self::Sum(terms) => terms.iter().flat_map(|t| t.foci()).collect(),
            Self::Scaled(_, inner) => inner.foci(),
            Self::MobiusPullback { inner, a } => {
                let mut v: Vec<Complex64> =
                    inner.foci().into_iter().map(|c| mobius_c(a.z(), c)).collect();
                v.push(a.z());
                v
            }
            Self::Zero => Vec::new(),
        }
    }

    /// Polynomial degree budget of the field (angular oscillation).
    pub fn degree(&self) -> usize {
        match self {
            Self::Derivative(f) => f.degree(),
            Self::Product { value, deriv_of } => value.degree() + deriv_of.degree(),
            Self::Sum(terms) => terms.iter().map(|t| t.degree()).max().unwrap_or(0),
            Self::Scaled(_, inner) => inner.degree(),
            Self::MobiusPullback { inner, .. } => inner.degree() + 2,
            Self::Zero => 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Self::Zero => true,
            Self::Derivative(f) => matches!(f.as_polynomial(), Some(c) if c.iter().skip(1).all(|x| x.norm() == 0.0)),
            Self::Scaled(c, inner) => c.norm() == 0.0 || inner.is_zero(),
            Self::Sum(terms) => terms.iter().all(|t| t.is_zero()),
            Self::Product { value, deriv_of } => {
                Self::Derivative(deriv_of.clone()).is_zero()
                    || matches!(value.as_polynomial(), Some(c) if c.iter().all(|x| x.norm() == 0.0))
            }
            Self::MobiusPullback { inner, .. } => inner.is_zero(),
        }
    }
}

// ---------------------------------------------------------------------------
// Text grammar

pub(crate) fn format_complex(c: Complex64) -> String {
    if c.im == 0.0 && c.im.is_sign_positive() {
        format!("{}", c.re)
    } else {
        format!("{}{:+}i", c.re, c.im)
    }
}

pub(crate) fn parse_complex(s: &str) -> Result<Complex64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad complex literal '{s}' (expected re, re+imi or imi)"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some(body) = s.strip_suffix('i') {
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        return match split {
            Some(k) => {
                let re: f64 = body[..k].parse().map_err(|_| bad())?;
                let im_txt = &body[k..];
                let im: f64 = match im_txt {
                    "+" => 1.0,
                    "-" => -1.0,
                    t => t.parse().map_err(|_| bad())?,
                };
                Ok(Complex64::new(re, im))
            }
            None => {
                let im: f64 = match body {
                    "" | "+" => 1.0,
                    "-" => -1.0,
                    t => t.parse().map_err(|_| bad())?,
                };
                Ok(Complex64::new(0.0, im))
            }
        };
    }
    let re: f64 = s.parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, 0.0))
}

pub(crate) fn parse_real(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad real literal '{}'", s.trim())))
}

pub(crate) fn parse_point(s: &str) -> Result<DiskPoint> {
    DiskPoint::from_complex(parse_complex(s)?)
}

/// Splits at `sep` occurrences that are not nested inside parentheses.
pub(crate) fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&s[start..i]);
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

pub const FUNCTION_KINDS: &str = "poly, kprim, log, logsq, pow, h, psi, sum(...), scale(...)";

impl fmt::Display for AnalyticFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pt = |p: &DiskPoint| format_complex(p.z());
        match self {
            Self::Polynomial { coeffs } => {
                let body: Vec<String> = coeffs.iter().map(|c| format_complex(*c)).collect();
                write!(f, "poly:{}", body.join(","))
            }
            Self::KernelPrimitive { b, alpha } => write!(f, "kprim:{},{}", pt(b), alpha),
            Self::LogKernel { b } => write!(f, "log:{}", pt(b)),
            Self::NormalizedLogSquare { w } => write!(f, "logsq:{}", pt(w)),
            Self::PowerKernel { b, gamma, scale } => {
                write!(f, "pow:{},{},{}", pt(b), gamma, format_complex(*scale))
            }
            Self::HFamily { a, alpha } => write!(f, "h:{},{}", pt(a), alpha),
            Self::PsiFamily { a, alpha } => write!(f, "psi:{},{}", pt(a), alpha),
            Self::Sum { terms } => {
                let body: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
                write!(f, "sum({})", body.join(";"))
            }
            Self::Scaled { c, inner } => write!(f, "scale({};{})", format_complex(*c), inner),
        }
    }
}

impl FromStr for AnalyticFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(body) = s.strip_prefix("sum(").and_then(|b| b.strip_suffix(')')) {
            let terms = split_top(body, ';')
                .into_iter()
                .map(str::parse)
                .collect::<Result<Vec<_>>>()?;
            if terms.is_empty() {
                return Err(Error::Parse("sum() needs at least one term".into()));
            }
            return Ok(Self::Sum { terms });
        }
        if let Some(body) = s.strip_prefix("scale(").and_then(|b| b.strip_suffix(')')) {
            let parts = split_top(body, ';');
            if parts.len() != 2 {
                return Err(Error::Parse("scale(c;f) takes exactly two arguments".into()));
            }
            return Ok(Self::Scaled {
                c: parse_complex(parts[0])?,
                inner: Box::new(parts[1].parse()?),
            });
        }
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("missing ':' in '{s}'; valid kinds: {FUNCTION_KINDS}")))?;
        let args: Vec<&str> = args.split(',').collect();
        let arity = |n: usize| -> Result<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(Error::Parse(format!("'{kind}' takes {n} argument(s), got {}", args.len())))
            }
        };
        let positive = |x: f64, what: &str| -> Result<f64> {
            if x > 0.0 && x.is_finite() {
                Ok(x)
            } else {
                Err(Error::Parse(format!("{what} must be positive, got {x}")))
            }
        };
        match kind.trim() {
            "poly" => Self::polynomial(args.iter().map(|a| parse_complex(a)).collect::<Result<_>>()?),
            "kprim" => {
                arity(2)?;
                Ok(Self::KernelPrimitive {
                    b: parse_point(args[0])?,
                    alpha: positive(parse_real(args[1])?, "alpha")?,
                })
            }
            "log" => {
                arity(1)?;
                Ok(Self::LogKernel { b: parse_point(args[0])? })
            }
            "logsq" => {
                arity(1)?;
                Ok(Self::NormalizedLogSquare { w: parse_point(args[0])? })
            }
            "pow" => {
                arity(3)?;
                Ok(Self::PowerKernel {
                    b: parse_point(args[0])?,
                    gamma: parse_real(args[1])?,
                    scale: parse_complex(args[2])?,
                })
            }
            "h" => {
                arity(2)?;
                Ok(Self::HFamily {
                    a: parse_point(args[0])?,
                    alpha: positive(parse_real(args[1])?, "alpha")?,
                })
            }
            "psi" => {
                arity(2)?;
                Ok(Self::PsiFamily {
                    a: parse_point(args[0])?,
                    alpha: positive(parse_real(args[1])?, "alpha")?,
                })
            }
            other => Err(Error::Parse(format!(
                "unknown function kind '{other}'; valid kinds: {FUNCTION_KINDS}"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_examples() {
        let f = AnalyticFunction::real_poly(&[0.0, 1.0]);
        assert_eq!(f.eval(DiskPoint::real(0.5)), c(0.5, 0.0));
        let f = AnalyticFunction::LogKernel { b: DiskPoint::ORIGIN };
        assert!((f.eval(DiskPoint::new(0.3, -0.2).unwrap()) - c(LN2, 0.0)).norm() < 1e-15);
        let f = AnalyticFunction::KernelPrimitive { b: DiskPoint::real(0.5), alpha: 2.0 };
        assert!((f.eval(DiskPoint::ORIGIN) - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn deriv_examples() {
        let f = AnalyticFunction::monomial(2);
        assert!((f.deriv_at(DiskPoint::real(0.3)) - c(0.6, 0.0)).norm() < 1e-15);
        let f = AnalyticFunction::KernelPrimitive { b: DiskPoint::real(0.5), alpha: 2.0 };
        assert!((f.deriv_at(DiskPoint::ORIGIN) - c(-0.5, 0.0)).norm() < 1e-15);
        let f = AnalyticFunction::LogKernel { b: DiskPoint::real(0.8) };
        assert!((f.deriv_at(DiskPoint::ORIGIN) - c(0.8, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn kernel_primitive_at_alpha_one_is_log_kernel() {
        let b = DiskPoint::new(0.4, 0.5).unwrap();
        let z = DiskPoint::new(-0.3, 0.6).unwrap();
        let k = AnalyticFunction::KernelPrimitive { b, alpha: 1.0 };
        let l = AnalyticFunction::LogKernel { b };
        assert_eq!(k.eval(z), l.eval(z));
        assert!((k.deriv_at(z) - l.deriv_at(z)).norm() < 1e-15);
    }

    #[test]
    fn psi_examples() {
        let (v, d) = psi_properties(DiskPoint::ORIGIN, 1.0);
        assert!(v.norm() < 1e-12 && d.norm() < 1e-12);
        let (v, d) = psi_properties(DiskPoint::real(0.5), 1.0);
        assert!(v.norm() < 1e-12);
        assert!((d - c(2.0 / 3.0, 0.0)).norm() < 1e-12);
        let (v, d) = psi_properties(DiskPoint::new(0.0, 0.6).unwrap(), 2.0);
        assert!(v.norm() < 1e-12);
        assert!((d - c(0.0, -0.6 / (0.64 * 0.64))).norm() < 1e-12);
    }

    #[test]
    fn h_family_derivative_at_center() {
        let a = DiskPoint::new(0.3, -0.5).unwrap();
        for alpha in [0.5, 1.0, 2.5] {
            let h = AnalyticFunction::HFamily { a, alpha };
            let expected = a.z().conj() * a.defect().powf(-alpha);
            assert!((h.deriv_at(a) - expected).norm() < 1e-12 * expected.norm());
        }
    }

    #[test]
    fn complex_literals_round_trip() {
        for z in [c(0.3, 0.4), c(-1e-3, -2.5e-7), c(0.1, 0.0), c(0.0, -0.0), c(1e300, -3.0)] {
            let txt = format_complex(z);
            let back = parse_complex(&txt).unwrap();
            assert_eq!(back.re.to_bits(), z.re.to_bits(), "{txt}");
            assert_eq!(back.im.to_bits(), z.im.to_bits(), "{txt}");
        }
        assert_eq!(parse_complex("0.6i").unwrap(), c(0.0, 0.6));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1e-3-2E+1i").unwrap(), c(1e-3, -20.0));
        assert!(parse_complex("0.3+").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn grammar_round_trip() {
        let texts = [
            "poly:0,1,0.5-0.25i",
            "kprim:0.5+0.1i,2",
            "log:0.9",
            "logsq:-0.3+0.2i",
            "pow:0.95,0.3,1-2i",
            "h:0.1,1.5",
            "psi:0.6i,2",
            "sum(poly:1;scale(2;log:0.5);sum(h:0.2,1))",
        ];
        for t in texts {
            let f: AnalyticFunction = t.parse().unwrap();
            let again: AnalyticFunction = f.to_string().parse().unwrap();
            assert_eq!(f, again, "{t}");
            assert_eq!(f.to_string(), again.to_string());
        }
    }

    #[test]
    fn grammar_errors_name_valid_kinds() {
        let err = "bogus:1".parse::<AnalyticFunction>().unwrap_err().to_string();
        assert!(err.contains("kprim") && err.contains("logsq"), "{err}");
        assert!("log:1.0".parse::<AnalyticFunction>().is_err());
        assert!("kprim:0.5".parse::<AnalyticFunction>().is_err());
        let long = format!("poly:{}", vec!["1"; DEGREE_CAP + 2].join(","));
        assert!(matches!(long.parse::<AnalyticFunction>(), Err(Error::DegreeCap { .. })));
    }

    #[test]
    fn polynomial_view_of_sums() {
        let f: AnalyticFunction = "sum(poly:1,2;scale(2;poly:0,0,1))".parse().unwrap();
        assert_eq!(f.as_polynomial().unwrap(), vec![c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0)]);
        assert!("sum(poly:1;log:0.5)".parse::<AnalyticFunction>().unwrap().as_polynomial().is_none());
    }

    #[test]
    fn pullback_foci_follow_the_automorphism() {
        let b = DiskPoint::real(0.9);
        let a = DiskPoint::new(0.2, 0.3).unwrap();
        let field = DerivativeField::MobiusPullback {
            inner: Box::new(AnalyticFunction::LogKernel { b }.deriv()),
            a,
        };
        let foci = field.foci();
        assert_eq!(foci.len(), 2);
        // the pole 1/b̄ of the inner field pulls back to 1/conj(φ_a(b))
        let pole = Complex64::new(1.0, 0.0) / foci[0].conj();
        let image = mobius_c(a.z(), pole);
        assert!((image - Complex64::new(1.0 / 0.9, 0.0)).norm() < 1e-12);
    }
}
