//! Numerics for Möbius-invariant function spaces on the unit disk:
//! weighted disk quadrature, `F(p, q, s)` and Bloch-type norms, tent-space
//! norms, (logarithmic) Carleson constants and Riemann–Stieltjes operators.

// `!(x > 0.0)` guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod carleson;
pub mod disk;
pub mod error;
pub mod funcspace;
pub mod measures;
pub mod norms;
pub mod operators;
pub mod quadrature;
pub mod search;
pub mod verify;

pub use disk::{Arc, CarlesonBox, DiskPoint, SpaceParams};
pub use error::{Error, Result};
pub use funcspace::{AnalyticFunction, DerivativeField};
pub use measures::MeasureSpec;
pub use norms::{ConstantReport, Maximizer};
pub use quadrature::{QuadratureResult, QuadratureSpec};
pub use search::SearchParams;
