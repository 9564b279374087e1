//! Constant angle spacelike surfaces in Minkowski 3-space `E³₁`.
//!
//! The ambient space is `ℝ³` with `⟨u, v⟩ = u₁v₁ + u₂v₂ − u₃v₃`. A spacelike
//! surface has a timelike unit normal `ξ`; it is a constant angle surface
//! when the hyperbolic angle between `ξ` and a fixed timelike direction is
//! constant.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod curve;
pub mod error;
pub mod generators;
pub mod interval;
pub mod lorentz;
pub mod quadrature;
pub mod spline;
pub mod surface;

pub use curve::{FrenetData, HelixSpec, ParametricCurve, ScalarFunction};
pub use error::{GeometryError, Result};
pub use interval::Interval;
pub use lorentz::{AmbientVector, CausalCharacter, Isometry, E3};
pub use surface::{FundamentalForms, ParametricSurface, Partials};
