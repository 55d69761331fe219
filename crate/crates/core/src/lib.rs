//! Approximate magnetic-bag solutions of the SU(2) Bogomolny equations.
//!
//! The crate builds the glued pair `(A_G, Φ_G)` for a given charge `N`
//! from `N` rescaled Prasad–Sommerfield cores placed on a sphere, and
//! evaluates the gauge-invariant quantities used to check it: Higgs
//! profiles, critical radii, flux, local degrees, the residual
//! `*F − d_AΦ` and its norms, and finite-difference realisations of the
//! deformation operator and its identities.
//!
//! Fields are evaluated pointwise from closed forms. Derivatives are taken
//! by central differences on those evaluators; there is no grid.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too; index loops
// mirror the component formulas.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analysis;
pub mod bag;
pub mod constants;
pub mod error;
pub mod glued;
pub mod monopole;
pub mod operators;
pub mod quadrature;
pub mod su2;
pub mod verify;

pub use error::{Error, Result};
pub use su2::{bracket, inner, wedge_dual, AlgOneForm, AlgVec};

/// A point of ℝ³.
pub type Point = nalgebra::Vector3<f64>;

pub use bag::{make_shell_config, ShellConfig};
pub use glued::Chart;
pub use monopole::{FieldSample, PairField, ScaledMonopole};
