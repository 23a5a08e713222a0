//! Bound state of the three-dimensional Schrödinger operator with an
//! attractive δ-interaction supported on a locally deformed plane
//! `x₃ = β f(x₁, x₂)`.
//!
//! The crate follows the Birman–Schwinger route: `−κ²` is an eigenvalue
//! exactly when the weakly singular integral operator `αQ_β(κ)` on `L²(ℝ²)`
//! has eigenvalue one. Besides the direct Nyström solve it evaluates the
//! profile constant `D_{α,f}` in two independent ways (a position-space
//! double integral and a momentum-space Hankel integral) and solves the
//! leading-order implicit equation for the small-deformation asymptotics.
//!
//! Units: ħ = 2m = 1 throughout.

pub mod asymptotics;
pub mod bs_solver;
pub mod kernels;
pub mod profiles;
pub mod quad;
pub mod quadrature;
pub mod special;

mod error;

pub use error::{Error, Result};

/// A point of the parameter plane ℝ².
pub type Point = [f64; 2];
