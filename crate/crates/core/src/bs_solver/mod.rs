//! Discretized Birman–Schwinger operator `αQ_β(κ)`: assembly, top
//! eigenvalue, and the search for `μ_max(κ*) = 1`.

mod assembly;
mod crossing;
mod eigen;

pub use assembly::{assemble, AssemblyScheme, BsMatrix, DenseSymmetric, Provenance};
pub use crossing::{
    find_crossing, mu_curve, Bracket, CrossingOptions, CrossingOutcome, GroundStateReport,
};
pub use eigen::{power_iteration, top_eigenvalue, EigenResult, EIGEN_MAX_ITERATIONS, EIGEN_REL_TOL};

use serde::{Deserialize, Serialize};

use crate::profiles::DeformationProfile;
use crate::quadrature::{build_panel_grid, TruncatedGrid};
use crate::{error::invalid, Result};

/// Largest automatic truncation radius.
pub const AUTO_RADIUS_MAX: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadiusSpec {
    Fixed(f64),
    /// `A = R + 8/δ`, clamped to `[R + 2, 40]`.
    Auto,
}

/// How to build the Nyström grid for a solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    pub radius: RadiusSpec,
    /// Gauss points per panel and axis.
    pub panel_order: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            n: 48,
            radius: RadiusSpec::Auto,
            panel_order: 2,
        }
    }
}

impl GridSpec {
    pub fn new(n: usize, radius: RadiusSpec) -> Self {
        Self {
            n,
            radius,
            ..Self::default()
        }
    }

    /// Truncation radius for a target in-plane decay rate `δ`.
    pub fn radius_for(&self, profile: &DeformationProfile, delta_target: f64) -> Result<f64> {
        match self.radius {
            RadiusSpec::Fixed(a) if a.is_finite() && a > 0.0 => Ok(a),
            RadiusSpec::Fixed(_) => Err(invalid("grid radius must be > 0")),
            RadiusSpec::Auto => {
                let r = profile.support_radius();
                let a = r + 8.0 / delta_target;
                let a = if a.is_nan() { AUTO_RADIUS_MAX } else { a };
                Ok(a.clamp(r + 2.0, AUTO_RADIUS_MAX.max(r + 2.0)))
            }
        }
    }

    pub fn build(&self, profile: &DeformationProfile, delta_target: f64) -> Result<TruncatedGrid> {
        build_panel_grid(self.radius_for(profile, delta_target)?, self.n, self.panel_order)
    }
}
