//! Deformation profiles `f: ℝ² → ℝ`.
//!
//! Every builtin profile is radial and compactly supported in the closed
//! disk of radius `R`. The surface carrying the interaction is the graph
//! `x₃ = β f(x)`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::quad;
use crate::special::bessel_j0;
use crate::{error::invalid, Point, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileKind {
    /// `h·exp(1 − 1/(1 − (r/R)²))` for `r < R`, zero otherwise.
    Bump,
    /// `f ≡ 0`, the undeformed plane.
    Zero,
}

#[derive(Debug, Clone)]
pub struct DeformationProfile {
    kind: ProfileKind,
    height: f64,
    radius: f64,
    lipschitz: OnceLock<f64>,
}

impl PartialEq for DeformationProfile {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.height == other.height && self.radius == other.radius
    }
}

impl DeformationProfile {
    pub fn new(kind: ProfileKind, height: f64, radius: f64) -> Result<Self> {
        if !height.is_finite() {
            return Err(invalid("profile height must be finite"));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(invalid("profile radius must be > 0"));
        }
        Ok(Self {
            kind,
            height,
            radius,
            lipschitz: OnceLock::new(),
        })
    }

    pub fn bump(height: f64, radius: f64) -> Result<Self> {
        Self::new(ProfileKind::Bump, height, radius)
    }

    /// The flat plane. Its nominal support radius is one.
    pub fn zero() -> Self {
        Self::new(ProfileKind::Zero, 0.0, 1.0).expect("valid zero profile")
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn support_radius(&self) -> f64 {
        self.radius
    }

    /// True when `f` vanishes identically.
    pub fn is_zero(&self) -> bool {
        self.kind == ProfileKind::Zero || self.height == 0.0
    }

    /// Same profile with the height multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.kind, self.height * factor, self.radius)
    }

    /// Radial shape `f(r)`, `r ≥ 0`.
    pub fn radial_value(&self, r: f64) -> f64 {
        match self.kind {
            ProfileKind::Zero => 0.0,
            ProfileKind::Bump => {
                let s = r / self.radius;
                if s >= 1.0 {
                    return 0.0;
                }
                let q = 1.0 - s * s;
                self.height * (1.0 - 1.0 / q).exp()
            }
        }
    }

    /// Radial derivative `f′(r)`.
    pub fn radial_derivative(&self, r: f64) -> f64 {
        match self.kind {
            ProfileKind::Zero => 0.0,
            ProfileKind::Bump => {
                let s = r / self.radius;
                if s >= 1.0 {
                    return 0.0;
                }
                let q = 1.0 - s * s;
                let f = self.height * (1.0 - 1.0 / q).exp();
                -2.0 * s * f / (q * q * self.radius)
            }
        }
    }

    pub fn value(&self, x: Point) -> f64 {
        self.radial_value(x[0].hypot(x[1]))
    }

    /// `∇f(x) = f′(|x|)·x/|x|`, with `∇f(0) = 0`.
    pub fn gradient(&self, x: Point) -> Point {
        let r = x[0].hypot(x[1]);
        if r == 0.0 || r >= self.radius || self.is_zero() {
            return [0.0, 0.0];
        }
        let d = self.radial_derivative(r) / r;
        [d * x[0], d * x[1]]
    }

    pub fn gradient_norm_sq(&self, x: Point) -> f64 {
        let d = self.radial_derivative(x[0].hypot(x[1]));
        d * d
    }

    /// Lipschitz constant `L_f = max |f′(r)|`, computed once and cached.
    pub fn lipschitz(&self) -> f64 {
        *self.lipschitz.get_or_init(|| self.compute_lipschitz())
    }

    fn compute_lipschitz(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        const SAMPLES: usize = 4096;
        let h = self.radius / SAMPLES as f64;
        let slope = |r: f64| self.radial_derivative(r).abs();
        let (best, best_val) = (0..=SAMPLES)
            .map(|i| (i, slope(i as f64 * h)))
            .fold((0, -1.0), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });

        // golden-section refinement on the bracketing sample interval
        let mut a = best.saturating_sub(1) as f64 * h;
        let mut b = ((best + 1).min(SAMPLES)) as f64 * h;
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut c = b - inv_phi * (b - a);
        let mut d = a + inv_phi * (b - a);
        let (mut fc, mut fd) = (slope(c), slope(d));
        while b - a > 1e-13 * self.radius {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = slope(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = slope(d);
            }
        }
        best_val.max(fc).max(fd)
    }

    /// Radial Fourier transform under the unitary convention
    /// `f̂(p) = (2π)⁻¹ ∫ f(x) e^{−ip·x} dx`, i.e. the Hankel transform
    /// `f̂(ρ) = ∫₀^R f(r) J₀(ρr) r dr`.
    pub fn radial_fourier(&self, rho: f64) -> Result<f64> {
        if !(rho.is_finite() && rho >= 0.0) {
            return Err(invalid("momentum magnitude must be >= 0"));
        }
        if self.is_zero() {
            return Ok(0.0);
        }
        let i = quad::integrate(
            |r| self.radial_value(r) * bessel_j0(rho * r) * r,
            0.0,
            self.radius,
            1e-13,
            0.0,
        )?;
        Ok(i.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canonical() -> DeformationProfile {
        DeformationProfile::bump(1.0, 1.0).unwrap()
    }

    #[test]
    fn bump_values() {
        let f = canonical();
        assert_eq!(f.value([0.0, 0.0]), 1.0);
        assert_eq!(f.value([1.5, 0.0]), 0.0);
        assert_eq!(f.value([1.0, 0.0]), 0.0);
        let want = (-0.5625f64).exp();
        assert!((f.value([0.6, 0.0]) - want).abs() < 1e-15);
        assert!((want - 0.56978).abs() < 1e-5);
    }

    #[test]
    fn bump_gradient() {
        let f = canonical();
        assert_eq!(f.gradient([0.0, 0.0]), [0.0, 0.0]);
        assert_eq!(f.gradient([2.0, 0.0]), [0.0, 0.0]);
        let g = f.gradient([0.6, 0.0]);
        let h = 1e-6;
        let fd = (f.value([0.6 + h, 0.0]) - f.value([0.6 - h, 0.0])) / (2.0 * h);
        assert!((g[0] - fd).abs() < 1e-6, "{} vs {fd}", g[0]);
        assert!((g[0] + 1.6693).abs() < 1e-4);
        assert_eq!(g[1], 0.0);
    }

    #[test]
    fn zero_profile_is_flat() {
        let f = DeformationProfile::zero();
        assert_eq!(f.value([0.1, 0.2]), 0.0);
        assert_eq!(f.gradient([0.1, 0.2]), [0.0, 0.0]);
        assert_eq!(f.lipschitz(), 0.0);
        assert_eq!(f.radial_fourier(3.0).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(DeformationProfile::bump(1.0, 0.0).is_err());
        assert!(DeformationProfile::bump(f64::NAN, 1.0).is_err());
        assert!(canonical().radial_fourier(-1.0).is_err());
    }

    #[test]
    fn lipschitz_is_linear_in_height() {
        let one = canonical().lipschitz();
        let two = DeformationProfile::bump(2.0, 1.0).unwrap().lipschitz();
        assert_eq!(two, 2.0 * one);
    }

    #[test]
    fn lipschitz_matches_dense_sampling() {
        let f = canonical();
        let n = 1_000_000;
        let oracle = (0..=n)
            .map(|i| f.radial_derivative(i as f64 / n as f64).abs())
            .fold(0.0, f64::max);
        let l = f.lipschitz();
        assert!(l >= oracle * (1.0 - 1e-12));
        assert!((l - oracle).abs() / oracle < 1e-4, "{l} vs {oracle}");
    }
}
