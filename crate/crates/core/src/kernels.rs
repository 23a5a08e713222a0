//! Scalar kernels on the deformed plane and the Fourier multipliers of the
//! flat problem.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::profiles::DeformationProfile;
use crate::{error::invalid, Error, Point, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub alpha: f64,
    pub beta: f64,
}

impl PhysicalParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(invalid("alpha must be > 0"));
        }
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(invalid("beta must be >= 0"));
        }
        Ok(Self { alpha, beta })
    }

    /// Essential-spectrum threshold `−α²/4`.
    pub fn threshold(&self) -> f64 {
        -0.25 * self.alpha * self.alpha
    }
}

/// Consistent triple `(κ, δ, λ)` with `λ = −κ²` and, when present,
/// `δ² = κ² − α²/4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralCoordinate {
    pub kappa: f64,
    pub delta: Option<f64>,
    pub lambda: f64,
}

impl SpectralCoordinate {
    /// Coordinate without a `δ` component.
    pub fn from_kappa(kappa: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(invalid("kappa must be > 0"));
        }
        Ok(Self {
            kappa,
            delta: None,
            lambda: -kappa * kappa,
        })
    }

    /// Coordinate carrying `δ = √(κ² − α²/4)`; needs `κ ≥ α/2`.
    pub fn with_delta(kappa: f64, alpha: f64) -> Result<Self> {
        let mut sc = Self::from_kappa(kappa)?;
        let half = 0.5 * alpha;
        if kappa < half {
            return Err(invalid(format!("kappa = {kappa} lies below alpha/2 = {half}")));
        }
        sc.delta = Some(((kappa - half) * (kappa + half)).sqrt());
        Ok(sc)
    }

    /// Coordinate with `κ = √(δ² + α²/4)`.
    pub fn from_delta(delta: f64, alpha: f64) -> Result<Self> {
        if !(delta.is_finite() && delta >= 0.0) {
            return Err(invalid("delta must be >= 0"));
        }
        let kappa = (delta * delta + 0.25 * alpha * alpha).sqrt();
        let mut sc = Self::from_kappa(kappa)?;
        sc.delta = Some(delta);
        Ok(sc)
    }
}

/// Free Green's function `e^{−κd}/(4πd)`.
pub fn green(kappa: f64, d: f64) -> Result<f64> {
    if d <= 0.0 {
        return Err(Error::SingularPoint("Green's function at zero distance"));
    }
    Ok(green_unchecked(kappa, d))
}

#[inline]
pub(crate) fn green_unchecked(kappa: f64, d: f64) -> f64 {
    (-kappa * d).exp() / (4.0 * PI * d)
}

#[inline]
fn dist(x: Point, y: Point) -> f64 {
    (x[0] - y[0]).hypot(x[1] - y[1])
}

/// Distance between the lifted points `(x, βf(x))` and `(y, βf(y))`.
pub fn surface_distance(profile: &DeformationProfile, beta: f64, x: Point, y: Point) -> f64 {
    let dz = beta * (profile.value(x) - profile.value(y));
    dist(x, y).hypot(dz)
}

/// Area element `g_β(x) = (1 + β²|∇f(x)|²)^{1/2}`.
pub fn jacobian(profile: &DeformationProfile, beta: f64, x: Point) -> f64 {
    (1.0 + beta * beta * profile.gradient_norm_sq(x)).sqrt()
}

/// Kernel of the Birman–Schwinger operator, without the factor `α`.
pub fn bs_kernel(
    profile: &DeformationProfile,
    params: &PhysicalParams,
    sc: &SpectralCoordinate,
    x: Point,
    y: Point,
) -> Result<f64> {
    if x == y {
        return Err(Error::SingularPoint("Birman-Schwinger kernel on the diagonal"));
    }
    let d = surface_distance(profile, params.beta, x, y);
    let gx = jacobian(profile, params.beta, x);
    let gy = jacobian(profile, params.beta, y);
    Ok((gx * gy).sqrt() * green_unchecked(sc.kappa, d))
}

/// `E(x,y) = (|∇f(x)|² + |∇f(y)|²)/4 − |f(x)−f(y)|²(κ|x−y|+1)/(2|x−y|²)`.
pub fn e_factor(profile: &DeformationProfile, kappa: f64, x: Point, y: Point) -> Result<f64> {
    let r = dist(x, y);
    if r == 0.0 {
        return Err(Error::SingularPoint("E-factor on the diagonal"));
    }
    Ok(e_factor_at(
        profile.gradient_norm_sq(x),
        profile.gradient_norm_sq(y),
        profile.value(x) - profile.value(y),
        kappa,
        r,
    ))
}

/// `E` from precomputed gradient norms, height difference and distance.
#[inline]
pub(crate) fn e_factor_at(gx2: f64, gy2: f64, df: f64, kappa: f64, r: f64) -> f64 {
    0.25 * (gx2 + gy2) - df * df * (kappa * r + 1.0) / (2.0 * r * r)
}

/// `G_κ(x−y)·E(x,y)` with `κ = √(α²/4 + δ²)`.
pub fn d1_kernel(
    profile: &DeformationProfile,
    alpha: f64,
    delta: f64,
    x: Point,
    y: Point,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(invalid("delta must lie in [0, 1]"));
    }
    let kappa = SpectralCoordinate::from_delta(delta, alpha)?.kappa;
    let e = e_factor(profile, kappa, x, y)?;
    Ok(green_unchecked(kappa, dist(x, y)) * e)
}

/// `τ = √(|p|² + δ² + α²/4)`.
pub fn tau(alpha: f64, delta: f64, p2: f64) -> f64 {
    (p2 + delta * delta + 0.25 * alpha * alpha).sqrt()
}

/// Symbol of the flat operator, `1/(2√(|p|² + κ²))`.
pub fn q0_mult(kappa: f64, p2: f64) -> f64 {
    0.5 / (p2 + kappa * kappa).sqrt()
}

/// `m = α²/(2(|p|² + δ²))`; undefined at `p = 0, δ = 0`.
pub fn m_mult(alpha: f64, delta: f64, p2: f64) -> Result<f64> {
    let s = p2 + delta * delta;
    if s == 0.0 {
        return Err(Error::SingularPoint("m multiplier at p = 0, delta = 0"));
    }
    Ok(alpha * alpha / (2.0 * s))
}

/// `n = 1 + α/(2τ + α)`.
pub fn n_mult(alpha: f64, delta: f64, p2: f64) -> f64 {
    1.0 + alpha / (2.0 * tau(alpha, delta, p2) + alpha)
}

/// `(1 − α/(2τ))⁻¹`; undefined at `p = 0, δ = 0`.
pub fn f_mult(alpha: f64, delta: f64, p2: f64) -> Result<f64> {
    let t = tau(alpha, delta, p2);
    let den = 1.0 - alpha / (2.0 * t);
    if p2 + delta * delta == 0.0 || den == 0.0 {
        return Err(Error::SingularPoint("f multiplier at p = 0, delta = 0"));
    }
    Ok(1.0 / den)
}

/// `∂n/∂δ = −2αδ/((2τ + α)²τ)`.
pub fn dn_mult(alpha: f64, delta: f64, p2: f64) -> f64 {
    let t = tau(alpha, delta, p2);
    let s = 2.0 * t + alpha;
    -2.0 * alpha * delta / (s * s * t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Multipliers {
    pub tau: f64,
    pub q0: f64,
    /// Absent at `p = 0, δ = 0`.
    pub m: Option<f64>,
    pub n: f64,
    /// Absent at `p = 0, δ = 0`.
    pub f: Option<f64>,
    pub dn: f64,
}

/// All multipliers at momentum `p`, with `κ = √(δ² + α²/4)` for `q0`.
pub fn multipliers(alpha: f64, delta: f64, p: Point) -> Result<Multipliers> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(invalid("alpha must be > 0"));
    }
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(invalid("delta must be >= 0"));
    }
    let p2 = p[0] * p[0] + p[1] * p[1];
    let t = tau(alpha, delta, p2);
    Ok(Multipliers {
        tau: t,
        q0: q0_mult(tau(alpha, delta, 0.0), p2),
        m: m_mult(alpha, delta, p2).ok(),
        n: n_mult(alpha, delta, p2),
        f: f_mult(alpha, delta, p2).ok(),
        dn: dn_mult(alpha, delta, p2),
    })
}
