//! The profile constant `D_{α,f}(δ)` and the small-deformation asymptotics.
//!
//! `D` is computed twice: as the position-space double integral
//! `2α³ ∬ G_κ(x−y) E(x,y) dx dy` and as the momentum-space integral
//! `∫ |p|²(α² − 2α³/(√(4|p|²+α²)+α)) |f̂(p)|² dp`. Agreement of the two is
//! the main end-to-end check of the crate.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::kernels::{e_factor_at, SpectralCoordinate};
use crate::profiles::DeformationProfile;
use crate::quad::{gauss_legendre, kronrod15_panel};
use crate::{error::invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Position,
    Momentum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DalfResult {
    pub value: f64,
    pub route: Route,
    /// `α²·2π∫ρ³|f̂|²` (momentum route only).
    pub d1: Option<f64>,
    /// `2α³·2π∫ρ³|f̂|²/(√(4ρ²+α²)+α)` (momentum route only).
    pub d2: Option<f64>,
    pub error_estimate: f64,
    pub delta: f64,
}

/// Momentum-route weight `α² − 2α³/(√(4ρ²+α²)+α)`; vanishes only at `ρ = 0`.
pub fn momentum_weight(alpha: f64, rho: f64) -> f64 {
    alpha * alpha - 2.0 * alpha.powi(3) / ((4.0 * rho * rho + alpha * alpha).sqrt() + alpha)
}

/// Fault hook for verification: multiplies `D2` before forming `D1 − D2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumTweak {
    pub d2_scale: f64,
}

impl Default for MomentumTweak {
    fn default() -> Self {
        Self { d2_scale: 1.0 }
    }
}

/// `D_{α,f}(0)` from the radial momentum integral.
pub fn dalf_momentum(alpha: f64, profile: &DeformationProfile) -> Result<DalfResult> {
    dalf_momentum_tweaked(alpha, profile, MomentumTweak::default())
}

pub fn dalf_momentum_tweaked(
    alpha: f64,
    profile: &DeformationProfile,
    tweak: MomentumTweak,
) -> Result<DalfResult> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(invalid("alpha must be > 0"));
    }
    let zero = DalfResult {
        value: 0.0,
        route: Route::Momentum,
        d1: Some(0.0),
        d2: Some(0.0),
        error_estimate: 0.0,
        delta: 0.0,
    };
    if profile.is_zero() {
        return Ok(zero);
    }
    // ∫ρ³|f̂|² and ∫ρ³|f̂|²/(√(4ρ²+α²)+α), panel by panel until the panels
    // stop contributing
    const PANELS_PER_CHUNK: usize = 16;
    const MAX_RHO_PANELS: usize = 40_000;
    let width = 0.5 / profile.support_radius();
    let integrand = |rho: f64| -> Result<[f64; 2]> {
        let fh = profile.radial_fourier(rho)?;
        let s = rho.powi(3) * fh * fh;
        Ok([s, s / ((4.0 * rho * rho + alpha * alpha).sqrt() + alpha)])
    };
    let mut sum = [0.0f64; 2];
    let mut err = [0.0f64; 2];
    let mut quiet = 0;
    let mut start = 0;
    loop {
        let chunk: Vec<Result<([f64; 2], [f64; 2])>> = (start..start + PANELS_PER_CHUNK)
            .into_par_iter()
            .map(|k| {
                let (a, b) = (k as f64 * width, (k + 1) as f64 * width);
                let mut failure = None;
                let out = kronrod15_panel(
                    |r| match integrand(r) {
                        Ok(v) => v,
                        Err(e) => {
                            failure = Some(e);
                            [0.0; 2]
                        }
                    },
                    a,
                    b,
                );
                failure.map_or(Ok(out), Err)
            })
            .collect();
        for panel in chunk {
            let (v, e) = panel?;
            for k in 0..2 {
                sum[k] += v[k];
                err[k] += e[k];
            }
            quiet = if v[0].abs() < 1e-12 * sum[0].abs() { quiet + 1 } else { 0 };
        }
        start += PANELS_PER_CHUNK;
        if quiet >= 8 {
            break;
        }
        if start >= MAX_RHO_PANELS {
            return Err(Error::QuadratureNotConverged {
                estimate: err[0],
                intervals: start,
            });
        }
    }
    let d1 = alpha * alpha * 2.0 * PI * sum[0];
    let d2 = tweak.d2_scale * 2.0 * alpha.powi(3) * 2.0 * PI * sum[1];
    // the quiet run bounds the tail well below the quadrature error
    let error_estimate = 2.0 * PI * (alpha * alpha * err[0] + 2.0 * alpha.powi(3) * err[1])
        + 2.0 * PI * alpha * alpha * 1e-12 * sum[0];
    Ok(DalfResult {
        value: d1 - d2,
        d1: Some(d1),
        d2: Some(d2),
        error_estimate,
        ..zero
    })
}

/// Node counts of the position-space rule.
///
/// The outer integral runs over `|x| = ρ ∈ [0, R]` (the integrand is
/// radial in `x`); around each `x` the inner one uses polar coordinates
/// `y = x + r(cos θ, sin θ)`, trapezoidal in `θ` and Gauss–Legendre in `r`
/// up to the support boundary. Outside the support the `r`-integral is
/// done in closed form. Gauss nodes have `r > 0`, so `y ≠ x` always.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionRule {
    pub n_rho: usize,
    pub n_theta: usize,
    pub n_r: usize,
}

impl Default for PositionRule {
    fn default() -> Self {
        Self {
            n_rho: 64,
            n_theta: 128,
            n_r: 64,
        }
    }
}

impl PositionRule {
    fn coarse(&self) -> Self {
        Self {
            n_rho: (self.n_rho / 2).max(1),
            n_theta: (self.n_theta / 2).max(1),
            n_r: (self.n_r / 2).max(1),
        }
    }
}

/// `D_{α,f}(δ) = 2α³ ∬ G_κ E` with `κ = √(α²/4 + δ²)`.
pub fn dalf_position(alpha: f64, profile: &DeformationProfile, delta: f64) -> Result<DalfResult> {
    dalf_position_with(alpha, profile, delta, PositionRule::default())
}

/// As [`dalf_position`], with explicit node counts. The error estimate is
/// the difference to the same rule at half the node counts.
pub fn dalf_position_with(
    alpha: f64,
    profile: &DeformationProfile,
    delta: f64,
    rule: PositionRule,
) -> Result<DalfResult> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(invalid("alpha must be > 0"));
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(invalid("delta must lie in [0, 1]"));
    }
    if rule.n_rho == 0 || rule.n_theta == 0 || rule.n_r == 0 {
        return Err(invalid("position rule needs at least one node per direction"));
    }
    let kappa = SpectralCoordinate::from_delta(delta, alpha)?.kappa;
    let fine = position_integral(profile, kappa, rule);
    let coarse = position_integral(profile, kappa, rule.coarse());
    let scale = 2.0 * alpha.powi(3);
    Ok(DalfResult {
        value: scale * fine,
        route: Route::Position,
        d1: None,
        d2: None,
        error_estimate: scale * (fine - coarse).abs(),
        delta,
    })
}

/// `∬_{(S×ℝ²)∪(ℝ²×S)} G_κ E`, with `S` the support disk.
fn position_integral(profile: &DeformationProfile, kappa: f64, rule: PositionRule) -> f64 {
    if profile.is_zero() {
        return 0.0;
    }
    let big_r = profile.support_radius();
    let (xr, wr) = gauss_legendre(rule.n_rho);
    let (xs, ws) = gauss_legendre(rule.n_r);
    let dtheta = 2.0 * PI / rule.n_theta as f64;
    let angles: Vec<(f64, f64)> = (0..rule.n_theta)
        .map(|k| ((k as f64 + 0.5) * dtheta).sin_cos())
        .collect();
    let inv4pi = 1.0 / (4.0 * PI);

    let shells: Vec<f64> = (0..rule.n_rho)
        .into_par_iter()
        .map(|i| {
            let rho = 0.5 * big_r * (xr[i] + 1.0);
            let fx = profile.radial_value(rho);
            let gx2 = profile.radial_derivative(rho).powi(2);
            let mut shell = 0.0;
            for &(sin, cos) in &angles {
                // distance from x = (ρ, 0) to the support boundary along θ
                let b = rho * cos;
                let a = -b + (b * b - rho * rho + big_r * big_r).max(0.0).sqrt();
                let mut inner = 0.0;
                for (t, w) in xs.iter().zip(&ws) {
                    let r = 0.5 * a * (t + 1.0);
                    let y = [rho + r * cos, r * sin];
                    let e = e_factor_at(gx2, profile.gradient_norm_sq(y), fx - profile.value(y), kappa, r);
                    inner += w * (-kappa * r).exp() * e;
                }
                inner *= 0.5 * a * inv4pi;
                let decay = (-kappa * a).exp();
                let outside = inv4pi * decay * (0.25 * gx2 / kappa - 0.5 * fx * fx / a);
                shell += inner + 2.0 * outside;
            }
            2.0 * PI * wr[i] * rho * shell * dtheta
        })
        .collect();
    0.5 * big_r * shells.iter().sum::<f64>()
}

/// Result of the leading-order implicit equation `δ = exp(−8π/(β²D(δ)))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticPrediction {
    pub beta: f64,
    /// May underflow to zero; `log_delta` stays exact.
    pub delta_pred: f64,
    pub log_delta: f64,
    /// `−α²/4 − δ²`.
    pub lambda_pred: f64,
    /// `D(δ_pred)`.
    pub dalf: f64,
    /// `ln δ_k` per fixed-point iterate.
    pub trace: Vec<f64>,
}

const FIXED_POINT_MAX: usize = 100;
const FIXED_POINT_RTOL: f64 = 1e-12;

/// Solves `δ = exp(−8π/(β²D_{α,f}(δ)))` with `D` from [`dalf_position`].
pub fn solve_delta_leading(
    alpha: f64,
    beta: f64,
    profile: &DeformationProfile,
) -> Result<AsymptoticPrediction> {
    solve_delta_leading_with(alpha, beta, |delta| {
        Ok(dalf_position(alpha, profile, delta)?.value)
    })
}

/// Fixed-point solve of `δ = exp(−8π/(β²D(δ)))` for a caller-supplied
/// `D`, iterated on `ℓ = ln δ` so that exponentially small `δ` is
/// represented exactly.
pub fn solve_delta_leading_with<F>(alpha: f64, beta: f64, mut dalf: F) -> Result<AsymptoticPrediction>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(invalid("alpha must be > 0"));
    }
    if !(beta.is_finite() && beta > 0.0) {
        return Err(invalid("beta must be > 0 for the asymptotic solve"));
    }
    let step = |d: f64| -> Result<f64> {
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::NotConverged(format!("D = {d} is not positive")));
        }
        Ok(-8.0 * PI / (beta * beta * d))
    };
    let mut d = dalf(0.0)?;
    let mut ell = step(d)?;
    let mut trace = vec![ell];
    for _ in 0..FIXED_POINT_MAX {
        if ell >= (0.99f64).ln() {
            return Err(Error::NotConverged(format!(
                "delta = {} left (0, 0.99)",
                ell.exp()
            )));
        }
        d = dalf(ell.exp())?;
        let next = step(d)?;
        trace.push(next);
        let done = (next - ell).abs() <= FIXED_POINT_RTOL;
        ell = next;
        if done {
            let delta = ell.exp();
            return Ok(AsymptoticPrediction {
                beta,
                delta_pred: delta,
                log_delta: ell,
                lambda_pred: -0.25 * alpha * alpha - delta * delta,
                dalf: d,
                trace,
            });
        }
    }
    Err(Error::NotConverged(format!(
        "implicit equation: no convergence in {FIXED_POINT_MAX} iterations"
    )))
}

/// Leading term `−α²/4 − exp(−16π/(Dβ²))`.
pub fn asymptotic_lambda(alpha: f64, beta: f64, dalf: f64) -> f64 {
    -0.25 * alpha * alpha - (-16.0 * PI / (dalf * beta * beta)).exp()
}

/// `−(α²/4)(1 + β²L_f²)`.
pub fn lower_bound_lambda(alpha: f64, beta: f64, lipschitz: f64) -> f64 {
    -0.25 * alpha * alpha * (1.0 + beta * beta * lipschitz * lipschitz)
}
