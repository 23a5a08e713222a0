use serde::{Deserialize, Serialize};

use super::{assemble, top_eigenvalue, GridSpec};
use crate::asymptotics::{lower_bound_lambda, solve_delta_leading};
use crate::kernels::{PhysicalParams, SpectralCoordinate};
use crate::profiles::DeformationProfile;
use crate::quadrature::{GridRule, TruncatedGrid};
use crate::{error::invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingOptions {
    /// Uniform samples of `h(κ) = μ_max(κ) − 1` across the bracket.
    pub samples: usize,
    /// Bisection stops once the bracket is below `kappa_rtol·κ`.
    pub kappa_rtol: f64,
    /// Refuse to solve when the predicted `δ` is below this value.
    pub resolution_floor: Option<f64>,
    /// Predicted `δ`; computed from the leading-order equation if absent
    /// and a floor is set.
    pub delta_pred: Option<f64>,
}

impl Default for CrossingOptions {
    fn default() -> Self {
        Self {
            samples: 20,
            kappa_rtol: 1e-8,
            resolution_floor: Some(1e-3),
            delta_pred: None,
        }
    }
}

/// Search interval for `κ*`: `[α/2·(1+1e−4), α/2·(1+β²L_f²)^{1/2} + 1e−3]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn for_problem(params: &PhysicalParams, lipschitz: f64) -> Self {
        let half = 0.5 * params.alpha;
        let b = params.beta * lipschitz;
        Self {
            lo: half * (1.0 + 1e-4),
            hi: half * (1.0 + b * b).sqrt() + 1e-3,
        }
    }

    /// `n` equally spaced points including both ends.
    pub fn samples(&self, n: usize) -> Vec<f64> {
        if n < 2 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (n - 1) as f64;
        (0..n)
            .map(|k| if k + 1 == n { self.hi } else { self.lo + k as f64 * step })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundStateReport {
    pub coordinate: SpectralCoordinate,
    pub kappa_star: f64,
    pub delta: f64,
    pub lambda_numeric: f64,
    pub bracket: Bracket,
    pub truncation_radius: f64,
    pub n_per_axis: usize,
    pub rule: GridRule,
    /// `e^{−δ(A−R)}`.
    pub tail_indicator: f64,
    /// `|μ_max(κ*) − 1|`.
    pub mu_residual: f64,
    /// `−(α²/4)(1 + β²L_f²)`.
    pub lambda_lower_bound: f64,
    /// `−α²/4`.
    pub lambda_upper_bound: f64,
    pub curve: Vec<(f64, f64)>,
    pub bisection_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum CrossingOutcome {
    Found(GroundStateReport),
    /// `h < 0` on every sample: no eigenvalue below the threshold at this
    /// resolution.
    Absent { curve: Vec<(f64, f64)> },
    /// The predicted `δ` is below the resolution floor.
    ResolutionLimit { delta_pred: f64 },
    /// More than one sign change on the sampled bracket.
    Anomaly {
        curve: Vec<(f64, f64)>,
        sign_changes: usize,
    },
}

fn top_mu(
    profile: &DeformationProfile,
    params: &PhysicalParams,
    grid: &TruncatedGrid,
    kappa: f64,
) -> Result<f64> {
    let sc = SpectralCoordinate::from_kappa(kappa)?;
    let m = assemble(profile, params, &sc, grid)?;
    Ok(top_eigenvalue(&m.matrix)?.mu_max)
}

/// `μ_max(αQ_β(κ))` per `κ`, sorted by `κ`. With an automatic radius each
/// point gets its own grid sized for `δ(κ)`.
pub fn mu_curve(
    profile: &DeformationProfile,
    params: &PhysicalParams,
    grid: &GridSpec,
    kappas: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let mut ks = kappas.to_vec();
    ks.sort_by(f64::total_cmp);
    ks.iter()
        .map(|&k| {
            let delta = SpectralCoordinate::with_delta(k, params.alpha)?
                .delta
                .unwrap_or(0.0);
            if delta == 0.0 {
                return Err(invalid("mu_curve needs kappa > alpha/2"));
            }
            let g = grid.build(profile, delta)?;
            Ok((k, top_mu(profile, params, &g, k)?))
        })
        .collect()
}

fn sign_changes(curve: &[(f64, f64)]) -> Vec<usize> {
    curve
        .windows(2)
        .enumerate()
        .filter(|(_, w)| (w[0].1 >= 1.0) != (w[1].1 >= 1.0))
        .map(|(i, _)| i)
        .collect()
}

/// Locates `κ*` with `μ_max(αQ_β(κ*)) = 1` by sampling the bracket and
/// bisecting the single sign change. One grid is used for the whole
/// search, sized for the predicted `δ` (or for the lower bracket end).
pub fn find_crossing(
    profile: &DeformationProfile,
    params: &PhysicalParams,
    grid: &GridSpec,
    options: &CrossingOptions,
) -> Result<CrossingOutcome> {
    let alpha = params.alpha;
    let lf = profile.lipschitz();
    let bracket = Bracket::for_problem(params, lf);
    let lo_delta = SpectralCoordinate::with_delta(bracket.lo, alpha)?
        .delta
        .unwrap_or(0.0);

    if params.beta == 0.0 || profile.is_zero() {
        // Q_0(κ) ≤ 1/(2κ) < 1/α on the whole bracket; one evaluation at the
        // lower end certifies the absence
        let g = grid.build(profile, lo_delta)?;
        let mu = top_mu(profile, params, &g, bracket.lo)?;
        if mu < 1.0 {
            return Ok(CrossingOutcome::Absent {
                curve: vec![(bracket.lo, mu)],
            });
        }
    }

    let delta_pred = match (options.delta_pred, options.resolution_floor) {
        (Some(d), _) => Some(d),
        (None, Some(_)) if params.beta > 0.0 && !profile.is_zero() => {
            Some(solve_delta_leading(alpha, params.beta, profile)?.delta_pred)
        }
        _ => None,
    };
    if let (Some(floor), Some(d)) = (options.resolution_floor, delta_pred) {
        if d < floor {
            return Ok(CrossingOutcome::ResolutionLimit { delta_pred: d });
        }
    }

    let grid_delta = delta_pred.filter(|d| *d > 0.0).unwrap_or(lo_delta);
    let g = grid.build(profile, grid_delta)?;
    let curve: Vec<(f64, f64)> = bracket
        .samples(options.samples)
        .into_iter()
        .map(|k| Ok((k, top_mu(profile, params, &g, k)?)))
        .collect::<Result<_>>()?;
    let changes = sign_changes(&curve);
    match changes.len() {
        0 => return Ok(CrossingOutcome::Absent { curve }),
        1 => {}
        n => {
            return Ok(CrossingOutcome::Anomaly {
                curve,
                sign_changes: n,
            })
        }
    }

    // μ_max decreases in κ, so h ≥ 0 at a and h < 0 at b
    let i = changes[0];
    let (mut a, mut b) = (curve[i].0, curve[i + 1].0);
    let mut steps = 0;
    while b - a > options.kappa_rtol * a {
        let mid = 0.5 * (a + b);
        if top_mu(profile, params, &g, mid)? >= 1.0 {
            a = mid;
        } else {
            b = mid;
        }
        steps += 1;
    }
    let kappa_star = 0.5 * (a + b);
    let mu_star = top_mu(profile, params, &g, kappa_star)?;
    let coordinate = SpectralCoordinate::with_delta(kappa_star, alpha)?;
    let delta = coordinate.delta.unwrap_or(0.0);
    Ok(CrossingOutcome::Found(GroundStateReport {
        coordinate,
        kappa_star,
        delta,
        lambda_numeric: coordinate.lambda,
        bracket,
        truncation_radius: g.truncation_radius,
        n_per_axis: g.n_per_axis,
        rule: g.rule,
        tail_indicator: (-delta * (g.truncation_radius - profile.support_radius())).exp(),
        mu_residual: (mu_star - 1.0).abs(),
        lambda_lower_bound: lower_bound_lambda(alpha, params.beta, lf),
        lambda_upper_bound: params.threshold(),
        curve,
        bisection_steps: steps,
    }))
}
