//! β-sweeps: numeric bound state, analytic lower bound and asymptotic
//! prediction side by side.

use deltaplane_core::asymptotics::{asymptotic_lambda, dalf_momentum, lower_bound_lambda, solve_delta_leading};
use deltaplane_core::bs_solver::{find_crossing, Bracket, CrossingOutcome};
use deltaplane_core::kernels::{PhysicalParams, SpectralCoordinate};
use deltaplane_core::profiles::DeformationProfile;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{config, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Solved,
    CertifiedAbsent,
    ResolutionLimit,
    Anomaly,
    Failed,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Solved => "solved",
            Status::CertifiedAbsent => "certified-absent",
            Status::ResolutionLimit => "resolution-limit",
            Status::Anomaly => "anomaly",
            Status::Failed => "failed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub beta: f64,
    pub kappa_star: Option<f64>,
    pub delta_numeric: Option<f64>,
    pub lambda_numeric: Option<f64>,
    pub lambda_lower_bound: f64,
    pub delta_pred: f64,
    pub lambda_asymptotic: f64,
    pub dalf0: f64,
    pub grid_n: usize,
    pub domain_radius: f64,
    /// `|μ_max(κ*) − 1|` when solved, else the closest sampled approach.
    pub mu_residual: Option<f64>,
    pub status: Status,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

/// One row per β, in input order. Row failures become `failed` rows.
pub fn run_sweep(cfg: &RunConfig) -> Result<SweepReport> {
    if cfg.beta.is_empty() {
        return Err(config("sweep needs a non-empty beta list"));
    }
    let profile = cfg.profile()?;
    let dalf0 = dalf_momentum(cfg.alpha, &profile)?.value;
    let lipschitz = profile.lipschitz();
    let rows = cfg
        .beta
        .par_iter()
        .map(|&beta| sweep_row(cfg, &profile, dalf0, lipschitz, beta))
        .collect();
    Ok(SweepReport { rows })
}

fn sweep_row(cfg: &RunConfig, profile: &DeformationProfile, dalf0: f64, lipschitz: f64, beta: f64) -> SweepRow {
    let alpha = cfg.alpha;
    let mut row = SweepRow {
        beta,
        kappa_star: None,
        delta_numeric: None,
        lambda_numeric: None,
        lambda_lower_bound: lower_bound_lambda(alpha, beta, lipschitz),
        delta_pred: 0.0,
        lambda_asymptotic: -0.25 * alpha * alpha,
        dalf0,
        grid_n: cfg.grid.n,
        domain_radius: f64::NAN,
        mu_residual: None,
        status: Status::Failed,
    };
    let params = match PhysicalParams::new(alpha, beta) {
        Ok(p) => p,
        Err(_) => return row,
    };
    if beta > 0.0 && !profile.is_zero() {
        match solve_delta_leading(alpha, beta, profile) {
            Ok(p) => row.delta_pred = p.delta_pred,
            Err(_) => return row,
        }
        row.lambda_asymptotic = asymptotic_lambda(alpha, beta, dalf0);
    }

    let bracket = Bracket::for_problem(&params, lipschitz);
    let grid = cfg.grid_spec();
    let lo_delta = SpectralCoordinate::with_delta(bracket.lo, alpha)
        .ok()
        .and_then(|s| s.delta)
        .unwrap_or(0.0);
    let grid_delta = if row.delta_pred > 0.0 { row.delta_pred } else { lo_delta };
    if let Ok(a) = grid.radius_for(profile, grid_delta) {
        row.domain_radius = a;
    }

    let mut options = cfg.crossing_options();
    options.delta_pred = Some(row.delta_pred);
    let closest = |curve: &[(f64, f64)]| curve.iter().map(|(_, m)| (m - 1.0).abs()).reduce(f64::min);
    match find_crossing(profile, &params, &grid, &options) {
        Ok(CrossingOutcome::Found(r)) => {
            row.kappa_star = Some(r.kappa_star);
            row.delta_numeric = Some(r.delta);
            row.lambda_numeric = Some(r.lambda_numeric);
            row.mu_residual = Some(r.mu_residual);
            row.domain_radius = r.truncation_radius;
            row.status = Status::Solved;
        }
        Ok(CrossingOutcome::Absent { curve }) => {
            row.mu_residual = closest(&curve);
            row.status = Status::CertifiedAbsent;
        }
        Ok(CrossingOutcome::ResolutionLimit { .. }) => row.status = Status::ResolutionLimit,
        Ok(CrossingOutcome::Anomaly { curve, .. }) => {
            row.mu_residual = closest(&curve);
            row.status = Status::Anomaly;
        }
        Err(_) => row.status = Status::Failed,
    }
    row
}
