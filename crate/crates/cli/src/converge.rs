//! Grid-refinement study of the crossing search at one β.

use deltaplane_core::asymptotics::solve_delta_leading;
use deltaplane_core::bs_solver::{find_crossing, CrossingOutcome, RadiusSpec};
use deltaplane_core::kernels::PhysicalParams;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use crate::config::RunConfig;
use crate::error::Result;
use crate::report::{float, opt_float, Format};
use crate::sweep::Status;

pub const CONVERGE_HEADER: &str = "n,domain_radius,status,kappa_star,lambda_numeric,mu_top_at_lower_end,lambda_change";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergeRow {
    pub n: usize,
    pub domain_radius: f64,
    pub status: Status,
    pub kappa_star: Option<f64>,
    pub lambda_numeric: Option<f64>,
    /// `μ_max` at the lower bracket end, the quantity that decides existence.
    pub mu_top_at_lower_end: Option<f64>,
    /// `|λ(n) − λ(previous n)|` between consecutive solved rows.
    pub lambda_change: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConvergeReport {
    pub beta: f64,
    pub rows: Vec<ConvergeRow>,
}

/// Runs the crossing search for each `converge.n` at a common radius and
/// without the resolution floor.
pub fn run_converge(cfg: &RunConfig) -> Result<ConvergeReport> {
    let profile = cfg.profile()?;
    let beta = cfg.converge.beta;
    let params = PhysicalParams::new(cfg.alpha, beta)?;
    let delta_pred = if beta > 0.0 && !profile.is_zero() {
        solve_delta_leading(cfg.alpha, beta, &profile)?.delta_pred
    } else {
        0.0
    };
    let radius = cfg.grid_spec().radius_for(&profile, delta_pred)?;
    let mut options = cfg.crossing_options();
    options.resolution_floor = None;
    options.delta_pred = Some(delta_pred);

    let mut rows: Vec<ConvergeRow> = Vec::new();
    let mut last_lambda: Option<f64> = None;
    for &n in &cfg.converge.n {
        let mut grid = cfg.grid_spec_with_n(n);
        grid.radius = RadiusSpec::Fixed(radius);
        let (status, kappa_star, lambda, mu_lo) = match find_crossing(&profile, &params, &grid, &options)? {
            CrossingOutcome::Found(r) => {
                let mu_lo = r.curve.first().map(|c| c.1);
                (Status::Solved, Some(r.kappa_star), Some(r.lambda_numeric), mu_lo)
            }
            CrossingOutcome::Absent { curve } => (Status::CertifiedAbsent, None, None, curve.first().map(|c| c.1)),
            CrossingOutcome::Anomaly { curve, .. } => (Status::Anomaly, None, None, curve.first().map(|c| c.1)),
            CrossingOutcome::ResolutionLimit { .. } => (Status::ResolutionLimit, None, None, None),
        };
        let change = match (lambda, last_lambda) {
            (Some(a), Some(b)) => Some((a - b).abs()),
            _ => None,
        };
        if lambda.is_some() {
            last_lambda = lambda;
        }
        rows.push(ConvergeRow {
            n,
            domain_radius: radius,
            status,
            kappa_star,
            lambda_numeric: lambda,
            mu_top_at_lower_end: mu_lo,
            lambda_change: change,
        });
    }
    Ok(ConvergeReport { beta, rows })
}

pub fn emit_converge(report: &ConvergeReport, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => Ok(serde_json::to_vec_pretty(report)?),
        Format::Csv => {
            let mut out = format!("{CONVERGE_HEADER}\n");
            for r in &report.rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.n,
                    float(r.domain_radius),
                    r.status.as_str(),
                    opt_float(r.kappa_star),
                    opt_float(r.lambda_numeric),
                    opt_float(r.mu_top_at_lower_end),
                    opt_float(r.lambda_change),
                );
            }
            Ok(out.into_bytes())
        }
    }
}
