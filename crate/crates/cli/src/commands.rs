//! Reports of the `dalf` and `predict` subcommands.

use deltaplane_core::asymptotics::{
    asymptotic_lambda, dalf_momentum, dalf_position, lower_bound_lambda, solve_delta_leading, DalfResult,
};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use crate::config::RunConfig;
use crate::error::Result;
use crate::report::{float, opt_float, Format};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DalfReport {
    pub alpha: f64,
    pub momentum: DalfResult,
    pub position: DalfResult,
    /// `|position − momentum| / momentum`.
    pub relative_gap: f64,
}

pub fn run_dalf(cfg: &RunConfig) -> Result<DalfReport> {
    let profile = cfg.profile()?;
    let momentum = dalf_momentum(cfg.alpha, &profile)?;
    let position = dalf_position(cfg.alpha, &profile, 0.0)?;
    let relative_gap = if momentum.value == 0.0 && position.value == 0.0 {
        0.0
    } else {
        (position.value - momentum.value).abs() / momentum.value.abs()
    };
    Ok(DalfReport {
        alpha: cfg.alpha,
        momentum,
        position,
        relative_gap,
    })
}

pub fn emit_dalf(report: &DalfReport, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => Ok(serde_json::to_vec_pretty(report)?),
        Format::Csv => {
            let mut out = String::from("route,value,d1,d2,error_estimate,delta\n");
            for (route, d) in [("momentum", &report.momentum), ("position", &report.position)] {
                let _ = writeln!(
                    out,
                    "{route},{},{},{},{},{}",
                    float(d.value),
                    opt_float(d.d1),
                    opt_float(d.d2),
                    float(d.error_estimate),
                    float(d.delta)
                );
            }
            Ok(out.into_bytes())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictRow {
    pub beta: f64,
    pub delta_pred: Option<f64>,
    pub log_delta: Option<f64>,
    pub lambda_pred: Option<f64>,
    pub lambda_asymptotic: Option<f64>,
    pub lambda_lower_bound: f64,
    pub dalf_at_delta: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PredictReport {
    pub alpha: f64,
    pub dalf0: f64,
    pub rows: Vec<PredictRow>,
}

/// Leading-order prediction for each configured β.
pub fn run_predict(cfg: &RunConfig) -> Result<PredictReport> {
    let profile = cfg.profile()?;
    let dalf0 = dalf_momentum(cfg.alpha, &profile)?.value;
    let lf = profile.lipschitz();
    let rows = cfg
        .beta
        .iter()
        .map(|&beta| {
            let mut row = PredictRow {
                beta,
                delta_pred: None,
                log_delta: None,
                lambda_pred: None,
                lambda_asymptotic: None,
                lambda_lower_bound: lower_bound_lambda(cfg.alpha, beta, lf),
                dalf_at_delta: None,
                error: None,
            };
            match solve_delta_leading(cfg.alpha, beta, &profile) {
                Ok(p) => {
                    row.delta_pred = Some(p.delta_pred);
                    row.log_delta = Some(p.log_delta);
                    row.lambda_pred = Some(p.lambda_pred);
                    row.dalf_at_delta = Some(p.dalf);
                    row.lambda_asymptotic = Some(asymptotic_lambda(cfg.alpha, beta, dalf0));
                }
                Err(e) => row.error = Some(e.to_string()),
            }
            row
        })
        .collect();
    Ok(PredictReport {
        alpha: cfg.alpha,
        dalf0,
        rows,
    })
}

pub fn emit_predict(report: &PredictReport, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => Ok(serde_json::to_vec_pretty(report)?),
        Format::Csv => {
            let mut out =
                String::from("beta,delta_pred,log_delta,lambda_pred,lambda_asymptotic,lambda_lower_bound,dalf_at_delta\n");
            for r in &report.rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    float(r.beta),
                    opt_float(r.delta_pred),
                    opt_float(r.log_delta),
                    opt_float(r.lambda_pred),
                    opt_float(r.lambda_asymptotic),
                    float(r.lambda_lower_bound),
                    opt_float(r.dalf_at_delta)
                );
            }
            Ok(out.into_bytes())
        }
    }
}
