//! CSV and JSON rendering of sweep results.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{config, Result};
use crate::sweep::SweepReport;

pub const CSV_HEADER: &str = "beta,kappa_star,delta_numeric,lambda_numeric,lambda_lower_bound,\
delta_pred,lambda_asymptotic,dalf0,grid_n,domain_radius,mu_residual,status";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn as_str(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = crate::error::CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(config(format!("unsupported output format {other:?}"))),
        }
    }
}

/// Shortest decimal that parses back to the same `f64`.
pub fn float(x: f64) -> String {
    format!("{x:?}")
}

pub fn opt_float(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

pub fn emit_report(report: &SweepReport, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => Ok(serde_json::to_vec_pretty(report)?),
        Format::Csv => {
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            for r in &report.rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{}",
                    float(r.beta),
                    opt_float(r.kappa_star),
                    opt_float(r.delta_numeric),
                    opt_float(r.lambda_numeric),
                    float(r.lambda_lower_bound),
                    float(r.delta_pred),
                    float(r.lambda_asymptotic),
                    float(r.dalf0),
                    r.grid_n,
                    float(r.domain_radius),
                    opt_float(r.mu_residual),
                    r.status.as_str(),
                );
            }
            Ok(out.into_bytes())
        }
    }
}

pub fn parse_json_report(bytes: &[u8]) -> Result<SweepReport> {
    Ok(serde_json::from_slice(bytes)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{Status, SweepRow};

    fn absent_row() -> SweepRow {
        SweepRow {
            beta: 0.0,
            kappa_star: None,
            delta_numeric: None,
            lambda_numeric: None,
            lambda_lower_bound: -0.25,
            delta_pred: 0.0,
            lambda_asymptotic: -0.25,
            dalf0: 4.651038987595,
            grid_n: 48,
            domain_radius: 40.0,
            mu_residual: Some(0.0125),
            status: Status::CertifiedAbsent,
        }
    }

    #[test]
    fn empty_sweep_is_header_only() {
        let out = emit_report(&SweepReport::default(), Format::Csv).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn absent_row_leaves_numeric_fields_empty() {
        let r = SweepReport { rows: vec![absent_row()] };
        let out = String::from_utf8(emit_report(&r, Format::Csv).unwrap()).unwrap();
        let line = out.lines().nth(1).unwrap();
        assert_eq!(line, "0.0,,,,-0.25,0.0,-0.25,4.651038987595,48,40.0,0.0125,certified-absent");
    }

    #[test]
    fn json_round_trip() {
        let mut solved = absent_row();
        solved.beta = 1.0 / 3.0;
        solved.kappa_star = Some(0.5000123456789);
        solved.delta_numeric = Some(1e-300);
        solved.lambda_numeric = Some(-0.25000000001);
        solved.status = Status::Solved;
        let r = SweepReport { rows: vec![absent_row(), solved] };
        let bytes = emit_report(&r, Format::Json).unwrap();
        assert_eq!(parse_json_report(&bytes).unwrap(), r);
    }

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, 1e-7, -0.25, 123456789.0, 5e-324] {
            assert_eq!(float(x).parse::<f64>().unwrap(), x);
        }
        assert!("xml".parse::<Format>().is_err());
    }
}
