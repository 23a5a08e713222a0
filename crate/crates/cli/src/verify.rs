//! One-shot verification suite; failures are data, not errors.

use deltaplane_core::asymptotics::{dalf_momentum_tweaked, dalf_position, MomentumTweak};
use deltaplane_core::bs_solver::{mu_curve, Bracket, GridSpec, RadiusSpec};
use deltaplane_core::kernels::{dn_mult, f_mult, m_mult, n_mult, PhysicalParams};
use deltaplane_core::profiles::DeformationProfile;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::Result;
use crate::report::{emit_report, Format};
use crate::sweep::{run_sweep, Status};

/// Deliberate defects used to prove that checks can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Multiply the `D2` component of the momentum route by 1.1.
    ScaleD2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub passed: bool,
}

fn check(name: &str, measured: f64, tolerance: f64, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.to_string(),
        measured,
        tolerance,
        passed,
        detail: detail.into(),
    }
}

fn failed(name: &str, tolerance: f64, err: impl std::fmt::Display) -> Check {
    check(name, f64::NAN, tolerance, false, format!("error: {err}"))
}

fn lattice(n: usize, lo: f64, hi: f64) -> impl Iterator<Item = f64> + Clone {
    (0..n).map(move |k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
}

fn multiplier_checks() -> Vec<Check> {
    let mut identity: f64 = 0.0;
    let mut n_excess = f64::NEG_INFINITY;
    let mut dn_excess = f64::NEG_INFINITY;
    let mut fd_gap: f64 = 0.0;
    let mut samples = 0;
    for p in lattice(25, 0.0, 20.0) {
        for delta in lattice(20, 0.0, 3.0) {
            for alpha in lattice(20, 0.05, 10.0) {
                let p2 = p * p;
                samples += 1;
                n_excess = n_excess.max(n_mult(alpha, delta, p2) - 1.5);
                dn_excess = dn_excess.max(dn_mult(alpha, delta, p2).abs() - delta / (alpha * alpha));
                if p2 + delta * delta > 1e-4 {
                    if let (Ok(f), Ok(m)) = (f_mult(alpha, delta, p2), m_mult(alpha, delta, p2)) {
                        identity = identity.max((f - m - n_mult(alpha, delta, p2)).abs() / f.abs());
                    }
                }
                if delta > 0.01 && alpha > 0.2 {
                    let h = 1e-6;
                    let fd = (n_mult(alpha, delta + h, p2) - n_mult(alpha, delta - h, p2)) / (2.0 * h);
                    fd_gap = fd_gap.max((fd - dn_mult(alpha, delta, p2)).abs());
                }
            }
        }
    }
    vec![
        check("multiplier-identity", identity, 1e-12, identity <= 1e-12, format!("max relative |f - m - n| over {samples} samples")),
        check("multiplier-n-bound", n_excess, 1e-12, n_excess <= 1e-12 && n_excess >= -1e-15, "max n - 3/2; attained at p = 0, delta = 0"),
        check("multiplier-dn-bound", dn_excess, 1e-12, dn_excess <= 1e-12, "max |dn/ddelta| - delta/alpha^2"),
        check("multiplier-dn-finite-difference", fd_gap, 1e-6, fd_gap <= 1e-6, "max |central difference - dn/ddelta|"),
    ]
}

fn dual_d_check(alpha: f64, profile: &DeformationProfile, fault: Option<Fault>) -> Check {
    let tweak = match fault {
        Some(Fault::ScaleD2) => MomentumTweak { d2_scale: 1.1 },
        None => MomentumTweak::default(),
    };
    let name = "dual-d-agreement";
    let mom = match dalf_momentum_tweaked(alpha, profile, tweak) {
        Ok(m) => m.value,
        Err(e) => return failed(name, 1e-3, e),
    };
    let pos = match dalf_position(alpha, profile, 0.0) {
        Ok(p) => p.value,
        Err(e) => return failed(name, 1e-3, e),
    };
    let gap = if mom == 0.0 && pos == 0.0 { 0.0 } else { (pos - mom).abs() / mom.abs() };
    check(name, gap, 1e-3, gap <= 1e-3, format!("position {pos:?}, momentum {mom:?}"))
}

fn schur_check(cfg: &RunConfig, profile: &DeformationProfile) -> Check {
    let name = "schur-ceiling";
    let lf = profile.lipschitz();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let mut betas: Vec<f64> = cfg.beta.iter().copied().filter(|b| *b > 0.0).collect();
    betas.truncate(3);
    for beta in betas {
        let params = match PhysicalParams::new(cfg.alpha, beta) {
            Ok(p) => p,
            Err(e) => return failed(name, 1e-3, e),
        };
        let b = Bracket::for_problem(&params, lf);
        let kappas = [b.lo * 1.02, 0.5 * (b.lo + b.hi), b.hi];
        match mu_curve(profile, &params, &cfg.grid_spec(), &kappas) {
            Ok(curve) => {
                for (k, mu) in curve {
                    let ceiling = cfg.alpha / (2.0 * k) * (1.0 + beta * beta * lf * lf).sqrt();
                    worst = worst.max(mu / ceiling);
                    count += 1;
                }
            }
            Err(e) => return failed(name, 1e-3, e),
        }
    }
    let excess = worst - 1.0;
    check(name, excess, 1e-3, excess <= 1e-3, format!("max mu/ceiling - 1 over {count} (beta, kappa) pairs"))
}

fn edge_check(cfg: &RunConfig, profile: &DeformationProfile) -> Check {
    let name = "spectrum-edge";
    let kappa = cfg.alpha;
    let params = match PhysicalParams::new(cfg.alpha, 0.0) {
        Ok(p) => p,
        Err(e) => return failed(name, 1e-3, e),
    };
    let grid = GridSpec {
        radius: RadiusSpec::Fixed(cfg.grid.radius.unwrap_or(40.0)),
        ..cfg.grid_spec()
    };
    match mu_curve(profile, &params, &grid, &[kappa]) {
        Ok(curve) => {
            let ratio = curve[0].1 / (cfg.alpha / (2.0 * kappa)) - 1.0;
            check(name, ratio, 1e-3, ratio <= 1e-3, "flat mu_max / (alpha/(2 kappa)) - 1 at kappa = alpha")
        }
        Err(e) => failed(name, 1e-3, e),
    }
}

fn sweep_checks(cfg: &RunConfig) -> Vec<Check> {
    let sweep_with = |threads: usize| -> Result<Vec<u8>> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| crate::error::config(e.to_string()))?;
        pool.install(|| emit_report(&run_sweep(cfg)?, Format::Csv))
    };
    let contain = "lower-bound-containment";
    let report = match run_sweep(cfg) {
        Ok(r) => r,
        Err(e) => return vec![failed(contain, 0.0, &e), failed("determinism", 0.0, e)],
    };
    let threshold = -0.25 * cfg.alpha * cfg.alpha;
    let solved: Vec<_> = report.rows.iter().filter(|r| r.status == Status::Solved).collect();
    let margin = solved
        .iter()
        .filter_map(|r| r.lambda_numeric.map(|l| (l - r.lambda_lower_bound).min(threshold - l)))
        .fold(f64::INFINITY, f64::min);
    let containment = if solved.is_empty() {
        check(contain, 0.0, 0.0, true, "no solved rows in the sweep")
    } else {
        check(contain, margin, 0.0, margin > 0.0, format!("min distance of lambda_numeric to the bracket ends over {} rows", solved.len()))
    };
    let determinism = match (sweep_with(1), sweep_with(2)) {
        (Ok(a), Ok(b)) => {
            let same = a == b && a == emit_report(&report, Format::Csv).unwrap_or_default();
            check("determinism", if same { 0.0 } else { 1.0 }, 0.0, same, "sweep CSV bytes for 1 and 2 threads and the default pool")
        }
        (Err(e), _) | (_, Err(e)) => failed("determinism", 0.0, e),
    };
    vec![containment, determinism]
}

pub fn run_verify(cfg: &RunConfig, fault: Option<Fault>) -> Result<VerifyReport> {
    let profile = cfg.profile()?;
    let mut checks = multiplier_checks();
    checks.push(dual_d_check(cfg.alpha, &profile, fault));
    checks.push(schur_check(cfg, &profile));
    checks.push(edge_check(cfg, &profile));
    checks.extend(sweep_checks(cfg));
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport { checks, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplier_checks_pass() {
        assert!(multiplier_checks().iter().all(|c| c.passed));
    }

    #[test]
    fn scaled_d2_breaks_dual_check() {
        let f = DeformationProfile::bump(1.0, 1.0).unwrap();
        let good = dual_d_check(1.0, &f, None);
        assert!(good.passed && good.measured <= 1e-3, "{good:?}");
        let bad = dual_d_check(1.0, &f, Some(Fault::ScaleD2));
        assert!(!bad.passed);
    }
}
