//! Truncated tensor-product rules on `[−A, A]²` for Nyström discretization
//! of weakly singular kernels.

use serde::{Deserialize, Serialize};

use crate::quad::gauss_legendre;
use crate::{error::invalid, Error, Point, Result};

/// Hard cap on the number of nodes of a grid.
pub const NODE_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridRule {
    /// One Gauss–Legendre rule spanning the whole axis.
    GlobalGauss,
    /// Equal panels, each carrying a Gauss–Legendre rule of `order` points.
    GaussPanels { order: usize },
}

/// Self-interaction scheme for the singular diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagonalCorrection {
    /// The cell is replaced by a disk of equal area centred on the node.
    EqualAreaDisk,
}

impl DiagonalCorrection {
    pub fn weight(&self, kappa: f64, cell_weight: f64) -> f64 {
        match self {
            DiagonalCorrection::EqualAreaDisk => diagonal_weight(kappa, cell_weight),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedGrid {
    pub truncation_radius: f64,
    pub n_per_axis: usize,
    pub rule: GridRule,
    pub correction: DiagonalCorrection,
    /// Row-major: node `i·n + j` sits at `(axis[j], axis[i])`.
    pub nodes: Vec<Point>,
    pub weights: Vec<f64>,
}

impl TruncatedGrid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

fn check_size(a: f64, n: usize) -> Result<()> {
    if !(a.is_finite() && a > 0.0) {
        return Err(invalid("truncation radius must be > 0"));
    }
    if n < 2 {
        return Err(invalid("grid needs at least 2 nodes per axis"));
    }
    let nodes = n.saturating_mul(n);
    if nodes > NODE_CAP {
        return Err(Error::GridTooLarge { nodes, cap: NODE_CAP });
    }
    Ok(())
}

fn tensor(a: f64, n: usize, rule: GridRule, x: Vec<f64>, w: Vec<f64>) -> TruncatedGrid {
    let mut nodes = Vec::with_capacity(n * n);
    let mut weights = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            nodes.push([x[j], x[i]]);
            weights.push(w[i] * w[j]);
        }
    }
    TruncatedGrid {
        truncation_radius: a,
        n_per_axis: n,
        rule,
        correction: DiagonalCorrection::EqualAreaDisk,
        nodes,
        weights,
    }
}

/// Tensor Gauss–Legendre rule with `n` nodes per axis on `[−A, A]²`.
pub fn build_grid(a: f64, n: usize) -> Result<TruncatedGrid> {
    check_size(a, n)?;
    let (x, w) = gauss_legendre(n);
    let x = x.iter().map(|t| a * t).collect();
    let w = w.iter().map(|t| a * t).collect();
    Ok(tensor(a, n, GridRule::GlobalGauss, x, w))
}

/// Tensor rule of `n/order` equal panels per axis, each with an
/// `order`-point Gauss–Legendre rule. `n` must be a multiple of `order`.
pub fn build_panel_grid(a: f64, n: usize, order: usize) -> Result<TruncatedGrid> {
    check_size(a, n)?;
    if order == 0 || n % order != 0 {
        return Err(invalid(format!(
            "{n} nodes per axis is not a multiple of the panel order {order}"
        )));
    }
    let panels = n / order;
    let h = 2.0 * a / panels as f64;
    let (gx, gw) = gauss_legendre(order);
    let mut x = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    for p in 0..panels {
        let c = -a + (p as f64 + 0.5) * h;
        for (t, wt) in gx.iter().zip(&gw) {
            x.push(c + 0.5 * h * t);
            w.push(0.5 * h * wt);
        }
    }
    Ok(tensor(a, n, GridRule::GaussPanels { order }, x, w))
}

/// `Σ wᵢ·g(xᵢ)`, stopping at the first integrand error.
pub fn integrate_2d<F>(grid: &TruncatedGrid, mut integrand: F) -> Result<f64>
where
    F: FnMut(Point) -> Result<f64>,
{
    grid.nodes
        .iter()
        .zip(&grid.weights)
        .try_fold(0.0, |acc, (x, w)| Ok(acc + w * integrand(*x)?))
}

/// `∫` of `G_κ` over the disk of area `w` centred at the singularity:
/// `(1 − e^{−κa})/(2κ)` with `a = √(w/π)`.
pub fn diagonal_weight(kappa: f64, cell_weight: f64) -> f64 {
    let a = (cell_weight / std::f64::consts::PI).sqrt();
    -(-kappa * a).exp_m1() / (2.0 * kappa)
}
