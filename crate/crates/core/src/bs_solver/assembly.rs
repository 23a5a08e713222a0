use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::kernels::{green_unchecked, jacobian, PhysicalParams, SpectralCoordinate};
use crate::profiles::DeformationProfile;
use crate::quadrature::{GridRule, TruncatedGrid};
use crate::{error::invalid, Result};

/// Dense symmetric matrix stored in full row-major form.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymmetric {
    n: usize,
    data: Vec<f64>,
}

impl DenseSymmetric {
    /// Builds from `entry(i, j)` evaluated once per unordered pair `i ≤ j`.
    pub fn from_upper<F>(n: usize, entry: F) -> Self
    where
        F: Fn(usize, usize) -> f64 + Sync,
    {
        let mut data = vec![0.0; n * n];
        data.par_chunks_mut(n.max(1)).enumerate().for_each(|(i, row)| {
            for (j, slot) in row.iter_mut().enumerate().skip(i) {
                *slot = entry(i, j);
            }
        });
        for i in 0..n {
            for j in 0..i {
                data[i * n + j] = data[j * n + i];
            }
        }
        Self { n, data }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self::from_upper(diag.len(), |i, j| if i == j { diag[i] } else { 0.0 })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_upper(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    /// Symmetric matrix from row-major data; fails unless exactly symmetric.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(invalid("matrix data length is not n²"));
        }
        let m = Self { n, data };
        if !m.is_symmetric() {
            return Err(invalid("matrix is not symmetric"));
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Bitwise symmetry.
    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j).to_bits() == self.get(j, i).to_bits()))
    }

    /// `y = Mx`. Each row is summed sequentially in index order, so the
    /// result does not depend on the thread count.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "dimension mismatch");
        let mut y = vec![0.0; self.n];
        y.par_iter_mut().enumerate().for_each(|(i, yi)| {
            *yi = self.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
        });
        y
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AssemblyScheme {
    /// Symmetrized Nyström weights, equal-area-disk self-interaction.
    SymmetricNystromDisk,
}

/// Inputs that determined a [`BsMatrix`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub params: PhysicalParams,
    pub kappa: f64,
    pub truncation_radius: f64,
    pub n_per_axis: usize,
    pub rule: GridRule,
    pub scheme: AssemblyScheme,
}

/// Discretization of `αQ_β(κ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BsMatrix {
    pub matrix: DenseSymmetric,
    pub provenance: Provenance,
}

/// Off-diagonal entries `α√wᵢ K(xᵢ, xⱼ) √wⱼ`; diagonal
/// `α g_β(xᵢ)·∫_{disk of area wᵢ} G_κ`.
pub fn assemble(
    profile: &DeformationProfile,
    params: &PhysicalParams,
    sc: &SpectralCoordinate,
    grid: &TruncatedGrid,
) -> Result<BsMatrix> {
    let kappa = sc.kappa;
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(invalid("kappa must be > 0"));
    }
    let (alpha, beta) = (params.alpha, params.beta);
    let heights: Vec<f64> = grid.nodes.iter().map(|&x| beta * profile.value(x)).collect();
    let jac: Vec<f64> = grid.nodes.iter().map(|&x| jacobian(profile, beta, x)).collect();
    let scale: Vec<f64> = grid
        .weights
        .iter()
        .zip(&jac)
        .map(|(w, g)| (w * g).sqrt())
        .collect();
    let nodes = &grid.nodes;
    let correction = grid.correction;
    let matrix = DenseSymmetric::from_upper(grid.len(), |i, j| {
        if i == j {
            return alpha * jac[i] * correction.weight(kappa, grid.weights[i]);
        }
        let (x, y) = (nodes[i], nodes[j]);
        let d = (x[0] - y[0]).hypot(x[1] - y[1]).hypot(heights[i] - heights[j]);
        alpha * scale[i] * green_unchecked(kappa, d) * scale[j]
    });
    Ok(BsMatrix {
        matrix,
        provenance: Provenance {
            params: *params,
            kappa,
            truncation_radius: grid.truncation_radius,
            n_per_axis: grid.n_per_axis,
            rule: grid.rule,
            scheme: AssemblyScheme::SymmetricNystromDisk,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{bs_kernel, green};
    use crate::quadrature::{build_grid, diagonal_weight};

    #[test]
    fn flat_entries_are_weighted_green() {
        let f = DeformationProfile::bump(1.0, 1.0).unwrap();
        let p = PhysicalParams::new(1.3, 0.0).unwrap();
        let sc = SpectralCoordinate::from_kappa(0.9).unwrap();
        let g = build_grid(3.0, 6).unwrap();
        let m = assemble(&f, &p, &sc, &g).unwrap();
        for i in 0..g.len() {
            for j in 0..g.len() {
                let (x, y) = (g.nodes[i], g.nodes[j]);
                let want = if i == j {
                    1.3 * diagonal_weight(0.9, g.weights[i])
                } else {
                    let d = (x[0] - y[0]).hypot(x[1] - y[1]);
                    1.3 * g.weights[i].sqrt() * green(0.9, d).unwrap() * g.weights[j].sqrt()
                };
                let got = m.matrix.get(i, j);
                assert!((got - want).abs() <= 1e-15 * want.abs(), "({i},{j}) {got} vs {want}");
            }
        }
    }

    #[test]
    fn deformed_matrix_symmetric_and_positive() {
        let f = DeformationProfile::bump(1.0, 1.0).unwrap();
        let p = PhysicalParams::new(1.0, 0.5).unwrap();
        let sc = SpectralCoordinate::from_kappa(0.7).unwrap();
        let g = build_grid(2.0, 10).unwrap();
        let m = assemble(&f, &p, &sc, &g).unwrap();
        assert!(m.matrix.is_symmetric());
        assert!((0..g.len()).all(|i| m.matrix.get(i, i) > 0.0));
        assert!((0..g.len()).all(|i| m.matrix.row(i).iter().all(|&v| v >= 0.0)));

        let (i, j) = (23, 57);
        let want = g.weights[i].sqrt()
            * bs_kernel(&f, &p, &sc, g.nodes[i], g.nodes[j]).unwrap()
            * g.weights[j].sqrt();
        assert!((m.matrix.get(i, j) - want).abs() <= 1e-14 * want);
        assert_eq!(m.provenance.n_per_axis, 10);
    }

    #[test]
    fn matvec_is_thread_count_independent() {
        let m = DenseSymmetric::from_upper(300, |i, j| 1.0 / (1.0 + (i as f64 - j as f64).abs()));
        let x: Vec<f64> = (0..300).map(|i| (i as f64 * 0.37).sin()).collect();
        let run = |t| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .unwrap()
                .install(|| m.matvec(&x))
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn rejects_asymmetric_data() {
        assert!(DenseSymmetric::from_row_major(2, vec![1.0, 2.0, 3.0, 4.0]).is_err());
        assert!(DenseSymmetric::from_row_major(2, vec![1.0, 2.0, 2.0, 4.0]).is_ok());
    }
}
