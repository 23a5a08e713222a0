use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::DenseSymmetric;
use crate::{Error, Result};

/// Convergence target: `‖Mv − μv‖ ≤ EIGEN_REL_TOL·|μ|`.
pub const EIGEN_REL_TOL: f64 = 1e-10;
/// Cap on matrix-vector products.
pub const EIGEN_MAX_ITERATIONS: usize = 100_000;

const KRYLOV_MAX: usize = 120;
const CHECK_EVERY: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    pub mu_max: f64,
    /// Unit-norm eigenvector.
    pub eigenvector: Vec<f64>,
    /// `‖Mv − μv‖`.
    pub residual: f64,
    /// Matrix-vector products used.
    pub iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(c: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += c * xi);
}

fn start_vector(n: usize) -> Vec<f64> {
    vec![1.0 / (n as f64).sqrt(); n]
}

/// Largest eigenvalue of the tridiagonal matrix with the given diagonal and
/// off-diagonal, and its eigenvector.
fn top_ritz_pair(diag: &[f64], off: &[f64]) -> (f64, Vec<f64>) {
    let m = diag.len();
    let t = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            diag[i]
        } else if i + 1 == j {
            off[i]
        } else if j + 1 == i {
            off[j]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let k = eig.eigenvalues.iter().enumerate().fold(0, |best, (i, v)| {
        if *v > eig.eigenvalues[best] {
            i
        } else {
            best
        }
    });
    (eig.eigenvalues[k], eig.eigenvectors.column(k).iter().copied().collect())
}

/// Largest eigenvalue of a symmetric matrix.
///
/// Restarted Lanczos with full reorthogonalization, started from the
/// normalized all-ones vector. The Ritz pair is tested every few steps with
/// an explicitly formed residual. Deterministic for a given matrix.
pub fn top_eigenvalue(matrix: &DenseSymmetric) -> Result<EigenResult> {
    let n = matrix.dim();
    if n == 0 {
        return Err(crate::error::invalid("empty matrix"));
    }
    let krylov_max = n.min(KRYLOV_MAX);
    let mut start = start_vector(n);
    let mut steps = 0;
    loop {
        let mut basis: Vec<Vec<f64>> = vec![start];
        let mut images: Vec<Vec<f64>> = Vec::new();
        let mut diag = Vec::new();
        let mut off = Vec::new();
        loop {
            let k = basis.len() - 1;
            let image = matrix.matvec(&basis[k]);
            steps += 1;
            let mut w = image.clone();
            images.push(image);
            let a = dot(&w, &basis[k]);
            diag.push(a);
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(&w, v);
                    axpy(-c, v, &mut w);
                }
            }
            let b = norm(&w);
            let exhausted = b <= 1e-14 * a.abs().max(f64::MIN_POSITIVE);
            let full = basis.len() == krylov_max || exhausted;
            if full || basis.len() % CHECK_EVERY == 0 || steps >= EIGEN_MAX_ITERATIONS {
                let (_, y) = top_ritz_pair(&diag, &off);
                let mut x = vec![0.0; n];
                let mut ax = vec![0.0; n];
                for (c, (v, av)) in y.iter().zip(basis.iter().zip(&images)) {
                    axpy(*c, v, &mut x);
                    axpy(*c, av, &mut ax);
                }
                let s = 1.0 / norm(&x);
                x.iter_mut().for_each(|v| *v *= s);
                ax.iter_mut().for_each(|v| *v *= s);
                let mu = dot(&x, &ax);
                axpy(-mu, &x, &mut ax);
                let residual = norm(&ax);
                if residual <= EIGEN_REL_TOL * mu.abs() {
                    return Ok(EigenResult {
                        mu_max: mu,
                        eigenvector: x,
                        residual,
                        iterations: steps,
                    });
                }
                if steps >= EIGEN_MAX_ITERATIONS {
                    return Err(Error::EigenNotConverged {
                        iterations: steps,
                        residual,
                    });
                }
                if full {
                    start = x;
                    break;
                }
            }
            w.iter_mut().for_each(|v| *v /= b);
            off.push(b);
            basis.push(w);
        }
    }
}

/// Plain power iteration from the normalized all-ones vector.
pub fn power_iteration(matrix: &DenseSymmetric, rel_tol: f64, max_iterations: usize) -> Result<EigenResult> {
    let n = matrix.dim();
    if n == 0 {
        return Err(crate::error::invalid("empty matrix"));
    }
    let mut x = start_vector(n);
    let mut residual = f64::INFINITY;
    for it in 1..=max_iterations {
        let mut y = matrix.matvec(&x);
        let mu = dot(&x, &y);
        let mut r = y.clone();
        axpy(-mu, &x, &mut r);
        residual = norm(&r);
        if residual <= rel_tol * mu.abs() {
            return Ok(EigenResult {
                mu_max: mu,
                eigenvector: x,
                residual,
                iterations: it,
            });
        }
        let s = 1.0 / norm(&y);
        y.iter_mut().for_each(|v| *v *= s);
        x = y;
    }
    Err(Error::EigenNotConverged {
        iterations: max_iterations,
        residual,
    })
}
