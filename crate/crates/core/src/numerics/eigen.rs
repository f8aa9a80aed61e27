//! Symmetric tridiagonal eigenvalues by Sturm-sequence bisection, eigenvectors
//! by inverse iteration.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::laurent::LaurentForm;
use crate::model::PhysicalParams;

use super::grid::{GridFunction, RadialGrid};

/// Symmetric tridiagonal matrix; `off[i]` couples rows `i` and `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    /// Three-point discretization of `-(hbar^2/2m) d^2/dr^2 + V(r)`.
    pub fn radial_hamiltonian(v: &LaurentForm, grid: &RadialGrid, phys: &PhysicalParams) -> Self {
        let t = phys.kinetic() / (grid.h() * grid.h());
        let diag = grid.nodes().map(|r| 2.0 * t + v.eval(r)).collect();
        let off = vec![-t; grid.count().saturating_sub(1)];
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut pivot = self.diag[0] - x;
        for i in 0..self.diag.len() {
            if i > 0 {
                let e = self.off[i - 1];
                pivot = self.diag[i] - x - e * e / pivot;
            }
            if pivot.abs() < tiny {
                pivot = -tiny;
            }
            if pivot < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval.
    pub fn bounds(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// The `index`-th eigenvalue (0-based) to `rel_tol * max(1, |E|)`.
    pub fn eigenvalue(&self, index: usize, rel_tol: f64) -> f64 {
        let (mut lo, mut hi) = self.bounds();
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= rel_tol * mid.abs().max(1.0) {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.off[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// Inverse iteration at `shift`; the result has unit Euclidean norm and a
    /// positive first entry of significant size.
    pub fn eigenvector(&self, shift: f64) -> Vec<f64> {
        let n = self.diag.len();
        let perturb = shift + f64::EPSILON.sqrt() * shift.abs().max(1.0) * 1e-3;
        let diag: Vec<f64> = self.diag.iter().map(|d| d - perturb).collect();
        let mut x = vec![1.0; n];
        for _ in 0..4 {
            x = solve_tridiagonal(&self.off, &diag, &self.off, &x);
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.iter_mut().for_each(|v| *v /= norm);
        }
        let peak = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if let Some(first) = x.iter().find(|v| v.abs() > 1e-3 * peak) {
            if *first < 0.0 {
                x.iter_mut().for_each(|v| *v = -*v);
            }
        }
        x
    }
}

/// Gaussian elimination with partial pivoting for a tridiagonal system
/// (`sub[i]` is entry `(i+1, i)`, `sup[i]` entry `(i, i+1)`).
pub fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut du = sup.to_vec();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut dl = sub.to_vec();
    let mut b = rhs.to_vec();
    let tiny = f64::MIN_POSITIVE.sqrt();
    for i in 0..n.saturating_sub(1) {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                d[i] = tiny;
            }
            let f = dl[i] / d[i];
            d[i + 1] -= f * du[i];
            b[i + 1] -= f * b[i];
            dl[i] = 0.0;
        } else {
            // swap rows i and i+1
            let f = d[i] / dl[i];
            d[i] = dl[i];
            let tmp = d[i + 1];
            d[i + 1] = du[i] - f * tmp;
            du[i] = tmp;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -f * du2[i];
            }
            b.swap(i, i + 1);
            b[i + 1] -= f * b[i];
        }
    }
    if d[n - 1] == 0.0 {
        d[n - 1] = tiny;
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = b[i];
        if i + 1 < n {
            acc -= du[i] * x[i + 1];
        }
        if i + 2 < n {
            acc -= du2[i] * x[i + 2];
        }
        x[i] = acc / d[i];
    }
    x
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EigenOptions {
    /// Combine `h` and `h/2` results as `(4 E(h/2) - E(h)) / 3`.
    pub richardson: bool,
    pub vectors: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    pub values: Vec<f64>,
    /// Normalized to unit `L^2` norm on the base grid.
    pub vectors: Option<Vec<GridFunction>>,
}

fn lowest(h: &SymTridiagonal, k: usize, rel_tol: f64) -> Vec<f64> {
    (0..k)
        .into_par_iter()
        .map(|i| h.eigenvalue(i, rel_tol))
        .collect()
}

pub fn eigen_lowest(
    v: &LaurentForm,
    grid: &RadialGrid,
    phys: &PhysicalParams,
    k: usize,
    rel_tol: f64,
    opts: EigenOptions,
) -> Result<EigenResult> {
    if k == 0 || k * 10 > grid.count() {
        return Err(Error::EigenCount {
            k,
            count: grid.count(),
        });
    }
    let ham = SymTridiagonal::radial_hamiltonian(v, grid, phys);
    let coarse = lowest(&ham, k, rel_tol);
    let values = if opts.richardson {
        let fine_ham = SymTridiagonal::radial_hamiltonian(v, &grid.halved(), phys);
        let fine = lowest(&fine_ham, k, rel_tol);
        coarse
            .iter()
            .zip(&fine)
            .map(|(c, f)| (4.0 * f - c) / 3.0)
            .collect()
    } else {
        coarse.clone()
    };
    let vectors = opts.vectors.then(|| {
        let scale = 1.0 / grid.h().sqrt();
        coarse
            .iter()
            .map(|e| GridFunction {
                grid: *grid,
                values: ham.eigenvector(*e).into_iter().map(|x| x * scale).collect(),
            })
            .collect()
    });
    Ok(EigenResult { values, vectors })
}
