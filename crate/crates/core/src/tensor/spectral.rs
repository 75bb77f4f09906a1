use nalgebra::DVector;

use super::operator::{CMatrix, LabeledOperator, C64};
use super::systems::SystemList;
use crate::error::{Error, Result};

/// Eigen-decomposition of a Hermitian operator with a fixed convention:
/// eigenvalues descending, small negative eigenvalues clipped to zero, and
/// each eigenvector's first significant component real and positive.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors as columns, in the order of `eigenvalues`.
    pub eigenvectors: CMatrix,
    pub systems: SystemList,
    pub clip_tol: f64,
    /// Smallest eigenvalue before clipping.
    pub raw_min_eigenvalue: f64,
}

impl SpectralDecomposition {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Eigenvector `i` as a ket on `systems`.
    pub fn ket(&self, i: usize) -> LabeledOperator {
        let col: Vec<C64> = self.eigenvectors.column(i).iter().copied().collect();
        LabeledOperator::ket(&col, self.systems.clone())
            .expect("eigenvector length matches systems")
    }

    /// Fails with `NotPsd` if an eigenvalue lies below `-clip_tol`.
    pub fn ensure_psd(&self) -> Result<()> {
        if self.raw_min_eigenvalue < -self.clip_tol {
            return Err(Error::NotPsd {
                min_eigenvalue: self.raw_min_eigenvalue,
            });
        }
        Ok(())
    }

    /// Sum of `lambda_i v_i v_i^dag` using the clipped eigenvalues.
    pub fn reconstruct(&self) -> LabeledOperator {
        let n = self.systems.total_dim();
        let mut m = CMatrix::zeros(n, n);
        for (i, &lam) in self.eigenvalues.iter().enumerate() {
            if lam == 0.0 {
                continue;
            }
            let v = self.eigenvectors.column(i);
            m += (v * v.adjoint()) * C64::new(lam, 0.0);
        }
        LabeledOperator::square(m, self.systems.clone()).expect("square on systems")
    }

    /// Indices of eigenvalues above `rtol` times the largest.
    pub fn significant(&self, rtol: f64) -> Vec<usize> {
        let max = self.eigenvalues.first().copied().unwrap_or(0.0);
        if max <= 0.0 {
            return Vec::new();
        }
        (0..self.len())
            .filter(|&i| self.eigenvalues[i] > rtol * max)
            .collect()
    }
}

/// Hermitian eigen-decomposition of a square operator.
///
/// `tol` bounds the relative Hermiticity deviation and sets the clipping
/// threshold `tol * max(1, spectral radius)` for small negative eigenvalues.
pub fn psd_decompose(m: &LabeledOperator, tol: f64) -> Result<SpectralDecomposition> {
    let systems = m.systems()?.clone();
    let deviation = m.hermiticity_deviation();
    if deviation > tol {
        return Err(Error::NotHermitian { deviation, tol });
    }
    let n = systems.total_dim();
    if n == 0 {
        return Ok(SpectralDecomposition {
            eigenvalues: Vec::new(),
            eigenvectors: CMatrix::zeros(0, 0),
            systems,
            clip_tol: tol,
            raw_min_eigenvalue: 0.0,
        });
    }
    let h = (m.matrix() + m.matrix().adjoint()) * C64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let radius = eig
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    let clip_tol = tol * radius.max(1.0);
    let raw_min = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);

    let mut eigenvalues = Vec::with_capacity(n);
    let mut vectors = CMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        let lam = eig.eigenvalues[i];
        eigenvalues.push(if lam < 0.0 && lam >= -clip_tol {
            0.0
        } else {
            lam
        });
        let mut v: DVector<C64> = eig.eigenvectors.column(i).into_owned();
        fix_phase(&mut v, clip_tol);
        vectors.set_column(k, &v);
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors: vectors,
        systems,
        clip_tol,
        raw_min_eigenvalue: raw_min,
    })
}

fn fix_phase(v: &mut DVector<C64>, tol: f64) {
    let threshold = tol.min(1e-8);
    if let Some(z) = v.iter().copied().find(|z| z.norm() > threshold) {
        let phase = z.conj() / z.norm();
        v.iter_mut().for_each(|x| *x *= phase);
    }
}

/// Eigenvalues of a Hermitian operator, descending, without clipping.
pub fn hermitian_eigenvalues(m: &LabeledOperator) -> Result<Vec<f64>> {
    let (r, c) = m.matrix().shape();
    if r != c {
        return Err(Error::dims(format!("eigenvalues of a {r}x{c} matrix")));
    }
    if r == 0 {
        return Ok(Vec::new());
    }
    let h = (m.matrix() + m.matrix().adjoint()) * C64::new(0.5, 0.0);
    let mut vals: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    Ok(vals)
}

/// Smallest eigenvalue of the Hermitian part of `m`; 0 for empty operators.
pub fn min_eigenvalue(m: &LabeledOperator) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?.last().copied().unwrap_or(0.0))
}

/// Number of singular values above `rtol` times the largest one.
pub fn numeric_rank(m: &LabeledOperator, rtol: f64) -> usize {
    let (r, c) = m.matrix().shape();
    if r == 0 || c == 0 {
        return 0;
    }
    let sv = m.matrix().clone().singular_values();
    let max = sv.iter().copied().fold(0.0f64, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rtol * max).count()
}
