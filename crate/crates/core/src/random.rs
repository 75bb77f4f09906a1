//! Seeded random generators for test data: Gaussian matrices, isometries,
//! states and POVMs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::tensor::{CMatrix, LabeledOperator, SystemList, C64};

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn gaussian_matrix(rng: &mut Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// `rows x cols` matrix with orthonormal columns (requires `rows >= cols`).
pub fn isometry(rng: &mut Rng, rows: usize, cols: usize) -> Result<CMatrix> {
    if rows < cols {
        return Err(Error::OutOfRange(format!(
            "no {rows}x{cols} isometry exists"
        )));
    }
    if cols == 0 {
        return Ok(CMatrix::zeros(rows, 0));
    }
    let g = gaussian_matrix(rng, rows, cols);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    // fix column phases so the distribution is Haar
    for j in 0..cols {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            q.column_mut(j).iter_mut().for_each(|x| *x *= phase);
        }
    }
    Ok(q)
}

pub fn unitary(rng: &mut Rng, d: usize) -> CMatrix {
    isometry(rng, d, d).expect("square isometry always exists")
}

/// Random density operator of the given rank on `systems`.
pub fn state(rng: &mut Rng, systems: SystemList, rank: usize) -> Result<LabeledOperator> {
    let d = systems.total_dim();
    if rank == 0 || rank > d {
        return Err(Error::OutOfRange(format!(
            "state rank {rank} on dimension {d}"
        )));
    }
    let g = gaussian_matrix(rng, d, rank);
    let m = &g * g.adjoint();
    let tr = m.trace();
    LabeledOperator::square(m / tr, systems)
}

/// Random full-rank density operator.
pub fn full_rank_state(rng: &mut Rng, systems: SystemList) -> Result<LabeledOperator> {
    let d = systems.total_dim();
    state(rng, systems, d)
}

/// Random `n`-outcome POVM on `systems`: `M_i = S^{-1/2} G_i G_i^dag S^{-1/2}`
/// with `S = sum_i G_i G_i^dag`.
pub fn povm(rng: &mut Rng, systems: SystemList, n: usize) -> Result<Vec<LabeledOperator>> {
    if n == 0 {
        return Err(Error::OutOfRange("POVM needs at least one outcome".into()));
    }
    let d = systems.total_dim();
    let elements: Vec<CMatrix> = (0..n)
        .map(|_| {
            let g = gaussian_matrix(rng, d, d);
            &g * g.adjoint()
        })
        .collect();
    let total = elements.iter().fold(CMatrix::zeros(d, d), |acc, e| acc + e);
    let inv_sqrt = hermitian_inverse_sqrt(&total)?;
    elements
        .into_iter()
        .map(|e| {
            let m = &inv_sqrt * e * &inv_sqrt;
            let m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
            LabeledOperator::square(m, systems.clone())
        })
        .collect()
}

fn hermitian_inverse_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let eig = m.clone().symmetric_eigen();
    let n = m.nrows();
    let mut out = CMatrix::zeros(n, n);
    for i in 0..n {
        let lam = eig.eigenvalues[i];
        if lam <= 0.0 {
            return Err(Error::NotPsd {
                min_eigenvalue: lam,
            });
        }
        let v = eig.eigenvectors.column(i);
        out += (v * v.adjoint()) * C64::new(lam.powf(-0.5), 0.0);
    }
    Ok(out)
}
