//! Labeled multipartite operators.

mod operator;
mod reindex;
mod spectral;
mod systems;

pub(crate) use operator::frobenius_diff;
pub use operator::{CMatrix, LabeledOperator, C64};
pub(crate) use reindex::permute_axes;
pub use reindex::primed;
pub use spectral::{
    hermitian_eigenvalues, min_eigenvalue, numeric_rank, psd_decompose, SpectralDecomposition,
};
pub use systems::{System, SystemList};

/// Default tolerance for Hermiticity, positivity and validity checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default relative threshold for numeric ranks.
pub const DEFAULT_RANK_RTOL: f64 = 1e-9;
