use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::systems::SystemList;
use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<Complex64>;

/// A dense complex matrix whose rows are indexed by the composite basis of
/// `outputs` and whose columns are indexed by the composite basis of
/// `inputs`.
///
/// States, Choi operators and POVM elements are square operators whose
/// input and output lists coincide. Kets are operators with no inputs.
#[derive(Clone, PartialEq)]
pub struct LabeledOperator {
    matrix: CMatrix,
    inputs: SystemList,
    outputs: SystemList,
}

impl LabeledOperator {
    pub fn new(matrix: CMatrix, inputs: SystemList, outputs: SystemList) -> Result<Self> {
        if matrix.nrows() != outputs.total_dim() || matrix.ncols() != inputs.total_dim() {
            return Err(Error::dims(format!(
                "matrix is {}x{} but systems {} -> {} require {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                inputs,
                outputs,
                outputs.total_dim(),
                inputs.total_dim()
            )));
        }
        Ok(LabeledOperator {
            matrix,
            inputs,
            outputs,
        })
    }

    /// Operator on `systems` (same list on both sides).
    pub fn square(matrix: CMatrix, systems: SystemList) -> Result<Self> {
        Self::new(matrix, systems.clone(), systems)
    }

    /// Column vector on `systems`.
    pub fn ket(data: &[C64], systems: SystemList) -> Result<Self> {
        let n = systems.total_dim();
        if data.len() != n {
            return Err(Error::dims(format!(
                "ket has {} entries, systems {} need {n}",
                data.len(),
                systems
            )));
        }
        Self::new(
            CMatrix::from_column_slice(n, 1, data),
            SystemList::empty(),
            systems,
        )
    }

    /// Basis ket |index> on a composite system.
    pub fn basis_ket(index: usize, systems: SystemList) -> Result<Self> {
        let n = systems.total_dim();
        if index >= n {
            return Err(Error::OutOfRange(format!("basis index {index} >= {n}")));
        }
        let mut m = CMatrix::zeros(n, 1);
        m[(index, 0)] = C64::new(1.0, 0.0);
        Self::new(m, SystemList::empty(), systems)
    }

    pub fn identity(systems: SystemList) -> Self {
        let n = systems.total_dim();
        LabeledOperator {
            matrix: CMatrix::identity(n, n),
            inputs: systems.clone(),
            outputs: systems,
        }
    }

    pub fn zeros(inputs: SystemList, outputs: SystemList) -> Self {
        LabeledOperator {
            matrix: CMatrix::zeros(outputs.total_dim(), inputs.total_dim()),
            inputs,
            outputs,
        }
    }

    pub fn scalar(value: C64) -> Self {
        LabeledOperator {
            matrix: CMatrix::from_element(1, 1, value),
            inputs: SystemList::empty(),
            outputs: SystemList::empty(),
        }
    }

    /// The unnormalized maximally entangled vector sum_i |i>|i> on
    /// `first` (x) `second`.
    pub fn gamma(first: &str, second: &str, d: usize) -> Result<Self> {
        let systems = SystemList::from_pairs([(first, d), (second, d)])?;
        let mut m = CMatrix::zeros(d * d, 1);
        for i in 0..d {
            m[(i * d + i, 0)] = C64::new(1.0, 0.0);
        }
        Self::new(m, SystemList::empty(), systems)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn inputs(&self) -> &SystemList {
        &self.inputs
    }

    pub fn outputs(&self) -> &SystemList {
        &self.outputs
    }

    /// The system list of a square operator.
    pub fn systems(&self) -> Result<&SystemList> {
        if self.inputs != self.outputs {
            return Err(Error::dims(format!(
                "expected an operator with matching input/output systems, got {} -> {}",
                self.inputs, self.outputs
            )));
        }
        Ok(&self.outputs)
    }

    pub fn is_square(&self) -> bool {
        self.inputs == self.outputs
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<C64> {
        let (r, c) = self.matrix.shape();
        let mut out = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                out.push(self.matrix[(i, j)]);
            }
        }
        out
    }

    pub(crate) fn from_row_major(
        data: &[C64],
        inputs: SystemList,
        outputs: SystemList,
    ) -> Result<Self> {
        let (r, c) = (outputs.total_dim(), inputs.total_dim());
        if data.len() != r * c {
            return Err(Error::dims(format!(
                "{} entries for a {r}x{c} operator",
                data.len()
            )));
        }
        Self::new(CMatrix::from_row_slice(r, c, data), inputs, outputs)
    }

    pub fn adjoint(&self) -> Self {
        LabeledOperator {
            matrix: self.matrix.adjoint(),
            inputs: self.outputs.clone(),
            outputs: self.inputs.clone(),
        }
    }

    pub fn conj(&self) -> Self {
        LabeledOperator {
            matrix: self.matrix.map(|z| z.conj()),
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
        }
    }

    /// Full transpose; inputs and outputs swap roles.
    pub fn transpose(&self) -> Self {
        LabeledOperator {
            matrix: self.matrix.transpose(),
            inputs: self.outputs.clone(),
            outputs: self.inputs.clone(),
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        LabeledOperator {
            matrix: &self.matrix * factor,
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    fn check_same_layout(&self, other: &Self, what: &str) -> Result<()> {
        if self.inputs != other.inputs || self.outputs != other.outputs {
            return Err(Error::dims(format!(
                "{what}: {} -> {} vs {} -> {}",
                self.inputs, self.outputs, other.inputs, other.outputs
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_layout(other, "add")?;
        Ok(LabeledOperator {
            matrix: &self.matrix + &other.matrix,
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_layout(other, "sub")?;
        Ok(LabeledOperator {
            matrix: &self.matrix - &other.matrix,
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
        })
    }

    /// Tensor product; `self` supplies the leading factors on both sides.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        Ok(LabeledOperator {
            matrix: self.matrix.kronecker(&other.matrix),
            inputs: self.inputs.concat(&other.inputs)?,
            outputs: self.outputs.concat(&other.outputs)?,
        })
    }

    /// Operator product `self * other`; requires `self.inputs == other.outputs`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.inputs != other.outputs {
            return Err(Error::dims(format!(
                "cannot compose: left expects {}, right produces {}",
                self.inputs, other.outputs
            )));
        }
        Ok(LabeledOperator {
            matrix: &self.matrix * &other.matrix,
            inputs: other.inputs.clone(),
            outputs: self.outputs.clone(),
        })
    }

    /// `|v><v|` for a ket `v`.
    pub fn projector(&self) -> Result<Self> {
        if !self.inputs.is_empty() {
            return Err(Error::dims("projector needs a ket (no input systems)"));
        }
        Ok(LabeledOperator {
            matrix: &self.matrix * self.matrix.adjoint(),
            inputs: self.outputs.clone(),
            outputs: self.outputs.clone(),
        })
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius distance to an operator with the same layout.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_same_layout(other, "distance")?;
        Ok(frobenius_diff(&self.matrix, &other.matrix))
    }

    /// `||M - M^dag||_F / max(||M||_F, tiny)`; infinity for non-square matrices.
    pub fn hermiticity_deviation(&self) -> f64 {
        if self.matrix.nrows() != self.matrix.ncols() {
            return f64::INFINITY;
        }
        let norm = self.frobenius_norm();
        let dev = frobenius_diff(&self.matrix, &self.matrix.adjoint());
        if norm == 0.0 {
            dev
        } else {
            dev / norm
        }
    }

    pub fn relabel_inputs<S: AsRef<str>>(&self, labels: &[S]) -> Result<Self> {
        Ok(LabeledOperator {
            matrix: self.matrix.clone(),
            inputs: self.inputs.relabeled(labels)?,
            outputs: self.outputs.clone(),
        })
    }

    pub fn relabel_outputs<S: AsRef<str>>(&self, labels: &[S]) -> Result<Self> {
        Ok(LabeledOperator {
            matrix: self.matrix.clone(),
            inputs: self.inputs.clone(),
            outputs: self.outputs.relabeled(labels)?,
        })
    }

    /// Replace both system lists while keeping the matrix. Used to merge
    /// adjacent factors into one composite system or to split one apart.
    pub fn with_systems(&self, inputs: SystemList, outputs: SystemList) -> Result<Self> {
        Self::new(self.matrix.clone(), inputs, outputs)
    }

    /// Relabel a square operator.
    pub fn relabel_square<S: AsRef<str>>(&self, labels: &[S]) -> Result<Self> {
        let systems = self.systems()?.relabeled(labels)?;
        Self::square(self.matrix.clone(), systems)
    }
}

pub(crate) fn frobenius_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

impl fmt::Debug for LabeledOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LabeledOperator({} -> {}) ", self.inputs, self.outputs)?;
        write!(f, "{:?}", self.matrix)
    }
}
