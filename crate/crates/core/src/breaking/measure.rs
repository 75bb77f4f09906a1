use crate::error::{Error, Result};
use crate::tensor::{frobenius_diff, min_eigenvalue, CMatrix, LabeledOperator, C64};

/// `sum_i X_i (x) Y_i` with every factor positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableDecomposition {
    terms: Vec<(LabeledOperator, LabeledOperator)>,
}

fn check_psd(op: &LabeledOperator, tol: f64) -> Result<()> {
    let deviation = op.hermiticity_deviation();
    if deviation > tol {
        return Err(Error::NotHermitian { deviation, tol });
    }
    let min = min_eigenvalue(op)?;
    let scale = op.frobenius_norm().max(1.0);
    if min < -tol * scale {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    Ok(())
}

impl SeparableDecomposition {
    /// All left factors must share systems, as must all right factors.
    pub fn new(terms: Vec<(LabeledOperator, LabeledOperator)>, tol: f64) -> Result<Self> {
        let Some((x0, y0)) = terms.first() else {
            return Err(Error::OutOfRange(
                "decomposition needs at least one term".into(),
            ));
        };
        let (ls, rs) = (x0.systems()?.clone(), y0.systems()?.clone());
        ls.concat(&rs)?;
        for (x, y) in &terms {
            if x.systems()? != &ls || y.systems()? != &rs {
                return Err(Error::dims("decomposition terms live on different systems"));
            }
            check_psd(x, tol)?;
            check_psd(y, tol)?;
        }
        Ok(SeparableDecomposition { terms })
    }

    pub fn terms(&self) -> &[(LabeledOperator, LabeledOperator)] {
        &self.terms
    }

    pub fn reconstruct(&self) -> Result<LabeledOperator> {
        let mut acc: Option<LabeledOperator> = None;
        for (x, y) in &self.terms {
            let t = x.kron(y)?;
            acc = Some(match acc {
                None => t,
                Some(a) => a.add(&t)?,
            });
        }
        Ok(acc.expect("at least one term"))
    }
}

/// POVM `{M_i}` followed by preparation of `sigma_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurePrepare {
    povm: Vec<LabeledOperator>,
    states: Vec<LabeledOperator>,
}

impl MeasurePrepare {
    /// Checks positivity, completeness and unit trace within `tol`.
    pub fn new(povm: Vec<LabeledOperator>, states: Vec<LabeledOperator>, tol: f64) -> Result<Self> {
        let mp = Self::from_parts(povm, states)?;
        for (m, s) in mp.povm.iter().zip(&mp.states) {
            check_psd(m, tol)?;
            check_psd(s, tol)?;
            let tr = s.trace();
            if (tr - C64::new(1.0, 0.0)).norm() > tol {
                return Err(Error::OutOfRange(format!("prepared state has trace {tr}")));
            }
        }
        let deviation = mp.completeness_deviation();
        if deviation > tol {
            return Err(Error::IncompleteDecomposition { deviation });
        }
        Ok(mp)
    }

    /// Structural checks only: matching counts and systems.
    pub fn from_parts(povm: Vec<LabeledOperator>, states: Vec<LabeledOperator>) -> Result<Self> {
        if povm.is_empty() || povm.len() != states.len() {
            return Err(Error::dims(format!(
                "{} POVM elements and {} states",
                povm.len(),
                states.len()
            )));
        }
        let ms = povm[0].systems()?.clone();
        let ss = states[0].systems()?.clone();
        ms.concat(&ss)?;
        for (m, s) in povm.iter().zip(&states) {
            if m.systems()? != &ms || s.systems()? != &ss {
                return Err(Error::dims(
                    "measure-prepare terms live on different systems",
                ));
            }
        }
        Ok(MeasurePrepare { povm, states })
    }

    pub fn povm(&self) -> &[LabeledOperator] {
        &self.povm
    }

    pub fn states(&self) -> &[LabeledOperator] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.povm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.povm.is_empty()
    }

    /// `||sum_i M_i - 1||_F`.
    pub fn completeness_deviation(&self) -> f64 {
        let d = self.povm[0].matrix().nrows();
        let sum = self
            .povm
            .iter()
            .fold(CMatrix::zeros(d, d), |acc, m| acc + m.matrix());
        frobenius_diff(&sum, &CMatrix::identity(d, d))
    }

    /// `rho -> sum_i Tr[M_i^T rho] sigma_i`, matching the Choi action.
    pub fn apply(&self, rho: &LabeledOperator) -> Result<LabeledOperator> {
        let d = self.povm[0].matrix().nrows();
        if rho.matrix().shape() != (d, d) {
            return Err(Error::dims(format!("state must be {d}x{d}")));
        }
        let mut out = self.states[0].scale_real(0.0);
        for (m, s) in self.povm.iter().zip(&self.states) {
            let p = (m.matrix().transpose() * rho.matrix()).trace();
            out = out.add(&s.scale(p))?;
        }
        Ok(out)
    }
}

/// `M_i = Tr[Y_i] X_i`, `sigma_i = Y_i / Tr[Y_i]`; terms with
/// `Tr[Y_i] <= tol` are dropped.
pub fn measure_prepare_from_decomposition(
    d: &SeparableDecomposition,
    tol: f64,
) -> Result<MeasurePrepare> {
    let mut povm = Vec::new();
    let mut states = Vec::new();
    for (x, y) in d.terms() {
        let t = y.trace().re;
        if t <= tol {
            continue;
        }
        povm.push(x.scale_real(t));
        states.push(y.scale_real(1.0 / t));
    }
    if povm.is_empty() {
        return Err(Error::IncompleteDecomposition {
            deviation: f64::INFINITY,
        });
    }
    MeasurePrepare::new(povm, states, tol)
}

/// `sum_i M_i (x) sigma_i`.
pub fn choi_from_measure_prepare(mp: &MeasurePrepare) -> Result<LabeledOperator> {
    let terms = mp
        .povm
        .iter()
        .cloned()
        .zip(mp.states.iter().cloned())
        .collect();
    SeparableDecomposition { terms }.reconstruct()
}
