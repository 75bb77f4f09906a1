//! Entanglement-breaking channels and superchannels, detected with the
//! positive-partial-transpose test and built from measure-and-prepare data.

mod measure;
mod ppt;

pub use measure::{
    choi_from_measure_prepare, measure_prepare_from_decomposition, MeasurePrepare,
    SeparableDecomposition,
};
pub use ppt::{ppt_battery, ppt_test, Bipartition, Exactness, PptVerdict};

use crate::channel::{validate_channel, ChoiRep};
use crate::error::{Error, Result};
use crate::random::{full_rank_state, povm, Rng};
use crate::superchannel::{
    ensure_valid, validate_superchannel, SuperDims, SuperchannelChoi, A1, A2, B1, B2,
};
use crate::tensor::{CMatrix, LabeledOperator, SystemList, C64};

/// Entanglement-breaking verdict for a channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EbVerdict {
    EntanglementBreaking,
    NotEntanglementBreaking,
    /// PPT, but at dimensions where PPT does not imply separability.
    Undetermined,
}

impl EbVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            EbVerdict::EntanglementBreaking => "entanglement-breaking",
            EbVerdict::NotEntanglementBreaking => "not-entanglement-breaking",
            EbVerdict::Undetermined => "ppt-necessary-only",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EbChannelReport {
    pub verdict: EbVerdict,
    pub ppt: PptVerdict,
}

/// PPT test of a channel's Choi operator across input | output.
pub fn eb_channel_report(c: &ChoiRep, tol: f64) -> Result<EbChannelReport> {
    let v = validate_channel(c, tol);
    if !v.is_valid() {
        return Err(Error::InvalidChannel(format!(
            "cp={} (min eigenvalue {:.3e}), tp={} (deviation {:.3e})",
            v.cp, v.min_eigenvalue, v.tp, v.tp_deviation
        )));
    }
    let cut = Bipartition::new(&c.inputs().labels(), &c.outputs().labels())?;
    let ppt = ppt_test(c.op(), &cut, tol)?;
    let verdict = match (ppt.is_ppt, ppt.exactness) {
        (false, _) => EbVerdict::NotEntanglementBreaking,
        (true, Exactness::PptDecisive) => EbVerdict::EntanglementBreaking,
        (true, Exactness::PptNecessaryOnly) => EbVerdict::Undetermined,
    };
    Ok(EbChannelReport { verdict, ppt })
}

/// PPT verdicts on the two canonical cuts of a superchannel.
#[derive(Debug, Clone, PartialEq)]
pub struct BreakingReport {
    /// Cut `A1 B2 | B1 A2`.
    pub type_i: PptVerdict,
    /// Cut `A1 A2 | B1 B2`.
    pub type_ii: PptVerdict,
    /// Same as the type-I verdict.
    pub common_cause_breaking: bool,
}

pub fn type_i_cut() -> Bipartition {
    Bipartition::new(&[A1, B2], &[B1, A2]).expect("distinct labels")
}

pub fn type_ii_cut() -> Bipartition {
    Bipartition::new(&[A1, A2], &[B1, B2]).expect("distinct labels")
}

pub fn superchannel_breaking_report(theta: &SuperchannelChoi, tol: f64) -> Result<BreakingReport> {
    ensure_valid(theta, tol)?;
    let type_i = ppt_test(theta.op(), &type_i_cut(), tol)?;
    let type_ii = ppt_test(theta.op(), &type_ii_cut(), tol)?;
    Ok(BreakingReport {
        common_cause_breaking: type_i.is_ppt,
        type_i,
        type_ii,
    })
}

fn check_state(m: &CMatrix, tol: f64) -> Result<()> {
    if !m.is_square() {
        return Err(Error::dims("state must be square"));
    }
    let op = LabeledOperator::square(m.clone(), SystemList::single("S", m.nrows()))?;
    let deviation = op.hermiticity_deviation();
    if deviation > tol {
        return Err(Error::NotHermitian { deviation, tol });
    }
    let min = crate::tensor::min_eigenvalue(&op)?;
    if min < -tol {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    let tr = op.trace();
    if (tr - C64::new(1.0, 0.0)).norm() > tol {
        return Err(Error::OutOfRange(format!("state has trace {tr}")));
    }
    Ok(())
}

/// Superchannel that sends `A1` to `B2` noiselessly, prepares `omega` on
/// `B1` and discards `A2`:
/// `J = Gamma_{A1B2} (x) 1_A2 (x) omega_B1`.
///
/// `A1`, `A2` and `B2` have dimension `d`; `B1` has the dimension of
/// `omega`, which defaults to `|0><0|` on a `d`-dimensional system.
pub fn example_type1_not_type2(d: usize, omega: Option<&CMatrix>) -> Result<SuperchannelChoi> {
    if d == 0 {
        return Err(Error::OutOfRange("dimension must be at least 1".into()));
    }
    let omega = match omega {
        Some(w) => {
            check_state(w, crate::tensor::DEFAULT_TOL)?;
            w.clone()
        }
        None => {
            let mut w = CMatrix::zeros(d, d);
            w[(0, 0)] = C64::new(1.0, 0.0);
            w
        }
    };
    let gamma = LabeledOperator::gamma(A1, B2, d)?.projector()?;
    let id = LabeledOperator::identity(SystemList::single(A2, d));
    let w = LabeledOperator::square(omega.clone(), SystemList::single(B1, omega.nrows()))?;
    SuperchannelChoi::new(
        gamma
            .kron(&id)?
            .kron(&w)?
            .permute_square(&[A1, A2, B1, B2])?,
    )
}

/// Depolarizing channel on dimension `d`:
/// `J = (1-p) Gamma + (p/d) 1`.
pub fn depolarizing_channel(d: usize, p: f64) -> Result<ChoiRep> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("depolarizing parameter {p}")));
    }
    if d == 0 {
        return Err(Error::OutOfRange("dimension must be at least 1".into()));
    }
    let g = LabeledOperator::gamma("A", "B", d)?.projector()?;
    let id = LabeledOperator::identity(g.outputs().clone());
    let j = g.scale_real(1.0 - p).add(&id.scale_real(p / d as f64))?;
    ChoiRep::new(j, SystemList::single("A", d), SystemList::single("B", d))
}

const MAX_ATTEMPTS: usize = 16;

/// Random superchannel separable across `A1 A2 | B1 B2`, together with
/// the separable decomposition it was built from.
///
/// Terms are `(P_a (x) R^a_b) (x) (omega_a (x) tau_ab)` with POVMs `{P_a}` on
/// `A1`, `{R^a_b}_b` on `A2` and random states `omega_a`, `tau_ab`, each
/// POVM having `n_terms` outcomes. This makes the result no-signalling.
pub fn random_eb_superchannel_with_decomposition(
    rng: &mut Rng,
    dims: SuperDims,
    n_terms: usize,
) -> Result<(SuperchannelChoi, SeparableDecomposition)> {
    if n_terms == 0 {
        return Err(Error::OutOfRange("need at least one outcome".into()));
    }
    let sa1 = SystemList::single(A1, dims.a1);
    let sa2 = SystemList::single(A2, dims.a2);
    let sb1 = SystemList::single(B1, dims.b1);
    let sb2 = SystemList::single(B2, dims.b2);
    for _ in 0..MAX_ATTEMPTS {
        let p = povm(rng, sa1.clone(), n_terms)?;
        let mut terms = Vec::with_capacity(n_terms * n_terms);
        for pa in &p {
            let r = povm(rng, sa2.clone(), n_terms)?;
            let omega = full_rank_state(rng, sb1.clone())?;
            for rb in &r {
                let tau = full_rank_state(rng, sb2.clone())?;
                terms.push((pa.kron(rb)?, omega.kron(&tau)?));
            }
        }
        let dec = SeparableDecomposition::new(terms, crate::tensor::DEFAULT_TOL)?;
        let theta = SuperchannelChoi::new(dec.reconstruct()?)?;
        if validate_superchannel(&theta, crate::tensor::DEFAULT_TOL).is_valid() {
            return Ok((theta, dec));
        }
    }
    Err(Error::GenerationFailed {
        attempts: MAX_ATTEMPTS,
    })
}

/// Random superchannel separable across `A1 A2 | B1 B2`.
pub fn random_eb_superchannel(
    rng: &mut Rng,
    dims: SuperDims,
    n_terms: usize,
) -> Result<SuperchannelChoi> {
    random_eb_superchannel_with_decomposition(rng, dims, n_terms).map(|(t, _)| t)
}
