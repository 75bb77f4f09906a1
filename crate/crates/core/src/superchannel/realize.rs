use crate::channel::{choi_from_kraus, choi_of_map, kraus_from_choi, ChoiRep, KrausRep};
use crate::error::{Error, Result};
use crate::tensor::{frobenius_diff, numeric_rank, CMatrix, LabeledOperator, SystemList, C64};

use super::kraus::{n_operators, SuperKrausFamily};
use super::{ensure_valid, superchannel_from_parts, SuperchannelChoi, A1, A2, B1, B2};

/// The channel `F_theta: A1 -> B1`,
/// `rho -> (1/d_A2) Tr_A2[sum_i K_i^dag (rho (x) 1_B2) K_i]`, with a
/// minimal Kraus set.
#[derive(Debug, Clone)]
pub struct FThetaChannel {
    pub choi: ChoiRep,
    pub kraus: KrausRep,
    pub rank: usize,
}

pub fn f_theta_channel(family: &SuperKrausFamily, tol: f64) -> Result<FThetaChannel> {
    let d = family.dims();
    let ins = SystemList::single(A1, d.a1);
    let outs = SystemList::single(B1, d.b1);
    let id_b2 = LabeledOperator::identity(SystemList::single(B2, d.b2));
    let scale = 1.0 / d.a2 as f64;
    let choi = choi_of_map(&ins, &outs, |rho| {
        let x = rho.kron(&id_b2)?;
        let mut acc: Option<LabeledOperator> = None;
        for k in family.k_ops() {
            let term = k.adjoint().compose(&x)?.compose(k)?;
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term)?,
            });
        }
        Ok(acc
            .expect("family is never empty")
            .partial_trace(&[A2])?
            .scale_real(scale))
    })?;
    let kraus = kraus_from_choi(&choi, tol)?;
    let rank = if choi.op().frobenius_norm() == 0.0 {
        0
    } else {
        kraus.len()
    };
    Ok(FThetaChannel { choi, kraus, rank })
}

/// `rank Tr_{A2B2}[sum_i vec(K_i^dag) vec(K_i^dag)^dag]`.
pub fn memory_cost_from_family(family: &SuperKrausFamily, rtol: f64) -> Result<usize> {
    let mut acc: Option<LabeledOperator> = None;
    for k in family.k_ops() {
        let p = k.adjoint().vec()?.projector()?;
        acc = Some(match acc {
            None => p,
            Some(a) => a.add(&p)?,
        });
    }
    let j = acc.expect("family is never empty");
    Ok(numeric_rank(&j.partial_trace(&[A2, B2])?, rtol))
}

/// Smallest memory dimension of a sequential realization of `theta`.
pub fn memory_cost(theta: &SuperchannelChoi, tol: f64, rtol: f64) -> Result<usize> {
    memory_cost_from_family(&n_operators(theta, tol)?, rtol)
}

/// `theta = Tr_E2 . W . V` with `V: A1 -> E1 B1` and `W: E1 A2 -> E2 B2`.
#[derive(Debug, Clone)]
pub struct Realization {
    pub v: LabeledOperator,
    pub w: LabeledOperator,
    pub e1_dim: usize,
    pub e2_dim: usize,
    /// `||V^dag V - 1||_F`.
    pub v_deviation: f64,
    /// `||W^dag W - 1||_F`.
    pub w_deviation: f64,
    /// Relative Frobenius distance of the rebuilt Choi operator.
    pub residual: f64,
}

impl Realization {
    /// Pre-processing channel with Kraus operator `V`.
    pub fn pre_channel(&self) -> Result<ChoiRep> {
        let k = KrausRep::new(
            vec![self.v.clone()],
            self.v.inputs().clone(),
            self.v.outputs().clone(),
        )?;
        choi_from_kraus(&k)
    }

    /// Post-processing channel `Tr_E2[W . W^dag]`.
    pub fn post_channel(&self) -> Result<ChoiRep> {
        let e2 = self.e2_dim;
        let b2 = self.w.outputs().dim_of(B2)?;
        let cols = self.w.matrix().ncols();
        let outs = SystemList::single(B2, b2);
        let ops = (0..e2)
            .map(|i| {
                let t = CMatrix::from_fn(b2, cols, |b, c| self.w.get(i * b2 + b, c));
                LabeledOperator::new(t, self.w.inputs().clone(), outs.clone())
            })
            .collect::<Result<Vec<_>>>()?;
        choi_from_kraus(&KrausRep::new(ops, self.w.inputs().clone(), outs)?)
    }
}

pub const E1: &str = "E1";
pub const E2: &str = "E2";

/// Sequential realization with the minimal memory.
///
/// `V = sum_j |j>_E1 (x) conj(L_j)` from the minimal Kraus set `{L_j}` of
/// `F_theta`, and `W` has blocks
/// `T_ij = (1/lambda_j) sum_{a1,b1} L_j[b1,a1] K_i[(a1,.),(b1,.)]`,
/// `lambda_j = Tr[L_j^dag L_j]`. The result is rebuilt and compared with
/// `theta`; a residual above `tol` is an error.
pub fn realize(theta: &SuperchannelChoi, tol: f64) -> Result<Realization> {
    ensure_valid(theta, tol)?;
    let d = theta.dims();
    let family = n_operators(theta, tol)?;
    let f = f_theta_channel(&family, tol)?;
    let ls: Vec<&CMatrix> = f.kraus.ops().iter().map(|l| l.matrix()).collect();
    let e1 = ls.len();
    let e2 = family.len();

    // V[(j,b1),a1] = conj(L_j[b1,a1])
    let mut v = CMatrix::zeros(e1 * d.b1, d.a1);
    for (j, l) in ls.iter().enumerate() {
        for b1 in 0..d.b1 {
            for a1 in 0..d.a1 {
                v[(j * d.b1 + b1, a1)] = l[(b1, a1)].conj();
            }
        }
    }
    let v = LabeledOperator::new(
        v,
        SystemList::single(A1, d.a1),
        SystemList::from_pairs([(E1, e1), (B1, d.b1)])?,
    )?;

    // W[(i,b2),(j,a2)] = T_ij[b2,a2]
    let mut w = CMatrix::zeros(e2 * d.b2, e1 * d.a2);
    for (j, l) in ls.iter().enumerate() {
        let lambda: f64 = l.iter().map(|z| z.norm_sqr()).sum();
        for (i, k) in family.k_ops().iter().enumerate() {
            for b2 in 0..d.b2 {
                for a2 in 0..d.a2 {
                    let mut t = C64::new(0.0, 0.0);
                    for a1 in 0..d.a1 {
                        for b1 in 0..d.b1 {
                            t += l[(b1, a1)] * k.get(a1 * d.b2 + b2, b1 * d.a2 + a2);
                        }
                    }
                    w[(i * d.b2 + b2, j * d.a2 + a2)] = t / lambda;
                }
            }
        }
    }
    let w = LabeledOperator::new(
        w,
        SystemList::from_pairs([(E1, e1), (A2, d.a2)])?,
        SystemList::from_pairs([(E2, e2), (B2, d.b2)])?,
    )?;

    let v_deviation = frobenius_diff(
        &(v.matrix().adjoint() * v.matrix()),
        &CMatrix::identity(d.a1, d.a1),
    );
    let n = e1 * d.a2;
    let w_deviation = frobenius_diff(
        &(w.matrix().adjoint() * w.matrix()),
        &CMatrix::identity(n, n),
    );
    let mut out = Realization {
        v,
        w,
        e1_dim: e1,
        e2_dim: e2,
        v_deviation,
        w_deviation,
        residual: f64::INFINITY,
    };
    if v_deviation > tol || w_deviation > tol {
        return Err(Error::ResidualTooLarge {
            residual: v_deviation.max(w_deviation),
            tol,
        });
    }
    let rebuilt = superchannel_from_parts(&out.pre_channel()?, &out.post_channel()?, e1, tol)?;
    let residual = frobenius_diff(rebuilt.matrix(), theta.matrix()) / theta.op().frobenius_norm();
    if residual > tol {
        return Err(Error::ResidualTooLarge { residual, tol });
    }
    out.residual = residual;
    Ok(out)
}
