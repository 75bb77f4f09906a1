use crate::channel::{choi_of_map, vec_systems, ChoiRep};
use crate::error::{Error, Result};
use crate::tensor::{frobenius_diff, psd_decompose, CMatrix, LabeledOperator, SystemList};

use super::{input_channel_op, output_channel, SuperDims, SuperchannelChoi, A1, A2, B1, B2};

/// Kraus-type operators of a superchannel.
///
/// `N_i: A1 A2 -> B1 B2` come from the spectral decomposition
/// `J^theta = sum_i vec(N_i) vec(N_i)^dag`. The other two families are
/// reindexings of the same entries:
///
/// - `Q_i: B1 A1 A2 -> B2`, the partial matricization of `N_i` over `B1`;
/// - `K_i: B1 A2 -> A1 B2`, `N_i` vectorized over `A1` then matricized
///   over `B1`, so `K_i[(a1,b2),(b1,a2)] = N_i[(b1,b2),(a1,a2)]`.
#[derive(Debug, Clone)]
pub struct SuperKrausFamily {
    n_ops: Vec<LabeledOperator>,
    q_ops: Vec<LabeledOperator>,
    k_ops: Vec<LabeledOperator>,
    dims: SuperDims,
}

impl SuperKrausFamily {
    pub fn n_ops(&self) -> &[LabeledOperator] {
        &self.n_ops
    }

    pub fn q_ops(&self) -> &[LabeledOperator] {
        &self.q_ops
    }

    pub fn k_ops(&self) -> &[LabeledOperator] {
        &self.k_ops
    }

    pub fn len(&self) -> usize {
        self.n_ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n_ops.is_empty()
    }

    pub fn dims(&self) -> SuperDims {
        self.dims
    }

    /// `sum_i vec(N_i) vec(N_i)^dag`.
    pub fn rebuild(&self) -> Result<SuperchannelChoi> {
        let n = self.dims.total();
        let mut j = CMatrix::zeros(n, n);
        for op in &self.n_ops {
            let v = op.vec()?;
            j += v.matrix() * v.matrix().adjoint();
        }
        SuperchannelChoi::from_matrix(j, self.dims)
    }

    /// `||Tr_B1[sum_i Q_i^dag Q_i] - 1_{A1A2}||_F`.
    pub fn completeness_deviation(&self) -> Result<f64> {
        let sys = self.q_ops[0].inputs().clone();
        let mut sum = LabeledOperator::zeros(sys.clone(), sys);
        for q in &self.q_ops {
            sum = sum.add(&q.adjoint().compose(q)?)?;
        }
        let t = sum.partial_trace(&[B1])?;
        let d = self.dims.a1 * self.dims.a2;
        Ok(frobenius_diff(t.matrix(), &CMatrix::identity(d, d)))
    }
}

/// Minimal family `{N_i}` from the eigenvalues of `J^theta` above `tol`
/// times the largest.
pub fn n_operators(theta: &SuperchannelChoi, tol: f64) -> Result<SuperKrausFamily> {
    let dec = psd_decompose(theta.op(), tol)?;
    dec.ensure_psd()?;
    let split = SystemList::from_pairs([(A1, theta.dims().a1), (A2, theta.dims().a2)])?;
    let mut n_ops = Vec::new();
    for i in dec.significant(tol) {
        n_ops.push(
            dec.ket(i)
                .scale_real(dec.eigenvalues[i].sqrt())
                .mat(&split)?,
        );
    }
    if n_ops.is_empty() {
        return Err(Error::NotAValidSuperchannel("Choi operator is zero".into()));
    }
    let q_ops = n_ops
        .iter()
        .map(|n| n.partial_mat(B1))
        .collect::<Result<Vec<_>>>()?;
    let k_ops = n_ops
        .iter()
        .map(|n| n.partial_vec(A1)?.partial_mat(B1))
        .collect::<Result<Vec<_>>>()?;
    Ok(SuperKrausFamily {
        n_ops,
        q_ops,
        k_ops,
        dims: theta.dims(),
    })
}

/// `J^{theta(e)} = sum_i K_i J^e K_i^dag`.
pub fn kraus_apply(family: &SuperKrausFamily, e: &ChoiRep) -> Result<ChoiRep> {
    let je = input_channel_op(family.dims.b1, family.dims.a2, e)?;
    let sys = family.k_ops[0].outputs().clone();
    let mut out = LabeledOperator::zeros(sys.clone(), sys);
    for k in &family.k_ops {
        out = out.add(&k.compose(&je)?.compose(&k.adjoint())?)?;
    }
    output_channel(out)
}

fn joint_input(je: &LabeledOperator, rho: &LabeledOperator) -> Result<LabeledOperator> {
    je.kron(rho)?.permute_square(&[B1, A1, A2])
}

/// Output channel through the `Q` layout:
/// `theta(e)(rho) = sum_i Q_i (J^e (x) rho) Q_i^dag`, with the joint input
/// regrouped to `B1 A1 A2`.
pub fn q_apply(family: &SuperKrausFamily, e: &ChoiRep) -> Result<ChoiRep> {
    let d = family.dims;
    let je = input_channel_op(d.b1, d.a2, e)?;
    let ins = SystemList::single(A1, d.a1);
    let outs = SystemList::single(B2, d.b2);
    choi_of_map(&ins, &outs, |rho| {
        let x = joint_input(&je, rho)?;
        let mut acc = LabeledOperator::zeros(outs.clone(), outs.clone());
        for q in &family.q_ops {
            acc = acc.add(&q.compose(&x)?.compose(&q.adjoint())?)?;
        }
        Ok(acc)
    })
}

/// `V_s = sum_i Q_i (x) |i>_E: B1 A1 A2 -> B2 E`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperStinespring {
    v: LabeledOperator,
    env_dim: usize,
}

impl SuperStinespring {
    pub fn v(&self) -> &LabeledOperator {
        &self.v
    }

    pub fn env_dim(&self) -> usize {
        self.env_dim
    }

    /// `||Tr_B1[V_s^dag V_s] - 1_{A1A2}||_F`.
    pub fn relaxed_normalization_deviation(&self) -> Result<f64> {
        let t = self.v.adjoint().compose(&self.v)?.partial_trace(&[B1])?;
        let d = t.matrix().nrows();
        Ok(frobenius_diff(t.matrix(), &CMatrix::identity(d, d)))
    }
}

pub const ENV: &str = "E";

pub fn super_stinespring(family: &SuperKrausFamily) -> Result<SuperStinespring> {
    let r = family.len();
    let d = family.dims;
    let ins = family.q_ops[0].inputs().clone();
    let outs = SystemList::from_pairs([(B2, d.b2), (ENV, r)])?;
    let cols = ins.total_dim();
    let mut v = CMatrix::zeros(d.b2 * r, cols);
    for (i, q) in family.q_ops.iter().enumerate() {
        for b in 0..d.b2 {
            for c in 0..cols {
                v[(b * r + i, c)] = q.get(b, c);
            }
        }
    }
    Ok(SuperStinespring {
        v: LabeledOperator::new(v, ins, outs)?,
        env_dim: r,
    })
}

/// `theta(e)(rho) = Tr_E[V_s (J^e (x) rho) V_s^dag]`.
pub fn stinespring_apply(s: &SuperStinespring, e: &ChoiRep) -> Result<ChoiRep> {
    let ins = s.v.inputs();
    let (a1, a2, b1) = (ins.dim_of(A1)?, ins.dim_of(A2)?, ins.dim_of(B1)?);
    let b2 = s.v.outputs().dim_of(B2)?;
    let je = input_channel_op(b1, a2, e)?;
    let vdag = s.v.adjoint();
    choi_of_map(
        &SystemList::single(A1, a1),
        &SystemList::single(B2, b2),
        |rho| {
            let x = joint_input(&je, rho)?;
            s.v.compose(&x)?.compose(&vdag)?.partial_trace(&[ENV])
        },
    )
}

/// `K = sum_i conj(K_i) (x) K_i`, acting on `vec(J^e)`.
pub fn super_liouville(family: &SuperKrausFamily) -> Result<LabeledOperator> {
    let k0 = &family.k_ops[0];
    let ins = vec_systems(k0.inputs())?;
    let outs = vec_systems(k0.outputs())?;
    let mut l = CMatrix::zeros(outs.total_dim(), ins.total_dim());
    for k in &family.k_ops {
        l += k.matrix().map(|z| z.conj()).kronecker(k.matrix());
    }
    LabeledOperator::new(l, ins, outs)
}

/// `vec(J^{theta(e)}) = K vec(J^e)`. `e` need not be a valid channel.
pub fn liouville_apply(k: &LabeledOperator, e: &ChoiRep) -> Result<ChoiRep> {
    let (b1, a2) = (k.inputs().dim_of(B1)?, k.inputs().dim_of(A2)?);
    let (a1, b2) = (k.outputs().dim_of(A1)?, k.outputs().dim_of(B2)?);
    let je = input_channel_op(b1, a2, e)?;
    let split = SystemList::from_pairs([(A1, a1), (B2, b2)])?;
    output_channel(k.compose(&je.vec()?)?.mat(&split)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{choi_from_kraus, random_channel};
    use crate::random::rng;
    use crate::superchannel::{apply_to_channel, identity_superchannel, random_superchannel};

    fn random_input(seed: u64, b1: usize, a2: usize) -> ChoiRep {
        let k = random_channel(
            &mut rng(seed),
            SystemList::single("x", b1),
            SystemList::single("y", a2),
            2,
        )
        .unwrap();
        choi_from_kraus(&k).unwrap()
    }

    #[test]
    fn identity_family_is_single_operator() {
        let theta = identity_superchannel(2, 2).unwrap();
        let f = n_operators(&theta, 1e-9).unwrap();
        assert_eq!(f.len(), 1);
        let e = random_input(1, 2, 2);
        let out = kraus_apply(&f, &e).unwrap();
        assert!(frobenius_diff(out.op().matrix(), e.op().matrix()) < 1e-12);
        assert_eq!(super_stinespring(&f).unwrap().env_dim(), 1);
    }

    #[test]
    fn all_paths_agree() {
        let theta = random_superchannel(&mut rng(8), SuperDims::new(2, 2, 3, 2), 2).unwrap();
        let f = n_operators(&theta, 1e-9).unwrap();
        assert!(frobenius_diff(f.rebuild().unwrap().matrix(), theta.matrix()) < 1e-10);
        assert!(f.completeness_deviation().unwrap() < 1e-10);
        let e = random_input(4, 3, 2);
        let link = apply_to_channel(&theta, &e, 1e-9).unwrap();
        let s = super_stinespring(&f).unwrap();
        assert!(s.relaxed_normalization_deviation().unwrap() < 1e-10);
        let l = super_liouville(&f).unwrap();
        for other in [
            kraus_apply(&f, &e).unwrap(),
            q_apply(&f, &e).unwrap(),
            stinespring_apply(&s, &e).unwrap(),
            liouville_apply(&l, &e).unwrap(),
        ] {
            assert!(frobenius_diff(other.op().matrix(), link.op().matrix()) < 1e-10);
        }
    }
}
