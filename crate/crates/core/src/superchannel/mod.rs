//! Superchannels `theta: A1 A2 -> B1 B2`, mapping channels `B1 -> A2` to
//! channels `A1 -> B2`, held as Choi operators on `A1 A2 B1 B2`.

mod gour;
mod kraus;
mod realize;

pub use gour::{choi_from_gour, gour_by_basis, gour_from_choi, GOUR_ORDER};
pub use kraus::{
    kraus_apply, liouville_apply, n_operators, q_apply, stinespring_apply, super_liouville,
    super_stinespring, SuperKrausFamily, SuperStinespring,
};
pub use realize::{
    f_theta_channel, memory_cost, memory_cost_from_family, realize, FThetaChannel, Realization,
};

use crate::channel::{choi_from_kraus, link_product, random_channel, validate_channel, ChoiRep};
use crate::error::{Error, Result};
use crate::random::Rng;
use crate::tensor::{frobenius_diff, min_eigenvalue, CMatrix, LabeledOperator, System, SystemList};

pub const A1: &str = "A1";
pub const A2: &str = "A2";
pub const B1: &str = "B1";
pub const B2: &str = "B2";

/// Local dimensions of a superchannel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuperDims {
    pub a1: usize,
    pub a2: usize,
    pub b1: usize,
    pub b2: usize,
}

impl SuperDims {
    pub fn new(a1: usize, a2: usize, b1: usize, b2: usize) -> Self {
        SuperDims { a1, a2, b1, b2 }
    }

    /// All four systems of dimension `d`.
    pub fn uniform(d: usize) -> Self {
        Self::new(d, d, d, d)
    }

    pub fn systems(&self) -> SystemList {
        SystemList::new(vec![
            System::new(A1, self.a1),
            System::new(A2, self.a2),
            System::new(B1, self.b1),
            System::new(B2, self.b2),
        ])
        .expect("canonical labels are distinct")
    }

    pub fn total(&self) -> usize {
        self.a1 * self.a2 * self.b1 * self.b2
    }
}

/// Choi operator of a superchannel, square on `A1 A2 B1 B2` in that order.
/// Construction checks structure only; see [`validate_superchannel`].
#[derive(Debug, Clone, PartialEq)]
pub struct SuperchannelChoi {
    op: LabeledOperator,
    dims: SuperDims,
}

impl SuperchannelChoi {
    pub fn new(op: LabeledOperator) -> Result<Self> {
        let sys = op.systems()?.clone();
        let labels = sys.labels();
        if labels != [A1, A2, B1, B2] {
            return Err(Error::dims(format!(
                "superchannel Choi must be on A1,A2,B1,B2, got {sys}"
            )));
        }
        let d = sys.dims();
        Ok(SuperchannelChoi {
            op,
            dims: SuperDims::new(d[0], d[1], d[2], d[3]),
        })
    }

    pub fn from_matrix(matrix: CMatrix, dims: SuperDims) -> Result<Self> {
        Self::new(LabeledOperator::square(matrix, dims.systems())?)
    }

    /// Reinterprets a square operator of the right size with canonical labels.
    pub fn from_operator(op: &LabeledOperator, dims: SuperDims) -> Result<Self> {
        let sys = dims.systems();
        Self::new(op.with_systems(sys.clone(), sys)?)
    }

    pub fn op(&self) -> &LabeledOperator {
        &self.op
    }

    pub fn matrix(&self) -> &CMatrix {
        self.op.matrix()
    }

    pub fn dims(&self) -> SuperDims {
        self.dims
    }

    /// `J_{A1B1} = Tr_{A2B2} J`, the pre-processing marginal.
    pub fn marginal_a1b1(&self) -> Result<LabeledOperator> {
        self.op.partial_trace(&[A2, B2])
    }
}

/// Verdicts of the three structural conditions, with their witnesses.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperchannelValidityReport {
    pub hermitian: bool,
    pub hermiticity_deviation: f64,
    pub cp: bool,
    pub min_eigenvalue: f64,
    pub tp: bool,
    /// `||Tr_{B1B2} J - 1_{A1A2}||_F`.
    pub tp_deviation: f64,
    pub ns: bool,
    /// `||Tr_{B2} J - J_{A1B1} (x) 1_{A2}/d_{A2}||_F`.
    pub ns_deviation: f64,
    pub tol: f64,
}

impl SuperchannelValidityReport {
    pub fn is_valid(&self) -> bool {
        self.hermitian && self.cp && self.tp && self.ns
    }

    /// Names of the failed conditions.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut f = Vec::new();
        if !self.hermitian {
            f.push("hermitian");
        }
        if !self.cp {
            f.push("cp");
        }
        if !self.tp {
            f.push("tp");
        }
        if !self.ns {
            f.push("ns");
        }
        f
    }
}

/// CP, TP and no-signalling checks. Never fails on invalid input.
pub fn validate_superchannel(theta: &SuperchannelChoi, tol: f64) -> SuperchannelValidityReport {
    let d = theta.dims();
    let op = theta.op();
    let hermiticity_deviation = op.hermiticity_deviation();
    let min_eig = min_eigenvalue(op).unwrap_or(f64::NEG_INFINITY);

    let d_a = d.a1 * d.a2;
    let tp_deviation = op
        .partial_trace(&[B1, B2])
        .map(|t| frobenius_diff(t.matrix(), &CMatrix::identity(d_a, d_a)))
        .unwrap_or(f64::INFINITY);

    let ns_deviation = (|| -> Result<f64> {
        let lhs = op.partial_trace(&[B2])?;
        let marg = theta.marginal_a1b1()?;
        let mix = LabeledOperator::identity(SystemList::single(A2, d.a2))
            .scale_real(1.0 / d.a2.max(1) as f64);
        let rhs = marg.kron(&mix)?.permute_square(&[A1, A2, B1])?;
        Ok(frobenius_diff(lhs.matrix(), rhs.matrix()))
    })()
    .unwrap_or(f64::INFINITY);

    SuperchannelValidityReport {
        hermitian: hermiticity_deviation <= tol,
        hermiticity_deviation,
        cp: min_eig >= -tol,
        min_eigenvalue: min_eig,
        tp: tp_deviation <= tol,
        tp_deviation,
        ns: ns_deviation <= tol,
        ns_deviation,
        tol,
    }
}

/// Returns `theta` unchanged if it is a valid superchannel.
pub fn ensure_valid(theta: &SuperchannelChoi, tol: f64) -> Result<()> {
    let r = validate_superchannel(theta, tol);
    if r.is_valid() {
        Ok(())
    } else {
        Err(Error::NotAValidSuperchannel(format!(
            "failed {} (min eigenvalue {:.3e}, tp deviation {:.3e}, ns deviation {:.3e})",
            r.failures().join(", "),
            r.min_eigenvalue,
            r.tp_deviation,
            r.ns_deviation
        )))
    }
}

fn ensure_channel(c: &ChoiRep, what: &str, tol: f64) -> Result<()> {
    let r = validate_channel(c, tol);
    if r.is_valid() {
        Ok(())
    } else {
        Err(Error::InvalidChannel(format!(
            "{what}: cp={} (min eigenvalue {:.3e}), tp={} (deviation {:.3e})",
            r.cp, r.min_eigenvalue, r.tp, r.tp_deviation
        )))
    }
}

const MEMORY: &str = "#E1";

/// Superchannel of the sequence `pre: A1 -> E1 B1`, memory `E1`,
/// `post: E1 A2 -> B2`, linked over the memory.
///
/// The memory is the leading factor of `pre`'s output and of `post`'s
/// input, with dimension `memory_dim`; the remaining factors give `B1` and
/// `A2`.
pub fn superchannel_from_parts(
    pre: &ChoiRep,
    post: &ChoiRep,
    memory_dim: usize,
    tol: f64,
) -> Result<SuperchannelChoi> {
    ensure_channel(pre, "pre-processing", tol)?;
    ensure_channel(post, "post-processing", tol)?;
    let m = memory_dim;
    if m == 0 || !pre.output_dim().is_multiple_of(m) || !post.input_dim().is_multiple_of(m) {
        return Err(Error::dims(format!(
            "memory dimension {m} does not divide pre output {} and post input {}",
            pre.output_dim(),
            post.input_dim()
        )));
    }
    let dims = SuperDims::new(
        pre.input_dim(),
        post.input_dim() / m,
        pre.output_dim() / m,
        post.output_dim(),
    );
    let pre_sys = SystemList::from_pairs([(A1, dims.a1), (MEMORY, m), (B1, dims.b1)])?;
    let post_sys = SystemList::from_pairs([(MEMORY, m), (A2, dims.a2), (B2, dims.b2)])?;
    let j_pre = pre.op().with_systems(pre_sys.clone(), pre_sys)?;
    let j_post = post.op().with_systems(post_sys.clone(), post_sys)?;
    let linked = link_product(&j_pre, &j_post)?;
    SuperchannelChoi::new(linked.permute_square(&[A1, A2, B1, B2])?)
}

/// Matches `e` to `B1 -> A2` by dimension.
pub(crate) fn input_channel_op(b1: usize, a2: usize, e: &ChoiRep) -> Result<LabeledOperator> {
    if e.input_dim() != b1 || e.output_dim() != a2 {
        return Err(Error::dims(format!(
            "input channel is {} -> {}, superchannel expects {b1} -> {a2}",
            e.input_dim(),
            e.output_dim(),
        )));
    }
    let sys = SystemList::from_pairs([(B1, b1), (A2, a2)])?;
    e.op().with_systems(sys.clone(), sys)
}

pub(crate) fn output_channel(op: LabeledOperator) -> Result<ChoiRep> {
    let ins = SystemList::single(A1, op.inputs().dim_of(A1)?);
    let outs = SystemList::single(B2, op.inputs().dim_of(B2)?);
    ChoiRep::new(op.permute_square(&[A1, B2])?, ins, outs)
}

/// `J^{theta(e)} = J^e * J^theta`. `e` must be a valid channel `B1 -> A2`.
pub fn apply_to_channel(theta: &SuperchannelChoi, e: &ChoiRep, tol: f64) -> Result<ChoiRep> {
    ensure_channel(e, "input channel", tol)?;
    let d = theta.dims();
    let je = input_channel_op(d.b1, d.a2, e)?;
    output_channel(link_product(&je, theta.op())?)
}

/// Applies `theta` to a causal map `kappa: B1 -> R A2`, passing the
/// reference `R` through. `kappa`'s outputs must be exactly two systems,
/// the reference first. The result is a channel `A1 -> R B2`.
pub fn apply_to_causal_map(theta: &SuperchannelChoi, kappa: &ChoiRep, tol: f64) -> Result<ChoiRep> {
    ensure_channel(kappa, "causal map", tol)?;
    let d = theta.dims();
    if kappa.outputs().len() != 2 {
        return Err(Error::dims("causal map outputs must be [R, A2]"));
    }
    let r = kappa.outputs().as_slice()[0].clone();
    if kappa.input_dim() != d.b1 || kappa.outputs().as_slice()[1].dim != d.a2 {
        return Err(Error::dims("causal map does not fit the superchannel"));
    }
    let r_label = "#R";
    let sys = SystemList::from_pairs([(B1, d.b1), (r_label, r.dim), (A2, d.a2)])?;
    let k = kappa.op().with_systems(sys.clone(), sys)?;
    let linked = link_product(&k, theta.op())?.permute_square(&[A1, r_label, B2])?;
    let ins = SystemList::single(A1, d.a1);
    let outs = SystemList::from_pairs([(r.label.as_str(), r.dim), (B2, d.b2)])?;
    let all = ins.concat(&outs)?;
    ChoiRep::new(linked.with_systems(all.clone(), all)?, ins, outs)
}

/// The superchannel that returns its input channel unchanged, with
/// `A1 = B1` of dimension `d_in` and `A2 = B2` of dimension `d_out`.
pub fn identity_superchannel(d_in: usize, d_out: usize) -> Result<SuperchannelChoi> {
    let g1 = LabeledOperator::gamma(A1, B1, d_in)?.projector()?;
    let g2 = LabeledOperator::gamma(A2, B2, d_out)?.projector()?;
    SuperchannelChoi::new(g1.kron(&g2)?.permute_square(&[A1, A2, B1, B2])?)
}

fn min_kraus_rank(d_in: usize, d_out: usize) -> usize {
    d_in.div_ceil(d_out.max(1)).max(1)
}

/// Random superchannel from a random pre-processing channel into a memory
/// of dimension `memory_dim` and a random post-processing channel.
///
/// The pre-processing is an isometry whenever `memory_dim * d_B1 >= d_A1`,
/// so `memory_dim` then bounds the memory cost of the result.
pub fn random_superchannel(
    rng: &mut Rng,
    dims: SuperDims,
    memory_dim: usize,
) -> Result<SuperchannelChoi> {
    if memory_dim == 0 {
        return Err(Error::OutOfRange(
            "memory dimension must be at least 1".into(),
        ));
    }
    let m = memory_dim;
    let pre = random_channel(
        rng,
        SystemList::single("in", dims.a1),
        SystemList::single("out", m * dims.b1),
        min_kraus_rank(dims.a1, m * dims.b1),
    )?;
    let post = random_channel(
        rng,
        SystemList::single("in", m * dims.a2),
        SystemList::single("out", dims.b2),
        min_kraus_rank(m * dims.a2, dims.b2) + 1,
    )?;
    superchannel_from_parts(
        &choi_from_kraus(&pre)?,
        &choi_from_kraus(&post)?,
        m,
        crate::tensor::DEFAULT_TOL,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::identity_channel;
    use crate::random::rng;

    #[test]
    fn identity_superchannel_from_parts() {
        let pre = identity_channel("a", "b", 2).unwrap();
        let post = identity_channel("c", "d", 2).unwrap();
        let theta = superchannel_from_parts(&pre, &post, 1, 1e-9).unwrap();
        assert_eq!(theta, identity_superchannel(2, 2).unwrap());
        assert!(validate_superchannel(&theta, 1e-9).is_valid());
    }

    #[test]
    fn identity_superchannel_returns_input() {
        let theta = identity_superchannel(2, 3).unwrap();
        let k = random_channel(
            &mut rng(3),
            SystemList::single("x", 2),
            SystemList::single("y", 3),
            2,
        )
        .unwrap();
        let e = choi_from_kraus(&k).unwrap();
        let out = apply_to_channel(&theta, &e, 1e-9).unwrap();
        assert!(frobenius_diff(out.op().matrix(), e.op().matrix()) < 1e-12);
    }

    #[test]
    fn negatives_fail_one_condition_each() {
        let theta = random_superchannel(&mut rng(9), SuperDims::uniform(2), 2).unwrap();
        assert!(validate_superchannel(&theta, 1e-9).is_valid());

        let doubled = SuperchannelChoi::new(theta.op().scale_real(2.0)).unwrap();
        assert_eq!(validate_superchannel(&doubled, 1e-9).failures(), vec!["tp"]);

        let swap = LabeledOperator::gamma(A1, B2, 2)
            .unwrap()
            .projector()
            .unwrap()
            .kron(
                &LabeledOperator::gamma(A2, B1, 2)
                    .unwrap()
                    .projector()
                    .unwrap(),
            )
            .unwrap()
            .permute_square(&[A1, A2, B1, B2])
            .unwrap();
        let mixed = SuperchannelChoi::new(
            theta
                .op()
                .scale_real(0.5)
                .add(&swap.scale_real(0.5))
                .unwrap(),
        )
        .unwrap();
        assert_eq!(validate_superchannel(&mixed, 1e-9).failures(), vec!["ns"]);
    }

    #[test]
    fn from_parts_rejects_bad_memory() {
        let pre = identity_channel("a", "b", 2).unwrap();
        let post = identity_channel("c", "d", 2).unwrap();
        assert!(superchannel_from_parts(&pre, &post, 3, 1e-9).is_err());
    }

    #[test]
    fn causal_map_with_trivial_reference_matches_channel() {
        let theta = random_superchannel(&mut rng(4), SuperDims::uniform(2), 1).unwrap();
        let e = choi_from_kraus(
            &random_channel(
                &mut rng(5),
                SystemList::single("x", 2),
                SystemList::single("y", 2),
                2,
            )
            .unwrap(),
        )
        .unwrap();
        let direct = apply_to_channel(&theta, &e, 1e-9).unwrap();
        let ins = SystemList::single("x", 2);
        let outs = SystemList::from_pairs([("R", 1), ("y", 2)]).unwrap();
        let all = ins.concat(&outs).unwrap();
        let kappa =
            ChoiRep::new(e.op().with_systems(all.clone(), all).unwrap(), ins, outs).unwrap();
        let via = apply_to_causal_map(&theta, &kappa, 1e-9).unwrap();
        assert!(frobenius_diff(via.op().matrix(), direct.op().matrix()) < 1e-12);
    }
}
