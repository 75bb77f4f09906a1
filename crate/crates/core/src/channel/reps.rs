use crate::error::{Error, Result};
use crate::tensor::{
    frobenius_diff, min_eigenvalue, primed, psd_decompose, CMatrix, LabeledOperator, System,
    SystemList, C64,
};

fn check_disjoint(inputs: &SystemList, outputs: &SystemList) -> Result<()> {
    for s in inputs {
        if outputs.contains(&s.label) {
            return Err(Error::DuplicateLabel(s.label.clone()));
        }
    }
    Ok(())
}

/// Choi operator `J = sum_ij |i><j| (x) E(|i><j|)` on inputs (x) outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiRep {
    op: LabeledOperator,
    inputs: SystemList,
    outputs: SystemList,
}

impl ChoiRep {
    /// `op` must be square on `inputs ++ outputs` in that order.
    pub fn new(op: LabeledOperator, inputs: SystemList, outputs: SystemList) -> Result<Self> {
        check_disjoint(&inputs, &outputs)?;
        let all = inputs.concat(&outputs)?;
        if op.inputs() != &all || op.outputs() != &all {
            return Err(Error::dims(format!(
                "Choi operator on {} -> {} does not match channel {} -> {}",
                op.inputs(),
                op.outputs(),
                inputs,
                outputs
            )));
        }
        Ok(ChoiRep {
            op,
            inputs,
            outputs,
        })
    }

    pub fn from_matrix(matrix: CMatrix, inputs: SystemList, outputs: SystemList) -> Result<Self> {
        let all = inputs.concat(&outputs)?;
        Self::new(LabeledOperator::square(matrix, all)?, inputs, outputs)
    }

    pub fn op(&self) -> &LabeledOperator {
        &self.op
    }

    pub fn into_op(self) -> LabeledOperator {
        self.op
    }

    pub fn inputs(&self) -> &SystemList {
        &self.inputs
    }

    pub fn outputs(&self) -> &SystemList {
        &self.outputs
    }

    pub fn input_dim(&self) -> usize {
        self.inputs.total_dim()
    }

    pub fn output_dim(&self) -> usize {
        self.outputs.total_dim()
    }

    /// Same channel with its inputs merged into one system `input` and its
    /// outputs merged into `output`.
    pub fn fused(&self, input: &str, output: &str) -> Result<ChoiRep> {
        let ins = SystemList::single(input, self.input_dim());
        let outs = SystemList::single(output, self.output_dim());
        let all = ins.concat(&outs)?;
        let op = self.op.with_systems(all.clone(), all)?;
        ChoiRep::new(op, ins, outs)
    }

    /// Same matrix with new labels for the input and output systems.
    pub fn relabeled<S: AsRef<str>>(&self, inputs: &[S], outputs: &[S]) -> Result<ChoiRep> {
        let ins = self.inputs.relabeled(inputs)?;
        let outs = self.outputs.relabeled(outputs)?;
        let all = ins.concat(&outs)?;
        ChoiRep::new(self.op.with_systems(all.clone(), all)?, ins, outs)
    }
}

/// Operator-sum form `E(rho) = sum_i K_i rho K_i^dag`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausRep {
    ops: Vec<LabeledOperator>,
    inputs: SystemList,
    outputs: SystemList,
}

impl KrausRep {
    pub fn new(ops: Vec<LabeledOperator>, inputs: SystemList, outputs: SystemList) -> Result<Self> {
        check_disjoint(&inputs, &outputs)?;
        if ops.is_empty() {
            return Err(Error::OutOfRange(
                "a Kraus set needs at least one operator".into(),
            ));
        }
        for (i, k) in ops.iter().enumerate() {
            if k.inputs() != &inputs || k.outputs() != &outputs {
                return Err(Error::dims(format!(
                    "Kraus operator {i} maps {} -> {}, expected {} -> {}",
                    k.inputs(),
                    k.outputs(),
                    inputs,
                    outputs
                )));
            }
        }
        Ok(KrausRep {
            ops,
            inputs,
            outputs,
        })
    }

    /// Builds a Kraus set from plain matrices.
    pub fn from_matrices(
        matrices: Vec<CMatrix>,
        inputs: SystemList,
        outputs: SystemList,
    ) -> Result<Self> {
        let ops = matrices
            .into_iter()
            .map(|m| LabeledOperator::new(m, inputs.clone(), outputs.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ops, inputs, outputs)
    }

    pub fn ops(&self) -> &[LabeledOperator] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn inputs(&self) -> &SystemList {
        &self.inputs
    }

    pub fn outputs(&self) -> &SystemList {
        &self.outputs
    }

    /// `||sum_i K_i^dag K_i - 1||_F`.
    pub fn tp_deviation(&self) -> f64 {
        let d = self.inputs.total_dim();
        let sum = self.ops.iter().fold(CMatrix::zeros(d, d), |acc, k| {
            acc + k.matrix().adjoint() * k.matrix()
        });
        frobenius_diff(&sum, &CMatrix::identity(d, d))
    }
}

/// Isometry `V: A -> B (x) E` with `E(rho) = Tr_E[V rho V^dag]`. The
/// environment is the last output factor of `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct StinespringRep {
    v: LabeledOperator,
    inputs: SystemList,
    outputs: SystemList,
    env: System,
}

impl StinespringRep {
    pub fn new(
        v: LabeledOperator,
        inputs: SystemList,
        outputs: SystemList,
        env: System,
    ) -> Result<Self> {
        check_disjoint(&inputs, &outputs)?;
        let full = outputs.concat(&SystemList::single(env.label.clone(), env.dim))?;
        if v.inputs() != &inputs || v.outputs() != &full {
            return Err(Error::dims(format!(
                "Stinespring operator maps {} -> {}, expected {} -> {}",
                v.inputs(),
                v.outputs(),
                inputs,
                full
            )));
        }
        Ok(StinespringRep {
            v,
            inputs,
            outputs,
            env,
        })
    }

    pub fn v(&self) -> &LabeledOperator {
        &self.v
    }

    pub fn env(&self) -> &System {
        &self.env
    }

    pub fn env_dim(&self) -> usize {
        self.env.dim
    }

    pub fn inputs(&self) -> &SystemList {
        &self.inputs
    }

    pub fn outputs(&self) -> &SystemList {
        &self.outputs
    }

    /// `||V^dag V - 1||_F`.
    pub fn isometry_deviation(&self) -> f64 {
        let m = self.v.matrix();
        let d = m.ncols();
        frobenius_diff(&(m.adjoint() * m), &CMatrix::identity(d, d))
    }
}

/// Matrix `L` with `L vec(rho) = vec(E(rho))`. Rows are indexed by
/// `outputs' ++ outputs`, columns by `inputs' ++ inputs`, primes marking
/// the copy that `vec` moves out of the column index.
#[derive(Debug, Clone, PartialEq)]
pub struct LiouvilleRep {
    op: LabeledOperator,
    inputs: SystemList,
    outputs: SystemList,
}

fn primed_list(list: &SystemList) -> Result<SystemList> {
    let labels: Vec<String> = list.iter().map(|s| primed(&s.label)).collect();
    list.relabeled(&labels)
}

/// System list of `vec(rho)` for `rho` on `list`.
pub(crate) fn vec_systems(list: &SystemList) -> Result<SystemList> {
    primed_list(list)?.concat(list)
}

impl LiouvilleRep {
    pub fn new(op: LabeledOperator, inputs: SystemList, outputs: SystemList) -> Result<Self> {
        check_disjoint(&inputs, &outputs)?;
        if op.inputs() != &vec_systems(&inputs)? || op.outputs() != &vec_systems(&outputs)? {
            return Err(Error::dims(format!(
                "Liouville operator {} -> {} does not match channel {} -> {}",
                op.inputs(),
                op.outputs(),
                inputs,
                outputs
            )));
        }
        Ok(LiouvilleRep {
            op,
            inputs,
            outputs,
        })
    }

    pub fn from_matrix(matrix: CMatrix, inputs: SystemList, outputs: SystemList) -> Result<Self> {
        let op = LabeledOperator::new(matrix, vec_systems(&inputs)?, vec_systems(&outputs)?)?;
        Self::new(op, inputs, outputs)
    }

    pub fn op(&self) -> &LabeledOperator {
        &self.op
    }

    pub fn inputs(&self) -> &SystemList {
        &self.inputs
    }

    pub fn outputs(&self) -> &SystemList {
        &self.outputs
    }
}

/// Any of the four channel representations.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelRep {
    Choi(ChoiRep),
    Kraus(KrausRep),
    Stinespring(StinespringRep),
    Liouville(LiouvilleRep),
}

impl ChannelRep {
    pub fn inputs(&self) -> &SystemList {
        match self {
            ChannelRep::Choi(c) => c.inputs(),
            ChannelRep::Kraus(k) => k.inputs(),
            ChannelRep::Stinespring(s) => s.inputs(),
            ChannelRep::Liouville(l) => l.inputs(),
        }
    }

    pub fn outputs(&self) -> &SystemList {
        match self {
            ChannelRep::Choi(c) => c.outputs(),
            ChannelRep::Kraus(k) => k.outputs(),
            ChannelRep::Stinespring(s) => s.outputs(),
            ChannelRep::Liouville(l) => l.outputs(),
        }
    }

    pub fn to_choi(&self) -> Result<ChoiRep> {
        match self {
            ChannelRep::Choi(c) => Ok(c.clone()),
            ChannelRep::Kraus(k) => choi_from_kraus(k),
            ChannelRep::Stinespring(s) => choi_from_kraus(&kraus_from_stinespring_unchecked(s)?),
            ChannelRep::Liouville(l) => choi_from_liouville(l),
        }
    }

    /// Kraus form; a Choi or Liouville source is decomposed with `tol`.
    pub fn to_kraus(&self, tol: f64) -> Result<KrausRep> {
        match self {
            ChannelRep::Kraus(k) => Ok(k.clone()),
            ChannelRep::Stinespring(s) => kraus_from_stinespring(s, tol),
            other => kraus_from_choi(&other.to_choi()?, tol),
        }
    }

    pub fn to_stinespring(&self, tol: f64) -> Result<StinespringRep> {
        match self {
            ChannelRep::Stinespring(s) => Ok(s.clone()),
            other => stinespring_from_kraus(&other.to_kraus(tol)?, tol),
        }
    }

    pub fn to_liouville(&self, tol: f64) -> Result<LiouvilleRep> {
        match self {
            ChannelRep::Liouville(l) => Ok(l.clone()),
            ChannelRep::Choi(c) => liouville_from_choi(c),
            other => liouville_from_kraus(&other.to_kraus(tol)?),
        }
    }

    /// Applies the channel to a state whose dimension matches the input.
    pub fn apply(&self, rho: &LabeledOperator) -> Result<LabeledOperator> {
        apply_channel(self, rho)
    }
}

/// `J = sum_i vec(K_i) vec(K_i)^dag`.
pub fn choi_from_kraus(k: &KrausRep) -> Result<ChoiRep> {
    let all = k.inputs().concat(k.outputs())?;
    let n = all.total_dim();
    let mut j = CMatrix::zeros(n, n);
    for op in k.ops() {
        let v = op.vec()?;
        j += v.matrix() * v.matrix().adjoint();
    }
    ChoiRep::from_matrix(j, k.inputs().clone(), k.outputs().clone())
}

/// Minimal Kraus set from the spectral decomposition of `J`:
/// `K_i = mat(sqrt(lambda_i) v_i)` over the eigenvalues above `tol` times
/// the largest.
pub fn kraus_from_choi(c: &ChoiRep, tol: f64) -> Result<KrausRep> {
    let dec = psd_decompose(c.op(), tol)?;
    dec.ensure_psd()?;
    let keep = dec.significant(tol);
    let mut ops = Vec::with_capacity(keep.len().max(1));
    for i in keep {
        let v = dec.ket(i).scale_real(dec.eigenvalues[i].sqrt());
        ops.push(v.mat(c.inputs())?);
    }
    if ops.is_empty() {
        ops.push(LabeledOperator::zeros(
            c.inputs().clone(),
            c.outputs().clone(),
        ));
    }
    KrausRep::new(ops, c.inputs().clone(), c.outputs().clone())
}

fn env_label(k: &KrausRep) -> String {
    let mut l = "E".to_string();
    while k.inputs().contains(&l) || k.outputs().contains(&l) {
        l = primed(&l);
    }
    l
}

/// `V = sum_i K_i (x) |i>_E`; fails if the Kraus set is not trace preserving.
pub fn stinespring_from_kraus(k: &KrausRep, tol: f64) -> Result<StinespringRep> {
    let deviation = k.tp_deviation();
    if deviation > tol {
        return Err(Error::NotTracePreserving { deviation });
    }
    let r = k.len();
    let d_out = k.outputs().total_dim();
    let d_in = k.inputs().total_dim();
    let mut v = CMatrix::zeros(d_out * r, d_in);
    for (i, op) in k.ops().iter().enumerate() {
        for b in 0..d_out {
            for a in 0..d_in {
                v[(b * r + i, a)] = op.get(b, a);
            }
        }
    }
    let env = System::new(env_label(k), r);
    let outs = k
        .outputs()
        .concat(&SystemList::single(env.label.clone(), r))?;
    let v = LabeledOperator::new(v, k.inputs().clone(), outs)?;
    StinespringRep::new(v, k.inputs().clone(), k.outputs().clone(), env)
}

fn kraus_from_stinespring_unchecked(s: &StinespringRep) -> Result<KrausRep> {
    let r = s.env_dim();
    let d_out = s.outputs().total_dim();
    let d_in = s.inputs().total_dim();
    let ops = (0..r)
        .map(|i| {
            let m = CMatrix::from_fn(d_out, d_in, |b, a| s.v().get(b * r + i, a));
            LabeledOperator::new(m, s.inputs().clone(), s.outputs().clone())
        })
        .collect::<Result<Vec<_>>>()?;
    if ops.is_empty() {
        return KrausRep::new(
            vec![LabeledOperator::zeros(
                s.inputs().clone(),
                s.outputs().clone(),
            )],
            s.inputs().clone(),
            s.outputs().clone(),
        );
    }
    KrausRep::new(ops, s.inputs().clone(), s.outputs().clone())
}

/// `K_i = (1 (x) <i|_E) V`; returns exactly `env_dim` operators.
pub fn kraus_from_stinespring(s: &StinespringRep, tol: f64) -> Result<KrausRep> {
    let deviation = s.isometry_deviation();
    if deviation > tol {
        return Err(Error::NotIsometry { deviation });
    }
    kraus_from_stinespring_unchecked(s)
}

/// `L = sum_i conj(K_i) (x) K_i`.
pub fn liouville_from_kraus(k: &KrausRep) -> Result<LiouvilleRep> {
    let ins = vec_systems(k.inputs())?;
    let outs = vec_systems(k.outputs())?;
    let mut l = CMatrix::zeros(outs.total_dim(), ins.total_dim());
    for op in k.ops() {
        l += op.matrix().map(|z| z.conj()).kronecker(op.matrix());
    }
    LiouvilleRep::new(
        LabeledOperator::new(l, ins, outs)?,
        k.inputs().clone(),
        k.outputs().clone(),
    )
}

/// Reshuffle `J[(a,b),(a',b')] = L[(b',b),(a',a)]`.
pub fn choi_from_liouville(l: &LiouvilleRep) -> Result<ChoiRep> {
    let m = l.inputs().len();
    let k = l.outputs().len();
    // source axes: L outputs [B'..., B...], then L inputs [A'..., A...]
    let a_axis = |j: usize| 2 * k + m + j;
    let a_primed_axis = |j: usize| 2 * k + j;
    let b_axis = |j: usize| k + j;
    let b_primed_axis = |j: usize| j;
    let out_axes: Vec<usize> = (0..m).map(a_axis).chain((0..k).map(b_axis)).collect();
    let in_axes: Vec<usize> = (0..m)
        .map(a_primed_axis)
        .chain((0..k).map(b_primed_axis))
        .collect();
    let all = l.inputs().concat(l.outputs())?;
    let op = l.op().rearrange(&out_axes, &in_axes, all.clone(), all)?;
    ChoiRep::new(op, l.inputs().clone(), l.outputs().clone())
}

/// Inverse reshuffle of [`choi_from_liouville`].
pub fn liouville_from_choi(c: &ChoiRep) -> Result<LiouvilleRep> {
    let m = c.inputs().len();
    let k = c.outputs().len();
    // source axes: J outputs [A..., B...], then J inputs [A'..., B'...]
    let a_axis = |j: usize| j;
    let b_axis = |j: usize| m + j;
    let a_primed_axis = |j: usize| m + k + j;
    let b_primed_axis = |j: usize| 2 * m + k + j;
    let out_axes: Vec<usize> = (0..k)
        .map(b_primed_axis)
        .chain((0..k).map(b_axis))
        .collect();
    let in_axes: Vec<usize> = (0..m)
        .map(a_primed_axis)
        .chain((0..m).map(a_axis))
        .collect();
    let op = c.op().rearrange(
        &out_axes,
        &in_axes,
        vec_systems(c.outputs())?,
        vec_systems(c.inputs())?,
    )?;
    LiouvilleRep::new(op, c.inputs().clone(), c.outputs().clone())
}

/// Outcome of [`validate_channel`]; every verdict is backed by its witness.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelValidityReport {
    pub hermitian: bool,
    pub hermiticity_deviation: f64,
    pub cp: bool,
    pub min_eigenvalue: f64,
    pub tp: bool,
    /// `||Tr_B J - 1_A||_F`.
    pub tp_deviation: f64,
    pub tol: f64,
}

impl ChannelValidityReport {
    pub fn is_valid(&self) -> bool {
        self.hermitian && self.cp && self.tp
    }
}

/// CP and TP checks on a Choi operator. Never fails on invalid input.
pub fn validate_channel(c: &ChoiRep, tol: f64) -> ChannelValidityReport {
    let hermiticity_deviation = c.op().hermiticity_deviation();
    let min_eig = min_eigenvalue(c.op()).unwrap_or(f64::NEG_INFINITY);
    let out_labels = c.outputs().labels();
    let tp_deviation = c
        .op()
        .partial_trace(&out_labels)
        .map(|t| frobenius_diff(t.matrix(), &CMatrix::identity(c.input_dim(), c.input_dim())))
        .unwrap_or(f64::INFINITY);
    ChannelValidityReport {
        hermitian: hermiticity_deviation <= tol,
        hermiticity_deviation,
        cp: min_eig >= -tol,
        min_eigenvalue: min_eig,
        tp: tp_deviation <= tol,
        tp_deviation,
        tol,
    }
}

fn as_input_state(rho: &LabeledOperator, inputs: &SystemList) -> Result<LabeledOperator> {
    let (r, c) = rho.matrix().shape();
    let d = inputs.total_dim();
    if r != d || c != d {
        return Err(Error::dims(format!(
            "state is {r}x{c}, channel input {inputs} has dimension {d}"
        )));
    }
    LabeledOperator::square(rho.matrix().clone(), inputs.clone())
}

/// Applies any representation to `rho`. The state is matched to the
/// channel input by dimension; the result lives on the channel outputs.
pub fn apply_channel(rep: &ChannelRep, rho: &LabeledOperator) -> Result<LabeledOperator> {
    let rho = as_input_state(rho, rep.inputs())?;
    match rep {
        ChannelRep::Choi(c) => super::link_product(&rho, c.op()),
        ChannelRep::Kraus(k) => {
            let d = k.outputs().total_dim();
            let mut out = CMatrix::zeros(d, d);
            for op in k.ops() {
                out += op.matrix() * rho.matrix() * op.matrix().adjoint();
            }
            LabeledOperator::square(out, k.outputs().clone())
        }
        ChannelRep::Stinespring(s) => {
            let full = s.v().compose(&rho)?.compose(&s.v().adjoint())?;
            full.partial_trace(&[s.env().label.as_str()])
        }
        ChannelRep::Liouville(l) => {
            let v = l.op().compose(&rho.vec()?)?;
            v.mat(l.outputs())
        }
    }
}

/// Jamiolkowski-type variants of the Choi operator: `f` acts on the
/// assembled operator, `g` on the basis inputs before the channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChoiVariant {
    Identity,
    Transpose,
}

/// `J_(f,g) = f(sum_ij |i><j| (x) E(g(|i><j|)))`.
///
/// With `g` the transpose the sum becomes the partial transpose of `J` on
/// the input factors; with `f` the transpose the whole operator is
/// transposed. Both are involutions, so applying the same variant twice
/// recovers `J`.
pub fn generalized_choi(c: &ChoiRep, f: ChoiVariant, g: ChoiVariant) -> Result<LabeledOperator> {
    let mut op = c.op().clone();
    if g == ChoiVariant::Transpose {
        op = op.partial_transpose(&c.inputs().labels())?;
    }
    if f == ChoiVariant::Transpose {
        op = op.transpose();
    }
    Ok(op)
}

/// Recovers `J` from `J_(f,g)`.
pub fn invert_generalized_choi(
    op: &LabeledOperator,
    inputs: &SystemList,
    outputs: &SystemList,
    f: ChoiVariant,
    g: ChoiVariant,
) -> Result<ChoiRep> {
    let mut op = op.clone();
    if f == ChoiVariant::Transpose {
        op = op.transpose();
    }
    if g == ChoiVariant::Transpose {
        op = op.partial_transpose(&inputs.labels())?;
    }
    ChoiRep::new(op, inputs.clone(), outputs.clone())
}

/// Choi operator of the linear map `X -> map(X)` from `inputs` to
/// `outputs`, assembled from its action on the matrix units.
pub(crate) fn choi_of_map<F>(
    inputs: &SystemList,
    outputs: &SystemList,
    mut map: F,
) -> Result<ChoiRep>
where
    F: FnMut(&LabeledOperator) -> Result<LabeledOperator>,
{
    let d_in = inputs.total_dim();
    let d_out = outputs.total_dim();
    let n = d_in * d_out;
    let mut j = CMatrix::zeros(n, n);
    for x in 0..d_in {
        for y in 0..d_in {
            let mut unit = CMatrix::zeros(d_in, d_in);
            unit[(x, y)] = C64::new(1.0, 0.0);
            let image = map(&LabeledOperator::square(unit, inputs.clone())?)?;
            if image.matrix().shape() != (d_out, d_out) {
                return Err(Error::dims("map image has the wrong dimension"));
            }
            for b in 0..d_out {
                for bb in 0..d_out {
                    j[(x * d_out + b, y * d_out + bb)] = image.get(b, bb);
                }
            }
        }
    }
    ChoiRep::from_matrix(j, inputs.clone(), outputs.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn a(d: usize) -> SystemList {
        SystemList::single("A", d)
    }

    fn b(d: usize) -> SystemList {
        SystemList::single("B", d)
    }

    fn identity_kraus(d: usize) -> KrausRep {
        KrausRep::from_matrices(vec![CMatrix::identity(d, d)], a(d), b(d)).unwrap()
    }

    fn gamma_choi(d: usize) -> ChoiRep {
        let g = LabeledOperator::gamma("A", "B", d)
            .unwrap()
            .projector()
            .unwrap();
        ChoiRep::new(g, a(d), b(d)).unwrap()
    }

    #[test]
    fn identity_kraus_gives_gamma() {
        assert_eq!(choi_from_kraus(&identity_kraus(2)).unwrap(), gamma_choi(2));
    }

    #[test]
    fn reset_channel_choi_by_hand() {
        // K0 = |0><0|, K1 = |0><1|
        let k0 = CMatrix::from_row_slice(2, 2, &[c(1.), c(0.), c(0.), c(0.)]);
        let k1 = CMatrix::from_row_slice(2, 2, &[c(0.), c(1.), c(0.), c(0.)]);
        let k = KrausRep::from_matrices(vec![k0, k1], a(2), b(2)).unwrap();
        let j = choi_from_kraus(&k).unwrap();
        // 1_A (x) |0><0|_B
        let mut expect = CMatrix::zeros(4, 4);
        expect[(0, 0)] = c(1.);
        expect[(2, 2)] = c(1.);
        assert_eq!(j.op().matrix(), &expect);
    }

    #[test]
    fn kraus_from_gamma_is_single_identity() {
        let k = kraus_from_choi(&gamma_choi(2), 1e-9).unwrap();
        assert_eq!(k.len(), 1);
        let m = k.ops()[0].matrix();
        assert!((m - CMatrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn depolarizing_choi_has_four_kraus() {
        let j = ChoiRep::from_matrix(CMatrix::identity(4, 4) * c(0.5), a(2), b(2)).unwrap();
        assert_eq!(kraus_from_choi(&j, 1e-9).unwrap().len(), 4);
    }

    #[test]
    fn kraus_from_non_psd_choi_fails() {
        let g = gamma_choi(2);
        let bad = ChoiRep::new(
            g.op()
                .sub(&LabeledOperator::identity(g.op().outputs().clone()).scale_real(0.1))
                .unwrap(),
            a(2),
            b(2),
        )
        .unwrap();
        assert!(matches!(
            kraus_from_choi(&bad, 1e-9),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn stinespring_of_identity() {
        let s = stinespring_from_kraus(&identity_kraus(2), 1e-9).unwrap();
        assert_eq!(s.env_dim(), 1);
        assert_eq!(s.v().matrix(), &CMatrix::identity(2, 2));
        let k = kraus_from_stinespring(&s, 1e-9).unwrap();
        assert_eq!(k, identity_kraus(2));
    }

    #[test]
    fn stinespring_rejects_non_tp() {
        let k = KrausRep::from_matrices(vec![CMatrix::identity(2, 2) * c(2.)], a(2), b(2)).unwrap();
        assert!(matches!(
            stinespring_from_kraus(&k, 1e-9),
            Err(Error::NotTracePreserving { .. })
        ));
    }

    #[test]
    fn kraus_from_stinespring_rejects_non_isometry() {
        let v = LabeledOperator::new(
            CMatrix::identity(2, 2) * c(3.),
            a(2),
            SystemList::from_pairs([("B", 2), ("E", 1)]).unwrap(),
        )
        .unwrap();
        let s = StinespringRep::new(v, a(2), b(2), System::new("E", 1)).unwrap();
        assert!(matches!(
            kraus_from_stinespring(&s, 1e-9),
            Err(Error::NotIsometry { .. })
        ));
    }

    #[test]
    fn two_kraus_stinespring_shape() {
        let k0 = CMatrix::from_row_slice(2, 2, &[c(1.), c(0.), c(0.), c(0.)]);
        let k1 = CMatrix::from_row_slice(2, 2, &[c(0.), c(1.), c(0.), c(0.)]);
        let k = KrausRep::from_matrices(vec![k0, k1], a(2), b(2)).unwrap();
        let s = stinespring_from_kraus(&k, 1e-9).unwrap();
        assert_eq!(s.env_dim(), 2);
        assert_eq!(s.v().matrix().shape(), (4, 2));
        // zero Kraus operators are returned as-is
        let z = StinespringRep::new(
            LabeledOperator::new(
                CMatrix::from_fn(6, 2, |r, c| {
                    if r == 3 * c {
                        C64::new(1., 0.)
                    } else {
                        C64::new(0., 0.)
                    }
                }),
                a(2),
                SystemList::from_pairs([("B", 2), ("E", 3)]).unwrap(),
            )
            .unwrap(),
            a(2),
            b(2),
            System::new("E", 3),
        )
        .unwrap();
        assert_eq!(kraus_from_stinespring(&z, 1e-9).unwrap().len(), 3);
    }

    #[test]
    fn liouville_of_identity_is_identity() {
        let l = liouville_from_kraus(&identity_kraus(2)).unwrap();
        assert_eq!(l.op().matrix(), &CMatrix::identity(4, 4));
        assert_eq!(l.op().inputs().labels(), vec!["A'", "A"]);
    }

    #[test]
    fn validate_examples() {
        let g = gamma_choi(2);
        assert!(validate_channel(&g, 1e-9).is_valid());

        let shifted = ChoiRep::new(
            g.op()
                .sub(&LabeledOperator::identity(g.op().outputs().clone()).scale_real(0.1))
                .unwrap(),
            a(2),
            b(2),
        )
        .unwrap();
        let r = validate_channel(&shifted, 1e-9);
        assert!(!r.cp && r.min_eigenvalue < 0.0);

        let doubled = ChoiRep::new(g.op().scale_real(2.0), a(2), b(2)).unwrap();
        let r = validate_channel(&doubled, 1e-9);
        assert!(r.cp && !r.tp);
        assert!((r.tp_deviation - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn generalized_choi_variants() {
        let g = gamma_choi(2);
        let same = generalized_choi(&g, ChoiVariant::Identity, ChoiVariant::Identity).unwrap();
        assert_eq!(&same, g.op());
        let jam = generalized_choi(&g, ChoiVariant::Identity, ChoiVariant::Transpose).unwrap();
        let swap = [
            1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0., 0., 0., 0., 0., 1.,
        ];
        assert_eq!(
            jam.to_row_major(),
            swap.iter().map(|&v| c(v)).collect::<Vec<_>>()
        );
    }

    #[test]
    fn labels_must_be_disjoint() {
        let k = KrausRep::from_matrices(
            vec![CMatrix::identity(2, 2)],
            a(2),
            SystemList::single("A", 2),
        );
        assert_eq!(k.unwrap_err(), Error::DuplicateLabel("A".into()));
    }

    #[test]
    fn apply_rejects_wrong_dimension() {
        let rep = ChannelRep::Kraus(identity_kraus(2));
        let rho = LabeledOperator::identity(a(3));
        assert!(matches!(
            apply_channel(&rep, &rho),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
