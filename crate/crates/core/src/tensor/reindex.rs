//! Index rearrangements of labeled operators: vectorization, matricization
//! (full and partial), permutation of systems, partial transpose and
//! partial trace.
//!
//! Every rearrangement except the partial trace is a pure permutation of
//! entries; no arithmetic is performed.

use super::operator::{LabeledOperator, C64};
use super::systems::{System, SystemList};
use crate::error::{Error, Result};

/// Permutes the axes of a row-major tensor. Output axis `k` is input axis
/// `perm[k]`.
pub(crate) fn permute_axes(data: &[C64], dims: &[usize], perm: &[usize]) -> Vec<C64> {
    debug_assert_eq!(dims.len(), perm.len());
    let total: usize = dims.iter().product();
    debug_assert_eq!(total, data.len());
    if total == 0 {
        return Vec::new();
    }
    let rank = dims.len();
    let mut strides = vec![1usize; rank];
    for i in (0..rank.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let new_strides: Vec<usize> = perm.iter().map(|&p| strides[p]).collect();

    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; rank];
    let mut offset = 0usize;
    for _ in 0..total {
        out.push(data[offset]);
        // odometer increment, last axis fastest
        for k in (0..rank).rev() {
            idx[k] += 1;
            offset += new_strides[k];
            if idx[k] < new_dims[k] {
                break;
            }
            offset -= new_strides[k] * new_dims[k];
            idx[k] = 0;
        }
    }
    out
}

/// Primed copy of a label, used when a moved leg collides with a label
/// already present on the destination side.
pub fn primed(label: &str) -> String {
    format!("{label}'")
}

fn fresh_label(label: &str, taken: &SystemList) -> String {
    let mut l = label.to_string();
    while taken.contains(&l) {
        l = primed(&l);
    }
    l
}

impl LabeledOperator {
    /// General leg rearrangement. Source axes are numbered outputs first,
    /// then inputs. `out_axes`/`in_axes` select source axes for the new row
    /// and column legs; the new system lists must have matching dims.
    pub(crate) fn rearrange(
        &self,
        out_axes: &[usize],
        in_axes: &[usize],
        new_outputs: SystemList,
        new_inputs: SystemList,
    ) -> Result<LabeledOperator> {
        let dims: Vec<usize> = self
            .outputs()
            .iter()
            .chain(self.inputs().iter())
            .map(|s| s.dim)
            .collect();
        let perm: Vec<usize> = out_axes.iter().chain(in_axes.iter()).copied().collect();
        debug_assert!({
            let mut p = perm.clone();
            p.sort_unstable();
            p == (0..dims.len()).collect::<Vec<_>>()
        });
        for (axis, s) in out_axes
            .iter()
            .zip(new_outputs.iter())
            .chain(in_axes.iter().zip(new_inputs.iter()))
        {
            if dims[*axis] != s.dim {
                return Err(Error::dims(format!(
                    "leg `{}` has dim {} but source axis has {}",
                    s.label, s.dim, dims[*axis]
                )));
            }
        }
        let data = permute_axes(&self.to_row_major(), &dims, &perm);
        LabeledOperator::from_row_major(&data, new_inputs, new_outputs)
    }

    /// Moves the input leg `label` to the front of the outputs.
    ///
    /// If the outputs already hold `label`, the moved leg is renamed to the
    /// primed label `label'`.
    pub fn partial_vec(&self, label: &str) -> Result<LabeledOperator> {
        let n_out = self.outputs().len();
        let p = self
            .inputs()
            .position(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
        let moved = &self.inputs().as_slice()[p];
        let new_label = fresh_label(label, self.outputs());

        let mut out_axes = vec![n_out + p];
        out_axes.extend(0..n_out);
        let in_axes: Vec<usize> = (0..self.inputs().len())
            .filter(|&j| j != p)
            .map(|j| n_out + j)
            .collect();

        let mut outs = vec![System::new(new_label, moved.dim)];
        outs.extend(self.outputs().iter().cloned());
        let ins = self.inputs().without(&[label]);
        self.rearrange(&out_axes, &in_axes, SystemList::new(outs)?, ins)
    }

    /// Moves the output leg `label` to the front of the inputs; inverse of
    /// [`LabeledOperator::partial_vec`].
    pub fn partial_mat(&self, label: &str) -> Result<LabeledOperator> {
        let n_out = self.outputs().len();
        let p = self
            .outputs()
            .position(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
        let moved = &self.outputs().as_slice()[p];
        let remaining_outs = self.outputs().without(&[label]);

        // undo the priming done by partial_vec
        let new_label = match label.strip_suffix('\'') {
            Some(base) if !self.inputs().contains(base) && remaining_outs.contains(base) => {
                base.to_string()
            }
            _ => fresh_label(label, self.inputs()),
        };

        let out_axes: Vec<usize> = (0..n_out).filter(|&j| j != p).collect();
        let mut in_axes = vec![p];
        in_axes.extend(n_out..n_out + self.inputs().len());

        let mut ins = vec![System::new(new_label, moved.dim)];
        ins.extend(self.inputs().iter().cloned());
        self.rearrange(&out_axes, &in_axes, remaining_outs, SystemList::new(ins)?)
    }

    /// Full vectorization: every input leg moves to the outputs, input copy
    /// first. `vec(M)` has component `M[a, i]` at composite index `(i, a)`.
    pub fn vec(&self) -> Result<LabeledOperator> {
        let mut cur = self.clone();
        for s in self.inputs().iter().rev() {
            cur = cur.partial_vec(&s.label)?;
        }
        Ok(cur)
    }

    /// Matricization of a ket: the leading output systems, whose dims must
    /// match `split`, become the inputs and take the labels of `split`.
    pub fn mat(&self, split: &SystemList) -> Result<LabeledOperator> {
        if !self.inputs().is_empty() {
            return Err(Error::dims("mat expects a ket (no input systems)"));
        }
        let k = split.len();
        let outs = self.outputs().as_slice();
        if outs.len() < k
            || outs[..k]
                .iter()
                .zip(split.iter())
                .any(|(a, b)| a.dim != b.dim)
        {
            return Err(Error::dims(format!(
                "cannot split {} with leading factors {}",
                self.outputs(),
                split
            )));
        }
        // all moved legs go to the inputs in one rearrangement
        let out_axes: Vec<usize> = (k..outs.len()).collect();
        let in_axes: Vec<usize> = (0..k).collect();
        let new_outs = SystemList::new(outs[k..].to_vec())?;
        self.rearrange(&out_axes, &in_axes, new_outs, split.clone())
    }

    /// Reorders the systems on each side. `inputs`/`outputs` must be
    /// permutations of the current labels.
    pub fn permute_systems(&self, inputs: &[&str], outputs: &[&str]) -> Result<LabeledOperator> {
        let check = |order: &[&str], current: &SystemList, side: &str| -> Result<()> {
            let mut seen = Vec::with_capacity(order.len());
            for l in order {
                if !current.contains(l) || seen.contains(l) {
                    return Err(Error::NotAPermutation(format!(
                        "{side} order {order:?} vs {current}"
                    )));
                }
                seen.push(*l);
            }
            if order.len() != current.len() {
                return Err(Error::NotAPermutation(format!(
                    "{side} order {order:?} vs {current}"
                )));
            }
            Ok(())
        };
        check(inputs, self.inputs(), "input")?;
        check(outputs, self.outputs(), "output")?;
        let n_out = self.outputs().len();
        let out_axes: Vec<usize> = outputs
            .iter()
            .map(|l| self.outputs().position(l).unwrap())
            .collect();
        let in_axes: Vec<usize> = inputs
            .iter()
            .map(|l| n_out + self.inputs().position(l).unwrap())
            .collect();
        let new_outs = SystemList::new(
            outputs
                .iter()
                .map(|l| self.outputs().get(l).unwrap().clone())
                .collect(),
        )?;
        let new_ins = SystemList::new(
            inputs
                .iter()
                .map(|l| self.inputs().get(l).unwrap().clone())
                .collect(),
        )?;
        self.rearrange(&out_axes, &in_axes, new_outs, new_ins)
    }

    /// Reorders a square operator's systems on both sides at once.
    pub fn permute_square(&self, order: &[&str]) -> Result<LabeledOperator> {
        self.permute_systems(order, order)
    }

    fn check_square_on(&self, label: &str) -> Result<(usize, usize)> {
        let o = self
            .outputs()
            .position(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
        let i = self
            .inputs()
            .position(label)
            .ok_or_else(|| Error::NotSquareOn(label.to_string()))?;
        if self.outputs().as_slice()[o].dim != self.inputs().as_slice()[i].dim {
            return Err(Error::NotSquareOn(label.to_string()));
        }
        Ok((o, i))
    }

    /// Swaps the row and column indices of the named factors.
    pub fn partial_transpose(&self, labels: &[&str]) -> Result<LabeledOperator> {
        let n_out = self.outputs().len();
        let mut out_axes: Vec<usize> = (0..n_out).collect();
        let mut in_axes: Vec<usize> = (0..self.inputs().len()).map(|j| n_out + j).collect();
        for l in labels {
            let (o, i) = self.check_square_on(l)?;
            out_axes[o] = n_out + i;
            in_axes[i] = o;
        }
        self.rearrange(
            &out_axes,
            &in_axes,
            self.outputs().clone(),
            self.inputs().clone(),
        )
    }

    /// Traces out the named factors. Each label must appear on both sides
    /// with the same dimension. Summation runs in ascending composite index
    /// of the traced factors.
    pub fn partial_trace(&self, labels: &[&str]) -> Result<LabeledOperator> {
        let mut pairs = Vec::with_capacity(labels.len());
        for (k, l) in labels.iter().enumerate() {
            if labels[..k].contains(l) {
                return Err(Error::DuplicateLabel(l.to_string()));
            }
            pairs.push(self.check_square_on(l)?);
        }
        let n_out = self.outputs().len();
        let rest_out = self.outputs().without(labels);
        let rest_in = self.inputs().without(labels);
        let traced_dim: usize = labels
            .iter()
            .map(|l| self.outputs().dim_of(l).unwrap())
            .product();

        // layout [rest_out, traced] x [rest_in, traced]
        let mut out_axes: Vec<usize> = (0..n_out)
            .filter(|&j| !labels.contains(&self.outputs().as_slice()[j].label.as_str()))
            .collect();
        out_axes.extend(pairs.iter().map(|&(o, _)| o));
        let mut in_axes: Vec<usize> = (0..self.inputs().len())
            .filter(|&j| !labels.contains(&self.inputs().as_slice()[j].label.as_str()))
            .map(|j| n_out + j)
            .collect();
        in_axes.extend(pairs.iter().map(|&(_, i)| n_out + i));

        let dims: Vec<usize> = self
            .outputs()
            .iter()
            .chain(self.inputs().iter())
            .map(|s| s.dim)
            .collect();
        let perm: Vec<usize> = out_axes.iter().chain(in_axes.iter()).copied().collect();
        let data = permute_axes(&self.to_row_major(), &dims, &perm);

        let (r, c) = (rest_out.total_dim(), rest_in.total_dim());
        let row_len = c * traced_dim;
        let mut result = vec![C64::new(0.0, 0.0); r * c];
        for row in 0..r {
            for col in 0..c {
                let mut acc = C64::new(0.0, 0.0);
                for t in 0..traced_dim {
                    acc += data[(row * traced_dim + t) * row_len + col * traced_dim + t];
                }
                result[row * c + col] = acc;
            }
        }
        LabeledOperator::from_row_major(&result, rest_in, rest_out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::operator::CMatrix;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn sl(pairs: &[(&str, usize)]) -> SystemList {
        SystemList::from_pairs(pairs.iter().copied()).unwrap()
    }

    fn op(
        rows: usize,
        cols: usize,
        vals: &[f64],
        ins: SystemList,
        outs: SystemList,
    ) -> LabeledOperator {
        let data: Vec<C64> = vals.iter().map(|&v| c(v)).collect();
        LabeledOperator::new(CMatrix::from_row_slice(rows, cols, &data), ins, outs).unwrap()
    }

    #[test]
    fn permute_axes_transposes_matrix() {
        let data: Vec<C64> = (0..6).map(|i| c(i as f64)).collect();
        let t = permute_axes(&data, &[2, 3], &[1, 0]);
        let expect: Vec<C64> = [0., 3., 1., 4., 2., 5.].iter().map(|&v| c(v)).collect();
        assert_eq!(t, expect);
    }

    #[test]
    fn vec_of_identity_is_gamma() {
        let id = LabeledOperator::identity(sl(&[("A", 2)]))
            .relabel_outputs(&["B"])
            .unwrap();
        let v = id.vec().unwrap();
        assert_eq!(v.to_row_major(), vec![c(1.), c(0.), c(0.), c(1.)]);
        assert_eq!(v.outputs().labels(), vec!["A", "B"]);
    }

    #[test]
    fn vec_column_stacks() {
        let m = op(2, 2, &[1., 2., 3., 4.], sl(&[("A", 2)]), sl(&[("B", 2)]));
        let v = m.vec().unwrap();
        assert_eq!(v.to_row_major(), vec![c(1.), c(3.), c(2.), c(4.)]);
    }

    #[test]
    fn vec_primes_colliding_label_and_mat_restores() {
        let rho = op(2, 2, &[1., 2., 3., 4.], sl(&[("A", 2)]), sl(&[("A", 2)]));
        let v = rho.vec().unwrap();
        assert_eq!(v.outputs().labels(), vec!["A'", "A"]);
        let back = v.partial_mat("A'").unwrap();
        assert_eq!(back, rho);
    }

    #[test]
    fn mat_inverts_vec_examples() {
        let g = LabeledOperator::gamma("A", "B", 2).unwrap();
        let m = g.mat(&sl(&[("A", 2)])).unwrap();
        assert_eq!(m.to_row_major(), vec![c(1.), c(0.), c(0.), c(1.)]);
        assert_eq!(m.inputs().labels(), vec!["A"]);
        assert_eq!(m.outputs().labels(), vec!["B"]);

        let v =
            LabeledOperator::ket(&[c(1.), c(3.), c(2.), c(4.)], sl(&[("A", 2), ("B", 2)])).unwrap();
        let m = v.mat(&sl(&[("A", 2)])).unwrap();
        assert_eq!(m.to_row_major(), vec![c(1.), c(2.), c(3.), c(4.)]);
    }

    #[test]
    fn mat_rejects_bad_split() {
        let v = LabeledOperator::ket(&[c(1.); 6], sl(&[("A", 2), ("B", 3)])).unwrap();
        assert!(matches!(
            v.mat(&sl(&[("A", 3)])),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn partial_vec_unknown_label() {
        let m = LabeledOperator::identity(sl(&[("A", 2)]));
        assert_eq!(
            m.partial_vec("Z").unwrap_err(),
            Error::UnknownLabel("Z".into())
        );
        assert_eq!(
            m.partial_mat("Z").unwrap_err(),
            Error::UnknownLabel("Z".into())
        );
    }

    #[test]
    fn partial_trace_of_gamma_projector_is_identity() {
        let g = LabeledOperator::gamma("A", "B", 3)
            .unwrap()
            .projector()
            .unwrap();
        let t = g.partial_trace(&["B"]).unwrap();
        assert_eq!(t, LabeledOperator::identity(sl(&[("A", 3)])));
    }

    #[test]
    fn partial_trace_requires_both_sides() {
        let m = LabeledOperator::zeros(sl(&[("A", 2)]), sl(&[("B", 2)]));
        assert_eq!(
            m.partial_trace(&["B"]).unwrap_err(),
            Error::NotSquareOn("B".into())
        );
    }

    #[test]
    fn partial_transpose_of_gamma_is_swap() {
        let g = LabeledOperator::gamma("A", "B", 2)
            .unwrap()
            .projector()
            .unwrap();
        let pt = g.partial_transpose(&["B"]).unwrap();
        let swap = [
            1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0., 0., 0., 0., 0., 1.,
        ];
        assert_eq!(
            pt.to_row_major(),
            swap.iter().map(|&v| c(v)).collect::<Vec<_>>()
        );
    }

    #[test]
    fn permute_rejects_non_permutation() {
        let m = LabeledOperator::identity(sl(&[("A", 2), ("B", 2)]));
        assert!(matches!(
            m.permute_square(&["A", "A"]),
            Err(Error::NotAPermutation(_))
        ));
        assert!(matches!(
            m.permute_square(&["A"]),
            Err(Error::NotAPermutation(_))
        ));
    }

    #[test]
    fn zero_dimensional_systems_are_legal() {
        let m = LabeledOperator::identity(sl(&[("A", 0), ("B", 2)]));
        let t = m.partial_trace(&["B"]).unwrap();
        assert_eq!(t.matrix().shape(), (0, 0));
        let p = m.permute_square(&["B", "A"]).unwrap();
        assert_eq!(p.matrix().shape(), (0, 0));
    }
}
