use crate::error::{Error, Result};
use crate::tensor::{permute_axes, CMatrix, LabeledOperator, System, SystemList};

use super::reps::ChoiRep;

/// Link product `M * N = Tr_C[M^{T_C} N]` over the systems `C` that both
/// operators carry. The result lives on `M`'s remaining systems followed
/// by `N`'s. With no shared systems this is the tensor product; with all
/// systems shared it is the scalar `Tr[M^T N]`.
pub fn link_product(m: &LabeledOperator, n: &LabeledOperator) -> Result<LabeledOperator> {
    let sm = m.systems()?;
    let sn = n.systems()?;
    let mut shared: Vec<&str> = Vec::new();
    for s in sm {
        if let Some(t) = sn.get(&s.label) {
            if t.dim != s.dim {
                return Err(Error::dims(format!(
                    "link over `{}`: dims {} and {}",
                    s.label, s.dim, t.dim
                )));
            }
            shared.push(&s.label);
        }
    }
    let m_rest = sm.without(&shared);
    let n_rest = sn.without(&shared);
    let result_systems = m_rest.concat(&n_rest)?;

    let m_order: Vec<&str> = m_rest
        .labels()
        .into_iter()
        .chain(shared.iter().copied())
        .collect();
    let n_order: Vec<&str> = shared.iter().copied().chain(n_rest.labels()).collect();
    let mp = m.permute_square(&m_order)?;
    let np = n.permute_square(&n_order)?;

    let dm = m_rest.total_dim();
    let dn = n_rest.total_dim();
    let dc: usize = shared.iter().map(|l| sm.dim_of(l).unwrap()).product();

    // M[(m,c'),(m'',c)] -> Mt[(m,m''),(c',c)]
    let mt = permute_axes(&mp.to_row_major(), &[dm, dc, dm, dc], &[0, 2, 1, 3]);
    // N[(c',n),(c,n'')] -> Nt[(c',c),(n,n'')]
    let nt = permute_axes(&np.to_row_major(), &[dc, dn, dc, dn], &[0, 2, 1, 3]);
    let mt = CMatrix::from_row_slice(dm * dm, dc * dc, &mt);
    let nt = CMatrix::from_row_slice(dc * dc, dn * dn, &nt);
    let rt = mt * nt;
    let rt_data: Vec<_> = (0..dm * dm)
        .flat_map(|r| (0..dn * dn).map(move |c| (r, c)))
        .map(|(r, c)| rt[(r, c)])
        .collect();
    // R[(m,m''),(n,n'')] -> R[(m,n),(m'',n'')]
    let data = permute_axes(&rt_data, &[dm, dm, dn, dn], &[0, 2, 1, 3]);
    let d = dm * dn;
    LabeledOperator::square(CMatrix::from_row_slice(d, d, &data), result_systems)
}

fn internal(prefix: &str, list: &SystemList) -> Result<SystemList> {
    SystemList::new(
        list.iter()
            .enumerate()
            .map(|(k, s)| System::new(format!("#{prefix}{k}"), s.dim))
            .collect(),
    )
}

/// Choi operator of `second . first` (apply `first`, then `second`).
///
/// The output of `first` is matched to the input of `second` by total
/// dimension. Result labels are `first`'s inputs and `second`'s outputs,
/// the latter primed where they collide with the former.
pub fn compose_channels(first: &ChoiRep, second: &ChoiRep) -> Result<ChoiRep> {
    let mid = first.output_dim();
    if mid != second.input_dim() {
        return Err(Error::dims(format!(
            "cannot compose: first outputs dimension {mid}, second expects {}",
            second.input_dim()
        )));
    }
    let ins = internal("in", first.inputs())?;
    let outs = internal("out", second.outputs())?;
    let mid_sys = SystemList::single("#mid", mid);
    let a = ins.concat(&mid_sys)?;
    let b = mid_sys.concat(&outs)?;
    let j1 = first.op().with_systems(a.clone(), a)?;
    let j2 = second.op().with_systems(b.clone(), b)?;
    let linked = link_product(&j1, &j2)?;

    let out_labels: Vec<String> = second
        .outputs()
        .iter()
        .map(|s| {
            let mut l = s.label.clone();
            while first.inputs().contains(&l) {
                l = crate::tensor::primed(&l);
            }
            l
        })
        .collect();
    let final_outs = second.outputs().relabeled(&out_labels)?;
    let all = first.inputs().concat(&final_outs)?;
    ChoiRep::new(
        linked.with_systems(all.clone(), all)?,
        first.inputs().clone(),
        final_outs,
    )
}
