//! Quantum channels in Choi, Kraus, Stinespring and Liouville form, the
//! link product, and composition.

mod link;
mod reps;

pub use link::{compose_channels, link_product};
pub use reps::{
    apply_channel, choi_from_kraus, choi_from_liouville, generalized_choi, invert_generalized_choi,
    kraus_from_choi, kraus_from_stinespring, liouville_from_choi, liouville_from_kraus,
    stinespring_from_kraus, validate_channel, ChannelRep, ChannelValidityReport, ChoiRep,
    ChoiVariant, KrausRep, LiouvilleRep, StinespringRep,
};
pub(crate) use reps::{choi_of_map, vec_systems};

use crate::error::{Error, Result};
use crate::random::{isometry, Rng};
use crate::tensor::{CMatrix, SystemList};

/// Random channel with `rank` Kraus operators, cut from a Haar isometry
/// `C^{d_in} -> C^{rank} (x) C^{d_out}`. Needs `rank * d_out >= d_in`.
pub fn random_channel(
    rng: &mut Rng,
    inputs: SystemList,
    outputs: SystemList,
    rank: usize,
) -> Result<KrausRep> {
    let d_in = inputs.total_dim();
    let d_out = outputs.total_dim();
    if rank == 0 || rank * d_out < d_in {
        return Err(Error::OutOfRange(format!(
            "no channel with {rank} Kraus operators from dimension {d_in} to {d_out}"
        )));
    }
    let v = isometry(rng, rank * d_out, d_in)?;
    let ops: Vec<CMatrix> = (0..rank)
        .map(|i| v.rows(i * d_out, d_out).into_owned())
        .collect();
    KrausRep::from_matrices(ops, inputs, outputs)
}

/// Unitary channel `rho -> U rho U^dag`.
pub fn unitary_channel(u: CMatrix, inputs: SystemList, outputs: SystemList) -> Result<KrausRep> {
    KrausRep::from_matrices(vec![u], inputs, outputs)
}

/// Identity channel between two `d`-dimensional systems.
pub fn identity_channel(input: &str, output: &str, d: usize) -> Result<ChoiRep> {
    let g = crate::tensor::LabeledOperator::gamma(input, output, d)?.projector()?;
    ChoiRep::new(
        g,
        SystemList::single(input, d),
        SystemList::single(output, d),
    )
}
