use crate::channel::link_product;
use crate::error::{Error, Result};
use crate::tensor::{CMatrix, LabeledOperator, SystemList, C64};

use super::{SuperchannelChoi, A1, A2, B1, B2};

/// System order of the Gour operator.
pub const GOUR_ORDER: [&str; 4] = [B1, A2, A1, B2];

/// Gour operator as the fixed reordering `A1 A2 B1 B2 -> B1 A2 A1 B2` of
/// the Choi operator.
pub fn gour_from_choi(theta: &SuperchannelChoi) -> Result<LabeledOperator> {
    theta.op().permute_square(&GOUR_ORDER)
}

/// Gour operator from the action of `theta` on the basis maps
/// `e_ijkl`, whose Choi operators are `|i><j|_B1 (x) |k><l|_A2`:
/// `G = sum_ijkl |i><j| (x) |k><l| (x) J^{theta(e_ijkl)}`.
pub fn gour_by_basis(theta: &SuperchannelChoi) -> Result<LabeledOperator> {
    let d = theta.dims();
    let c_sys = SystemList::from_pairs([(B1, d.b1), (A2, d.a2)])?;
    let dc = d.b1 * d.a2;
    let dr = d.a1 * d.b2;
    let n = dc * dr;
    let mut g = CMatrix::zeros(n, n);
    for x in 0..dc {
        for y in 0..dc {
            let mut e = CMatrix::zeros(dc, dc);
            e[(x, y)] = C64::new(1.0, 0.0);
            let e = LabeledOperator::square(e, c_sys.clone())?;
            let image = link_product(theta.op(), &e)?.permute_square(&[A1, B2])?;
            for r in 0..dr {
                for s in 0..dr {
                    g[(x * dr + r, y * dr + s)] = image.get(r, s);
                }
            }
        }
    }
    let sys = SystemList::from_pairs([(B1, d.b1), (A2, d.a2), (A1, d.a1), (B2, d.b2)])?;
    LabeledOperator::square(g, sys)
}

/// Inverse of [`gour_from_choi`].
pub fn choi_from_gour(g: &LabeledOperator) -> Result<SuperchannelChoi> {
    let sys = g.systems()?;
    if sys.labels() != GOUR_ORDER {
        return Err(Error::dims(format!(
            "Gour operator must be on B1,A2,A1,B2, got {sys}"
        )));
    }
    SuperchannelChoi::new(g.permute_square(&[A1, A2, B1, B2])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::rng;
    use crate::superchannel::{identity_superchannel, random_superchannel, SuperDims};

    #[test]
    fn both_paths_agree() {
        let theta = random_superchannel(&mut rng(2), SuperDims::new(2, 3, 2, 2), 2).unwrap();
        let a = gour_from_choi(&theta).unwrap();
        let b = gour_by_basis(&theta).unwrap();
        assert!(a.distance(&b).unwrap() < 1e-12);
        assert_eq!(choi_from_gour(&a).unwrap(), theta);
    }

    #[test]
    fn identity_gour() {
        let theta = identity_superchannel(2, 2).unwrap();
        let g = gour_from_choi(&theta).unwrap();
        let expect = LabeledOperator::gamma(B1, A1, 2)
            .unwrap()
            .projector()
            .unwrap()
            .kron(
                &LabeledOperator::gamma(A2, B2, 2)
                    .unwrap()
                    .projector()
                    .unwrap(),
            )
            .unwrap()
            .permute_square(&GOUR_ORDER)
            .unwrap();
        assert_eq!(g, expect);
    }

    #[test]
    fn wrong_order_rejected() {
        let theta = identity_superchannel(2, 2).unwrap();
        assert!(choi_from_gour(theta.op()).is_err());
    }
}
