mod common;

use common::{diff, partial_trace, M};
use num_complex::Complex64 as C;
use rand::RngCore;
use supermaps::channel::{
    choi_from_kraus, compose_channels, identity_channel, random_channel, unitary_channel, ChoiRep,
    KrausRep,
};
use supermaps::random::{rng, state, unitary};
use supermaps::superchannel::{
    apply_to_causal_map, apply_to_channel, f_theta_channel, identity_superchannel, memory_cost,
    n_operators, random_superchannel, realize, superchannel_from_parts, validate_superchannel,
    SuperDims,
};
use supermaps::{Error, SystemList};

const TOL: f64 = 1e-9;

fn sys(label: &str, d: usize) -> SystemList {
    SystemList::single(label, d)
}

fn random_choi(seed: u64, din: usize, dout: usize) -> ChoiRep {
    let mut r = rng(seed);
    let k = random_channel(
        &mut r,
        sys("P", din),
        sys("Q", dout),
        din.div_ceil(dout) + 1,
    )
    .unwrap();
    choi_from_kraus(&k).unwrap()
}

fn unitary_choi(u: M) -> ChoiRep {
    let d = u.nrows();
    choi_from_kraus(&unitary_channel(u, sys("x", d), sys("y", d)).unwrap()).unwrap()
}

/// Copies the computational basis of `A1` into `B1` and a `d`-dimensional
/// memory, which the post-processing forwards to `B2` while discarding `A2`.
fn basis_copy(d: usize) -> supermaps::superchannel::SuperchannelChoi {
    let one = C::new(1.0, 0.0);
    let mut v = M::zeros(d * d, d);
    for i in 0..d {
        v[(i * d + i, i)] = one;
    }
    let pre = KrausRep::from_matrices(vec![v], sys("x", d), sys("y", d * d)).unwrap();
    let post_ops = (0..d)
        .map(|a2| {
            let mut k = M::zeros(d, d * d);
            for e in 0..d {
                k[(e, e * d + a2)] = one;
            }
            k
        })
        .collect();
    let post = KrausRep::from_matrices(post_ops, sys("x", d * d), sys("y", d)).unwrap();
    superchannel_from_parts(
        &choi_from_kraus(&pre).unwrap(),
        &choi_from_kraus(&post).unwrap(),
        d,
        TOL,
    )
    .unwrap()
}

#[test]
fn f_theta_is_the_conjugated_marginal() {
    let mut r = rng(1);
    for _ in 0..20 {
        let dims = SuperDims::new(2, 2, 2, 1);
        let theta = random_superchannel(&mut r, dims, 2).unwrap();
        let f = f_theta_channel(&n_operators(&theta, TOL).unwrap(), TOL).unwrap();
        let d = theta.dims();
        let marginal = partial_trace(theta.matrix(), &[d.a1, d.a2, d.b1, d.b2], &[1, 3]);
        let expected = marginal.map(|z| z.conj()) / C::new(d.a2 as f64, 0.0);
        assert!(diff(f.choi.op().matrix(), &expected) < 1e-12);
    }
}

#[test]
fn f_theta_of_a_real_unitary_pre_processing() {
    let h = M::from_row_slice(
        2,
        2,
        &[1.0, 1.0, 1.0, -1.0].map(|x| C::new(x / 2f64.sqrt(), 0.0)),
    );
    let post = random_choi(3, 3, 2);
    let theta = superchannel_from_parts(&unitary_choi(h.clone()), &post, 1, TOL).unwrap();
    let f = f_theta_channel(&n_operators(&theta, TOL).unwrap(), TOL).unwrap();
    assert_eq!(f.rank, 1);
    assert!(diff(f.choi.op().matrix(), unitary_choi(h).op().matrix()) < 1e-12);
}

#[test]
fn basis_copy_needs_a_full_memory() {
    for d in 2..=3 {
        let theta = basis_copy(d);
        assert!(validate_superchannel(&theta, TOL).is_valid());
        assert_eq!(memory_cost(&theta, TOL, 1e-9).unwrap(), d);
        let real = realize(&theta, TOL).unwrap();
        assert_eq!(real.e1_dim, d);
        assert!(real.residual < 1e-10);
    }
}

#[test]
fn memoryless_superchannel_acts_by_composition() {
    let mut r = rng(2);
    for _ in 0..10 {
        let pre = unitary_choi(unitary(&mut r, 2));
        let post = random_choi(r.next_u64(), 3, 2);
        let theta = superchannel_from_parts(&pre, &post, 1, TOL).unwrap();
        assert_eq!(realize(&theta, TOL).unwrap().e1_dim, 1);
        let e = random_choi(5, 2, 3);
        let out = apply_to_channel(&theta, &e, TOL).unwrap();
        let direct = compose_channels(&compose_channels(&pre, &e).unwrap(), &post).unwrap();
        assert!(diff(out.op().matrix(), direct.op().matrix()) < 1e-10);
    }
}

#[test]
fn identity_superchannel_returns_its_input() {
    let theta = identity_superchannel(2, 3).unwrap();
    for seed in 0..5 {
        let e = random_choi(seed, 2, 3);
        let out = apply_to_channel(&theta, &e, TOL).unwrap();
        assert!(diff(out.op().matrix(), e.op().matrix()) < 1e-12);
    }
}

#[test]
fn causal_map_reference_passes_through() {
    let mut r = rng(4);
    let dims = SuperDims::new(2, 2, 2, 2);
    let theta = random_superchannel(&mut r, dims, 2).unwrap();
    let e = random_choi(9, 2, 2);
    let omega = state(&mut r, sys("R", 3), 2).unwrap();
    // kappa = omega_R (x) e, with outputs ordered [R, A2]
    let j = e
        .op()
        .kron(&omega)
        .unwrap()
        .permute_square(&["P", "R", "Q"])
        .unwrap();
    let ins = sys("P", 2);
    let outs = SystemList::from_pairs([("R", 3), ("Q", 2)]).unwrap();
    let kappa = ChoiRep::new(
        j.with_systems(ins.concat(&outs).unwrap(), ins.concat(&outs).unwrap())
            .unwrap(),
        ins,
        outs,
    )
    .unwrap();
    let out = apply_to_causal_map(&theta, &kappa, TOL).unwrap();
    let plain = apply_to_channel(&theta, &e, TOL).unwrap();
    let expected = plain
        .op()
        .kron(&omega)
        .unwrap()
        .permute_square(&["A1", "R", "B2"])
        .unwrap();
    assert_eq!(out.outputs().labels(), ["R", "B2"]);
    assert!(diff(out.op().matrix(), expected.matrix()) < 1e-12);
}

#[test]
fn realization_parts_rebuild_the_superchannel() {
    let mut r = rng(5);
    for _ in 0..10 {
        let theta = random_superchannel(&mut r, SuperDims::new(2, 2, 2, 2), 2).unwrap();
        let real = realize(&theta, 1e-8).unwrap();
        let rebuilt = superchannel_from_parts(
            &real.pre_channel().unwrap(),
            &real.post_channel().unwrap(),
            real.e1_dim,
            TOL,
        )
        .unwrap();
        assert!(diff(rebuilt.matrix(), theta.matrix()) < 1e-9);
    }
}

#[test]
fn realizing_an_invalid_operator_fails() {
    let theta = identity_superchannel(2, 2).unwrap();
    let doubled = supermaps::superchannel::SuperchannelChoi::from_matrix(
        theta.matrix() * C::new(2.0, 0.0),
        theta.dims(),
    )
    .unwrap();
    assert!(matches!(
        realize(&doubled, TOL),
        Err(Error::NotAValidSuperchannel(_))
    ));
}

#[test]
fn input_channel_must_fit() {
    let theta = identity_superchannel(2, 2).unwrap();
    let e = identity_channel("P", "Q", 3).unwrap();
    assert!(matches!(
        apply_to_channel(&theta, &e, TOL),
        Err(Error::DimensionMismatch(_))
    ));
}
