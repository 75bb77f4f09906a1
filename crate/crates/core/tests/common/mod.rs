//! Independent index-loop oracles. Everything here works on plain row-major
//! buffers and never calls the library's reindexing code.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64 as C;

pub type M = DMatrix<C>;

pub fn to_multi(mut i: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = i % dims[k];
        i /= dims[k];
    }
    out
}

pub fn from_multi(idx: &[usize], dims: &[usize]) -> usize {
    idx.iter().zip(dims).fold(0, |acc, (&i, &d)| acc * d + i)
}

/// Partial trace of a square operator on `dims` over the factors in `traced`.
pub fn partial_trace(m: &M, dims: &[usize], traced: &[usize]) -> M {
    let keep: Vec<usize> = (0..dims.len()).filter(|k| !traced.contains(k)).collect();
    let kd: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let td: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let n: usize = kd.iter().product();
    let t: usize = td.iter().product();
    let mut out = M::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let rm = to_multi(r, &kd);
            let cm = to_multi(c, &kd);
            let mut s = C::new(0.0, 0.0);
            for x in 0..t {
                let xm = to_multi(x, &td);
                let mut full_r = vec![0; dims.len()];
                let mut full_c = vec![0; dims.len()];
                for (j, &k) in keep.iter().enumerate() {
                    full_r[k] = rm[j];
                    full_c[k] = cm[j];
                }
                for (j, &k) in traced.iter().enumerate() {
                    full_r[k] = xm[j];
                    full_c[k] = xm[j];
                }
                s += m[(from_multi(&full_r, dims), from_multi(&full_c, dims))];
            }
            out[(r, c)] = s;
        }
    }
    out
}

/// Partial transpose over the factors in `which`.
pub fn partial_transpose(m: &M, dims: &[usize], which: &[usize]) -> M {
    let n = m.nrows();
    let mut out = M::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let mut rm = to_multi(r, dims);
            let mut cm = to_multi(c, dims);
            for &k in which {
                std::mem::swap(&mut rm[k], &mut cm[k]);
            }
            out[(from_multi(&rm, dims), from_multi(&cm, dims))] = m[(r, c)];
        }
    }
    out
}

/// Reorders factors: new factor `j` is old factor `perm[j]`.
pub fn permute(m: &M, dims: &[usize], perm: &[usize]) -> M {
    let nd: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let n = m.nrows();
    let mut out = M::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let rm = to_multi(r, dims);
            let cm = to_multi(c, dims);
            let nr: Vec<usize> = perm.iter().map(|&p| rm[p]).collect();
            let nc: Vec<usize> = perm.iter().map(|&p| cm[p]).collect();
            out[(from_multi(&nr, &nd), from_multi(&nc, &nd))] = m[(r, c)];
        }
    }
    out
}

/// `sum_i K_i rho K_i^dag` with explicit loops.
pub fn kraus_apply(ks: &[M], rho: &M) -> M {
    let (dout, din) = ks[0].shape();
    let mut out = M::zeros(dout, dout);
    for k in ks {
        for b in 0..dout {
            for bb in 0..dout {
                let mut s = C::new(0.0, 0.0);
                for a in 0..din {
                    for aa in 0..din {
                        s += k[(b, a)] * rho[(a, aa)] * k[(bb, aa)].conj();
                    }
                }
                out[(b, bb)] += s;
            }
        }
    }
    out
}

/// `rho -> Tr_A[(rho^T (x) 1) J]` for a Choi matrix on `A (x) B`.
pub fn choi_apply(j: &M, din: usize, dout: usize, rho: &M) -> M {
    let mut out = M::zeros(dout, dout);
    for b in 0..dout {
        for bb in 0..dout {
            let mut s = C::new(0.0, 0.0);
            for a in 0..din {
                for aa in 0..din {
                    s += rho[(a, aa)] * j[(a * dout + b, aa * dout + bb)];
                }
            }
            out[(b, bb)] = s;
        }
    }
    out
}

/// `J^{theta(e)}[n, n''] = sum_{c,c'} J^e[c', c] J^theta[(c', n), (c, n'')]`,
/// spelled out on the A1 A2 B1 B2 layout with `c = (b1, a2)`, `n = (a1, b2)`.
pub fn superchannel_apply(jt: &M, je: &M, d: [usize; 4]) -> M {
    let [a1, a2, b1, b2] = d;
    let dims = [a1, a2, b1, b2];
    let n = a1 * b2;
    let mut out = M::zeros(n, n);
    for x1 in 0..a1 {
        for y2 in 0..b2 {
            for xx1 in 0..a1 {
                for yy2 in 0..b2 {
                    let mut s = C::new(0.0, 0.0);
                    for y1 in 0..b1 {
                        for x2 in 0..a2 {
                            for yy1 in 0..b1 {
                                for xx2 in 0..a2 {
                                    let e = je[(y1 * a2 + x2, yy1 * a2 + xx2)];
                                    let r = from_multi(&[x1, x2, y1, y2], &dims);
                                    let c = from_multi(&[xx1, xx2, yy1, yy2], &dims);
                                    s += e * jt[(r, c)];
                                }
                            }
                        }
                    }
                    out[(x1 * b2 + y2, xx1 * b2 + yy2)] = s;
                }
            }
        }
    }
    out
}

pub fn kron(a: &M, b: &M) -> M {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    M::from_fn(ar * br, ac * bc, |r, c| {
        a[(r / br, c / bc)] * b[(r % br, c % bc)]
    })
}

pub fn diff(a: &M, b: &M) -> f64 {
    (a - b).norm()
}

pub fn rank(m: &M, rtol: f64) -> usize {
    let sv = m.clone().singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > rtol * max).count()
}

pub fn min_eig(m: &M) -> f64 {
    let h = (m + m.adjoint()) * C::new(0.5, 0.0);
    h.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}
