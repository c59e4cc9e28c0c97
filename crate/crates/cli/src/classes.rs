//! Conjugacy-class representatives of `GL_d(F_q)` as rational canonical
//! forms: one block-diagonal matrix of companion blocks per chain of
//! invariant factors `f_1 | f_2 | ... | f_k` with `Σ deg f_i = d`.

use std::sync::Arc;

use ltphi_core::fields::{elements, FieldDesc, FieldElem};
use ltphi_core::matrix::Mat;

type Poly = Vec<FieldElem>;

fn mul(a: &Poly, b: &Poly) -> Poly {
    let k = a[0].desc().clone();
    let mut out = vec![FieldElem::zero(&k); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

/// All monic polynomials of degree `t`, lowest coefficient first.
fn monics(k: &Arc<FieldDesc>, t: usize) -> Vec<Poly> {
    let mut out: Vec<Poly> = vec![vec![FieldElem::one(k)]];
    for _ in 0..t {
        let mut next = Vec::new();
        for p in &out {
            for c in elements(k) {
                let mut q = vec![c];
                q.extend(p.iter().cloned());
                next.push(q);
            }
        }
        out = next;
    }
    out
}

fn companion(f: &Poly) -> Mat<FieldElem> {
    let n = f.len() - 1;
    let k = f[0].desc().clone();
    Mat::from_fn(n, n, |i, j| {
        if j == n - 1 {
            f[i].neg()
        } else if i == j + 1 {
            FieldElem::one(&k)
        } else {
            FieldElem::zero(&k)
        }
    })
}

fn block_diagonal(blocks: &[Mat<FieldElem>], k: &Arc<FieldDesc>) -> Mat<FieldElem> {
    let d: usize = blocks.iter().map(|b| b.rows()).sum();
    let mut m = Mat::from_fn(d, d, |_, _| FieldElem::zero(k));
    let mut at = 0;
    for b in blocks {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                m.set(at + i, at + j, b.get(i, j).clone());
            }
        }
        at += b.rows();
    }
    m
}

fn chains(prev: &Poly, remaining: usize, acc: &mut Vec<Poly>, out: &mut Vec<Vec<Poly>>) {
    if remaining == 0 {
        out.push(acc.clone());
        return;
    }
    let k = prev[0].desc().clone();
    let base = prev.len() - 1;
    for t in 0..=remaining.saturating_sub(base) {
        let deg = base + t;
        if deg == 0 || (remaining - deg != 0 && remaining - deg < deg) {
            continue;
        }
        for g in monics(&k, t) {
            let next = mul(prev, &g);
            if next[0].is_zero() {
                continue;
            }
            acc.push(next.clone());
            chains(&next, remaining - deg, acc, out);
            acc.pop();
        }
    }
}

/// One representative per conjugacy class of `GL_d(k)`.
pub fn representatives(k: &Arc<FieldDesc>, d: usize) -> Vec<Mat<FieldElem>> {
    let mut all = Vec::new();
    chains(&vec![FieldElem::one(k)], d, &mut Vec::new(), &mut all);
    all.iter()
        .map(|chain| block_diagonal(&chain.iter().map(companion).collect::<Vec<_>>(), k))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ltphi_core::fields::{make_field, FiniteField};
    use ltphi_core::matrix;

    #[test]
    fn class_counts() {
        // |classes of GL_n(q)|: q-1, q^2-1, q^3-q, q^4-q
        for (q, p, m) in [(2u64, 2u64, 1u32), (3, 3, 1), (4, 2, 2)] {
            let k = make_field(p, m).unwrap();
            let expect = [q - 1, q * q - 1, q * q * q - q, q.pow(4) - q];
            for d in 1..=4usize {
                if q.pow(d as u32) > 256 {
                    continue;
                }
                assert_eq!(representatives(&k, d).len() as u64, expect[d - 1], "q={q} d={d}");
            }
        }
        assert_eq!(representatives(&make_field(2, 1).unwrap(), 6).len(), 60);
    }

    #[test]
    fn representatives_are_invertible() {
        let k = make_field(3, 1).unwrap();
        let ring = FiniteField(k.clone());
        for a in representatives(&k, 3) {
            assert!(matrix::inverse(&ring, &a).is_some());
        }
    }
}
