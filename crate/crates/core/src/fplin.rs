//! Dense linear algebra over the prime field `F_p`. Matrices are row-major
//! `Vec<Vec<u64>>` with entries already reduced mod `p`.

use alloc::vec;
use alloc::vec::Vec;

use crate::arith::mul_mod;
use crate::fields::inv_mod_p;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(mat: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let rows = mat.len();
    let cols = mat.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| mat[i][c] != 0) else {
            continue;
        };
        mat.swap(r, pr);
        let inv = inv_mod_p(mat[r][c], p);
        for x in mat[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = mat[r].clone();
        for (i, row) in mat.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = (*x + p - mul_mod(f, y, p)) % p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(mat: &[Vec<u64>], p: u64) -> usize {
    let mut m = mat.to_vec();
    rref(&mut m, p).len()
}

/// Basis of `{x : mat x = 0}`.
pub fn kernel(mat: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut m = mat.to_vec();
    let pivots = rref(&mut m, p);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - m[r][free]) % p;
        }
        basis.push(v);
    }
    basis
}

/// One solution of `mat x = rhs`, if any.
pub fn solve(mat: &[Vec<u64>], rhs: &[u64], p: u64) -> Option<Vec<u64>> {
    let cols = mat.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<u64>> = mat
        .iter()
        .zip(rhs)
        .map(|(row, &b)| {
            let mut r = row.clone();
            r.push(b % p);
            r
        })
        .collect();
    let pivots = rref(&mut aug, p);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![0u64; cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][cols];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_solve() {
        // rank-1 matrix over F_5
        let m = vec![vec![1, 2, 3], vec![2, 4, 1]];
        assert_eq!(rank(&m, 5), 1);
        let k = kernel(&m, 3, 5);
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot: u64 = m[0].iter().zip(v).map(|(a, b)| a * b).sum();
            assert_eq!(dot % 5, 0);
        }
        assert!(solve(&m, &[1, 2], 5).is_some());
        assert!(solve(&m, &[1, 1], 5).is_none());
    }
}
