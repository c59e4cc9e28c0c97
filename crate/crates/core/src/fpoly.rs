//! Dense polynomials over the prime field `F_p`, lowest degree first.

use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{mul_mod, pow_mod};

pub fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo `b` (`b` nonzero).
pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = pow_mod(b[db], p - 2, p);
    let mut r: Vec<u64> = a.to_vec();
    trim(&mut r);
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = mul_mod(r[dr], lead_inv, p);
        let shift = dr - db;
        for (i, &bc) in b.iter().enumerate().take(db + 1) {
            r[shift + i] = (r[shift + i] + p - mul_mod(c, bc, p)) % p;
        }
        trim(&mut r);
    }
    r
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    rem(&mul(a, b, p), m, p)
}

pub fn powmod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = rem(a, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &base, m, p);
        }
        e >>= 1;
        if e > 0 {
            base = mulmod(&base, &base, m, p);
        }
    }
    acc
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
pub fn inv_mod(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    let (mut r0, mut r1) = (m.to_vec(), rem(a, m, p));
    let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
    trim(&mut r0);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s = sub(&s0, &mul(&q, &s1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if degree(&r0) != Some(0) {
        return None;
    }
    let c = pow_mod(r0[0], p - 2, p);
    let mut out: Vec<u64> = s0.iter().map(|&x| mul_mod(x, c, p)).collect();
    trim(&mut out);
    Some(out)
}

pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = pow_mod(b[db], p - 2, p);
    let mut r: Vec<u64> = a.to_vec();
    trim(&mut r);
    let mut q = vec![0u64; r.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = mul_mod(r[dr], lead_inv, p);
        let shift = dr - db;
        q[shift] = c;
        for (i, &bc) in b.iter().enumerate().take(db + 1) {
            r[shift + i] = (r[shift + i] + p - mul_mod(c, bc, p)) % p;
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// Ben-Or test: `f` of degree `m` is irreducible iff it shares no factor
/// with `X^{p^i} - X` for `i <= m/2`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let m = match degree(f) {
        Some(0) | None => return false,
        Some(m) => m,
    };
    let x = vec![0u64, 1];
    let mut xp = x.clone();
    for _ in 0..m / 2 {
        xp = powmod(&xp, p, f, p);
        let g = gcd(f, &sub(&xp, &x, p), p);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility_small_cases() {
        // x^2 + 1 over F_3 is irreducible, over F_2 it is (x+1)^2
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(!is_irreducible(&[1, 0, 1], 2));
        assert!(is_irreducible(&[1, 1, 0, 0, 1], 2));
        assert!(!is_irreducible(&[0, 1, 1], 5));
    }

    #[test]
    fn rem_and_gcd() {
        // (x^2 - 1) mod (x - 1) = 0 over F_5
        assert!(rem(&[4, 0, 1], &[4, 1], 5).is_empty());
        assert_eq!(gcd(&[4, 0, 1], &[1, 1], 5).len(), 2);
    }
}
