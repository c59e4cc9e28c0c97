//! Dense univariate polynomials over a [`Ring`] handle, lowest degree first.
//! Division requires a unit leading coefficient; `gcd` assumes a field.

use alloc::vec;
use alloc::vec::Vec;

use crate::ring::Ring;

pub fn trim<R: Ring>(ring: &R, a: &mut Vec<R::Elem>) {
    while a.last().is_some_and(|c| ring.is_zero(c)) {
        a.pop();
    }
}

pub fn degree<R: Ring>(ring: &R, a: &[R::Elem]) -> Option<usize> {
    a.iter().rposition(|c| !ring.is_zero(c))
}

pub fn add<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    let n = a.len().max(b.len());
    let zero = ring.zero();
    let mut out: Vec<R::Elem> =
        (0..n).map(|i| ring.add(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero))).collect();
    trim(ring, &mut out);
    out
}

pub fn sub<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    let n = a.len().max(b.len());
    let zero = ring.zero();
    let mut out: Vec<R::Elem> =
        (0..n).map(|i| ring.sub(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero))).collect();
    trim(ring, &mut out);
    out
}

pub fn mul<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ring.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if ring.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = ring.add(&out[i + j], &ring.mul(x, y));
        }
    }
    trim(ring, &mut out);
    out
}

pub fn scale<R: Ring>(ring: &R, c: &R::Elem, a: &[R::Elem]) -> Vec<R::Elem> {
    let mut out: Vec<R::Elem> = a.iter().map(|x| ring.mul(c, x)).collect();
    trim(ring, &mut out);
    out
}

/// Quotient and remainder; `None` if `b` is zero or has a non-unit leading
/// coefficient.
pub fn divrem<R: Ring>(
    ring: &R,
    a: &[R::Elem],
    b: &[R::Elem],
) -> Option<(Vec<R::Elem>, Vec<R::Elem>)> {
    let db = degree(ring, b)?;
    let lead_inv = ring.inv(&b[db])?;
    let mut r = a.to_vec();
    trim(ring, &mut r);
    let mut q = vec![ring.zero(); r.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(ring, &r) {
        if dr < db {
            break;
        }
        let c = ring.mul(&r[dr], &lead_inv);
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate().take(db + 1) {
            r[shift + i] = ring.sub(&r[shift + i], &ring.mul(&c, bc));
        }
        // The leading term cancels exactly even when `is_zero` is only
        // approximate, so drop it explicitly.
        r.truncate(dr);
        trim(ring, &mut r);
        q[shift] = c;
    }
    trim(ring, &mut q);
    Some((q, r))
}

pub fn rem<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    divrem(ring, a, b).expect("division by a polynomial without unit leading coefficient").1
}

pub fn monic<R: Ring>(ring: &R, a: &[R::Elem]) -> Vec<R::Elem> {
    match degree(ring, a) {
        None => Vec::new(),
        Some(d) => {
            let inv = ring.inv(&a[d]).expect("leading coefficient not invertible");
            scale(ring, &inv, &a[..=d])
        }
    }
}

/// Monic greatest common divisor over a field.
pub fn gcd<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(ring, &mut x);
    trim(ring, &mut y);
    while !y.is_empty() {
        let r = rem(ring, &x, &y);
        x = y;
        y = r;
    }
    monic(ring, &x)
}

pub fn mulmod<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem], m: &[R::Elem]) -> Vec<R::Elem> {
    rem(ring, &mul(ring, a, b), m)
}

pub fn powmod<R: Ring>(ring: &R, a: &[R::Elem], mut e: u64, m: &[R::Elem]) -> Vec<R::Elem> {
    let mut acc = rem(ring, &[ring.one()], m);
    let mut base = rem(ring, a, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(ring, &acc, &base, m);
        }
        e >>= 1;
        if e > 0 {
            base = mulmod(ring, &base, &base, m);
        }
    }
    acc
}

/// Horner evaluation.
pub fn eval<R: Ring>(ring: &R, a: &[R::Elem], x: &R::Elem) -> R::Elem {
    a.iter().rev().fold(ring.zero(), |acc, c| ring.add(&ring.mul(&acc, x), c))
}

/// `a(b(X))`.
pub fn compose<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    let mut acc: Vec<R::Elem> = Vec::new();
    for c in a.iter().rev() {
        acc = add(ring, &mul(ring, &acc, b), &[c.clone()]);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Integers;

    #[test]
    fn integer_division_and_composition() {
        // (x^2 - 1) = (x + 1)(x - 1)
        let (q, r) = divrem(&Integers, &[-1, 0, 1], &[-1, 1]).unwrap();
        assert_eq!(q, vec![1, 1]);
        assert!(r.is_empty());
        // (x+1)^2 composed with 2x
        assert_eq!(compose(&Integers, &[1, 2, 1], &[0, 2]), vec![1, 4, 4]);
        assert_eq!(eval(&Integers, &[1, 2, 1], &3), 16);
    }
}
