//! Galois rings `GR(p^P, f) = (Z/p^P)[T]/(G)`, the unramified layer of the
//! local rings. `G` is the lift of the residue modulus whose roots are
//! Teichmüller representatives, so the Frobenius is exactly `T -> T^p`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{checked_pow, mul_mod};
use crate::error::{Error, Result};
use crate::fields::{FieldDesc, FieldElem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisRing {
    p: u64,
    /// Storage precision: arithmetic is modulo `p^digits`.
    digits: u32,
    modulus_int: u64,
    residue: Arc<FieldDesc>,
    /// Monic, length `f + 1`, coefficients mod `p^digits`.
    modulus: Vec<u64>,
}

/// Elements are coefficient vectors of length `f`.
pub type GrElem = Vec<u64>;

impl GaloisRing {
    pub fn new(residue: &Arc<FieldDesc>, digits: u32) -> Result<Self> {
        let p = residue.p();
        let modulus_int = checked_pow(p, digits)
            .filter(|&n| n < (1 << 62))
            .ok_or(Error::FieldTooLarge { p, m: digits })?;
        let naive = GaloisRing {
            p,
            digits,
            modulus_int,
            residue: residue.clone(),
            modulus: residue.modulus().to_vec(),
        };
        let modulus = naive.teichmuller_modulus()?;
        Ok(GaloisRing { modulus, ..naive })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn f(&self) -> usize {
        self.residue.degree() as usize
    }
    pub fn digits(&self) -> u32 {
        self.digits
    }
    pub fn residue(&self) -> &Arc<FieldDesc> {
        &self.residue
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// `prod_j (X - tau^{p^j})` with `tau` the Teichmüller lift of `T`,
    /// computed in the naive lift ring.
    fn teichmuller_modulus(&self) -> Result<Vec<u64>> {
        let f = self.f();
        if f == 1 {
            return Ok(vec![0, 1]);
        }
        let mut t = self.zero();
        t[1] = 1;
        let q = self.residue.order().ok_or(Error::FieldTooLarge { p: self.p, m: f as u32 })?;
        let mut tau = t;
        for _ in 1..self.digits {
            tau = self.pow(&tau, q);
        }
        // polynomial in X with coefficients in the naive ring
        let mut prod: Vec<GrElem> = vec![self.one()];
        let mut root = tau;
        for _ in 0..f {
            let mut next: Vec<GrElem> = vec![self.zero(); prod.len() + 1];
            for (i, c) in prod.iter().enumerate() {
                next[i + 1] = self.add(&next[i + 1], c);
                next[i] = self.sub(&next[i], &self.mul(c, &root));
            }
            prod = next;
            root = self.pow(&root, self.p);
        }
        prod.iter()
            .map(|c| {
                if c[1..].iter().any(|&x| x != 0) {
                    Err(Error::Inconsistent("Teichmüller modulus not over Z/p^P".into()))
                } else {
                    Ok(c[0])
                }
            })
            .collect()
    }

    pub fn zero(&self) -> GrElem {
        vec![0; self.f()]
    }

    pub fn one(&self) -> GrElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> GrElem {
        let mut e = self.zero();
        e[0] = n.rem_euclid(self.modulus_int as i64) as u64;
        e
    }

    /// Coefficients (lowest first) reduced mod `p^digits`.
    pub fn from_coeffs(&self, c: &[i64]) -> Result<GrElem> {
        if c.len() > self.f() {
            return Err(Error::DimensionMismatch);
        }
        let mut e = self.zero();
        for (slot, &x) in e.iter_mut().zip(c) {
            *slot = x.rem_euclid(self.modulus_int as i64) as u64;
        }
        Ok(e)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> GrElem {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.modulus_int).collect()
    }

    pub fn neg(&self, a: &[u64]) -> GrElem {
        a.iter().map(|&x| (self.modulus_int - x) % self.modulus_int).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> GrElem {
        a.iter().zip(b).map(|(x, y)| (x + self.modulus_int - y) % self.modulus_int).collect()
    }

    pub fn scale_int(&self, a: &[u64], c: u64) -> GrElem {
        a.iter().map(|&x| mul_mod(x, c % self.modulus_int, self.modulus_int)).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> GrElem {
        let f = self.f();
        let n = self.modulus_int;
        let mut prod = vec![0u64; 2 * f - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod(x, y, n)) % n;
            }
        }
        for k in (f..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..f {
                let t = mul_mod(c, self.modulus[i], n);
                prod[k - f + i] = (prod[k - f + i] + n - t) % n;
            }
        }
        prod.truncate(f);
        prod
    }

    pub fn pow(&self, a: &[u64], mut e: u64) -> GrElem {
        let mut acc = self.one();
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    /// p-adic valuation, `digits` for zero.
    pub fn vp(&self, a: &[u64]) -> u32 {
        a.iter()
            .filter(|&&x| x != 0)
            .map(|&x| {
                let mut v = 0;
                let mut y = x;
                while y % self.p == 0 {
                    y /= self.p;
                    v += 1;
                }
                v
            })
            .min()
            .unwrap_or(self.digits)
    }

    /// Exact division by `p^k` of an element divisible by it; the top `k`
    /// digits of the result are zero (unknown).
    pub fn div_p_pow(&self, a: &[u64], k: u32) -> GrElem {
        let d = checked_pow(self.p, k).unwrap();
        a.iter().map(|&x| x / d).collect()
    }

    /// Multiplication by `p^k`.
    pub fn mul_p_pow(&self, a: &[u64], k: u32) -> GrElem {
        if k >= self.digits {
            return self.zero();
        }
        self.scale_int(a, checked_pow(self.p, k).unwrap())
    }

    /// Reduction mod `p` into the residue field.
    pub fn reduce(&self, a: &[u64]) -> FieldElem {
        let c: Vec<u64> = a.iter().map(|&x| x % self.p).collect();
        FieldElem::from_coeffs(&self.residue, &c).expect("length f")
    }

    /// Coefficientwise lift of a residue element.
    pub fn naive_lift(&self, x: &FieldElem) -> GrElem {
        x.coeffs().to_vec()
    }

    /// The multiplicative lift `lim x^{q^n}`.
    pub fn teichmuller(&self, x: &FieldElem) -> GrElem {
        let mut t = self.naive_lift(x);
        let q = self.residue.order().expect("residue field enumerable");
        for _ in 1..self.digits {
            t = self.pow(&t, q);
        }
        t
    }

    /// Frobenius `T -> T^p`, iterated `e` times.
    pub fn frobenius(&self, a: &[u64], e: u64) -> GrElem {
        let f = self.f() as u64;
        let e = e % f;
        if e == 0 {
            return a.to_vec();
        }
        let mut t = self.zero();
        t[1 % self.f()] = 1;
        let image = self.pow(&t, checked_pow(self.p, e as u32).unwrap());
        let mut acc = self.zero();
        for &c in a.iter().rev() {
            acc = self.add(&self.mul(&acc, &image), &self.from_int(c as i64));
        }
        acc
    }

    /// Inverse of a unit by Newton iteration.
    pub fn inv(&self, a: &[u64]) -> Option<GrElem> {
        let r = self.reduce(a).inv()?;
        let mut x = self.naive_lift(&r);
        let two = self.from_int(2);
        let mut correct = 1;
        while correct < self.digits {
            x = self.mul(&x, &self.sub(&two, &self.mul(a, &x)));
            correct *= 2;
        }
        Some(x)
    }

    /// Teichmüller digits `d_k` with `a = sum p^k tau(d_k)`, `count` of them.
    pub fn teichmuller_digits(&self, a: &[u64], count: u32) -> Vec<FieldElem> {
        let mut rest = a.to_vec();
        let mut out = Vec::new();
        for _ in 0..count.min(self.digits) {
            let d = self.reduce(&rest);
            rest = self.sub(&rest, &self.teichmuller(&d));
            rest = self.div_p_pow(&rest, 1);
            out.push(d);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{elements, make_field};

    #[test]
    fn frobenius_is_exact_on_the_generator() {
        let f9 = make_field(3, 2).unwrap();
        let gr = GaloisRing::new(&f9, 4).unwrap();
        let mut t = gr.zero();
        t[1] = 1;
        assert_eq!(gr.frobenius(&t, 1), gr.pow(&t, 3));
        // T is a (q-1)-th root of unity
        assert_eq!(gr.pow(&t, 8), gr.one());
        assert_eq!(gr.frobenius(&gr.frobenius(&t, 1), 1), t);
    }

    #[test]
    fn teichmuller_is_multiplicative_and_digits_roundtrip() {
        let f4 = make_field(2, 2).unwrap();
        let gr = GaloisRing::new(&f4, 5).unwrap();
        for a in elements(&f4) {
            for b in elements(&f4) {
                assert_eq!(gr.teichmuller(&a.mul(&b)), gr.mul(&gr.teichmuller(&a), &gr.teichmuller(&b)));
            }
        }
        let x = gr.from_coeffs(&[13, 7]).unwrap();
        let digits = gr.teichmuller_digits(&x, 5);
        let mut back = gr.zero();
        for (k, d) in digits.iter().enumerate() {
            back = gr.add(&back, &gr.mul_p_pow(&gr.teichmuller(d), k as u32));
        }
        assert_eq!(back, x);
        let inv = gr.inv(&x).unwrap();
        assert_eq!(gr.mul(&x, &inv), gr.one());
    }
}
