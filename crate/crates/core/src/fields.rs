//! Finite fields `F_{p^m}` arranged in a compatible tower.
//!
//! Every field is `F_p[T]/(C_m)` where `C_m` is the minimal polynomial of a
//! primitive element whose norm-type powers land on the chosen generators of
//! all proper subfields (the Conway compatibility condition). The canonical
//! embedding `F_{p^d} -> F_{p^m}` then sends `T` to `T^((p^m-1)/(p^d-1))`,
//! and composites of canonical embeddings are canonical.

#[cfg(feature = "std")]
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{checked_pow, is_prime, mul_mod, pow_mod, prime_factors};
use crate::error::{Error, Result};
use crate::fpoly;
use crate::upoly;
use crate::ring::Ring;

/// Largest field order the tower will construct.
pub const MAX_ORDER: u64 = 1 << 62;

#[derive(Clone, PartialEq, Eq)]
pub struct FieldDesc {
    p: u64,
    m: u32,
    /// Monic, lowest degree first, length `m + 1`.
    modulus: Vec<u64>,
    /// `None` when `p^m` exceeds [`MAX_ORDER`].
    order: Option<u64>,
    /// Splitting fields too large for the compatible search use an
    /// arbitrary irreducible modulus; embeddings into them go by root finding.
    plain: bool,
}

impl fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.plain { "*" } else { "" };
        write!(f, "F({}^{}){tag}", self.p, self.m)
    }
}

impl FieldDesc {
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn degree(&self) -> u32 {
        self.m
    }
    /// Number of elements, if it fits a machine word.
    pub fn order(&self) -> Option<u64> {
        self.order
    }
    pub fn is_plain(&self) -> bool {
        self.plain
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
    pub fn same_field(&self, other: &FieldDesc) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

type CacheKey = (u64, u32, bool);

#[cfg(feature = "std")]
fn cache() -> &'static std::sync::Mutex<BTreeMap<CacheKey, Arc<FieldDesc>>> {
    static CACHE: std::sync::OnceLock<std::sync::Mutex<BTreeMap<CacheKey, Arc<FieldDesc>>>> =
        std::sync::OnceLock::new();
    CACHE.get_or_init(|| std::sync::Mutex::new(BTreeMap::new()))
}

fn cached(key: CacheKey, build: impl FnOnce() -> Result<FieldDesc>) -> Result<Arc<FieldDesc>> {
    #[cfg(feature = "std")]
    if let Some(d) = cache().lock().unwrap().get(&key) {
        return Ok(d.clone());
    }
    let _ = key;
    let desc = Arc::new(build()?);
    #[cfg(feature = "std")]
    cache().lock().unwrap().insert(key, desc.clone());
    Ok(desc)
}

/// Largest proper subfield size for which the compatible search is run.
const MAX_SUBFIELD_SEARCH: u64 = 1 << 13;

fn check_params(p: u64, m: u32) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::ZeroDegree);
    }
    Ok(())
}

/// Whether [`make_field`] can build `F_{p^m}` inside the compatible tower.
pub fn tower_feasible(p: u64, m: u32) -> bool {
    let largest_divisor = (1..m).rev().find(|d| m % d == 0).unwrap_or(1);
    checked_pow(p, m).is_some_and(|o| o <= MAX_ORDER)
        && checked_pow(p, largest_divisor).is_some_and(|o| o <= MAX_SUBFIELD_SEARCH)
}

/// The field with `p^m` elements inside the compatible tower.
/// Deterministic: equal arguments give equal descriptors (memoized when
/// `std` is enabled, recomputed otherwise).
pub fn make_field(p: u64, m: u32) -> Result<Arc<FieldDesc>> {
    check_params(p, m)?;
    if !tower_feasible(p, m) {
        return Err(Error::FieldTooLarge { p, m });
    }
    cached((p, m, false), || {
        let modulus = compatible_modulus(p, m)?;
        Ok(FieldDesc { p, m, modulus, order: checked_pow(p, m), plain: false })
    })
}

/// A field of degree `m` to hold solutions: the tower field when feasible,
/// otherwise `F_p[T]/(g)` for the least irreducible `g` of degree `m`.
pub fn splitting_field(p: u64, m: u32) -> Result<Arc<FieldDesc>> {
    check_params(p, m)?;
    if tower_feasible(p, m) {
        return make_field(p, m);
    }
    if m > 4096 {
        return Err(Error::FieldTooLarge { p, m });
    }
    cached((p, m, true), || {
        let modulus = least_irreducible(p, m);
        Ok(FieldDesc {
            p,
            m,
            modulus,
            order: checked_pow(p, m).filter(|&o| o <= MAX_ORDER),
            plain: true,
        })
    })
}

/// Least monic irreducible of degree `m`, ordering candidates by their
/// low-order coefficients as base-`p` digits.
fn least_irreducible(p: u64, m: u32) -> Vec<u64> {
    let mm = m as usize;
    let mut idx = 0u64;
    loop {
        let mut f = vec![0u64; mm + 1];
        let mut k = idx;
        for slot in f.iter_mut().take(mm) {
            *slot = k % p;
            k /= p;
            if k == 0 {
                break;
            }
        }
        f[mm] = 1;
        if fpoly::is_irreducible(&f, p) {
            return f;
        }
        idx += 1;
    }
}

fn digits(mut idx: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0u64; len];
    for slot in out.iter_mut() {
        *slot = idx % p;
        idx /= p;
    }
    out
}

fn eval_in(poly: &[u64], at: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let mut acc: Vec<u64> = Vec::new();
    for &c in poly.iter().rev() {
        acc = fpoly::mulmod(&acc, at, modulus, p);
        if c != 0 {
            if acc.is_empty() {
                acc.push(0);
            }
            acc[0] = (acc[0] + c) % p;
            fpoly::trim(&mut acc);
        }
    }
    acc
}

fn compatible_modulus(p: u64, m: u32) -> Result<Vec<u64>> {
    if m == 1 {
        return Ok(vec![0, 1]);
    }
    let mm = m as usize;
    let order = checked_pow(p, m).unwrap();
    // Any irreducible presentation serves as the ambient field for the search.
    let ambient = least_irreducible(p, m);
    let n = order - 1;
    let primes = prime_factors(n);
    let mut subfields = Vec::new();
    for d in 2..m {
        if m % d == 0 {
            let sub = make_field(p, d)?;
            subfields.push((sub.modulus.clone(), n / (checked_pow(p, d).unwrap() - 1)));
        }
    }
    let one = vec![1u64];
    // the norm down to F_p is pinned to the least primitive root mod p
    let root = least_primitive_root(p);
    let prime_norm = vec![root];
    for idx in p..order {
        let h = {
            let mut h = digits(idx, p, mm);
            fpoly::trim(&mut h);
            h
        };
        let compatible = subfields.iter().all(|(cd, k)| {
            let g = fpoly::powmod(&h, *k, &ambient, p);
            eval_in(cd, &g, &ambient, p).is_empty()
        });
        if !compatible || (p > 2 && fpoly::powmod(&h, n / (p - 1), &ambient, p) != prime_norm) {
            continue;
        }
        if primes.iter().any(|&l| fpoly::powmod(&h, n / l, &ambient, p) == one) {
            continue;
        }
        return minimal_polynomial(&h, &ambient, p, mm);
    }
    Err(Error::Inconsistent("no compatible primitive element".into()))
}

fn least_primitive_root(p: u64) -> u64 {
    let primes = prime_factors(p - 1);
    (1..p).find(|&g| primes.iter().all(|&l| pow_mod(g, (p - 1) / l, p) != 1)).unwrap_or(1)
}

/// `prod_{i<m} (X - h^{p^i})`, computed over the ambient field.
fn minimal_polynomial(h: &[u64], ambient: &[u64], p: u64, m: usize) -> Result<Vec<u64>> {
    let mut prod: Vec<Vec<u64>> = vec![vec![1]];
    let mut root = h.to_vec();
    for _ in 0..m {
        let mut next: Vec<Vec<u64>> = vec![Vec::new(); prod.len() + 1];
        for (i, c) in prod.iter().enumerate() {
            next[i + 1] = fpoly::sub(&next[i + 1], &fpoly::sub(&[], c, p), p);
            let rc = fpoly::mulmod(c, &root, ambient, p);
            next[i] = fpoly::sub(&next[i], &rc, p);
        }
        prod = next;
        root = fpoly::powmod(&root, p, ambient, p);
    }
    prod.iter()
        .map(|c| match fpoly::degree(c) {
            None => Ok(0),
            Some(0) => Ok(c[0]),
            _ => Err(Error::Inconsistent("minimal polynomial not over F_p".into())),
        })
        .collect()
}

/// An element of `F_{p^m}`: coefficients of a polynomial of degree `< m`
/// in the generator `T`.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElem {
    desc: Arc<FieldDesc>,
    coeffs: Vec<u64>,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ff({},{}):{}", self.desc.p, self.desc.m, self.digits_text())
    }
}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElem {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        (self.desc.p, self.desc.m)
            .cmp(&(other.desc.p, other.desc.m))
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl FieldElem {
    pub fn zero(desc: &Arc<FieldDesc>) -> Self {
        FieldElem { desc: desc.clone(), coeffs: vec![0; desc.m as usize] }
    }

    pub fn one(desc: &Arc<FieldDesc>) -> Self {
        Self::from_int(desc, 1)
    }

    pub fn from_int(desc: &Arc<FieldDesc>, n: i64) -> Self {
        let mut e = Self::zero(desc);
        e.coeffs[0] = n.rem_euclid(desc.p as i64) as u64;
        e
    }

    /// The generator `T` (zero in the prime field, whose modulus is `T`).
    pub fn generator(desc: &Arc<FieldDesc>) -> Self {
        let mut e = Self::zero(desc);
        if desc.m > 1 {
            e.coeffs[1] = 1;
        }
        e
    }

    /// Coefficients are reduced mod `p`; excess length is rejected.
    pub fn from_coeffs(desc: &Arc<FieldDesc>, coeffs: &[u64]) -> Result<Self> {
        if coeffs.len() > desc.m as usize {
            return Err(Error::Parse(alloc::format!(
                "{} coefficients for a degree-{} field",
                coeffs.len(),
                desc.m
            )));
        }
        let mut e = Self::zero(desc);
        for (slot, &c) in e.coeffs.iter_mut().zip(coeffs) {
            *slot = c % desc.p;
        }
        Ok(e)
    }

    /// Element whose base-`p` digits (lowest first) are the coefficients.
    /// Digits beyond the degree are ignored.
    pub fn from_index(desc: &Arc<FieldDesc>, idx: u64) -> Self {
        FieldElem { desc: desc.clone(), coeffs: digits(idx, desc.p, desc.m as usize) }
    }

    /// Inverse of [`FieldElem::from_index`]; wraps for fields whose order
    /// exceeds a machine word.
    pub fn index(&self) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc.wrapping_mul(self.desc.p).wrapping_add(c))
    }

    pub fn desc(&self) -> &Arc<FieldDesc> {
        &self.desc
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Digits lowest first, trailing zeros dropped: `[2,1]`, `[1]`, `[0]`.
    pub fn digits_text(&self) -> String {
        let len = self.coeffs.iter().rposition(|&c| c != 0).map_or(1, |i| i + 1);
        let parts: Vec<String> = self.coeffs[..len].iter().map(|c| alloc::format!("{c}")).collect();
        alloc::format!("[{}]", parts.join(","))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Constant term, meaningful when the element lies in the prime field.
    pub fn prime_part(&self) -> Option<u64> {
        self.coeffs[1..].iter().all(|&c| c == 0).then_some(self.coeffs[0])
    }

    fn check(&self, other: &Self) {
        assert!(self.desc.same_field(&other.desc), "field mismatch: {:?} vs {:?}", self.desc, other.desc);
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let p = self.desc.p;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a + b) % p).collect();
        FieldElem { desc: self.desc.clone(), coeffs }
    }

    pub fn neg(&self) -> Self {
        let p = self.desc.p;
        let coeffs = self.coeffs.iter().map(|&a| (p - a) % p).collect();
        FieldElem { desc: self.desc.clone(), coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let p = self.desc.p;
        let m = self.desc.m as usize;
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        // Reduce by the monic modulus from the top down.
        for k in (m..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..m {
                let t = mul_mod(c, self.desc.modulus[i], p);
                prod[k - m + i] = (prod[k - m + i] + p - t) % p;
            }
        }
        prod.truncate(m);
        FieldElem { desc: self.desc.clone(), coeffs: prod }
    }

    pub fn scale(&self, c: u64) -> Self {
        let p = self.desc.p;
        let coeffs = self.coeffs.iter().map(|&a| mul_mod(a, c % p, p)).collect();
        FieldElem { desc: self.desc.clone(), coeffs }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(&self.desc);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let inv = fpoly::inv_mod(&self.coeffs, &self.desc.modulus, self.desc.p)?;
        let mut coeffs = inv;
        coeffs.resize(self.desc.m as usize, 0);
        Some(FieldElem { desc: self.desc.clone(), coeffs })
    }

    /// `x^(p^e)`; the Frobenius has order `m` on `F_{p^m}`.
    pub fn frobenius(&self, e: u64) -> Self {
        let mut out = self.clone();
        for _ in 0..(e % self.desc.m as u64) {
            out = out.pow(self.desc.p);
        }
        out
    }

    /// Canonical embedding into a field whose degree is a multiple.
    pub fn embed(&self, target: &Arc<FieldDesc>) -> Result<Self> {
        Embedding::new(&self.desc, target)?.apply(self)
    }
}

/// Iterates every element of the field in index order. Panics for fields
/// whose order exceeds a machine word.
pub fn elements(desc: &Arc<FieldDesc>) -> impl Iterator<Item = FieldElem> + '_ {
    let order = desc.order.expect("field too large to enumerate");
    (0..order).map(move |i| FieldElem::from_index(desc, i))
}

/// The canonical map `F_{p^d} -> F_{p^m}` for `d | m`, with the image of
/// the generator cached.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Arc<FieldDesc>,
    target: Arc<FieldDesc>,
    gen_image: FieldElem,
}

impl Embedding {
    pub fn new(source: &Arc<FieldDesc>, target: &Arc<FieldDesc>) -> Result<Self> {
        if source.p != target.p || target.m % source.m != 0 {
            return Err(Error::RingMismatch);
        }
        let gen_image = if source.m == 1 {
            FieldElem::zero(target)
        } else if !source.plain && !target.plain {
            let k = (target.order.unwrap() - 1) / (source.order.unwrap() - 1);
            FieldElem::generator(target).pow(k)
        } else {
            root_image(source, target)?
        };
        Ok(Embedding { source: source.clone(), target: target.clone(), gen_image })
    }

    pub fn target(&self) -> &Arc<FieldDesc> {
        &self.target
    }

    pub fn source(&self) -> &Arc<FieldDesc> {
        &self.source
    }

    pub fn apply(&self, x: &FieldElem) -> Result<FieldElem> {
        if !x.desc.same_field(&self.source) {
            return Err(Error::RingMismatch);
        }
        let mut acc = FieldElem::zero(&self.target);
        for &c in x.coeffs.iter().rev() {
            acc = acc.mul(&self.gen_image).add(&FieldElem::from_int(&self.target, c as i64));
        }
        Ok(acc)
    }

    /// Preimage of `y`, or `None` if `y` is outside the image.
    pub fn preimage(&self, y: &FieldElem) -> Option<FieldElem> {
        let d = self.source.m as usize;
        let m = self.target.m as usize;
        let p = self.target.p;
        // Columns: images of T^i; solve the F_p-linear system.
        let mut cols = Vec::with_capacity(d);
        let mut pw = FieldElem::one(&self.target);
        for _ in 0..d {
            cols.push(pw.coeffs.clone());
            pw = pw.mul(&self.gen_image);
        }
        let mat: Vec<Vec<u64>> = (0..m).map(|r| (0..d).map(|c| cols[c][r]).collect()).collect();
        let sol = crate::fplin::solve(&mat, &y.coeffs, p)?;
        FieldElem::from_coeffs(&self.source, &sol).ok()
    }
}

type RootKey = (u64, Vec<u64>, Vec<u64>);

#[cfg(feature = "std")]
fn root_cache() -> &'static std::sync::Mutex<BTreeMap<RootKey, FieldElem>> {
    static CACHE: std::sync::OnceLock<std::sync::Mutex<BTreeMap<RootKey, FieldElem>>> = std::sync::OnceLock::new();
    CACHE.get_or_init(|| std::sync::Mutex::new(BTreeMap::new()))
}

/// Image of the generator of `source` in a plain `target`, memoized with `std`.
fn root_image(source: &FieldDesc, target: &Arc<FieldDesc>) -> Result<FieldElem> {
    let key: RootKey = (source.p, source.modulus.clone(), target.modulus.clone());
    #[cfg(feature = "std")]
    if let Some(r) = root_cache().lock().unwrap().get(&key) {
        return Ok(r.clone());
    }
    let root = least_root(&source.modulus, target)
        .ok_or_else(|| Error::Inconsistent("modulus has no root in extension".into()))?;
    #[cfg(feature = "std")]
    root_cache().lock().unwrap().insert(key, root.clone());
    let _ = key;
    Ok(root)
}

/// Least root (in element order) of a polynomial over `F_p` that splits
/// completely in `target`, found by equal-degree splitting.
fn least_root(poly: &[u64], target: &Arc<FieldDesc>) -> Option<FieldElem> {
    let ring = FiniteField(target.clone());
    let g: Vec<FieldElem> = poly.iter().map(|&c| FieldElem::from_int(target, c as i64)).collect();
    let mut roots = Vec::new();
    let mut rng = crate::arith::SplitMix64::new(0x5eed);
    split_roots(&ring, &upoly::monic(&ring, &g), &mut rng, &mut roots, 0)?;
    roots.into_iter().min()
}

fn split_roots(
    ring: &FiniteField,
    g: &[FieldElem],
    rng: &mut crate::arith::SplitMix64,
    out: &mut Vec<FieldElem>,
    depth: u32,
) -> Option<()> {
    let desc = ring.desc();
    match upoly::degree(ring, g)? {
        0 => return Some(()),
        1 => {
            out.push(g[0].neg());
            return Some(());
        }
        _ => {}
    }
    if depth > 200 {
        return None;
    }
    let p = desc.p;
    let coeffs: Vec<u64> = (0..desc.m).map(|_| rng.below(p)).collect();
    let a = FieldElem::from_coeffs(desc, &coeffs).ok()?;
    let probe = if p == 2 {
        // absolute trace of a*X
        let mut term = upoly::rem(ring, &[FieldElem::zero(desc), a], g);
        let mut acc = term.clone();
        for _ in 1..desc.m {
            term = upoly::mulmod(ring, &term, &term, g);
            acc = upoly::add(ring, &acc, &term);
        }
        acc
    } else {
        // (X + a)^((p^m - 1)/2)
        let mut b = upoly::rem(ring, &[a, FieldElem::one(desc)], g);
        let mut prod = upoly::rem(ring, &[FieldElem::one(desc)], g);
        for _ in 0..desc.m {
            prod = upoly::mulmod(ring, &prod, &b, g);
            b = upoly::powmod(ring, &b, p, g);
        }
        let h = upoly::powmod(ring, &prod, (p - 1) / 2, g);
        upoly::sub(ring, &h, &[FieldElem::one(desc)])
    };
    let d = upoly::gcd(ring, g, &probe);
    let dd = upoly::degree(ring, &d).unwrap_or(0);
    if dd == 0 || dd == upoly::degree(ring, g)? {
        return split_roots(ring, g, rng, out, depth + 1);
    }
    let (q, _) = upoly::divrem(ring, g, &d)?;
    split_roots(ring, &d, rng, out, depth + 1)?;
    split_roots(ring, &q, rng, out, depth + 1)
}

/// Ring handle for `F_{p^m}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField(pub Arc<FieldDesc>);

impl FiniteField {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        Ok(FiniteField(make_field(p, m)?))
    }
    pub fn desc(&self) -> &Arc<FieldDesc> {
        &self.0
    }
}

impl Ring for FiniteField {
    type Elem = FieldElem;

    fn zero(&self) -> FieldElem {
        FieldElem::zero(&self.0)
    }
    fn one(&self) -> FieldElem {
        FieldElem::one(&self.0)
    }
    fn from_i64(&self, n: i64) -> FieldElem {
        FieldElem::from_int(&self.0, n)
    }
    fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        a.add(b)
    }
    fn neg(&self, a: &FieldElem) -> FieldElem {
        a.neg()
    }
    fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        a.sub(b)
    }
    fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        a.mul(b)
    }
    fn is_zero(&self, a: &FieldElem) -> bool {
        a.is_zero()
    }
    fn is_unit(&self, a: &FieldElem) -> bool {
        !a.is_zero()
    }
    fn inv(&self, a: &FieldElem) -> Option<FieldElem> {
        a.inv()
    }
    fn text(&self, a: &FieldElem) -> String {
        a.digits_text()
    }
    fn pow(&self, a: &FieldElem, n: u64) -> FieldElem {
        a.pow(n)
    }
}

/// Prime-field inverse, used by the linear-algebra helpers.
pub(crate) fn inv_mod_p(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_modulus_is_t() {
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(f2.modulus(), &[0, 1]);
        assert_eq!(elements(&f2).count(), 2);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(make_field(4, 2).unwrap_err(), Error::NotPrime(4));
        assert_eq!(make_field(3, 0).unwrap_err(), Error::ZeroDegree);
        assert!(matches!(make_field(2, 70), Err(Error::FieldTooLarge { .. })));
    }

    #[test]
    fn deterministic_descriptors() {
        let a = compatible_modulus(3, 4).unwrap();
        let b = compatible_modulus(3, 4).unwrap();
        assert_eq!(a, b);
        assert!(fpoly::is_irreducible(&a, 3));
    }

    #[test]
    fn f9_has_nine_elements_and_is_a_field() {
        let f9 = make_field(3, 2).unwrap();
        let all: Vec<_> = elements(&f9).collect();
        assert_eq!(all.len(), 9);
        for x in &all {
            if !x.is_zero() {
                assert!(x.mul(&x.inv().unwrap()).is_one());
            }
        }
    }

    #[test]
    fn frobenius_fixes_prime_field_and_has_order_m() {
        let f9 = make_field(3, 2).unwrap();
        for x in elements(&f9) {
            assert_eq!(x.frobenius(2), x);
        }
        let two = FieldElem::from_int(&f9, 2);
        assert_eq!(two.frobenius(1), two);
    }

    #[test]
    fn sqrt_two_over_f3() {
        // g^2 = 2 forces g^3 = 2g
        let f9 = make_field(3, 2).unwrap();
        let two = FieldElem::from_int(&f9, 2);
        let g = elements(&f9).find(|g| g.mul(g) == two).unwrap();
        assert_eq!(g.frobenius(1), g.scale(2));
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let f4 = make_field(2, 2).unwrap();
        let f16 = make_field(2, 4).unwrap();
        let e = Embedding::new(&f4, &f16).unwrap();
        for a in elements(&f4) {
            for b in elements(&f4) {
                assert_eq!(e.apply(&a.mul(&b)).unwrap(), e.apply(&a).unwrap().mul(&e.apply(&b).unwrap()));
                assert_eq!(e.apply(&a.add(&b)).unwrap(), e.apply(&a).unwrap().add(&e.apply(&b).unwrap()));
            }
            assert_eq!(e.preimage(&e.apply(&a).unwrap()).unwrap(), a);
        }
        let outside = elements(&f16).filter(|y| e.preimage(y).is_none()).count();
        assert_eq!(outside, 12);
    }

    #[test]
    fn plain_splitting_field_embedding() {
        assert!(!tower_feasible(3, 40));
        let f9 = make_field(3, 2).unwrap();
        let big = splitting_field(3, 40).unwrap();
        assert!(big.is_plain() && fpoly::is_irreducible(big.modulus(), 3));
        let e = Embedding::new(&f9, &big).unwrap();
        let all: Vec<_> = elements(&f9).collect();
        for a in &all {
            for b in &all {
                assert_eq!(e.apply(&a.mul(b)).unwrap(), e.apply(a).unwrap().mul(&e.apply(b).unwrap()));
            }
        }
        let g = FieldElem::generator(&big);
        assert!(g.mul(&g.inv().unwrap()).is_one());
        assert_eq!(g.frobenius(40), g);
    }

    #[test]
    fn larger_tower_fields_build() {
        for (p, m) in [(2, 8), (2, 12), (3, 6), (5, 4), (5, 6), (7, 6)] {
            let f = make_field(p, m).unwrap();
            assert!(fpoly::is_irreducible(f.modulus(), p));
        }
    }

    #[test]
    fn degree_six_generator_has_compatible_norms() {
        // both proper subfields must agree on the norm down to F_5
        let f = make_field(5, 6).unwrap();
        let g = FieldElem::generator(&f);
        for d in [1, 2, 3] {
            let sub = make_field(5, d).unwrap();
            let k = (5u64.pow(6) - 1) / (5u64.pow(d) - 1);
            let want = if d == 1 { FieldElem::from_int(&sub, 2) } else { FieldElem::generator(&sub) };
            assert_eq!(g.pow(k), want.embed(&f).unwrap());
        }
    }
}
