//! Local integer rings `O = GR[ϖ]/(E)` at finite precision: an unramified
//! Galois-ring layer, optionally followed by one Eisenstein layer.
//!
//! Every [`LocalInt`] carries its own absolute precision in units of the
//! uniformizer; equalities hold "at precision" and results never claim more
//! than their inputs support.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::checked_pow;
use crate::error::{Error, Result};
use crate::fields::{Embedding, FieldDesc, FieldElem};
use crate::galois::{GaloisRing, GrElem};
use crate::matrix::{self, Mat};
use crate::ring::Ring;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalRingDesc {
    gr: GaloisRing,
    /// Ramification index; 1 means the uniformizer is `p`.
    e: usize,
    /// `c_0 .. c_{e-1}` of `E = X^e + sum c_j X^j`; empty when `e == 1`.
    eis: Vec<GrElem>,
    /// Working precision `M` in uniformizer units.
    prec: i64,
}

impl LocalRingDesc {
    /// `W(k)` modulo `p^m`.
    pub fn unramified(residue: &Arc<FieldDesc>, m: u32) -> Result<Arc<Self>> {
        let gr = GaloisRing::new(residue, m + 1)?;
        Ok(Arc::new(LocalRingDesc { gr, e: 1, eis: Vec::new(), prec: m as i64 }))
    }

    /// `W(k)[ϖ]/(E)` modulo `ϖ^m`, with `E = X^e + c_{e-1} X^{e-1} + ... + c_0`
    /// given by the coefficient lists (over `T`) of `c_0, ..., c_{e-1}`.
    pub fn eisenstein(residue: &Arc<FieldDesc>, coeffs: &[Vec<i64>], m: u32) -> Result<Arc<Self>> {
        let e = coeffs.len();
        if e == 0 {
            return Err(Error::NotEisenstein);
        }
        if e == 1 {
            // X + c_0 with v(c_0) = 1 only re-presents the unramified ring
            let gr = GaloisRing::new(residue, m + 1)?;
            let c0 = gr.from_coeffs(&coeffs[0])?;
            if gr.vp(&c0) != 1 {
                return Err(Error::NotEisenstein);
            }
            return Self::unramified(residue, m);
        }
        let digits = (m as usize).div_ceil(e) as u32 + 1;
        let gr = GaloisRing::new(residue, digits)?;
        let eis = coeffs.iter().map(|c| gr.from_coeffs(c)).collect::<Result<Vec<_>>>()?;
        if eis.iter().any(|c| gr.vp(c) < 1) || gr.vp(&eis[0]) != 1 {
            return Err(Error::NotEisenstein);
        }
        Ok(Arc::new(LocalRingDesc { gr, e, eis, prec: m as i64 }))
    }

    /// The same Eisenstein polynomial over a larger residue field.
    pub fn with_residue(&self, residue: &Arc<FieldDesc>) -> Result<Arc<Self>> {
        let gr = GaloisRing::new(residue, self.gr.digits())?;
        let emb = GrEmbedding::new(&self.gr, &gr)?;
        let eis = self.eis.iter().map(|c| emb.apply(c)).collect();
        Ok(Arc::new(LocalRingDesc { gr, e: self.e, eis, prec: self.prec }))
    }

    /// The same ring at a different working precision.
    pub fn with_precision(&self, m: u32) -> Result<Arc<Self>> {
        let digits = (m as usize).div_ceil(self.e) as u32 + 1;
        let gr = GaloisRing::new(self.gr.residue(), digits)?;
        let eis = self
            .eis
            .iter()
            .map(|c| c.iter().map(|&x| x % checked_pow(gr.p(), digits).unwrap()).collect())
            .collect();
        Ok(Arc::new(LocalRingDesc { gr, e: self.e, eis, prec: m as i64 }))
    }

    pub fn p(&self) -> u64 {
        self.gr.p()
    }
    /// Residue degree over `F_p`.
    pub fn f(&self) -> usize {
        self.gr.f()
    }
    pub fn e(&self) -> usize {
        self.e
    }
    pub fn precision(&self) -> i64 {
        self.prec
    }
    pub fn residue(&self) -> &Arc<FieldDesc> {
        self.gr.residue()
    }
    pub fn galois(&self) -> &GaloisRing {
        &self.gr
    }
    pub fn eisenstein_coeffs(&self) -> &[GrElem] {
        &self.eis
    }
    pub fn is_unramified(&self) -> bool {
        self.e == 1
    }

    /// `E` as text, e.g. `T^2+3`; `-` when unramified.
    pub fn eisenstein_text(&self) -> String {
        if self.e == 1 {
            return "-".into();
        }
        let mut out = alloc::format!("T^{}", self.e);
        let n = checked_pow(self.p(), self.gr.digits()).unwrap() as i128;
        for (j, c) in self.eis.iter().enumerate().rev() {
            if self.gr.is_zero(c) {
                continue;
            }
            let coeff = if c[1..].iter().all(|&x| x == 0) {
                // symmetric representative
                let v = c[0] as i128;
                let v = if v > n / 2 { v - n } else { v };
                alloc::format!("{v}")
            } else {
                let parts: Vec<String> = c.iter().map(|x| alloc::format!("{x}")).collect();
                alloc::format!("[{}]", parts.join(","))
            };
            let sign = if coeff.starts_with('-') { "" } else { "+" };
            match j {
                0 => out.push_str(&alloc::format!("{sign}{coeff}")),
                1 => out.push_str(&alloc::format!("{sign}{coeff}*T")),
                _ => out.push_str(&alloc::format!("{sign}{coeff}*T^{j}")),
            }
        }
        out
    }

    fn len(&self) -> usize {
        self.e * self.f()
    }
}

/// The Teichmüller-compatible map `GR(p^P, f) -> GR(p^P, f')` for `f | f'`.
#[derive(Clone, Debug)]
pub struct GrEmbedding {
    source: GaloisRing,
    target: GaloisRing,
    gen_image: GrElem,
}

impl GrEmbedding {
    pub fn new(source: &GaloisRing, target: &GaloisRing) -> Result<Self> {
        if source.digits() != target.digits() {
            return Err(Error::RingMismatch);
        }
        let emb = Embedding::new(source.residue(), target.residue())?;
        // T is Teichmüller, so its image is the Teichmüller lift of its residue image
        let gen_image = if source.f() == 1 {
            target.zero()
        } else {
            target.teichmuller(&emb.apply(&FieldElem::generator(source.residue()))?)
        };
        Ok(GrEmbedding { source: source.clone(), target: target.clone(), gen_image })
    }

    pub fn apply(&self, a: &[u64]) -> GrElem {
        let mut acc = self.target.zero();
        for &c in a.iter().rev() {
            acc = self.target.add(&self.target.mul(&acc, &self.gen_image), &self.target.from_int(c as i64));
        }
        acc
    }

    /// Preimage via Teichmüller digits, if every digit lies in the subfield.
    pub fn preimage(&self, a: &[u64]) -> Option<GrElem> {
        let emb = Embedding::new(self.source.residue(), self.target.residue()).ok()?;
        let digits = self.target.teichmuller_digits(a, self.target.digits());
        let mut acc = self.source.zero();
        for (k, d) in digits.iter().enumerate() {
            let s = emb.preimage(d)?;
            acc = self.source.add(&acc, &self.source.mul_p_pow(&self.source.teichmuller(&s), k as u32));
        }
        Some(acc)
    }
}

/// An element of `O` known modulo `ϖ^prec`.
#[derive(Clone, PartialEq, Eq)]
pub struct LocalInt {
    desc: Arc<LocalRingDesc>,
    /// Coefficient of `ϖ^j T^i` at index `j * f + i`.
    c: Vec<u64>,
    prec: i64,
}

impl fmt::Debug for LocalInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LocalInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = &self.desc;
        write!(f, "loc({},{},{}):{}", d.p(), d.f(), d.eisenstein_text(), self.digits_text())
    }
}

impl LocalInt {
    pub fn zero(desc: &Arc<LocalRingDesc>) -> Self {
        LocalInt { desc: desc.clone(), c: vec![0; desc.len()], prec: desc.prec }
    }

    pub fn one(desc: &Arc<LocalRingDesc>) -> Self {
        Self::from_int(desc, 1)
    }

    pub fn from_int(desc: &Arc<LocalRingDesc>, n: i64) -> Self {
        Self::from_gr(desc, &desc.gr.from_int(n))
    }

    /// An element of the unramified layer.
    pub fn from_gr(desc: &Arc<LocalRingDesc>, a: &[u64]) -> Self {
        let mut x = Self::zero(desc);
        x.c[..desc.f()].copy_from_slice(a);
        x
    }

    /// From blocks: `blocks[j]` holds the `T`-coefficients of `ϖ^j`.
    pub fn from_blocks(desc: &Arc<LocalRingDesc>, blocks: &[Vec<i64>]) -> Result<Self> {
        if blocks.len() > desc.e {
            return Err(Error::DimensionMismatch);
        }
        let mut x = Self::zero(desc);
        for (j, b) in blocks.iter().enumerate() {
            let g = desc.gr.from_coeffs(b)?;
            x.c[j * desc.f()..(j + 1) * desc.f()].copy_from_slice(&g);
        }
        Ok(x)
    }

    pub fn uniformizer(desc: &Arc<LocalRingDesc>) -> Self {
        if desc.e == 1 {
            return Self::from_int(desc, desc.p() as i64);
        }
        let mut x = Self::zero(desc);
        x.c[desc.f()] = 1;
        x
    }

    pub fn teichmuller(desc: &Arc<LocalRingDesc>, r: &FieldElem) -> Self {
        Self::from_gr(desc, &desc.gr.teichmuller(r))
    }

    /// Coefficientwise lift of a residue element.
    pub fn naive_lift(desc: &Arc<LocalRingDesc>, r: &FieldElem) -> Self {
        Self::from_gr(desc, &desc.gr.naive_lift(r))
    }

    pub fn desc(&self) -> &Arc<LocalRingDesc> {
        &self.desc
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn block(&self, j: usize) -> &[u64] {
        let f = self.desc.f();
        &self.c[j * f..(j + 1) * f]
    }

    /// Lowers the precision to at most `prec`.
    pub fn truncate(&self, prec: i64) -> Self {
        let mut x = self.clone();
        x.prec = x.prec.min(prec).max(0);
        x
    }

    fn check(&self, other: &Self) {
        assert!(self.desc == other.desc || Arc::ptr_eq(&self.desc, &other.desc), "local ring mismatch");
    }

    /// Valuation in uniformizer units; the precision when zero at precision.
    pub fn valuation(&self) -> i64 {
        let gr = &self.desc.gr;
        let e = self.desc.e as i64;
        (0..self.desc.e)
            .map(|j| {
                let b = self.block(j);
                if gr.is_zero(b) {
                    i64::MAX
                } else {
                    e * gr.vp(b) as i64 + j as i64
                }
            })
            .min()
            .unwrap_or(i64::MAX)
            .min(self.prec)
    }

    pub fn is_zero(&self) -> bool {
        self.valuation() >= self.prec
    }

    pub fn is_unit(&self) -> bool {
        self.prec > 0 && self.valuation() == 0
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let gr = &self.desc.gr;
        let c = self.c.chunks(self.desc.f()).zip(other.c.chunks(self.desc.f())).flat_map(|(a, b)| gr.add(a, b)).collect();
        LocalInt { desc: self.desc.clone(), c, prec: self.prec.min(other.prec) }
    }

    pub fn neg(&self) -> Self {
        let gr = &self.desc.gr;
        let c = self.c.chunks(self.desc.f()).flat_map(|a| gr.neg(a)).collect();
        LocalInt { desc: self.desc.clone(), c, prec: self.prec }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let d = &self.desc;
        let gr = &d.gr;
        let e = d.e;
        let prec = (self.prec + other.valuation()).min(other.prec + self.valuation()).min(d.prec);
        let mut blocks: Vec<GrElem> = vec![gr.zero(); 2 * e - 1];
        for i in 0..e {
            let a = self.block(i);
            if gr.is_zero(a) {
                continue;
            }
            for j in 0..e {
                let b = other.block(j);
                if gr.is_zero(b) {
                    continue;
                }
                blocks[i + j] = gr.add(&blocks[i + j], &gr.mul(a, b));
            }
        }
        for k in (e..blocks.len()).rev() {
            let g = core::mem::replace(&mut blocks[k], gr.zero());
            if gr.is_zero(&g) {
                continue;
            }
            for (j, cj) in d.eis.iter().enumerate() {
                blocks[k - e + j] = gr.sub(&blocks[k - e + j], &gr.mul(&g, cj));
            }
        }
        blocks.truncate(e);
        LocalInt { desc: d.clone(), c: blocks.concat(), prec }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.mul(&Self::from_int(&self.desc, n))
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut acc = Self::one(&self.desc);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Reduction modulo the uniformizer.
    pub fn reduce(&self) -> FieldElem {
        self.desc.gr.reduce(self.block(0))
    }

    /// `self / ϖ`; requires positive valuation. Precision drops by one.
    pub fn div_uniformizer(&self) -> Result<Self> {
        if self.prec > 0 && self.valuation() < 1 {
            return Err(Error::NotUnit);
        }
        let d = &self.desc;
        let gr = &d.gr;
        let f = d.f();
        let prec = (self.prec - 1).max(0);
        if d.e == 1 {
            let c = gr.div_p_pow(&self.c, 1);
            return Ok(LocalInt { desc: d.clone(), c, prec });
        }
        // shift the higher blocks down; a_0 / ϖ = (a_0 / p) (p / ϖ)
        let mut shifted = Self::zero(d);
        shifted.c[..(d.e - 1) * f].copy_from_slice(&self.c[f..]);
        let a0 = Self::from_gr(d, &gr.div_p_pow(self.block(0), 1));
        let mut x = shifted.add(&a0.mul(&Self::p_over_uniformizer(d)));
        x.prec = prec;
        Ok(x)
    }

    /// `p / ϖ = -(ϖ^{e-1} + c_{e-1} ϖ^{e-2} + ... + c_1) / (c_0 / p)`.
    fn p_over_uniformizer(d: &Arc<LocalRingDesc>) -> Self {
        let gr = &d.gr;
        let f = d.f();
        let mut s = Self::zero(d);
        s.c[(d.e - 1) * f..].copy_from_slice(&gr.one());
        for j in 1..d.e {
            let blk = gr.add(&s.c[(j - 1) * f..j * f], &d.eis[j]);
            s.c[(j - 1) * f..j * f].copy_from_slice(&blk);
        }
        let u0 = gr.div_p_pow(&d.eis[0], 1);
        let u0_inv = gr.inv(&u0).expect("Eisenstein constant term has valuation one");
        s.mul(&Self::from_gr(d, &gr.neg(&u0_inv)))
    }

    /// `self / ϖ^k`.
    pub fn div_uniformizer_pow(&self, k: i64) -> Result<Self> {
        let mut x = self.clone();
        for _ in 0..k {
            x = x.div_uniformizer()?;
        }
        Ok(x)
    }

    /// Inverse of a unit; precision is preserved.
    pub fn inv(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        let gr = &self.desc.gr;
        let r = gr.inv(&gr.naive_lift(&self.reduce()))?;
        let mut x = Self::from_gr(&self.desc, &r);
        let two = Self::from_int(&self.desc, 2);
        let mut correct = 1;
        while correct < self.prec {
            x = x.mul(&two.sub(&self.mul(&x)));
            correct *= 2;
        }
        Some(x.truncate(self.prec))
    }

    /// `self / other` when `v(other) <= v(self)`.
    pub fn div(&self, other: &Self) -> Result<Self> {
        let vb = other.valuation();
        if vb >= other.prec {
            return Err(Error::NotUnit);
        }
        if self.valuation() < vb {
            return Err(Error::NotUnit);
        }
        let ub = other.div_uniformizer_pow(vb)?;
        let a = self.div_uniformizer_pow(vb)?;
        Ok(a.mul(&ub.inv().ok_or(Error::NotUnit)?))
    }

    /// Frobenius `T -> T^{p^k}` on the unramified layer, `ϖ` fixed. Needs
    /// the Eisenstein coefficients to be fixed by it.
    pub fn frobenius(&self, k: u64) -> Result<Self> {
        let d = &self.desc;
        let gr = &d.gr;
        if d.eis.iter().any(|c| gr.frobenius(c, k) != *c) {
            return Err(Error::Unsupported("Frobenius does not fix the Eisenstein polynomial".into()));
        }
        let c = self.c.chunks(d.f()).flat_map(|b| gr.frobenius(b, k)).collect();
        Ok(LocalInt { desc: d.clone(), c, prec: self.prec })
    }

    /// Teichmüller digits `d_k` with `self = sum τ(d_k) ϖ^k`, one per known
    /// uniformizer-adic digit.
    pub fn digits(&self) -> Vec<FieldElem> {
        let mut rest = self.clone();
        let mut out = Vec::new();
        for _ in 0..self.prec {
            let d = rest.reduce();
            rest = rest.sub(&Self::teichmuller(&self.desc, &d));
            out.push(d);
            rest = rest.div_uniformizer().expect("digit removed");
        }
        out
    }

    /// Rebuilds an element from Teichmüller digits.
    pub fn from_digits(desc: &Arc<LocalRingDesc>, digits: &[FieldElem]) -> Self {
        let varpi = Self::uniformizer(desc);
        let mut acc = Self::zero(desc);
        for d in digits.iter().rev() {
            acc = acc.mul(&varpi).add(&Self::teichmuller(desc, d));
        }
        acc.truncate(digits.len() as i64)
    }

    /// `[d_0,...] * π^v` with the digits of the unit part.
    pub fn digits_text(&self) -> String {
        let v = self.valuation();
        if v >= self.prec {
            return alloc::format!("[] * π^{}", self.prec);
        }
        let unit = self.div_uniformizer_pow(v).expect("valuation checked");
        let parts: Vec<String> = unit.digits().iter().map(|d| alloc::format!("{}", d.index())).collect();
        alloc::format!("[{}] * π^{v}", parts.join(","))
    }

    /// Compact form `[d_0,...]` of the digits with trailing zeros trimmed,
    /// used inside series text.
    pub fn compact_text(&self) -> String {
        let mut digits: Vec<u64> = self.digits().iter().map(|d| d.index()).collect();
        while digits.len() > 1 && digits.last() == Some(&0) {
            digits.pop();
        }
        let parts: Vec<String> = digits.iter().map(|d| alloc::format!("{d}")).collect();
        alloc::format!("[{}]", parts.join(","))
    }

    /// The same representative over `desc`, a different precision of the same
    /// ring. With `exact` the representative is taken at the full precision of
    /// `desc`; otherwise the carried precision is kept (capped).
    pub fn rebase(&self, desc: &Arc<LocalRingDesc>, exact: bool) -> Result<Self> {
        let d = &self.desc;
        if d.p() != desc.p() || d.e != desc.e || !d.residue().same_field(desc.residue()) {
            return Err(Error::RingMismatch);
        }
        let n = checked_pow(desc.p(), desc.gr.digits().min(d.gr.digits())).unwrap();
        if d.eis.iter().zip(&desc.eis).any(|(a, b)| a.iter().zip(b).any(|(x, y)| x % n != y % n)) {
            return Err(Error::RingMismatch);
        }
        let top = checked_pow(desc.p(), desc.gr.digits()).unwrap();
        let c = self.c.iter().map(|x| x % top).collect();
        let prec = if exact { desc.prec } else { self.prec.min(desc.prec) };
        Ok(LocalInt { desc: desc.clone(), c, prec })
    }

    /// Whether the element carries the full precision of its ring.
    pub fn is_full_precision(&self) -> bool {
        self.prec >= self.desc.prec
    }

    /// Equality at the smaller of the two precisions.
    pub fn eq_at_precision(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

/// Ring handle for a local ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalRing(pub Arc<LocalRingDesc>);

impl LocalRing {
    pub fn desc(&self) -> &Arc<LocalRingDesc> {
        &self.0
    }
    pub fn uniformizer(&self) -> LocalInt {
        LocalInt::uniformizer(&self.0)
    }
}

impl Ring for LocalRing {
    type Elem = LocalInt;

    fn zero(&self) -> LocalInt {
        LocalInt::zero(&self.0)
    }
    fn one(&self) -> LocalInt {
        LocalInt::one(&self.0)
    }
    fn from_i64(&self, n: i64) -> LocalInt {
        LocalInt::from_int(&self.0, n)
    }
    fn add(&self, a: &LocalInt, b: &LocalInt) -> LocalInt {
        a.add(b)
    }
    fn neg(&self, a: &LocalInt) -> LocalInt {
        a.neg()
    }
    fn sub(&self, a: &LocalInt, b: &LocalInt) -> LocalInt {
        a.sub(b)
    }
    fn mul(&self, a: &LocalInt, b: &LocalInt) -> LocalInt {
        a.mul(b)
    }
    fn is_zero(&self, a: &LocalInt) -> bool {
        a.is_zero()
    }
    fn is_unit(&self, a: &LocalInt) -> bool {
        a.is_unit()
    }
    fn inv(&self, a: &LocalInt) -> Option<LocalInt> {
        a.inv()
    }
    fn text(&self, a: &LocalInt) -> String {
        a.compact_text()
    }
}

/// `GR` as a [`Ring`], for determinants over the unramified layer.
#[derive(Clone, Debug)]
struct GrRing(GaloisRing);

impl Ring for GrRing {
    type Elem = GrElem;

    fn zero(&self) -> GrElem {
        self.0.zero()
    }
    fn one(&self) -> GrElem {
        self.0.one()
    }
    fn from_i64(&self, n: i64) -> GrElem {
        self.0.from_int(n)
    }
    fn add(&self, a: &GrElem, b: &GrElem) -> GrElem {
        self.0.add(a, b)
    }
    fn neg(&self, a: &GrElem) -> GrElem {
        self.0.neg(a)
    }
    fn mul(&self, a: &GrElem, b: &GrElem) -> GrElem {
        self.0.mul(a, b)
    }
    fn is_zero(&self, a: &GrElem) -> bool {
        self.0.is_zero(a)
    }
    fn is_unit(&self, a: &GrElem) -> bool {
        !self.0.reduce(a).is_zero()
    }
    fn inv(&self, a: &GrElem) -> Option<GrElem> {
        self.0.inv(a)
    }
    fn text(&self, a: &GrElem) -> String {
        let parts: Vec<String> = a.iter().map(|x| alloc::format!("{x}")).collect();
        alloc::format!("[{}]", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum ExtKind {
    /// `F` unramified; `K` arbitrary.
    OverUnramified,
    /// `K = F ⊗ W(k_K)`, sharing the Eisenstein polynomial.
    UnramifiedOverRamified,
}

/// An extension `K/F` of local rings presented as unramified ∘ Eisenstein.
#[derive(Clone, Debug)]
pub struct Extension {
    base: Arc<LocalRingDesc>,
    top: Arc<LocalRingDesc>,
    kind: ExtKind,
    emb: GrEmbedding,
}

impl Extension {
    pub fn new(base: &Arc<LocalRingDesc>, top: &Arc<LocalRingDesc>) -> Result<Self> {
        if base.p() != top.p() || top.f() % base.f() != 0 {
            return Err(Error::RingMismatch);
        }
        let base_gr = GaloisRing::new(base.residue(), top.gr.digits())?;
        let emb = GrEmbedding::new(&base_gr, &top.gr)?;
        let kind = if base.e == 1 {
            ExtKind::OverUnramified
        } else {
            let modulus = checked_pow(top.p(), top.gr.digits().min(base.gr.digits())).unwrap();
            let same = top.e == base.e
                && base.eis.iter().zip(&top.eis).all(|(b, t)| {
                    let b: Vec<u64> = b.iter().map(|x| x % modulus).collect();
                    let mapped = emb.apply(&b);
                    mapped.iter().zip(t).all(|(x, y)| x % modulus == y % modulus)
                });
            if !same {
                return Err(Error::Unsupported(
                    "ramified base needs the extension to share its Eisenstein polynomial".into(),
                ));
            }
            ExtKind::UnramifiedOverRamified
        };
        Ok(Extension { base: base.clone(), top: top.clone(), kind, emb })
    }

    pub fn base(&self) -> &Arc<LocalRingDesc> {
        &self.base
    }
    pub fn top(&self) -> &Arc<LocalRingDesc> {
        &self.top
    }
    /// Inertia degree `s = f_K / f_F`.
    pub fn inertia_degree(&self) -> u64 {
        (self.top.f() / self.base.f()) as u64
    }
    pub fn ramification_index(&self) -> u64 {
        (self.top.e / self.base.e) as u64
    }
    pub fn degree(&self) -> u64 {
        self.inertia_degree() * self.ramification_index()
    }

    fn check_base(&self, x: &LocalInt) -> Result<()> {
        if *x.desc != *self.base {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    fn check_top(&self, x: &LocalInt) -> Result<()> {
        if *x.desc != *self.top {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    fn resize(&self, a: &[u64], digits: u32) -> GrElem {
        let n = checked_pow(self.top.p(), digits).unwrap();
        a.iter().map(|x| x % n).collect()
    }

    /// The inclusion `O_F -> O_K`.
    pub fn embed(&self, x: &LocalInt) -> Result<LocalInt> {
        self.check_base(x)?;
        let mut y = LocalInt::zero(&self.top);
        let f = self.top.f();
        let digits = self.top.gr.digits();
        for j in 0..self.base.e {
            let b = self.emb.apply(&self.resize(x.block(j), digits));
            y.c[j * f..(j + 1) * f].copy_from_slice(&b);
        }
        let e = self.ramification_index() as i64;
        y.prec = x.prec.saturating_mul(e).min(self.top.prec);
        Ok(y)
    }

    /// The preimage of `x` under [`Extension::embed`] for an unramified
    /// extension; errors if `x` is not in `O_F`. Works digit by digit, since
    /// the stored coefficients carry guard digits beyond the precision.
    pub fn restrict(&self, x: &LocalInt) -> Result<LocalInt> {
        self.check_top(x)?;
        if self.ramification_index() != 1 {
            return Err(Error::Unsupported("restriction along a ramified extension".into()));
        }
        let residue = Embedding::new(self.base.residue(), self.top.residue())?;
        let digits = x
            .truncate(self.base.prec)
            .digits()
            .iter()
            .map(|d| residue.preimage(d).ok_or_else(|| Error::Inconsistent("element not in the base ring".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(LocalInt::from_digits(&self.base, &digits))
    }

    fn descend(&self, a: &[u64]) -> Result<GrElem> {
        let pre = self.emb.preimage(a).ok_or_else(|| Error::Inconsistent("norm not in the base ring".into()))?;
        Ok(self.resize(&pre, self.base.gr.digits()))
    }

    /// `N_{K/F}(x)`, the determinant of multiplication by `x` on `O_K` as a
    /// free `O_F`-module. Precision: `s v(x) + ceil(ρ/e)` with `ρ` the
    /// relative precision of `x`, capped by the base precision.
    pub fn norm(&self, x: &LocalInt) -> Result<LocalInt> {
        self.check_top(x)?;
        let s = self.inertia_degree();
        let r = self.base.f() as u64;
        let v = x.valuation();
        let rho = x.prec - v;
        let e = self.ramification_index() as i64;
        let prec = (s as i64).saturating_mul(v).saturating_add((rho + e - 1) / e).min(self.base.prec);
        let gr = &self.top.gr;
        let mut out = LocalInt::zero(&self.base);
        let fb = self.base.f();
        match self.kind {
            ExtKind::OverUnramified => {
                // N_{K/K_0} as an e×e determinant over GR_K, then N_{K_0/F_0}
                let ke = self.top.e;
                let varpi = LocalInt::uniformizer(&self.top);
                let mut cols = Vec::with_capacity(ke);
                let mut col = x.clone();
                col.prec = self.top.prec;
                for _ in 0..ke {
                    cols.push((0..ke).map(|i| col.block(i).to_vec()).collect::<Vec<_>>());
                    col = col.mul(&varpi);
                    col.prec = self.top.prec;
                }
                let m = Mat::from_columns(&cols)?;
                let det = matrix::det(&GrRing(gr.clone()), &m)?;
                let mut acc = gr.one();
                for j in 0..s {
                    acc = gr.mul(&acc, &gr.frobenius(&det, r * j));
                }
                out.c[..fb].copy_from_slice(&self.descend(&acc)?);
            }
            ExtKind::UnramifiedOverRamified => {
                let mut acc = LocalInt::one(&self.top);
                let mut xe = x.clone();
                xe.prec = self.top.prec;
                for j in 0..s {
                    acc = acc.mul(&xe.frobenius(r * j)?);
                }
                for j in 0..self.base.e {
                    let b = self.descend(acc.block(j))?;
                    out.c[j * fb..(j + 1) * fb].copy_from_slice(&b);
                }
            }
        }
        out.prec = prec;
        if out.is_zero() {
            return Err(Error::Precision { needed: prec + 1, available: prec });
        }
        Ok(out)
    }
}

/// Whether `N_{K/F}(ϖ) = π^s` at the available precision.
pub fn lt_extension_criterion(pi: &LocalInt, varpi: &LocalInt, ext: &Extension) -> Result<bool> {
    if pi.prec() <= 1 || pi.valuation() != 1 || varpi.prec() <= 1 || varpi.valuation() != 1 {
        return Err(Error::NotUniformizer);
    }
    ext.check_base(pi)?;
    let n = ext.norm(varpi)?;
    Ok(n.eq_at_precision(&pi.pow(ext.inertia_degree())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{elements, make_field};
    use alloc::vec;

    fn qp(p: u64, m: u32) -> Arc<LocalRingDesc> {
        LocalRingDesc::unramified(&make_field(p, 1).unwrap(), m).unwrap()
    }

    fn quadratic(p: u64, c0: i64, m: u32) -> Arc<LocalRingDesc> {
        LocalRingDesc::eisenstein(&make_field(p, 1).unwrap(), &[vec![c0], vec![0]], m).unwrap()
    }

    #[test]
    fn arithmetic_and_valuation() {
        let o = qp(5, 6);
        let x = LocalInt::from_int(&o, 50);
        assert_eq!(x.valuation(), 2);
        let y = LocalInt::from_int(&o, 7);
        assert!(y.is_unit());
        let inv = y.inv().unwrap();
        assert!(inv.mul(&y).eq_at_precision(&LocalInt::one(&o)));
        assert_eq!(x.mul(&y).valuation(), 2);
        assert!(x.div_uniformizer().unwrap().eq_at_precision(&LocalInt::from_int(&o, 10)));
        assert_eq!(x.div_uniformizer().unwrap().prec(), 5);
    }

    #[test]
    fn ramified_uniformizer_squares_to_minus_constant() {
        let o = quadratic(3, 3, 6);
        let w = LocalInt::uniformizer(&o);
        assert_eq!(w.valuation(), 1);
        assert!(w.mul(&w).eq_at_precision(&LocalInt::from_int(&o, -3)));
        assert_eq!(LocalInt::from_int(&o, 3).valuation(), 2);
        let q = LocalInt::from_int(&o, 3).div_uniformizer().unwrap();
        assert!(q.eq_at_precision(&w.neg()));
        assert_eq!(o.eisenstein_text(), "T^2+3");
    }

    #[test]
    fn digits_roundtrip_and_text() {
        let f9 = make_field(3, 2).unwrap();
        let o = LocalRingDesc::unramified(&f9, 4).unwrap();
        let x = LocalInt::from_blocks(&o, &[vec![7, 11]]).unwrap();
        let d = x.digits();
        assert_eq!(d.len(), 4);
        assert!(LocalInt::from_digits(&o, &d).eq_at_precision(&x));
        let s = LocalInt::from_int(&o, 9).to_string();
        assert_eq!(s, "loc(3,2,-):[1,0] * π^2");
    }

    #[test]
    fn teichmuller_frobenius_is_power_map() {
        let f4 = make_field(2, 2).unwrap();
        let o = LocalRingDesc::unramified(&f4, 5).unwrap();
        for a in elements(&f4) {
            let t = LocalInt::teichmuller(&o, &a);
            assert_eq!(t.frobenius(1).unwrap(), t.pow(2));
        }
    }

    #[test]
    fn norm_of_base_element_in_unramified_extension() {
        for s in 1..=3u32 {
            let f = qp(3, 6);
            let k = LocalRingDesc::unramified(&make_field(3, s).unwrap(), 6).unwrap();
            let ext = Extension::new(&f, &k).unwrap();
            let pi = LocalInt::uniformizer(&f);
            let n = ext.norm(&ext.embed(&pi).unwrap()).unwrap();
            assert!(n.eq_at_precision(&pi.pow(s as u64)));
            assert!(lt_extension_criterion(&pi, &LocalInt::uniformizer(&k), &ext).unwrap());
        }
    }

    #[test]
    fn quadratic_ramified_norms() {
        for p in [3u64, 5] {
            let f = qp(p, 6);
            let pi = LocalInt::uniformizer(&f);
            let k_minus = quadratic(p, p as i64, 6);
            let ext = Extension::new(&f, &k_minus).unwrap();
            let w = LocalInt::uniformizer(&k_minus);
            assert!(ext.norm(&w).unwrap().eq_at_precision(&LocalInt::from_int(&f, p as i64)));
            assert!(lt_extension_criterion(&pi, &w, &ext).unwrap());

            let k_plus = quadratic(p, -(p as i64), 6);
            let ext = Extension::new(&f, &k_plus).unwrap();
            let w = LocalInt::uniformizer(&k_plus);
            assert!(ext.norm(&w).unwrap().eq_at_precision(&LocalInt::from_int(&f, -(p as i64))));
            assert!(!lt_extension_criterion(&pi, &w, &ext).unwrap());
        }
    }

    #[test]
    fn criterion_rejects_non_uniformizers() {
        let f = qp(3, 6);
        let k = quadratic(3, 3, 6);
        let ext = Extension::new(&f, &k).unwrap();
        let one = LocalInt::one(&k);
        let pi = LocalInt::uniformizer(&f);
        assert_eq!(lt_extension_criterion(&pi, &one, &ext), Err(Error::NotUniformizer));
    }

    #[test]
    fn norm_of_base_element_is_power_of_degree() {
        let f = qp(5, 6);
        let k = quadratic(5, 5, 6);
        let ext = Extension::new(&f, &k).unwrap();
        let x = LocalInt::from_int(&f, 7);
        let n = ext.norm(&ext.embed(&x).unwrap()).unwrap();
        assert!(n.eq_at_precision(&x.pow(2)));
    }

    #[test]
    fn unramified_over_ramified() {
        let f = quadratic(3, 3, 6);
        let k = f.with_residue(&make_field(3, 2).unwrap()).unwrap();
        let ext = Extension::new(&f, &k).unwrap();
        let pi = LocalInt::uniformizer(&f);
        assert!(lt_extension_criterion(&pi, &LocalInt::uniformizer(&k), &ext).unwrap());
    }

    #[test]
    fn restrict_after_division() {
        // x = τ(h) with h^4 = 2, so σ(x)/x = τ(2) lies in Z_5
        let base = qp(5, 4);
        let f625 = make_field(5, 4).unwrap();
        let top = LocalRingDesc::unramified(&f625, 4).unwrap();
        let ext = Extension::new(&base, &top).unwrap();
        let two = FieldElem::from_int(&f625, 2);
        let h = elements(&f625).find(|h| h.pow(4) == two).unwrap();
        let x = LocalInt::teichmuller(&top, &h);
        let r = x.frobenius(1).unwrap().div(&x).unwrap();
        let want = LocalInt::teichmuller(&base, &FieldElem::from_int(base.residue(), 2));
        assert!(ext.restrict(&r).unwrap().sub(&want).is_zero());
        assert!(ext.restrict(&LocalInt::teichmuller(&top, &h)).is_err());
    }
}
