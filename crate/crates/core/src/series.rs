//! Truncated Laurent series in one variable and total-degree-truncated
//! polynomials in two, over a [`Ring`] handle.
//!
//! A univariate series is a finite sparse sum plus `O(u^prec)`; exact
//! polynomials carry `prec == UNBOUNDED`. Every operation computes the
//! precision its result is provably correct to.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ring::Ring;

/// Precision of exact elements.
pub const UNBOUNDED: i64 = i64::MAX / 4;

/// Hard limit on geometric-series iterations in [`TruncSeries::inverse`].
const MAX_INVERSE_TERMS: usize = 1 << 14;

pub(crate) fn prec_add(a: i64, b: i64) -> i64 {
    if a >= UNBOUNDED || b >= UNBOUNDED {
        UNBOUNDED
    } else {
        (a + b).min(UNBOUNDED)
    }
}

#[derive(Clone, Debug)]
pub struct TruncSeries<R: Ring> {
    ring: R,
    terms: BTreeMap<i64, R::Elem>,
    prec: i64,
}

impl<R: Ring> TruncSeries<R> {
    /// `O(u^prec)`.
    pub fn zero(ring: &R, prec: i64) -> Self {
        TruncSeries { ring: ring.clone(), terms: BTreeMap::new(), prec: prec.min(UNBOUNDED) }
    }

    pub fn one(ring: &R) -> Self {
        Self::constant(ring, ring.one())
    }

    pub fn constant(ring: &R, c: R::Elem) -> Self {
        Self::monomial(ring, c, 0)
    }

    /// Exact `c * u^e`.
    pub fn monomial(ring: &R, c: R::Elem, e: i64) -> Self {
        Self::from_terms(ring, [(e, c)], UNBOUNDED)
    }

    /// The variable `u`, exact.
    pub fn var(ring: &R) -> Self {
        Self::monomial(ring, ring.one(), 1)
    }

    /// Terms at or beyond `prec` are dropped; zero coefficients are skipped.
    pub fn from_terms(ring: &R, terms: impl IntoIterator<Item = (i64, R::Elem)>, prec: i64) -> Self {
        let mut s = Self::zero(ring, prec);
        for (e, c) in terms {
            if e < s.prec && !ring.is_zero(&c) {
                let entry = match s.terms.remove(&e) {
                    Some(old) => ring.add(&old, &c),
                    None => c,
                };
                if !ring.is_zero(&entry) {
                    s.terms.insert(e, entry);
                }
            }
        }
        s
    }

    /// Coefficients `coeffs[i]` of `u^(lo + i)`.
    pub fn from_coeffs(ring: &R, lo: i64, coeffs: Vec<R::Elem>, prec: i64) -> Self {
        Self::from_terms(ring, coeffs.into_iter().enumerate().map(|(i, c)| (lo + i as i64, c)), prec)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec >= UNBOUNDED
    }

    /// Zero to the carried precision.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest stored exponent.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Valuation, or the precision for a series with no known terms.
    pub fn valuation_bound(&self) -> i64 {
        self.valuation().unwrap_or(self.prec)
    }

    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn coeff(&self, e: i64) -> R::Elem {
        self.terms.get(&e).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &R::Elem)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowers the precision to at most `prec`.
    pub fn truncate(&self, prec: i64) -> Self {
        Self::from_terms(&self.ring, self.terms.iter().map(|(&e, c)| (e, c.clone())), self.prec.min(prec))
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let all = self.terms.iter().chain(other.terms.iter()).map(|(&e, c)| (e, c.clone()));
        Self::from_terms(&self.ring, all, prec)
    }

    pub fn neg(&self) -> Self {
        Self::from_terms(&self.ring, self.terms.iter().map(|(&e, c)| (e, self.ring.neg(c))), self.prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        Self::from_terms(&self.ring, self.terms.iter().map(|(&e, x)| (e, self.ring.mul(c, x))), self.prec)
    }

    /// Multiplies by `u^k`.
    pub fn shift(&self, k: i64) -> Self {
        let prec = if self.is_exact() { UNBOUNDED } else { self.prec + k };
        Self::from_terms(&self.ring, self.terms.iter().map(|(&e, c)| (e + k, c.clone())), prec)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_cap(other, UNBOUNDED)
    }

    /// Product with precision `min(prec_a + v(b), prec_b + v(a), cap)`.
    pub fn mul_cap(&self, other: &Self, cap: i64) -> Self {
        let prec = prec_add(self.prec, other.valuation_bound())
            .min(prec_add(other.prec, self.valuation_bound()))
            .min(cap);
        let mut acc: BTreeMap<i64, R::Elem> = BTreeMap::new();
        for (&ea, ca) in &self.terms {
            for (&eb, cb) in &other.terms {
                let e = ea + eb;
                if e >= prec {
                    break;
                }
                let t = self.ring.mul(ca, cb);
                let v = match acc.remove(&e) {
                    Some(old) => self.ring.add(&old, &t),
                    None => t,
                };
                acc.insert(e, v);
            }
        }
        Self::from_terms(&self.ring, acc, prec)
    }

    pub fn pow(&self, n: u64, cap: i64) -> Self {
        let mut acc = Self::one(&self.ring);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_cap(&base, cap);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_cap(&base, cap);
            }
        }
        acc
    }

    /// Applies `f` to every coefficient (a ring map into `target`).
    pub fn map_coeffs<S: Ring>(&self, target: &S, mut f: impl FnMut(&R::Elem) -> S::Elem) -> TruncSeries<S> {
        TruncSeries::from_terms(target, self.terms.iter().map(|(&e, c)| (e, f(c))), self.prec)
    }

    pub fn try_map_coeffs<S: Ring>(
        &self,
        target: &S,
        mut f: impl FnMut(&R::Elem) -> Result<S::Elem>,
    ) -> Result<TruncSeries<S>> {
        let terms = self.terms.iter().map(|(&e, c)| Ok((e, f(c)?))).collect::<Result<Vec<_>>>()?;
        Ok(TruncSeries::from_terms(target, terms, self.prec))
    }

    /// Lowest exponent whose coefficient is a unit.
    fn unit_leading(&self) -> Option<(i64, R::Elem)> {
        self.terms.iter().find(|(_, c)| self.ring.is_unit(c)).map(|(&e, c)| (e, c.clone()))
    }

    /// Multiplicative inverse, correct to at most `cap`.
    ///
    /// Writes `self = c u^k (1 + t)` with `c u^k` the lowest term having a
    /// unit coefficient, so the terms of `t` below `u^0` are non-units, and
    /// sums the geometric series in `-t`.
    pub fn inverse(&self, cap: i64) -> Result<Self> {
        let (k, c) = self.unit_leading().ok_or(Error::NotUnit)?;
        let c_inv = self.ring.inv(&c).ok_or(Error::NotUnit)?;
        let normalized = self.scale(&c_inv).shift(-k);
        let t = normalized.sub(&Self::one(&self.ring));
        let neg_t = t.neg();
        let inner_cap = prec_add(cap, k);
        let mut acc = Self::one(&self.ring);
        let mut term = Self::one(&self.ring);
        for _ in 0..MAX_INVERSE_TERMS {
            term = term.mul_cap(&neg_t, inner_cap);
            if term.is_zero() && term.prec >= acc.prec.min(inner_cap) {
                return Ok(acc.truncate(inner_cap).scale(&c_inv).shift(-k));
            }
            acc = acc.add(&term);
        }
        Err(Error::Precision { needed: cap, available: acc.prec - k })
    }

    /// `self(g)`. Requires `g` to have positive valuation, or to be
    /// invertible when `self` has negative exponents.
    pub fn compose(&self, g: &Self, cap: i64) -> Result<Self> {
        if g.terms.keys().any(|&e| e <= 0) {
            return Err(Error::NonZeroConstantTerm);
        }
        self.substitute(g, cap)
    }

    /// `self(g)` for any `g` when `self` is exact; otherwise `g` must have
    /// positive valuation. Negative exponents use the inverse of `g`.
    pub fn substitute(&self, g: &Self, cap: i64) -> Result<Self> {
        let vg = g.valuation_bound();
        if !self.is_exact() && g.terms.keys().any(|&e| e <= 0) {
            return Err(Error::NonZeroConstantTerm);
        }
        let mut prec = cap;
        if !self.is_exact() {
            prec = prec.min(if vg >= UNBOUNDED { UNBOUNDED } else { self.prec.saturating_mul(vg).min(UNBOUNDED) });
        }
        let mut acc = Self::zero(&self.ring, prec);
        let hi: Vec<(i64, R::Elem)> = self.terms.iter().filter(|(&e, _)| e >= 0).map(|(&e, c)| (e, c.clone())).collect();
        let lo: Vec<(i64, R::Elem)> = self.terms.iter().filter(|(&e, _)| e < 0).map(|(&e, c)| (e, c.clone())).collect();
        if !hi.is_empty() {
            let mut power = Self::one(&self.ring);
            let mut current = 0i64;
            for (e, c) in hi {
                if vg > 0 && vg < UNBOUNDED && e.saturating_mul(vg) >= prec {
                    break;
                }
                while current < e {
                    power = power.mul_cap(g, prec);
                    current += 1;
                }
                acc = acc.add(&power.scale(&c));
            }
        }
        if !lo.is_empty() {
            let g_inv = g.inverse(prec)?;
            let mut power = Self::one(&self.ring);
            let mut current = 0i64;
            for (e, c) in lo.into_iter().rev() {
                while current > e {
                    power = power.mul_cap(&g_inv, prec);
                    current -= 1;
                }
                acc = acc.add(&power.scale(&c));
            }
        }
        Ok(acc)
    }

    /// Compositional inverse of `c u + ...` with `c` a unit, to precision
    /// `min(prec, cap)`.
    pub fn reversion(&self, cap: i64) -> Result<Self> {
        if self.terms.keys().any(|&e| e < 1) {
            return Err(Error::NonZeroConstantTerm);
        }
        let c = self.coeff(1);
        let c_inv = if self.ring.is_unit(&c) { self.ring.inv(&c) } else { None }.ok_or(Error::NonUnitLinearTerm)?;
        let prec = self.prec.min(cap);
        if prec >= UNBOUNDED {
            return Err(Error::Precision { needed: UNBOUNDED, available: prec });
        }
        // g <- g - c^{-1} (f(g) - u), one new correct coefficient per step
        let u = Self::var(&self.ring);
        let mut g = u.scale(&c_inv).truncate(prec);
        for _ in 1..prec {
            let err = self.compose(&g, prec)?.sub(&u);
            if err.is_zero() {
                break;
            }
            g = g.sub(&err.scale(&c_inv));
        }
        Ok(g.truncate(prec))
    }

    /// Equality of all coefficients below the smaller of the two precisions.
    pub fn agrees(&self, other: &Self) -> bool {
        let p = self.prec.min(other.prec);
        self.sub(other).truncate(p).is_zero()
    }

    /// Canonical text, e.g. `u^-1*[1] + u^2*[2,1] + O(u^8)`.
    pub fn text(&self, var: &str) -> String {
        let mut parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&e, c)| {
                let coeff = self.ring.text(c);
                match e {
                    0 => coeff,
                    1 => alloc::format!("{var}*{coeff}"),
                    _ => alloc::format!("{var}^{e}*{coeff}"),
                }
            })
            .collect();
        if !self.is_exact() {
            parts.push(alloc::format!("O({var}^{})", self.prec));
        }
        if parts.is_empty() {
            return "0".into();
        }
        parts.join(" + ")
    }
}

impl<R: Ring> PartialEq for TruncSeries<R> {
    /// Same precision and the same coefficients.
    fn eq(&self, other: &Self) -> bool {
        self.prec == other.prec && self.agrees(other)
    }
}

/// A polynomial in `X, Y` known modulo total degree `n`.
#[derive(Clone, Debug)]
pub struct BivarTrunc<R: Ring> {
    ring: R,
    terms: BTreeMap<(u32, u32), R::Elem>,
    n: u32,
}

impl<R: Ring> BivarTrunc<R> {
    pub fn zero(ring: &R, n: u32) -> Self {
        BivarTrunc { ring: ring.clone(), terms: BTreeMap::new(), n }
    }

    pub fn from_terms(ring: &R, terms: impl IntoIterator<Item = ((u32, u32), R::Elem)>, n: u32) -> Self {
        let mut s = Self::zero(ring, n);
        for ((i, j), c) in terms {
            if i + j >= n || ring.is_zero(&c) {
                continue;
            }
            let entry = match s.terms.remove(&(i, j)) {
                Some(old) => ring.add(&old, &c),
                None => c,
            };
            if !ring.is_zero(&entry) {
                s.terms.insert((i, j), entry);
            }
        }
        s
    }

    pub fn monomial(ring: &R, c: R::Elem, i: u32, j: u32, n: u32) -> Self {
        Self::from_terms(ring, [((i, j), c)], n)
    }

    pub fn x(ring: &R, n: u32) -> Self {
        Self::monomial(ring, ring.one(), 1, 0, n)
    }

    pub fn y(ring: &R, n: u32) -> Self {
        Self::monomial(ring, ring.one(), 0, 1, n)
    }

    /// `f(X)` viewed in two variables; the cutoff drops to `f`'s precision.
    pub fn from_univariate_x(f: &TruncSeries<R>, n: u32) -> Result<Self> {
        if f.terms().any(|(e, _)| e < 0) {
            return Err(Error::NotPolynomial);
        }
        let n = n.min(f.prec().clamp(0, u32::MAX as i64) as u32);
        Ok(Self::from_terms(f.ring(), f.terms().map(|(e, c)| ((e as u32, 0), c.clone())), n))
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    /// Exclusive total-degree cutoff.
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn coeff(&self, i: u32, j: u32) -> R::Elem {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &R::Elem)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest total degree present, or the cutoff when empty.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|(i, j)| i + j).min().unwrap_or(self.n)
    }

    pub fn truncate(&self, n: u32) -> Self {
        Self::from_terms(&self.ring, self.terms.iter().map(|(&k, c)| (k, c.clone())), self.n.min(n))
    }

    /// The part of total degree exactly `d`.
    pub fn homogeneous(&self, d: u32) -> Vec<((u32, u32), R::Elem)> {
        self.terms.iter().filter(|((i, j), _)| i + j == d).map(|(&k, c)| (k, c.clone())).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let all = self.terms.iter().chain(other.terms.iter()).map(|(&k, c)| (k, c.clone()));
        Self::from_terms(&self.ring, all, self.n.min(other.n))
    }

    pub fn neg(&self) -> Self {
        Self::from_terms(&self.ring, self.terms.iter().map(|(&k, c)| (k, self.ring.neg(c))), self.n)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        Self::from_terms(&self.ring, self.terms.iter().map(|(&k, x)| (k, self.ring.mul(c, x))), self.n)
    }

    /// Product; known to total degree `min(n_a + ord(b), n_b + ord(a))`.
    pub fn mul(&self, other: &Self) -> Self {
        let n = (self.n + other.order()).min(other.n + self.order());
        let mut acc: BTreeMap<(u32, u32), R::Elem> = BTreeMap::new();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &other.terms {
                let key = (i1 + i2, j1 + j2);
                if key.0 + key.1 >= n {
                    continue;
                }
                let t = self.ring.mul(c1, c2);
                let v = match acc.remove(&key) {
                    Some(old) => self.ring.add(&old, &t),
                    None => t,
                };
                acc.insert(key, v);
            }
        }
        Self::from_terms(&self.ring, acc, n)
    }

    /// `F(Y, X)`.
    pub fn swap(&self) -> Self {
        Self::from_terms(&self.ring, self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())), self.n)
    }

    /// `F(G, H)` for `G`, `H` without constant term.
    pub fn compose(&self, g: &Self, h: &Self) -> Result<Self> {
        if g.order() == 0 || h.order() == 0 {
            return Err(Error::NonZeroConstantTerm);
        }
        let min_ord = g.order().min(h.order());
        let n = self.n.saturating_mul(min_ord).min(g.n).min(h.n);
        let one = Self::monomial(&self.ring, self.ring.one(), 0, 0, n);
        let mut gp: Vec<Self> = alloc::vec![one.clone()];
        let mut hp: Vec<Self> = alloc::vec![one];
        let mut acc = Self::zero(&self.ring, n);
        for (&(i, j), c) in &self.terms {
            while gp.len() <= i as usize {
                let next = gp.last().unwrap().mul(g).truncate(n);
                gp.push(next);
            }
            while hp.len() <= j as usize {
                let next = hp.last().unwrap().mul(h).truncate(n);
                hp.push(next);
            }
            acc = acc.add(&gp[i as usize].mul(&hp[j as usize]).scale(c));
        }
        Ok(acc.truncate(n))
    }

    /// `f(F(X, Y))` for a univariate `f` with positive valuation.
    pub fn apply(f: &TruncSeries<R>, inner: &Self) -> Result<Self> {
        if f.terms().any(|(e, _)| e <= 0) {
            return Err(Error::NonZeroConstantTerm);
        }
        if inner.order() == 0 {
            return Err(Error::NonZeroConstantTerm);
        }
        let fprec = f.prec().clamp(0, u32::MAX as i64) as u32;
        let n = inner.n.min(fprec.saturating_mul(inner.order()));
        let mut acc = Self::zero(inner.ring(), n);
        let mut power = Self::monomial(inner.ring(), inner.ring.one(), 0, 0, n);
        let mut current = 0i64;
        for (e, c) in f.terms() {
            if (e as u64) * (inner.order() as u64) >= n as u64 {
                break;
            }
            while current < e {
                power = power.mul(inner).truncate(n);
                current += 1;
            }
            acc = acc.add(&power.scale(c));
        }
        Ok(acc.truncate(n))
    }

    /// `F(a(t), b(t))` for `a`, `b` of positive valuation.
    pub fn substitute(&self, a: &TruncSeries<R>, b: &TruncSeries<R>, cap: i64) -> Result<TruncSeries<R>> {
        if a.terms().any(|(e, _)| e <= 0) || b.terms().any(|(e, _)| e <= 0) {
            return Err(Error::NonZeroConstantTerm);
        }
        let min_val = a.valuation_bound().min(b.valuation_bound()).max(1);
        let prec = cap.min(prec_add(0, (self.n as i64).saturating_mul(min_val).min(UNBOUNDED)));
        let mut acc = TruncSeries::zero(&self.ring, prec);
        let mut ap: Vec<TruncSeries<R>> = alloc::vec![TruncSeries::one(&self.ring)];
        let mut bp: Vec<TruncSeries<R>> = alloc::vec![TruncSeries::one(&self.ring)];
        for (&(i, j), c) in &self.terms {
            while ap.len() <= i as usize {
                let next = ap.last().unwrap().mul_cap(a, prec);
                ap.push(next);
            }
            while bp.len() <= j as usize {
                let next = bp.last().unwrap().mul_cap(b, prec);
                bp.push(next);
            }
            acc = acc.add(&ap[i as usize].mul_cap(&bp[j as usize], prec).scale(c));
        }
        Ok(acc)
    }

    pub fn agrees(&self, other: &Self) -> bool {
        self.sub(other).truncate(self.n.min(other.n)).is_zero()
    }

    /// Canonical text, e.g. `X + Y + X*Y + O(deg 4)`.
    pub fn text(&self) -> String {
        let mut keys: Vec<&(u32, u32)> = self.terms.keys().collect();
        keys.sort_by_key(|&&(i, j)| (i + j, core::cmp::Reverse(i)));
        let mut parts: Vec<String> = keys
            .into_iter()
            .map(|&(i, j)| {
                let c = &self.terms[&(i, j)];
                let mut factors: Vec<String> = Vec::new();
                if !self.ring.is_one(c) || (i == 0 && j == 0) {
                    factors.push(self.ring.text(c));
                }
                for (var, e) in [("X", i), ("Y", j)] {
                    match e {
                        0 => {}
                        1 => factors.push(var.into()),
                        _ => factors.push(alloc::format!("{var}^{e}")),
                    }
                }
                factors.join("*")
            })
            .collect();
        parts.push(alloc::format!("O(deg {})", self.n));
        parts.join(" + ")
    }
}

impl<R: Ring> PartialEq for BivarTrunc<R> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.agrees(other)
    }
}

/// Laurent series over a base ring as a ring handle; products and inverses
/// are computed to precision at most `cap`.
#[derive(Clone, Debug)]
pub struct LaurentRing<R: Ring> {
    base: R,
    cap: i64,
    var: &'static str,
}

impl<R: Ring> LaurentRing<R> {
    pub fn new(base: R, cap: i64, var: &'static str) -> Self {
        LaurentRing { base, cap, var }
    }
    pub fn base(&self) -> &R {
        &self.base
    }
    pub fn cap(&self) -> i64 {
        self.cap
    }
    pub fn var(&self) -> &'static str {
        self.var
    }
}

impl<R: Ring> Ring for LaurentRing<R> {
    type Elem = TruncSeries<R>;

    fn zero(&self) -> TruncSeries<R> {
        TruncSeries::zero(&self.base, UNBOUNDED)
    }
    fn one(&self) -> TruncSeries<R> {
        TruncSeries::one(&self.base)
    }
    fn from_i64(&self, n: i64) -> TruncSeries<R> {
        TruncSeries::constant(&self.base, self.base.from_i64(n))
    }
    fn add(&self, a: &TruncSeries<R>, b: &TruncSeries<R>) -> TruncSeries<R> {
        a.add(b)
    }
    fn neg(&self, a: &TruncSeries<R>) -> TruncSeries<R> {
        a.neg()
    }
    fn sub(&self, a: &TruncSeries<R>, b: &TruncSeries<R>) -> TruncSeries<R> {
        a.sub(b)
    }
    fn mul(&self, a: &TruncSeries<R>, b: &TruncSeries<R>) -> TruncSeries<R> {
        a.mul_cap(b, self.cap)
    }
    fn is_zero(&self, a: &TruncSeries<R>) -> bool {
        a.is_zero()
    }
    fn is_unit(&self, a: &TruncSeries<R>) -> bool {
        a.terms().any(|(_, c)| self.base.is_unit(c))
    }
    fn inv(&self, a: &TruncSeries<R>) -> Option<TruncSeries<R>> {
        a.inverse(self.cap).ok()
    }
    fn text(&self, a: &TruncSeries<R>) -> String {
        a.text(self.var)
    }
}
