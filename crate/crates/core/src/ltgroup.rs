//! Lubin-Tate formal group laws, their endomorphisms `[a]`, and torsion
//! polynomials, all determined by a Frobenius series `f`.
//!
//! Coefficient equations are solved degree by degree; each step divides by
//! `π - π^d`, losing one digit, so the solver runs with `N` guard digits and
//! reports results at the ring's precision. The coefficients of `f` (and any
//! `a` at full ring precision) are taken as exact representatives.

use alloc::string::String;
use alloc::vec::Vec;

use crate::arith::checked_pow;
use crate::error::{Error, Result};
use crate::localnum::{LocalInt, LocalRing, LocalRingDesc};
use crate::ring::Ring;
use crate::series::{BivarTrunc, TruncSeries, UNBOUNDED};
use crate::upoly;

/// Default total-degree cutoff.
pub const DEFAULT_N: u32 = 8;

/// `πX + X^q`, exact.
pub fn standard_series(ring: &LocalRing, pi: &LocalInt, q: u64) -> TruncSeries<LocalRing> {
    TruncSeries::from_terms(ring, [(1, pi.clone()), (q as i64, ring.one())], UNBOUNDED)
}

/// `(1 + X)^p - 1`, exact.
pub fn multiplicative_series(ring: &LocalRing) -> TruncSeries<LocalRing> {
    let p = ring.desc().p();
    let mut terms = Vec::new();
    let mut binom: i64 = 1;
    for k in 1..=p as i64 {
        binom = binom * (p as i64 - k + 1) / k;
        terms.push((k, ring.from_i64(binom)));
    }
    TruncSeries::from_terms(ring, terms, UNBOUNDED)
}

/// A Frobenius series together with its formal group law.
#[derive(Clone, Debug)]
pub struct LTData {
    ring: LocalRing,
    work: LocalRing,
    q: u64,
    pi: LocalInt,
    f: TruncSeries<LocalRing>,
    f_work: TruncSeries<LocalRing>,
    n: u32,
    law: BivarTrunc<LocalRing>,
}

impl LTData {
    /// Checks `f ≡ πX mod deg 2`, `f ≡ X^q mod π` and solves for the group
    /// law to total degree `< n`.
    pub fn new(f: &TruncSeries<LocalRing>, n: u32) -> Result<Self> {
        let ring = f.ring().clone();
        let desc = ring.desc().clone();
        let q = checked_pow(desc.p(), desc.f() as u32).ok_or(Error::FieldTooLarge { p: desc.p(), m: desc.f() as u32 })?;
        if f.terms().any(|(e, _)| e <= 0) {
            return Err(Error::NotLubinTate("nonzero constant term"));
        }
        let pi = f.coeff(1);
        if pi.valuation() != 1 || pi.prec() <= 1 {
            return Err(Error::NotLubinTate("linear coefficient is not a uniformizer"));
        }
        let visible = f.prec().min(UNBOUNDED);
        for (e, c) in f.terms() {
            if e < 2 || e >= visible {
                continue;
            }
            let ok = if e as u64 == q { c.sub(&ring.one()).valuation() >= 1 } else { c.valuation() >= 1 };
            if !ok {
                return Err(Error::NotLubinTate("not congruent to X^q modulo π"));
            }
        }
        if (q as i64) < visible && f.coeff(q as i64).is_zero() {
            return Err(Error::NotLubinTate("not congruent to X^q modulo π"));
        }
        if f.prec() < n as i64 {
            return Err(Error::Precision { needed: n as i64, available: f.prec() });
        }
        let work_desc = desc.with_precision(desc.precision() as u32 + n)?;
        let work = LocalRing(work_desc.clone());
        let f_work = f.try_map_coeffs(&work, |c| c.rebase(&work_desc, true))?;
        let mut data = LTData { ring, work, q, pi, f: f.clone(), f_work, n, law: BivarTrunc::zero(&LocalRing(desc), n) };
        data.law = data.solve_law()?;
        Ok(data)
    }

    pub fn ring(&self) -> &LocalRing {
        &self.ring
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn uniformizer(&self) -> &LocalInt {
        &self.pi
    }
    pub fn frobenius_series(&self) -> &TruncSeries<LocalRing> {
        &self.f
    }
    pub fn cutoff(&self) -> u32 {
        self.n
    }
    /// The group law `F(X, Y)` modulo total degree `N`.
    pub fn group_law(&self) -> &BivarTrunc<LocalRing> {
        &self.law
    }

    fn pi_work(&self) -> LocalInt {
        self.f_work.coeff(1)
    }

    /// `π - π^d` in the working ring.
    fn divisor(&self, d: u32) -> LocalInt {
        let pi = self.pi_work();
        pi.sub(&pi.pow(d as u64))
    }

    fn to_user(&self, c: &LocalInt, prec: i64) -> Result<LocalInt> {
        Ok(c.rebase(self.ring.desc(), false)?.truncate(prec))
    }

    fn solve_law(&self) -> Result<BivarTrunc<LocalRing>> {
        let w = &self.work;
        let mut terms: Vec<((u32, u32), LocalInt)> = Vec::new();
        if self.n > 1 {
            terms.push(((1, 0), w.one()));
            terms.push(((0, 1), w.one()));
        }
        for d in 2..self.n {
            let cur = BivarTrunc::from_terms(w, terms.iter().cloned(), d + 1);
            let fx = BivarTrunc::from_univariate_x(&self.f_work, d + 1)?;
            let lhs = BivarTrunc::apply(&self.f_work, &cur)?;
            let rhs = cur.compose(&fx, &fx.swap())?;
            let divisor = self.divisor(d);
            for (key, c) in rhs.sub(&lhs).homogeneous(d) {
                terms.push((key, solve_step(&c, &divisor, d)?));
            }
        }
        let user = self.ring.clone();
        let mut out = Vec::with_capacity(terms.len());
        for (key, c) in terms {
            out.push((key, self.to_user(&c, UNBOUNDED)?));
        }
        Ok(BivarTrunc::from_terms(&user, out, self.n))
    }
}

/// `c / (π - π^d)`; the numerator must vanish modulo `π`.
fn solve_step(c: &LocalInt, divisor: &LocalInt, d: u32) -> Result<LocalInt> {
    if c.prec() < 1 {
        return Err(Error::Precision { needed: 1, available: c.prec() });
    }
    if c.valuation() < 1 {
        return Err(Error::Obstruction { degree: d as i64 });
    }
    c.div(divisor)
}

/// The group law attached to `f`, to total degree `< n`.
pub fn group_law(f: &TruncSeries<LocalRing>, n: u32) -> Result<BivarTrunc<LocalRing>> {
    Ok(LTData::new(f, n)?.law)
}

/// `f^{∘n} / f^{∘(n-1)}`, whose roots are the torsion points of exact level `n`.
#[derive(Clone, Debug)]
pub struct TorsionPolynomial {
    pub level: u32,
    /// Coefficients, lowest degree first, at the ring's precision.
    pub coeffs: Vec<LocalInt>,
    pub eisenstein: bool,
}

impl TorsionPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn text(&self) -> String {
        let Some(first) = self.coeffs.first() else {
            return "0".into();
        };
        let ring = LocalRing(first.desc().clone());
        TruncSeries::from_coeffs(&ring, 0, self.coeffs.clone(), UNBOUNDED).text("X")
    }
}

impl LTData {
    /// `[a](X)` to degree `< N`. The coefficient of `X^d` is known to
    /// `prec(a) - (d - 1)` unless `a` carries full ring precision.
    pub fn lt_mul(&self, a: &LocalInt) -> Result<TruncSeries<LocalRing>> {
        if a.desc() != self.ring.desc() {
            return Err(Error::RingMismatch);
        }
        let exact = a.is_full_precision();
        let n = self.n as i64;
        let bound = |d: i64| if exact { UNBOUNDED } else { a.prec() - (d - 1) };
        if n > 1 && bound(n - 1) < 1 {
            return Err(Error::Precision { needed: n - 1, available: a.prec() });
        }
        let w = &self.work;
        let aw = a.rebase(w.desc(), true)?;
        if a.is_zero() {
            return Ok(TruncSeries::zero(&self.ring, n));
        }
        let mut terms: Vec<(i64, LocalInt)> = alloc::vec![(1, aw)];
        for d in 2..n {
            let g = TruncSeries::from_terms(w, terms.iter().cloned(), d + 1);
            let lhs = g.compose(&self.f_work, d + 1)?;
            let rhs = self.f_work.compose(&g, d + 1)?;
            let c = lhs.coeff(d).sub(&rhs.coeff(d));
            terms.push((d, solve_step(&c, &self.divisor(d as u32), d as u32)?));
        }
        let mut out = Vec::with_capacity(terms.len());
        for (d, c) in terms {
            out.push((d, self.to_user(&c, bound(d))?));
        }
        Ok(TruncSeries::from_terms(&self.ring, out, n))
    }

    /// Requires `f` to be an exact polynomial.
    pub fn torsion_polynomial(&self, level: u32) -> Result<TorsionPolynomial> {
        if !self.f.is_exact() {
            return Err(Error::NotPolynomial);
        }
        if level == 0 {
            return Err(Error::ZeroDegree);
        }
        let w = &self.work;
        let mut prev = TruncSeries::var(w);
        let mut cur = self.f_work.clone();
        for _ in 1..level {
            let next = self.f_work.compose(&cur, UNBOUNDED)?;
            prev = core::mem::replace(&mut cur, next);
        }
        let dense = |s: &TruncSeries<LocalRing>| -> Vec<LocalInt> {
            let deg = s.degree().unwrap_or(0) as usize;
            (0..=deg).map(|e| s.coeff(e as i64)).collect()
        };
        let (quot, rem) = upoly::divrem(w, &dense(&cur), &dense(&prev))
            .ok_or(Error::NotLubinTate("leading coefficient of f is not a unit"))?;
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::Inconsistent("iterate not divisible by the previous one".into()));
        }
        let coeffs = quot.iter().map(|c| self.to_user(c, UNBOUNDED)).collect::<Result<Vec<_>>>()?;
        let eisenstein = is_eisenstein(&coeffs);
        Ok(TorsionPolynomial { level, coeffs, eisenstein })
    }
}

/// Monic, lower coefficients in `(π)`, constant term of valuation one.
pub fn is_eisenstein(coeffs: &[LocalInt]) -> bool {
    let Some((lead, rest)) = coeffs.split_last() else {
        return false;
    };
    if rest.is_empty() {
        return false;
    }
    let one = LocalInt::one(lead.desc());
    lead.eq_at_precision(&one) && rest.iter().all(|c| c.valuation() >= 1) && rest[0].valuation() == 1
}

/// A ring for Frobenius series built from `(p, r)` at precision `m`:
/// `W(F_{p^r})` modulo `p^m`.
pub fn unramified_ring(p: u64, r: u32, m: u32) -> Result<LocalRing> {
    let residue = crate::fields::make_field(p, r)?;
    Ok(LocalRing(LocalRingDesc::unramified(&residue, m)?))
}


#[cfg(test)]
mod tests {
    use super::*;

    fn mult(p: u64, n: u32) -> LTData {
        let ring = unramified_ring(p, 1, 6).unwrap();
        LTData::new(&multiplicative_series(&ring), n).unwrap()
    }

    fn standard(p: u64, r: u32, n: u32) -> LTData {
        let ring = unramified_ring(p, r, 6).unwrap();
        let pi = ring.from_i64(p as i64);
        let q = checked_pow(p, r).unwrap();
        LTData::new(&standard_series(&ring, &pi, q), n).unwrap()
    }

    #[test]
    fn multiplicative_law_is_x_plus_y_plus_xy() {
        for p in [2, 3, 5] {
            assert_eq!(mult(p, 4).group_law().text(), "X + Y + X*Y + O(deg 4)");
        }
    }

    #[test]
    fn standard_law_at_n2() {
        assert_eq!(standard(3, 1, 2).group_law().text(), "X + Y + O(deg 2)");
    }

    #[test]
    fn two_x_plus_x_squared() {
        let ring = unramified_ring(2, 1, 6).unwrap();
        let f = TruncSeries::from_terms(&ring, [(1, ring.from_i64(2)), (2, ring.one())], UNBOUNDED);
        let lt = LTData::new(&f, 3).unwrap();
        assert_eq!(lt.group_law().text(), "X + Y + X*Y + O(deg 3)");
    }

    #[test]
    fn rejects_bad_series() {
        let ring = unramified_ring(3, 1, 6).unwrap();
        let not_uniformizer = TruncSeries::from_terms(&ring, [(1, ring.from_i64(9)), (3, ring.one())], UNBOUNDED);
        assert!(matches!(LTData::new(&not_uniformizer, 4), Err(Error::NotLubinTate(_))));
        let wrong_power = TruncSeries::from_terms(&ring, [(1, ring.from_i64(3)), (2, ring.one())], UNBOUNDED);
        assert!(matches!(LTData::new(&wrong_power, 4), Err(Error::NotLubinTate(_))));
        // multiplicative series over F_4 residue: X^p is not X^q
        let ring4 = unramified_ring(2, 2, 6).unwrap();
        assert!(matches!(LTData::new(&multiplicative_series(&ring4), 4), Err(Error::NotLubinTate(_))));
    }

    #[test]
    fn endomorphisms_of_one_and_pi() {
        let lt = standard(3, 1, 8);
        let one = lt.lt_mul(&lt.ring().one()).unwrap();
        assert!(one.agrees(&TruncSeries::var(lt.ring())));
        let pi = lt.lt_mul(lt.uniformizer()).unwrap();
        assert!(pi.agrees(lt.frobenius_series()));
    }

    #[test]
    fn torsion_polynomials() {
        let lt = standard(3, 1, 4);
        let t = lt.torsion_polynomial(1).unwrap();
        assert_eq!(t.degree(), 2);
        assert!(t.eisenstein);
        assert_eq!(t.text(), "[0,1] + X^2*[1]");
        let m = mult(5, 4).torsion_polynomial(1).unwrap();
        assert_eq!(m.degree(), 4);
        assert!(m.eisenstein);
        assert!(m.coeffs[0].eq_at_precision(&LocalInt::from_int(m.coeffs[0].desc(), 5)));
        let ring = unramified_ring(2, 1, 6).unwrap();
        let f = TruncSeries::from_terms(&ring, [(1, ring.from_i64(2)), (2, ring.one())], UNBOUNDED);
        let t2 = LTData::new(&f, 3).unwrap().torsion_polynomial(2).unwrap();
        assert_eq!(t2.degree(), 2);
        assert_eq!(t2.coeffs[0].valuation(), 1);
    }
}
