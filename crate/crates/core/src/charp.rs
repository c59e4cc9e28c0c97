//! The characteristic-p layer: the norm field `k_K((u))` with its
//! Frobenius and Γ-actions, étale (φ,Γ)-modules over it, the functor V by
//! semilinear solving, and the functor D by finite Hilbert 90 descent.
//!
//! Conventions: a module is given by `A` (φ) and `G_γ` (one per Γ
//! generator) acting on coordinates as `x -> A φ(x)` and `x -> G γ(x)`. They
//! commute iff `G γ(A) = A φ(G)`. `V` consists of the solutions of
//! `φ(x) = A x`.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::arith::{checked_pow, SplitMix64};
use crate::error::{Error, Result};
use crate::fields::{elements, splitting_field, Embedding, FieldDesc, FieldElem, FiniteField};
use crate::localnum::LocalInt;
use crate::ltgroup::LTData;
use crate::matrix::{self, Mat};
use crate::ring::Ring;
use crate::semilinear::{solve_semilinear_const, SemilinearSolution};
use crate::series::{LaurentRing, TruncSeries};

/// Rings with a Frobenius iterate and finitely many Γ generators.
pub trait DifferenceRing: Ring {
    fn phi(&self, x: &Self::Elem) -> Result<Self::Elem>;
    fn gamma(&self, index: usize, x: &Self::Elem) -> Result<Self::Elem>;
    fn gamma_count(&self) -> usize;
}

/// `x -> x^(p^e)` on a finite field; Γ acts trivially on constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constants {
    pub field: FiniteField,
    pub e: u32,
}

impl Constants {
    pub fn new(field: &Arc<FieldDesc>, e: u32) -> Self {
        Constants { field: FiniteField(field.clone()), e }
    }
}

impl Ring for Constants {
    type Elem = FieldElem;

    fn zero(&self) -> FieldElem {
        self.field.zero()
    }
    fn one(&self) -> FieldElem {
        self.field.one()
    }
    fn from_i64(&self, n: i64) -> FieldElem {
        self.field.from_i64(n)
    }
    fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        a.add(b)
    }
    fn neg(&self, a: &FieldElem) -> FieldElem {
        a.neg()
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
}

impl DifferenceRing for Constants {
    fn phi(&self, x: &FieldElem) -> Result<FieldElem> {
        Ok(x.frobenius(self.e as u64))
    }
    fn gamma(&self, _: usize, x: &FieldElem) -> Result<FieldElem> {
        Ok(x.clone())
    }
    fn gamma_count(&self) -> usize {
        0
    }
}

/// A Γ generator: `c = χ(γ) ∈ O_F^×` and `[c](u) mod π` over `k_K`.
#[derive(Clone, Debug)]
pub struct GammaGen {
    pub c: LocalInt,
    pub series: TruncSeries<FiniteField>,
}

/// `k_K((u))` with `φ^{rs}` (the `q`-power map) and Γ acting through `[c](u)`.
#[derive(Clone, Debug)]
pub struct NormField {
    residue: Arc<FieldDesc>,
    /// `q = p^e` is the Frobenius iterate acting.
    e: u32,
    /// Exponent cutoff for products, inverses and substitutions.
    cap: i64,
    gammas: Vec<GammaGen>,
    laurent: LaurentRing<FiniteField>,
}

/// Reduction of `[c](u)` modulo `π`, moved into `k_K`.
pub fn reduced_endomorphism(c: &LocalInt, lt: &LTData, residue: &Arc<FieldDesc>) -> Result<TruncSeries<FiniteField>> {
    let series = lt.lt_mul(c)?;
    let emb = Embedding::new(lt.ring().desc().residue(), residue)?;
    let target = FiniteField(residue.clone());
    let reduced = series.try_map_coeffs(&target, |x| emb.apply(&x.reduce()))?;
    let known = series.terms().map(|(_, x)| x.prec()).min().unwrap_or(1);
    if known < 1 {
        return Err(Error::Precision { needed: 1, available: known });
    }
    Ok(reduced)
}

/// A generator of `k^×`: the least index of full multiplicative order.
pub fn primitive_element(desc: &Arc<FieldDesc>) -> Result<FieldElem> {
    let order = desc.order().ok_or(Error::FieldTooLarge { p: desc.p(), m: desc.degree() })?;
    let n = order - 1;
    let primes = crate::arith::prime_factors(n);
    elements(desc)
        .skip(1)
        .find(|x| primes.iter().all(|&l| !x.pow(n / l).is_one()))
        .ok_or_else(|| Error::Inconsistent("no primitive element".into()))
}

/// The default Γ generators: the Teichmüller lift of a generator of `k_F^×`
/// (omitted when `k_F = F_2`) and `1 + π`.
pub fn default_gamma_values(lt: &LTData) -> Result<Vec<LocalInt>> {
    let desc = lt.ring().desc();
    let mut out = Vec::new();
    let g = primitive_element(desc.residue())?;
    if !g.is_one() {
        out.push(LocalInt::teichmuller(desc, &g));
    }
    out.push(lt.ring().one().add(lt.uniformizer()));
    Ok(out)
}

impl NormField {
    /// `k_K((u))` for `k_K ⊇ k_F`, with Γ generated by `gamma_values`.
    pub fn new(lt: &LTData, residue: &Arc<FieldDesc>, gamma_values: &[LocalInt]) -> Result<Self> {
        let kf = lt.ring().desc().residue();
        if residue.p() != kf.p() || residue.degree() % kf.degree() != 0 {
            return Err(Error::RingMismatch);
        }
        let cap = lt.cutoff() as i64;
        let mut gammas = Vec::new();
        for c in gamma_values {
            if !c.is_unit() {
                return Err(Error::NotUnit);
            }
            gammas.push(GammaGen { c: c.clone(), series: reduced_endomorphism(c, lt, residue)? });
        }
        Ok(NormField {
            residue: residue.clone(),
            e: residue.degree(),
            cap,
            gammas,
            laurent: LaurentRing::new(FiniteField(residue.clone()), cap, "u"),
        })
    }

    pub fn residue(&self) -> &Arc<FieldDesc> {
        &self.residue
    }
    pub fn q(&self) -> u64 {
        checked_pow(self.residue.p(), self.e).unwrap_or(u64::MAX)
    }
    pub fn frobenius_exponent(&self) -> u32 {
        self.e
    }
    pub fn cap(&self) -> i64 {
        self.cap
    }
    pub fn gammas(&self) -> &[GammaGen] {
        &self.gammas
    }
    pub fn coefficients(&self) -> FiniteField {
        FiniteField(self.residue.clone())
    }

    /// `u`, exact.
    pub fn u(&self) -> TruncSeries<FiniteField> {
        TruncSeries::var(&self.coefficients())
    }

    /// The `q`-power map `sum a_j u^j -> sum a_j^q u^(qj)`; exact.
    pub fn q_power(&self, x: &TruncSeries<FiniteField>) -> TruncSeries<FiniteField> {
        q_power(x, self.e)
    }
}

/// `sum a_j u^j -> sum a_j^(p^e) u^(p^e j)`, precision multiplied by `p^e`.
pub fn q_power(x: &TruncSeries<FiniteField>, e: u32) -> TruncSeries<FiniteField> {
    let ring = x.ring().clone();
    let q = checked_pow(ring.desc().p(), e).expect("Frobenius exponent fits") as i64;
    let prec = if x.is_exact() { x.prec() } else { x.prec().saturating_mul(q) };
    TruncSeries::from_terms(&ring, x.terms().map(|(j, a)| (j * q, a.frobenius(e as u64))), prec)
}

/// `x(u -> [c](u) mod π)`.
pub fn gamma_action(c: &LocalInt, x: &TruncSeries<FiniteField>, lt: &LTData) -> Result<TruncSeries<FiniteField>> {
    if !c.is_unit() {
        return Err(Error::NotUnit);
    }
    let g = reduced_endomorphism(c, lt, x.ring().desc())?;
    x.substitute(&g, g.prec())
}

impl Ring for NormField {
    type Elem = TruncSeries<FiniteField>;

    fn zero(&self) -> Self::Elem {
        self.laurent.zero()
    }
    fn one(&self) -> Self::Elem {
        self.laurent.one()
    }
    fn from_i64(&self, n: i64) -> Self::Elem {
        self.laurent.from_i64(n)
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.laurent.add(a, b)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.laurent.neg(a)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.laurent.mul(a, b)
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.laurent.is_zero(a)
    }
    fn is_unit(&self, a: &Self::Elem) -> bool {
        self.laurent.is_unit(a)
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        self.laurent.inv(a)
    }
    fn text(&self, a: &Self::Elem) -> String {
        self.laurent.text(a)
    }
}

impl DifferenceRing for NormField {
    fn phi(&self, x: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.q_power(x))
    }
    fn gamma(&self, index: usize, x: &Self::Elem) -> Result<Self::Elem> {
        let g = &self.gammas.get(index).ok_or(Error::DimensionMismatch)?.series;
        x.substitute(g, g.prec().min(self.cap))
    }
    fn gamma_count(&self) -> usize {
        self.gammas.len()
    }
}

/// A free module with `φ`-matrix and one matrix per Γ generator of its base.
#[derive(Clone, Debug)]
pub struct PhiGammaModule<B: DifferenceRing> {
    pub base: B,
    pub phi: Mat<B::Elem>,
    pub gammas: Vec<Mat<B::Elem>>,
}

impl<B: DifferenceRing> PhiGammaModule<B> {
    pub fn new(base: B, phi: Mat<B::Elem>, gammas: Vec<Mat<B::Elem>>) -> Result<Self> {
        if !phi.is_square() || gammas.iter().any(|g| g.rows() != phi.rows() || !g.is_square()) {
            return Err(Error::DimensionMismatch);
        }
        if gammas.len() != base.gamma_count() {
            return Err(Error::DimensionMismatch);
        }
        Ok(PhiGammaModule { base, phi, gammas })
    }

    /// The module with trivial Γ-matrices.
    pub fn with_trivial_gamma(base: B, phi: Mat<B::Elem>) -> Result<Self> {
        let id = matrix::identity(&base, phi.rows());
        let gammas = (0..base.gamma_count()).map(|_| id.clone()).collect();
        Self::new(base, phi, gammas)
    }

    pub fn rank(&self) -> usize {
        self.phi.rows()
    }
}

/// Outcome of checking the étale (φ,Γ)-module identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EtaleReport {
    Certificate { identities: usize },
    Violation { identity: String, indices: Vec<usize> },
}

impl EtaleReport {
    pub fn is_certificate(&self) -> bool {
        matches!(self, EtaleReport::Certificate { .. })
    }
}

fn apply_entrywise<B: DifferenceRing>(m: &Mat<B::Elem>, f: impl Fn(&B::Elem) -> Result<B::Elem>) -> Result<Mat<B::Elem>> {
    m.try_map(f)
}

/// Checks `det A` a unit, each `G` invertible with `G γ(A) = A φ(G)`, and
/// `G_i γ_i(G_j) = G_j γ_j(G_i)`, stopping at the first violation.
pub fn check_etale_phigamma<B: DifferenceRing>(m: &PhiGammaModule<B>) -> EtaleReport {
    let ring = &m.base;
    let violation = |identity: &str, indices: Vec<usize>| EtaleReport::Violation { identity: identity.into(), indices };
    let unit_det = |a: &Mat<B::Elem>| matrix::det(ring, a).map(|d| ring.is_unit(&d)).unwrap_or(false);
    if !unit_det(&m.phi) {
        return violation("not étale", Vec::new());
    }
    let mut count = 1;
    for (i, g) in m.gammas.iter().enumerate() {
        if !unit_det(g) {
            return violation("γ-matrix not invertible", alloc::vec![i]);
        }
        let lhs = apply_entrywise::<B>(&m.phi, |x| ring.gamma(i, x)).and_then(|ga| matrix::mul(ring, g, &ga));
        let rhs = apply_entrywise::<B>(g, |x| ring.phi(x)).and_then(|pg| matrix::mul(ring, &m.phi, &pg));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) if matrix::equal(ring, &l, &r) => count += 2,
            _ => return violation("G γ(A) = A φ(G)", alloc::vec![i]),
        }
    }
    for i in 0..m.gammas.len() {
        for j in i + 1..m.gammas.len() {
            let lhs = apply_entrywise::<B>(&m.gammas[j], |x| ring.gamma(i, x)).and_then(|x| matrix::mul(ring, &m.gammas[i], &x));
            let rhs = apply_entrywise::<B>(&m.gammas[i], |x| ring.gamma(j, x)).and_then(|x| matrix::mul(ring, &m.gammas[j], &x));
            match (lhs, rhs) {
                (Ok(l), Ok(r)) if matrix::equal(ring, &l, &r) => count += 1,
                _ => return violation("G_i γ_i(G_j) = G_j γ_j(G_i)", alloc::vec![i, j]),
            }
        }
    }
    EtaleReport::Certificate { identities: count }
}

/// `V` in constant mode: solutions of `x^(p^e) = A x`.
pub fn functor_v_const(a: &Mat<FieldElem>, e: u32) -> Result<SemilinearSolution> {
    solve_semilinear_const(a, e)
}

/// `V` in series mode: solutions in `k'[[u]]` modulo `u^n`.
#[derive(Clone, Debug)]
pub struct SeriesSolution {
    pub field: Arc<FieldDesc>,
    pub e: u32,
    pub basis: Vec<Vec<TruncSeries<FiniteField>>>,
    /// The constant terms, a basis of the mode-zero problem.
    pub leading: SemilinearSolution,
}

/// Solves `φ(x) = A x` for `A` over `k[[u]]`, degree by degree from a basis of
/// the constant-term problem; `A(0)` must be invertible.
pub fn functor_v_series(a: &Mat<TruncSeries<FiniteField>>, e: u32, n: i64) -> Result<SeriesSolution> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch);
    }
    let d = a.rows();
    if a.entries().iter().any(|x| x.valuation().is_some_and(|v| v < 0)) {
        return Err(Error::Unsupported("series mode needs entries in k[[u]]".into()));
    }
    let known = a.entries().iter().map(|x| x.prec()).min().unwrap_or(n);
    if known < n {
        return Err(Error::Precision { needed: n, available: known });
    }
    let coeff_mat = |j: i64| a.map(|x| x.coeff(j));
    let a0 = coeff_mat(0);
    let base = FiniteField(a0.get(0, 0).desc().clone());
    if matrix::inverse(&base, &a0).is_none() {
        return Err(Error::Obstruction { degree: 0 });
    }
    let leading = solve_semilinear_const(&a0, e)?;
    let field = leading.field.clone();
    let ring = FiniteField(field.clone());
    let emb = Embedding::new(base.desc(), &field)?;
    let mats: Vec<Mat<FieldElem>> = (0..n).map(|j| coeff_mat(j).try_map(|x| emb.apply(x))).collect::<Result<_>>()?;
    let a0_inv = matrix::inverse(&ring, &mats[0]).ok_or(Error::Obstruction { degree: 0 })?;
    let q = checked_pow(field.p(), e).ok_or(Error::FieldTooLarge { p: field.p(), m: e })? as i64;
    let mut basis = Vec::with_capacity(d);
    for x0 in &leading.basis {
        let mut digits: Vec<Vec<FieldElem>> = alloc::vec![x0.clone()];
        for j in 1..n {
            let mut rhs = if j % q == 0 {
                digits[(j / q) as usize].iter().map(|c| c.frobenius(e as u64)).collect()
            } else {
                alloc::vec![FieldElem::zero(&field); d]
            };
            for i in 1..=j {
                let t = matrix::mul_vec(&ring, &mats[i as usize], &digits[(j - i) as usize])?;
                rhs = rhs.iter().zip(&t).map(|(r, s)| r.sub(s)).collect();
            }
            digits.push(matrix::mul_vec(&ring, &a0_inv, &rhs)?);
        }
        let vec = (0..d)
            .map(|k| TruncSeries::from_terms(&ring, digits.iter().enumerate().map(|(j, v)| (j as i64, v[k].clone())), n))
            .collect();
        basis.push(vec);
    }
    Ok(SeriesSolution { field, e, basis, leading })
}

fn frob_mat(m: &Mat<FieldElem>, e: u64) -> Mat<FieldElem> {
    m.map(|x| x.frobenius(e))
}

/// `C σ(C) ... σ^(n-1)(C)` for `σ = (p^e)`-power.
pub fn cocycle_norm(c: &Mat<FieldElem>, e: u32, n: u32) -> Result<Mat<FieldElem>> {
    let ring = FiniteField(c.get(0, 0).desc().clone());
    let mut acc = matrix::identity(&ring, c.rows());
    let mut twisted = c.clone();
    for _ in 0..n {
        acc = matrix::mul(&ring, &acc, &twisted)?;
        twisted = frob_mat(&twisted, e as u64);
    }
    Ok(acc)
}

/// Finite Hilbert 90: `B` with `B^{-1} σ(B) = C` for a cocycle `C` of the
/// cyclic group generated by `σ = (p^e)`-power, of order `n` on `C`'s field.
pub fn hilbert90(c: &Mat<FieldElem>, e: u32, n: u32) -> Result<Mat<FieldElem>> {
    if !c.is_square() {
        return Err(Error::DimensionMismatch);
    }
    let desc = c.get(0, 0).desc().clone();
    let ring = FiniteField(desc.clone());
    if (e as u64 * n as u64) % desc.degree() as u64 != 0 {
        return Err(Error::NotRepresentation);
    }
    if !matrix::is_identity(&ring, &cocycle_norm(c, e, n)?) {
        return Err(Error::NotRepresentation);
    }
    let d = c.rows();
    // partial products P_i = C σ(C) ... σ^(i-1)(C)
    let mut partial = Vec::with_capacity(n as usize);
    let mut acc = matrix::identity(&ring, d);
    let mut twisted = c.clone();
    for _ in 0..n {
        partial.push(acc.clone());
        acc = matrix::mul(&ring, &acc, &twisted)?;
        twisted = frob_mat(&twisted, e as u64);
    }
    let mut rng = SplitMix64::new(0x4890);
    let order = desc.order().unwrap_or(u64::MAX);
    for attempt in 0..4096u32 {
        let z = if attempt == 0 {
            matrix::identity(&ring, d)
        } else {
            Mat::from_fn(d, d, |_, _| FieldElem::from_index(&desc, rng.below(order)))
        };
        // b = sum P_i σ^i(Z) satisfies C σ(b) = b
        let mut b = matrix::zeros(&ring, d, d);
        let mut zi = z;
        for p in &partial {
            b = matrix::add(&ring, &b, &matrix::mul(&ring, p, &zi)?)?;
            zi = frob_mat(&zi, e as u64);
        }
        if let Some(inv) = matrix::inverse(&ring, &b) {
            return Ok(inv);
        }
    }
    Err(Error::Inconsistent("no invertible Hilbert 90 average found".into()))
}

/// Output of `D` at finite unramified level.
#[derive(Clone, Debug)]
pub struct Descent {
    pub module: PhiGammaModule<Constants>,
    /// `B` over `k'` with `B^{-1} σ(B) = C`.
    pub trivializer: Mat<FieldElem>,
    pub extension: Arc<FieldDesc>,
    /// Set when `C` is a cocycle not fixed by `σ`: a twisted form of the
    /// trivial representation, which descends to the trivial module.
    pub twisted: bool,
}

/// `D` for the representation of `Gal(k'/k_K)`, `[k':k_K] = n`, whose
/// generator (the `|k_K|`-power map) acts on `k'^d` by `x -> C σ(x)`.
pub fn functor_d_unramified(c: &Mat<FieldElem>, residue: &Arc<FieldDesc>, n: u32) -> Result<Descent> {
    if n == 0 {
        return Err(Error::ZeroDegree);
    }
    let e = residue.degree();
    let src = c.entries().first().ok_or(Error::DimensionMismatch)?.desc().clone();
    let extension = if src.degree() == e * n { src.clone() } else { splitting_field(residue.p(), e * n)? };
    let c = if src.same_field(&extension) {
        c.clone()
    } else {
        let emb = Embedding::new(&src, &extension)?;
        c.try_map(|x| emb.apply(x))?
    };
    let b = hilbert90(&c, e, n)?;
    let ring = FiniteField(extension.clone());
    let constants = Constants::new(residue, e);
    let twisted = !matrix::equal(&ring, &frob_mat(&c, e as u64), &c);
    let phi = if twisted {
        matrix::identity(&constants, c.rows())
    } else {
        let b_inv = matrix::inverse(&ring, &b).ok_or(Error::NotEtale)?;
        let a = matrix::mul(&ring, &matrix::mul(&ring, &b, &c)?, &b_inv)?;
        let down = Embedding::new(residue, &extension)?;
        a.try_map(|x| down.preimage(x).ok_or_else(|| Error::Inconsistent("descended matrix not over k_K".into())))?
    };
    let module = PhiGammaModule::new(constants, phi, Vec::new())?;
    Ok(Descent { module, trivializer: b, extension, twisted })
}

/// The matrix of the `|k_K|`-power map on a basis of `V`, over `k_K`.
pub fn galois_matrix(sol: &SemilinearSolution, residue: &Arc<FieldDesc>) -> Result<Mat<FieldElem>> {
    let ring = FiniteField(sol.field.clone());
    let x = sol.basis_matrix();
    let x_inv = matrix::inverse(&ring, &x).ok_or_else(|| Error::Inconsistent("solutions not independent".into()))?;
    let r = matrix::mul(&ring, &x_inv, &matrix::mul(&ring, &sol.matrix, &x)?)?;
    let down = Embedding::new(residue, &sol.field)?;
    r.try_map(|v| down.preimage(v).ok_or_else(|| Error::Inconsistent("Galois matrix not over k_K".into())))
}

/// An invertible `P` over the entries' field with `P a = b P`, searching the
/// `F_p`-solution space of the linear condition.
pub fn conjugating_matrix(a: &Mat<FieldElem>, b: &Mat<FieldElem>) -> Result<Option<Mat<FieldElem>>> {
    if !a.is_square() || a.rows() != b.rows() {
        return Err(Error::DimensionMismatch);
    }
    let desc = a.get(0, 0).desc().clone();
    let ring = FiniteField(desc.clone());
    let d = a.rows();
    let m = desc.degree() as usize;
    let p = desc.p();
    let unknowns = d * d * m;
    let unit = |idx: usize| -> Mat<FieldElem> {
        let (cell, k) = (idx / m, idx % m);
        let mut coeffs = alloc::vec![0u64; m];
        coeffs[k] = 1;
        let mut z = matrix::zeros(&ring, d, d);
        z.set(cell / d, cell % d, FieldElem::from_coeffs(&desc, &coeffs).expect("length m"));
        z
    };
    let mut columns: Vec<Vec<u64>> = Vec::with_capacity(unknowns);
    for idx in 0..unknowns {
        let z = unit(idx);
        let img = matrix::sub(&ring, &matrix::mul(&ring, &z, a)?, &matrix::mul(&ring, b, &z)?)?;
        columns.push(img.entries().iter().flat_map(|x| x.coeffs().to_vec()).collect());
    }
    let rows: Vec<Vec<u64>> = (0..unknowns).map(|r| columns.iter().map(|c| c[r]).collect()).collect();
    let kernel = crate::fplin::kernel(&rows, unknowns, p);
    let combine = |weights: &[u64]| -> Mat<FieldElem> {
        let mut acc = alloc::vec![0u64; unknowns];
        for (w, v) in weights.iter().zip(&kernel) {
            for (slot, x) in acc.iter_mut().zip(v) {
                *slot = (*slot + w * x) % p;
            }
        }
        Mat::from_fn(d, d, |i, j| {
            let start = (i * d + j) * m;
            FieldElem::from_coeffs(&desc, &acc[start..start + m]).expect("length m")
        })
    };
    let total = checked_pow(p, kernel.len() as u32).filter(|&t| t <= 1 << 20);
    let mut rng = SplitMix64::new(0xc0de);
    let tries = total.unwrap_or(1 << 16);
    for idx in 0..tries {
        let weights: Vec<u64> = match total {
            Some(_) => {
                let mut rest = idx;
                (0..kernel.len())
                    .map(|_| {
                        let w = rest % p;
                        rest /= p;
                        w
                    })
                    .collect()
            }
            None => (0..kernel.len()).map(|_| rng.below(p)).collect(),
        };
        let cand = combine(&weights);
        if matrix::inverse(&ring, &cand).is_some() {
            return Ok(Some(cand));
        }
    }
    Ok(None)
}
