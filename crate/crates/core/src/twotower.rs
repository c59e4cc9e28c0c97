//! The doubly indexed rings `𝔼_{π,ϖ,i}` and `𝔸_{π,ϖ,i}` at desk scale:
//! bivariate truncated polynomials in `x` (π-side) and `y` (ϖ-side) with all
//! constants written on the `y` side, the partial Frobenii, projective-limit
//! reconstruction and the comparison functors in constant mode.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::charp::{conjugating_matrix, functor_d_unramified, functor_v_const, galois_matrix, Constants, DifferenceRing};
use crate::error::{Error, Result};
use crate::fields::{splitting_field, FieldDesc, FieldElem, FiniteField};
use crate::lift0::{functor_v_lift, CoeffRing};
use crate::localnum::{Extension, LocalInt, LocalRing, LocalRingDesc};
use crate::ltgroup::LTData;
use crate::matrix::{self, Mat};
use crate::ring::Ring;
use crate::series::{BivarTrunc, TruncSeries};

/// Constants of the two-tower rings: `k̄` truncated to a finite field, or
/// `W(k̄) ⊗ O_K` truncated to an unramified extension of `O_K`.
pub trait TwistConstants: Ring {
    /// `σ^k`, `σ` the `|k_K|`-power Frobenius.
    fn sigma(&self, x: &Self::Elem, k: i64) -> Result<Self::Elem>;
    /// Uniformizer-adic digits carried (1 in characteristic `p`).
    fn depth(&self) -> usize;
    /// The multiplicative representative of `x` modulo the uniformizer.
    fn leading(&self, x: &Self::Elem) -> Self::Elem;
    /// Whether `x` vanishes modulo the uniformizer.
    fn is_small(&self, x: &Self::Elem) -> bool;
    fn div_uniformizer(&self, x: &Self::Elem) -> Result<Self::Elem>;
    fn uniformizer_pow(&self, k: usize) -> Self::Elem;
}

impl TwistConstants for Constants {
    fn sigma(&self, x: &FieldElem, k: i64) -> Result<FieldElem> {
        let m = self.field.desc().degree() as i64;
        Ok(x.frobenius((self.e as i64 * k).rem_euclid(m) as u64))
    }
    fn depth(&self) -> usize {
        1
    }
    fn leading(&self, x: &FieldElem) -> FieldElem {
        x.clone()
    }
    fn is_small(&self, x: &FieldElem) -> bool {
        x.is_zero()
    }
    fn div_uniformizer(&self, x: &FieldElem) -> Result<FieldElem> {
        if x.is_zero() {
            Ok(x.clone())
        } else {
            Err(Error::Precision { needed: 1, available: 0 })
        }
    }
    fn uniformizer_pow(&self, k: usize) -> FieldElem {
        if k == 0 {
            self.one()
        } else {
            self.zero()
        }
    }
}

/// `O_{K'}` for `K'/K` unramified, with `σ` the `|k_K|`-power Frobenius.
#[derive(Clone, Debug)]
pub struct LocalConstants {
    pub ring: LocalRing,
    /// `σ = Frob^e`, `e = f(K)`.
    pub e: u32,
}

impl Ring for LocalConstants {
    type Elem = LocalInt;

    fn zero(&self) -> LocalInt {
        self.ring.zero()
    }
    fn one(&self) -> LocalInt {
        self.ring.one()
    }
    fn from_i64(&self, n: i64) -> LocalInt {
        self.ring.from_i64(n)
    }
    fn add(&self, a: &LocalInt, b: &LocalInt) -> LocalInt {
        a.add(b)
    }
    fn neg(&self, a: &LocalInt) -> LocalInt {
        a.neg()
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

impl TwistConstants for LocalConstants {
    fn sigma(&self, x: &LocalInt, k: i64) -> Result<LocalInt> {
        let f = self.ring.desc().f() as i64;
        x.frobenius((self.e as i64 * k).rem_euclid(f) as u64)
    }
    fn depth(&self) -> usize {
        self.ring.desc().precision() as usize
    }
    fn leading(&self, x: &LocalInt) -> LocalInt {
        LocalInt::teichmuller(self.ring.desc(), &x.reduce())
    }
    fn is_small(&self, x: &LocalInt) -> bool {
        x.prec() < 1 || x.reduce().is_zero()
    }
    fn div_uniformizer(&self, x: &LocalInt) -> Result<LocalInt> {
        x.div_uniformizer()
    }
    fn uniformizer_pow(&self, k: usize) -> LocalInt {
        self.ring.uniformizer().pow(k as u64)
    }
}

/// An element of the ring at index `i`: `Σ x^a ⊗ c y^b`.
#[derive(Clone, Debug)]
pub struct TwoTowerElem<C: Ring> {
    pub index: i64,
    pub body: BivarTrunc<C>,
}

impl<C: Ring> TwoTowerElem<C> {
    /// `idx=i: x^a*y^b*[c] + ... + O(deg n)` in (total degree, lex) order.
    pub fn text(&self) -> String {
        let ring = self.body.ring();
        let mut keys: Vec<(u32, u32)> = self.body.terms().map(|(k, _)| k).collect();
        keys.sort_by_key(|&(a, b)| (a + b, a, b));
        let mut parts: Vec<String> = keys
            .iter()
            .map(|&(a, b)| {
                let mut factors: Vec<String> = Vec::new();
                for (var, e) in [("x", a), ("y", b)] {
                    match e {
                        0 => {}
                        1 => factors.push(var.into()),
                        _ => factors.push(format!("{var}^{e}")),
                    }
                }
                factors.push(ring.text(&self.body.coeff(a, b)));
                factors.join("*")
            })
            .collect();
        parts.push(format!("O(deg {})", self.body.n()));
        format!("idx={}: {}", self.index, parts.join(" + "))
    }

    pub fn agrees(&self, other: &Self) -> bool {
        self.index == other.index && self.body.agrees(&other.body)
    }
}

/// The structure shared by all indices: constants, the total-degree cutoff,
/// and the images of `x` and `y` under Frobenius and Γ. Coefficients of these
/// series lie in `O_K`, which `σ` fixes, so they need no twisting.
#[derive(Clone, Debug)]
pub struct TwoTowerSystem<C: TwistConstants> {
    consts: C,
    n: u32,
    x_phi: BivarTrunc<C>,
    y_phi: BivarTrunc<C>,
    gammas: Vec<(BivarTrunc<C>, BivarTrunc<C>)>,
}

impl TwoTowerSystem<Constants> {
    /// The characteristic-`p` system over `field ⊇ k_K`, `|k_K| = p^e`, with
    /// both Frobenii the `p^e`-power map and no Γ generators.
    pub fn char_p(field: &Arc<FieldDesc>, e: u32, n: u32) -> Result<Self> {
        if e == 0 || field.degree() % e != 0 {
            return Err(Error::RingMismatch);
        }
        let consts = Constants::new(field, e);
        let q = crate::arith::checked_pow(field.p(), e).ok_or(Error::FieldTooLarge { p: field.p(), m: e })?;
        let q = u32::try_from(q).unwrap_or(u32::MAX);
        let one = consts.one();
        Ok(TwoTowerSystem {
            x_phi: BivarTrunc::monomial(&consts, one.clone(), q, 0, n),
            y_phi: BivarTrunc::monomial(&consts, one, 0, q, n),
            consts,
            n,
            gammas: Vec::new(),
        })
    }
}

impl TwoTowerSystem<LocalConstants> {
    /// The characteristic-0 system from the two coefficient rings `𝔸_{K,π}`
    /// (`pi_side`, over the Lubin-Tate group of `F`) and `𝔸_{K,ϖ}`
    /// (`varpi_side`, over that of `K`), sharing the constants `O_{K'}`.
    /// Γ generators are paired by position.
    pub fn lifted(pi_side: &CoeffRing, varpi_side: &CoeffRing, n: u32) -> Result<Self> {
        let ring = pi_side.coefficients().clone();
        if ring.desc() != varpi_side.coefficients().desc() {
            return Err(Error::RingMismatch);
        }
        if pi_side.gamma_count() != varpi_side.gamma_count() {
            return Err(Error::DimensionMismatch);
        }
        let e = varpi_side.lt().ring().desc().f() as u32;
        let consts = LocalConstants { ring, e };
        let bx = |s: &TruncSeries<LocalRing>| -> Result<BivarTrunc<LocalConstants>> {
            BivarTrunc::from_univariate_x(&s.map_coeffs(&consts, |c| c.clone()), n)
        };
        let mut gammas = Vec::new();
        for i in 0..pi_side.gamma_count() {
            gammas.push((bx(pi_side.gamma_series(i))?, bx(varpi_side.gamma_series(i))?.swap()));
        }
        Ok(TwoTowerSystem {
            x_phi: bx(pi_side.phi_series())?,
            y_phi: bx(varpi_side.phi_series())?.swap(),
            gammas,
            consts,
            n,
        })
    }

    /// Reduction modulo `ϖ`.
    pub fn reduce(&self) -> TwoTowerSystem<Constants> {
        let consts = Constants::new(self.consts.ring.desc().residue(), self.consts.e);
        let red = |b: &BivarTrunc<LocalConstants>| reduce_body(&consts, b);
        TwoTowerSystem {
            x_phi: red(&self.x_phi),
            y_phi: red(&self.y_phi),
            gammas: self.gammas.iter().map(|(g, h)| (red(g), red(h))).collect(),
            consts,
            n: self.n,
        }
    }

    pub fn reduce_elem(&self, e: &TwoTowerElem<LocalConstants>) -> TwoTowerElem<Constants> {
        let consts = Constants::new(self.consts.ring.desc().residue(), self.consts.e);
        TwoTowerElem { index: e.index, body: reduce_body(&consts, &e.body) }
    }
}

fn reduce_body(consts: &Constants, b: &BivarTrunc<LocalConstants>) -> BivarTrunc<Constants> {
    let n = b.terms().filter(|(_, c)| c.prec() < 1).map(|((i, j), _)| i + j).min().unwrap_or(b.n()).min(b.n());
    BivarTrunc::from_terms(consts, b.terms().map(|(k, c)| (k, c.reduce())), n)
}

impl<C: TwistConstants> TwoTowerSystem<C> {
    pub fn constants(&self) -> &C {
        &self.consts
    }
    pub fn cutoff(&self) -> u32 {
        self.n
    }
    pub fn gamma_count(&self) -> usize {
        self.gammas.len()
    }

    pub fn elem(&self, index: i64, terms: impl IntoIterator<Item = ((u32, u32), C::Elem)>) -> TwoTowerElem<C> {
        TwoTowerElem { index, body: BivarTrunc::from_terms(&self.consts, terms, self.n) }
    }

    pub fn x(&self, index: i64) -> TwoTowerElem<C> {
        self.elem(index, [((1, 0), self.consts.one())])
    }

    pub fn y(&self, index: i64) -> TwoTowerElem<C> {
        self.elem(index, [((0, 1), self.consts.one())])
    }

    /// `λ ⊗ 1 = 1 ⊗ σ^i(λ)` for a π-side constant `λ`.
    pub fn pi_constant(&self, index: i64, lambda: &C::Elem) -> Result<TwoTowerElem<C>> {
        Ok(self.elem(index, [((0, 0), self.consts.sigma(lambda, index)?)]))
    }

    /// `1 ⊗ c`.
    pub fn varpi_constant(&self, index: i64, c: &C::Elem) -> TwoTowerElem<C> {
        self.elem(index, [((0, 0), c.clone())])
    }

    fn same_index(a: &TwoTowerElem<C>, b: &TwoTowerElem<C>) -> Result<()> {
        if a.index != b.index {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, a: &TwoTowerElem<C>, b: &TwoTowerElem<C>) -> Result<TwoTowerElem<C>> {
        Self::same_index(a, b)?;
        Ok(TwoTowerElem { index: a.index, body: a.body.add(&b.body) })
    }

    pub fn sub(&self, a: &TwoTowerElem<C>, b: &TwoTowerElem<C>) -> Result<TwoTowerElem<C>> {
        Self::same_index(a, b)?;
        Ok(TwoTowerElem { index: a.index, body: a.body.sub(&b.body) })
    }

    pub fn mul(&self, a: &TwoTowerElem<C>, b: &TwoTowerElem<C>) -> Result<TwoTowerElem<C>> {
        Self::same_index(a, b)?;
        Ok(TwoTowerElem { index: a.index, body: a.body.mul(&b.body).truncate(self.n) })
    }

    /// Multiplication by a `y`-side constant.
    pub fn scale(&self, c: &C::Elem, a: &TwoTowerElem<C>) -> TwoTowerElem<C> {
        TwoTowerElem { index: a.index, body: a.body.scale(c) }
    }

    fn map_constants(&self, b: &BivarTrunc<C>, k: i64) -> Result<BivarTrunc<C>> {
        if k == 0 {
            return Ok(b.clone());
        }
        let terms = b.terms().map(|(key, c)| Ok((key, self.consts.sigma(c, k)?))).collect::<Result<Vec<_>>>()?;
        Ok(BivarTrunc::from_terms(&self.consts, terms, b.n()))
    }

    /// Substitutes for `x` and `y`; constant terms pass through unchanged.
    fn substitute(&self, b: &BivarTrunc<C>, gx: &BivarTrunc<C>, gy: &BivarTrunc<C>) -> Result<BivarTrunc<C>> {
        let c0 = b.coeff(0, 0);
        let rest = b.sub(&BivarTrunc::monomial(&self.consts, c0.clone(), 0, 0, b.n()));
        let image = if rest.is_zero() { BivarTrunc::zero(&self.consts, b.n()) } else { rest.compose(gx, gy)? };
        let n = image.n().min(b.n());
        Ok(image.add(&BivarTrunc::monomial(&self.consts, c0, 0, 0, n)).truncate(n))
    }

    fn x_id(&self) -> BivarTrunc<C> {
        BivarTrunc::x(&self.consts, self.n)
    }

    fn y_id(&self) -> BivarTrunc<C> {
        BivarTrunc::y(&self.consts, self.n)
    }

    /// `φ_π`: index `i -> i-1`, Frobenius on the `x` side. Constants written
    /// on the `y` side are unchanged: `σ^{i-1}(σ(λ)) = σ^i(λ)`.
    pub fn partial_frobenius_pi(&self, e: &TwoTowerElem<C>) -> Result<TwoTowerElem<C>> {
        let body = self.substitute(&e.body, &self.x_phi, &self.y_id())?;
        Ok(TwoTowerElem { index: e.index - 1, body })
    }

    /// `φ_ϖ`: index `i -> i+1`, Frobenius on the `y` side and `σ` on constants.
    pub fn partial_frobenius_varpi(&self, e: &TwoTowerElem<C>) -> Result<TwoTowerElem<C>> {
        let twisted = self.map_constants(&e.body, 1)?;
        let body = self.substitute(&twisted, &self.x_id(), &self.y_phi)?;
        Ok(TwoTowerElem { index: e.index + 1, body })
    }

    /// `φ^{rs}` on both sides and on constants; the index is kept.
    pub fn total_frobenius(&self, e: &TwoTowerElem<C>) -> Result<TwoTowerElem<C>> {
        let twisted = self.map_constants(&e.body, 1)?;
        let body = self.substitute(&twisted, &self.x_phi, &self.y_phi)?;
        Ok(TwoTowerElem { index: e.index, body })
    }

    /// The diagonal action of the `j`-th Γ generator.
    pub fn gamma(&self, j: usize, e: &TwoTowerElem<C>) -> Result<TwoTowerElem<C>> {
        let (gx, gy) = self.gammas.get(j).ok_or(Error::DimensionMismatch)?;
        Ok(TwoTowerElem { index: e.index, body: self.substitute(&e.body, gx, gy)? })
    }

    /// `(w_i)` with `w_i = 1 ⊗ w` for `w = Σ c_b y^b` over the window,
    /// compatible along `φ_π`.
    pub fn diagonal_varpi(&self, w: &[(u32, C::Elem)], window: (i64, i64)) -> Result<TowerSequence<C>> {
        let entries = (window.0..=window.1).map(|i| self.elem(i, w.iter().map(|(b, c)| ((0, *b), c.clone())))).collect();
        TowerSequence::new(Direction::Pi, entries)
    }

    /// `(w_i)` with `w_i = w ⊗ 1` for `w = Σ λ_a x^a`, compatible along `φ_ϖ`.
    pub fn diagonal_pi(&self, w: &[(u32, C::Elem)], window: (i64, i64)) -> Result<TowerSequence<C>> {
        let entries = (window.0..=window.1)
            .map(|i| {
                let terms = w.iter().map(|(a, c)| Ok(((*a, 0), self.consts.sigma(c, i)?))).collect::<Result<Vec<_>>>()?;
                Ok(self.elem(i, terms))
            })
            .collect::<Result<Vec<_>>>()?;
        TowerSequence::new(Direction::Varpi, entries)
    }

    /// Rewrites constants on the π side, `1 ⊗ c = σ^{-i}(c) ⊗ 1`.
    fn untwist(&self, e: &TwoTowerElem<C>) -> Result<BivarTrunc<C>> {
        self.map_constants(&e.body, -e.index)
    }
}

/// Which partial Frobenius chains a sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `φ_π(e_i) = e_{i-1}`; the limit lives on the ϖ side.
    Pi,
    /// `φ_ϖ(e_i) = e_{i+1}`; the limit lives on the π side.
    Varpi,
}

/// Entries over a consecutive index window `[i_0, i_1]`.
#[derive(Clone, Debug)]
pub struct TowerSequence<C: Ring> {
    pub direction: Direction,
    pub entries: Vec<TwoTowerElem<C>>,
}

impl<C: TwistConstants> TowerSequence<C> {
    pub fn new(direction: Direction, entries: Vec<TwoTowerElem<C>>) -> Result<Self> {
        let first = entries.first().ok_or(Error::WindowTooSmall { window: 0 })?.index;
        if entries.iter().enumerate().any(|(k, e)| e.index != first + k as i64) {
            return Err(Error::Inconsistent("indices not consecutive".into()));
        }
        Ok(TowerSequence { direction, entries })
    }

    pub fn window(&self) -> (i64, i64) {
        (self.entries[0].index, self.entries[self.entries.len() - 1].index)
    }

    /// Adds `ϖ^digit` to the entry at `position` (0 is `i_0`).
    pub fn inject_fault(&mut self, sys: &TwoTowerSystem<C>, position: usize, digit: usize) -> Result<()> {
        let e = self.entries.get(position).ok_or(Error::DimensionMismatch)?;
        let bump = sys.varpi_constant(e.index, &sys.consts.uniformizer_pow(digit));
        self.entries[position] = sys.add(e, &bump)?;
        Ok(())
    }
}

/// Evidence that a reconstructed limit matches every entry of the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub window: (i64, i64),
    pub digits: usize,
    pub entries_checked: usize,
}

/// A limit: coefficients of the surviving variable (`y` for [`Direction::Pi`],
/// `x` for [`Direction::Varpi`]), constants on that variable's side.
#[derive(Clone, Debug)]
pub struct Limit<C: Ring> {
    pub terms: Vec<(u32, C::Elem)>,
    pub n: u32,
    pub certificate: Certificate,
}

impl<C: Ring> Limit<C> {
    pub fn text(&self, ring: &C) -> String {
        let var = "w";
        let mut parts: Vec<String> =
            self.terms.iter().map(|(k, c)| format!("{var}^{k}*{}", ring.text(c))).collect();
        parts.push(format!("O(deg {})", self.n));
        parts.join(" + ")
    }
}

/// The projective limit over the window by digit lifting. Compatibility is
/// validated on the reduction first; then, digit by digit, every entry must
/// have the same leading digit, free of the chained variable.
pub fn projlim_reconstruct<C: TwistConstants>(sys: &TwoTowerSystem<C>, seq: &TowerSequence<C>) -> Result<Limit<C>> {
    let consts = &sys.consts;
    for pair in seq.entries.windows(2) {
        let (lo, hi) = (&pair[0], &pair[1]);
        let (image, target) = match seq.direction {
            Direction::Pi => (sys.partial_frobenius_pi(hi)?, lo),
            Direction::Varpi => (sys.partial_frobenius_varpi(lo)?, hi),
        };
        let diff = image.body.sub(&target.body);
        if diff.terms().any(|(_, c)| !consts.is_small(c)) {
            return Err(Error::NotCompatible { index: hi.index });
        }
    }
    // residuals with constants on the side of the surviving variable
    let mut residual: Vec<BivarTrunc<C>> = seq
        .entries
        .iter()
        .map(|e| match seq.direction {
            Direction::Pi => Ok(e.body.clone()),
            Direction::Varpi => sys.untwist(e),
        })
        .collect::<Result<_>>()?;
    let survives = |(a, b): (u32, u32)| match seq.direction {
        Direction::Pi => a == 0,
        Direction::Varpi => b == 0,
    };
    let n = residual.iter().map(|r| r.n()).min().unwrap_or(sys.n);
    let mut value = BivarTrunc::zero(consts, n);
    let depth = consts.depth();
    for t in 0..depth {
        let digits: Vec<BivarTrunc<C>> = residual
            .iter()
            .map(|r| BivarTrunc::from_terms(consts, r.terms().map(|(k, c)| (k, consts.leading(c))), n))
            .collect();
        let first = &digits[0];
        if first.terms().any(|(k, _)| !survives(k)) || digits.iter().any(|d| !d.agrees(first)) {
            return Err(Error::NoLimit { digit: t });
        }
        value = value.add(&first.scale(&consts.uniformizer_pow(t)));
        if t + 1 == depth {
            break;
        }
        residual = residual
            .iter()
            .map(|r| {
                let rest = r.sub(first);
                let terms = rest.terms().map(|(k, c)| Ok((k, consts.div_uniformizer(c)?))).collect::<Result<Vec<_>>>()?;
                Ok(BivarTrunc::from_terms(consts, terms, n))
            })
            .collect::<Result<_>>()?;
    }
    let terms: Vec<(u32, C::Elem)> = value
        .terms()
        .map(|((a, b), c)| (if seq.direction == Direction::Pi { b } else { a }, c.clone()))
        .collect();
    let back = match seq.direction {
        Direction::Pi => sys.diagonal_varpi(&terms, seq.window())?,
        Direction::Varpi => sys.diagonal_pi(&terms, seq.window())?,
    };
    let mut checked = 0;
    for (e, b) in seq.entries.iter().zip(&back.entries) {
        if !e.body.truncate(n).agrees(&b.body.truncate(n)) {
            return Err(Error::NoLimit { digit: depth });
        }
        checked += 1;
    }
    Ok(Limit { terms, n, certificate: Certificate { window: seq.window(), digits: depth, entries_checked: checked } })
}

/// The side a module lives on: `𝔸_{K,π}` (input of Φ) or `𝔸_{K,ϖ}` (input of Ψ).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Pi,
    Varpi,
}

/// Φ or Ψ of a constant-mode module.
#[derive(Clone, Debug)]
pub struct Transport<E> {
    pub matrix: Mat<E>,
    /// The index window the limits were reconstructed over.
    pub window: (i64, i64),
    pub limits_checked: usize,
    /// `P` over the base with `matrix = P A P^{-1}`, when one was produced.
    pub conjugator: Option<Mat<E>>,
}

/// Tensors the solutions `X` (`σ(X) = A X`) of a module on `from` with the
/// tower over `window`, checks the diagonal Frobenius chain, and
/// reconstructs each coordinate of the solution basis as a limit.
fn tower_step<C: TwistConstants>(
    sys: &TwoTowerSystem<C>,
    a: &Mat<C::Elem>,
    x: &Mat<C::Elem>,
    from: Side,
    window: (i64, i64),
) -> Result<usize> {
    let len = (window.1 - window.0 + 1).max(0) as usize;
    if len < 2 {
        return Err(Error::WindowTooSmall { window: len });
    }
    let consts = sys.constants();
    let d = a.rows();
    let a_inv = matrix::inverse(consts, a).ok_or(Error::NotEtale)?;
    let twist = |i: i64| -> Result<Mat<C::Elem>> {
        match from {
            Side::Pi => x.try_map(|c| consts.sigma(c, i)),
            Side::Varpi => Ok(x.clone()),
        }
    };
    let apply = |m: &Mat<C::Elem>, v: &[TwoTowerElem<C>]| -> Result<Vec<TwoTowerElem<C>>> {
        (0..d)
            .map(|r| {
                let mut acc = sys.varpi_constant(v[0].index, &consts.zero());
                for (c, e) in v.iter().enumerate() {
                    acc = sys.add(&acc, &sys.scale(m.get(r, c), e))?;
                }
                Ok(acc)
            })
            .collect()
    };
    let mut checked = 0;
    for k in 0..d {
        let mut seqs: Vec<Vec<TwoTowerElem<C>>> = alloc::vec![Vec::new(); d];
        let mut prev: Option<Vec<TwoTowerElem<C>>> = None;
        for i in window.0..=window.1 {
            let xi = twist(i)?;
            let m: Vec<TwoTowerElem<C>> = (0..d).map(|j| sys.varpi_constant(i, xi.get(j, k))).collect();
            if let Some(p) = &prev {
                // Φ: A^{-1} φ_π(m_i) = m_{i-1}; Ψ: A^{-1} φ_ϖ(m_{i-1}) = m_i
                let (image, target) = match from {
                    Side::Pi => (m.iter().map(|e| sys.partial_frobenius_pi(e)).collect::<Result<Vec<_>>>()?, p),
                    Side::Varpi => (p.iter().map(|e| sys.partial_frobenius_varpi(e)).collect::<Result<Vec<_>>>()?, &m),
                };
                let moved = apply(&a_inv, &image)?;
                if moved.iter().zip(target).any(|(u, v)| !u.agrees(v)) {
                    return Err(Error::NotCompatible { index: i });
                }
            }
            let xi_inv = matrix::inverse(consts, &xi).ok_or(Error::NotEtale)?;
            for (l, c) in apply(&xi_inv, &m)?.into_iter().enumerate() {
                seqs[l].push(c);
            }
            prev = Some(m);
        }
        let direction = match from {
            Side::Pi => Direction::Pi,
            Side::Varpi => Direction::Varpi,
        };
        for (l, entries) in seqs.into_iter().enumerate() {
            let limit = projlim_reconstruct(sys, &TowerSequence::new(direction, entries)?)?;
            let expect = if l == k { alloc::vec![(0u32, consts.one())] } else { Vec::new() };
            let same = limit.terms.len() == expect.len()
                && limit.terms.iter().zip(&expect).all(|((a, u), (b, v))| a == b && consts.eq(u, v));
            if !same {
                return Err(Error::Inconsistent("limit of a solution coordinate is not constant".into()));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

fn check_square<R: Ring>(ring: &R, a: &Mat<R::Elem>) -> Result<()> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::DimensionMismatch);
    }
    if !ring.is_unit(&matrix::det(ring, a)?) {
        return Err(Error::NotEtale);
    }
    Ok(())
}

/// Φ (`from = Pi`) or Ψ (`from = Varpi`) of the module `φ(x) = A x` with
/// `A ∈ GL_d(k_K)` and trivial Γ.
pub fn transport_const(a: &Mat<FieldElem>, from: Side, window: (i64, i64)) -> Result<Transport<FieldElem>> {
    let k = a.entries().first().ok_or(Error::DimensionMismatch)?.desc().clone();
    check_square(&FiniteField(k.clone()), a)?;
    let e = k.degree();
    let sol = functor_v_const(a, e)?;
    let l = sol.field.clone();
    let a_l = a.try_map(|x| x.embed(&l))?;
    let sys = TwoTowerSystem::char_p(&l, e, 2)?;
    let limits_checked = tower_step(&sys, &a_l, &sol.basis_matrix(), from, window)?;
    let r = galois_matrix(&sol, &k)?;
    let descent = functor_d_unramified(&r, &k, l.degree() / e)?;
    Ok(Transport { matrix: descent.module.phi, window, limits_checked, conjugator: None })
}

pub fn functor_phi_const(a: &Mat<FieldElem>, window: (i64, i64)) -> Result<Transport<FieldElem>> {
    transport_const(a, Side::Pi, window)
}

pub fn functor_psi_const(a: &Mat<FieldElem>, window: (i64, i64)) -> Result<Transport<FieldElem>> {
    transport_const(a, Side::Varpi, window)
}

/// Whether two constant modules over `k_K` are isomorphic (conjugate).
pub fn isomorphic_const(a: &Mat<FieldElem>, b: &Mat<FieldElem>) -> Result<bool> {
    Ok(conjugating_matrix(a, b)?.is_some())
}

/// The Lubin-Tate data of both towers: over `O_F` for `π`, over `O_K` for `ϖ`.
#[derive(Clone, Debug)]
pub struct TowerData {
    pub pi: LTData,
    pub varpi: LTData,
}

fn frob_mat_local(x: &Mat<LocalInt>, e: u32) -> Result<Mat<LocalInt>> {
    x.try_map(|c| c.frobenius(e as u64))
}

fn common_ring(base: &Arc<LocalRingDesc>, a: &Arc<LocalRingDesc>, b: &Arc<LocalRingDesc>) -> Result<Arc<LocalRingDesc>> {
    if a == b {
        return Ok(a.clone());
    }
    let m = crate::arith::lcm(a.residue().degree() as u64, b.residue().degree() as u64) as u32;
    base.with_residue(&splitting_field(base.p(), m)?)
}

fn embed_mat(x: &Mat<LocalInt>, to: &Arc<LocalRingDesc>) -> Result<Mat<LocalInt>> {
    let ext = Extension::new(x.get(0, 0).desc(), to)?;
    x.try_map(|c| ext.embed(c))
}

fn restrict_mat(x: &Mat<LocalInt>, to: &Arc<LocalRingDesc>) -> Result<Mat<LocalInt>> {
    let ext = Extension::new(to, x.get(0, 0).desc())?;
    x.try_map(|c| ext.restrict(c))
}

/// Φ or Ψ of `σ(x) = A x` with `A ∈ GL_d(O_K)` and trivial Γ, modulo `ϖ^M`.
/// The result comes with a conjugator over `O_K`.
pub fn transport_lift(a: &Mat<LocalInt>, towers: &TowerData, from: Side, window: (i64, i64)) -> Result<Transport<LocalInt>> {
    let top = a.entries().first().ok_or(Error::DimensionMismatch)?.desc().clone();
    let base = LocalRing(top.clone());
    check_square(&base, a)?;
    let e = top.f() as u32;
    let sol = functor_v_lift(a)?;
    let k1 = sol.ring.clone();
    let pi_side = CoeffRing::new(&towers.pi, &k1, &[])?;
    let varpi_side = CoeffRing::new(&towers.varpi, &k1, &[])?;
    let sys = TwoTowerSystem::lifted(&pi_side, &varpi_side, 2)?;
    let x = Mat::from_columns(&sol.basis)?;
    let ring1 = LocalRing(k1.clone());
    let limits_checked = tower_step(&sys, &embed_mat(a, &k1)?, &x, from, window)?;
    let x_inv = matrix::inverse(&ring1, &x).ok_or(Error::NotEtale)?;
    let r1 = matrix::mul(&ring1, &x_inv, &frob_mat_local(&x, e)?)?;
    let r = restrict_mat(&r1, &top)?;
    // invariants on the other side: σ(X2) = X2 R
    let sol2 = functor_v_lift(&r.transpose())?;
    let k2 = sol2.ring.clone();
    let ring2 = LocalRing(k2.clone());
    let x2 = Mat::from_columns(&sol2.basis)?.transpose();
    let x2_inv = matrix::inverse(&ring2, &x2).ok_or(Error::NotEtale)?;
    let a2 = matrix::mul(&ring2, &matrix::mul(&ring2, &x2, &embed_mat(&r, &k2)?)?, &x2_inv)?;
    let matrix_out = restrict_mat(&a2, &top)?;
    let k3 = common_ring(&top, &k1, &k2)?;
    let ring3 = LocalRing(k3.clone());
    let up = |m: &Mat<LocalInt>| if *m.get(0, 0).desc() == k3 { Ok(m.clone()) } else { embed_mat(m, &k3) };
    let x_inv3 = matrix::inverse(&ring3, &up(&x)?).ok_or(Error::NotEtale)?;
    let p = restrict_mat(&matrix::mul(&ring3, &up(&x2)?, &x_inv3)?, &top)?;
    let p_inv = matrix::inverse(&base, &p).ok_or(Error::NotEtale)?;
    let conj = matrix::mul(&base, &matrix::mul(&base, &p, a)?, &p_inv)?;
    if !mat_eq(&conj, &matrix_out) {
        return Err(Error::Inconsistent("transported matrix is not conjugate to the input".into()));
    }
    Ok(Transport { matrix: matrix_out, window, limits_checked, conjugator: Some(p) })
}

pub fn functor_phi_lift(a: &Mat<LocalInt>, towers: &TowerData, window: (i64, i64)) -> Result<Transport<LocalInt>> {
    transport_lift(a, towers, Side::Pi, window)
}

pub fn functor_psi_lift(a: &Mat<LocalInt>, towers: &TowerData, window: (i64, i64)) -> Result<Transport<LocalInt>> {
    transport_lift(a, towers, Side::Varpi, window)
}

fn mat_eq(a: &Mat<LocalInt>, b: &Mat<LocalInt>) -> bool {
    a.rows() == b.rows() && a.entries().iter().zip(b.entries()).all(|(x, y)| x.sub(y).is_zero())
}

/// Whether `b = P a P^{-1}` for the given `P`, invertible over `O_K`.
pub fn certifies_conjugacy(p: &Mat<LocalInt>, a: &Mat<LocalInt>, b: &Mat<LocalInt>) -> Result<bool> {
    let ring = LocalRing(a.get(0, 0).desc().clone());
    let Some(p_inv) = matrix::inverse(&ring, p) else {
        return Ok(false);
    };
    Ok(mat_eq(&matrix::mul(&ring, &matrix::mul(&ring, p, a)?, &p_inv)?, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{elements, make_field};
    use crate::ltgroup::{standard_series, unramified_ring};
    use alloc::vec;

    fn lifted_system(m: u32, n: u32) -> (TwoTowerSystem<LocalConstants>, TowerData) {
        // F = Q_2, K = Q_4 unramified, π = ϖ = 2
        let f = unramified_ring(2, 1, m).unwrap();
        let k = unramified_ring(2, 2, m).unwrap();
        let lt_pi = LTData::new(&standard_series(&f, &f.from_i64(2), 2), n).unwrap();
        let lt_varpi = LTData::new(&standard_series(&k, &k.from_i64(2), 4), n).unwrap();
        let pi_side = CoeffRing::new(&lt_pi, k.desc(), &[]).unwrap();
        let varpi_side = CoeffRing::new(&lt_varpi, k.desc(), &[]).unwrap();
        let sys = TwoTowerSystem::lifted(&pi_side, &varpi_side, n).unwrap();
        (sys, TowerData { pi: lt_pi, varpi: lt_varpi })
    }

    #[test]
    fn partial_frobenii_in_char_p() {
        let f4 = make_field(2, 2).unwrap();
        let sys = TwoTowerSystem::char_p(&f4, 2, 10).unwrap();
        let y = sys.y(3);
        let img = sys.partial_frobenius_pi(&y).unwrap();
        assert!(img.agrees(&sys.y(2)));
        let img = sys.partial_frobenius_pi(&sys.x(3)).unwrap();
        assert_eq!(img.text(), "idx=2: x^4*[1] + O(deg 10)");
        let w = FieldElem::generator(&f4);
        let e = sys.elem(0, [((1, 0), w.clone()), ((0, 2), w.clone()), ((1, 1), FieldElem::one(&f4))]);
        let a = sys.partial_frobenius_pi(&sys.partial_frobenius_varpi(&e).unwrap()).unwrap();
        let b = sys.partial_frobenius_varpi(&sys.partial_frobenius_pi(&e).unwrap()).unwrap();
        let t = sys.total_frobenius(&e).unwrap();
        assert!(a.agrees(&t) && b.agrees(&t));
    }

    #[test]
    fn partial_frobenii_commute_in_char_0() {
        let (sys, _) = lifted_system(3, 6);
        let c = sys.constants();
        let w = LocalInt::teichmuller(c.ring.desc(), &FieldElem::generator(c.ring.desc().residue()));
        let e = sys.elem(1, [((1, 0), w.clone()), ((0, 1), c.one()), ((1, 1), w.add(&c.from_i64(2)))]);
        let a = sys.partial_frobenius_pi(&sys.partial_frobenius_varpi(&e).unwrap()).unwrap();
        let b = sys.partial_frobenius_varpi(&sys.partial_frobenius_pi(&e).unwrap()).unwrap();
        let t = sys.total_frobenius(&e).unwrap();
        assert!(a.agrees(&t), "{} vs {}", a.text(), t.text());
        assert!(b.agrees(&t));
        // reduction commutes with φ_π
        let red = sys.reduce();
        let lhs = sys.reduce_elem(&sys.partial_frobenius_pi(&e).unwrap());
        let rhs = red.partial_frobenius_pi(&sys.reduce_elem(&e)).unwrap();
        assert!(lhs.agrees(&rhs));
    }

    #[test]
    fn diagonal_round_trip_and_fault_injection() {
        let (sys, _) = lifted_system(3, 6);
        let c = sys.constants();
        let w = LocalInt::teichmuller(c.ring.desc(), &FieldElem::generator(c.ring.desc().residue()));
        let target = vec![(0, w.clone()), (2, c.from_i64(5)), (3, w.mul(&c.from_i64(3)))];
        let seq = sys.diagonal_varpi(&target, (0, 3)).unwrap();
        let lim = projlim_reconstruct(&sys, &seq).unwrap();
        assert_eq!(lim.certificate.entries_checked, 4);
        assert_eq!(lim.terms.len(), 3);
        for ((a, u), (b, v)) in lim.terms.iter().zip(&target) {
            assert_eq!(a, b);
            assert!(u.sub(v).is_zero());
        }
        let seq = sys.diagonal_pi(&target, (0, 3)).unwrap();
        assert!(projlim_reconstruct(&sys, &seq).is_ok());

        let mut bad = sys.diagonal_varpi(&target, (0, 3)).unwrap();
        bad.inject_fault(&sys, 0, 2).unwrap();
        assert_eq!(projlim_reconstruct(&sys, &bad).unwrap_err(), Error::NoLimit { digit: 2 });
        let mut bad = sys.diagonal_varpi(&target, (0, 3)).unwrap();
        bad.inject_fault(&sys, 2, 0).unwrap();
        assert_eq!(projlim_reconstruct(&sys, &bad).unwrap_err(), Error::NotCompatible { index: 2 });
    }

    #[test]
    fn char_p_limits_are_constant_in_x() {
        let f2 = make_field(2, 1).unwrap();
        let sys = TwoTowerSystem::char_p(&f2, 1, 20).unwrap();
        // x_i = x^(2^(2-i)) is compatible along φ_π but not constant
        let entries = (0..=2).map(|i| sys.elem(i, [((1u32 << (2 - i), 0), FieldElem::one(&f2))])).collect();
        let seq = TowerSequence::new(Direction::Pi, entries).unwrap();
        assert_eq!(projlim_reconstruct(&sys, &seq).unwrap_err(), Error::NoLimit { digit: 0 });
        let seq = sys.diagonal_varpi(&[(1, FieldElem::one(&f2))], (0, 2)).unwrap();
        let lim = projlim_reconstruct(&sys, &seq).unwrap();
        assert_eq!(lim.text(sys.constants()), "w^1*[1] + O(deg 20)");
    }

    #[test]
    fn phi_and_psi_in_char_p() {
        for (p, m) in [(2u64, 2u32), (3, 1), (3, 2)] {
            let k = make_field(p, m).unwrap();
            for g in elements(&k).filter(|g| !g.is_zero()) {
                let a = Mat::from_rows(vec![vec![g.clone()]]).unwrap();
                let phi = functor_phi_const(&a, (0, 2)).unwrap();
                let back = functor_psi_const(&phi.matrix, (0, 2)).unwrap();
                assert!(isomorphic_const(&a, &back.matrix).unwrap(), "{p}^{m} g={g}");
            }
        }
        let k = make_field(3, 1).unwrap();
        let a = Mat::from_rows(vec![vec![FieldElem::zero(&k)]]).unwrap();
        assert_eq!(functor_phi_const(&a, (0, 2)).unwrap_err(), Error::NotEtale);
        let one = Mat::from_rows(vec![vec![FieldElem::one(&k)]]).unwrap();
        assert_eq!(functor_phi_const(&one, (0, 0)).unwrap_err(), Error::WindowTooSmall { window: 1 });
    }

    #[test]
    fn phi_and_psi_lifted() {
        let (_, towers) = lifted_system(3, 4);
        let top = towers.varpi.ring().desc().clone();
        let f4 = top.residue().clone();
        for g in elements(&f4).filter(|g| !g.is_zero()) {
            let a = Mat::from_rows(vec![vec![LocalInt::teichmuller(&top, &g)]]).unwrap();
            let phi = functor_phi_lift(&a, &towers, (0, 2)).unwrap();
            assert!(certifies_conjugacy(phi.conjugator.as_ref().unwrap(), &a, &phi.matrix).unwrap());
            let back = functor_psi_lift(&phi.matrix, &towers, (0, 2)).unwrap();
            let ring = LocalRing(top.clone());
            let p = matrix::mul(&ring, back.conjugator.as_ref().unwrap(), phi.conjugator.as_ref().unwrap()).unwrap();
            assert!(certifies_conjugacy(&p, &a, &back.matrix).unwrap());
        }
    }
}
