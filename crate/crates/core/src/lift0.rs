//! The characteristic-0 rings `𝔸 = O_K((u))^` at joint precision
//! (`ϖ^M`, `u`-window `N`), with `φ` and Γ acting through Lubin-Tate
//! endomorphisms, reduction to the norm field, and the functor V lifted
//! digit by digit.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::charp::{functor_v_const, DifferenceRing, NormField};
use crate::error::{Error, Result};
use crate::arith::checked_pow;
use crate::fields::{splitting_field, Embedding, FieldDesc, FieldElem, FiniteField, MAX_ORDER};
use crate::localnum::{Extension, LocalInt, LocalRing, LocalRingDesc};
use crate::ltgroup::LTData;
use crate::matrix::{self, Mat};
use crate::ring::Ring;
use crate::semilinear::{solve_affine, SemilinearSolution};
use crate::series::{LaurentRing, TruncSeries, UNBOUNDED};

pub type Series = TruncSeries<LocalRing>;

/// `𝔸_{K,π}` for `O_K ⊇ O_F`.
#[derive(Clone, Debug)]
pub struct CoeffRing {
    lt: LTData,
    ext: Extension,
    ring: LocalRing,
    cap: i64,
    /// `[π^s](u)`, giving `φ^{rs}`.
    phi_series: Series,
    /// `[π](u)`, giving `φ^r` together with `σ^r` on constants.
    pi_series: Series,
    gamma_values: Vec<LocalInt>,
    gammas: Vec<Series>,
    laurent: LaurentRing<LocalRing>,
}

impl CoeffRing {
    pub fn new(lt: &LTData, top: &Arc<LocalRingDesc>, gamma_values: &[LocalInt]) -> Result<Self> {
        let ext = Extension::new(lt.ring().desc(), top)?;
        let ring = LocalRing(top.clone());
        let s = ext.inertia_degree();
        let f = lt.frobenius_series();
        let (pi_base, phi_base) = if f.is_exact() {
            let mut iter = f.clone();
            for _ in 1..s {
                iter = f.compose(&iter, UNBOUNDED)?;
            }
            (f.clone(), iter)
        } else {
            (lt.lt_mul(lt.uniformizer())?, lt.lt_mul(&lt.uniformizer().pow(s))?)
        };
        let embed = |x: &Series| x.try_map_coeffs(&ring, |c| ext.embed(c));
        let mut gammas = Vec::with_capacity(gamma_values.len());
        for c in gamma_values {
            if !c.is_unit() {
                return Err(Error::NotUnit);
            }
            gammas.push(embed(&lt.lt_mul(c)?)?);
        }
        let cap = lt.cutoff() as i64;
        Ok(CoeffRing {
            phi_series: embed(&phi_base)?,
            pi_series: embed(&pi_base)?,
            gammas,
            gamma_values: gamma_values.to_vec(),
            laurent: LaurentRing::new(ring.clone(), cap, "u"),
            lt: lt.clone(),
            ext,
            ring,
            cap,
        })
    }

    pub fn lt(&self) -> &LTData {
        &self.lt
    }
    pub fn extension(&self) -> &Extension {
        &self.ext
    }
    pub fn coefficients(&self) -> &LocalRing {
        &self.ring
    }
    pub fn cap(&self) -> i64 {
        self.cap
    }
    pub fn gamma_values(&self) -> &[LocalInt] {
        &self.gamma_values
    }
    /// `[π^s](u)` over `O_K`.
    pub fn phi_series(&self) -> &Series {
        &self.phi_series
    }
    pub fn gamma_series(&self, index: usize) -> &Series {
        &self.gammas[index]
    }

    /// The residue ring `𝔼_{K,π}` with the same Γ generators.
    pub fn norm_field(&self) -> Result<NormField> {
        NormField::new(&self.lt, self.ring.desc().residue(), &self.gamma_values)
    }

    pub fn u(&self) -> Series {
        TruncSeries::var(&self.ring)
    }

    pub fn constant(&self, c: &LocalInt) -> Series {
        TruncSeries::constant(&self.ring, c.clone())
    }

    /// `φ^{rs}`: `u -> [π^s](u)`, trivial on `O_K`.
    pub fn phi_lift(&self, x: &Series) -> Result<Series> {
        x.substitute(&self.phi_series, self.cap)
    }

    /// `φ^r`: `u -> [π](u)` and `σ^r` on the unramified constants.
    pub fn phi_r(&self, x: &Series) -> Result<Series> {
        let r = self.lt.ring().desc().f() as u64;
        let twisted = x.try_map_coeffs(&self.ring, |c| c.frobenius(r))?;
        twisted.substitute(&self.pi_series, self.cap)
    }

    /// `u -> [c](u)` for a unit `c` of `O_F`.
    pub fn gamma_lift(&self, c: &LocalInt, x: &Series) -> Result<Series> {
        if !c.is_unit() {
            return Err(Error::NotUnit);
        }
        let g = self.lt.lt_mul(c)?.try_map_coeffs(&self.ring, |a| self.ext.embed(a))?;
        x.substitute(&g, self.cap)
    }

    /// Reduction modulo `ϖ`; the window shrinks to the first coefficient
    /// not known modulo `ϖ`.
    pub fn reduce(&self, x: &Series) -> TruncSeries<FiniteField> {
        let k = FiniteField(self.ring.desc().residue().clone());
        let unknown = x.terms().filter(|(_, c)| c.prec() < 1).map(|(e, _)| e).min();
        let prec = unknown.map_or(x.prec(), |e| e.min(x.prec()));
        TruncSeries::from_terms(&k, x.terms().map(|(e, c)| (e, c.reduce())), prec)
    }

    /// Coefficientwise Teichmüller lift of a norm-field element.
    pub fn teichmuller_lift(&self, x: &TruncSeries<FiniteField>) -> Series {
        let desc = self.ring.desc();
        TruncSeries::from_terms(&self.ring, x.terms().map(|(e, c)| (e, LocalInt::teichmuller(desc, c))), x.prec())
    }
}

impl Ring for CoeffRing {
    type Elem = Series;

    fn zero(&self) -> Series {
        self.laurent.zero()
    }
    fn one(&self) -> Series {
        self.laurent.one()
    }
    fn from_i64(&self, n: i64) -> Series {
        self.laurent.from_i64(n)
    }
    fn add(&self, a: &Series, b: &Series) -> Series {
        self.laurent.add(a, b)
    }
    fn neg(&self, a: &Series) -> Series {
        self.laurent.neg(a)
    }
    fn mul(&self, a: &Series, b: &Series) -> Series {
        self.laurent.mul(a, b)
    }
    fn is_zero(&self, a: &Series) -> bool {
        self.laurent.is_zero(a)
    }
    fn is_unit(&self, a: &Series) -> bool {
        // units of 𝔸 reduce to nonzero elements of the norm field
        a.terms().any(|(_, c)| c.is_unit())
    }
    fn inv(&self, a: &Series) -> Option<Series> {
        self.laurent.inv(a)
    }
    fn text(&self, a: &Series) -> String {
        self.laurent.text(a)
    }
}

impl DifferenceRing for CoeffRing {
    fn phi(&self, x: &Series) -> Result<Series> {
        self.phi_lift(x)
    }
    fn gamma(&self, index: usize, x: &Series) -> Result<Series> {
        let g = self.gammas.get(index).ok_or(Error::DimensionMismatch)?;
        x.substitute(g, self.cap)
    }
    fn gamma_count(&self) -> usize {
        self.gammas.len()
    }
}

/// Solutions of `σ^e(x) = A x` in `O_{K'}^d` modulo `ϖ^M`, where `K'/K` is
/// unramified with residue field `field`.
#[derive(Clone, Debug)]
pub struct LiftSolution {
    pub ring: Arc<LocalRingDesc>,
    pub e: u32,
    pub basis: Vec<Vec<LocalInt>>,
    /// The reductions, solving the residue problem.
    pub residue: SemilinearSolution,
}

impl LiftSolution {
    pub fn field(&self) -> &Arc<FieldDesc> {
        self.ring.residue()
    }
}

/// Largest single step by which the residue field may grow while lifting.
fn growth_steps(p: u64) -> u32 {
    (p as u32).max(4)
}

/// The constant matrix behind a module over `𝔸`, if every entry is constant.
pub fn constant_matrix(ring: &CoeffRing, a: &Mat<Series>) -> Result<Mat<LocalInt>> {
    a.try_map(|x| {
        if x.terms().any(|(e, _)| e != 0) {
            return Err(Error::Unsupported("V over 𝔸 needs a constant matrix".into()));
        }
        let c = x.coeff(0);
        Ok(if x.terms().next().is_none() { LocalInt::zero(ring.coefficients().desc()) } else { c })
    })
}

/// `V` lifted: `σ^e(x) = A x` with `e = f(K)` and `A ∈ GL_d(O_K)`, solved
/// modulo `ϖ` and then one `ϖ`-adic digit at a time. The residue field
/// grows whenever a digit equation has no solution in the current one.
pub fn functor_v_lift(a: &Mat<LocalInt>) -> Result<LiftSolution> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::DimensionMismatch);
    }
    let top = a.get(0, 0).desc().clone();
    let p = top.p();
    let e = top.f() as u32;
    let m = top.precision();
    let a_bar = a.map(|x| x.reduce());
    let residue = functor_v_const(&a_bar, e)?;
    if residue.field.is_plain() {
        return Err(Error::FieldTooLarge { p, m: residue.field.degree() });
    }
    let mut field = residue.field.clone();
    let mut ring = top.with_residue(&field)?;
    let mut a_up = embed_matrix(a, &top, &ring)?;
    let mut a_bar_up = a_bar.try_map(|x| x.embed(&field))?;
    let mut basis: Vec<Vec<LocalInt>> = residue
        .basis
        .iter()
        .map(|v| v.iter().map(|x| LocalInt::teichmuller(&ring, x)).collect())
        .collect();
    for k in 1..m {
        let mut i = 0;
        while i < basis.len() {
            let rho = defect(&basis[i], &a_up, e, k)?;
            let target: Vec<FieldElem> = rho.iter().map(|r| r.reduce().neg()).collect();
            if let Some(delta) = solve_affine(&a_bar_up, e, &field, &target)? {
                basis[i] = correct(&basis[i], &delta, &ring, k);
                i += 1;
                continue;
            }
            // grow the residue field and retry this digit for every vector
            let grown = (2..=growth_steps(p))
                .map(|j| field.degree() * j)
                .filter(|&deg| checked_pow(p, deg).is_some_and(|o| o <= MAX_ORDER))
                .find_map(|deg| {
                    let big = splitting_field(p, deg).ok()?;
                    let emb = Embedding::new(&field, &big).ok()?;
                    let t: Vec<FieldElem> = target.iter().map(|x| emb.apply(x)).collect::<Result<_>>().ok()?;
                    let ab = a_bar_up.try_map(|x| emb.apply(x)).ok()?;
                    solve_affine(&ab, e, &big, &t).ok()?.map(|_| big)
                })
                .ok_or(Error::DigitUnsolvable { digit: k as usize })?;
            let next = top.with_residue(&grown)?;
            let up = Extension::new(&ring, &next)?;
            basis = basis
                .iter()
                .map(|v| v.iter().map(|x| up.embed(x)).collect::<Result<Vec<_>>>())
                .collect::<Result<_>>()?;
            a_up = embed_matrix(a, &top, &next)?;
            a_bar_up = a_bar.try_map(|x| x.embed(&grown))?;
            field = grown;
            ring = next;
        }
    }
    for v in &basis {
        if defect(v, &a_up, e, 0)?.iter().any(|r| !r.is_zero()) {
            return Err(Error::Inconsistent("lifted solution fails φ(x) = A x".into()));
        }
    }
    Ok(LiftSolution { ring, e, basis, residue })
}

fn embed_matrix(a: &Mat<LocalInt>, from: &Arc<LocalRingDesc>, to: &Arc<LocalRingDesc>) -> Result<Mat<LocalInt>> {
    let ext = Extension::new(from, to)?;
    a.try_map(|x| ext.embed(x))
}

/// `(σ^e(x) - A x) / ϖ^k`.
fn defect(x: &[LocalInt], a: &Mat<LocalInt>, e: u32, k: i64) -> Result<Vec<LocalInt>> {
    let ring = LocalRing(x[0].desc().clone());
    let ax = matrix::mul_vec(&ring, a, x)?;
    x.iter()
        .zip(&ax)
        .map(|(xi, yi)| xi.frobenius(e as u64)?.sub(yi).div_uniformizer_pow(k))
        .collect()
}

fn correct(x: &[LocalInt], delta: &[FieldElem], ring: &Arc<LocalRingDesc>, k: i64) -> Vec<LocalInt> {
    let pk = LocalInt::uniformizer(ring).pow(k as u64);
    x.iter().zip(delta).map(|(xi, d)| xi.add(&pk.mul(&LocalInt::teichmuller(ring, d)))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charp::default_gamma_values;
    use crate::fields::make_field;
    use crate::ltgroup::{multiplicative_series, standard_series, unramified_ring};
    use alloc::vec;

    fn scalar(x: LocalInt) -> Mat<LocalInt> {
        Mat::from_rows(vec![vec![x]]).unwrap()
    }

    #[test]
    fn phi_on_multiplicative_tower() {
        let ring = unramified_ring(3, 1, 4).unwrap();
        let lt = LTData::new(&multiplicative_series(&ring), 8).unwrap();
        let a = CoeffRing::new(&lt, ring.desc(), &[]).unwrap();
        let img = a.phi_lift(&a.u()).unwrap();
        let expect = a.sub(&a.laurent.pow(&a.add(&a.one(), &a.u()), 3), &a.one());
        assert!(img.agrees(&expect), "{}", a.text(&img));
    }

    #[test]
    fn reduction_intertwines_phi_and_gamma() {
        let base = unramified_ring(2, 1, 4).unwrap();
        let pi = base.from_i64(2);
        let lt = LTData::new(&standard_series(&base, &pi, 2), 10).unwrap();
        let top = LocalRingDesc::unramified(&make_field(2, 2).unwrap(), 4).unwrap();
        let gv = default_gamma_values(&lt).unwrap();
        let a = CoeffRing::new(&lt, &top, &gv).unwrap();
        let e = a.norm_field().unwrap();
        let w = LocalInt::teichmuller(&top, &FieldElem::generator(top.residue()));
        let x = a.add(&a.mul(&a.constant(&w), &a.u()), &a.laurent.pow(&a.u(), 3));
        let x = a.add(&x, &a.from_i64(1));
        let lhs = a.reduce(&a.phi_lift(&x).unwrap());
        let rhs = e.phi(&a.reduce(&x)).unwrap();
        assert!(lhs.agrees(&rhs), "{} vs {}", lhs.text("u"), rhs.text("u"));
        for i in 0..a.gamma_count() {
            let lhs = a.reduce(&a.gamma(i, &x).unwrap());
            let rhs = e.gamma(i, &a.reduce(&x)).unwrap();
            assert!(lhs.agrees(&rhs));
        }
        // φ^r iterated s times is φ^{rs}
        let twice = a.phi_r(&a.phi_r(&x).unwrap()).unwrap();
        assert!(twice.agrees(&a.phi_lift(&x).unwrap()));
    }

    #[test]
    fn v_lift_of_identity_and_teichmuller() {
        let top = LocalRingDesc::unramified(&make_field(3, 1).unwrap(), 4).unwrap();
        let sol = functor_v_lift(&scalar(LocalInt::one(&top))).unwrap();
        assert_eq!(sol.basis.len(), 1);
        assert_eq!(sol.basis[0][0], LocalInt::one(&sol.ring));

        let g = LocalInt::teichmuller(&top, &FieldElem::from_int(top.residue(), 2));
        let sol = functor_v_lift(&scalar(g)).unwrap();
        assert_eq!(sol.field().degree(), 2);
        let x = &sol.basis[0][0];
        assert_eq!(x, &LocalInt::teichmuller(&sol.ring, &sol.residue.basis[0][0]));
    }

    #[test]
    fn v_lift_of_one_plus_varpi_grows_the_field() {
        let top = LocalRingDesc::unramified(&make_field(2, 1).unwrap(), 4).unwrap();
        let a = LocalInt::from_int(&top, 3);
        let sol = functor_v_lift(&scalar(a.clone())).unwrap();
        assert!(sol.field().degree() > 1);
        let x = &sol.basis[0][0];
        assert!(x.is_unit());
        let up = Extension::new(&top, &sol.ring).unwrap();
        assert!(x.frobenius(1).unwrap().sub(&up.embed(&a).unwrap().mul(x)).is_zero());

        let ram = LocalRingDesc::eisenstein(&make_field(3, 1).unwrap(), &[vec![3], vec![0]], 4).unwrap();
        let a = LocalInt::one(&ram).add(&LocalInt::uniformizer(&ram));
        let sol = functor_v_lift(&scalar(a.clone())).unwrap();
        let x = &sol.basis[0][0];
        let up = Extension::new(&ram, &sol.ring).unwrap();
        assert!(x.frobenius(1).unwrap().sub(&up.embed(&a).unwrap().mul(x)).is_zero());
    }
}
