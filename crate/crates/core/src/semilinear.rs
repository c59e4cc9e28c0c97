//! Constant-coefficient semilinear systems `x^(p^e) = A x` over finite
//! fields, solved in an explicit splitting field.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::arith::{checked_pow, lcm};
use crate::error::{Error, Result};
use crate::fields::{splitting_field, Embedding, FieldDesc, FieldElem, FiniteField};
use crate::matrix::{self, Mat};

/// Solution spaces with at most this many candidate vectors are found by
/// enumeration; larger ones by linearization over `F_p`.
pub const BRUTE_FORCE_LIMIT: u64 = 4096;

/// Bound on the order of the norm matrix searched for the splitting degree.
const MAX_NORM_ORDER: u64 = 1 << 16;

#[derive(Clone, Debug)]
pub struct SemilinearSolution {
    /// Field in which every solution lives.
    pub field: Arc<FieldDesc>,
    /// The Frobenius iterate: solutions satisfy `x^(p^e) = A x`.
    pub e: u32,
    /// `d` solutions, linearly independent over `field` and hence over the
    /// fixed field `F_{p^e}`; every solution is an `F_{p^e}`-combination.
    pub basis: Vec<Vec<FieldElem>>,
    /// `A` with entries moved into `field`.
    pub matrix: Mat<FieldElem>,
}

impl SemilinearSolution {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Number of solutions, `p^(e d)`, when it fits a machine word.
    pub fn solution_count(&self) -> Option<u64> {
        checked_pow(self.field.p(), self.e * self.basis.len() as u32)
    }

    /// The basis as the columns of a matrix.
    pub fn basis_matrix(&self) -> Mat<FieldElem> {
        Mat::from_columns(&self.basis).expect("basis vectors share a length")
    }
}

fn common_field(a: &Mat<FieldElem>) -> Result<Arc<FieldDesc>> {
    let first = a.entries().first().ok_or(Error::DimensionMismatch)?.desc().clone();
    if a.entries().iter().any(|x| !x.desc().same_field(&first)) {
        return Err(Error::RingMismatch);
    }
    Ok(first)
}

/// Applies `x -> x^(p^e)` entrywise.
pub fn frobenius_mat(a: &Mat<FieldElem>, e: u64) -> Mat<FieldElem> {
    a.map(|x| x.frobenius(e))
}

/// Degree over `F_p` of the smallest field in the compatible tower containing
/// all solutions.
pub fn splitting_degree(a: &Mat<FieldElem>, e: u32) -> Result<u32> {
    if e == 0 {
        return Err(Error::ZeroDegree);
    }
    if !a.is_square() {
        return Err(Error::DimensionMismatch);
    }
    let desc = common_field(a)?;
    let ring = FiniteField(desc.clone());
    if matrix::inverse(&ring, a).is_none() {
        return Err(Error::NotEtale);
    }
    let base = lcm(e as u64, desc.degree() as u64);
    let k = base / e as u64;
    // x^(tau^k) = N x with N fixed by tau^k
    let mut norm = matrix::identity(&ring, a.rows());
    let mut twisted = a.clone();
    for _ in 0..k {
        norm = matrix::mul(&ring, &twisted, &norm)?;
        twisted = frobenius_mat(&twisted, e as u64);
    }
    let mut power = norm.clone();
    let mut order = 1u64;
    while !matrix::is_identity(&ring, &power) {
        power = matrix::mul(&ring, &power, &norm)?;
        order += 1;
        if order > MAX_NORM_ORDER {
            return Err(Error::Unsupported("splitting field degree out of range".into()));
        }
    }
    u32::try_from(base * order).map_err(|_| Error::Unsupported("splitting field degree out of range".into()))
}

fn embed_matrix(a: &Mat<FieldElem>, target: &Arc<FieldDesc>) -> Result<Mat<FieldElem>> {
    let emb = Embedding::new(a.get(0, 0).desc(), target)?;
    a.try_map(|x| emb.apply(x))
}

fn is_solution(a: &Mat<FieldElem>, x: &[FieldElem], e: u32) -> bool {
    let ring = FiniteField(x[0].desc().clone());
    let ax = matrix::mul_vec(&ring, a, x).expect("dimensions checked");
    x.iter().zip(&ax).all(|(xi, yi)| xi.frobenius(e as u64) == *yi)
}

/// Keeps vectors that raise the rank over the ambient field, up to `d`.
fn greedy_basis(ring: &FiniteField, candidates: impl Iterator<Item = Vec<FieldElem>>, d: usize) -> Vec<Vec<FieldElem>> {
    let mut basis: Vec<Vec<FieldElem>> = Vec::new();
    for v in candidates {
        if basis.len() == d {
            break;
        }
        if v.iter().all(|x| x.is_zero()) {
            continue;
        }
        let mut trial = basis.clone();
        trial.push(v.clone());
        let m = Mat::from_columns(&trial).expect("equal lengths");
        if matrix::rank(ring, &m) == trial.len() {
            basis = trial;
        }
    }
    basis
}

/// Every solution in `field` (which must contain them all), in index order.
pub fn enumerate_solutions(a: &Mat<FieldElem>, e: u32, field: &Arc<FieldDesc>) -> Result<Vec<Vec<FieldElem>>> {
    let d = a.rows();
    let order = field.order().ok_or(Error::FieldTooLarge { p: field.p(), m: field.degree() })?;
    let total = checked_pow(order, d as u32).ok_or(Error::FieldTooLarge { p: field.p(), m: field.degree() })?;
    let a = embed_matrix(a, field)?;
    let mut out = Vec::new();
    for idx in 0..total {
        let mut rest = idx;
        let x: Vec<FieldElem> = (0..d)
            .map(|_| {
                let c = FieldElem::from_index(field, rest % order);
                rest /= order;
                c
            })
            .collect();
        if is_solution(&a, &x, e) {
            out.push(x);
        }
    }
    Ok(out)
}

/// Solves `x^(p^e) = A x` for `A` in `GL_d(F_{p^m})`.
pub fn solve_semilinear_const(a: &Mat<FieldElem>, e: u32) -> Result<SemilinearSolution> {
    let degree = splitting_degree(a, e)?;
    let p = a.get(0, 0).desc().p();
    let field = splitting_field(p, degree)?;
    let d = a.rows();
    let ring = FiniteField(field.clone());
    let small = checked_pow(p, degree * d as u32).is_some_and(|n| n <= BRUTE_FORCE_LIMIT);
    let basis = if small {
        let sols = enumerate_solutions(a, e, &field)?;
        greedy_basis(&ring, sols.into_iter(), d)
    } else {
        linearized_basis(&embed_matrix(a, &field)?, e, &field)?
    };
    if basis.len() != d {
        return Err(Error::Inconsistent("solution space smaller than the rank".into()));
    }
    Ok(SemilinearSolution { field: field.clone(), e, basis, matrix: embed_matrix(a, &field)? })
}

/// Kernel of the `F_p`-linear map `x -> x^(p^e) - A x` on `F_{p^L}^d`.
fn linearized_basis(a: &Mat<FieldElem>, e: u32, field: &Arc<FieldDesc>) -> Result<Vec<Vec<FieldElem>>> {
    let kernel = semilinear_kernel(a, e, field)?;
    let ring = FiniteField(field.clone());
    Ok(greedy_basis(&ring, kernel.into_iter(), a.rows()))
}

/// Rows of the `F_p`-matrix of `x -> x^(p^e) - A x` on `field^d`; columns are
/// indexed by (power of the generator, component), rows by (component,
/// coefficient).
fn linearized_rows(a: &Mat<FieldElem>, e: u32, field: &Arc<FieldDesc>) -> Result<Vec<Vec<u64>>> {
    let d = a.rows();
    let l = field.degree() as usize;
    let ring = FiniteField(field.clone());
    let n = l * d;
    let mut columns: Vec<Vec<u64>> = Vec::with_capacity(n);
    let mut tpow = FieldElem::one(field);
    let gen = if field.degree() == 1 { FieldElem::one(field) } else { FieldElem::generator(field) };
    for _ in 0..l {
        let frob = tpow.frobenius(e as u64);
        for j in 0..d {
            let mut x = alloc::vec![FieldElem::zero(field); d];
            x[j] = tpow.clone();
            let ax = matrix::mul_vec(&ring, a, &x)?;
            let mut col = Vec::with_capacity(n);
            for (i, v) in ax.iter().enumerate() {
                let lhs = if i == j { frob.clone() } else { FieldElem::zero(field) };
                col.extend_from_slice(lhs.sub(v).coeffs());
            }
            columns.push(col);
        }
        tpow = tpow.mul(&gen);
    }
    Ok((0..n).map(|r| columns.iter().map(|c| c[r]).collect()).collect())
}

fn unflatten(v: &[u64], d: usize, field: &Arc<FieldDesc>) -> Vec<FieldElem> {
    let l = field.degree() as usize;
    (0..d)
        .map(|j| {
            let coeffs: Vec<u64> = (0..l).map(|t| v[t * d + j]).collect();
            FieldElem::from_coeffs(field, &coeffs).expect("length matches degree")
        })
        .collect()
}

/// An `F_p`-basis of all solutions in `field`.
pub fn semilinear_kernel(a: &Mat<FieldElem>, e: u32, field: &Arc<FieldDesc>) -> Result<Vec<Vec<FieldElem>>> {
    let rows = linearized_rows(a, e, field)?;
    let n = field.degree() as usize * a.rows();
    let kernel = crate::fplin::kernel(&rows, n, field.p());
    Ok(kernel.iter().map(|v| unflatten(v, a.rows(), field)).collect())
}

/// Some `x` in `field^d` with `x^(p^e) - A x = b`, if one exists there.
pub fn solve_affine(a: &Mat<FieldElem>, e: u32, field: &Arc<FieldDesc>, b: &[FieldElem]) -> Result<Option<Vec<FieldElem>>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch);
    }
    let rows = linearized_rows(a, e, field)?;
    let rhs: Vec<u64> = b.iter().flat_map(|x| x.coeffs().to_vec()).collect();
    Ok(crate::fplin::solve(&rows, &rhs, field.p()).map(|v| unflatten(&v, a.rows(), field)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_field;
    use alloc::vec;

    fn scalar(p: u64, m: u32, c: i64) -> Mat<FieldElem> {
        let f = make_field(p, m).unwrap();
        Mat::from_rows(vec![vec![FieldElem::from_int(&f, c)]]).unwrap()
    }

    #[test]
    fn identity_over_f3() {
        let sol = solve_semilinear_const(&scalar(3, 1, 1), 1).unwrap();
        assert_eq!(sol.field.degree(), 1);
        assert_eq!(sol.dimension(), 1);
        let all = enumerate_solutions(&scalar(3, 1, 1), 1, &sol.field).unwrap();
        assert_eq!(all.len(), 3);
    }

    #[test]
    fn two_over_f3_needs_f9() {
        let sol = solve_semilinear_const(&scalar(3, 1, 2), 1).unwrap();
        assert_eq!(sol.field.degree(), 2);
        let x = &sol.basis[0][0];
        assert_eq!(x.mul(x), FieldElem::from_int(&sol.field, 2));
        assert_eq!(enumerate_solutions(&scalar(3, 1, 2), 1, &sol.field).unwrap().len(), 3);
    }

    #[test]
    fn singular_is_not_etale() {
        assert_eq!(solve_semilinear_const(&scalar(3, 1, 0), 1).unwrap_err(), Error::NotEtale);
    }

    #[test]
    fn linearization_agrees_with_enumeration() {
        let f4 = make_field(2, 2).unwrap();
        let w = FieldElem::generator(&f4);
        let a = Mat::from_rows(vec![
            vec![w.clone(), FieldElem::one(&f4)],
            vec![FieldElem::zero(&f4), w.mul(&w)],
        ])
        .unwrap();
        let deg = splitting_degree(&a, 1).unwrap();
        let field = splitting_field(2, deg).unwrap();
        let kernel = semilinear_kernel(&embed_matrix(&a, &field).unwrap(), 1, &field).unwrap();
        assert_eq!(kernel.len(), 2);
        if checked_pow(2, deg * 2).unwrap() <= 1 << 16 {
            assert_eq!(enumerate_solutions(&a, 1, &field).unwrap().len(), 4);
        }
        let sol = linearized_basis(&embed_matrix(&a, &field).unwrap(), 1, &field).unwrap();
        assert_eq!(sol.len(), 2);
    }
}
