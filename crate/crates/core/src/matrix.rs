//! Small dense matrices over a [`Ring`] handle.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ring::Ring;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Mat<E> {
    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch);
        }
        Ok(Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[E] {
        &self.data
    }

    pub fn map<F: Clone>(&self, f: impl FnMut(&E) -> F) -> Mat<F> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<F: Clone>(&self, f: impl FnMut(&E) -> Result<F>) -> Result<Mat<F>> {
        let data = self.data.iter().map(f).collect::<Result<Vec<F>>>()?;
        Ok(Mat { rows: self.rows, cols: self.cols, data })
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn from_columns(cols: &[Vec<E>]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, |v| v.len());
        if cols.iter().any(|v| v.len() != r) {
            return Err(Error::DimensionMismatch);
        }
        Ok(Mat::from_fn(r, c, |i, j| cols[j][i].clone()))
    }
}

pub fn identity<R: Ring>(ring: &R, n: usize) -> Mat<R::Elem> {
    Mat::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
}

pub fn zeros<R: Ring>(ring: &R, rows: usize, cols: usize) -> Mat<R::Elem> {
    Mat::from_fn(rows, cols, |_, _| ring.zero())
}

pub fn add<R: Ring>(ring: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Result<Mat<R::Elem>> {
    if a.rows != b.rows || a.cols != b.cols {
        return Err(Error::DimensionMismatch);
    }
    Ok(Mat::from_fn(a.rows, a.cols, |i, j| ring.add(a.get(i, j), b.get(i, j))))
}

pub fn sub<R: Ring>(ring: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Result<Mat<R::Elem>> {
    if a.rows != b.rows || a.cols != b.cols {
        return Err(Error::DimensionMismatch);
    }
    Ok(Mat::from_fn(a.rows, a.cols, |i, j| ring.sub(a.get(i, j), b.get(i, j))))
}

pub fn mul<R: Ring>(ring: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Result<Mat<R::Elem>> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch);
    }
    Ok(Mat::from_fn(a.rows, b.cols, |i, j| {
        let mut acc = ring.zero();
        for k in 0..a.cols {
            acc = ring.add(&acc, &ring.mul(a.get(i, k), b.get(k, j)));
        }
        acc
    }))
}

pub fn mul_vec<R: Ring>(ring: &R, a: &Mat<R::Elem>, v: &[R::Elem]) -> Result<Vec<R::Elem>> {
    if a.cols != v.len() {
        return Err(Error::DimensionMismatch);
    }
    Ok((0..a.rows)
        .map(|i| {
            let mut acc = ring.zero();
            for (k, x) in v.iter().enumerate() {
                acc = ring.add(&acc, &ring.mul(a.get(i, k), x));
            }
            acc
        })
        .collect())
}

pub fn scale<R: Ring>(ring: &R, c: &R::Elem, a: &Mat<R::Elem>) -> Mat<R::Elem> {
    a.map(|x| ring.mul(c, x))
}

pub fn equal<R: Ring>(ring: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> bool {
    a.rows == b.rows && a.cols == b.cols && a.data.iter().zip(&b.data).all(|(x, y)| ring.eq(x, y))
}

pub fn is_identity<R: Ring>(ring: &R, a: &Mat<R::Elem>) -> bool {
    a.is_square() && equal(ring, a, &identity(ring, a.rows))
}

/// Division-free determinant by cofactor expansion along the first row;
/// intended for the small dimensions used here.
pub fn det<R: Ring>(ring: &R, a: &Mat<R::Elem>) -> Result<R::Elem> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch);
    }
    let idx: Vec<usize> = (0..a.rows).collect();
    Ok(det_minor(ring, a, 0, &idx))
}

fn det_minor<R: Ring>(ring: &R, a: &Mat<R::Elem>, row: usize, cols: &[usize]) -> R::Elem {
    match cols.len() {
        0 => ring.one(),
        1 => a.get(row, cols[0]).clone(),
        _ => {
            let mut acc = ring.zero();
            for (k, &c) in cols.iter().enumerate() {
                let entry = a.get(row, c);
                if ring.is_zero(entry) {
                    continue;
                }
                let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let term = ring.mul(entry, &det_minor(ring, a, row + 1, &rest));
                acc = if k % 2 == 0 { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
            }
            acc
        }
    }
}

/// Gauss-Jordan inverse choosing unit pivots; `None` when no unit pivot
/// exists in some column (for local rings and fields: not invertible).
pub fn inverse<R: Ring>(ring: &R, a: &Mat<R::Elem>) -> Option<Mat<R::Elem>> {
    if !a.is_square() {
        return None;
    }
    let n = a.rows;
    let mut m = a.clone();
    let mut inv = identity(ring, n);
    for c in 0..n {
        let pr = (c..n).find(|&r| ring.is_unit(m.get(r, c)))?;
        swap_rows(&mut m, c, pr);
        swap_rows(&mut inv, c, pr);
        let piv_inv = ring.inv(m.get(c, c))?;
        for j in 0..n {
            m.set(c, j, ring.mul(&piv_inv, m.get(c, j)));
            inv.set(c, j, ring.mul(&piv_inv, inv.get(c, j)));
        }
        for r in 0..n {
            if r == c || ring.is_zero(m.get(r, c)) {
                continue;
            }
            let f = m.get(r, c).clone();
            for j in 0..n {
                m.set(r, j, ring.sub(m.get(r, j), &ring.mul(&f, m.get(c, j))));
                inv.set(r, j, ring.sub(inv.get(r, j), &ring.mul(&f, inv.get(c, j))));
            }
        }
    }
    Some(inv)
}

fn swap_rows<E: Clone>(m: &mut Mat<E>, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols {
        m.data.swap(a * m.cols + j, b * m.cols + j);
    }
}

/// Rank over a field (every nonzero element a unit).
pub fn rank<R: Ring>(ring: &R, a: &Mat<R::Elem>) -> usize {
    let mut m = a.clone();
    let mut r = 0;
    for c in 0..m.cols {
        let Some(pr) = (r..m.rows).find(|&i| !ring.is_zero(m.get(i, c))) else {
            continue;
        };
        swap_rows(&mut m, r, pr);
        let piv_inv = ring.inv(m.get(r, c)).expect("rank over a field");
        for i in r + 1..m.rows {
            if ring.is_zero(m.get(i, c)) {
                continue;
            }
            let f = ring.mul(m.get(i, c), &piv_inv);
            for j in c..m.cols {
                m.set(i, j, ring.sub(m.get(i, j), &ring.mul(&f, m.get(r, j))));
            }
        }
        r += 1;
        if r == m.rows {
            break;
        }
    }
    r
}

/// Rows as `[a,b];[c,d]` using the ring's element text.
pub fn text<R: Ring>(ring: &R, a: &Mat<R::Elem>) -> String {
    let rows: Vec<String> = (0..a.rows)
        .map(|i| {
            let cells: Vec<String> = a.row(i).iter().map(|x| ring.text(x)).collect();
            cells.join("; ")
        })
        .collect();
    rows.join(" | ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FiniteField;
    use crate::ring::Integers;

    #[test]
    fn integer_det_and_mul() {
        let a = Mat::from_rows(alloc::vec![
            alloc::vec![2i128, 1, 0],
            alloc::vec![1, 3, 1],
            alloc::vec![0, 1, 4]
        ])
        .unwrap();
        assert_eq!(det(&Integers, &a).unwrap(), 18);
        let i3 = identity(&Integers, 3);
        assert_eq!(mul(&Integers, &a, &i3).unwrap(), a);
    }

    #[test]
    fn inverse_over_f5() {
        let f = FiniteField::new(5, 1).unwrap();
        let a = Mat::from_rows(alloc::vec![
            alloc::vec![f.from_i64(1), f.from_i64(2)],
            alloc::vec![f.from_i64(3), f.from_i64(4)]
        ])
        .unwrap();
        let inv = inverse(&f, &a).unwrap();
        assert!(is_identity(&f, &mul(&f, &a, &inv).unwrap()));
        let sing = Mat::from_rows(alloc::vec![
            alloc::vec![f.from_i64(1), f.from_i64(2)],
            alloc::vec![f.from_i64(2), f.from_i64(4)]
        ])
        .unwrap();
        assert!(inverse(&f, &sing).is_none());
        assert_eq!(rank(&f, &sing), 1);
    }
}
