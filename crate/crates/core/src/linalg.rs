//! Dense matrices over the exact scalar types of the crate.

use alloc::{format, vec, vec::Vec};
use core::fmt;

use crate::cyclotomic::{CycNum, Field};
use crate::error::{Error, Result};
use crate::poly::{Laurent, Poly};

/// Ring operations shared by every exact scalar type.
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    fn zero_in(field: &Field) -> Self;
    fn one_in(field: &Field) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    fn is_zero(&self) -> bool;
}

/// Scalars that form a field.
pub trait FieldScalar: Scalar {
    fn recip(&self) -> Result<Self>;
}

impl Scalar for CycNum {
    fn zero_in(field: &Field) -> Self {
        CycNum::zero(field)
    }
    fn one_in(field: &Field) -> Self {
        CycNum::one(field)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        CycNum::is_zero(self)
    }
}

impl FieldScalar for CycNum {
    fn recip(&self) -> Result<Self> {
        self.inv()
    }
}

impl Scalar for Poly {
    fn zero_in(field: &Field) -> Self {
        Poly::zero(field)
    }
    fn one_in(field: &Field) -> Self {
        Poly::one(field)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
}

impl Scalar for Laurent {
    fn zero_in(field: &Field) -> Self {
        Laurent::zero(field)
    }
    fn one_in(field: &Field) -> Self {
        Laurent::one(field)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn is_zero(&self) -> bool {
        Laurent::is_zero(self)
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type CycMat = Matrix<CycNum>;

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            f.write_str("  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{:?}", self.data[i * self.cols + j])?;
            }
            f.write_str("]\n")?;
        }
        Ok(())
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn from_vec(field: &Field, rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_vec(field, r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![T::zero_in(field); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one_in(field);
        }
        m
    }

    pub fn diagonal(field: &Field, diag: Vec<T>) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(field, n, n);
        for (i, d) in diag.into_iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
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

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<U: Scalar>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U: Scalar>(&self, f: impl FnMut(&T) -> Result<U>) -> Result<Matrix<U>> {
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(&self.field, self.rows)
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            field: self.field.clone(),
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: Option<T> = None;
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let p = a.times(b);
                    acc = Some(match acc {
                        None => p,
                        Some(s) => s.plus(&p),
                    });
                }
                data.push(acc.unwrap_or_else(|| T::zero_in(&self.field)));
            }
        }
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.plus(b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.minus(b))
                .collect(),
        })
    }

    pub fn neg(&self) -> Self {
        self.map(Scalar::negate)
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|a| a.times(c))
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut data = Vec::with_capacity((r1 - r0) * (c1 - c0));
        for i in r0..r1 {
            data.extend_from_slice(&self.data[i * self.cols + c0..i * self.cols + c1]);
        }
        Matrix {
            field: self.field.clone(),
            rows: r1 - r0,
            cols: c1 - c0,
            data,
        }
    }

    /// Writes `src` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, src: &Self) {
        for i in 0..src.rows {
            for j in 0..src.cols {
                self.set(r0 + i, c0 + j, src.get(i, j).clone());
            }
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            for &j in cols {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: cols.len(),
            data,
        }
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend_from_slice(self.row(i));
        }
        Matrix {
            field: self.field.clone(),
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack row counts differ".into()));
        }
        let mut data = Vec::with_capacity(self.rows * (self.cols + other.cols));
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        })
    }

    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(
                "vstack column counts differ".into(),
            ));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn block_diag(field: &Field, blocks: &[Self]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(field, n, m);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(&self.field, rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(
                            i * other.rows + k,
                            j * other.cols + l,
                            a.times(other.get(k, l)),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> T {
        let mut acc = T::zero_in(&self.field);
        for i in 0..self.rows.min(self.cols) {
            acc = acc.plus(self.get(i, i));
        }
        acc
    }
}

/// Result of Gaussian elimination to reduced row echelon form.
pub struct Echelon<T> {
    pub reduced: Matrix<T>,
    pub pivots: Vec<usize>,
}

impl<T: FieldScalar> Matrix<T> {
    /// Reduced row echelon form (Gauss–Jordan).
    pub fn rref(&self) -> Echelon<T> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, row * m.cols + j);
                }
            }
            let inv = m.get(row, col).recip().expect("pivot is nonzero");
            for j in col..m.cols {
                let v = m.get(row, j).times(&inv);
                m.set(row, j, v);
            }
            for i in 0..m.rows {
                if i == row {
                    continue;
                }
                let factor = m.get(i, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in col..m.cols {
                    let pj = m.get(row, j);
                    if pj.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j).minus(&factor.times(pj));
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right kernel, one column per basis vector.
    pub fn nullspace(&self) -> Matrix<T> {
        let Echelon { reduced, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zeros(&self.field, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            basis.set(fc, k, T::one_in(&self.field));
            for (r, &pc) in pivots.iter().enumerate() {
                basis.set(pc, k, reduced.get(r, fc).negate());
            }
        }
        basis
    }

    /// Solves `self · X = rhs`; errors if inconsistent.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        if rhs.rows != self.rows {
            return Err(Error::DimensionMismatch("solve: row counts differ".into()));
        }
        let aug = self.hstack(rhs)?;
        let Echelon { reduced, pivots } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Err(Error::Singular);
        }
        let mut x = Matrix::zeros(&self.field, self.cols, rhs.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, reduced.get(r, self.cols + j).clone());
            }
        }
        Ok(x)
    }

    /// Determinant by Gaussian elimination.
    pub fn det_gauss(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "determinant of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = T::one_in(&self.field);
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !m.get(i, col).is_zero()) else {
                return Ok(T::zero_in(&self.field));
            };
            if p != col {
                for j in 0..n {
                    m.data.swap(p * n + j, col * n + j);
                }
                det = det.negate();
            }
            let pivot = m.get(col, col).clone();
            det = det.times(&pivot);
            let inv = pivot.recip()?;
            for i in col + 1..n {
                let factor = m.get(i, col).times(&inv);
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = m.get(i, j).minus(&factor.times(m.get(col, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Inverse by Gauss–Jordan elimination.
    pub fn inverse_gauss(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "inverse of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(&self.field, n))?;
        let Echelon { reduced, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        Ok(reduced.block(0, n, n, 2 * n))
    }
}

impl Matrix<Poly> {
    /// Fraction-free (Bareiss) determinant over the polynomial ring.
    pub fn det_bareiss(&self) -> Result<Poly> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "determinant of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Poly::one(&self.field));
        }
        let mut m = self.clone();
        let mut sign = false;
        let mut prev = Poly::one(&self.field);
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                    return Ok(Poly::zero(&self.field));
                };
                for j in 0..n {
                    m.data.swap(p * n + j, k * n + j);
                }
                sign = !sign;
            }
            let pivot = m.get(k, k).clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = pivot
                        .mul(m.get(i, j))
                        .sub(&m.get(i, k).mul(m.get(k, j)))
                        .div_exact(&prev)?;
                    m.set(i, j, v);
                }
                m.set(i, k, Poly::zero(&self.field));
            }
            prev = pivot;
        }
        let d = m.get(n - 1, n - 1).clone();
        Ok(if sign { d.neg() } else { d })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::CycField;

    fn ints(f: &Field, rows: &[&[i64]]) -> CycMat {
        Matrix::from_rows(
            f,
            rows.iter()
                .map(|r| r.iter().map(|&x| CycNum::from_int(f, x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn inverse_and_determinant() {
        let f = CycField::new(1).unwrap();
        let a = ints(&f, &[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(a.det_gauss().unwrap(), CycNum::from_int(&f, 18));
        let inv = a.inverse_gauss().unwrap();
        assert!(a.mul(&inv).unwrap().is_identity());
    }

    #[test]
    fn nullspace_of_rank_one() {
        let f = CycField::new(1).unwrap();
        let a = ints(&f, &[&[1, 2, 3], &[2, 4, 6]]);
        let k = a.nullspace();
        assert_eq!(k.cols(), 2);
        assert!(a.mul(&k).unwrap().is_zero());
    }

    #[test]
    fn bareiss_matches_gauss() {
        let f = CycField::new(1).unwrap();
        let p = |c: &[i64]| Poly::from_ints(&f, c);
        let m = Matrix::from_rows(
            &f,
            vec![
                vec![p(&[0, 1]), p(&[1]), p(&[2, 0, 1])],
                vec![p(&[1, 1]), p(&[0, 0, 1]), p(&[3])],
                vec![p(&[1]), p(&[1, 2]), p(&[0, 1])],
            ],
        )
        .unwrap();
        let d = m.det_bareiss().unwrap();
        // cofactor expansion oracle
        let e = |i: usize, j: usize| m.get(i, j).clone();
        let minor = |a: usize, b: usize, c: usize, d: usize| {
            e(a, c).mul(&e(b, d)).sub(&e(a, d).mul(&e(b, c)))
        };
        let oracle = e(0, 0)
            .mul(&minor(1, 2, 1, 2))
            .sub(&e(0, 1).mul(&minor(1, 2, 0, 2)))
            .add(&e(0, 2).mul(&minor(1, 2, 0, 1)));
        assert_eq!(d, oracle);
    }
}
