//! Dense exact vectors and matrices with Gauss–Jordan elimination.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

use super::scalar::{Field, Scalar};
use super::subspace::Subspace;

/// A column vector over a fixed field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vector {
    field: Field,
    entries: Vec<Scalar>,
}

impl Vector {
    pub fn new(field: Field, entries: Vec<Scalar>) -> Result<Self> {
        for e in &entries {
            field.check(e.field())?;
        }
        Ok(Vector { field, entries })
    }

    pub(crate) fn from_entries_unchecked(field: Field, entries: Vec<Scalar>) -> Self {
        Vector { field, entries }
    }

    pub fn zeros(field: Field, len: usize) -> Self {
        Vector {
            field,
            entries: vec![field.zero(); len],
        }
    }

    pub fn from_ints(field: Field, values: &[i64]) -> Self {
        Vector {
            field,
            entries: values.iter().map(|&v| field.from_i64(v)).collect(),
        }
    }

    /// Standard basis vector `e_i` of length `len`.
    pub fn unit(field: Field, len: usize, i: usize) -> Self {
        let mut v = Vector::zeros(field, len);
        v.entries[i] = field.one();
        v
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &Scalar {
        &self.entries[i]
    }

    pub fn set(&mut self, i: usize, s: Scalar) {
        assert_eq!(s.field(), self.field, "scalar field mismatch");
        self.entries[i] = s;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn dot(&self, other: &Vector) -> Scalar {
        assert_eq!(self.len(), other.len(), "dot product length mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(self.field.zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, s: &Scalar) -> Vector {
        Vector {
            field: self.field,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    /// Entries at the given coordinate positions.
    pub fn select(&self, coords: &[usize]) -> Vector {
        Vector {
            field: self.field,
            entries: coords.iter().map(|&c| self.entries[c].clone()).collect(),
        }
    }

    pub fn concat(&self, other: &Vector) -> Vector {
        assert_eq!(self.field, other.field, "field mismatch");
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Vector {
            field: self.field,
            entries,
        }
    }

    /// Row matrix `1 × len`.
    pub fn as_row(&self) -> Matrix {
        Matrix {
            field: self.field,
            rows: 1,
            cols: self.len(),
            data: self.entries.clone(),
        }
    }

    /// Column matrix `len × 1`.
    pub fn as_column(&self) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.len(),
            cols: 1,
            data: self.entries.clone(),
        }
    }

    pub fn to_literals(&self) -> Vec<serde_json::Value> {
        self.entries.iter().map(Scalar::to_literal).collect()
    }

    pub fn from_literals(field: Field, values: &[serde_json::Value]) -> Result<Self> {
        let entries = values
            .iter()
            .map(|v| Scalar::from_literal(field, v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Vector { field, entries })
    }

    /// Index of this vector in base-`p` enumeration order (first coordinate most significant).
    pub fn index(&self) -> Option<u64> {
        let p = self.field.modulus()? as u64;
        let mut idx = 0u64;
        for e in &self.entries {
            idx = idx * p + e.residue()? as u64;
        }
        Some(idx)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl Add<&Vector> for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        Vector {
            field: self.field,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&Vector> for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        Vector {
            field: self.field,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector {
            field: self.field,
            entries: self.entries.iter().map(|a| -a).collect(),
        }
    }
}

/// Result of row reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Dense row-major matrix; all entries share one field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        for e in &data {
            field.check(e.field())?;
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// Builds a matrix from integer rows (reduced into `field`). All rows must
    /// share a length.
    pub fn from_ints<R: AsRef<[i64]>>(field: Field, rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged integer rows");
            data.extend(r.iter().map(|&v| field.from_i64(v)));
        }
        Matrix {
            field,
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Stacks row vectors; `cols` is needed for the empty case.
    pub fn from_rows(field: Field, cols: usize, rows: &[Vector]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            field.check(r.field())?;
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r.entries().iter().cloned());
        }
        Ok(Matrix {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Places vectors as columns; `rows` is needed for the empty case.
    pub fn from_columns(field: Field, rows: usize, cols: &[Vector]) -> Result<Self> {
        Ok(Matrix::from_rows(field, rows, cols)?.transpose())
    }

    pub fn from_literals(field: Field, rows: &[Vec<serde_json::Value>], cols: Option<usize>) -> Result<Self> {
        let cols = match (rows.first(), cols) {
            (Some(r), _) => r.len(),
            (None, Some(c)) => c,
            (None, None) => 0,
        };
        let vs = rows
            .iter()
            .map(|r| Vector::from_literals(field, r))
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(field, cols, &vs)
    }

    pub fn to_literals(&self) -> Vec<Vec<serde_json::Value>> {
        (0..self.rows)
            .map(|r| self.row_slice(r).iter().map(Scalar::to_literal).collect())
            .collect()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, s: Scalar) {
        assert_eq!(s.field(), self.field, "scalar field mismatch");
        self.data[r * self.cols + c] = s;
    }

    pub fn row_slice(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row(&self, r: usize) -> Vector {
        Vector::from_entries_unchecked(self.field, self.row_slice(r).to_vec())
    }

    pub fn col(&self, c: usize) -> Vector {
        Vector::from_entries_unchecked(self.field, (0..self.rows).map(|r| self.get(r, c).clone()).collect())
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn col_vectors(&self) -> Vec<Vector> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|e| e * s).collect(),
        }
    }

    pub fn checked_mul(&self, rhs: &Matrix) -> Result<Matrix> {
        self.field.check(rhs.field)?;
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn checked_mul_vec(&self, v: &Vector) -> Result<Vector> {
        self.field.check(v.field())?;
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(self.mul_vec(v))
    }

    /// `self · v`; panics on shape mismatch.
    pub fn mul_vec(&self, v: &Vector) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        let entries = (0..self.rows)
            .map(|r| {
                self.row_slice(r)
                    .iter()
                    .zip(v.entries())
                    .fold(self.field.zero(), |acc, (a, b)| if a.is_zero() { acc } else { acc + a * b })
            })
            .collect();
        Vector::from_entries_unchecked(self.field, entries)
    }

    fn zip_with(&self, rhs: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix shape mismatch");
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    /// `[self | rhs]`.
    pub fn hstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows, "hstack row mismatch");
        let mut data = Vec::with_capacity(self.data.len() + rhs.data.len());
        for r in 0..self.rows {
            data.extend(self.row_slice(r).iter().cloned());
            data.extend(rhs.row_slice(r).iter().cloned());
        }
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols + rhs.cols,
            data,
        }
    }

    /// `[self; rhs]`.
    pub fn vstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(rhs.data.iter().cloned());
        Matrix {
            field: self.field,
            rows: self.rows + rhs.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn block_diag(&self, rhs: &Matrix) -> Matrix {
        let top = self.hstack(&Matrix::zeros(self.field, self.rows, rhs.cols));
        let bottom = Matrix::zeros(self.field, rhs.rows, self.cols).hstack(rhs);
        top.vstack(&bottom)
    }

    /// Assembles a block matrix from a rectangular grid of blocks.
    pub fn from_blocks(grid: &[Vec<Matrix>]) -> Matrix {
        let mut rows_iter = grid.iter().map(|row| {
            let mut it = row.iter();
            let first = it.next().expect("empty block row").clone();
            it.fold(first, |acc, b| acc.hstack(b))
        });
        let first = rows_iter.next().expect("empty block grid");
        rows_iter.fold(first, |acc, r| acc.vstack(&r))
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        let mut data = Vec::with_capacity((r1 - r0) * (c1 - c0));
        for r in r0..r1 {
            data.extend(self.row_slice(r)[c0..c1].iter().cloned());
        }
        Matrix {
            field: self.field,
            rows: r1 - r0,
            cols: c1 - c0,
            data,
        }
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix {
            field: self.field,
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.select(rows, &cols)
    }

    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.select(&rows, cols)
    }

    /// Reduced row echelon form, rank and pivot columns.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(found) = (pivot_row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(found, pivot_row);
            let inv = m.get(pivot_row, col).inv().expect("nonzero pivot");
            for c in col..m.cols {
                let idx = pivot_row * m.cols + c;
                m.data[idx] = &m.data[idx] * &inv;
            }
            for r in 0..m.rows {
                if r == pivot_row {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let delta = &factor * m.get(pivot_row, c);
                    let idx = r * m.cols + c;
                    m.data[idx] = &m.data[idx] - &delta;
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        Rref {
            matrix: m,
            rank: pivots.len(),
            pivots,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Null space `{x : self·x = 0}` as a subspace of `F^cols`.
    pub fn kernel(&self) -> Subspace {
        let Rref { matrix, pivots, .. } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let basis: Vec<Vector> = free
            .iter()
            .map(|&fc| {
                let mut v = Vector::zeros(self.field, self.cols);
                v.set(fc, self.field.one());
                for (row, &pc) in pivots.iter().enumerate() {
                    v.set(pc, -matrix.get(row, fc));
                }
                v
            })
            .collect();
        Subspace::span(self.field, self.cols, &basis).expect("kernel basis has ambient length")
    }

    /// Column space as a subspace of `F^rows`.
    pub fn image(&self) -> Subspace {
        Subspace::from_rows(self.transpose())
    }

    /// Row space as a subspace of `F^cols`.
    pub fn row_space(&self) -> Subspace {
        Subspace::from_rows(self.clone())
    }

    /// Some `x` with `self·x = b`, with free coordinates set to zero, or
    /// `None` if `b` is not in the image.
    pub fn solve(&self, b: &Vector) -> Result<Option<Vector>> {
        self.field.check(b.field())?;
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let aug = self.hstack(&b.as_column());
        let Rref { matrix, pivots, .. } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = Vector::zeros(self.field, self.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            x.set(pc, matrix.get(row, self.cols).clone());
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(self.field, n));
        let Rref { matrix, pivots, .. } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(matrix.submatrix(0, n, n, 2 * n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for (c, e) in self.row_slice(r).iter().enumerate() {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{e}")?;
            }
        }
        write!(f, "]")
    }
}

impl Mul<&Matrix> for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl Mul<&Vector> for &Matrix {
    type Output = Vector;
    fn mul(self, rhs: &Vector) -> Vector {
        self.mul_vec(rhs)
    }
}

impl Add<&Matrix> for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub<&Matrix> for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}
