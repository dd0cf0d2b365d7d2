//! Linear and affine subspaces in canonical (RREF) form.

use std::fmt;

use crate::error::{Error, Result};

use super::matrix::{Matrix, Vector};
use super::scalar::Field;

/// A linear subspace of `F^ambient`, stored as the RREF of its row span.
///
/// Because the basis is canonical, `==` is subspace equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    /// Row space of `m`.
    pub fn from_rows(m: Matrix) -> Self {
        let ambient = m.cols();
        let r = m.rref();
        let basis = r.matrix.submatrix(0, r.rank, 0, ambient);
        Subspace {
            ambient,
            basis,
            pivots: r.pivots,
        }
    }

    pub fn span(field: Field, ambient: usize, vectors: &[Vector]) -> Result<Self> {
        Ok(Subspace::from_rows(Matrix::from_rows(field, ambient, vectors)?))
    }

    pub fn zero(field: Field, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(field, 0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Field, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of the standard basis vectors `e_offset .. e_{offset+len-1}`.
    pub fn coordinate_block(field: Field, ambient: usize, offset: usize, len: usize) -> Self {
        let vs: Vec<Vector> = (offset..offset + len).map(|i| Vector::unit(field, ambient, i)).collect();
        Subspace::span(field, ambient, &vs).expect("unit vectors have ambient length")
    }

    pub fn field(&self) -> Field {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Canonical basis, one vector per row.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        self.basis.row_vectors()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_ambient(&self, other: usize) -> Result<()> {
        if self.ambient == other {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: other,
            })
        }
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        self.field().check(other.field())?;
        self.check_ambient(other.ambient)
    }

    /// Subtracts the pivot components of `x`; zero iff `x` lies in the subspace.
    fn reduce(&self, x: &Vector) -> Vector {
        let mut r = x.clone();
        for (row, &pc) in self.pivots.iter().enumerate() {
            let c = r.get(pc).clone();
            if c.is_zero() {
                continue;
            }
            r = &r - &self.basis.row(row).scale(&c);
        }
        r
    }

    pub fn contains(&self, x: &Vector) -> Result<bool> {
        self.field().check(x.field())?;
        self.check_ambient(x.len())?;
        Ok(self.reduce(x).is_zero())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(other.basis_vectors().iter().all(|v| self.reduce(v).is_zero()))
    }

    /// Unique representative of `a + self` with zeros at the pivot coordinates.
    pub fn coset_canonical_rep(&self, a: &Vector) -> Result<Vector> {
        self.field().check(a.field())?;
        self.check_ambient(a.len())?;
        Ok(self.reduce(a))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        Ok(Subspace::from_rows(self.basis.vstack(&other.basis)))
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let constraints = self
            .orthogonal_complement()
            .basis
            .vstack(&other.orthogonal_complement().basis);
        Ok(constraints.kernel())
    }

    /// `{x : ⟨u, x⟩ = 0 for all u}` for the standard dot product.
    pub fn orthogonal_complement(&self) -> Subspace {
        self.basis.kernel()
    }

    /// Image of the subspace under the linear map `m` (acting on columns).
    pub fn map(&self, m: &Matrix) -> Result<Subspace> {
        self.field().check(m.field())?;
        self.check_ambient(m.cols())?;
        Ok(m.checked_mul(&self.basis.transpose())?.image())
    }

    /// Places the subspace at coordinates `offset..` of `F^ambient`.
    pub fn embed(&self, ambient: usize, offset: usize) -> Result<Subspace> {
        if offset + self.ambient > ambient {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                found: offset + self.ambient,
            });
        }
        let field = self.field();
        let left = Matrix::zeros(field, self.dim(), offset);
        let right = Matrix::zeros(field, self.dim(), ambient - offset - self.ambient);
        Ok(Subspace::from_rows(left.hstack(&self.basis).hstack(&right)))
    }

    /// Image under the coordinate projection onto `offset..offset+len`.
    pub fn project(&self, offset: usize, len: usize) -> Result<Subspace> {
        if offset + len > self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: offset + len,
            });
        }
        Ok(Subspace::from_rows(self.basis.submatrix(0, self.dim(), offset, offset + len)))
    }

    /// Intersection with the coordinate block `offset..offset+len`, expressed
    /// in that block's coordinates.
    pub fn restrict(&self, offset: usize, len: usize) -> Result<Subspace> {
        let block = Subspace::coordinate_block(self.field(), self.ambient, offset, len);
        self.intersection(&block)?.project(offset, len)
    }

    /// All elements; finite fields only.
    pub fn elements(&self) -> Result<Vec<Vector>> {
        let field = self.field();
        let coeffs = all_vectors(field, self.dim())?;
        Ok(coeffs
            .iter()
            .map(|c| {
                let mut v = Vector::zeros(field, self.ambient);
                for (i, ci) in c.entries().iter().enumerate() {
                    if !ci.is_zero() {
                        v = &v + &self.basis.row(i).scale(ci);
                    }
                }
                v
            })
            .collect())
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for (i, v) in self.basis_vectors().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// `point + direction`, with `point` the canonical coset representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineSubspace {
    direction: Subspace,
    point: Vector,
}

impl AffineSubspace {
    pub fn new(direction: Subspace, point: &Vector) -> Result<Self> {
        let point = direction.coset_canonical_rep(point)?;
        Ok(AffineSubspace { direction, point })
    }

    pub fn direction(&self) -> &Subspace {
        &self.direction
    }

    pub fn point(&self) -> &Vector {
        &self.point
    }

    pub fn dim(&self) -> usize {
        self.direction.dim()
    }

    pub fn contains(&self, x: &Vector) -> Result<bool> {
        self.direction.contains(&(x - &self.point))
    }

    pub fn elements(&self) -> Result<Vec<Vector>> {
        Ok(self
            .direction
            .elements()?
            .iter()
            .map(|d| d + &self.point)
            .collect())
    }
}

/// Number of vectors in `F_p^dim`, if it fits.
pub fn vector_count(field: Field, dim: usize) -> Result<u64> {
    let p = field.modulus().ok_or(Error::NotEnumerable("vector spaces"))? as u64;
    let mut n = 1u64;
    for _ in 0..dim {
        n = n
            .checked_mul(p)
            .ok_or_else(|| Error::CapExceeded(format!("{field}^{dim} is too large")))?;
    }
    Ok(n)
}

/// The vector with base-`p` index `idx` (first coordinate most significant).
pub fn vector_from_index(field: Field, dim: usize, mut idx: u64) -> Result<Vector> {
    let p = field.modulus().ok_or(Error::NotEnumerable("vector spaces"))? as u64;
    let mut entries = vec![field.zero(); dim];
    for slot in entries.iter_mut().rev() {
        *slot = field.element((idx % p) as u32);
        idx /= p;
    }
    Vector::new(field, entries)
}

/// Every vector of `F_p^dim` in index order.
pub fn all_vectors(field: Field, dim: usize) -> Result<Vec<Vector>> {
    let n = vector_count(field, dim)?;
    (0..n).map(|i| vector_from_index(field, dim, i)).collect()
}

/// Every subspace of `F_p^ambient`, each exactly once, enumerated through
/// RREF pivot patterns.
pub fn all_subspaces(field: Field, ambient: usize) -> Result<Vec<Subspace>> {
    let mut out = Vec::new();
    for k in 0..=ambient {
        out.extend(subspaces_of_dim(field, ambient, k)?);
    }
    Ok(out)
}

/// Every `k`-dimensional subspace of `F_p^ambient`.
pub fn subspaces_of_dim(field: Field, ambient: usize, k: usize) -> Result<Vec<Subspace>> {
    field.modulus().ok_or(Error::NotEnumerable("subspaces"))?;
    let mut out = Vec::new();
    for pivots in combinations(ambient, k) {
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(row, &pc)| {
                let pivots = &pivots;
                (pc + 1..ambient)
                    .filter(move |c| !pivots.contains(c))
                    .map(move |c| (row, c))
            })
            .collect();
        for fill in all_vectors(field, free.len())? {
            let mut m = Matrix::zeros(field, k, ambient);
            for (row, &pc) in pivots.iter().enumerate() {
                m.set(row, pc, field.one());
            }
            for (&(row, c), val) in free.iter().zip(fill.entries()) {
                m.set(row, c, val.clone());
            }
            out.push(Subspace {
                ambient,
                basis: m,
                pivots: pivots.clone(),
            });
        }
    }
    Ok(out)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}
