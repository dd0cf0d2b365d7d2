//! Affine symplectic dynamics and irreversible physical transformations.

use crate::epistemic::EpistemicState;
use crate::error::{Error, Result};
use crate::exactalg::{Matrix, Subspace, Vector};
use crate::phasespace::{OnticState, PhaseSpace};

/// A pair `(M, v)` acting as `x ↦ Mx + v` with `MᵀΩM = Ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineSymplectic {
    space: PhaseSpace,
    matrix: Matrix,
    shift: Vector,
}

/// First entry of `MᵀΩM − Ω` that is nonzero.
pub fn gate_violation(space: &PhaseSpace, m: &Matrix) -> Option<(usize, usize, String)> {
    let omega = space.omega();
    let lhs = &(&m.transpose() * omega) * m;
    let diff = &lhs - omega;
    for r in 0..diff.rows() {
        for c in 0..diff.cols() {
            if !diff.get(r, c).is_zero() {
                return Some((r, c, diff.get(r, c).to_string()));
            }
        }
    }
    None
}

pub fn is_symplectic(space: &PhaseSpace, m: &Matrix) -> bool {
    m.rows() == space.dim() && m.cols() == space.dim() && gate_violation(space, m).is_none()
}

impl AffineSymplectic {
    pub fn new(space: &PhaseSpace, matrix: Matrix, shift: Vector) -> Result<Self> {
        let d = space.dim();
        space.field().check(matrix.field())?;
        space.field().check(shift.field())?;
        for found in [matrix.rows(), matrix.cols(), shift.len()] {
            if found != d {
                return Err(Error::DimensionMismatch { expected: d, found });
            }
        }
        if let Some((row, col, value)) = gate_violation(space, &matrix) {
            return Err(Error::NotSymplectic { row, col, value });
        }
        Ok(AffineSymplectic {
            space: space.clone(),
            matrix,
            shift,
        })
    }

    pub fn linear(space: &PhaseSpace, matrix: Matrix) -> Result<Self> {
        let shift = Vector::zeros(space.field(), space.dim());
        AffineSymplectic::new(space, matrix, shift)
    }

    pub fn identity(space: &PhaseSpace) -> Self {
        AffineSymplectic {
            space: space.clone(),
            matrix: Matrix::identity(space.field(), space.dim()),
            shift: Vector::zeros(space.field(), space.dim()),
        }
    }

    /// Skips the gate. Callers must already know `matrix` is symplectic.
    pub(crate) fn new_unchecked(space: &PhaseSpace, matrix: Matrix, shift: Vector) -> Self {
        debug_assert!(is_symplectic(space, &matrix));
        AffineSymplectic {
            space: space.clone(),
            matrix,
            shift,
        }
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn shift(&self) -> &Vector {
        &self.shift
    }

    pub fn is_linear(&self) -> bool {
        self.shift.is_zero()
    }

    pub fn with_shift(&self, shift: Vector) -> Result<Self> {
        AffineSymplectic::new(&self.space, self.matrix.clone(), shift)
    }

    fn check_space(&self, other: &PhaseSpace) -> Result<()> {
        if &self.space == other {
            Ok(())
        } else {
            Err(Error::Parse(format!("phase space mismatch: {} vs {}", self.space, other)))
        }
    }

    /// `self ∘ inner`: `(s, u) ∘ (t, v) = (st, u + s v)`.
    pub fn compose(&self, inner: &AffineSymplectic) -> Result<Self> {
        self.check_space(&inner.space)?;
        Ok(AffineSymplectic {
            space: self.space.clone(),
            matrix: &self.matrix * &inner.matrix,
            shift: &self.shift + &(&self.matrix * &inner.shift),
        })
    }

    /// `(ΩᵀMᵀΩ, −M⁻¹v)`.
    pub fn inverse(&self) -> Self {
        let omega = self.space.omega();
        let inv = &(&omega.transpose() * &self.matrix.transpose()) * omega;
        let shift = -&(&inv * &self.shift);
        AffineSymplectic {
            space: self.space.clone(),
            matrix: inv,
            shift,
        }
    }

    /// `(M⁻¹)ᵀ = −ΩMΩ`.
    pub fn inverse_transpose(&self) -> Matrix {
        let omega = self.space.omega();
        -&(&(omega * &self.matrix) * omega)
    }

    pub fn apply_vec(&self, x: &Vector) -> Vector {
        &(&self.matrix * x) + &self.shift
    }

    pub fn apply(&self, x: &OnticState) -> Result<OnticState> {
        self.check_space(x.space())?;
        OnticState::new(&self.space, self.apply_vec(x.coords()))
    }

    /// Image of an epistemic state: `((M⁻¹)ᵀU, Ma + v)`.
    pub fn push_epistemic(&self, e: &EpistemicState) -> Result<EpistemicState> {
        self.check_space(e.space())?;
        let known = e.known().map(&self.inverse_transpose())?;
        EpistemicState::new(&self.space, known, &self.apply_vec(e.value_point()))
    }

    /// Embeds this map into a larger composite, acting as the identity on
    /// every factor not named. `factors[i]` receives the `i`-th factor of
    /// this map's space.
    pub fn lift(&self, target: &PhaseSpace, factors: &[&str]) -> Result<Self> {
        let own = self.space.factors();
        if own.len() != factors.len() {
            return Err(Error::DimensionMismatch {
                expected: own.len(),
                found: factors.len(),
            });
        }
        let mut index = Vec::with_capacity(self.space.dim());
        for (mine, key) in own.iter().zip(factors) {
            let theirs = target.factor(key)?;
            if theirs.n != mine.n {
                return Err(Error::DimensionMismatch {
                    expected: mine.dim(),
                    found: theirs.dim(),
                });
            }
            index.extend(theirs.range());
        }
        let field = target.field();
        let mut m = Matrix::identity(field, target.dim());
        let mut v = Vector::zeros(field, target.dim());
        for (i, &ti) in index.iter().enumerate() {
            v.set(ti, self.shift.get(i).clone());
            for (j, &tj) in index.iter().enumerate() {
                m.set(ti, tj, self.matrix.get(i, j).clone());
            }
        }
        AffineSymplectic::new(target, m, v)
    }

    pub fn to_literals(&self) -> (Vec<Vec<serde_json::Value>>, Vec<serde_json::Value>) {
        (self.matrix.to_literals(), self.shift.to_literals())
    }
}

/// An affine map `F x + w` from a larger space onto a symplectic factor
/// layout, realizable as a reversible map followed by discarding a subsystem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhysicalTransformation {
    domain: PhaseSpace,
    codomain: PhaseSpace,
    matrix: Matrix,
    shift: Vector,
    dilation: AffineSymplectic,
    kept: Vec<usize>,
}

impl PhysicalTransformation {
    /// Validates `F` against the leading factors of `domain`.
    pub fn new(domain: &PhaseSpace, codomain: &PhaseSpace, matrix: Matrix, shift: Vector) -> Result<Self> {
        if codomain.dim() > domain.dim() {
            return Err(Error::DimensionShrinkViolation {
                domain: domain.dim(),
                codomain: codomain.dim(),
            });
        }
        let keys: Vec<String> = (1..=codomain.factors().len()).map(|i| i.to_string()).collect();
        let refs: Vec<&str> = keys.iter().map(String::as_str).collect();
        PhysicalTransformation::new_into(domain, codomain, matrix, shift, &refs)
    }

    /// Validates `F`, identifying the codomain's factors with the named
    /// factors of `domain`. The remaining domain factors are discarded.
    pub fn new_into(
        domain: &PhaseSpace,
        codomain: &PhaseSpace,
        matrix: Matrix,
        shift: Vector,
        keep: &[&str],
    ) -> Result<Self> {
        let field = domain.field();
        field.check(codomain.field())?;
        field.check(matrix.field())?;
        field.check(shift.field())?;
        if codomain.dim() > domain.dim() {
            return Err(Error::DimensionShrinkViolation {
                domain: domain.dim(),
                codomain: codomain.dim(),
            });
        }
        if matrix.rows() != codomain.dim() || matrix.cols() != domain.dim() {
            return Err(Error::DimensionMismatch {
                expected: codomain.dim() * domain.dim(),
                found: matrix.rows() * matrix.cols(),
            });
        }
        if shift.len() != codomain.dim() {
            return Err(Error::DimensionMismatch {
                expected: codomain.dim(),
                found: shift.len(),
            });
        }
        if keep.len() != codomain.factors().len() {
            return Err(Error::NotPhysical("codomain factors must each be matched to a domain factor".into()));
        }
        let mut kept = Vec::new();
        let mut kept_factors = Vec::new();
        for (cf, key) in codomain.factors().iter().zip(keep) {
            let df = domain.factor(key)?;
            if df.n != cf.n {
                return Err(Error::NotPhysical(format!(
                    "factor `{key}` has {} degrees of freedom, codomain factor `{}` has {}",
                    df.n, cf.name, cf.n
                )));
            }
            if kept_factors.contains(&df.offset) {
                return Err(Error::NotPhysical(format!("factor `{key}` used twice")));
            }
            kept_factors.push(df.offset);
            kept.extend(df.range());
        }

        if matrix.rank() != codomain.dim() {
            return Err(Error::NotPhysical("linear part is not surjective".into()));
        }
        let kernel = matrix.kernel();
        let complement = domain.symplectic_complement(&kernel)?;
        if !kernel.intersection(&complement)?.is_zero() {
            return Err(Error::NotPhysical("kernel is not a symplectic subspace".into()));
        }
        let cbasis = complement.basis_vectors();
        for (i, x) in cbasis.iter().enumerate() {
            for (j, y) in cbasis.iter().enumerate() {
                let before = domain.form(x, y)?;
                let after = codomain.form(&(&matrix * x), &(&matrix * y))?;
                if before != after {
                    return Err(Error::NotPhysical(format!(
                        "form not preserved on the kernel complement: basis pair ({i}, {j}) maps {before} to {after}"
                    )));
                }
            }
        }

        // Send a Darboux basis of the kernel onto the canonical basis of the discarded factors.
        let (es, fs) = domain.darboux_basis(&kernel)?;
        let mut targets_q = Vec::new();
        let mut targets_p = Vec::new();
        for f in domain.factors() {
            if kept_factors.contains(&f.offset) {
                continue;
            }
            for i in 0..f.n {
                targets_q.push(Vector::unit(field, domain.dim(), f.offset + i));
                targets_p.push(Vector::unit(field, domain.dim(), f.offset + f.n + i));
            }
        }
        let d = domain.dim();
        let mut source_cols = cbasis.clone();
        source_cols.extend(es.iter().cloned());
        source_cols.extend(fs.iter().cloned());
        let mut image_cols = vec![Vector::zeros(field, d); cbasis.len()];
        image_cols.extend(targets_q);
        image_cols.extend(targets_p);
        let b = Matrix::from_columns(field, d, &source_cols)?;
        let g = &Matrix::from_columns(field, d, &image_cols)? * &b.inverse().ok_or_else(|| {
            Error::NotPhysical("kernel and its complement do not span the domain".into())
        })?;

        let mut dil = g;
        let mut dshift = Vector::zeros(field, d);
        for (row, &pos) in kept.iter().enumerate() {
            dshift.set(pos, shift.get(row).clone());
            for c in 0..d {
                dil.set(pos, c, matrix.get(row, c).clone());
            }
        }
        let dilation = AffineSymplectic::new(domain, dil, dshift)
            .map_err(|e| Error::NotPhysical(format!("dilation fails the symplectic gate: {e}")))?;
        Ok(PhysicalTransformation {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix,
            shift,
            dilation,
            kept,
        })
    }

    pub fn domain(&self) -> &PhaseSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &PhaseSpace {
        &self.codomain
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn shift(&self) -> &Vector {
        &self.shift
    }

    /// A reversible map on the domain whose kept coordinates reproduce this map.
    pub fn dilate(&self) -> &AffineSymplectic {
        &self.dilation
    }

    /// Domain coordinates carrying the codomain.
    pub fn kept_coordinates(&self) -> &[usize] {
        &self.kept
    }

    pub fn apply_vec(&self, x: &Vector) -> Vector {
        &(&self.matrix * x) + &self.shift
    }

    /// The kernel of the linear part.
    pub fn kernel(&self) -> Subspace {
        self.matrix.kernel()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Field;

    const Z2: Field = Field::Prime(2);
    const Q: Field = Field::Rationals;

    fn pos_meas(field: Field) -> Matrix {
        Matrix::from_ints(field, &[[1, 0, 0, 0], [0, 1, 0, -1], [1, 0, 1, 0], [0, 0, 0, 1]])
    }

    #[test]
    fn gate_examples() {
        let v = PhaseSpace::new(Q, 1).unwrap();
        assert!(AffineSymplectic::new(&v, Matrix::identity(Q, 2), Vector::zeros(Q, 2)).is_ok());
        let err = AffineSymplectic::linear(&v, Matrix::from_ints(Q, &[[1, 0], [0, 2]])).unwrap_err();
        assert!(matches!(err, Error::NotSymplectic { row: 0, col: 1, .. }));
        for field in [Z2, Field::Prime(3), Q] {
            let j = PhaseSpace::new(field, 1).unwrap().direct_sum(&PhaseSpace::new(field, 1).unwrap()).unwrap();
            assert!(AffineSymplectic::linear(&j, pos_meas(field)).is_ok());
        }
    }

    #[test]
    fn inverse_examples() {
        let j = PhaseSpace::new(Q, 1).unwrap().direct_sum(&PhaseSpace::new(Q, 1).unwrap()).unwrap();
        let m = AffineSymplectic::new(&j, pos_meas(Q), Vector::from_ints(Q, &[1, -2, 3, 5])).unwrap();
        let inv = m.inverse();
        assert_eq!(inv.compose(&m).unwrap(), AffineSymplectic::identity(&j));
        assert_eq!(m.compose(&inv).unwrap(), AffineSymplectic::identity(&j));
        assert_eq!(m.inverse_transpose(), inv.matrix().transpose());
        assert_eq!(m.inverse_transpose(), m.matrix().inverse().unwrap().transpose());

        let v = PhaseSpace::new(Z2, 1).unwrap();
        let w = AffineSymplectic::linear(&v, v.omega().clone()).unwrap();
        assert_eq!(w.inverse().matrix(), v.omega());
    }

    #[test]
    fn apply_position_measurement() {
        let j = PhaseSpace::new(Q, 1).unwrap().direct_sum(&PhaseSpace::new(Q, 1).unwrap()).unwrap();
        let m = AffineSymplectic::linear(&j, pos_meas(Q)).unwrap();
        let x = OnticState::from_ints(&j, &[3, 5, 7, 11]).unwrap();
        assert_eq!(m.apply(&x).unwrap(), OnticState::from_ints(&j, &[3, -6, 10, 11]).unwrap());
    }

    #[test]
    fn lift_into_three_factors() {
        let f = Z2;
        let s = PhaseSpace::new(f, 1).unwrap().named("S");
        let a1 = PhaseSpace::new(f, 1).unwrap().named("A1");
        let a2 = PhaseSpace::new(f, 1).unwrap().named("A2");
        let joint = PhaseSpace::compose(&[a1.clone(), s.clone(), a2]).unwrap();
        let pair = s.direct_sum(&a1).unwrap();
        let m = AffineSymplectic::linear(&pair, pos_meas(f)).unwrap();
        let big = m.lift(&joint, &["S", "A1"]).unwrap();
        let x = Vector::from_ints(f, &[1, 0, 1, 0, 1, 1]);
        // S = (1, 0), A1 = (1, 0): A1.q becomes 1 + 1 = 0.
        assert_eq!(big.apply_vec(&x), Vector::from_ints(f, &[0, 0, 1, 0, 1, 1]));
    }

    #[test]
    fn discarding_a_subsystem_is_physical() {
        let s = PhaseSpace::new(Q, 1).unwrap().named("S");
        let a = PhaseSpace::new(Q, 1).unwrap().named("A");
        let j = s.direct_sum(&a).unwrap();
        let proj = Matrix::from_ints(Q, &[[1, 0, 0, 0], [0, 1, 0, 0]]);
        let pt = PhysicalTransformation::new(&j, &s, proj, Vector::zeros(Q, 2)).unwrap();
        assert_eq!(pt.dilate(), &AffineSymplectic::identity(&j));

        let same = PhysicalTransformation::new(&j, &j, pos_meas(Q), Vector::zeros(Q, 4)).unwrap();
        assert_eq!(same.dilate().matrix(), &pos_meas(Q));

        let err = PhysicalTransformation::new(&s, &j, Matrix::zeros(Q, 4, 2), Vector::zeros(Q, 4)).unwrap_err();
        assert!(matches!(err, Error::DimensionShrinkViolation { domain: 2, codomain: 4 }));

        let squash = Matrix::from_ints(Q, &[[2, 0, 0, 0], [0, 1, 0, 0]]);
        assert!(matches!(
            PhysicalTransformation::new(&j, &s, squash, Vector::zeros(Q, 2)),
            Err(Error::NotPhysical(_))
        ));
    }

    #[test]
    fn mixing_before_discarding_dilates() {
        let s = PhaseSpace::new(Q, 1).unwrap().named("S");
        let a = PhaseSpace::new(Q, 1).unwrap().named("A");
        let j = s.direct_sum(&a).unwrap();
        // Keep A after a position measurement.
        let f = pos_meas(Q).submatrix(2, 4, 0, 4);
        let w = Vector::from_ints(Q, &[1, 1]);
        let pt = PhysicalTransformation::new_into(&j, &a, f.clone(), w.clone(), &["A"]).unwrap();
        let x = Vector::from_ints(Q, &[2, 3, 5, 7]);
        let full = pt.dilate().apply_vec(&x);
        assert_eq!(full.select(&[2, 3]), pt.apply_vec(&x));
    }
}
