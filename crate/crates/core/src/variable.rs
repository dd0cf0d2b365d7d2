//! Variables of toy systems and the Poisson condition.

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::exactalg::{all_vectors, vector_count, Matrix, Scalar, Subspace, Vector};
use crate::phasespace::PhaseSpace;

/// A linear map `Z : V → F^k`, one functional per row. Row order is kept.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearVariable {
    space: PhaseSpace,
    z: Matrix,
}

/// `f₁ Ω f₂ᵀ` for two functionals written as rows.
pub fn poisson_bracket(space: &PhaseSpace, f1: &Vector, f2: &Vector) -> Result<Scalar> {
    space.form(f1, f2)
}

impl LinearVariable {
    pub fn new(space: &PhaseSpace, z: Matrix) -> Result<Self> {
        space.field().check(z.field())?;
        if z.cols() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: z.cols(),
            });
        }
        Ok(LinearVariable {
            space: space.clone(),
            z,
        })
    }

    pub fn from_ints<R: AsRef<[i64]>>(space: &PhaseSpace, rows: &[R]) -> Result<Self> {
        let z = if rows.is_empty() {
            Matrix::zeros(space.field(), 0, space.dim())
        } else {
            Matrix::from_ints(space.field(), rows)
        };
        LinearVariable::new(space, z)
    }

    /// The variable whose functionals are the canonical basis of `w`.
    pub fn from_subspace(space: &PhaseSpace, w: &Subspace) -> Result<Self> {
        LinearVariable::new(space, w.basis().clone())
    }

    /// No functionals: every state looks the same.
    pub fn trivial(space: &PhaseSpace) -> Self {
        LinearVariable {
            space: space.clone(),
            z: Matrix::zeros(space.field(), 0, space.dim()),
        }
    }

    /// The full ontic state.
    pub fn identity(space: &PhaseSpace) -> Self {
        LinearVariable {
            space: space.clone(),
            z: Matrix::identity(space.field(), space.dim()),
        }
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    pub fn matrix(&self) -> &Matrix {
        &self.z
    }

    pub fn value_dim(&self) -> usize {
        self.z.rows()
    }

    pub fn eval(&self, x: &Vector) -> Vector {
        &self.z * x
    }

    /// `Z Ω Zᵀ`.
    pub fn bracket_matrix(&self) -> Matrix {
        &(&self.z * self.space.omega()) * &self.z.transpose()
    }

    /// First pair of rows with a nonzero bracket.
    pub fn poisson_witness(&self) -> Option<(usize, usize, Scalar)> {
        let b = self.bracket_matrix();
        for i in 0..b.rows() {
            for j in i + 1..b.cols() {
                if !b.get(i, j).is_zero() {
                    return Some((i, j, b.get(i, j).clone()));
                }
            }
        }
        None
    }

    pub fn is_poisson(&self) -> bool {
        self.bracket_matrix().is_zero()
    }

    pub fn require_poisson(&self) -> Result<()> {
        match self.poisson_witness() {
            None => Ok(()),
            Some((i, j, v)) => Err(Error::NotPoisson {
                i,
                j,
                value: v.to_string(),
            }),
        }
    }

    pub fn kernel(&self) -> Subspace {
        self.z.kernel()
    }

    pub fn row_space(&self) -> Subspace {
        self.z.row_space()
    }

    /// Same partition of phase space, i.e. equal kernels.
    pub fn equivalent(&self, other: &LinearVariable) -> Result<bool> {
        if self.space != other.space {
            return Err(Error::Parse("variables live on different phase spaces".into()));
        }
        Ok(self.kernel() == other.kernel())
    }

    /// Preimage classes `Z⁻¹(x)`, in order of first appearance; finite fields only.
    pub fn fibers(&self) -> Result<Vec<Vec<Vector>>> {
        GeneralVariable::from_linear(self)?.fibers()
    }
}

/// An arbitrary labelling of the (finite) phase space, indexed by state index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralVariable {
    space: PhaseSpace,
    labels: Vec<u32>,
}

impl GeneralVariable {
    /// Labels each state by `f`; equal keys get equal labels.
    pub fn from_fn<K: Hash + Eq>(space: &PhaseSpace, f: impl Fn(&Vector) -> K) -> Result<Self> {
        let mut seen: HashMap<K, u32> = HashMap::new();
        let mut labels = Vec::new();
        for x in all_vectors(space.field(), space.dim())? {
            let k = f(&x);
            let next = seen.len() as u32;
            labels.push(*seen.entry(k).or_insert(next));
        }
        Ok(GeneralVariable {
            space: space.clone(),
            labels,
        })
    }

    pub fn from_linear(v: &LinearVariable) -> Result<Self> {
        GeneralVariable::from_fn(v.space(), |x| v.eval(x))
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    pub fn label(&self, x: &Vector) -> u32 {
        self.labels[x.index().expect("finite field vector") as usize]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn fibers(&self) -> Result<Vec<Vec<Vector>>> {
        let n = vector_count(self.space.field(), self.space.dim())?;
        let mut classes: Vec<Vec<Vector>> = Vec::new();
        for (i, &l) in self.labels.iter().enumerate().take(n as usize) {
            let l = l as usize;
            if classes.len() <= l {
                classes.resize(l + 1, Vec::new());
            }
            classes[l].push(crate::exactalg::vector_from_index(self.space.field(), self.space.dim(), i as u64)?);
        }
        Ok(classes)
    }

    /// Same partition of phase space.
    pub fn same_partition(&self, other: &GeneralVariable) -> bool {
        if self.labels.len() != other.labels.len() {
            return false;
        }
        let mut fwd: HashMap<u32, u32> = HashMap::new();
        let mut back: HashMap<u32, u32> = HashMap::new();
        self.labels.iter().zip(&other.labels).all(|(&a, &b)| {
            *fwd.entry(a).or_insert(b) == b && *back.entry(b).or_insert(a) == a
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Field;
    use crate::phasespace::SubspaceClass;

    const Z2: Field = Field::Prime(2);
    const Z3: Field = Field::Prime(3);

    #[test]
    fn poisson_examples() {
        let v = PhaseSpace::new(Z2, 1).unwrap();
        assert!(LinearVariable::from_ints(&v, &[[1, 0]]).unwrap().is_poisson());
        assert!(LinearVariable::from_ints(&v, &[[0, 1]]).unwrap().is_poisson());
        assert!(LinearVariable::trivial(&v).is_poisson());
        let id = LinearVariable::identity(&v);
        assert!(!id.is_poisson());
        assert!(matches!(id.require_poisson(), Err(Error::NotPoisson { i: 0, j: 1, .. })));
        let v2 = PhaseSpace::new(Field::Rationals, 2).unwrap();
        let qs = LinearVariable::from_ints(&v2, &[[1, 0, 0, 0], [0, 1, 0, 0]]).unwrap();
        assert!(qs.is_poisson());
        assert_eq!(v2.classify(&qs.row_space()).unwrap(), SubspaceClass::Lagrangian);
    }

    #[test]
    fn bracket_examples() {
        let v = PhaseSpace::new(Z3, 1).unwrap();
        let q = Vector::from_ints(Z3, &[1, 0]);
        let p = Vector::from_ints(Z3, &[0, 1]);
        assert!(poisson_bracket(&v, &q, &q).unwrap().is_zero());
        assert!(poisson_bracket(&v, &q, &p).unwrap().is_one());
    }

    #[test]
    fn fibers_examples() {
        let v = PhaseSpace::new(Z2, 1).unwrap();
        let pos = LinearVariable::from_ints(&v, &[[1, 0]]).unwrap();
        let classes: Vec<Vec<u64>> = pos
            .fibers()
            .unwrap()
            .iter()
            .map(|c| c.iter().map(|x| x.index().unwrap()).collect())
            .collect();
        assert_eq!(classes, vec![vec![0b00, 0b01], vec![0b10, 0b11]]);
        assert_eq!(LinearVariable::trivial(&v).fibers().unwrap().len(), 1);
        assert_eq!(LinearVariable::identity(&v).fibers().unwrap().len(), 4);
    }

    #[test]
    fn equivalence_examples() {
        let v = PhaseSpace::new(Z3, 1).unwrap();
        let z = LinearVariable::from_ints(&v, &[[1, 2]]).unwrap();
        let z2 = LinearVariable::from_ints(&v, &[[2, 1]]).unwrap();
        assert!(z.equivalent(&z2).unwrap());
        let dup = LinearVariable::from_ints(&v, &[[1, 2], [1, 2]]).unwrap();
        assert!(z.equivalent(&dup).unwrap());
        let b = PhaseSpace::new(Z2, 1).unwrap();
        let pos = LinearVariable::from_ints(&b, &[[1, 0]]).unwrap();
        let mom = LinearVariable::from_ints(&b, &[[0, 1]]).unwrap();
        assert!(!pos.equivalent(&mom).unwrap());
        let gp = GeneralVariable::from_linear(&pos).unwrap();
        let gm = GeneralVariable::from_linear(&mom).unwrap();
        assert!(!gp.same_partition(&gm));
        assert!(GeneralVariable::from_linear(&z).unwrap().same_partition(&GeneralVariable::from_linear(&z2).unwrap()));
    }
}
