//! Epistemic states: what an agent knows about an ontic state.

use std::fmt;

use crate::error::{Error, Result};
use crate::exactalg::{all_vectors, AffineSubspace, Subspace, Vector};
use crate::phasespace::{OnticState, PhaseSpace};

/// A pair `(U, a)` of known functionals `U` (isotropic) and a value point.
/// The support is `U^⊥ + a`; `a` is stored as the canonical coset
/// representative, so equal supports compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EpistemicState {
    space: PhaseSpace,
    known: Subspace,
    value_point: Vector,
}

impl EpistemicState {
    pub fn new(space: &PhaseSpace, known: Subspace, value_point: &Vector) -> Result<Self> {
        space.check_subspace(&known)?;
        space.check_vector(value_point)?;
        if let Some((i, j, value)) = space.isotropy_witness(&known)? {
            return Err(Error::NotIsotropic {
                i,
                j,
                value: value.to_string(),
            });
        }
        let value_point = known.orthogonal_complement().coset_canonical_rep(value_point)?;
        Ok(EpistemicState {
            space: space.clone(),
            known,
            value_point,
        })
    }

    /// `({0}, a)`: nothing is known.
    pub fn ignorant(space: &PhaseSpace) -> Self {
        EpistemicState {
            space: space.clone(),
            known: Subspace::zero(space.field(), space.dim()),
            value_point: Vector::zeros(space.field(), space.dim()),
        }
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    pub fn known(&self) -> &Subspace {
        &self.known
    }

    pub fn value_point(&self) -> &Vector {
        &self.value_point
    }

    /// `U^⊥ + a`.
    pub fn support(&self) -> AffineSubspace {
        AffineSubspace::new(self.known.orthogonal_complement(), &self.value_point).expect("shapes agree")
    }

    /// Every ontic state in the support; finite fields only.
    pub fn enumerate(&self) -> Result<Vec<OnticState>> {
        self.support()
            .elements()?
            .into_iter()
            .map(|x| OnticState::new(&self.space, x))
            .collect()
    }

    pub fn is_pure(&self) -> bool {
        self.known.dim() == self.space.n()
    }

    /// State on `self.space ⊕ other.space` with support the Cartesian product.
    pub fn product(&self, other: &EpistemicState) -> Result<EpistemicState> {
        let space = self.space.direct_sum(&other.space)?;
        let d = space.dim();
        let known = self
            .known
            .embed(d, 0)?
            .sum(&other.known.embed(d, self.space.dim())?)?;
        EpistemicState::new(&space, known, &self.value_point.concat(&other.value_point))
    }

    /// `(U ∩ V_f, V_f(a))` on the named factor.
    pub fn marginal(&self, factor: &str) -> Result<EpistemicState> {
        let f = self.space.factor(factor)?.clone();
        let local = self.space.factor_space(&f);
        let known = self.known.restrict(f.offset, f.dim())?;
        let a = self.space.project(&f, &self.value_point)?;
        EpistemicState::new(&local, known, &a)
    }

    /// Every epistemic state on `space`, each once; finite fields only.
    pub fn all(space: &PhaseSpace) -> Result<Vec<EpistemicState>> {
        let field = space.field();
        let mut out = Vec::new();
        for known in space.isotropic_subspaces()? {
            let perp = known.orthogonal_complement();
            let free: Vec<usize> = (0..space.dim()).filter(|c| !perp.pivots().contains(c)).collect();
            for fill in all_vectors(field, free.len())? {
                let mut a = Vector::zeros(field, space.dim());
                for (&c, e) in free.iter().zip(fill.entries()) {
                    a.set(c, e.clone());
                }
                out.push(EpistemicState {
                    space: space.clone(),
                    known: known.clone(),
                    value_point: a,
                });
            }
        }
        Ok(out)
    }
}

impl fmt::Display for EpistemicState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.known, self.value_point)
    }
}
