//! Brute-force search for copying interactions.

use rayon::prelude::*;

use crate::epistemic::EpistemicState;
use crate::error::Result;
use crate::exactalg::all_vectors;
use crate::measurement::{copies, copy_space, Copier};
use crate::phasespace::PhaseSpace;
use crate::transform::AffineSymplectic;
use crate::variable::LinearVariable;

use super::enumerate::{enumerate_symplectic, EnumerationLimits};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopierSearch {
    pub found: Option<Copier>,
    /// Affine maps examined, each against every ready state.
    pub maps_checked: u64,
    pub ready_states: usize,
}

/// Tries every affine symplectic map on `V ⊕ V'` against every epistemic
/// state of `V'` as the ready state. The identity is tried first.
pub fn search_copier(space: &PhaseSpace, z: &LinearVariable, limits: &EnumerationLimits) -> Result<CopierSearch> {
    let joint = copy_space(space)?;
    let half = &joint.factors()[space.factors().len()..];
    let copy = if half.len() == 1 {
        joint.factor_space(&half[0])
    } else {
        PhaseSpace::compose(&half.iter().map(|f| joint.factor_space(f)).collect::<Vec<_>>())?
    };
    let readies = EpistemicState::all(&copy)?;

    let try_map = |f: &AffineSymplectic| -> Result<Option<Copier>> {
        for ready in &readies {
            if copies(f, z, ready)?.is_none() {
                return Ok(Some(Copier {
                    transform: f.clone(),
                    ready: ready.clone(),
                }));
            }
        }
        Ok(None)
    };

    let id = AffineSymplectic::identity(&joint);
    if let Some(c) = try_map(&id)? {
        return Ok(CopierSearch {
            found: Some(c),
            maps_checked: 1,
            ready_states: readies.len(),
        });
    }

    let group = enumerate_symplectic(&joint, limits)?;
    let shifts = all_vectors(joint.field(), joint.dim())?;
    let total = (group.order() * shifts.len()) as u64;
    let hit = (0..group.order())
        .into_par_iter()
        .map(|i| -> Result<Option<Copier>> {
            let m = group.matrix(i);
            for v in &shifts {
                let f = AffineSymplectic::new_unchecked(&joint, m.clone(), v.clone());
                if let Some(c) = try_map(&f)? {
                    return Ok(Some(c));
                }
            }
            Ok(None)
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        })
        .transpose()?
        .flatten();
    Ok(CopierSearch {
        found: hit,
        maps_checked: total + 1,
        ready_states: readies.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Field;

    #[test]
    fn trivial_variable_copied_by_identity() {
        let v = PhaseSpace::new(Field::Prime(2), 1).unwrap();
        let r = search_copier(&v, &LinearVariable::trivial(&v), &EnumerationLimits::default()).unwrap();
        assert_eq!(r.maps_checked, 1);
        assert!(r.found.unwrap().transform.matrix().is_square());
    }

    #[test]
    fn position_has_a_copier() {
        let v = PhaseSpace::new(Field::Prime(2), 1).unwrap();
        let z = LinearVariable::from_ints(&v, &[[1, 0]]).unwrap();
        let r = search_copier(&v, &z, &EnumerationLimits::default()).unwrap();
        let c = r.found.unwrap();
        assert!(copies(&c.transform, &z, &c.ready).unwrap().is_none());
    }
}
