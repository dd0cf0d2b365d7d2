//! Search for interactions that leave the object in one fixed ontic state.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;
use crate::exactalg::{all_vectors, Field, Matrix, Vector};
use crate::measurement::ToySubject;
use crate::phasespace::PhaseSpace;

use super::enumerate::{enumerate_symplectic, EnumerationLimits};

/// A map, subject pointer state and (optionally) post-selected reading after
/// which the object is in `target` whatever its input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreparationWitness {
    pub matrix: Vec<Vec<Value>>,
    pub manifest: Vec<Vec<Value>>,
    pub ready_value: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub outcome: Option<Vec<Value>>,
    pub target: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreparationSearch {
    pub field: String,
    pub n_s: usize,
    pub n_a: usize,
    pub postselect: bool,
    pub maps_checked: u64,
    pub subject_states: u64,
    pub witnesses: Vec<PreparationWitness>,
}

/// Exhaustive over linear symplectic maps on `S ⊕ A`, every Lagrangian
/// manifest subspace of `A` and every ready value. Shifts only move the
/// target, so linear maps suffice. With `postselect`, each final reading
/// that occurs for every input is tried as a condition.
pub fn search_preparation(
    field: Field,
    n_s: usize,
    n_a: usize,
    postselect: bool,
    limits: &EnumerationLimits,
) -> Result<PreparationSearch> {
    let object = PhaseSpace::new(field, n_s)?.named("S");
    let subject_space = PhaseSpace::new(field, n_a)?.named("A");
    let joint = object.direct_sum(&subject_space)?;
    let group = enumerate_symplectic(&joint, limits)?;
    let inputs = all_vectors(field, object.dim())?;
    let values = all_vectors(field, n_a)?;

    // (subject, ready value, support of the pointer state)
    let mut readies: Vec<(ToySubject, Vector, Vec<Vector>)> = Vec::new();
    for q in subject_space.lagrangians()? {
        let sub = ToySubject::new(&subject_space, q)?;
        for r in &values {
            let support = sub.pointer_state(r)?.enumerate()?.into_iter().map(|o| o.into_coords()).collect();
            readies.push((sub.clone(), r.clone(), support));
        }
    }
    let ds = object.dim();
    let s_rows: Vec<usize> = (0..ds).collect();
    let a_rows: Vec<usize> = (ds..joint.dim()).collect();

    let found: Vec<Vec<PreparationWitness>> = group
        .par_matrices()
        .map(|m| {
            let ms = m.select_rows(&s_rows);
            let ma = m.select_rows(&a_rows);
            let mut out = Vec::new();
            for (sub, r, support) in &readies {
                // per input: (object output, reading) for each subject point
                let runs: Vec<Vec<(Vector, Vector)>> = inputs
                    .iter()
                    .map(|s| {
                        support
                            .iter()
                            .map(|a| {
                                let x = s.concat(a);
                                (&ms * &x, sub.manifest_value(&(&ma * &x)))
                            })
                            .collect()
                    })
                    .collect();
                let outcomes: Vec<Option<Vector>> = if postselect {
                    values.iter().cloned().map(Some).collect()
                } else {
                    vec![None]
                };
                for o in outcomes {
                    if let Some(t) = fixed_target(&runs, o.as_ref()) {
                        out.push(witness(&m, sub, r, o.as_ref(), &t));
                    }
                }
            }
            out
        })
        .collect();
    let mut witnesses: Vec<PreparationWitness> = found.into_iter().flatten().collect();
    witnesses.sort_by_key(|w| serde_json::to_string(w).unwrap_or_default());
    Ok(PreparationSearch {
        field: field.to_string(),
        n_s,
        n_a,
        postselect,
        maps_checked: group.order() as u64,
        subject_states: readies.len() as u64,
        witnesses,
    })
}

fn fixed_target(runs: &[Vec<(Vector, Vector)>], outcome: Option<&Vector>) -> Option<Vector> {
    let mut target: Option<&Vector> = None;
    for per_input in runs {
        let mut hit = false;
        for (obj, reading) in per_input {
            if outcome.is_some_and(|o| o != reading) {
                continue;
            }
            hit = true;
            match target {
                None => target = Some(obj),
                Some(t) if t != obj => return None,
                _ => {}
            }
        }
        if !hit {
            return None;
        }
    }
    target.cloned()
}

fn witness(m: &Matrix, sub: &ToySubject, r: &Vector, o: Option<&Vector>, t: &Vector) -> PreparationWitness {
    PreparationWitness {
        matrix: m.to_literals(),
        manifest: sub.manifest().basis().to_literals(),
        ready_value: r.to_literals(),
        outcome: o.map(Vector::to_literals),
        target: t.to_literals(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toy_bit_cannot_be_prepared_unconditionally() {
        let r = search_preparation(Field::Prime(2), 1, 1, false, &EnumerationLimits::default()).unwrap();
        assert_eq!(r.maps_checked, 720);
        assert_eq!(r.subject_states, 6);
        assert!(r.witnesses.is_empty());
    }

    #[test]
    fn fixed_target_logic() {
        let f = Field::Prime(2);
        let v = |x: i64| Vector::from_ints(f, &[x]);
        let runs = vec![vec![(v(1), v(0)), (v(0), v(1))], vec![(v(1), v(0)), (v(1), v(1))]];
        assert_eq!(fixed_target(&runs, None), None);
        assert_eq!(fixed_target(&runs, Some(&v(0))), Some(v(1)));
        assert_eq!(fixed_target(&runs, Some(&v(1))), None);
    }
}
