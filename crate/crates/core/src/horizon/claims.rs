//! What the two pointers of the momentum-then-position scenario reveal.

use std::collections::HashMap;

use crate::error::Result;
use crate::exactalg::{all_vectors, Field, Vector};

use super::scenario::{appendix_a, run_sequence};

/// Whether the final pointer readings (together with the known ready values)
/// fix the object's state at time `t_time`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Determination {
    pub time: usize,
    pub determined: bool,
    /// Two initial states with the same ready values and final readings
    /// but different object states at `t_time`.
    pub witness: Option<(Vector, Vector)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeClaims {
    pub field: Field,
    pub initial_states: usize,
    /// One entry per time `t_0, t_1, t_2`.
    pub times: Vec<Determination>,
}

impl KnowledgeClaims {
    pub fn at(&self, t: usize) -> &Determination {
        &self.times[t]
    }
}

/// Runs every initial state and groups them by ready values and final
/// readings. The object is determined at `t` iff every group agrees on it.
pub fn knowledge_claims(field: Field) -> Result<KnowledgeClaims> {
    let sc = appendix_a(field)?;
    let space = sc.space();
    let s = space.factor("S")?.clone();
    let a1 = space.factor("A1")?.clone();
    let a2 = space.factor("A2")?.clone();
    let mut groups: Vec<HashMap<Vec<Vector>, (Vector, Vector)>> = vec![HashMap::new(); 3];
    let mut times: Vec<Determination> = (0..3)
        .map(|time| Determination {
            time,
            determined: true,
            witness: None,
        })
        .collect();
    let states = all_vectors(field, space.dim())?;
    for u in &states {
        let tr = run_sequence(&sc, u)?;
        let key = vec![
            sc.subjects()[0].subject.manifest_value(&space.project(&a1, u)?),
            sc.subjects()[1].subject.manifest_value(&space.project(&a2, u)?),
            tr.readings[2][0].clone(),
            tr.readings[2][1].clone(),
        ];
        for (t, det) in times.iter_mut().enumerate() {
            let obj = space.project(&s, &tr.states[t])?;
            let seen = groups[t].entry(key.clone()).or_insert_with(|| (u.clone(), obj.clone()));
            if seen.1 != obj && det.witness.is_none() {
                det.determined = false;
                det.witness = Some((seen.0.clone(), u.clone()));
            }
        }
    }
    Ok(KnowledgeClaims {
        field,
        initial_states: states.len(),
        times,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_pointers_fix_only_the_middle_time() {
        let k = knowledge_claims(Field::Prime(2)).unwrap();
        assert_eq!(k.initial_states, 64);
        assert!(!k.at(0).determined);
        assert!(k.at(1).determined);
        assert!(!k.at(2).determined);
        let (x, y) = k.at(0).witness.clone().unwrap();
        assert_ne!(x, y);
    }

    #[test]
    fn z3_agrees() {
        let k = knowledge_claims(Field::Prime(3)).unwrap();
        assert_eq!(k.initial_states, 729);
        assert_eq!(
            k.times.iter().map(|d| d.determined).collect::<Vec<_>>(),
            [false, true, false]
        );
    }
}
