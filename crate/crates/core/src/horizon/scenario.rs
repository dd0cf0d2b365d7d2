//! Sequential interactions between an object and several toy subjects.

use crate::error::{Error, Result};
use crate::exactalg::{Field, Matrix, Scalar, Vector};
use crate::measurement::{construct_measurement, ToySubject};
use crate::phasespace::PhaseSpace;
use crate::transform::AffineSymplectic;
use crate::variable::LinearVariable;

/// A toy subject attached to one factor of the scenario space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subject {
    pub factor: String,
    pub subject: ToySubject,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub label: String,
    pub transform: AffineSymplectic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    space: PhaseSpace,
    subjects: Vec<Subject>,
    steps: Vec<Step>,
}

impl Scenario {
    pub fn new(space: &PhaseSpace, subjects: Vec<Subject>, steps: Vec<Step>) -> Result<Self> {
        for s in &subjects {
            let f = space.factor(&s.factor)?;
            space.field().check(s.subject.space().field())?;
            if f.n != s.subject.n() {
                return Err(Error::DimensionMismatch {
                    expected: f.dim(),
                    found: s.subject.space().dim(),
                });
            }
        }
        for step in &steps {
            if step.transform.space() != space {
                return Err(Error::StepGate {
                    label: step.label.clone(),
                    reason: format!("acts on {} rather than {}", step.transform.space().name(), space.name()),
                });
            }
        }
        Ok(Scenario {
            space: space.clone(),
            subjects,
            steps,
        })
    }

    /// Gates raw `(label, matrix, shift)` steps, naming the first that fails.
    pub fn from_raw(space: &PhaseSpace, subjects: Vec<Subject>, raw: Vec<(String, Matrix, Vector)>) -> Result<Self> {
        let mut steps = Vec::with_capacity(raw.len());
        for (label, m, v) in raw {
            let transform = AffineSymplectic::new(space, m, v).map_err(|e| Error::StepGate {
                label: label.clone(),
                reason: e.to_string(),
            })?;
            steps.push(Step { label, transform });
        }
        Scenario::new(space, subjects, steps)
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    pub fn subjects(&self) -> &[Subject] {
        &self.subjects
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    fn reading(&self, subject: &Subject, x: &Vector) -> Vector {
        let f = self.space.factor(&subject.factor).expect("validated factor");
        let local = self.space.project(f, x).expect("vector of scenario space");
        subject.subject.manifest_value(&local)
    }
}

/// A nonzero change of one coordinate during a step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disturbance {
    pub coordinate: String,
    pub delta: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioTrace {
    pub labels: Vec<String>,
    /// `states[k]` is the joint state at time `t_k`.
    pub states: Vec<Vector>,
    /// `readings[k][j]` is subject `j`'s manifest value at `t_k`.
    pub readings: Vec<Vec<Vector>>,
    /// `disturbances[k]` lists the coordinates moved by step `k`.
    pub disturbances: Vec<Vec<Disturbance>>,
}

pub fn run_sequence(scenario: &Scenario, initial: &Vector) -> Result<ScenarioTrace> {
    let space = scenario.space();
    if initial.field() != space.field() {
        return Err(Error::FieldMismatch {
            left: space.field().to_string(),
            right: initial.field().to_string(),
        });
    }
    if initial.len() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: initial.len(),
        });
    }
    let snapshot = |x: &Vector| scenario.subjects.iter().map(|s| scenario.reading(s, x)).collect::<Vec<_>>();
    let mut trace = ScenarioTrace {
        labels: Vec::new(),
        states: vec![initial.clone()],
        readings: vec![snapshot(initial)],
        disturbances: Vec::new(),
    };
    for step in scenario.steps() {
        let before = trace.states.last().expect("initial state");
        let after = step.transform.apply_vec(before);
        let delta = &after - before;
        let moved = (0..delta.len())
            .filter(|&i| !delta.get(i).is_zero())
            .map(|i| Disturbance {
                coordinate: space.labels()[i].clone(),
                delta: delta.get(i).clone(),
            })
            .collect();
        trace.labels.push(step.label.clone());
        trace.readings.push(snapshot(&after));
        trace.disturbances.push(moved);
        trace.states.push(after);
    }
    verify_recurrence(scenario, &trace)?;
    Ok(trace)
}

/// Replays every step and checks `states[k+1] = f_k(states[k])`.
pub fn verify_recurrence(scenario: &Scenario, trace: &ScenarioTrace) -> Result<()> {
    if trace.states.len() != scenario.steps().len() + 1 {
        return Err(Error::DimensionMismatch {
            expected: scenario.steps().len() + 1,
            found: trace.states.len(),
        });
    }
    for (k, step) in scenario.steps().iter().enumerate() {
        if step.transform.apply_vec(&trace.states[k]) != trace.states[k + 1] {
            return Err(Error::ClosedFormMismatch(format!("recurrence after step `{}`", step.label)));
        }
    }
    Ok(())
}

/// An affine expression `c + Σ aᵢ uᵢ` in the initial coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineForm {
    pub coeffs: Vector,
    pub constant: Scalar,
}

impl AffineForm {
    pub fn eval(&self, u: &Vector) -> Scalar {
        &self.coeffs.dot(u) + &self.constant
    }

    /// Renders as e.g. `u1+u4`, `u4-u6` or `2u3+1`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut term = |s: &Scalar, var: Option<usize>| {
            if s.is_zero() {
                return;
            }
            let (neg, mag) = s.signed_parts();
            if neg {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            match var {
                Some(i) if mag == "1" => out.push_str(&format!("u{}", i + 1)),
                Some(i) => out.push_str(&format!("{mag}u{}", i + 1)),
                None => out.push_str(&mag),
            }
        };
        for i in 0..self.coeffs.len() {
            term(self.coeffs.get(i), Some(i));
        }
        term(&self.constant, None);
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// A trace whose states are affine functions of the initial state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicTrace {
    pub labels: Vec<String>,
    /// `linear[k] u + constant[k]` is the state at `t_k`.
    pub linear: Vec<Matrix>,
    pub constant: Vec<Vector>,
    /// `readings[k][j]` as `(linear, constant)` over the initial coordinates.
    pub readings: Vec<Vec<(Matrix, Vector)>>,
}

impl SymbolicTrace {
    fn forms(m: &Matrix, c: &Vector) -> Vec<AffineForm> {
        (0..m.rows())
            .map(|i| AffineForm {
                coeffs: m.row(i),
                constant: c.get(i).clone(),
            })
            .collect()
    }

    pub fn state(&self, t: usize) -> Vec<AffineForm> {
        SymbolicTrace::forms(&self.linear[t], &self.constant[t])
    }

    pub fn reading(&self, t: usize, subject: usize) -> Vec<AffineForm> {
        let (m, c) = &self.readings[t][subject];
        SymbolicTrace::forms(m, c)
    }

    pub fn render_state(&self, t: usize) -> Vec<String> {
        self.state(t).iter().map(AffineForm::render).collect()
    }

    pub fn render_readings(&self, t: usize) -> Vec<Vec<String>> {
        (0..self.readings[t].len())
            .map(|j| self.reading(t, j).iter().map(AffineForm::render).collect())
            .collect()
    }

    pub fn evaluate(&self, t: usize, u: &Vector) -> Vector {
        &(&self.linear[t] * u) + &self.constant[t]
    }
}

pub fn run_symbolic(scenario: &Scenario) -> SymbolicTrace {
    let space = scenario.space();
    let field = space.field();
    let d = space.dim();
    let readings_of = |m: &Matrix, c: &Vector| {
        scenario
            .subjects()
            .iter()
            .map(|s| {
                let f = space.factor(&s.factor).expect("validated factor");
                let rows: Vec<usize> = f.range().collect();
                let z = s.subject.manifest_functionals();
                (z * &m.select_rows(&rows), z * &c.select(&rows))
            })
            .collect::<Vec<_>>()
    };
    let mut m = Matrix::identity(field, d);
    let mut c = Vector::zeros(field, d);
    let mut trace = SymbolicTrace {
        labels: Vec::new(),
        linear: vec![m.clone()],
        constant: vec![c.clone()],
        readings: vec![readings_of(&m, &c)],
    };
    for step in scenario.steps() {
        let f = &step.transform;
        m = f.matrix() * &m;
        c = f.apply_vec(&c);
        trace.labels.push(step.label.clone());
        trace.readings.push(readings_of(&m, &c));
        trace.linear.push(m.clone());
        trace.constant.push(c.clone());
    }
    trace
}

/// Object `S` measured first in momentum (pointer `A1`) and then in
/// position (pointer `A2`), on the joint space `A1 ⊕ S ⊕ A2`.
pub fn appendix_a(field: Field) -> Result<Scenario> {
    let s = PhaseSpace::new(field, 1)?.named("S");
    let a1 = PhaseSpace::new(field, 1)?.named("A1");
    let a2 = PhaseSpace::new(field, 1)?.named("A2");
    let joint = PhaseSpace::compose(&[a1.clone(), s.clone(), a2.clone()])?;
    let m_p = construct_measurement(&s, &LinearVariable::from_ints(&s, &[[0, 1]])?)?;
    let m_q = construct_measurement(&s, &LinearVariable::from_ints(&s, &[[1, 0]])?)?;
    let steps = vec![
        Step {
            label: "m_p".into(),
            transform: m_p.transform().lift(&joint, &["S", "A1"])?,
        },
        Step {
            label: "m_q".into(),
            transform: m_q.transform().lift(&joint, &["S", "A2"])?,
        },
    ];
    let subjects = vec![
        Subject {
            factor: "A1".into(),
            subject: ToySubject::canonical(&a1),
        },
        Subject {
            factor: "A2".into(),
            subject: ToySubject::canonical(&a2),
        },
    ];
    Scenario::new(&joint, subjects, steps)
}

/// Expected linear maps `u(t_0) ↦ u(t_1)` and `u(t_0) ↦ u(t_2)`.
pub fn appendix_a_closed_forms(field: Field) -> [Matrix; 2] {
    let t1 = Matrix::from_ints(
        field,
        &[
            [1, 0, 0, 1, 0, 0],
            [0, 1, 0, 0, 0, 0],
            [0, 1, 1, 0, 0, 0],
            [0, 0, 0, 1, 0, 0],
            [0, 0, 0, 0, 1, 0],
            [0, 0, 0, 0, 0, 1],
        ],
    );
    let t2 = Matrix::from_ints(
        field,
        &[
            [1, 0, 0, 1, 0, 0],
            [0, 1, 0, 0, 0, 0],
            [0, 1, 1, 0, 0, 0],
            [0, 0, 0, 1, 0, -1],
            [0, 1, 1, 0, 1, 0],
            [0, 0, 0, 0, 0, 1],
        ],
    );
    [t1, t2]
}

/// Checks a concrete trace of [`appendix_a`] against the closed forms.
pub fn check_appendix_a(trace: &ScenarioTrace) -> Result<()> {
    if trace.states.len() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: trace.states.len(),
        });
    }
    let u = &trace.states[0];
    for (k, t) in appendix_a_closed_forms(u.field()).iter().enumerate() {
        if &(t * u) != &trace.states[k + 1] {
            return Err(Error::ClosedFormMismatch(format!("t{} from u = {}", k + 1, u)));
        }
    }
    Ok(())
}
