//! JSON documents for spaces, states, variables, transforms, measurements
//! and scenarios. Scalars are integers or `"num/den"` strings.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::epistemic::EpistemicState;
use crate::error::{Error, Result};
use crate::exactalg::{Field, Matrix, Subspace, Vector};
use crate::horizon::{Scenario, ScenarioTrace, Subject, SymbolicTrace};
use crate::measurement::{Measurement, ToySubject};
use crate::phasespace::PhaseSpace;
use crate::transform::AffineSymplectic;
use crate::variable::LinearVariable;

pub type Rows = Vec<Vec<Value>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceDoc {
    Composite {
        compose: Vec<SpaceDoc>,
    },
    Atomic {
        field: String,
        n: usize,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        name: Option<String>,
    },
}

impl SpaceDoc {
    pub fn from_space(space: &PhaseSpace) -> Self {
        let atomic = |f: &crate::phasespace::Factor| SpaceDoc::Atomic {
            field: space.field().to_string(),
            n: f.n,
            name: Some(f.name.clone()),
        };
        if space.is_atomic() {
            atomic(&space.factors()[0])
        } else {
            SpaceDoc::Composite {
                compose: space.factors().iter().map(atomic).collect(),
            }
        }
    }

    pub fn to_space(&self) -> Result<PhaseSpace> {
        match self {
            SpaceDoc::Atomic { field, n, name } => {
                let f: Field = field.parse()?;
                let s = PhaseSpace::new(f, *n)?;
                Ok(match name {
                    Some(name) => s.named(name.clone()),
                    None => s,
                })
            }
            SpaceDoc::Composite { compose } => {
                let parts = compose.iter().map(SpaceDoc::to_space).collect::<Result<Vec<_>>>()?;
                PhaseSpace::compose(&parts)
            }
        }
    }
}

fn matrix(space: &PhaseSpace, rows: &Rows) -> Result<Matrix> {
    let m = Matrix::from_literals(space.field(), rows, Some(space.dim()))?;
    if m.cols() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: m.cols(),
        });
    }
    Ok(m)
}

fn vector(space: &PhaseSpace, v: &[Value]) -> Result<Vector> {
    let v = Vector::from_literals(space.field(), v)?;
    if v.len() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: v.len(),
        });
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateDoc {
    pub space: SpaceDoc,
    pub known: Rows,
    pub value_point: Vec<Value>,
}

impl StateDoc {
    pub fn from_state(e: &EpistemicState) -> Self {
        StateDoc {
            space: SpaceDoc::from_space(e.space()),
            known: e.known().basis().to_literals(),
            value_point: e.value_point().to_literals(),
        }
    }

    pub fn to_state(&self) -> Result<EpistemicState> {
        let space = self.space.to_space()?;
        let known = Subspace::from_rows(matrix(&space, &self.known)?);
        EpistemicState::new(&space, known, &vector(&space, &self.value_point)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableDoc {
    pub space: SpaceDoc,
    pub rows: Rows,
}

impl VariableDoc {
    pub fn from_variable(z: &LinearVariable) -> Self {
        VariableDoc {
            space: SpaceDoc::from_space(z.space()),
            rows: z.matrix().to_literals(),
        }
    }

    pub fn to_variable(&self) -> Result<LinearVariable> {
        let space = self.space.to_space()?;
        LinearVariable::new(&space, matrix(&space, &self.rows)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceDoc {
    pub space: SpaceDoc,
    pub basis: Rows,
}

impl SubspaceDoc {
    pub fn to_subspace(&self) -> Result<(PhaseSpace, Subspace)> {
        let space = self.space.to_space()?;
        let w = Subspace::from_rows(matrix(&space, &self.basis)?);
        Ok((space, w))
    }
}

/// A matrix and shift; `space` may be left out where the context fixes it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformDoc {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub space: Option<SpaceDoc>,
    pub matrix: Rows,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub shift: Option<Vec<Value>>,
}

impl TransformDoc {
    pub fn from_transform(f: &AffineSymplectic, with_space: bool) -> Self {
        TransformDoc {
            space: with_space.then(|| SpaceDoc::from_space(f.space())),
            matrix: f.matrix().to_literals(),
            shift: Some(f.shift().to_literals()),
        }
    }

    /// The raw matrix and shift, before any gate.
    pub fn parts(&self, space: &PhaseSpace) -> Result<(Matrix, Vector)> {
        let m = matrix(space, &self.matrix)?;
        if m.rows() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: m.rows(),
            });
        }
        let v = match &self.shift {
            Some(v) => vector(space, v)?,
            None => Vector::zeros(space.field(), space.dim()),
        };
        Ok((m, v))
    }

    pub fn resolve_space(&self, fallback: Option<&PhaseSpace>) -> Result<PhaseSpace> {
        match (&self.space, fallback) {
            (Some(s), _) => s.to_space(),
            (None, Some(s)) => Ok(s.clone()),
            (None, None) => Err(Error::Parse("transform has no space".into())),
        }
    }

    pub fn to_transform(&self, fallback: Option<&PhaseSpace>) -> Result<AffineSymplectic> {
        let space = self.resolve_space(fallback)?;
        let (m, v) = self.parts(&space)?;
        AffineSymplectic::new(&space, m, v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubjectDoc {
    pub space: SpaceDoc,
    pub manifest: Rows,
}

impl SubjectDoc {
    pub fn from_subject(s: &ToySubject) -> Self {
        SubjectDoc {
            space: SpaceDoc::from_space(s.space()),
            manifest: s.manifest().basis().to_literals(),
        }
    }

    pub fn to_subject(&self) -> Result<ToySubject> {
        let space = self.space.to_space()?;
        ToySubject::new(&space, Subspace::from_rows(matrix(&space, &self.manifest)?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementDoc {
    pub object: SpaceDoc,
    pub subject: SubjectDoc,
    pub ready_q: Vec<Value>,
    pub transform: TransformDoc,
}

impl MeasurementDoc {
    pub fn from_measurement(m: &Measurement) -> Self {
        MeasurementDoc {
            object: SpaceDoc::from_space(m.object()),
            subject: SubjectDoc::from_subject(m.subject()),
            ready_q: m.ready_q().to_literals(),
            transform: TransformDoc::from_transform(m.transform(), false),
        }
    }

    pub fn to_measurement(&self) -> Result<Measurement> {
        let object = self.object.to_space()?;
        let subject = self.subject.to_subject()?;
        let joint = object.direct_sum(subject.space())?;
        let f = self.transform.to_transform(Some(&joint))?;
        let ready = Vector::from_literals(object.field(), &self.ready_q)?;
        Measurement::new(&object, subject, ready, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioSubjectDoc {
    pub factor: String,
    /// Defaults to the position subspace of the factor.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub manifest: Option<Rows>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDoc {
    pub label: String,
    pub transform: TransformDoc,
}

/// `"all"`, `"symbolic"` or a concrete vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialDoc {
    Keyword(String),
    Vector(Vec<Value>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioDoc {
    pub space: SpaceDoc,
    #[serde(default)]
    pub subjects: Vec<ScenarioSubjectDoc>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub initial: Option<InitialDoc>,
    pub steps: Vec<StepDoc>,
}

/// What a scenario document asks to be run on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Initial {
    All,
    Symbolic,
    State(Vector),
}

impl ScenarioDoc {
    pub fn from_scenario(sc: &Scenario, initial: Option<&Initial>) -> Self {
        ScenarioDoc {
            space: SpaceDoc::from_space(sc.space()),
            subjects: sc
                .subjects()
                .iter()
                .map(|s| ScenarioSubjectDoc {
                    factor: s.factor.clone(),
                    manifest: Some(s.subject.manifest().basis().to_literals()),
                })
                .collect(),
            initial: initial.map(|i| match i {
                Initial::All => InitialDoc::Keyword("all".into()),
                Initial::Symbolic => InitialDoc::Keyword("symbolic".into()),
                Initial::State(v) => InitialDoc::Vector(v.to_literals()),
            }),
            steps: sc
                .steps()
                .iter()
                .map(|s| StepDoc {
                    label: s.label.clone(),
                    transform: TransformDoc::from_transform(&s.transform, false),
                })
                .collect(),
        }
    }

    /// Builds the scenario; a step failing the gate is reported by label.
    pub fn to_scenario(&self) -> Result<Scenario> {
        let space = self.space.to_space()?;
        let mut subjects = Vec::new();
        for s in &self.subjects {
            let f = space.factor(&s.factor)?;
            let local = space.factor_space(f);
            let q = match &s.manifest {
                Some(rows) => Subspace::from_rows(matrix(&local, rows)?),
                None => Subspace::coordinate_block(space.field(), local.dim(), 0, f.n),
            };
            subjects.push(Subject {
                factor: s.factor.clone(),
                subject: ToySubject::new(&local, q)?,
            });
        }
        let mut raw = Vec::new();
        for step in &self.steps {
            let gate = |e: Error| Error::StepGate {
                label: step.label.clone(),
                reason: e.to_string(),
            };
            let own = step.transform.resolve_space(Some(&space)).map_err(gate)?;
            if own != space {
                return Err(gate(Error::Parse("step acts on a different space".into())));
            }
            let (m, v) = step.transform.parts(&space).map_err(gate)?;
            raw.push((step.label.clone(), m, v));
        }
        Scenario::from_raw(&space, subjects, raw)
    }

    pub fn initial(&self, space: &PhaseSpace) -> Result<Option<Initial>> {
        Ok(match &self.initial {
            None => None,
            Some(InitialDoc::Keyword(k)) => match k.as_str() {
                "all" => Some(Initial::All),
                "symbolic" => Some(Initial::Symbolic),
                other => return Err(Error::Parse(format!("unknown initial keyword `{other}`"))),
            },
            Some(InitialDoc::Vector(v)) => Some(Initial::State(vector(space, v)?)),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisturbanceDoc {
    pub coordinate: String,
    pub delta: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDoc {
    pub labels: Vec<String>,
    pub states: Rows,
    pub readings: Vec<Rows>,
    pub disturbances: Vec<Vec<DisturbanceDoc>>,
}

impl TraceDoc {
    pub fn from_trace(t: &ScenarioTrace) -> Self {
        TraceDoc {
            labels: t.labels.clone(),
            states: t.states.iter().map(Vector::to_literals).collect(),
            readings: t
                .readings
                .iter()
                .map(|r| r.iter().map(Vector::to_literals).collect())
                .collect(),
            disturbances: t
                .disturbances
                .iter()
                .map(|ds| {
                    ds.iter()
                        .map(|d| DisturbanceDoc {
                            coordinate: d.coordinate.clone(),
                            delta: d.delta.to_literal(),
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicTraceDoc {
    pub labels: Vec<String>,
    pub states: Vec<Vec<String>>,
    pub readings: Vec<Vec<Vec<String>>>,
}

impl SymbolicTraceDoc {
    pub fn from_trace(t: &SymbolicTrace) -> Self {
        SymbolicTraceDoc {
            labels: t.labels.clone(),
            states: (0..t.linear.len()).map(|k| t.render_state(k)).collect(),
            readings: (0..t.linear.len()).map(|k| t.render_readings(k)).collect(),
        }
    }
}
