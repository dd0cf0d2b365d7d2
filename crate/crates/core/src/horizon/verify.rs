//! Exhaustive and sampled evidence that exactly the Poisson variables are measurable.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exactalg::{all_subspaces, Field, Matrix, Subspace};
use crate::measurement::{construct_measurement, ComplementRule, Measurement, ToySubject};
use crate::phasespace::PhaseSpace;
use crate::variable::LinearVariable;

use super::enumerate::{enumerate_symplectic, EnumerationLimits, WordSampler};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sample { seed: u64, samples: usize, word_length: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct HorizonConfig {
    pub field: Field,
    pub n_s: usize,
    pub n_a: usize,
    pub mode: Mode,
    pub rule: ComplementRule,
    pub limits: EnumerationLimits,
}

impl HorizonConfig {
    pub fn exhaustive(field: Field, n_s: usize, n_a: usize) -> Self {
        HorizonConfig {
            field,
            n_s,
            n_a,
            mode: Mode::Exhaustive,
            rule: ComplementRule::Leading,
            limits: EnumerationLimits::default(),
        }
    }

    pub fn sample(field: Field, n_s: usize, n_a: usize, seed: u64, samples: usize, word_length: usize) -> Self {
        HorizonConfig {
            mode: Mode::Sample {
                seed,
                samples,
                word_length,
            },
            ..HorizonConfig::exhaustive(field, n_s, n_a)
        }
    }
}

/// A measurement whose measured variable has a nonzero bracket.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoissonViolation {
    pub matrix: Vec<Vec<Value>>,
    pub manifest: Vec<Vec<Value>>,
    pub measured: Vec<Vec<Value>>,
    pub bracket: Vec<Vec<Value>>,
}

/// A variable whose measurability claim contradicts its Poisson status.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurableClaim {
    pub variable: Vec<Vec<Value>>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorizonReport {
    pub field: String,
    pub n_s: usize,
    pub n_a: usize,
    pub joint_dim: usize,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub word_length: Option<usize>,
    pub complement_rule: ComplementRule,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub enumeration_path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub group_order: Option<u64>,
    pub lagrangians_per_subject: usize,
    pub measurements_checked: u64,
    pub poisson_variables_checked: u64,
    pub non_poisson_variables_rejected: u64,
    pub poisson_violations: Vec<PoissonViolation>,
    pub non_poisson_measurable_claims: Vec<MeasurableClaim>,
    pub verdict: String,
    pub elapsed_ms: u64,
}

impl HorizonReport {
    pub fn passed(&self) -> bool {
        self.poisson_violations.is_empty() && self.non_poisson_measurable_claims.is_empty()
    }
}

fn atomic(field: Field, n: usize, name: &str) -> Result<PhaseSpace> {
    Ok(PhaseSpace::new(field, n)?.named(name))
}

/// Measured variable of `(M, Q)`; a violation if it is not Poisson.
fn check_measurement(object: &PhaseSpace, subject: &ToySubject, m: Matrix) -> Result<Option<PoissonViolation>> {
    let meas = Measurement::linear(object, subject.clone(), m)?;
    let z = meas.measured_variable();
    if z.is_poisson() {
        return Ok(None);
    }
    Ok(Some(PoissonViolation {
        matrix: meas.transform().matrix().to_literals(),
        manifest: subject.manifest().basis().to_literals(),
        measured: z.matrix().to_literals(),
        bracket: z.bracket_matrix().to_literals(),
    }))
}

/// Constructs a measurement for `z` and checks it against `z`'s Poisson status.
fn check_construction(object: &PhaseSpace, z: &LinearVariable) -> Option<MeasurableClaim> {
    let claim = |reason: String| {
        Some(MeasurableClaim {
            variable: z.matrix().to_literals(),
            reason,
        })
    };
    match (z.is_poisson(), construct_measurement(object, z)) {
        (true, Ok(m)) => match m.measured_variable().equivalent(z) {
            Ok(true) => None,
            Ok(false) => claim("constructed measurement measures an inequivalent variable".into()),
            Err(e) => claim(e.to_string()),
        },
        (true, Err(e)) => claim(format!("construction failed for a Poisson variable: {e}")),
        (false, Ok(_)) => claim("construction accepted a non-Poisson variable".into()),
        (false, Err(Error::NotPoisson { .. })) => None,
        (false, Err(e)) => claim(format!("unexpected rejection: {e}")),
    }
}

fn sort_witnesses(report: &mut HorizonReport) {
    let key = |v: &PoissonViolation| serde_json::to_string(v).unwrap_or_default();
    report.poisson_violations.sort_by_key(key);
    report
        .non_poisson_measurable_claims
        .sort_by_key(|c| serde_json::to_string(c).unwrap_or_default());
}

/// Both directions of the horizon theorem on `S = F^{2n_S}`, `A = F^{2n_A}`.
pub fn verify_horizon(config: &HorizonConfig) -> Result<HorizonReport> {
    let start = Instant::now();
    let field = config.field;
    let object = atomic(field, config.n_s, "S")?;
    let subject_space = atomic(field, config.n_a, "A")?;
    let joint = object.direct_sum(&subject_space)?;

    let mut report = HorizonReport {
        field: field.to_string(),
        n_s: config.n_s,
        n_a: config.n_a,
        joint_dim: joint.dim(),
        mode: String::new(),
        seed: None,
        samples: None,
        word_length: None,
        complement_rule: config.rule,
        enumeration_path: None,
        group_order: None,
        lagrangians_per_subject: 0,
        measurements_checked: 0,
        poisson_variables_checked: 0,
        non_poisson_variables_rejected: 0,
        poisson_violations: Vec::new(),
        non_poisson_measurable_claims: Vec::new(),
        verdict: String::new(),
        elapsed_ms: 0,
    };

    match config.mode {
        Mode::Exhaustive => {
            report.mode = "exhaustive".into();
            let group = enumerate_symplectic(&joint, &config.limits)?;
            let subjects: Vec<ToySubject> = subject_space
                .lagrangians()?
                .into_iter()
                .map(|q| ToySubject::with_rule(&subject_space, q, config.rule))
                .collect::<Result<_>>()?;
            report.enumeration_path = Some(format!("{:?}", group.path()).to_lowercase());
            report.group_order = Some(group.order() as u64);
            report.lagrangians_per_subject = subjects.len();

            let found: Vec<Vec<PoissonViolation>> = group
                .par_matrices()
                .map(|m| {
                    subjects
                        .iter()
                        .filter_map(|s| check_measurement(&object, s, m.clone()).transpose())
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?;
            report.measurements_checked = (group.order() * subjects.len()) as u64;
            report.poisson_violations = found.into_iter().flatten().collect();

            for w in all_subspaces(field, object.dim())? {
                let z = LinearVariable::from_subspace(&object, &w)?;
                if z.is_poisson() {
                    report.poisson_variables_checked += 1;
                } else {
                    report.non_poisson_variables_rejected += 1;
                }
                if let Some(c) = check_construction(&object, &z) {
                    report.non_poisson_measurable_claims.push(c);
                }
            }
        }
        Mode::Sample {
            seed,
            samples,
            word_length,
        } => {
            report.mode = "sample".into();
            report.seed = Some(seed);
            report.samples = Some(samples);
            report.word_length = Some(word_length);

            let mut joint_words = WordSampler::new(&joint, seed, word_length);
            let mut subject_words = WordSampler::new(&subject_space, seed ^ 0x5eed_0001, word_length);
            let mut object_words = WordSampler::new(&object, seed ^ 0x5eed_0002, word_length);
            let canonical_q = Subspace::coordinate_block(field, subject_space.dim(), 0, config.n_a);

            let mut cases = Vec::with_capacity(samples);
            for i in 0..samples {
                let m = joint_words.next_matrix();
                let q = if i == 0 {
                    canonical_q.clone()
                } else {
                    let g = subject_words.next_matrix();
                    Subspace::from_rows(canonical_q.basis() * &g)
                };
                cases.push((m, ToySubject::with_rule(&subject_space, q, config.rule)?));
            }
            let found: Vec<Option<PoissonViolation>> = cases
                .into_par_iter()
                .map(|(m, s)| check_measurement(&object, &s, m))
                .collect::<Result<_>>()?;
            report.measurements_checked = samples as u64;
            report.lagrangians_per_subject = 1;
            report.poisson_violations = found.into_iter().flatten().collect();

            let d = object.dim();
            let n = config.n_s;
            for _ in 0..samples.max(1) {
                let g = object_words.next_matrix();
                for k in 0..=n {
                    let rows: Vec<usize> = (0..k).collect();
                    let z = LinearVariable::new(&object, &Matrix::identity(field, d).select_rows(&rows) * &g)?;
                    report.poisson_variables_checked += 1;
                    if let Some(c) = check_construction(&object, &z) {
                        report.non_poisson_measurable_claims.push(c);
                    }
                }
                let conj = LinearVariable::new(&object, &Matrix::identity(field, d).select_rows(&[0, n]) * &g)?;
                report.non_poisson_variables_rejected += 1;
                if let Some(c) = check_construction(&object, &conj) {
                    report.non_poisson_measurable_claims.push(c);
                }
            }
        }
    }

    sort_witnesses(&mut report);
    report.verdict = if report.passed() { "PASS" } else { "FAIL" }.into();
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Cases where two complement rules yield inequivalent measured variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleDisagreement {
    pub matrix: Vec<Vec<Value>>,
    pub manifest: Vec<Vec<Value>>,
}

/// Recomputes every measured variable under both complement rules and
/// compares kernels. Returns the number of cases and any disagreements.
pub fn compare_complement_rules(
    field: Field,
    n_s: usize,
    n_a: usize,
    limits: &EnumerationLimits,
) -> Result<(u64, Vec<RuleDisagreement>)> {
    let object = atomic(field, n_s, "S")?;
    let subject_space = atomic(field, n_a, "A")?;
    let joint = object.direct_sum(&subject_space)?;
    let group = enumerate_symplectic(&joint, limits)?;
    let lagrangians = subject_space.lagrangians()?;
    let pairs: Vec<(ToySubject, ToySubject)> = lagrangians
        .into_iter()
        .map(|q| {
            Ok((
                ToySubject::with_rule(&subject_space, q.clone(), ComplementRule::Leading)?,
                ToySubject::with_rule(&subject_space, q, ComplementRule::Trailing)?,
            ))
        })
        .collect::<Result<_>>()?;
    let found: Vec<Vec<RuleDisagreement>> = group
        .par_matrices()
        .map(|m| {
            let mut out = Vec::new();
            for (a, b) in &pairs {
                let ma = Measurement::linear(&object, a.clone(), m.clone())?;
                let mb = Measurement::linear(&object, b.clone(), m.clone())?;
                if !ma.measured_variable().equivalent(&mb.measured_variable())? {
                    out.push(RuleDisagreement {
                        matrix: m.to_literals(),
                        manifest: a.manifest().basis().to_literals(),
                    });
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(((group.order() * pairs.len()) as u64, found.into_iter().flatten().collect()))
}
