//! Brute-force verification engines and the sequential scenario runner.

mod claims;
mod copier;
mod enumerate;
mod preparation;
mod scenario;
mod verify;

pub use claims::{knowledge_claims, Determination, KnowledgeClaims};
pub use copier::{search_copier, CopierSearch};
pub use enumerate::{
    enumerate_by_closure, enumerate_symplectic, naive_candidate_count, naive_gate_filter, sample_cross_check,
    transvection_generators, EnumerationLimits, EnumerationPath, SampleCrossCheck, SymplecticGroup, WordSampler,
};
pub use preparation::{search_preparation, PreparationSearch, PreparationWitness};
pub use scenario::{
    appendix_a, appendix_a_closed_forms, check_appendix_a, run_sequence, run_symbolic, verify_recurrence, AffineForm,
    Disturbance, Scenario, ScenarioTrace, Step, Subject, SymbolicTrace,
};
pub use verify::{
    compare_complement_rules, verify_horizon, HorizonConfig, HorizonReport, MeasurableClaim, Mode, PoissonViolation,
    RuleDisagreement,
};
