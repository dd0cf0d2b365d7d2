use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use nomic::exactalg::{Field, Scalar, Vector};
use nomic::horizon::{
    appendix_a, check_appendix_a, run_sequence, run_symbolic, verify_horizon as run_horizon, EnumerationLimits,
    HorizonConfig, HorizonReport, Scenario, ScenarioTrace,
};
use nomic::json::{
    Initial, MeasurementDoc, ScenarioDoc, SpaceDoc, StateDoc, SubspaceDoc, SymbolicTraceDoc, TraceDoc, TransformDoc,
    VariableDoc,
};
use nomic::measurement::{construct_measurement, ComplementRule};
use nomic::transform::gate_violation;
use nomic::Error;

use crate::output::Emit;
use crate::{Builtin, ModeArg, RuleArg};

fn parse_field(s: &str) -> Result<Field> {
    s.parse::<Field>().map_err(anyhow::Error::from)
}

fn read_doc<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn literal(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn row_text(row: &[Value]) -> String {
    row.iter().map(literal).collect::<Vec<_>>().join(" ")
}

fn rows_text(rows: &[Vec<Value>], indent: &str) -> String {
    if rows.is_empty() {
        return format!("{indent}(no rows)\n");
    }
    rows.iter().map(|r| format!("{indent}[{}]\n", row_text(r))).collect()
}

#[allow(clippy::too_many_arguments)]
pub fn verify_horizon(
    field: &str,
    ns: usize,
    na: usize,
    mode: ModeArg,
    seed: Option<u64>,
    samples: usize,
    word_length: usize,
    rule: RuleArg,
    max_dim: usize,
) -> Result<Emit> {
    let field = parse_field(field)?;
    let mut config = match mode {
        ModeArg::Exhaustive => HorizonConfig::exhaustive(field, ns, na),
        ModeArg::Sample => {
            let Some(seed) = seed else {
                bail!("--seed is required in sample mode");
            };
            HorizonConfig::sample(field, ns, na, seed, samples, word_length)
        }
    };
    config.rule = match rule {
        RuleArg::Leading => ComplementRule::Leading,
        RuleArg::Trailing => ComplementRule::Trailing,
    };
    config.limits = EnumerationLimits {
        max_dim,
        ..EnumerationLimits::default()
    };
    let report = run_horizon(&config).context("infeasible sweep")?;
    let text = horizon_text(&report);
    let json = serde_json::to_value(&report)?;
    Ok(if report.passed() {
        Emit::ok(json, text)
    } else {
        let n = report.poisson_violations.len() + report.non_poisson_measurable_claims.len();
        Emit::failed(json, text, format!("{n} witnesses against the horizon"))
    })
}

fn horizon_text(r: &HorizonReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "verdict        {}", r.verdict);
    let _ = writeln!(s, "field          {}  (n_S = {}, n_A = {}, joint dim {})", r.field, r.n_s, r.n_a, r.joint_dim);
    let _ = write!(s, "mode           {}", r.mode);
    if let (Some(seed), Some(n), Some(l)) = (r.seed, r.samples, r.word_length) {
        let _ = write!(s, "  (seed {seed}, {n} samples, words of length {l})");
    }
    s.push('\n');
    if let Some(order) = r.group_order {
        let path = r.enumeration_path.as_deref().unwrap_or("?");
        let _ = writeln!(s, "group order    {order}  (via {path})");
    }
    let _ = writeln!(s, "measurements   {}  ({} manifest subspaces each)", r.measurements_checked, r.lagrangians_per_subject);
    let _ = writeln!(
        s,
        "variables      {} Poisson constructed, {} non-Poisson rejected",
        r.poisson_variables_checked, r.non_poisson_variables_rejected
    );
    for v in &r.poisson_violations {
        let _ = writeln!(s, "violation      measured variable with nonzero bracket");
        s.push_str(&rows_text(&v.matrix, "  M  "));
        s.push_str(&rows_text(&v.manifest, "  Q  "));
        s.push_str(&rows_text(&v.measured, "  Z  "));
    }
    for c in &r.non_poisson_measurable_claims {
        let _ = writeln!(s, "claim          {}", c.reason);
        s.push_str(&rows_text(&c.variable, "  Z  "));
    }
    let _ = writeln!(s, "elapsed        {} ms", r.elapsed_ms);
    s
}

fn retarget(doc: &mut SpaceDoc, field: &str) {
    match doc {
        SpaceDoc::Atomic { field: f, .. } => *f = field.to_string(),
        SpaceDoc::Composite { compose } => compose.iter_mut().for_each(|d| retarget(d, field)),
    }
}

fn parse_initial(field: Field, text: &str) -> Result<Vector> {
    let entries = text
        .split(',')
        .map(|t| Scalar::parse(field, t))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(Vector::new(field, entries)?)
}

fn gate_failure(label: &str, reason: &str) -> Emit {
    Emit::failed(
        json!({"error": "step rejected by the symplectic gate", "step": label, "reason": reason}),
        format!("step `{label}` rejected: {reason}"),
        format!("step `{label}` is not symplectic"),
    )
}

pub fn run_scenario(
    file: Option<&Path>,
    builtin: Option<Builtin>,
    field: Option<&str>,
    initial: Option<&str>,
    all_initial: bool,
    symbolic: bool,
) -> Result<Emit> {
    let (scenario, from_doc, is_appendix) = match (file, builtin) {
        (_, Some(Builtin::AppendixA)) => {
            let f = parse_field(field.unwrap_or("z2"))?;
            (appendix_a(f)?, None, true)
        }
        (Some(path), None) => {
            let mut doc: ScenarioDoc = read_doc(path)?;
            if let Some(f) = field {
                parse_field(f)?;
                retarget(&mut doc.space, f);
            }
            match doc.to_scenario() {
                Ok(sc) => (sc, Some(doc), false),
                Err(Error::StepGate { label, reason }) => return Ok(gate_failure(&label, &reason)),
                Err(e) => return Err(e.into()),
            }
        }
        (None, None) => bail!("give a scenario file or --builtin"),
    };
    let f = scenario.space().field();
    let requested = if let Some(text) = initial {
        Initial::State(parse_initial(f, text)?)
    } else if all_initial {
        Initial::All
    } else if symbolic {
        Initial::Symbolic
    } else {
        match &from_doc {
            Some(doc) => doc.initial(scenario.space())?.unwrap_or(Initial::Symbolic),
            None => Initial::Symbolic,
        }
    };

    match requested {
        Initial::Symbolic => {
            let sym = run_symbolic(&scenario);
            let doc = SymbolicTraceDoc::from_trace(&sym);
            let mut text = String::new();
            for t in 0..doc.states.len() {
                let label = if t == 0 { "" } else { &doc.labels[t - 1] };
                let _ = writeln!(text, "t{t} {label:<6} ({})", doc.states[t].join(", "));
                for (subject, reading) in scenario.subjects().iter().zip(&doc.readings[t]) {
                    let _ = writeln!(text, "   {:<6} pointer {}", subject.factor, reading.join(", "));
                }
            }
            Ok(Emit::ok(json!({"field": f.to_string(), "symbolic": doc}), text))
        }
        Initial::State(u) => {
            if u.len() != scenario.space().dim() {
                bail!("initial state has {} entries, expected {}", u.len(), scenario.space().dim());
            }
            let trace = run_sequence(&scenario, &u)?;
            let mut json = json!({"field": f.to_string(), "trace": TraceDoc::from_trace(&trace)});
            let mut text = trace_text(&scenario, &trace);
            if is_appendix {
                if let Err(e) = check_appendix_a(&trace) {
                    json["closed_forms"] = json!("mismatch");
                    return Ok(Emit::failed(json, text, e.to_string()));
                }
                json["closed_forms"] = json!("match");
                text.push_str("closed forms   match\n");
            }
            Ok(Emit::ok(json, text))
        }
        Initial::All => {
            if !f.is_finite() {
                bail!("--all-initial needs a finite field");
            }
            let states = nomic::exactalg::all_vectors(f, scenario.space().dim())?;
            let mut traces = Vec::with_capacity(states.len());
            let mut text = String::new();
            let mut mismatch = None;
            for u in &states {
                let trace = run_sequence(&scenario, u)?;
                if is_appendix && mismatch.is_none() {
                    mismatch = check_appendix_a(&trace).err();
                }
                let chain: Vec<String> = trace.states.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(text, "{}", chain.join(" -> "));
                traces.push(TraceDoc::from_trace(&trace));
            }
            let mut json = json!({
                "field": f.to_string(),
                "initial_states": states.len(),
                "traces": traces,
            });
            if is_appendix {
                let verdict = if mismatch.is_none() { "match" } else { "mismatch" };
                json["closed_forms"] = json!(verdict);
                let _ = writeln!(text, "{} initial states, closed forms {verdict}", states.len());
            }
            Ok(match mismatch {
                Some(e) => Emit::failed(json, text, e.to_string()),
                None => Emit::ok(json, text),
            })
        }
    }
}

fn trace_text(scenario: &Scenario, trace: &ScenarioTrace) -> String {
    let mut s = String::new();
    for (t, state) in trace.states.iter().enumerate() {
        let label = if t == 0 { "" } else { trace.labels[t - 1].as_str() };
        let _ = write!(s, "t{t} {label:<6} {state}");
        let pointers: Vec<String> = scenario
            .subjects()
            .iter()
            .zip(&trace.readings[t])
            .map(|(sub, r)| format!("{} = {r}", sub.factor))
            .collect();
        if !pointers.is_empty() {
            let _ = write!(s, "   pointers: {}", pointers.join(", "));
        }
        if t > 0 && !trace.disturbances[t - 1].is_empty() {
            let moved: Vec<String> = trace.disturbances[t - 1]
                .iter()
                .map(|d| format!("{} by {}", d.coordinate, d.delta))
                .collect();
            let _ = write!(s, "   moved: {}", moved.join(", "));
        }
        s.push('\n');
    }
    s
}

pub fn build_measurement(path: &Path) -> Result<Emit> {
    let doc: VariableDoc = read_doc(path)?;
    let z = doc.to_variable()?;
    match construct_measurement(z.space(), &z) {
        Ok(m) => {
            let out = MeasurementDoc::from_measurement(&m);
            let mut text = format!("measurement on {}\n", m.joint().name());
            text.push_str(&rows_text(&out.transform.matrix, "  "));
            let _ = writeln!(text, "manifest subspace of {}", m.subject().space().name());
            text.push_str(&rows_text(&out.subject.manifest, "  "));
            Ok(Emit::ok(serde_json::to_value(&out)?, text))
        }
        Err(Error::NotPoisson { i, j, value }) => {
            let rows = z.matrix().to_literals();
            let json = json!({
                "poisson": false,
                "witness": {"i": i, "j": j, "bracket": value, "row_i": rows[i], "row_j": rows[j]},
            });
            let text = format!(
                "not a Poisson variable: rows {i} [{}] and {j} [{}] have bracket {value}",
                row_text(&rows[i]),
                row_text(&rows[j])
            );
            Ok(Emit::failed(json, text, format!("bracket of rows {i} and {j} is {value}")))
        }
        Err(e) => Err(e.into()),
    }
}

pub fn marginalize(path: &Path, factor: &str) -> Result<Emit> {
    let doc: StateDoc = read_doc(path)?;
    let state = doc.to_state()?;
    let marginal = state.marginal(factor)?;
    let out = StateDoc::from_state(&marginal);
    let text = format!("{marginal}\n");
    Ok(Emit::ok(serde_json::to_value(&out)?, text))
}

pub fn check_symplectic(path: &Path) -> Result<Emit> {
    let doc: TransformDoc = read_doc(path)?;
    let space = doc.resolve_space(None)?;
    let (m, _) = doc.parts(&space)?;
    Ok(match gate_violation(&space, &m) {
        None => Emit::ok(
            json!({"symplectic": true, "dim": space.dim()}),
            format!("symplectic on {} (dim {})", space.name(), space.dim()),
        ),
        Some((row, col, value)) => Emit::failed(
            json!({"symplectic": false, "witness": {"row": row, "col": col, "value": value}}),
            format!("not symplectic: (MᵀΩM − Ω)[{row}][{col}] = {value}"),
            "matrix fails the symplectic gate",
        ),
    })
}

pub fn classify_subspace(path: &Path) -> Result<Emit> {
    let doc: SubspaceDoc = read_doc(path)?;
    let (space, w) = doc.to_subspace()?;
    let class = space.classify(&w)?;
    let perp = space.symplectic_complement(&w)?;
    let json = json!({
        "class": class,
        "dim": w.dim(),
        "ambient_dim": space.dim(),
        "complement": perp.basis().to_literals(),
    });
    let text = format!("{class}: dim {} in {}, complement {perp}", w.dim(), space.dim());
    Ok(Emit::ok(json, text))
}

pub fn search_preparation(field: &str, ns: usize, na: usize, postselect: bool) -> Result<Emit> {
    let field = parse_field(field)?;
    let r = nomic::horizon::search_preparation(field, ns, na, postselect, &EnumerationLimits::default())
        .context("infeasible search")?;
    let text = format!(
        "{} maps x {} subject states{}: {} preparing interactions\n",
        r.maps_checked,
        r.subject_states,
        if postselect { " (post-selected)" } else { "" },
        r.witnesses.len()
    );
    Ok(Emit::ok(serde_json::to_value(&r)?, text))
}
