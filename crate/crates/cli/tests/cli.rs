use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

use nomic::json::{MeasurementDoc, StateDoc};

fn nomic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nomic"))
        .args(args)
        .env("NOMIC_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn put(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn horizon_z2_passes() {
    let o = nomic(&["verify-horizon", "--field", "z2", "--ns", "1", "--na", "1", "--mode", "exhaustive"]);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    assert_eq!(r["group_order"], 720);
    assert_eq!(r["verdict"], "PASS");
    assert_eq!(r["poisson_violations"], json!([]));
}

#[test]
fn horizon_over_rationals_is_infeasible() {
    let o = nomic(&["verify-horizon", "--field", "q", "--mode", "exhaustive"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("rationals"));
}

#[test]
fn horizon_z3_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = nomic(&["verify-horizon", "--field", "z3", "--ns", "1", "--na", "1", "--mode", "exhaustive", "-o", s(&out)]);
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r["group_order"], 51840);
    assert_eq!(r["measurements_checked"], 51840 * 4);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1, "no temp files left behind");
}

#[test]
fn sample_mode_needs_seed_and_repeats_exactly() {
    let base = ["verify-horizon", "--field", "q", "--mode", "sample", "--samples", "15"];
    assert_eq!(code(&nomic(&base)), 1);
    let run = || {
        let mut args = base.to_vec();
        args.extend(["--seed", "11"]);
        let mut r = stdout_json(&nomic(&args));
        assert_eq!(r["verdict"], "PASS");
        r["elapsed_ms"] = json!(0);
        serde_json::to_string(&r).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn appendix_scenario_all_initial_states() {
    let o = nomic(&["run-scenario", "--builtin", "appendix-a", "--field", "z2", "--all-initial"]);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    assert_eq!(r["initial_states"], 64);
    assert_eq!(r["traces"].as_array().unwrap().len(), 64);
    assert_eq!(r["closed_forms"], "match");
}

#[test]
fn appendix_scenario_with_rationals() {
    let o = nomic(&["run-scenario", "--builtin", "appendix-a", "--field", "q", "--initial", "1,2,3,4,5,6"]);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    assert_eq!(r["trace"]["states"][2], json!(["5/1", "2/1", "5/1", "-2/1", "10/1", "6/1"]));
    assert_eq!(r["trace"]["readings"][2], json!([["5/1"], ["10/1"]]));
    let half = nomic(&["run-scenario", "--builtin", "appendix-a", "--field", "q", "--initial", "0,1/2,0,0,0,0"]);
    assert_eq!(stdout_json(&half)["trace"]["states"][2][4], "1/2");
}

#[test]
fn scenario_file_with_bad_step_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = put(
        dir.path(),
        "bad.json",
        &json!({
            "space": {"compose": [{"field": "z2", "n": 1, "name": "S"}, {"field": "z2", "n": 1, "name": "A"}]},
            "subjects": [{"factor": "A"}],
            "initial": [1, 0, 0, 0],
            "steps": [
                {"label": "swap", "transform": {"matrix": [[0,0,1,0],[0,0,0,1],[1,0,0,0],[0,1,0,0]]}},
                {"label": "crush", "transform": {"matrix": [[1,0,0,0],[0,0,0,0],[0,0,1,0],[0,0,0,1]]}}
            ]
        }),
    );
    let o = nomic(&["run-scenario", s(&f)]);
    assert_eq!(code(&o), 2);
    assert_eq!(stdout_json(&o)["step"], "crush");
}

#[test]
fn scenario_file_runs_and_tracks_subjects() {
    let dir = tempfile::tempdir().unwrap();
    let f = put(
        dir.path(),
        "swap.json",
        &json!({
            "space": {"compose": [{"field": "z3", "n": 1, "name": "S"}, {"field": "z3", "n": 1, "name": "A"}]},
            "subjects": [{"factor": "A"}],
            "initial": [1, 2, 0, 0],
            "steps": [{"label": "swap", "transform": {"matrix": [[0,0,1,0],[0,0,0,1],[1,0,0,0],[0,1,0,0]], "shift": [0,0,0,1]}}]
        }),
    );
    let o = nomic(&["run-scenario", s(&f)]);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    assert_eq!(r["trace"]["states"][1], json!([0, 0, 1, 0]));
    assert_eq!(r["trace"]["readings"][1], json!([[1]]));
    let t = nomic(&["run-scenario", s(&f), "--symbolic", "--format", "text"]);
    assert!(String::from_utf8_lossy(&t.stdout).contains("(u3, u4, u1, u2+1)"));
}

#[test]
fn build_measurement_examples() {
    let dir = tempfile::tempdir().unwrap();
    let bit = json!({"field": "z2", "n": 1, "name": "S"});
    let pos = put(dir.path(), "pos.json", &json!({"space": bit, "rows": [[1, 0]]}));
    let o = nomic(&["build-measurement", s(&pos)]);
    assert_eq!(code(&o), 0);
    let m = stdout_json(&o);
    assert_eq!(m["transform"]["matrix"], json!([[1,0,0,0],[0,1,0,1],[1,0,1,0],[0,0,0,1]]));
    let doc: MeasurementDoc = serde_json::from_value(m.clone()).unwrap();
    let back = serde_json::to_value(MeasurementDoc::from_measurement(&doc.to_measurement().unwrap())).unwrap();
    assert_eq!(back, m);

    let id = put(dir.path(), "id.json", &json!({"space": bit, "rows": [[1, 0], [0, 1]]}));
    let o = nomic(&["build-measurement", s(&id)]);
    assert_eq!(code(&o), 2);
    let w = stdout_json(&o);
    assert_eq!(w["witness"]["bracket"], "1");
    assert_eq!(w["witness"]["row_i"], json!([1, 0]));
    assert_eq!(w["witness"]["row_j"], json!([0, 1]));

    let trivial = put(dir.path(), "trivial.json", &json!({"space": bit, "rows": []}));
    let o = nomic(&["build-measurement", s(&trivial)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["transform"]["matrix"], json!([[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]));
}

#[test]
fn marginalize_examples() {
    let dir = tempfile::tempdir().unwrap();
    let two = json!({"compose": [{"field": "z2", "n": 1, "name": "A"}, {"field": "z2", "n": 1, "name": "B"}]});
    let bell = put(
        dir.path(),
        "bell.json",
        &json!({"space": two, "known": [[1, 0, 1, 0], [0, 1, 0, 1]], "value_point": [0, 0, 0, 0]}),
    );
    let o = nomic(&["marginalize", s(&bell), "--factor", "1"]);
    assert_eq!(code(&o), 0);
    let m = stdout_json(&o);
    assert_eq!(m["known"], json!([]));
    let doc: StateDoc = serde_json::from_value(m.clone()).unwrap();
    assert_eq!(serde_json::to_value(StateDoc::from_state(&doc.to_state().unwrap())).unwrap(), m);

    let product = put(
        dir.path(),
        "product.json",
        &json!({"space": two, "known": [[1, 0, 0, 0], [0, 0, 0, 1]], "value_point": [1, 0, 0, 1]}),
    );
    let o = nomic(&["marginalize", s(&product), "--factor", "B"]);
    assert_eq!(code(&o), 0);
    let m = stdout_json(&o);
    assert_eq!(m["known"], json!([[0, 1]]));
    assert_eq!(m["value_point"], json!([0, 1]));

    assert_eq!(code(&nomic(&["marginalize", s(&product), "--factor", "C"])), 1);
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{not json").unwrap();
    assert_eq!(code(&nomic(&["marginalize", s(&junk), "--factor", "1"])), 1);
}

#[test]
fn gate_and_classification() {
    let dir = tempfile::tempdir().unwrap();
    let bit = json!({"field": "q", "n": 1});
    let shear = put(dir.path(), "shear.json", &json!({"space": bit, "matrix": [[1, "1/2"], [0, 1]]}));
    let o = nomic(&["check-symplectic", s(&shear)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["symplectic"], true);
    let squash = put(dir.path(), "squash.json", &json!({"space": bit, "matrix": [[2, 0], [0, 1]]}));
    let o = nomic(&["check-symplectic", s(&squash)]);
    assert_eq!(code(&o), 2);
    assert_eq!(stdout_json(&o)["witness"]["value"], "1");

    let line = put(dir.path(), "line.json", &json!({"space": bit, "basis": [[1, 1]]}));
    let o = nomic(&["classify-subspace", s(&line)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["class"], "lagrangian");
    let plane = put(dir.path(), "plane.json", &json!({"space": {"field": "z3", "n": 2}, "basis": [[1, 0, 0, 0], [0, 0, 1, 0]]}));
    assert_eq!(stdout_json(&nomic(&["classify-subspace", s(&plane)]))["class"], "symplectic");
}

#[test]
fn text_format_and_usage_errors() {
    let o = nomic(&["verify-horizon", "--format", "text"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("verdict        PASS"));
    assert_eq!(code(&nomic(&["verify-horizon", "--field", "z4"])), 1);
    assert_eq!(code(&nomic(&["no-such-command"])), 1);
    assert_eq!(code(&nomic(&["run-scenario"])), 1);
}
