use nomic::exactalg::{Field, Vector};
use nomic::horizon::{
    appendix_a, compare_complement_rules, run_sequence, run_symbolic, search_preparation, verify_horizon,
    EnumerationLimits, HorizonConfig, HorizonReport,
};
use nomic::json::{ScenarioDoc, TraceDoc};

#[test]
fn complement_rule_does_not_change_measured_variables() {
    for p in [2, 3] {
        let (cases, bad) = compare_complement_rules(Field::Prime(p), 1, 1, &EnumerationLimits::default()).unwrap();
        assert!(cases > 0);
        assert!(bad.is_empty(), "Z{p}: {} disagreements", bad.len());
    }
}

#[test]
fn reports_round_trip_and_repeat_exactly() {
    let cfg = HorizonConfig::sample(Field::Prime(5), 1, 1, 7, 30, 8);
    let a = verify_horizon(&cfg).unwrap();
    let b = verify_horizon(&cfg).unwrap();
    let text = |r: &HorizonReport| {
        let mut r = r.clone();
        r.elapsed_ms = 0;
        serde_json::to_string_pretty(&r).unwrap()
    };
    assert_eq!(text(&a), text(&b));
    let back: HorizonReport = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
    assert_eq!(back, a);
    assert_eq!(a.seed, Some(7));
    assert!(a.passed());
}

#[test]
fn larger_subject_over_z2() {
    let r = verify_horizon(&HorizonConfig::sample(Field::Prime(2), 1, 2, 3, 200, 10)).unwrap();
    assert!(r.passed());
    assert_eq!(r.joint_dim, 6);
}

#[test]
fn appendix_scenario_round_trips_through_json() {
    let sc = appendix_a(Field::Rationals).unwrap();
    let text = serde_json::to_string(&ScenarioDoc::from_scenario(&sc, None)).unwrap();
    let back: ScenarioDoc = serde_json::from_str(&text).unwrap();
    let sc2 = back.to_scenario().unwrap();
    assert_eq!(sc2, sc);
    let u = Vector::from_ints(Field::Rationals, &[1, 2, 3, 4, 5, 6]);
    let tr = run_sequence(&sc2, &u).unwrap();
    assert_eq!(tr.states[2], Vector::from_ints(Field::Rationals, &[5, 2, 5, -2, 10, 6]));
    let doc = TraceDoc::from_trace(&tr);
    assert_eq!(doc.states[2][3], serde_json::json!("-2/1"));
    assert_eq!(run_symbolic(&sc2).evaluate(2, &u), tr.states[2]);
}

#[test]
fn preparation_search_with_postselection() {
    let plain = search_preparation(Field::Prime(2), 1, 1, false, &EnumerationLimits::default()).unwrap();
    let post = search_preparation(Field::Prime(2), 1, 1, true, &EnumerationLimits::default()).unwrap();
    assert!(plain.witnesses.is_empty());
    assert_eq!(post.maps_checked, 720);
    // Post-selected witnesses, if any, must reproduce on replay.
    let again = search_preparation(Field::Prime(2), 1, 1, true, &EnumerationLimits::default()).unwrap();
    assert_eq!(post, again);
}
