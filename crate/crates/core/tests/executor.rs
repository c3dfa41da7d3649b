mod common;

use common::*;
use widthdecomp::executor::*;
use widthdecomp::generators::{domains, DomainTag};
use widthdecomp::pddl::load_task;
use widthdecomp::policy::{sketch_policy, UniformPolicy};
use widthdecomp::sketch::{builtin_ruleset, Feature, FeatureKind, Ruleset, RulesetName, SketchRule};
use widthdecomp::statespace::validate;
use widthdecomp::width::Width;

fn r(name: RulesetName, tag: DomainTag) -> widthdecomp::policy::SketchPolicy {
    sketch_policy(builtin_ruleset(name, tag).unwrap())
}

fn last_schema(task: &widthdecomp::pddl::GroundedTask, seg: &Segment) -> String {
    task.action(*seg.actions.last().unwrap()).schema.clone()
}

#[test]
fn empty_trace_rendering() {
    let text = DELIVERY_1X2.replace("(at p1 c0)", "(at p1 c1)");
    let task = load_task(domains::DELIVERY, &text).unwrap();
    let trace = siw_pi(&task, &UniformPolicy, &ExecOptions::default());
    assert!(trace.solved);
    assert_eq!(emit_trace(&trace, &task), "Primitive plan: 0\nPlan: 0\n");
}

#[test]
fn delivery_reference_trace_shape() {
    let task = fixture_task(DomainTag::Delivery, "delivery_5x5_p4.pddl");
    let trace = siw_pi(&task, &r(RulesetName::R2, DomainTag::Delivery), &ExecOptions::default());
    assert!(trace.solved);
    assert_eq!(trace.subgoal_count(), 8);
    for (i, seg) in trace.segments.iter().enumerate() {
        let want = if i % 2 == 0 { "pick_package" } else { "drop_package" };
        assert_eq!(last_schema(&task, seg), want);
    }
    assert!(validate(&task, task.init(), &flatten(&trace)).is_ok());
    let text = emit_trace(&trace, &task);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], format!("Primitive plan: {}", trace.primitive_length()));
    assert_eq!(lines[1], "Plan: 8");
    assert!(lines[2].starts_with("1 move(t1, c_4_1, "));
    assert!(lines[2].ends_with("pick_package(t1, p2, c_4_4)"));
    assert!(lines[3].ends_with("drop_package(t1, p2, c_1_1)"));
}

#[test]
fn gripper_trace_alternates_after_filling() {
    let task = gripper(6);
    let trace = siw_pi(&task, &r(RulesetName::R4, DomainTag::Gripper), &ExecOptions::default());
    assert!(trace.solved);
    assert_eq!(trace.subgoal_count(), 12);
    let schemas: Vec<String> = trace.segments.iter().map(|s| last_schema(&task, s)).collect();
    assert_eq!(&schemas[..2], ["pick", "pick"]);
    for pair in schemas[2..10].chunks(2) {
        assert_eq!(pair, ["drop", "pick"]);
    }
    assert_eq!(&schemas[10..], ["drop", "drop"]);
}

#[test]
fn width_two_delivers_per_call() {
    let task = delivery(5, 5, 4, 1, 8);
    let trace = siw_pi(&task, &r(RulesetName::R1, DomainTag::Delivery), &ExecOptions { k: Width::TWO, ..Default::default() });
    assert!(trace.solved);
    assert_eq!(trace.subgoal_count(), 4);
    assert!(trace.segments.iter().all(|s| last_schema(&task, s) == "drop_package"));
}

#[test]
fn failure_reasons() {
    let task = delivery(4, 4, 3, 1, 1);
    let opts = ExecOptions {
        max_calls: Some(3),
        ..Default::default()
    };
    let trace = siw_pi(&task, &r(RulesetName::R2, DomainTag::Delivery), &opts);
    assert!(!trace.solved);
    assert_eq!(trace.failure, Some(FailureReason::MaxCalls));
    assert_eq!(trace.subgoal_count(), 3);
    assert!(emit_trace(&trace, &task).ends_with("Unsolved: max-calls\n"));

    let stuck = DELIVERY_1X2.replace("(at t c0)", "").replace("(empty t)", "");
    let task = load_task(domains::DELIVERY, &stuck).unwrap();
    let trace = siw_pi(&task, &UniformPolicy, &ExecOptions::default());
    assert_eq!(trace.failure, Some(FailureReason::NoCandidates));

    let growth = Ruleset {
        name: "grow".into(),
        features: vec![Feature::new("N", FeatureKind::Numeric, "goals.unachieved")],
        rules: vec![SketchRule::new(&[], &["N+"]).unwrap()],
    };
    let task = delivery_1x2();
    let trace = siw_pi(&task, &sketch_policy(growth), &ExecOptions::default());
    assert_eq!(trace.failure, Some(FailureReason::PolicyFailure));
    assert!(trace.failure_detail.is_some());
}

#[test]
fn default_call_budget() {
    let task = delivery(3, 3, 2, 1, 0);
    assert_eq!(ExecOptions::default().max_calls_for(&task), 12);
    assert_eq!(ExecOptions { max_calls: Some(5), ..Default::default() }.max_calls_for(&task), 5);
}

#[test]
fn cycle_prevention_never_revisits_subgoals() {
    let task = delivery(3, 3, 2, 1, 3);
    for seed in 0..10 {
        let opts = ExecOptions {
            cycle_prevention: true,
            selection: Selection::Stochastic,
            max_calls: Some(200),
            seed,
            ..Default::default()
        };
        let trace = siw_pi(&task, &UniformPolicy, &opts);
        let mut seen = Vec::new();
        for seg in &trace.segments {
            assert!(!seen.contains(&seg.subgoal));
            seen.push(seg.subgoal.clone());
        }
        if trace.solved {
            assert!(validate(&task, task.init(), &flatten(&trace)).is_ok());
        }
    }
}

#[test]
fn stochastic_runs_are_reproducible() {
    let task = delivery(3, 3, 2, 1, 3);
    let opts = ExecOptions {
        selection: Selection::Stochastic,
        seed: 42,
        max_calls: Some(30),
        ..Default::default()
    };
    assert_eq!(siw_pi(&task, &UniformPolicy, &opts), siw_pi(&task, &UniformPolicy, &opts));
}

#[test]
fn trace_json_fields() {
    let task = delivery_1x2();
    let trace = siw_pi(&task, &r(RulesetName::R2, DomainTag::Delivery), &ExecOptions::default());
    let v = trace.to_json(&task);
    assert_eq!(v["solved"], true);
    assert_eq!(v["subgoal_count"], 2);
    assert_eq!(v["primitive_length"], 3);
    assert_eq!(v["segments"][0]["actions"][0], "pick_package(t, p1, c0)");
    assert_eq!("stochastic".parse::<Selection>().unwrap(), Selection::Stochastic);
    assert!("random".parse::<Selection>().is_err());
}
