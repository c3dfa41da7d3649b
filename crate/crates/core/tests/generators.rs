mod common;

use common::*;
use serde_json::json;
use widthdecomp::generators::*;
use widthdecomp::pddl::load_task;
use widthdecomp::statespace::bfs_optimal;

fn spec(domain: DomainTag, seed: u64, params: serde_json::Value) -> GenSpec {
    let mut v = params;
    v["domain"] = json!(domain);
    v["seed"] = json!(seed);
    serde_json::from_value(v).unwrap()
}

fn small_specs() -> Vec<GenSpec> {
    let mut out = Vec::new();
    for seed in 0..3 {
        out.push(spec(DomainTag::Delivery, seed, json!({"x": 3, "y": 3, "packages": 2})));
        out.push(spec(DomainTag::Delivery, seed, json!({"x": 3, "y": 2, "packages": 2, "agents": 2})));
        out.push(spec(DomainTag::Delivery, seed, json!({"x": 3, "y": 3, "packages": 2, "unique_targets": true})));
        out.push(spec(DomainTag::Gripper, seed, json!({"balls": 3})));
        out.push(spec(DomainTag::Spanner, seed, json!({"spanners": 3, "nuts": 2, "locations": 3})));
        out.push(spec(DomainTag::Miconic, seed, json!({"floors": 3, "passengers": 2})));
        out.push(spec(DomainTag::Reward, seed, json!({"x": 3, "y": 3, "rewards": 3, "obstacles": 1})));
        out.push(spec(DomainTag::Visitall, seed, json!({"x": 3, "y": 2, "visit_fraction": 0.6})));
        out.push(spec(DomainTag::Blocks, seed, json!({"blocks": 4, "towers": 2})));
        out.push(spec(DomainTag::Childsnack, seed, json!({"children": 2, "gluten_ratio": 0.5, "tables": 2})));
    }
    out
}

#[test]
fn generation_is_deterministic() {
    for s in small_specs() {
        assert_eq!(generate(&s).unwrap(), generate(&s).unwrap(), "{}", s.instance_id());
    }
    let a = generate(&delivery_spec(5, 5, 4, 1, 0)).unwrap();
    let b = generate(&delivery_spec(5, 5, 4, 1, 1)).unwrap();
    assert_ne!(a.1, b.1);
}

#[test]
fn small_instances_are_solvable() {
    for s in small_specs() {
        let (d, p) = generate(&s).unwrap();
        let task = load_task(&d, &p).unwrap();
        let opt = bfs_optimal(&task, task.init(), None, 500_000).unwrap();
        assert!(opt.is_some(), "{} unsolvable", s.instance_id());
    }
}

#[test]
fn delivery_layout() {
    let inst = generate_instance(&delivery_spec(5, 5, 4, 1, 9)).unwrap();
    assert_eq!(inst.objects.iter().filter(|o| o.ty == "cell").count(), 25);
    assert_eq!(inst.goal.len(), 4);
    let targets: std::collections::BTreeSet<&str> = inst.goal.iter().map(|g| g.args[1].as_str()).collect();
    assert_eq!(targets.len(), 1);
    let adj: Vec<_> = inst.init.iter().filter(|a| a.predicate == "adjacent").collect();
    // 40 undirected edges on a 5×5 grid.
    assert_eq!(adj.len(), 80);
    for a in &adj {
        assert!(adj.iter().any(|b| b.args[0] == a.args[1] && b.args[1] == a.args[0]));
    }
    let unique = spec(DomainTag::Delivery, 9, json!({"x": 5, "y": 5, "packages": 4, "unique_targets": true}));
    let inst = generate_instance(&unique).unwrap();
    let targets: std::collections::BTreeSet<&str> = inst.goal.iter().map(|g| g.args[1].as_str()).collect();
    assert_eq!(targets.len(), 4);
}

#[test]
fn spanner_roster_and_one_way_links() {
    let s = spec(DomainTag::Spanner, 4, json!({"spanners": 14, "nuts": 7, "locations": 10}));
    let inst = generate_instance(&s).unwrap();
    assert_eq!(inst.objects.iter().filter(|o| o.ty == "spanner").count(), 14);
    assert_eq!(inst.goal.len(), 7);
    assert!(inst.goal.iter().all(|g| g.predicate == "tightened"));
    let links: Vec<_> = inst.init.iter().filter(|a| a.predicate == "link").collect();
    assert_eq!(links.len(), 11);
    for a in &links {
        assert!(!links.iter().any(|b| b.args[0] == a.args[1] && b.args[1] == a.args[0]));
    }
    let at_gate = inst
        .init
        .iter()
        .filter(|a| a.predicate == "at" && a.args[0].starts_with("nut") && a.args[1] == "gate")
        .count();
    assert_eq!(at_gate, 7);
}

#[test]
fn empty_gripper_is_trivially_solved() {
    let task = spec_task(&spec(DomainTag::Gripper, 0, json!({"balls": 0})));
    assert_eq!(task.goal_atoms().count(), 0);
    assert_eq!(bfs_optimal(&task, task.init(), None, 10).unwrap(), Some(0));
}

#[test]
fn gripper_has_two_grippers() {
    for balls in [1, 5] {
        let inst = generate_instance(&spec(DomainTag::Gripper, 0, json!({ "balls": balls }))).unwrap();
        assert_eq!(inst.init.iter().filter(|a| a.predicate == "gripper").count(), 2);
    }
}

#[test]
fn invalid_specs_rejected() {
    let too_many = spec(DomainTag::Reward, 0, json!({"x": 2, "y": 2, "rewards": 5}));
    assert!(matches!(generate(&too_many), Err(GenError::InvalidSpec { .. })));
    let ratio = spec(DomainTag::Childsnack, 0, json!({"children": 2, "gluten_ratio": 1.5}));
    assert!(matches!(generate(&ratio), Err(GenError::InvalidSpec { .. })));
}

#[test]
fn suite_expansion() {
    let m = SuiteManifest::from_json(
        r#"{"seed": 7, "entries": [
             {"domain": "delivery", "x": [3, 4], "y": 3, "packages": [1, 2, 3], "repeat": 2},
             {"domain": "gripper", "balls": 2, "seed": 11}
           ]}"#,
    )
    .unwrap();
    let specs = m.expand().unwrap();
    assert_eq!(specs.len(), 13);
    assert_eq!(specs.iter().filter(|s| s.domain == DomainTag::Delivery).count(), 12);
    assert_eq!(specs[12].seed, 11);
    let seeds: std::collections::BTreeSet<u64> = specs[..12].iter().map(|s| s.seed).collect();
    assert_eq!(seeds.len(), 12);
    assert_eq!(m.expand().unwrap(), specs);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("suite.json");
    std::fs::write(&path, serde_json::to_string(&m).unwrap()).unwrap();
    assert_eq!(suite(&path).unwrap(), specs);
    assert!(matches!(
        SuiteManifest::from_json(r#"{"entries": [{"domain": "sokoban"}]}"#).unwrap().expand(),
        Err(GenError::Manifest(_))
    ));
}

#[test]
fn instance_ids_are_distinct() {
    let ids: std::collections::BTreeSet<String> = small_specs().iter().map(GenSpec::instance_id).collect();
    assert_eq!(ids.len(), small_specs().len());
}
