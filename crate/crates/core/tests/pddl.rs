mod common;

use common::*;
use widthdecomp::generators::{domains, DomainTag};
use widthdecomp::pddl::*;
use widthdecomp::statespace::StateGraph;

#[test]
fn gripper_domain_schemas() {
    let dom = parse_domain(domains::GRIPPER).unwrap();
    let arities: Vec<(&str, usize)> = dom.schemas.iter().map(|s| (s.name.as_str(), s.parameters.len())).collect();
    assert_eq!(arities, [("move", 2), ("pick", 3), ("drop", 3)]);
}

#[test]
fn empty_domain_body() {
    let dom = parse_domain("(define (domain tiny) (:requirements :strips) (:predicates (done)))").unwrap();
    assert!(dom.schemas.is_empty());
    assert_eq!(dom.predicates.len(), 1);
    assert_eq!(dom.predicates[0].arity(), 0);
}

#[test]
fn delivery_domain_schemas() {
    let dom = parse_domain(domains::DELIVERY).unwrap();
    let names: Vec<&str> = dom.schemas.iter().map(|s| s.name.as_str()).collect();
    assert_eq!(names, ["pick_package", "drop_package", "move"]);
    let pick = dom.schema("pick_package").unwrap();
    let params: Vec<(&str, &str)> = pick.parameters.iter().map(|p| (p.name.as_str(), p.ty.as_str())).collect();
    assert_eq!(params, [("t", "truck"), ("p", "package"), ("x", "cell")]);
}

#[test]
fn gripper_22_problem() {
    let task = gripper(22);
    assert_eq!(task.objects_of_type("object").iter().filter(|o| o.starts_with("ball")).count(), 22);
    let goals: Vec<String> = task.goal_atoms().map(|g| g.to_string()).collect();
    assert_eq!(goals.len(), 22);
    assert!(goals.iter().all(|g| g.starts_with("at(ball") && g.ends_with(", roomb)")));
}

#[test]
fn empty_goal_problem() {
    let dom = parse_domain(domains::DELIVERY).unwrap();
    let text = DELIVERY_1X2.replace("(:goal (at p1 c1))", "(:goal (and))");
    let inst = parse_problem(&text, &dom).unwrap();
    assert!(inst.goal.is_empty());
}

#[test]
fn delivery_reference_instance_goal() {
    let dom = parse_domain(domains::DELIVERY).unwrap();
    let inst = parse_problem(&fixture("delivery_5x5_p4.pddl"), &dom).unwrap();
    assert_eq!(inst.objects.iter().filter(|o| o.ty == "package").count(), 4);
    let goal: Vec<String> = inst.goal.iter().map(|g| g.to_string()).collect();
    assert_eq!(goal, ["at(p1, c_1_1)", "at(p2, c_1_1)", "at(p3, c_1_1)", "at(p4, c_1_1)"]);
}

#[test]
fn ground_action_counts() {
    assert_eq!(gripper(1).actions().len(), 10);
    let task = delivery_1x2();
    let mut names: Vec<String> = task.actions().iter().map(|a| a.schema.clone()).collect();
    names.dedup();
    assert_eq!(names, ["drop_package", "move", "pick_package"]);
    assert_eq!(task.actions().len(), 6);
    let none = DELIVERY_1X2.replace(" p1 - package", "").replace("(at p1 c0)", "").replace("(at p1 c1)", "(empty t)");
    let task = load_task(domains::DELIVERY, &none).unwrap();
    assert!(task.actions().iter().all(|a| a.schema == "move"));
    assert_eq!(task.actions().len(), 2);
}

#[test]
fn actions_and_atoms_sorted() {
    let task = delivery(3, 3, 2, 1, 0);
    let keys: Vec<(String, Vec<String>)> = task.actions().iter().map(|a| (a.schema.clone(), a.args.clone())).collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
    assert!(task.atoms().windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn statics_compiled_out() {
    let task = delivery(3, 3, 1, 1, 0);
    assert!(task.atoms().iter().all(|a| a.predicate != "adjacent"));
    assert!(task.static_holds("adjacent", &["c_0_0", "c_0_1"]));
    assert!(!task.static_holds("adjacent", &["c_0_0", "c_1_1"]));
    // 12 undirected grid edges, both directions.
    assert_eq!(task.actions().iter().filter(|a| a.schema == "move").count(), 24);
}

#[test]
fn grounding_is_deterministic() {
    let a = delivery(4, 3, 3, 2, 7);
    let b = delivery(4, 3, 3, 2, 7);
    assert_eq!(a.atoms(), b.atoms());
    assert_eq!(a.actions(), b.actions());
    assert_eq!(a.fingerprint(), b.fingerprint());
}

#[test]
fn pddl_round_trip() {
    for tag in DomainTag::ALL {
        let dom = parse_domain(tag.domain_pddl()).unwrap();
        let again = parse_domain(&dom.to_pddl()).unwrap();
        assert_eq!(dom, again, "{tag}");
    }
    let dom = parse_domain(domains::DELIVERY).unwrap();
    let inst = parse_problem(&fixture("delivery_5x5_p4.pddl"), &dom).unwrap();
    assert_eq!(parse_problem(&inst.to_pddl(), &dom).unwrap(), inst);
}

#[test]
fn unsatisfied_goal_atoms() {
    let task = gripper(1);
    let ext = add_unsatisfied_goal_predicates(&task);
    let ug = atom(&ext, "at_ug(ball1, roomb)");
    assert!(ext.init().contains(ug));
    assert_eq!(&ext.atoms()[..task.num_atoms()], task.atoms());
    assert_eq!(ext.num_atoms(), task.num_atoms() + 1);

    let text = DELIVERY_1X2.replace("(:goal (at p1 c1))", "(:goal (and (at p1 c1) (empty t)))");
    let task = load_task(domains::DELIVERY, &text).unwrap();
    let ext = add_unsatisfied_goal_predicates(&task);
    assert!(!ext.init().contains(atom(&ext, "empty_ug(t)")));
    assert!(ext.init().contains(atom(&ext, "at_ug(p1, c1)")));

    let text = DELIVERY_1X2.replace("(:goal (at p1 c1))", "(:goal (and))");
    let task = load_task(domains::DELIVERY, &text).unwrap();
    let ext = add_unsatisfied_goal_predicates(&task);
    assert_eq!(ext.atoms(), task.atoms());
    assert_eq!(ext.actions(), task.actions());
    assert_eq!(ext.init(), task.init());
}

#[test]
fn unsatisfied_goal_atoms_track_goals_everywhere() {
    for task in [gripper(2), delivery(3, 2, 2, 1, 3)] {
        let ext = add_unsatisfied_goal_predicates(&task);
        let graph = StateGraph::explore(&ext, 100_000).unwrap();
        let plain = StateGraph::explore(&task, 100_000).unwrap();
        assert_eq!(graph.len(), plain.len());
        for s in graph.states() {
            for g in task.goal_atoms() {
                let p = ext.atom_id(g).unwrap();
                let ug = ext
                    .atom_id(&GroundAtom::new(format!("{}_ug", g.predicate), g.args.clone()))
                    .unwrap();
                assert_ne!(s.contains(p), s.contains(ug));
            }
        }
    }
}

#[test]
fn error_reporting() {
    match parse_domain("(define (domain x)\n  (:predicates (p)\n") {
        Err(PddlError::Syntax { line, .. }) => assert!(line >= 2),
        other => panic!("{other:?}"),
    }
    assert_eq!(
        parse_domain("(define (domain x) (:requirements :adl) (:predicates (p)))"),
        Err(PddlError::UnsupportedFeature(":adl".into()))
    );
    let dom = parse_domain(domains::DELIVERY).unwrap();
    let bad_type = DELIVERY_1X2.replace("t - truck", "t - lorry");
    assert!(matches!(parse_problem(&bad_type, &dom), Err(PddlError::UnknownObjectType { .. })));
    let bad_pred = DELIVERY_1X2.replace("(empty t)", "(idle t)");
    assert_eq!(parse_problem(&bad_pred, &dom), Err(PddlError::UnknownPredicate("idle".into())));
    let bad_arity = DELIVERY_1X2.replace("(empty t)", "(empty t c0)");
    assert!(matches!(parse_problem(&bad_arity, &dom), Err(PddlError::ArityMismatch { expected: 1, found: 2, .. })));
    let inst = parse_problem(DELIVERY_1X2, &dom).unwrap();
    let opts = GroundOptions { action_cap: 3 };
    assert_eq!(ground_with(&dom, &inst, opts).unwrap_err(), PddlError::GroundingExplosion { cap: 3 });
}
