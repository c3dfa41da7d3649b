mod common;

use common::*;
use proptest::prelude::*;
use widthdecomp::bench::novelty_bound;
use widthdecomp::generators::{generate, DomainTag, GenSpec};
use widthdecomp::pddl::{add_unsatisfied_goal_predicates, load_task, GroundedTask};
use widthdecomp::policy::{log_softmax_gradient, softmax};
use widthdecomp::statespace::{apply, successors, Plan, State};
use widthdecomp::width::{nk_successors, Width};

fn small_spec() -> impl Strategy<Value = GenSpec> {
    let delivery = (1usize..4, 1usize..4, 0usize..3, 1usize..3, any::<u64>()).prop_filter_map(
        "grid too small",
        |(x, y, p, a, seed)| (x * y >= 2).then(|| delivery_spec(x, y, p, a, seed)),
    );
    let gripper = (0usize..4, any::<u64>()).prop_map(|(b, seed)| {
        let mut s = GenSpec::new(DomainTag::Gripper, seed);
        s.params.balls = Some(b);
        s
    });
    let spanner = (1usize..3, 1usize..4, 1usize..4, any::<u64>()).prop_map(|(n, extra, l, seed)| {
        let mut s = GenSpec::new(DomainTag::Spanner, seed);
        s.params.nuts = Some(n);
        s.params.spanners = Some(n + extra - 1);
        s.params.locations = Some(l);
        s
    });
    let miconic = (2usize..4, 1usize..3, any::<u64>()).prop_map(|(f, p, seed)| {
        let mut s = GenSpec::new(DomainTag::Miconic, seed);
        s.params.floors = Some(f);
        s.params.passengers = Some(p);
        s
    });
    let visitall = (1usize..4, 1usize..3, 0.0f64..=1.0, any::<u64>()).prop_map(|(x, y, f, seed)| {
        let mut s = GenSpec::new(DomainTag::Visitall, seed);
        s.params.x = Some(x);
        s.params.y = Some(y);
        s.params.visit_fraction = Some(f);
        s
    });
    prop_oneof![delivery, gripper, spanner, miconic, visitall]
}

fn task_of(spec: &GenSpec) -> GroundedTask {
    let (d, p) = generate(spec).unwrap();
    load_task(&d, &p).unwrap()
}

/// A random walk from the initial state, one step per entry of `choices`.
fn walk(task: &GroundedTask, choices: &[usize]) -> (State, Vec<u32>) {
    let mut s = task.init().clone();
    let mut acts = Vec::new();
    for &c in choices {
        let succ = successors(task, &s);
        if succ.is_empty() {
            break;
        }
        let (a, t) = succ[c % succ.len()].clone();
        acts.push(a);
        s = t;
    }
    (s, acts)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generation_is_a_function_of_the_spec(spec in small_spec()) {
        prop_assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
    }

    #[test]
    fn ground_actions_are_well_formed(spec in small_spec()) {
        let task = task_of(&spec);
        let n = task.num_atoms() as u32;
        for a in task.actions() {
            prop_assert!(a.del.iter().all(|d| !a.add.contains(d)));
            prop_assert!(a.pre.iter().chain(&a.add).chain(&a.del).all(|&x| x < n));
        }
        prop_assert!(task.init().atoms().iter().all(|&x| x < n));
    }

    #[test]
    fn successor_states_stay_sorted(spec in small_spec(), choices in prop::collection::vec(0usize..50, 0..15)) {
        let task = task_of(&spec);
        let (s, acts) = walk(&task, &choices);
        prop_assert!(s.atoms().windows(2).all(|w| w[0] < w[1]));
        let mut replay = task.init().clone();
        for a in &acts {
            replay = apply(&task, &replay, *a).unwrap();
        }
        prop_assert_eq!(&replay, &s);
        let plan = Plan::new(acts);
        prop_assert_eq!(Plan::parse(&task, &plan.to_pddl(&task)).unwrap(), plan);
    }

    #[test]
    fn closure_respects_novelty_bound(spec in small_spec(), choices in prop::collection::vec(0usize..50, 0..6), k in 1usize..3) {
        let task = task_of(&spec);
        let (s, _) = walk(&task, &choices);
        let k = Width::new(k).unwrap();
        let res = nk_successors(&task, &s, k);
        prop_assert!(res.closure_len() <= novelty_bound(task.num_atoms(), k, res.depth_one_count()));
        for &id in res.closure_ids() {
            let mut t = s.clone();
            for a in res.path(id) {
                t = apply(&task, &t, a).unwrap();
            }
            prop_assert_eq!(&t, &res.node(id).state);
            prop_assert_eq!(res.path(id).len(), res.node(id).depth);
            prop_assert!(t != s);
        }
    }

    #[test]
    fn unsatisfied_goal_atoms_mirror_goals(spec in small_spec(), choices in prop::collection::vec(0usize..50, 0..10)) {
        let task = task_of(&spec);
        let ext = add_unsatisfied_goal_predicates(&task);
        let (s, _) = walk(&ext, &choices);
        for g in task.goal_atoms() {
            let p = ext.atom_id(g).unwrap();
            let name = format!("{}_ug", g.predicate);
            let ug = ext.atoms().iter().position(|a| a.predicate == name && a.args == g.args).unwrap() as u32;
            prop_assert_ne!(s.contains(p), s.contains(ug));
        }
    }

    #[test]
    fn softmax_is_a_distribution(logits in prop::collection::vec(-1e3f64..1e3, 1..20)) {
        let p = softmax(&logits);
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!(p.iter().all(|&x| (0.0..=1.0).contains(&x)));
    }

    #[test]
    fn log_softmax_gradient_sums_to_zero(logits in prop::collection::vec(-20f64..20.0, 1..20), j in 0usize..20) {
        let j = j % logits.len();
        let g = log_softmax_gradient(&logits, j);
        prop_assert!(g.iter().sum::<f64>().abs() < 1e-9);
        prop_assert!(g[j] >= 0.0);
    }
}
