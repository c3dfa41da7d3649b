#![allow(dead_code)]

use std::collections::VecDeque;

use rustc_hash::{FxHashMap, FxHashSet};
use widthdecomp::generators::{generate, DomainTag, GenSpec};
use widthdecomp::pddl::{load_task, GroundedTask};
use widthdecomp::statespace::{State, StateGraph};

pub fn fixture(name: &str) -> String {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn fixture_task(tag: DomainTag, name: &str) -> GroundedTask {
    load_task(tag.domain_pddl(), &fixture(name)).expect("fixture loads")
}

pub fn spec_task(spec: &GenSpec) -> GroundedTask {
    let (d, p) = generate(spec).expect("generator accepts spec");
    load_task(&d, &p).expect("generated instance grounds")
}

pub fn delivery(x: usize, y: usize, packages: usize, agents: usize, seed: u64) -> GroundedTask {
    spec_task(&delivery_spec(x, y, packages, agents, seed))
}

pub fn delivery_spec(x: usize, y: usize, packages: usize, agents: usize, seed: u64) -> GenSpec {
    let mut s = GenSpec::new(DomainTag::Delivery, seed);
    s.params.x = Some(x);
    s.params.y = Some(y);
    s.params.packages = Some(packages);
    s.params.agents = Some(agents);
    s
}

pub fn gripper(balls: usize) -> GroundedTask {
    let mut s = GenSpec::new(DomainTag::Gripper, 0);
    s.params.balls = Some(balls);
    spec_task(&s)
}

/// Hand-written Delivery 1×2 instance: package and truck on c0, target c1.
pub const DELIVERY_1X2: &str = "\
(define (problem delivery-1x2)
  (:domain delivery)
  (:objects c0 c1 - cell p1 - package t - truck)
  (:init (adjacent c0 c1) (adjacent c1 c0) (at p1 c0) (at t c0) (empty t))
  (:goal (at p1 c1)))
";

pub fn delivery_1x2() -> GroundedTask {
    load_task(DomainTag::Delivery.domain_pddl(), DELIVERY_1X2).unwrap()
}

pub fn atom(task: &GroundedTask, text: &str) -> u32 {
    let mut parts = text.split(['(', ')', ',', ' ']).filter(|t| !t.is_empty());
    let pred = parts.next().unwrap();
    let args: Vec<&str> = parts.collect();
    task.atom_id(&widthdecomp::pddl::GroundAtom::new(pred, args))
        .unwrap_or_else(|| panic!("no atom {text}"))
}

/// Breadth-first distances from `root` over the full reachable graph.
pub fn distances(graph: &StateGraph, root: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; graph.len()];
    dist[root] = Some(0);
    let mut queue = VecDeque::from([root]);
    while let Some(i) = queue.pop_front() {
        let d = dist[i].unwrap();
        for &(_, j) in graph.successors(i) {
            if dist[j].is_none() {
                dist[j] = Some(d + 1);
                queue.push_back(j);
            }
        }
    }
    dist
}

/// Decides whether reaching a state that contains every atom of `target`
/// from `root` has width at most `k`, by searching for an admissible chain
/// of atom tuples of size ≤ k. A tuple t is characterised by its optimal
/// distance d(t) and the set O(t) of end states of its optimal plans. A
/// chain step t → t' is admissible when d(t') = d(t) + 1 and every state
/// of O(t) has a successor in O(t'). The chain must start with a tuple true
/// in the root and end in a tuple whose optimal plans all reach the target
/// optimally.
pub fn width_at_most(graph: &StateGraph, root: usize, target: &[u32], k: usize) -> bool {
    let dist = distances(graph, root);
    let reach: Vec<usize> = (0..graph.len()).filter(|&i| dist[i].is_some()).collect();
    let holds_target = |i: usize| target.iter().all(|&a| graph.state(i).contains(a));
    let Some(goal_d) = reach.iter().filter(|&&i| holds_target(i)).map(|&i| dist[i].unwrap()).min() else {
        return false;
    };

    let mut tuples: FxHashMap<Vec<u32>, (usize, Vec<usize>)> = FxHashMap::default();
    for &i in &reach {
        let d = dist[i].unwrap();
        let atoms = graph.state(i).atoms();
        let mut add = |t: Vec<u32>| {
            let e = tuples.entry(t).or_insert((usize::MAX, Vec::new()));
            if d < e.0 {
                *e = (d, vec![i]);
            } else if d == e.0 {
                e.1.push(i);
            }
        };
        for (x, &a) in atoms.iter().enumerate() {
            add(vec![a]);
            if k >= 2 {
                for &b in &atoms[x + 1..] {
                    add(vec![a, b]);
                }
            }
        }
    }
    let mut by_depth: Vec<Vec<&Vec<u32>>> = vec![Vec::new(); goal_d + 1];
    for (t, (d, _)) in &tuples {
        if *d <= goal_d {
            by_depth[*d].push(t);
        }
    }
    // good[t]: an admissible chain from t reaches the target.
    let mut good: FxHashSet<&Vec<u32>> = FxHashSet::default();
    for d in (0..=goal_d).rev() {
        for t in &by_depth[d] {
            let ends = &tuples[*t].1;
            let ok = if d == goal_d {
                ends.iter().all(|&i| holds_target(i))
            } else {
                by_depth[d + 1].iter().any(|u| {
                    good.contains(*u) && {
                        let next: FxHashSet<usize> = tuples[*u].1.iter().copied().collect();
                        ends.iter()
                            .all(|&i| graph.successors(i).iter().any(|&(_, j)| next.contains(&j)))
                    }
                })
            };
            if ok {
                good.insert(t);
            }
        }
    }
    by_depth[0].iter().any(|t| good.contains(*t))
}

pub fn state_index(graph: &StateGraph, s: &State) -> usize {
    graph.index_of(s).expect("state in graph")
}
