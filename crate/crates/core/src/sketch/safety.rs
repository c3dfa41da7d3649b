use serde::Serialize;

use super::{Ruleset, SketchError};
use crate::pddl::GroundedTask;
use crate::statespace::{State, StateGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Cycle,
    DeadEnd,
}

/// A subgoal chain witnessing unsafety or cyclicity. For cycles the first
/// state is repeated at the end.
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub witness: Vec<State>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SafetyReport {
    pub reachable_states: usize,
    pub alive_states: usize,
    /// Edges of the closest-subgoal graph G*_R over alive states.
    pub edges: usize,
    /// Alive states for which G_R(s) is empty.
    pub stuck_states: usize,
    pub violation: Option<Violation>,
}

impl SafetyReport {
    pub fn is_safe_and_acyclic(&self) -> bool {
        self.violation.is_none()
    }
}

/// Exhaustive check over the reachable state space: from every alive state
/// follow the G*_R edges (closest states whose pair with it satisfies a
/// rule) and look for edges into dead ends and for cycles.
pub fn check_safe_acyclic(ruleset: &Ruleset, task: &GroundedTask, cap: usize) -> Result<SafetyReport, SketchError> {
    let bound = ruleset.bind(task)?;
    let graph = StateGraph::explore(task, cap)?;
    let n = graph.len();
    let values: Vec<Vec<u32>> = graph.states().iter().map(|s| bound.eval(s)).collect();

    let mut stamp = vec![usize::MAX; n];
    let mut edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut alive = 0;
    let mut stuck = 0;
    let mut edge_count = 0;
    for i in graph.alive() {
        alive += 1;
        stamp[i] = i;
        let mut frontier = vec![i];
        let mut closest = Vec::new();
        while !frontier.is_empty() {
            closest.extend(
                frontier
                    .iter()
                    .copied()
                    .filter(|&j| bound.pair_satisfies_values(&values[i], &values[j]).is_some()),
            );
            if !closest.is_empty() {
                break;
            }
            let mut next = Vec::new();
            for &j in &frontier {
                for &(_, t) in graph.successors(j) {
                    if stamp[t] != i {
                        stamp[t] = i;
                        next.push(t);
                    }
                }
            }
            frontier = next;
        }
        if closest.is_empty() {
            stuck += 1;
        }
        for &j in &closest {
            if graph.is_dead_end(j) {
                return Ok(SafetyReport {
                    reachable_states: n,
                    alive_states: alive,
                    edges: edge_count,
                    stuck_states: stuck,
                    violation: Some(Violation {
                        kind: ViolationKind::DeadEnd,
                        witness: vec![graph.state(i).clone(), graph.state(j).clone()],
                    }),
                });
            }
        }
        edge_count += closest.len();
        edges[i] = closest;
    }

    let violation = find_cycle(&edges).map(|cycle| Violation {
        kind: ViolationKind::Cycle,
        witness: cycle.into_iter().map(|i| graph.state(i).clone()).collect(),
    });
    Ok(SafetyReport {
        reachable_states: n,
        alive_states: alive,
        edges: edge_count,
        stuck_states: stuck,
        violation,
    })
}

/// Iterative three-colour DFS; returns a cycle as a closed node sequence.
fn find_cycle(edges: &[Vec<usize>]) -> Option<Vec<usize>> {
    const WHITE: u8 = 0;
    const GREY: u8 = 1;
    const BLACK: u8 = 2;
    let mut colour = vec![WHITE; edges.len()];
    for root in 0..edges.len() {
        if colour[root] != WHITE || edges[root].is_empty() {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        colour[root] = GREY;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if let Some(&w) = edges[v].get(*next) {
                *next += 1;
                match colour[w] {
                    WHITE => {
                        colour[w] = GREY;
                        stack.push((w, 0));
                    }
                    GREY => {
                        let start = stack.iter().position(|&(u, _)| u == w).expect("grey nodes are on the stack");
                        let mut cycle: Vec<usize> = stack[start..].iter().map(|&(u, _)| u).collect();
                        cycle.push(w);
                        return Some(cycle);
                    }
                    _ => {}
                }
            } else {
                colour[v] = BLACK;
                stack.pop();
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::find_cycle;

    #[test]
    fn finds_two_cycle_and_ignores_dag() {
        assert_eq!(find_cycle(&[vec![1], vec![2], vec![]]), None);
        assert_eq!(find_cycle(&[vec![1], vec![0]]), Some(vec![0, 1, 0]));
        assert_eq!(find_cycle(&[vec![0]]), Some(vec![0, 0]));
    }
}
