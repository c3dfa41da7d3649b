use std::collections::VecDeque;

use rustc_hash::FxHashMap;

use super::{applicable, apply_unchecked, is_goal, State, StateSpaceError};
use crate::pddl::{ActionId, GroundedTask};

/// Explicit reachable state graph with exact goal distances.
#[derive(Debug, Clone)]
pub struct StateGraph {
    states: Vec<State>,
    index: FxHashMap<State, usize>,
    succ: Vec<Vec<(ActionId, usize)>>,
    goal: Vec<bool>,
    goal_distance: Vec<Option<usize>>,
}

impl StateGraph {
    /// Breadth-first enumeration from the initial state.
    pub fn explore(task: &GroundedTask, cap: usize) -> Result<Self, StateSpaceError> {
        Self::explore_from(task, task.init(), cap)
    }

    pub fn explore_from(task: &GroundedTask, root: &State, cap: usize) -> Result<Self, StateSpaceError> {
        let mut g = StateGraph {
            states: vec![root.clone()],
            index: FxHashMap::default(),
            succ: Vec::new(),
            goal: Vec::new(),
            goal_distance: Vec::new(),
        };
        g.index.insert(root.clone(), 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let s = g.states[i].clone();
            let mut edges = Vec::new();
            for a in applicable(task, &s) {
                let next = apply_unchecked(task, &s, a);
                let j = match g.index.get(&next) {
                    Some(&j) => j,
                    None => {
                        if g.states.len() >= cap {
                            return Err(StateSpaceError::StateSpaceTooLarge { cap });
                        }
                        let j = g.states.len();
                        g.index.insert(next.clone(), j);
                        g.states.push(next);
                        queue.push_back(j);
                        j
                    }
                };
                edges.push((a, j));
            }
            if g.succ.len() <= i {
                g.succ.resize(i + 1, Vec::new());
            }
            g.succ[i] = edges;
        }
        g.succ.resize(g.states.len(), Vec::new());
        g.goal = g.states.iter().map(|s| is_goal(task, s)).collect();

        let mut pred: Vec<Vec<usize>> = vec![Vec::new(); g.states.len()];
        for (i, edges) in g.succ.iter().enumerate() {
            for &(_, j) in edges {
                pred[j].push(i);
            }
        }
        let mut dist = vec![None; g.states.len()];
        let mut queue = VecDeque::new();
        for (i, &is_g) in g.goal.iter().enumerate() {
            if is_g {
                dist[i] = Some(0);
                queue.push_back(i);
            }
        }
        while let Some(j) = queue.pop_front() {
            let d = dist[j].expect("queued states have a distance");
            for &i in &pred[j] {
                if dist[i].is_none() {
                    dist[i] = Some(d + 1);
                    queue.push_back(i);
                }
            }
        }
        g.goal_distance = dist;
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, i: usize) -> &State {
        &self.states[i]
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn index_of(&self, s: &State) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn successors(&self, i: usize) -> &[(ActionId, usize)] {
        &self.succ[i]
    }

    pub fn is_goal(&self, i: usize) -> bool {
        self.goal[i]
    }

    /// Optimal plan length from state `i`; `None` for dead ends.
    pub fn goal_distance(&self, i: usize) -> Option<usize> {
        self.goal_distance[i]
    }

    pub fn is_dead_end(&self, i: usize) -> bool {
        self.goal_distance[i].is_none()
    }

    pub fn is_alive(&self, i: usize) -> bool {
        !self.goal[i] && self.goal_distance[i].is_some()
    }

    pub fn alive(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.states.len()).filter(move |&i| self.is_alive(i))
    }
}
