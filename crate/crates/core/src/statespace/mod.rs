//! Transition semantics, plan validation, and exhaustive oracles for small tasks.

mod graph;
mod state;

use std::collections::VecDeque;

use rustc_hash::FxHashSet;
use thiserror::Error;

use crate::pddl::{ActionId, GroundedTask};

pub use graph::StateGraph;
pub use state::State;

/// Default explored-state cap for the exhaustive oracles.
pub const DEFAULT_STATE_CAP: usize = 5_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StateSpaceError {
    #[error("action `{action}` is not applicable")]
    Inapplicable { action: String },
    #[error("breadth-first oracle exceeded the cap of {cap} explored states")]
    MemoryCap { cap: usize },
    #[error("state space exceeds the cap of {cap} states")]
    StateSpaceTooLarge { cap: usize },
    #[error("plan line {line}: unknown action `{text}`")]
    UnknownAction { line: usize, text: String },
}

/// A sequence of ground-action indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Plan {
    pub actions: Vec<ActionId>,
}

impl Plan {
    pub fn new(actions: Vec<ActionId>) -> Self {
        Self { actions }
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    /// One `(name obj1 obj2)` line per action.
    pub fn to_pddl(&self, task: &GroundedTask) -> String {
        let mut out = String::new();
        for &a in &self.actions {
            out.push_str(&task.action(a).pddl_name());
            out.push('\n');
        }
        out
    }

    /// Parses a plan file; blank lines and `;` comments are skipped.
    pub fn parse(task: &GroundedTask, text: &str) -> Result<Plan, StateSpaceError> {
        let by_name: std::collections::HashMap<String, ActionId> = task
            .actions()
            .iter()
            .enumerate()
            .map(|(i, a)| (a.pddl_name(), i as ActionId))
            .collect();
        let mut actions = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split(';').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let normalized = line
                .trim_start_matches('(')
                .trim_end_matches(')')
                .split_whitespace()
                .map(str::to_lowercase)
                .collect::<Vec<_>>()
                .join(" ");
            let key = format!("({normalized})");
            let id = by_name.get(&key).ok_or_else(|| StateSpaceError::UnknownAction {
                line: lineno + 1,
                text: line.to_string(),
            })?;
            actions.push(*id);
        }
        Ok(Plan { actions })
    }
}

/// Why a plan failed validation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanFailure {
    #[error("step {step}: action `{action}` is not applicable")]
    Inapplicable { step: usize, action: String },
    #[error("plan ends in a non-goal state")]
    GoalNotReached,
}

impl PlanFailure {
    /// Index of the offending step, if the failure is tied to one.
    pub fn step(&self) -> Option<usize> {
        match self {
            PlanFailure::Inapplicable { step, .. } => Some(*step),
            PlanFailure::GoalNotReached => None,
        }
    }
}

/// Actions whose preconditions hold in `s`, in grounding order.
pub fn applicable(task: &GroundedTask, s: &State) -> Vec<ActionId> {
    let (triggers, unconditional) = task.triggers();
    let mut out: Vec<ActionId> = unconditional.to_vec();
    for &atom in s.atoms() {
        for &act in &triggers[atom as usize] {
            if s.contains_all(&task.action(act).pre) {
                out.push(act);
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn is_applicable(task: &GroundedTask, s: &State, a: ActionId) -> bool {
    s.contains_all(&task.action(a).pre)
}

/// `(s \ del(a)) ∪ add(a)` without the precondition check.
pub(crate) fn apply_unchecked(task: &GroundedTask, s: &State, a: ActionId) -> State {
    let act = task.action(a);
    let mut out = Vec::with_capacity(s.len() + act.add.len());
    let mut add = act.add.iter().copied().peekable();
    for &x in s.atoms() {
        if act.del.binary_search(&x).is_ok() {
            continue;
        }
        while let Some(y) = add.next_if(|&y| y <= x) {
            if y < x {
                out.push(y);
            }
        }
        out.push(x);
    }
    out.extend(add);
    State::from_sorted(out)
}

pub fn apply(task: &GroundedTask, s: &State, a: ActionId) -> Result<State, StateSpaceError> {
    if !is_applicable(task, s, a) {
        return Err(StateSpaceError::Inapplicable {
            action: task.action(a).display_name(),
        });
    }
    Ok(apply_unchecked(task, s, a))
}

pub fn is_goal(task: &GroundedTask, s: &State) -> bool {
    s.contains_all(task.goal())
}

/// One `(action, successor)` pair per applicable action; equal successors
/// reached by distinct actions are kept.
pub fn successors(task: &GroundedTask, s: &State) -> Vec<(ActionId, State)> {
    applicable(task, s)
        .into_iter()
        .map(|a| (a, apply_unchecked(task, s, a)))
        .collect()
}

/// Length of a shortest plan from `s`, or `None` when no goal lies within
/// `horizon` steps (unbounded when `horizon` is `None`).
pub fn bfs_optimal(
    task: &GroundedTask,
    s: &State,
    horizon: Option<usize>,
    state_cap: usize,
) -> Result<Option<usize>, StateSpaceError> {
    if is_goal(task, s) {
        return Ok(Some(0));
    }
    let mut seen: FxHashSet<State> = FxHashSet::default();
    seen.insert(s.clone());
    let mut queue = VecDeque::from([(s.clone(), 0usize)]);
    while let Some((cur, depth)) = queue.pop_front() {
        if horizon.is_some_and(|h| depth >= h) {
            continue;
        }
        for a in applicable(task, &cur) {
            let next = apply_unchecked(task, &cur, a);
            if seen.contains(&next) {
                continue;
            }
            if is_goal(task, &next) {
                return Ok(Some(depth + 1));
            }
            if seen.len() >= state_cap {
                return Err(StateSpaceError::MemoryCap { cap: state_cap });
            }
            seen.insert(next.clone());
            queue.push_back((next, depth + 1));
        }
    }
    Ok(None)
}

/// Reachable, solvable, non-goal states, in discovery order.
pub fn enumerate_alive(task: &GroundedTask, cap: usize) -> Result<Vec<State>, StateSpaceError> {
    let graph = StateGraph::explore(task, cap)?;
    Ok(graph.alive().map(|i| graph.state(i).clone()).collect())
}

/// Executes `plan` from `s0` and checks that it ends in a goal state.
pub fn validate(task: &GroundedTask, s0: &State, plan: &Plan) -> Result<State, PlanFailure> {
    let mut s = s0.clone();
    for (step, &a) in plan.actions.iter().enumerate() {
        if !is_applicable(task, &s, a) {
            return Err(PlanFailure::Inapplicable {
                step,
                action: task.action(a).display_name(),
            });
        }
        s = apply_unchecked(task, &s, a);
    }
    if is_goal(task, &s) {
        Ok(s)
    } else {
        Err(PlanFailure::GoalNotReached)
    }
}
