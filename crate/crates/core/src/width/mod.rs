//! Novelty-based search: IW(k), the IW(k)-reachable successor set N_k(s),
//! and classic SIW.

mod novelty;

use std::collections::VecDeque;
use std::fmt;

use log::debug;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pddl::{ActionId, GroundedTask};
use crate::statespace::{applicable, apply_unchecked, Plan, State};

pub use novelty::NoveltyTable;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("width must be 0, 1 or 2, got {0}")]
pub struct InvalidWidth(pub usize);

/// Width bound `k` of an IW search; only 0, 1 and 2 are supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Width(u8);

impl Width {
    pub const ZERO: Width = Width(0);
    pub const ONE: Width = Width(1);
    pub const TWO: Width = Width(2);

    pub fn new(k: usize) -> Result<Self, InvalidWidth> {
        match k {
            0..=2 => Ok(Width(k as u8)),
            _ => Err(InvalidWidth(k)),
        }
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }
}

impl TryFrom<usize> for Width {
    type Error = InvalidWidth;
    fn try_from(k: usize) -> Result<Self, Self::Error> {
        Width::new(k)
    }
}

impl From<Width> for usize {
    fn from(w: Width) -> usize {
        w.get()
    }
}

impl fmt::Display for Width {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// What an IW run is looking for.
#[derive(Clone, Copy)]
pub enum SearchMode<'a> {
    /// Stop at the first generated state satisfying the predicate.
    FirstHit(&'a dyn Fn(&State) -> bool),
    /// Run to exhaustion and keep every generated, non-pruned state.
    Closure,
}

#[derive(Debug, Clone)]
pub struct IwNode {
    pub state: State,
    pub parent: Option<usize>,
    pub action: Option<ActionId>,
    pub depth: usize,
}

/// Outcome of one IW(k) run. Node 0 is the root.
#[derive(Debug, Clone)]
pub struct IwResult {
    nodes: Vec<IwNode>,
    closure: Vec<usize>,
    found: Option<usize>,
    pub expanded: usize,
    pub generated: usize,
    pub duplicates: usize,
    pub pruned: usize,
}

impl IwResult {
    pub fn root(&self) -> &State {
        &self.nodes[0].state
    }

    pub fn node(&self, id: usize) -> &IwNode {
        &self.nodes[id]
    }

    /// Action path from the root to node `id`.
    pub fn path(&self, id: usize) -> Vec<ActionId> {
        let mut path = Vec::with_capacity(self.nodes[id].depth);
        let mut cur = id;
        while let Some(parent) = self.nodes[cur].parent {
            path.push(self.nodes[cur].action.expect("non-root nodes carry an action"));
            cur = parent;
        }
        path.reverse();
        path
    }

    /// The state matching the stop condition and the path to it.
    pub fn found(&self) -> Option<(&State, Vec<ActionId>)> {
        self.found.map(|id| (&self.nodes[id].state, self.path(id)))
    }

    /// Node ids of N_k(root) in generation (breadth-first) order.
    pub fn closure_ids(&self) -> &[usize] {
        &self.closure
    }

    pub fn closure_len(&self) -> usize {
        self.closure.len()
    }

    /// `(state, path length)` for every member of the closure.
    pub fn closure_states(&self) -> impl Iterator<Item = (&State, usize)> + '_ {
        self.closure
            .iter()
            .map(move |&id| (&self.nodes[id].state, self.nodes[id].depth))
    }

    /// Children of the root that survived duplicate detection.
    pub fn depth_one_count(&self) -> usize {
        self.closure.iter().filter(|&&id| self.nodes[id].depth == 1).count()
    }
}

/// Breadth-first search pruning states that make no tuple of at most `k`
/// atoms true for the first time. Children of the root are never pruned;
/// with `k = 0` only the children of the root are generated. Actions are
/// tried in grounding order, which fixes the tie-breaking.
pub fn iw(task: &GroundedTask, root: &State, k: Width, mode: SearchMode<'_>) -> IwResult {
    let mut res = IwResult {
        nodes: vec![IwNode {
            state: root.clone(),
            parent: None,
            action: None,
            depth: 0,
        }],
        closure: Vec::new(),
        found: None,
        expanded: 0,
        generated: 0,
        duplicates: 0,
        pruned: 0,
    };
    let stop = match mode {
        SearchMode::FirstHit(f) => Some(f),
        SearchMode::Closure => None,
    };
    if stop.is_some_and(|f| f(root)) {
        res.found = Some(0);
        return res;
    }
    let mut seen: FxHashSet<State> = FxHashSet::default();
    seen.insert(root.clone());
    let mut table = (k.get() > 0).then(|| {
        let mut t = NoveltyTable::new(k.get(), task.num_atoms());
        t.check_and_record(root);
        t
    });
    let mut queue = VecDeque::from([0usize]);
    'search: while let Some(id) = queue.pop_front() {
        res.expanded += 1;
        let (parent_state, depth) = {
            let n = &res.nodes[id];
            (n.state.clone(), n.depth + 1)
        };
        for a in applicable(task, &parent_state) {
            let next = apply_unchecked(task, &parent_state, a);
            if seen.contains(&next) {
                res.duplicates += 1;
                continue;
            }
            seen.insert(next.clone());
            res.generated += 1;
            let novel = match table.as_mut() {
                Some(t) => t.check_and_record(&next),
                None => true,
            };
            let child = res.nodes.len();
            let hit = stop.is_some_and(|f| f(&next));
            res.nodes.push(IwNode {
                state: next,
                parent: Some(id),
                action: Some(a),
                depth,
            });
            if hit {
                res.found = Some(child);
                break 'search;
            }
            if depth > 1 && !novel {
                res.pruned += 1;
                continue;
            }
            res.closure.push(child);
            if k.get() > 0 {
                queue.push_back(child);
            }
        }
    }
    debug!(
        "iw({k}): expanded={} generated={} pruned={} closure={}",
        res.expanded,
        res.generated,
        res.pruned,
        res.closure.len()
    );
    res
}

/// N_k(s): every state generated and not pruned by a complete IW(k) run
/// from `s` (the root itself excluded), with its breadth-first path.
pub fn nk_successors(task: &GroundedTask, s: &State, k: Width) -> IwResult {
    iw(task, s, k, SearchMode::Closure)
}

/// Number of goal atoms false in `s`.
pub fn unachieved_goal_count(task: &GroundedTask, s: &State) -> usize {
    task.goal().iter().filter(|&&g| !s.contains(g)).count()
}

/// Classic SIW: a sequence of IW searches, each ending in the first state
/// with fewer unachieved goals, escalating from IW(1) up to IW(k_max).
pub fn siw_classic(task: &GroundedTask, k_max: Width) -> Option<Plan> {
    let k_max = k_max.get().max(1);
    let mut s = task.init().clone();
    let mut plan = Vec::new();
    loop {
        let remaining = unachieved_goal_count(task, &s);
        if remaining == 0 {
            return Some(Plan::new(plan));
        }
        let decreased = |x: &State| unachieved_goal_count(task, x) < remaining;
        let mut segment = None;
        for k in 1..=k_max {
            let res = iw(task, &s, Width(k as u8), SearchMode::FirstHit(&decreased));
            if let Some((state, path)) = res.found() {
                segment = Some((state.clone(), path));
                break;
            }
        }
        let (next, path) = segment?;
        plan.extend(path);
        s = next;
    }
}
