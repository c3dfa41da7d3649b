//! SIW^π(k): a greedy sequence of complete IW(k) searches, each ending in
//! the subgoal state chosen by a policy over N_k(s).

use std::fmt::Write as _;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::pddl::{ActionId, GroundedTask};
use crate::policy::{select_greedy, select_stochastic, Candidate, SubgoalPolicy};
use crate::statespace::{is_goal, Plan, State};
use crate::width::{nk_successors, Width};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Selection {
    Greedy,
    Stochastic,
}

impl FromStr for Selection {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "greedy" => Ok(Selection::Greedy),
            "stochastic" => Ok(Selection::Stochastic),
            other => Err(format!("unknown selection `{other}` (expected greedy or stochastic)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExecOptions {
    pub k: Width,
    pub cycle_prevention: bool,
    /// Maximum number of IW(k) calls; `None` means 4·(|goal| + 1).
    pub max_calls: Option<usize>,
    pub selection: Selection,
    pub seed: u64,
}

impl Default for ExecOptions {
    fn default() -> Self {
        ExecOptions {
            k: Width::ONE,
            cycle_prevention: false,
            max_calls: None,
            selection: Selection::Greedy,
            seed: 0,
        }
    }
}

impl ExecOptions {
    pub fn max_calls_for(&self, task: &GroundedTask) -> usize {
        self.max_calls.unwrap_or(4 * (task.goal().len() + 1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureReason {
    MaxCalls,
    NoCandidates,
    PolicyFailure,
}

impl FailureReason {
    pub fn as_str(self) -> &'static str {
        match self {
            FailureReason::MaxCalls => "max-calls",
            FailureReason::NoCandidates => "no-candidates",
            FailureReason::PolicyFailure => "policy-failure",
        }
    }
}

/// One IW(k) call: the chosen subgoal and the path reaching it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub subgoal: State,
    pub actions: Vec<ActionId>,
    /// Size of N_k at the segment start.
    pub closure_size: usize,
    /// Depth-one members of that closure.
    pub depth_one: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub start: State,
    pub segments: Vec<Segment>,
    pub solved: bool,
    pub failure: Option<FailureReason>,
    pub failure_detail: Option<String>,
}

impl Trace {
    pub fn primitive_length(&self) -> usize {
        self.segments.iter().map(|s| s.actions.len()).sum()
    }

    pub fn subgoal_count(&self) -> usize {
        self.segments.len()
    }

    pub fn end_state(&self) -> &State {
        self.segments.last().map_or(&self.start, |s| &s.subgoal)
    }

    /// Machine-readable form with action names.
    pub fn to_json(&self, task: &GroundedTask) -> serde_json::Value {
        serde_json::json!({
            "solved": self.solved,
            "failure": self.failure.map(FailureReason::as_str),
            "failure_detail": self.failure_detail,
            "primitive_length": self.primitive_length(),
            "subgoal_count": self.subgoal_count(),
            "segments": self.segments.iter().map(|s| serde_json::json!({
                "actions": s.actions.iter().map(|&a| task.action(a).display_name()).collect::<Vec<_>>(),
                "subgoal": s.subgoal.atoms(),
                "closure_size": s.closure_size,
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn siw_pi(task: &GroundedTask, pol: &dyn SubgoalPolicy, opts: &ExecOptions) -> Trace {
    siw_pi_from(task, task.init(), pol, opts)
}

/// Runs SIW^π(k) from `start`. Failures are reported in the trace.
pub fn siw_pi_from(task: &GroundedTask, start: &State, pol: &dyn SubgoalPolicy, opts: &ExecOptions) -> Trace {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let max_calls = opts.max_calls_for(task);
    let mut trace = Trace {
        start: start.clone(),
        segments: Vec::new(),
        solved: false,
        failure: None,
        failure_detail: None,
    };
    let mut selected: FxHashSet<State> = FxHashSet::default();
    let mut s = start.clone();
    loop {
        if is_goal(task, &s) {
            trace.solved = true;
            return trace;
        }
        if trace.segments.len() >= max_calls {
            trace.failure = Some(FailureReason::MaxCalls);
            return trace;
        }
        let res = nk_successors(task, &s, opts.k);
        let candidates: Vec<Candidate<'_>> = res
            .closure_ids()
            .iter()
            .map(|&id| {
                let n = res.node(id);
                Candidate {
                    state: &n.state,
                    distance: n.depth,
                }
            })
            .collect();
        if candidates.is_empty() {
            trace.failure = Some(FailureReason::NoCandidates);
            return trace;
        }
        let pick = match opts.selection {
            Selection::Greedy => select_greedy(pol, task, &s, &candidates, &selected, &mut rng),
            Selection::Stochastic => select_stochastic(pol, task, &s, &candidates, &selected, &mut rng),
        };
        let idx = match pick {
            Ok(i) => i,
            Err(e) => {
                trace.failure = Some(match e {
                    crate::policy::PolicyError::AllCandidatesExcluded => FailureReason::NoCandidates,
                    _ => FailureReason::PolicyFailure,
                });
                trace.failure_detail = Some(e.to_string());
                return trace;
            }
        };
        let id = res.closure_ids()[idx];
        let next = res.node(id).state.clone();
        trace.segments.push(Segment {
            subgoal: next.clone(),
            actions: res.path(id),
            closure_size: res.closure_len(),
            depth_one: res.depth_one_count(),
        });
        if opts.cycle_prevention {
            selected.insert(next.clone());
        }
        s = next;
    }
}

/// Concatenation of the segment paths.
pub fn flatten(trace: &Trace) -> Plan {
    Plan::new(trace.segments.iter().flat_map(|s| s.actions.iter().copied()).collect())
}

/// Text rendering: `Primitive plan: L`, `Plan: SL`, then one numbered line
/// per subgoal with its actions joined by ` -> `.
pub fn emit_trace(trace: &Trace, task: &GroundedTask) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Primitive plan: {}", trace.primitive_length());
    let _ = writeln!(out, "Plan: {}", trace.subgoal_count());
    let width = trace.segments.len().to_string().len();
    for (i, seg) in trace.segments.iter().enumerate() {
        let actions: Vec<String> = seg.actions.iter().map(|&a| task.action(a).display_name()).collect();
        let _ = writeln!(out, "{:<width$} {}", i + 1, actions.join(" -> "));
    }
    if !trace.solved {
        let reason = trace.failure.map_or("unknown", FailureReason::as_str);
        let _ = writeln!(out, "Unsolved: {reason}");
    }
    out
}
