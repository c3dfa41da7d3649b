//! Subgoal policies π(s'|s) over candidate sets such as N_k(s): uniform,
//! sketch-backed and tabular, together with greedy and stochastic
//! subgoal selection.

mod tabular;
mod train;

use std::sync::{Arc, Mutex};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::{FxHashMap, FxHashSet};
use thiserror::Error;

use crate::pddl::GroundedTask;
use crate::sketch::{BoundRuleset, Ruleset, SketchError};
use crate::statespace::{State, StateSpaceError};

pub use tabular::{TabularPolicy, TaskTable, POLICY_FORMAT_VERSION};
pub use train::{
    log_softmax_gradient, train_actor_critic, train_actor_critic_with, Optimizer, PolicyConfig, Prior, TrainHooks,
    TrainStats,
};

/// Largest logit magnitude kept by training.
pub const LOGIT_CLIP: f64 = 30.0;

#[derive(Debug, Error)]
pub enum PolicyError {
    #[error("candidate set is empty")]
    EmptyCandidateSet,
    #[error("every candidate is excluded")]
    AllCandidatesExcluded,
    #[error("no candidate satisfies a sketch rule")]
    NoSubgoalInCandidates,
    #[error("no alive states to train on")]
    NoAliveStates,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Sketch(#[from] SketchError),
    #[error(transparent)]
    StateSpace(#[from] StateSpaceError),
    #[error("policy file: {0}")]
    Io(#[from] std::io::Error),
    #[error("policy file: {0}")]
    Format(#[from] serde_json::Error),
}

/// A candidate subgoal with its breadth-first distance from the current state.
#[derive(Debug, Clone, Copy)]
pub struct Candidate<'a> {
    pub state: &'a State,
    pub distance: usize,
}

pub trait SubgoalPolicy: Send + Sync {
    fn name(&self) -> String;

    /// Probabilities aligned with `candidates`, summing to one.
    fn distribution(
        &self,
        task: &GroundedTask,
        s: &State,
        candidates: &[Candidate<'_>],
    ) -> Result<Vec<f64>, PolicyError>;
}

/// Numerically stable softmax.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&l| (l - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

#[derive(Debug, Clone, Copy, Default)]
pub struct UniformPolicy;

impl SubgoalPolicy for UniformPolicy {
    fn name(&self) -> String {
        "uniform".into()
    }

    fn distribution(&self, _: &GroundedTask, _: &State, candidates: &[Candidate<'_>]) -> Result<Vec<f64>, PolicyError> {
        if candidates.is_empty() {
            return Err(PolicyError::EmptyCandidateSet);
        }
        Ok(vec![1.0 / candidates.len() as f64; candidates.len()])
    }
}

/// Uniform over the closest candidates whose pair with the current state
/// satisfies a rule of the ruleset, zero elsewhere.
pub struct SketchPolicy {
    ruleset: Ruleset,
    bound: Mutex<FxHashMap<String, Arc<BoundRuleset>>>,
}

pub fn sketch_policy(ruleset: Ruleset) -> SketchPolicy {
    SketchPolicy {
        ruleset,
        bound: Mutex::new(FxHashMap::default()),
    }
}

impl SketchPolicy {
    pub fn ruleset(&self) -> &Ruleset {
        &self.ruleset
    }

    fn bound(&self, task: &GroundedTask) -> Result<Arc<BoundRuleset>, PolicyError> {
        let mut cache = self.bound.lock().expect("sketch cache poisoned");
        if let Some(b) = cache.get(task.fingerprint()) {
            return Ok(b.clone());
        }
        let b = Arc::new(self.ruleset.bind(task)?);
        cache.insert(task.fingerprint().to_string(), b.clone());
        Ok(b)
    }
}

impl SubgoalPolicy for SketchPolicy {
    fn name(&self) -> String {
        format!("sketch:{}", self.ruleset.name)
    }

    fn distribution(
        &self,
        task: &GroundedTask,
        s: &State,
        candidates: &[Candidate<'_>],
    ) -> Result<Vec<f64>, PolicyError> {
        if candidates.is_empty() {
            return Err(PolicyError::EmptyCandidateSet);
        }
        let bound = self.bound(task)?;
        let before = bound.eval(s);
        let ok: Vec<bool> = candidates
            .iter()
            .map(|c| bound.pair_satisfies_values(&before, &bound.eval(c.state)).is_some())
            .collect();
        let closest = candidates
            .iter()
            .zip(&ok)
            .filter(|(_, &ok)| ok)
            .map(|(c, _)| c.distance)
            .min()
            .ok_or(PolicyError::NoSubgoalInCandidates)?;
        let chosen: Vec<bool> = candidates
            .iter()
            .zip(&ok)
            .map(|(c, &ok)| ok && c.distance == closest)
            .collect();
        let n = chosen.iter().filter(|&&c| c).count() as f64;
        Ok(chosen.into_iter().map(|c| if c { 1.0 / n } else { 0.0 }).collect())
    }
}

fn allowed<'a>(candidates: &[Candidate<'a>], exclusions: &FxHashSet<State>) -> Result<Vec<usize>, PolicyError> {
    if candidates.is_empty() {
        return Err(PolicyError::EmptyCandidateSet);
    }
    let keep: Vec<usize> = (0..candidates.len())
        .filter(|&i| !exclusions.contains(candidates[i].state))
        .collect();
    if keep.is_empty() {
        return Err(PolicyError::AllCandidatesExcluded);
    }
    Ok(keep)
}

/// Index of the most probable candidate outside `exclusions`; exact ties are
/// broken uniformly at random.
pub fn select_greedy(
    pol: &dyn SubgoalPolicy,
    task: &GroundedTask,
    s: &State,
    candidates: &[Candidate<'_>],
    exclusions: &FxHashSet<State>,
    rng: &mut ChaCha8Rng,
) -> Result<usize, PolicyError> {
    let keep = allowed(candidates, exclusions)?;
    let sub: Vec<Candidate<'_>> = keep.iter().map(|&i| candidates[i]).collect();
    let probs = pol.distribution(task, s, &sub)?;
    let best = probs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ties: Vec<usize> = (0..probs.len()).filter(|&i| probs[i] >= best - 1e-12).collect();
    let pick = if ties.len() == 1 {
        ties[0]
    } else {
        ties[rng.gen_range(0..ties.len())]
    };
    Ok(keep[pick])
}

/// Index of a candidate sampled from the policy renormalized over the
/// candidates outside `exclusions`.
pub fn select_stochastic(
    pol: &dyn SubgoalPolicy,
    task: &GroundedTask,
    s: &State,
    candidates: &[Candidate<'_>],
    exclusions: &FxHashSet<State>,
    rng: &mut ChaCha8Rng,
) -> Result<usize, PolicyError> {
    let keep = allowed(candidates, exclusions)?;
    let sub: Vec<Candidate<'_>> = keep.iter().map(|&i| candidates[i]).collect();
    let probs = pol.distribution(task, s, &sub)?;
    Ok(keep[sample_index(&probs, rng)])
}

pub(crate) fn sample_index(probs: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let total: f64 = probs.iter().sum();
    let mut u = rng.gen::<f64>() * total;
    for (i, &p) in probs.iter().enumerate() {
        if u < p {
            return i;
        }
        u -= p;
    }
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(probs.len() - 1)
}
