//! Tabular actor-critic over N_k successor sets.

use log::{debug, info};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{sample_index, softmax, PolicyError, TabularPolicy, TaskTable, LOGIT_CLIP};
use crate::pddl::GroundedTask;
use crate::statespace::{StateGraph, DEFAULT_STATE_CAP};
use crate::width::{nk_successors, Width};

/// Distribution of training start states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Prior {
    /// Uniform over the alive states of a uniformly chosen task.
    UniformAlive,
    /// On-policy episodes from the initial state.
    InitOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Optimizer {
    Sgd,
    Adam,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyConfig {
    pub gamma: f64,
    pub alpha: f64,
    pub beta: f64,
    pub iterations: u64,
    pub seed: u64,
    pub k: Width,
    pub prior: Prior,
    pub optimizer: Optimizer,
    pub state_cap: usize,
}

impl Default for PolicyConfig {
    fn default() -> Self {
        PolicyConfig {
            gamma: 0.999,
            alpha: 2e-4,
            beta: 2e-4,
            iterations: 1_000_000,
            seed: 0,
            k: Width::ONE,
            prior: Prior::UniformAlive,
            optimizer: Optimizer::Sgd,
            state_cap: DEFAULT_STATE_CAP,
        }
    }
}

impl PolicyConfig {
    pub fn validate(&self) -> Result<(), PolicyError> {
        if !(self.alpha > 0.0 && self.beta > 0.0) {
            return Err(PolicyError::InvalidConfig("alpha and beta must be positive".into()));
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(PolicyError::InvalidConfig("gamma must lie in (0, 1]".into()));
        }
        Ok(())
    }
}

/// Gradient of log softmax(θ)[chosen] with respect to θ.
pub fn log_softmax_gradient(logits: &[f64], chosen: usize) -> Vec<f64> {
    softmax(logits)
        .into_iter()
        .enumerate()
        .map(|(i, p)| if i == chosen { 1.0 - p } else { -p })
        .collect()
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct TrainStats {
    pub iterations: u64,
    pub stopped_early: bool,
    pub skipped: u64,
    pub states_expanded: usize,
    pub alive_states: usize,
}

/// Called with the iteration count and the current policy.
pub type EvalHook<'a> = Box<dyn FnMut(u64, &TabularPolicy) -> bool + 'a>;

/// Periodic evaluation callback; returning `true` stops training.
#[derive(Default)]
pub struct TrainHooks<'a> {
    pub eval_every: u64,
    pub on_eval: Option<EvalHook<'a>>,
}

struct Adam {
    m: f64,
    v: f64,
}

const ADAM_B1: f64 = 0.9;
const ADAM_B2: f64 = 0.999;
const ADAM_EPS: f64 = 1e-8;

impl Adam {
    fn new() -> Self {
        Adam { m: 0.0, v: 0.0 }
    }

    /// Step for a parameter descending `grad` at global step `t`.
    fn step(&mut self, grad: f64, lr: f64, t: u64) -> f64 {
        self.m = ADAM_B1 * self.m + (1.0 - ADAM_B1) * grad;
        self.v = ADAM_B2 * self.v + (1.0 - ADAM_B2) * grad * grad;
        let mh = self.m / (1.0 - ADAM_B1.powi(t.min(i32::MAX as u64) as i32));
        let vh = self.v / (1.0 - ADAM_B2.powi(t.min(i32::MAX as u64) as i32));
        -lr * mh / (vh.sqrt() + ADAM_EPS)
    }
}

struct TaskData<'t> {
    task: &'t GroundedTask,
    graph: StateGraph,
    alive: Vec<usize>,
    nk: Vec<Option<Vec<usize>>>,
    theta: Vec<Vec<f64>>,
    value: Vec<f64>,
    theta_opt: Vec<Vec<Adam>>,
    value_opt: Vec<Adam>,
    dead_end_value: f64,
}

impl TaskData<'_> {
    fn ensure_nk(&mut self, i: usize, k: Width, adam: bool) -> &[usize] {
        if self.nk[i].is_none() {
            let res = nk_successors(self.task, self.graph.state(i), k);
            let ids: Vec<usize> = res
                .closure_states()
                .map(|(s, _)| self.graph.index_of(s).expect("closure states are reachable"))
                .collect();
            self.theta[i] = vec![0.0; ids.len()];
            if adam {
                self.theta_opt[i] = ids.iter().map(|_| Adam::new()).collect();
            }
            self.nk[i] = Some(ids);
        }
        self.nk[i].as_deref().expect("just filled")
    }

    fn next_value(&self, j: usize) -> f64 {
        if self.graph.is_goal(j) {
            self.value[j]
        } else if self.graph.is_dead_end(j) {
            self.dead_end_value
        } else {
            self.value[j]
        }
    }
}

pub fn train_actor_critic(tasks: &[GroundedTask], cfg: &PolicyConfig) -> Result<TabularPolicy, PolicyError> {
    Ok(train_actor_critic_with(tasks, cfg, TrainHooks::default())?.0)
}

/// Algorithm: sample a task and a non-goal state S, sample S' from π(·|S)
/// over N_k(S), then with δ = 1 + γV(S') − V(S) update the critic by
/// V(S) += βδ and the actor by θ −= αδ∇log π(S'|S). Goal states decay
/// towards zero through V(S') −= βV(S'); dead ends keep the fixed value
/// 1/(1−γ).
pub fn train_actor_critic_with(
    tasks: &[GroundedTask],
    cfg: &PolicyConfig,
    mut hooks: TrainHooks<'_>,
) -> Result<(TabularPolicy, TrainStats), PolicyError> {
    cfg.validate()?;
    let adam = cfg.optimizer == Optimizer::Adam;
    let mut data = Vec::with_capacity(tasks.len());
    for task in tasks {
        let graph = StateGraph::explore(task, cfg.state_cap)?;
        let alive: Vec<usize> = graph.alive().collect();
        let n = graph.len();
        let dead_end_value = if cfg.gamma < 1.0 {
            1.0 / (1.0 - cfg.gamma)
        } else {
            n as f64
        };
        data.push(TaskData {
            task,
            alive,
            nk: vec![None; n],
            theta: vec![Vec::new(); n],
            value: vec![0.0; n],
            theta_opt: (0..n).map(|_| Vec::new()).collect(),
            value_opt: if adam { (0..n).map(|_| Adam::new()).collect() } else { Vec::new() },
            dead_end_value,
            graph,
        });
    }
    let trainable: Vec<usize> = (0..data.len()).filter(|&i| !data[i].alive.is_empty()).collect();
    let mut stats = TrainStats {
        alive_states: data.iter().map(|d| d.alive.len()).sum(),
        ..TrainStats::default()
    };
    if trainable.is_empty() {
        if cfg.iterations == 0 {
            return Ok((snapshot(&data, cfg), stats));
        }
        return Err(PolicyError::NoAliveStates);
    }
    info!(
        "training on {} tasks, {} alive states, k={}",
        data.len(),
        stats.alive_states,
        cfg.k
    );

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut episode: Option<(usize, usize, usize)> = None;
    let episode_limit = 4 * stats.alive_states.max(1);
    for it in 1..=cfg.iterations {
        let (ti, si) = match cfg.prior {
            Prior::UniformAlive => {
                let ti = trainable[rng.gen_range(0..trainable.len())];
                let d = &data[ti];
                (ti, d.alive[rng.gen_range(0..d.alive.len())])
            }
            Prior::InitOnly => match episode {
                Some((ti, si, _)) => (ti, si),
                None => {
                    let ti = trainable[rng.gen_range(0..trainable.len())];
                    (ti, 0)
                }
            },
        };
        let d = &mut data[ti];
        let cands = d.ensure_nk(si, cfg.k, adam).to_vec();
        if cands.is_empty() || !d.graph.is_alive(si) {
            stats.skipped += 1;
            episode = None;
            continue;
        }
        let probs = softmax(&d.theta[si]);
        let j = sample_index(&probs, &mut rng);
        let next = cands[j];
        let delta = 1.0 + cfg.gamma * d.next_value(next) - d.value[si];

        if adam {
            let step = d.value_opt[si].step(-delta, cfg.beta, it);
            d.value[si] += step;
            for (x, p) in probs.iter().enumerate() {
                let grad = delta * if x == j { 1.0 - p } else { -p };
                let step = d.theta_opt[si][x].step(grad, cfg.alpha, it);
                d.theta[si][x] = (d.theta[si][x] + step).clamp(-LOGIT_CLIP, LOGIT_CLIP);
            }
            if d.graph.is_goal(next) {
                let v = d.value[next];
                let step = d.value_opt[next].step(v, cfg.beta, it);
                d.value[next] += step;
            }
        } else {
            d.value[si] += cfg.beta * delta;
            for (x, p) in probs.iter().enumerate() {
                let grad = if x == j { 1.0 - p } else { -p };
                d.theta[si][x] = (d.theta[si][x] - cfg.alpha * delta * grad).clamp(-LOGIT_CLIP, LOGIT_CLIP);
            }
            if d.graph.is_goal(next) {
                d.value[next] -= cfg.beta * d.value[next];
            }
        }

        if cfg.prior == Prior::InitOnly {
            let steps = episode.map_or(0, |e| e.2) + 1;
            episode = if d.graph.is_alive(next) && steps < episode_limit {
                Some((ti, next, steps))
            } else {
                None
            };
        }
        stats.iterations = it;
        if hooks.eval_every > 0 && it % hooks.eval_every == 0 {
            if let Some(cb) = hooks.on_eval.as_mut() {
                let pol = snapshot(&data, cfg);
                if cb(it, &pol) {
                    debug!("early stop after {it} iterations");
                    stats.stopped_early = true;
                    break;
                }
            }
        }
    }
    stats.states_expanded = data.iter().map(|d| d.nk.iter().filter(|n| n.is_some()).count()).sum();
    Ok((snapshot(&data, cfg), stats))
}

fn snapshot(data: &[TaskData<'_>], cfg: &PolicyConfig) -> TabularPolicy {
    let mut pol = TabularPolicy::new(cfg.clone());
    for d in data {
        let mut table = TaskTable {
            name: d.task.name.clone(),
            ..TaskTable::default()
        };
        for (i, nk) in d.nk.iter().enumerate() {
            let Some(ids) = nk else { continue };
            table.values.insert(d.graph.state(i).clone(), d.value[i]);
            let row: rustc_hash::FxHashMap<_, _> = ids
                .iter()
                .zip(&d.theta[i])
                .filter(|(_, &l)| l != 0.0)
                .map(|(&j, &l)| (d.graph.state(j).clone(), l))
                .collect();
            if !row.is_empty() {
                table.logits.insert(d.graph.state(i).clone(), row);
            }
        }
        for (i, v) in d.value.iter().enumerate() {
            if d.graph.is_goal(i) && *v != 0.0 {
                table.values.insert(d.graph.state(i).clone(), *v);
            }
        }
        pol.tables.insert(d.task.fingerprint().to_string(), table);
    }
    pol
}
