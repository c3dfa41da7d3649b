//! Benchmark harness: per-instance run records with coverage, subgoal
//! counts, plan lengths and plan quality against an exact BFS oracle;
//! validation scores; subgoal-count curves.

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::executor::{flatten, siw_pi, siw_pi_from, ExecOptions};
use crate::generators::{derive_seed, generate, GenError, GenSpec};
use crate::pddl::{add_unsatisfied_goal_predicates, load_task, GroundedTask, PddlError};
use crate::policy::{sketch_policy, SubgoalPolicy, TabularPolicy, UniformPolicy};
use crate::sketch::{builtin_ruleset, Ruleset, RulesetName, SketchError};
use crate::statespace::{bfs_optimal, validate, StateGraph, StateSpaceError};
use crate::width::{nk_successors, Width};

pub const CSV_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("instance {id}: {source}")]
    Generate { id: String, source: GenError },
    #[error("instance {id}: {source}")]
    Parse { id: String, source: PddlError },
    #[error("instance {id}: {source}")]
    Policy { id: String, source: SketchError },
    #[error(transparent)]
    StateSpace(#[from] StateSpaceError),
    #[error("malformed records CSV: {0}")]
    Csv(String),
    #[error("cannot build thread pool: {0}")]
    Threads(String),
}

/// Where the subgoal policy for an instance comes from.
#[derive(Clone)]
pub enum PolicySource {
    /// A built-in ruleset bound to the instance's domain.
    Sketch(RulesetName),
    Ruleset(Ruleset),
    Trained(Arc<TabularPolicy>),
    Uniform,
}

impl PolicySource {
    pub fn describe(&self) -> String {
        match self {
            PolicySource::Sketch(r) => format!("sketch:{r}"),
            PolicySource::Ruleset(r) => format!("ruleset:{}", r.name),
            PolicySource::Trained(_) => "trained".into(),
            PolicySource::Uniform => "uniform".into(),
        }
    }

    pub fn instantiate(&self, spec: &GenSpec) -> Result<Box<dyn SubgoalPolicy>, SketchError> {
        Ok(match self {
            PolicySource::Sketch(r) => Box::new(sketch_policy(builtin_ruleset(*r, spec.domain)?)),
            PolicySource::Ruleset(r) => Box::new(sketch_policy(r.clone())),
            PolicySource::Trained(p) => Box::new(TrainedRef(p.clone())),
            PolicySource::Uniform => Box::new(UniformPolicy),
        })
    }
}

struct TrainedRef(Arc<TabularPolicy>);

impl SubgoalPolicy for TrainedRef {
    fn name(&self) -> String {
        self.0.name()
    }
    fn distribution(
        &self,
        task: &GroundedTask,
        s: &crate::statespace::State,
        candidates: &[crate::policy::Candidate<'_>],
    ) -> Result<Vec<f64>, crate::policy::PolicyError> {
        self.0.distribution(task, s, candidates)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchOptions {
    pub exec: ExecOptions,
    /// Extend tasks with unsatisfied-goal atoms before solving.
    pub unsatisfied_goal_atoms: bool,
    /// Compute the BFS optimum (skipped when the state cap is exceeded).
    pub oracle: bool,
    pub oracle_state_cap: usize,
    /// Worker threads; 0 uses the global pool.
    pub jobs: usize,
    pub suite_seed: u64,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            exec: ExecOptions::default(),
            unsatisfied_goal_atoms: false,
            oracle: true,
            oracle_state_cap: 200_000,
            jobs: 0,
            suite_seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: String,
    pub domain: String,
    pub objects: usize,
    pub agents: Option<usize>,
    pub solved: bool,
    pub subgoals: usize,
    pub length: usize,
    pub optimal: Option<usize>,
    pub pq: Option<f64>,
    pub wall_ms: f64,
    pub failure: Option<String>,
    /// Whether every IW call respected the novelty-table size bound.
    pub novelty_bound_ok: bool,
    pub plan_valid: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub instances: usize,
    pub solved: usize,
    pub coverage: f64,
    pub mean_subgoals: f64,
    pub mean_length: f64,
    pub mean_optimal: Option<f64>,
    /// Ratio of mean length to mean optimal length over solved instances
    /// with a known optimum.
    pub pq: Option<f64>,
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (mut sum, mut n) = (0.0, 0usize);
    for x in xs {
        sum += x;
        n += 1;
    }
    (n > 0).then(|| sum / n as f64)
}

pub fn aggregate(records: &[RunRecord]) -> Aggregate {
    if records.is_empty() {
        return Aggregate::default();
    }
    let solved: Vec<&RunRecord> = records.iter().filter(|r| r.solved).collect();
    let with_opt: Vec<&RunRecord> = solved.iter().copied().filter(|r| r.optimal.is_some()).collect();
    let mean_len_opt = mean(with_opt.iter().map(|r| r.length as f64));
    let mean_optimal = mean(with_opt.iter().map(|r| r.optimal.unwrap_or(0) as f64));
    Aggregate {
        instances: records.len(),
        solved: solved.len(),
        coverage: solved.len() as f64 / records.len() as f64,
        mean_subgoals: mean(solved.iter().map(|r| r.subgoals as f64)).unwrap_or(0.0),
        mean_length: mean(solved.iter().map(|r| r.length as f64)).unwrap_or(0.0),
        mean_optimal,
        pq: match (mean_len_opt, mean_optimal) {
            (Some(l), Some(o)) if o > 0.0 => Some(l / o),
            _ => None,
        },
    }
}

/// Generated-not-pruned states of one IW(k) call may not exceed the
/// number of atom tuples of size k plus the depth-one children.
pub fn novelty_bound(num_atoms: usize, k: Width, depth_one: usize) -> usize {
    num_atoms.pow(k.get() as u32) + depth_one
}

/// FNV-1a over the instance id, so run seeds do not depend on suite order.
fn id_hash(id: &str) -> u64 {
    id.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

pub fn run_instance(spec: &GenSpec, source: &PolicySource, opts: &BenchOptions) -> Result<RunRecord, BenchError> {
    let id = spec.instance_id();
    let (dom, prob) = generate(spec).map_err(|source| BenchError::Generate { id: id.clone(), source })?;
    let mut task = load_task(&dom, &prob).map_err(|source| BenchError::Parse { id: id.clone(), source })?;
    if opts.unsatisfied_goal_atoms {
        task = add_unsatisfied_goal_predicates(&task);
    }
    let pol = source
        .instantiate(spec)
        .map_err(|source| BenchError::Policy { id: id.clone(), source })?;
    let mut exec = opts.exec.clone();
    exec.seed = derive_seed(opts.suite_seed, id_hash(&id));
    let t0 = Instant::now();
    let trace = siw_pi(&task, pol.as_ref(), &exec);
    let wall_ms = t0.elapsed().as_secs_f64() * 1e3;
    let plan = flatten(&trace);
    let plan_valid = !trace.solved || validate(&task, task.init(), &plan).is_ok();
    let optimal = if opts.oracle && trace.solved {
        match bfs_optimal(&task, task.init(), None, opts.oracle_state_cap) {
            Ok(o) => o,
            Err(e) => {
                warn!("{id}: oracle skipped ({e})");
                None
            }
        }
    } else {
        None
    };
    let length = trace.primitive_length();
    let novelty_bound_ok = trace
        .segments
        .iter()
        .all(|s| s.closure_size <= novelty_bound(task.num_atoms(), exec.k, s.depth_one));
    Ok(RunRecord {
        instance: id,
        domain: spec.domain.to_string(),
        objects: spec.characteristic_count(),
        agents: spec.agents(),
        solved: trace.solved && plan_valid,
        subgoals: trace.subgoal_count(),
        length,
        pq: optimal.filter(|&o| o > 0 && trace.solved).map(|o| length as f64 / o as f64),
        optimal,
        wall_ms,
        failure: trace.failure.map(|f| f.as_str().to_string()),
        novelty_bound_ok,
        plan_valid,
    })
}

/// Runs every spec (in parallel) and returns records in spec order.
pub fn run_suite(
    specs: &[GenSpec],
    source: &PolicySource,
    opts: &BenchOptions,
) -> Result<(Vec<RunRecord>, Aggregate), BenchError> {
    let work = || -> Result<Vec<RunRecord>, BenchError> {
        specs
            .par_iter()
            .map(|s| run_instance(s, source, opts))
            .collect()
    };
    let records = if opts.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| BenchError::Threads(e.to_string()))?
            .install(work)?
    } else {
        work()?
    };
    let agg = aggregate(&records);
    Ok((records, agg))
}

const RECORD_HEADER: &str =
    "instance,domain,objects,agents,solved,subgoals,length,optimal,pq,wall_ms,failure,novelty_bound_ok,plan_valid";

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

pub fn records_to_csv(records: &[RunRecord]) -> String {
    let mut out = format!("# schema={CSV_SCHEMA_VERSION}\n{RECORD_HEADER}\n");
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.instance,
            r.domain,
            r.objects,
            opt(&r.agents),
            r.solved,
            r.subgoals,
            r.length,
            opt(&r.optimal),
            opt(&r.pq),
            r.wall_ms,
            opt(&r.failure),
            r.novelty_bound_ok,
            r.plan_valid
        );
    }
    out
}

pub fn records_from_csv(text: &str) -> Result<Vec<RunRecord>, BenchError> {
    let bad = |m: &str| BenchError::Csv(m.to_string());
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    if lines.next() != Some(RECORD_HEADER) {
        return Err(bad("unexpected header"));
    }
    fn parse_opt<T: std::str::FromStr>(s: &str) -> Result<Option<T>, BenchError> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|_| BenchError::Csv(format!("bad field `{s}`")))
        }
    }
    fn parse<T: std::str::FromStr>(s: &str) -> Result<T, BenchError> {
        s.parse().map_err(|_| BenchError::Csv(format!("bad field `{s}`")))
    }
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != 13 {
                return Err(bad("wrong column count"));
            }
            Ok(RunRecord {
                instance: f[0].to_string(),
                domain: f[1].to_string(),
                objects: parse(f[2])?,
                agents: parse_opt(f[3])?,
                solved: parse(f[4])?,
                subgoals: parse(f[5])?,
                length: parse(f[6])?,
                optimal: parse_opt(f[7])?,
                pq: parse_opt(f[8])?,
                wall_ms: parse(f[9])?,
                failure: parse_opt(f[10])?,
                novelty_bound_ok: parse(f[11])?,
                plan_valid: parse(f[12])?,
            })
        })
        .collect()
}

/// Table row: raw means in the CSV, the report rounds for display.
pub fn aggregate_to_csv(name: &str, a: &Aggregate) -> String {
    format!(
        "# schema={CSV_SCHEMA_VERSION}\nsuite,instances,solved,coverage,mean_subgoals,mean_length,mean_optimal,pq\n{name},{},{},{},{},{},{},{}\n",
        a.instances,
        a.solved,
        a.coverage,
        a.mean_subgoals,
        a.mean_length,
        opt(&a.mean_optimal),
        opt(&a.pq)
    )
}

pub fn report_line(name: &str, a: &Aggregate) -> String {
    format!(
        "{name}: Cov {}/{} SL {} L {} PQ {}",
        a.solved,
        a.instances,
        a.mean_subgoals.round(),
        a.mean_length.round(),
        a.pq.map_or("-".to_string(), |p| format!("{p:.2}"))
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValidationMetric {
    /// Primitive plan length against the optimal plan length.
    PrimitiveLength,
    /// Number of IW(k) calls against the fewest calls over N_k successors.
    SubgoalCount,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationScore {
    /// Mean SIW^π(k) length over mean optimal length; infinite when some
    /// rollout fails.
    pub ratio: f64,
    pub mean_length: f64,
    pub mean_optimal: f64,
    pub states: usize,
    pub unsolved: usize,
}

/// Rolls out SIW^π(k) from every alive state of every task and compares
/// the mean length with the mean optimum.
pub fn validation_score(
    tasks: &[GroundedTask],
    pol: &dyn SubgoalPolicy,
    opts: &ExecOptions,
    metric: ValidationMetric,
    state_cap: usize,
) -> Result<ValidationScore, StateSpaceError> {
    let (mut total, mut total_opt, mut states, mut unsolved) = (0usize, 0usize, 0usize, 0usize);
    for task in tasks {
        let graph = StateGraph::explore(task, state_cap)?;
        let optimum: Vec<Option<usize>> = match metric {
            ValidationMetric::PrimitiveLength => (0..graph.len()).map(|i| graph.goal_distance(i)).collect(),
            ValidationMetric::SubgoalCount => subgoal_distances(task, &graph, opts.k),
        };
        for i in graph.alive() {
            let Some(best) = optimum[i] else { continue };
            states += 1;
            let trace = siw_pi_from(task, graph.state(i), pol, opts);
            if !trace.solved {
                unsolved += 1;
                continue;
            }
            total += match metric {
                ValidationMetric::PrimitiveLength => trace.primitive_length(),
                ValidationMetric::SubgoalCount => trace.subgoal_count(),
            };
            total_opt += best;
        }
    }
    let solved = states - unsolved;
    let mean_length = if solved > 0 { total as f64 / solved as f64 } else { 0.0 };
    let mean_optimal = if solved > 0 { total_opt as f64 / solved as f64 } else { 0.0 };
    let ratio = if unsolved > 0 {
        f64::INFINITY
    } else if total_opt == 0 {
        1.0
    } else {
        total as f64 / total_opt as f64
    };
    Ok(ValidationScore {
        ratio,
        mean_length,
        mean_optimal,
        states,
        unsolved,
    })
}

/// Fewest IW(k) calls to a goal from every state: backward BFS over the
/// graph whose edges are s -> N_k(s).
pub fn subgoal_distances(task: &GroundedTask, graph: &StateGraph, k: Width) -> Vec<Option<usize>> {
    let n = graph.len();
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        if graph.is_goal(i) {
            continue;
        }
        for (s, _) in nk_successors(task, graph.state(i), k).closure_states() {
            if let Some(j) = graph.index_of(s) {
                pred[j].push(i);
            }
        }
    }
    let mut dist = vec![None; n];
    let mut queue = std::collections::VecDeque::new();
    for (i, d) in dist.iter_mut().enumerate() {
        if graph.is_goal(i) {
            *d = Some(0);
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
    dist
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub instance: String,
    pub x: usize,
    /// `x` plus the agent count, the abscissa of multi-agent curves.
    pub x_total: usize,
    pub y: usize,
    pub agents: Option<usize>,
    pub solved: bool,
}

/// Subgoal count against the characteristic object count (packages,
/// balls, nuts, passengers, rewards or children).
pub fn subgoal_curve(
    specs: &[GenSpec],
    source: &PolicySource,
    opts: &BenchOptions,
) -> Result<Vec<CurveRow>, BenchError> {
    let (records, _) = run_suite(specs, source, opts)?;
    Ok(records
        .into_iter()
        .map(|r| CurveRow {
            x: r.objects,
            x_total: r.objects + r.agents.unwrap_or(0),
            y: r.subgoals,
            agents: r.agents,
            solved: r.solved,
            instance: r.instance,
        })
        .collect())
}

pub fn curve_to_csv(rows: &[CurveRow]) -> String {
    let mut out = format!("# schema={CSV_SCHEMA_VERSION}\ninstance,x,x_total,y,agents,solved\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{},{},{}", r.instance, r.x, r.x_total, r.y, opt(&r.agents), r.solved);
    }
    out
}
