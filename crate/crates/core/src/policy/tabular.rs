use std::collections::BTreeMap;
use std::path::Path;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::{softmax, Candidate, PolicyConfig, PolicyError, SubgoalPolicy};
use crate::pddl::GroundedTask;
use crate::statespace::State;

pub const POLICY_FORMAT_VERSION: u32 = 1;

/// Logits θ and values V for the states of one task.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TaskTable {
    pub name: String,
    pub values: FxHashMap<State, f64>,
    pub logits: FxHashMap<State, FxHashMap<State, f64>>,
}

/// Tabular softmax policy keyed by task fingerprint and state. Missing
/// logits count as zero, so unseen states get a uniform distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct TabularPolicy {
    pub config: PolicyConfig,
    pub tables: BTreeMap<String, TaskTable>,
}

impl TabularPolicy {
    pub fn new(config: PolicyConfig) -> Self {
        TabularPolicy {
            config,
            tables: BTreeMap::new(),
        }
    }

    pub fn table(&self, task: &GroundedTask) -> Option<&TaskTable> {
        self.tables.get(task.fingerprint())
    }

    pub fn logit(&self, task: &GroundedTask, s: &State, next: &State) -> f64 {
        self.table(task)
            .and_then(|t| t.logits.get(s))
            .and_then(|m| m.get(next))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn value(&self, task: &GroundedTask, s: &State) -> Option<f64> {
        self.table(task).and_then(|t| t.values.get(s)).copied()
    }

    /// Softmax of the stored logits over `candidates`.
    pub fn policy_distribution(
        &self,
        task: &GroundedTask,
        s: &State,
        candidates: &[&State],
    ) -> Result<Vec<f64>, PolicyError> {
        if candidates.is_empty() {
            return Err(PolicyError::EmptyCandidateSet);
        }
        let row = self.table(task).and_then(|t| t.logits.get(s));
        let logits: Vec<f64> = candidates
            .iter()
            .map(|c| row.and_then(|r| r.get(*c)).copied().unwrap_or(0.0))
            .collect();
        Ok(softmax(&logits))
    }

    pub fn fingerprints(&self) -> impl Iterator<Item = &str> {
        self.tables.keys().map(String::as_str)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PolicyFile::from(self)).expect("policies always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, PolicyError> {
        let file: PolicyFile = serde_json::from_str(text)?;
        if file.version != POLICY_FORMAT_VERSION {
            return Err(PolicyError::InvalidConfig(format!(
                "unsupported policy format version {}",
                file.version
            )));
        }
        Ok(file.into())
    }

    pub fn save(&self, path: &Path) -> Result<(), PolicyError> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, PolicyError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

impl SubgoalPolicy for TabularPolicy {
    fn name(&self) -> String {
        "tabular".into()
    }

    fn distribution(
        &self,
        task: &GroundedTask,
        s: &State,
        candidates: &[Candidate<'_>],
    ) -> Result<Vec<f64>, PolicyError> {
        let states: Vec<&State> = candidates.iter().map(|c| c.state).collect();
        self.policy_distribution(task, s, &states)
    }
}

#[derive(Serialize, Deserialize)]
struct PolicyFile {
    version: u32,
    config: PolicyConfig,
    tasks: Vec<TaskFile>,
}

#[derive(Serialize, Deserialize)]
struct TaskFile {
    fingerprint: String,
    name: String,
    states: Vec<StateFile>,
}

#[derive(Serialize, Deserialize)]
struct StateFile {
    state: State,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    value: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    logits: Vec<(State, f64)>,
}

impl From<&TabularPolicy> for PolicyFile {
    fn from(p: &TabularPolicy) -> Self {
        let tasks = p
            .tables
            .iter()
            .map(|(fp, t)| {
                let mut keys: Vec<&State> = t.values.keys().chain(t.logits.keys()).collect();
                keys.sort();
                keys.dedup();
                let states = keys
                    .into_iter()
                    .map(|s| {
                        let mut logits: Vec<(State, f64)> = t
                            .logits
                            .get(s)
                            .map(|m| m.iter().map(|(k, v)| (k.clone(), *v)).collect())
                            .unwrap_or_default();
                        logits.sort_by(|a, b| a.0.cmp(&b.0));
                        StateFile {
                            state: s.clone(),
                            value: t.values.get(s).copied(),
                            logits,
                        }
                    })
                    .collect();
                TaskFile {
                    fingerprint: fp.clone(),
                    name: t.name.clone(),
                    states,
                }
            })
            .collect();
        PolicyFile {
            version: POLICY_FORMAT_VERSION,
            config: p.config.clone(),
            tasks,
        }
    }
}

impl From<PolicyFile> for TabularPolicy {
    fn from(f: PolicyFile) -> Self {
        let mut tables = BTreeMap::new();
        for t in f.tasks {
            let mut table = TaskTable {
                name: t.name,
                ..TaskTable::default()
            };
            for s in t.states {
                if let Some(v) = s.value {
                    table.values.insert(s.state.clone(), v);
                }
                if !s.logits.is_empty() {
                    table.logits.insert(s.state, s.logits.into_iter().collect());
                }
            }
            tables.insert(t.fingerprint, table);
        }
        TabularPolicy {
            config: f.config,
            tables,
        }
    }
}
