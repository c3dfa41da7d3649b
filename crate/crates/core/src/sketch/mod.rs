//! Feature-based sketches: rules `C -> E` over boolean and numeric features,
//! subgoal sets G_R(s), safety/acyclicity checking and the built-in
//! rulesets R1 to R4.

mod features;
mod rules;
mod safety;

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generators::DomainTag;
use crate::pddl::GroundedTask;
use crate::statespace::{State, StateSpaceError};

pub use features::{compile_evaluator, Evaluator, Feature, FeatureKind, EVALUATORS};
pub use rules::{Change, Condition, Effect, SketchRule, Test};
pub use safety::{check_safe_acyclic, SafetyReport, Violation, ViolationKind};

#[derive(Debug, Error)]
pub enum SketchError {
    #[error("no built-in binding of {ruleset} for domain {domain}")]
    UnknownBinding { ruleset: String, domain: String },
    #[error("unknown feature evaluator `{0}`")]
    UnknownEvaluator(String),
    #[error("rule references undeclared feature `{0}`")]
    UndeclaredFeature(String),
    #[error("invalid rule: {0}")]
    BadRule(String),
    #[error("cannot read ruleset: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed ruleset JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    StateSpace(#[from] StateSpaceError),
}

/// Features plus rules. Features are referenced by name from rules.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ruleset {
    pub name: String,
    pub features: Vec<Feature>,
    pub rules: Vec<SketchRule>,
}

impl Ruleset {
    /// Checks that every rule refers to declared features and that every
    /// evaluator name is registered.
    pub fn validate(&self) -> Result<(), SketchError> {
        for f in &self.features {
            if !EVALUATORS.contains(&f.evaluator.as_str()) {
                return Err(SketchError::UnknownEvaluator(f.evaluator.clone()));
            }
        }
        for r in &self.rules {
            let names = r
                .conditions
                .iter()
                .map(|c| &c.feature)
                .chain(r.effects.iter().map(|e| &e.feature));
            for n in names {
                if !self.features.iter().any(|f| &f.name == n) {
                    return Err(SketchError::UndeclaredFeature(n.clone()));
                }
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self, SketchError> {
        let rs: Ruleset = serde_json::from_str(text)?;
        rs.validate()?;
        Ok(rs)
    }

    pub fn load(path: &Path) -> Result<Self, SketchError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("rulesets always serialize")
    }

    /// Compiles the feature evaluators against `task`.
    pub fn bind(&self, task: &GroundedTask) -> Result<BoundRuleset, SketchError> {
        self.validate()?;
        let evaluators = self
            .features
            .iter()
            .map(|f| compile_evaluator(&f.evaluator, task))
            .collect::<Result<Vec<_>, _>>()?;
        let index = |name: &str| self.features.iter().position(|f| f.name == name).expect("validated");
        let rules = self
            .rules
            .iter()
            .map(|r| CompiledRule {
                conditions: r.conditions.iter().map(|c| (index(&c.feature), c.test)).collect(),
                effects: self
                    .features
                    .iter()
                    .map(|f| r.effects.iter().find(|e| e.feature == f.name).map(|e| e.change))
                    .collect(),
            })
            .collect();
        Ok(BoundRuleset {
            ruleset: self.clone(),
            evaluators,
            rules,
        })
    }
}

/// Feature values in declaration order; booleans as 0/1.
pub type Valuation = Vec<u32>;

struct CompiledRule {
    conditions: Vec<(usize, Test)>,
    /// Per feature: required change, or `None` for "unchanged".
    effects: Vec<Option<Change>>,
}

impl CompiledRule {
    fn satisfied(&self, before: &[u32], after: &[u32]) -> bool {
        self.conditions.iter().all(|&(f, t)| t.holds(before[f]))
            && self.effects.iter().enumerate().all(|(f, e)| match e {
                Some(c) => c.holds(before[f], after[f]),
                None => before[f] == after[f],
            })
    }
}

/// A ruleset whose features are compiled for one task.
pub struct BoundRuleset {
    ruleset: Ruleset,
    evaluators: Vec<Evaluator>,
    rules: Vec<CompiledRule>,
}

impl BoundRuleset {
    pub fn ruleset(&self) -> &Ruleset {
        &self.ruleset
    }

    pub fn eval(&self, s: &State) -> Valuation {
        self.evaluators.iter().map(|e| e(s)).collect()
    }

    /// Lowest-index rule satisfied by the pair of valuations.
    pub fn pair_satisfies_values(&self, before: &[u32], after: &[u32]) -> Option<usize> {
        self.rules.iter().position(|r| r.satisfied(before, after))
    }

    pub fn pair_satisfies(&self, s: &State, s2: &State) -> Option<usize> {
        self.pair_satisfies_values(&self.eval(s), &self.eval(s2))
    }

    /// The candidates `s2` for which `[s, s2]` satisfies some rule.
    pub fn subgoal_set<'c>(&self, s: &State, candidates: impl IntoIterator<Item = &'c State>) -> Vec<&'c State> {
        let before = self.eval(s);
        candidates
            .into_iter()
            .filter(|c| self.pair_satisfies_values(&before, &self.eval(c)).is_some())
            .collect()
    }

    /// Valuation rendered as `name=value` pairs.
    pub fn describe(&self, v: &[u32]) -> String {
        self.ruleset
            .features
            .iter()
            .zip(v)
            .map(|(f, x)| match f.kind {
                FeatureKind::Boolean => format!("{}={}", f.name, *x > 0),
                FeatureKind::Numeric => format!("{}={x}", f.name),
            })
            .collect::<Vec<_>>()
            .join(", ")
    }
}

pub fn eval_features(ruleset: &Ruleset, task: &GroundedTask, s: &State) -> Result<Valuation, SketchError> {
    Ok(ruleset.bind(task)?.eval(s))
}

pub fn pair_satisfies(
    ruleset: &Ruleset,
    task: &GroundedTask,
    s: &State,
    s2: &State,
) -> Result<Option<usize>, SketchError> {
    Ok(ruleset.bind(task)?.pair_satisfies(s, s2))
}

pub fn subgoal_set<'c>(
    ruleset: &Ruleset,
    task: &GroundedTask,
    s: &State,
    candidates: impl IntoIterator<Item = &'c State>,
) -> Result<Vec<&'c State>, SketchError> {
    Ok(ruleset.bind(task)?.subgoal_set(s, candidates))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RulesetName {
    R1,
    R2,
    R3,
    R4,
}

impl std::str::FromStr for RulesetName {
    type Err = SketchError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "R1" => Ok(RulesetName::R1),
            "R2" => Ok(RulesetName::R2),
            "R3" => Ok(RulesetName::R3),
            "R4" => Ok(RulesetName::R4),
            _ => Err(SketchError::BadRule(format!("unknown ruleset `{s}`"))),
        }
    }
}

impl std::fmt::Display for RulesetName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Built-in rulesets with their per-domain feature bindings.
///
/// * R1 `{N>0} -> {N-}` with N = unachieved goal atoms (any domain; for
///   Reward these are the uncollected rewards).
/// * R2 (Delivery) `{!H, N>0} -> {H}`, `{H, N>0} -> {!H, N-}`.
/// * R3 (Miconic, Childsnack, Spanner) `{N2>0} -> {N2-}`,
///   `{N1>0, N2=0} -> {N1-}`.
/// * R4 (Gripper) like R3 with the second rule `{N1>0, N2=0} -> {N1-, N2?}`.
pub fn builtin_ruleset(name: RulesetName, domain: DomainTag) -> Result<Ruleset, SketchError> {
    use FeatureKind::*;
    let unknown = || SketchError::UnknownBinding {
        ruleset: name.to_string(),
        domain: domain.to_string(),
    };
    let (features, rules) = match name {
        RulesetName::R1 => (
            vec![Feature::new("N", Numeric, "goals.unachieved")],
            vec![SketchRule::new(&["N>0"], &["N-"])?],
        ),
        RulesetName::R2 => {
            if domain != DomainTag::Delivery {
                return Err(unknown());
            }
            (
                vec![
                    Feature::new("H", Boolean, "delivery.held"),
                    Feature::new("N", Numeric, "goals.unachieved"),
                ],
                vec![
                    SketchRule::new(&["!H", "N>0"], &["H"])?,
                    SketchRule::new(&["H", "N>0"], &["!H", "N-"])?,
                ],
            )
        }
        RulesetName::R3 => {
            let n2 = match domain {
                DomainTag::Miconic => "miconic.waiting",
                DomainTag::Childsnack => "childsnack.unprepared",
                DomainTag::Spanner => "spanner.uncollected",
                _ => return Err(unknown()),
            };
            (
                vec![
                    Feature::new("N1", Numeric, "goals.unachieved"),
                    Feature::new("N2", Numeric, n2),
                ],
                vec![
                    SketchRule::new(&["N2>0"], &["N2-"])?,
                    SketchRule::new(&["N1>0", "N2=0"], &["N1-"])?,
                ],
            )
        }
        RulesetName::R4 => {
            if domain != DomainTag::Gripper {
                return Err(unknown());
            }
            (
                vec![
                    Feature::new("N1", Numeric, "goals.unachieved"),
                    Feature::new("N2", Numeric, "gripper.pickable"),
                ],
                vec![
                    SketchRule::new(&["N2>0"], &["N2-"])?,
                    SketchRule::new(&["N1>0", "N2=0"], &["N1-", "N2?"])?,
                ],
            )
        }
    };
    Ok(Ruleset {
        name: name.to_string(),
        features,
        rules,
    })
}
