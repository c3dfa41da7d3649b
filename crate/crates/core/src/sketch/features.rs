//! Named feature evaluators. An evaluator is compiled against one grounded
//! task into a closure over atom ids, so evaluation is a handful of lookups.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::SketchError;
use crate::pddl::{AtomId, GroundedTask};
use crate::statespace::State;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureKind {
    Boolean,
    Numeric,
}

/// A declared feature: its name in rules, its kind, and the registered
/// evaluator computing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Feature {
    pub name: String,
    pub kind: FeatureKind,
    pub evaluator: String,
}

impl Feature {
    pub fn new(name: &str, kind: FeatureKind, evaluator: &str) -> Self {
        Feature {
            name: name.to_string(),
            kind,
            evaluator: evaluator.to_string(),
        }
    }
}

/// Feature evaluator bound to one task. Booleans are encoded as 0/1.
pub type Evaluator = Arc<dyn Fn(&State) -> u32 + Send + Sync>;

/// Names accepted by [`compile_evaluator`].
pub const EVALUATORS: &[&str] = &[
    "goals.unachieved",
    "delivery.held",
    "gripper.pickable",
    "miconic.waiting",
    "spanner.uncollected",
    "childsnack.unprepared",
];

pub fn compile_evaluator(name: &str, task: &GroundedTask) -> Result<Evaluator, SketchError> {
    Ok(match name {
        "goals.unachieved" => {
            let goal = task.goal().to_vec();
            Arc::new(move |s: &State| count_false(s, &goal))
        }
        "delivery.held" => {
            let packages = goal_args(task, "at", 0);
            let held = atoms_where(task, "carrying", |a| packages.contains(&a[1]));
            Arc::new(move |s: &State| u32::from(count_true(s, &held) > 0))
        }
        "gripper.pickable" => {
            let targets: Vec<(String, String)> = task
                .goal_atoms()
                .filter(|g| g.predicate == "at" && g.args.len() == 2)
                .map(|g| (g.args[0].clone(), g.args[1].clone()))
                .collect();
            let lying = atoms_where(task, "at", |a| {
                targets.iter().any(|(b, r)| *b == a[0] && *r != a[1])
            });
            let free = atoms_where(task, "free", |_| true);
            Arc::new(move |s: &State| count_true(s, &lying).min(count_true(s, &free)))
        }
        "miconic.waiting" => {
            let passengers = goal_args(task, "served", 0);
            let pairs: Vec<(Option<AtomId>, Option<AtomId>)> = passengers
                .iter()
                .map(|p| (lookup(task, "boarded", &[p]), lookup(task, "served", &[p])))
                .collect();
            Arc::new(move |s: &State| {
                pairs
                    .iter()
                    .filter(|(b, sv)| !holds(s, *b) && !holds(s, *sv))
                    .count() as u32
            })
        }
        "spanner.uncollected" => {
            let spanners: BTreeSet<String> = task.objects_of_type("spanner").into_iter().map(String::from).collect();
            let lying = atoms_where(task, "at", |a| spanners.contains(&a[0]));
            Arc::new(move |s: &State| count_true(s, &lying))
        }
        "childsnack.unprepared" => childsnack_unprepared(task),
        other => return Err(SketchError::UnknownEvaluator(other.to_string())),
    })
}

fn lookup(task: &GroundedTask, predicate: &str, args: &[&String]) -> Option<AtomId> {
    task.atom_id(&crate::pddl::GroundAtom::new(predicate, args.iter().map(|a| a.as_str())))
}

fn holds(s: &State, atom: Option<AtomId>) -> bool {
    atom.is_some_and(|a| s.contains(a))
}

fn atoms_where(task: &GroundedTask, predicate: &str, keep: impl Fn(&[String]) -> bool) -> Vec<AtomId> {
    task.atoms()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.predicate == predicate && keep(&a.args))
        .map(|(i, _)| i as AtomId)
        .collect()
}

/// Argument `pos` of every goal atom over `predicate`.
fn goal_args(task: &GroundedTask, predicate: &str, pos: usize) -> BTreeSet<String> {
    task.goal_atoms()
        .filter(|g| g.predicate == predicate && g.args.len() > pos)
        .map(|g| g.args[pos].clone())
        .collect()
}

fn count_true(s: &State, ids: &[AtomId]) -> u32 {
    ids.iter().filter(|&&a| s.contains(a)).count() as u32
}

fn count_false(s: &State, ids: &[AtomId]) -> u32 {
    ids.iter().filter(|&&a| !s.contains(a)).count() as u32
}

/// Children still lacking a suitable sandwich on a tray. Trayed sandwiches
/// are matched to unserved children, gluten-free ones to allergic children
/// first. One is added when the remaining ingredients and kitchen sandwiches
/// can no longer cover the shortfall, so transitions that waste gluten-free
/// supplies never count as progress.
fn childsnack_unprepared(task: &GroundedTask) -> Evaluator {
    let children = goal_args(task, "served", 0);
    let mut allergic = Vec::new();
    let mut regular = Vec::new();
    for c in &children {
        let served = lookup(task, "served", &[c]);
        if task.static_holds("allergic_gluten", &[c]) {
            allergic.push(served);
        } else {
            regular.push(served);
        }
    }
    let gf_sandwich: Vec<(String, Option<AtomId>)> = task
        .objects_of_type("sandwich")
        .into_iter()
        .map(|s| (s.to_string(), lookup(task, "no_gluten_sandwich", &[&s.to_string()])))
        .collect();
    let trayed: Vec<(AtomId, Option<AtomId>)> = task
        .atoms()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.predicate == "ontray")
        .map(|(i, a)| {
            let gf = gf_sandwich.iter().find(|(s, _)| *s == a.args[0]).and_then(|(_, g)| *g);
            (i as AtomId, gf)
        })
        .collect();
    let kitchen: Vec<(AtomId, Option<AtomId>)> = task
        .atoms()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.predicate == "at_kitchen_sandwich")
        .map(|(i, a)| {
            let gf = gf_sandwich.iter().find(|(s, _)| *s == a.args[0]).and_then(|(_, g)| *g);
            (i as AtomId, gf)
        })
        .collect();
    let bread = atoms_where(task, "at_kitchen_bread", |_| true);
    let gf_bread = atoms_where(task, "at_kitchen_bread", |a| task.static_holds("no_gluten_bread", &[&a[0]]));
    let content = atoms_where(task, "at_kitchen_content", |_| true);
    let gf_content = atoms_where(task, "at_kitchen_content", |a| {
        task.static_holds("no_gluten_content", &[&a[0]])
    });
    let unmade = atoms_where(task, "notexist", |_| true);

    Arc::new(move |s: &State| {
        let unserved = |list: &[Option<AtomId>]| list.iter().filter(|&&a| !holds(s, a)).count() as u32;
        let need_gf = unserved(&allergic);
        let need_any = unserved(&regular);
        let (mut tray_gf, mut tray_reg) = (0u32, 0u32);
        for &(atom, gf) in &trayed {
            if s.contains(atom) {
                if holds(s, gf) {
                    tray_gf += 1;
                } else {
                    tray_reg += 1;
                }
            }
        }
        let covered_gf = need_gf.min(tray_gf);
        let covered_any = need_any.min(tray_reg + tray_gf - covered_gf);
        let short_gf = need_gf - covered_gf;
        let short_any = need_any - covered_any;

        let (mut kit_gf, mut kit_all) = (0u32, 0u32);
        for &(atom, gf) in &kitchen {
            if s.contains(atom) {
                kit_all += 1;
                if holds(s, gf) {
                    kit_gf += 1;
                }
            }
        }
        let slots = count_true(s, &unmade);
        let supply_gf = kit_gf + slots.min(count_true(s, &gf_bread)).min(count_true(s, &gf_content));
        let supply_all = kit_all + slots.min(count_true(s, &bread)).min(count_true(s, &content));
        let infeasible = short_gf > supply_gf || short_gf + short_any > supply_all;
        short_gf + short_any + u32::from(infeasible)
    })
}
