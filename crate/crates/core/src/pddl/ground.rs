use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::model::*;
use super::PddlError;
use crate::statespace::State;

pub type AtomId = u32;
pub type ActionId = u32;

pub const DEFAULT_ACTION_CAP: usize = 10_000_000;

#[derive(Debug, Clone, Copy)]
pub struct GroundOptions {
    /// Upper bound on enumerated ground actions.
    pub action_cap: usize,
}

impl Default for GroundOptions {
    fn default() -> Self {
        Self {
            action_cap: DEFAULT_ACTION_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroundAction {
    pub schema: String,
    pub args: Vec<String>,
    pub pre: Vec<AtomId>,
    pub add: Vec<AtomId>,
    pub del: Vec<AtomId>,
}

impl GroundAction {
    /// `name(obj1, obj2)`, the form used in traces.
    pub fn display_name(&self) -> String {
        format!("{}({})", self.schema, self.args.join(", "))
    }

    /// `(name obj1 obj2)`, the form used in plan files.
    pub fn pddl_name(&self) -> String {
        let mut s = format!("({}", self.schema);
        for a in &self.args {
            s.push(' ');
            s.push_str(a);
        }
        s.push(')');
        s
    }
}

/// The grounded state model: dense atom indices, ground actions in
/// lexicographic order, initial state and goal.
#[derive(Debug, Clone)]
pub struct GroundedTask {
    pub name: String,
    pub domain_name: String,
    atoms: Vec<GroundAtom>,
    atom_index: HashMap<GroundAtom, AtomId>,
    actions: Vec<GroundAction>,
    init: State,
    goal: Vec<AtomId>,
    statics: BTreeSet<GroundAtom>,
    objects: Vec<TypedName>,
    types: TypeHierarchy,
    /// (goal atom, its unsatisfied-goal atom) once extended.
    ug_links: Vec<(AtomId, AtomId)>,
    /// Per atom, the actions that use it as their trigger precondition.
    triggers: Vec<Vec<ActionId>>,
    unconditional: Vec<ActionId>,
    fingerprint: String,
}

impl GroundedTask {
    pub fn atoms(&self) -> &[GroundAtom] {
        &self.atoms
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn atom(&self, id: AtomId) -> &GroundAtom {
        &self.atoms[id as usize]
    }

    pub fn atom_id(&self, atom: &GroundAtom) -> Option<AtomId> {
        self.atom_index.get(atom).copied()
    }

    pub fn actions(&self) -> &[GroundAction] {
        &self.actions
    }

    pub fn action(&self, id: ActionId) -> &GroundAction {
        &self.actions[id as usize]
    }

    pub fn init(&self) -> &State {
        &self.init
    }

    pub fn goal(&self) -> &[AtomId] {
        &self.goal
    }

    /// Static atoms that hold in every state (compiled out of preconditions).
    pub fn statics(&self) -> &BTreeSet<GroundAtom> {
        &self.statics
    }

    pub fn static_holds(&self, predicate: &str, args: &[&str]) -> bool {
        self.statics.contains(&GroundAtom::new(predicate, args.iter().copied()))
    }

    pub fn objects(&self) -> &[TypedName] {
        &self.objects
    }

    pub fn objects_of_type(&self, ty: &str) -> Vec<&str> {
        self.objects
            .iter()
            .filter(|o| self.types.is_subtype(&o.ty, ty))
            .map(|o| o.name.as_str())
            .collect()
    }

    pub fn unsatisfied_goal_links(&self) -> &[(AtomId, AtomId)] {
        &self.ug_links
    }

    pub fn has_unsatisfied_goal_atoms(&self) -> bool {
        !self.ug_links.is_empty()
    }

    /// Stable content hash (hex) over atoms, actions, init and goal.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub(crate) fn triggers(&self) -> (&[Vec<ActionId>], &[ActionId]) {
        (&self.triggers, &self.unconditional)
    }

    /// Ids of goal atoms, as ground atoms.
    pub fn goal_atoms(&self) -> impl Iterator<Item = &GroundAtom> + '_ {
        self.goal.iter().map(move |&g| self.atom(g))
    }

    /// Debug dump of the grounded task.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Dump<'a> {
            name: &'a str,
            domain: &'a str,
            fingerprint: &'a str,
            atoms: Vec<String>,
            actions: &'a [GroundAction],
            init: &'a [AtomId],
            goal: &'a [AtomId],
        }
        serde_json::to_value(Dump {
            name: &self.name,
            domain: &self.domain_name,
            fingerprint: &self.fingerprint,
            atoms: self.atoms.iter().map(ToString::to_string).collect(),
            actions: &self.actions,
            init: self.init.atoms(),
            goal: &self.goal,
        })
        .expect("task dump serializes")
    }

    /// The same task with a different goal and initial state.
    pub fn with_init_and_goal(&self, init: State, goal: &[AtomId]) -> GroundedTask {
        let mut t = self.clone();
        t.init = init;
        t.goal = goal.to_vec();
        t.goal.sort_unstable();
        t.goal.dedup();
        t.finalize();
        t
    }

    fn finalize(&mut self) {
        let n = self.atoms.len();
        let mut freq = vec![0usize; n];
        for a in &self.actions {
            for &p in &a.pre {
                freq[p as usize] += 1;
            }
        }
        self.triggers = vec![Vec::new(); n];
        self.unconditional.clear();
        for (id, a) in self.actions.iter().enumerate() {
            match a.pre.iter().copied().min_by_key(|&p| (freq[p as usize], p)) {
                Some(t) => self.triggers[t as usize].push(id as ActionId),
                None => self.unconditional.push(id as ActionId),
            }
        }

        let mut h = Sha256::new();
        for a in &self.atoms {
            h.update(a.to_pddl().as_bytes());
            h.update(b"\n");
        }
        for a in &self.actions {
            let mut line = a.pddl_name();
            for (tag, list) in [("pre", &a.pre), ("add", &a.add), ("del", &a.del)] {
                let _ = write!(line, " {tag}");
                for x in list {
                    let _ = write!(line, " {x}");
                }
            }
            h.update(line.as_bytes());
            h.update(b"\n");
        }
        for list in [self.init.atoms(), &self.goal[..]] {
            for x in list {
                h.update(x.to_le_bytes());
            }
            h.update(b"|");
        }
        let digest = h.finalize();
        self.fingerprint = digest[..8].iter().map(|b| format!("{b:02x}")).collect();
    }
}

/// Schema name, arguments, precondition, add and delete lists.
type RawAction = (String, Vec<String>, Vec<GroundAtom>, Vec<GroundAtom>, Vec<GroundAtom>);

struct Binder<'a> {
    schema: &'a ActionSchema,
    domain_of: Vec<Vec<&'a str>>,
    /// static preconditions checkable once parameter `i` is bound
    static_checks: Vec<Vec<&'a Literal>>,
    statics: &'a HashSet<GroundAtom>,
}

fn instantiate(lit: &Literal, schema: &ActionSchema, binding: &[&str]) -> GroundAtom {
    GroundAtom {
        predicate: lit.predicate.clone(),
        args: lit
            .args
            .iter()
            .map(|t| match t {
                Term::Var(v) => {
                    let i = schema
                        .parameters
                        .iter()
                        .position(|p| &p.name == v)
                        .expect("validated variable");
                    binding[i].to_string()
                }
                Term::Const(c) => c.clone(),
            })
            .collect(),
    }
}

impl<'a> Binder<'a> {
    fn enumerate(
        &self,
        binding: &mut Vec<&'a str>,
        out: &mut Vec<Vec<String>>,
        budget: &mut usize,
    ) -> Result<(), ()> {
        let depth = binding.len();
        if depth == self.schema.parameters.len() {
            if *budget == 0 {
                return Err(());
            }
            *budget -= 1;
            out.push(binding.iter().map(|s| s.to_string()).collect());
            return Ok(());
        }
        for &obj in &self.domain_of[depth] {
            binding.push(obj);
            let ok = self.static_checks[depth]
                .iter()
                .all(|lit| self.statics.contains(&instantiate(lit, self.schema, binding)));
            if ok {
                self.enumerate(binding, out, budget)?;
            }
            binding.pop();
        }
        Ok(())
    }
}

/// Enumerates all type-consistent ground actions, compiling static
/// predicates out of preconditions.
pub fn ground(dom: &DomainModel, inst: &InstanceModel) -> Result<GroundedTask, PddlError> {
    ground_with(dom, inst, GroundOptions::default())
}

pub fn ground_with(dom: &DomainModel, inst: &InstanceModel, opts: GroundOptions) -> Result<GroundedTask, PddlError> {
    let mut objects: BTreeMap<&str, &TypedName> = BTreeMap::new();
    for o in dom.constants.iter().chain(&inst.objects) {
        objects.entry(o.name.as_str()).or_insert(o);
    }
    let static_preds = dom.static_predicates();
    let statics: HashSet<GroundAtom> = inst
        .init
        .iter()
        .filter(|a| static_preds.contains(&a.predicate))
        .cloned()
        .collect();

    let mut raw: Vec<RawAction> = Vec::new();
    let mut budget = opts.action_cap;
    for schema in &dom.schemas {
        let domain_of: Vec<Vec<&str>> = schema
            .parameters
            .iter()
            .map(|p| {
                objects
                    .values()
                    .filter(|o| dom.types.is_subtype(&o.ty, &p.ty))
                    .map(|o| o.name.as_str())
                    .collect()
            })
            .collect();
        let arity = schema.parameters.len();
        let mut static_checks: Vec<Vec<&Literal>> = vec![Vec::new(); arity.max(1)];
        let mut nullary_ok = true;
        for lit in schema.precondition.iter().filter(|l| static_preds.contains(&l.predicate)) {
            let last = lit
                .args
                .iter()
                .filter_map(|t| match t {
                    Term::Var(v) => schema.parameters.iter().position(|p| &p.name == v),
                    Term::Const(_) => None,
                })
                .max();
            match last {
                Some(i) => static_checks[i].push(lit),
                None => {
                    if !statics.contains(&instantiate(lit, schema, &[])) {
                        nullary_ok = false;
                    }
                }
            }
        }
        if !nullary_ok {
            continue;
        }
        let binder = Binder {
            schema,
            domain_of,
            static_checks,
            statics: &statics,
        };
        let mut bindings = Vec::new();
        binder
            .enumerate(&mut Vec::with_capacity(arity), &mut bindings, &mut budget)
            .map_err(|()| PddlError::GroundingExplosion { cap: opts.action_cap })?;
        for args in bindings {
            let b: Vec<&str> = args.iter().map(String::as_str).collect();
            let ground_all = |lits: &[Literal], only_dynamic: bool| -> Vec<GroundAtom> {
                let mut v: Vec<GroundAtom> = lits
                    .iter()
                    .filter(|l| !only_dynamic || !static_preds.contains(&l.predicate))
                    .map(|l| instantiate(l, schema, &b))
                    .collect();
                v.sort();
                v.dedup();
                v
            };
            let pre = ground_all(&schema.precondition, true);
            let add = ground_all(&schema.add_effects, false);
            let mut del = ground_all(&schema.del_effects, false);
            del.retain(|d| !add.contains(d));
            // Identity actions such as move(x, x) only produce self-loops.
            if del.is_empty() && add.iter().all(|a| pre.contains(a)) {
                continue;
            }
            raw.push((schema.name.clone(), args, pre, add, del));
        }
    }
    raw.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));

    let mut goal_atoms = Vec::new();
    for g in &inst.goal {
        if static_preds.contains(&g.predicate) && statics.contains(g) {
            continue;
        }
        goal_atoms.push(g.clone());
    }

    let mut universe: BTreeSet<GroundAtom> = BTreeSet::new();
    universe.extend(inst.init.iter().filter(|a| !static_preds.contains(&a.predicate)).cloned());
    for (_, _, pre, add, del) in &raw {
        universe.extend(pre.iter().chain(add).chain(del).cloned());
    }
    universe.extend(goal_atoms.iter().cloned());
    let atoms: Vec<GroundAtom> = universe.into_iter().collect();
    let atom_index: HashMap<GroundAtom, AtomId> = atoms
        .iter()
        .enumerate()
        .map(|(i, a)| (a.clone(), i as AtomId))
        .collect();
    let ids = |v: &[GroundAtom]| -> Vec<AtomId> {
        let mut out: Vec<AtomId> = v.iter().map(|a| atom_index[a]).collect();
        out.sort_unstable();
        out.dedup();
        out
    };
    let actions = raw
        .iter()
        .map(|(schema, args, pre, add, del)| GroundAction {
            schema: schema.clone(),
            args: args.clone(),
            pre: ids(pre),
            add: ids(add),
            del: ids(del),
        })
        .collect();
    let init_dyn: Vec<GroundAtom> = inst
        .init
        .iter()
        .filter(|a| !static_preds.contains(&a.predicate))
        .cloned()
        .collect();
    let mut task = GroundedTask {
        name: inst.name.clone(),
        domain_name: dom.name.clone(),
        init: State::from_atoms(ids(&init_dyn)),
        goal: ids(&goal_atoms),
        atoms,
        atom_index,
        actions,
        statics: statics.into_iter().collect(),
        objects: objects.values().map(|o| (*o).clone()).collect(),
        types: dom.types.clone(),
        ug_links: Vec::new(),
        triggers: Vec::new(),
        unconditional: Vec::new(),
        fingerprint: String::new(),
    };
    task.finalize();
    Ok(task)
}

/// Adds one atom `p_ug` per goal atom `p`, true exactly when `p` is false.
///
/// Action effects are rewritten so the marking is maintained: adding `p`
/// deletes `p_ug`, deleting `p` adds `p_ug`. Existing indices are unchanged.
pub fn add_unsatisfied_goal_predicates(task: &GroundedTask) -> GroundedTask {
    let mut out = task.clone();
    if task.goal.is_empty() || task.has_unsatisfied_goal_atoms() {
        return out;
    }
    let mut ug_of: HashMap<AtomId, AtomId> = HashMap::new();
    for &g in &task.goal {
        let atom = task.atom(g);
        let ug = GroundAtom {
            predicate: format!("{}_ug", atom.predicate),
            args: atom.args.clone(),
        };
        let id = out.atoms.len() as AtomId;
        out.atom_index.insert(ug.clone(), id);
        out.atoms.push(ug);
        ug_of.insert(g, id);
        out.ug_links.push((g, id));
    }
    let mut init: Vec<AtomId> = task.init.atoms().to_vec();
    for (&g, &ug) in &ug_of {
        if !task.init.contains(g) {
            init.push(ug);
        }
    }
    out.init = State::from_atoms(init);
    for a in &mut out.actions {
        let mut add_ug = Vec::new();
        let mut del_ug = Vec::new();
        for x in &a.add {
            if let Some(&ug) = ug_of.get(x) {
                del_ug.push(ug);
            }
        }
        for x in &a.del {
            if let Some(&ug) = ug_of.get(x) {
                add_ug.push(ug);
            }
        }
        a.add.extend(add_ug);
        a.add.sort_unstable();
        a.del.extend(del_ug);
        a.del.sort_unstable();
    }
    out.finalize();
    out
}
