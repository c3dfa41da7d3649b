use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

pub const ROOT_TYPE: &str = "object";

/// A name with its declared type, used for parameters, constants and objects.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TypedName {
    pub name: String,
    pub ty: String,
}

impl TypedName {
    pub fn new(name: impl Into<String>, ty: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ty: ty.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Const(String),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "?{v}"),
            Term::Const(c) => f.write_str(c),
        }
    }
}

/// A lifted atom `p(t1, ..., tn)` inside an action schema.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    pub predicate: String,
    pub args: Vec<Term>,
}

/// A ground atom. The derived ordering (predicate name, then arguments) is the
/// atom index order used by grounding.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroundAtom {
    pub predicate: String,
    pub args: Vec<String>,
}

impl GroundAtom {
    pub fn new<S: Into<String>>(predicate: impl Into<String>, args: impl IntoIterator<Item = S>) -> Self {
        Self {
            predicate: predicate.into(),
            args: args.into_iter().map(Into::into).collect(),
        }
    }

    pub fn to_pddl(&self) -> String {
        let mut s = format!("({}", self.predicate);
        for a in &self.args {
            s.push(' ');
            s.push_str(a);
        }
        s.push(')');
        s
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.predicate, self.args.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateDecl {
    pub name: String,
    pub params: Vec<TypedName>,
}

impl PredicateDecl {
    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSchema {
    pub name: String,
    pub parameters: Vec<TypedName>,
    pub precondition: Vec<Literal>,
    pub add_effects: Vec<Literal>,
    pub del_effects: Vec<Literal>,
}

/// Declared types with their parent, in declaration order. `object` is implicit.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TypeHierarchy {
    declared: Vec<(String, String)>,
}

impl TypeHierarchy {
    pub fn declare(&mut self, name: impl Into<String>, parent: impl Into<String>) {
        let name = name.into();
        if name == ROOT_TYPE {
            return;
        }
        let parent = parent.into();
        if let Some(entry) = self.declared.iter_mut().find(|(n, _)| *n == name) {
            entry.1 = parent;
        } else {
            self.declared.push((name, parent));
        }
    }

    pub fn contains(&self, ty: &str) -> bool {
        ty == ROOT_TYPE || self.declared.iter().any(|(n, _)| n == ty)
    }

    pub fn parent(&self, ty: &str) -> Option<&str> {
        self.declared
            .iter()
            .find(|(n, _)| n == ty)
            .map(|(_, p)| p.as_str())
    }

    pub fn declared(&self) -> &[(String, String)] {
        &self.declared
    }

    /// True when `ty` equals `ancestor` or inherits from it.
    pub fn is_subtype(&self, ty: &str, ancestor: &str) -> bool {
        if ancestor == ROOT_TYPE {
            return true;
        }
        let mut cur = ty;
        // bounded walk guards against cyclic declarations
        for _ in 0..=self.declared.len() {
            if cur == ancestor {
                return true;
            }
            match self.parent(cur) {
                Some(p) => cur = p,
                None => return false,
            }
        }
        false
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainModel {
    pub name: String,
    pub requirements: Vec<String>,
    pub types: TypeHierarchy,
    pub constants: Vec<TypedName>,
    pub predicates: Vec<PredicateDecl>,
    pub schemas: Vec<ActionSchema>,
}

impl DomainModel {
    pub fn predicate(&self, name: &str) -> Option<&PredicateDecl> {
        self.predicates.iter().find(|p| p.name == name)
    }

    pub fn schema(&self, name: &str) -> Option<&ActionSchema> {
        self.schemas.iter().find(|s| s.name == name)
    }

    /// Predicates that no schema adds or deletes.
    pub fn static_predicates(&self) -> BTreeSet<String> {
        let fluent: BTreeSet<&str> = self
            .schemas
            .iter()
            .flat_map(|s| s.add_effects.iter().chain(&s.del_effects))
            .map(|l| l.predicate.as_str())
            .collect();
        self.predicates
            .iter()
            .filter(|p| !fluent.contains(p.name.as_str()))
            .map(|p| p.name.clone())
            .collect()
    }

    pub fn to_pddl(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "(define (domain {})", self.name);
        if !self.requirements.is_empty() {
            let _ = writeln!(out, "  (:requirements {})", self.requirements.join(" "));
        }
        if !self.types.declared().is_empty() {
            out.push_str("  (:types");
            for (name, parent) in self.types.declared() {
                let _ = write!(out, " {name} - {parent}");
            }
            out.push_str(")\n");
        }
        if !self.constants.is_empty() {
            let _ = writeln!(out, "  (:constants {})", typed_list(&self.constants));
        }
        out.push_str("  (:predicates");
        for p in &self.predicates {
            if p.params.is_empty() {
                let _ = write!(out, " ({})", p.name);
            } else {
                let _ = write!(out, " ({} {})", p.name, typed_vars(&p.params));
            }
        }
        out.push_str(")\n");
        for s in &self.schemas {
            let _ = writeln!(out, "  (:action {}", s.name);
            let _ = writeln!(out, "    :parameters ({})", typed_vars(&s.parameters));
            let pre: Vec<String> = s.precondition.iter().map(literal_pddl).collect();
            let _ = writeln!(out, "    :precondition (and {})", pre.join(" "));
            let eff: Vec<String> = s
                .add_effects
                .iter()
                .map(literal_pddl)
                .chain(s.del_effects.iter().map(|l| format!("(not {})", literal_pddl(l))))
                .collect();
            let _ = writeln!(out, "    :effect (and {}))", eff.join(" "));
        }
        out.push_str(")\n");
        out
    }
}

fn typed_list(items: &[TypedName]) -> String {
    items
        .iter()
        .map(|t| format!("{} - {}", t.name, t.ty))
        .collect::<Vec<_>>()
        .join(" ")
}

fn typed_vars(items: &[TypedName]) -> String {
    items
        .iter()
        .map(|t| format!("?{} - {}", t.name, t.ty))
        .collect::<Vec<_>>()
        .join(" ")
}

fn literal_pddl(l: &Literal) -> String {
    let mut s = format!("({}", l.predicate);
    for t in &l.args {
        let _ = write!(s, " {t}");
    }
    s.push(')');
    s
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceModel {
    pub name: String,
    pub domain_name: String,
    pub objects: Vec<TypedName>,
    pub init: Vec<GroundAtom>,
    pub goal: Vec<GroundAtom>,
}

impl InstanceModel {
    pub fn to_pddl(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "(define (problem {})", self.name);
        let _ = writeln!(out, "  (:domain {})", self.domain_name);
        let _ = writeln!(out, "  (:objects {})", typed_list(&self.objects));
        out.push_str("  (:init");
        for a in &self.init {
            let _ = write!(out, "\n    {}", a.to_pddl());
        }
        out.push_str(")\n  (:goal (and");
        for a in &self.goal {
            let _ = write!(out, "\n    {}", a.to_pddl());
        }
        out.push_str(")))\n");
        out
    }

    /// Objects grouped by declared type name.
    pub fn objects_by_type(&self) -> BTreeMap<&str, Vec<&str>> {
        let mut map: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for o in &self.objects {
            map.entry(o.ty.as_str()).or_default().push(o.name.as_str());
        }
        map
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subtype_walk() {
        let mut h = TypeHierarchy::default();
        h.declare("locatable", "object");
        h.declare("man", "locatable");
        assert!(h.is_subtype("man", "locatable"));
        assert!(h.is_subtype("man", "object"));
        assert!(!h.is_subtype("locatable", "man"));
        assert!(h.contains("object"));
    }

    #[test]
    fn atom_order_is_predicate_then_args() {
        let mut atoms = [GroundAtom::new("at", ["b", "x"]),
            GroundAtom::new("adjacent", ["z", "a"]),
            GroundAtom::new("at", ["a", "y"])];
        atoms.sort();
        assert_eq!(atoms[0].predicate, "adjacent");
        assert_eq!(atoms[1].args, vec!["a", "y"]);
    }
}
