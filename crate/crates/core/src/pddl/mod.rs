//! Typed-STRIPS PDDL: parsing, grounding, and the unsatisfied-goal extension.

mod ground;
mod model;
mod parse;
mod sexpr;

use thiserror::Error;

pub use ground::{
    add_unsatisfied_goal_predicates, ground, ground_with, ActionId, AtomId, GroundAction, GroundOptions,
    GroundedTask, DEFAULT_ACTION_CAP,
};
pub use model::{
    ActionSchema, DomainModel, GroundAtom, InstanceModel, Literal, PredicateDecl, Term, TypeHierarchy, TypedName,
    ROOT_TYPE,
};
pub use parse::{parse_domain, parse_problem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PddlError {
    #[error("syntax error at {line}:{col} near `{token}`: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        token: String,
        msg: String,
    },
    #[error("unsupported PDDL feature `{0}`")]
    UnsupportedFeature(String),
    #[error("unknown type `{0}`")]
    UnknownType(String),
    #[error("object `{object}` has unknown type `{ty}`")]
    UnknownObjectType { object: String, ty: String },
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("predicate `{0}` declared twice")]
    DuplicatePredicate(String),
    #[error("predicate `{predicate}` expects {expected} arguments, found {found}")]
    ArityMismatch {
        predicate: String,
        expected: usize,
        found: usize,
    },
    #[error("variable `?{var}` in action `{schema}` is not a parameter")]
    UnboundVariable { schema: String, var: String },
    #[error("in `{atom}`: object `{object}` is not of type `{expected}`")]
    TypeMismatch {
        atom: String,
        object: String,
        expected: String,
    },
    #[error("problem targets domain `{found}`, expected `{expected}`")]
    DomainMismatch { expected: String, found: String },
    #[error("grounding exceeds the cap of {cap} actions")]
    GroundingExplosion { cap: usize },
}

/// Parses and grounds a domain/problem pair in one step.
pub fn load_task(domain_text: &str, problem_text: &str) -> Result<GroundedTask, PddlError> {
    let dom = parse_domain(domain_text)?;
    let inst = parse_problem(problem_text, &dom)?;
    ground(&dom, &inst)
}
