//! Width-bounded decompositions for classical planning.
//!
//! The crate grounds typed STRIPS PDDL, runs novelty-based searches (IW(k),
//! SIW), learns subgoal policies with a tabular actor-critic and executes
//! them with SIW^π(k).

pub mod pddl;
pub mod statespace;
pub mod width;
pub mod sketch;
pub mod policy;
pub mod executor;
pub mod generators;
pub mod bench;
