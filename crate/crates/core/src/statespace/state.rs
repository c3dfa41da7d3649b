use std::fmt;

use serde::{Deserialize, Serialize};

use crate::pddl::{AtomId, GroundedTask};

/// A state: the sorted, duplicate-free set of true (dynamic) atom indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct State(Box<[AtomId]>);

impl State {
    pub fn from_atoms(atoms: impl IntoIterator<Item = AtomId>) -> Self {
        let mut v: Vec<AtomId> = atoms.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        State(v.into_boxed_slice())
    }

    /// Wraps an already sorted, deduplicated vector.
    pub(crate) fn from_sorted(v: Vec<AtomId>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        State(v.into_boxed_slice())
    }

    pub fn empty() -> Self {
        State(Box::new([]))
    }

    pub fn atoms(&self) -> &[AtomId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, atom: AtomId) -> bool {
        self.0.binary_search(&atom).is_ok()
    }

    /// True when every atom of `sorted` is in the state.
    pub fn contains_all(&self, sorted: &[AtomId]) -> bool {
        let mut it = self.0.iter();
        'outer: for a in sorted {
            for b in it.by_ref() {
                if b == a {
                    continue 'outer;
                }
                if b > a {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn display<'a>(&'a self, task: &'a GroundedTask) -> impl fmt::Display + 'a {
        struct D<'a>(&'a State, &'a GroundedTask);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("{")?;
                for (i, a) in self.0.atoms().iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", self.1.atom(*a))?;
                }
                f.write_str("}")
            }
        }
        D(self, task)
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let a = State::from_atoms([5, 1, 3, 1]);
        let b = State::from_atoms([1, 3, 5]);
        assert_eq!(a, b);
        assert_eq!(a.atoms(), &[1, 3, 5]);
        assert!(a.contains_all(&[1, 5]));
        assert!(!a.contains_all(&[1, 4]));
        assert!(a.contains_all(&[]));
        assert!(!State::empty().contains_all(&[0]));
    }
}
