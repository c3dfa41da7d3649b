use crate::pddl::AtomId;
use crate::statespace::State;

/// Atom tuples of size 1..=k seen during one IW run, stored as bitsets over
/// single atoms and sorted atom pairs.
#[derive(Debug, Clone)]
pub struct NoveltyTable {
    k: usize,
    num_atoms: usize,
    singles: Vec<u64>,
    pairs: Vec<u64>,
}

#[inline]
fn test_and_set(bits: &mut [u64], i: usize) -> bool {
    let (w, b) = (i / 64, i % 64);
    let mask = 1u64 << b;
    let was = bits[w] & mask != 0;
    bits[w] |= mask;
    !was
}

impl NoveltyTable {
    /// Panics when `k` is not 1 or 2.
    pub fn new(k: usize, num_atoms: usize) -> Self {
        assert!((1..=2).contains(&k), "novelty tables support k = 1 or 2, got {k}");
        let pair_bits = if k == 2 { num_atoms * num_atoms.saturating_sub(1) / 2 } else { 0 };
        Self {
            k,
            num_atoms,
            singles: vec![0; num_atoms.div_ceil(64)],
            pairs: vec![0; pair_bits.div_ceil(64)],
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    fn pair_index(&self, a: AtomId, b: AtomId) -> usize {
        // a < b; row-major upper triangle
        let (a, b, n) = (a as usize, b as usize, self.num_atoms);
        a * (2 * n - a - 1) / 2 + (b - a - 1)
    }

    /// Records every tuple of up to `k` atoms of `s`; returns whether any of
    /// them was unseen.
    pub fn check_and_record(&mut self, s: &State) -> bool {
        let atoms = s.atoms();
        let mut novel = false;
        for &a in atoms {
            novel |= test_and_set(&mut self.singles, a as usize);
        }
        if self.k == 2 {
            for (i, &a) in atoms.iter().enumerate() {
                for &b in &atoms[i + 1..] {
                    let idx = self.pair_index(a, b);
                    novel |= test_and_set(&mut self.pairs, idx);
                }
            }
        }
        novel
    }

    /// Whether the sorted tuple has been recorded.
    pub fn seen(&self, tuple: &[AtomId]) -> bool {
        let get = |bits: &[u64], i: usize| bits[i / 64] & (1u64 << (i % 64)) != 0;
        match *tuple {
            [a] => get(&self.singles, a as usize),
            [a, b] if self.k == 2 && a < b => get(&self.pairs, self.pair_index(a, b)),
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force reference: a state is novel iff one of its tuples of size
    /// <= k is absent from every previously checked state.
    fn brute_force_novel(history: &[Vec<u32>], s: &[u32], k: usize) -> bool {
        let mut tuples: Vec<Vec<u32>> = s.iter().map(|&a| vec![a]).collect();
        if k == 2 {
            for i in 0..s.len() {
                for j in i + 1..s.len() {
                    tuples.push(vec![s[i], s[j]]);
                }
            }
        }
        tuples
            .iter()
            .any(|t| !history.iter().any(|h| t.iter().all(|x| h.contains(x))))
    }

    #[test]
    fn empty_table_reports_novel() {
        let mut t = NoveltyTable::new(1, 4);
        assert!(t.check_and_record(&State::from_atoms([2])));
        assert!(t.seen(&[2]));
    }

    #[test]
    fn width_one_subset_of_union_is_not_novel() {
        let mut t = NoveltyTable::new(1, 5);
        assert!(t.check_and_record(&State::from_atoms([0, 1])));
        assert!(t.check_and_record(&State::from_atoms([2, 3])));
        assert!(!t.check_and_record(&State::from_atoms([0, 3])));
    }

    #[test]
    fn width_two_detects_unseen_pair() {
        // every atom seen singly, pair (0, 2) never together
        let history = vec![vec![0, 1], vec![1, 2]];
        let probe = vec![0, 1, 2];
        assert!(brute_force_novel(&history, &probe, 2));
        assert!(!brute_force_novel(&history, &probe, 1));

        let mut t = NoveltyTable::new(2, 3);
        for h in &history {
            t.check_and_record(&State::from_atoms(h.iter().copied()));
        }
        let mut t1 = NoveltyTable::new(1, 3);
        for h in &history {
            t1.check_and_record(&State::from_atoms(h.iter().copied()));
        }
        assert!(t.check_and_record(&State::from_atoms(probe.iter().copied())));
        assert!(!t1.check_and_record(&State::from_atoms(probe.iter().copied())));
        assert!(t.seen(&[0, 2]));
    }

    #[test]
    fn matches_brute_force_on_random_sequences() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for k in 1..=2 {
            for _ in 0..50 {
                let n = rng.gen_range(1..8u32);
                let mut table = NoveltyTable::new(k, n as usize);
                let mut history: Vec<Vec<u32>> = Vec::new();
                for _ in 0..12 {
                    let s: Vec<u32> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
                    let expected = brute_force_novel(&history, &s, k);
                    assert_eq!(table.check_and_record(&State::from_atoms(s.clone())), expected);
                    history.push(s);
                }
            }
        }
    }
}
