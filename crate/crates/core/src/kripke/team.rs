use std::fmt;

use smallvec::SmallVec;

const WORD: usize = 64;

/// A set of worlds, stored as a bitset over dense world indices.
///
/// All teams of one structure carry the same number of words, so equality and
/// hashing are purely set-based. Up to 256 worlds are stored inline.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Team {
    words: SmallVec<[u64; 4]>,
}

fn words_for(num_worlds: usize) -> usize {
    num_worlds.div_ceil(WORD).max(1)
}

impl Team {
    pub fn empty(num_worlds: usize) -> Team {
        Team {
            words: SmallVec::from_elem(0, words_for(num_worlds)),
        }
    }

    pub fn full(num_worlds: usize) -> Team {
        let mut t = Team::empty(num_worlds);
        for i in 0..num_worlds {
            t.insert(i);
        }
        t
    }

    pub fn from_indices(num_worlds: usize, indices: impl IntoIterator<Item = usize>) -> Team {
        let mut t = Team::empty(num_worlds);
        for i in indices {
            assert!(i < num_worlds, "world index {i} out of range");
            t.insert(i);
        }
        t
    }

    /// Team whose members are the set bits of `mask` (worlds `0..64`).
    pub fn from_mask(num_worlds: usize, mask: u64) -> Team {
        let mut t = Team::empty(num_worlds);
        t.words[0] = mask;
        t
    }

    /// The low 64 worlds as a bitmask.
    pub fn low_mask(&self) -> u64 {
        self.words[0]
    }

    /// Capacity in worlds (a multiple of 64).
    pub fn capacity(&self) -> usize {
        self.words.len() * WORD
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words
            .get(i / WORD)
            .is_some_and(|w| w & (1 << (i % WORD)) != 0)
    }

    /// Returns whether `i` was newly added.
    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        let w = &mut self.words[i / WORD];
        let bit = 1 << (i % WORD);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, i: usize) -> bool {
        let w = &mut self.words[i / WORD];
        let bit = 1 << (i % WORD);
        let present = *w & bit != 0;
        *w &= !bit;
        present
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD + b)
                }
            })
        })
    }

    pub fn union_with(&mut self, other: &Team) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &Team) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &Team) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &Team) -> Team {
        let mut t = self.clone();
        t.union_with(other);
        t
    }

    pub fn intersection(&self, other: &Team) -> Team {
        let mut t = self.clone();
        t.intersect_with(other);
        t
    }

    pub fn difference(&self, other: &Team) -> Team {
        let mut t = self.clone();
        t.difference_with(other);
        t
    }

    pub fn is_subset(&self, other: &Team) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &Team) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }
}

impl fmt::Debug for Team {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_set_operations() {
        let a = Team::from_indices(130, [0, 5, 64, 129]);
        let b = Team::from_indices(130, [5, 129]);
        assert_eq!(a.len(), 4);
        assert!(b.is_subset(&a));
        assert!(!a.is_subset(&b));
        assert_eq!(a.difference(&b).iter().collect::<Vec<_>>(), vec![0, 64]);
        assert_eq!(a.intersection(&b), b);
        assert!(a.intersects(&b));
        assert!(Team::empty(130).is_empty());
        assert_eq!(Team::full(3).low_mask(), 0b111);
        assert_eq!(format!("{:?}", b), "{5, 129}");
    }

    #[test]
    fn insert_remove_report_changes() {
        let mut t = Team::empty(10);
        assert!(t.insert(3));
        assert!(!t.insert(3));
        assert!(t.remove(3));
        assert!(!t.remove(3));
        assert!(!t.contains(300));
    }
}
