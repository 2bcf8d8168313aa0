//! Kripke structures, teams, and the two successor operations the team
//! semantics is built on.

mod io;
mod team;

use std::collections::{BTreeMap, BTreeSet, HashMap};

pub use io::{load_structure, save_structure, team_from_names, team_names};
pub use team::Team;

use crate::formula::Prop;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("a structure needs at least one world")]
    NoWorlds,
    #[error("duplicate world {0:?}")]
    DuplicateWorld(String),
    #[error("unknown world {name:?} in `{key}`")]
    UnknownWorld { key: String, name: String },
    #[error("world index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("expected labels for {expected} worlds, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("invalid proposition {name:?} in `{key}`")]
    InvalidProposition { key: String, name: String },
    #[error("malformed structure document: {0}")]
    Malformed(String),
}

/// A finite Kripke structure `(S, R, π)` with worlds indexed `0..|S|`.
#[derive(Clone, Debug)]
pub struct KripkeStructure {
    worlds: Vec<String>,
    index: HashMap<String, usize>,
    successors: Vec<Vec<usize>>,
    successor_sets: Vec<Team>,
    labels: Vec<BTreeSet<Prop>>,
    labeled: BTreeMap<Prop, Team>,
}

impl PartialEq for KripkeStructure {
    fn eq(&self, other: &Self) -> bool {
        self.worlds == other.worlds
            && self.successors == other.successors
            && self.labels == other.labels
    }
}

impl Eq for KripkeStructure {}

impl KripkeStructure {
    pub fn new(
        worlds: Vec<String>,
        relation: impl IntoIterator<Item = (usize, usize)>,
        labels: Vec<BTreeSet<Prop>>,
    ) -> Result<Self, StructureError> {
        let n = worlds.len();
        if n == 0 {
            return Err(StructureError::NoWorlds);
        }
        if labels.len() != n {
            return Err(StructureError::LabelCount {
                expected: n,
                got: labels.len(),
            });
        }
        let mut index = HashMap::with_capacity(n);
        for (i, w) in worlds.iter().enumerate() {
            if index.insert(w.clone(), i).is_some() {
                return Err(StructureError::DuplicateWorld(w.clone()));
            }
        }
        let mut successor_sets = vec![Team::empty(n); n];
        for (a, b) in relation {
            if a >= n {
                return Err(StructureError::IndexOutOfRange(a));
            }
            if b >= n {
                return Err(StructureError::IndexOutOfRange(b));
            }
            successor_sets[a].insert(b);
        }
        let successors = successor_sets.iter().map(|t| t.iter().collect()).collect();
        let mut labeled: BTreeMap<Prop, Team> = BTreeMap::new();
        for (i, set) in labels.iter().enumerate() {
            for p in set {
                labeled
                    .entry(p.clone())
                    .or_insert_with(|| Team::empty(n))
                    .insert(i);
            }
        }
        Ok(KripkeStructure {
            worlds,
            index,
            successors,
            successor_sets,
            labels,
            labeled,
        })
    }

    pub fn num_worlds(&self) -> usize {
        self.worlds.len()
    }

    pub fn world_names(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_name(&self, i: usize) -> &str {
        &self.worlds[i]
    }

    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn successors(&self, s: usize) -> &[usize] {
        &self.successors[s]
    }

    pub fn successor_set(&self, s: usize) -> &Team {
        &self.successor_sets[s]
    }

    /// All edges, ordered by source then target index.
    pub fn relation(&self) -> Vec<(usize, usize)> {
        self.successors
            .iter()
            .enumerate()
            .flat_map(|(a, succ)| succ.iter().map(move |&b| (a, b)))
            .collect()
    }

    pub fn num_edges(&self) -> usize {
        self.successors.iter().map(Vec::len).sum()
    }

    pub fn labels(&self, s: usize) -> &BTreeSet<Prop> {
        &self.labels[s]
    }

    pub fn has_label(&self, s: usize, p: &Prop) -> bool {
        self.labels[s].contains(p)
    }

    /// Worlds labeled with `p`, `None` when no world carries it.
    pub fn worlds_labeled(&self, p: &Prop) -> Option<&Team> {
        self.labeled.get(p)
    }

    /// Worlds labeled with `p` as an owned team (empty when unused).
    pub fn label_team(&self, p: &Prop) -> Team {
        self.labeled
            .get(p)
            .cloned()
            .unwrap_or_else(|| self.empty_team())
    }

    /// Propositions that label at least one world.
    pub fn propositions(&self) -> impl Iterator<Item = &Prop> {
        self.labeled.keys()
    }

    pub fn empty_team(&self) -> Team {
        Team::empty(self.num_worlds())
    }

    pub fn full_team(&self) -> Team {
        Team::full(self.num_worlds())
    }

    pub fn team(&self, indices: impl IntoIterator<Item = usize>) -> Team {
        Team::from_indices(self.num_worlds(), indices)
    }

    /// Whether `t` is a team of this structure (right word count, no member
    /// beyond the last world).
    pub fn is_valid_team(&self, t: &Team) -> bool {
        let n = self.num_worlds();
        t.capacity() == Team::empty(n).capacity() && t.iter().all(|i| i < n)
    }

    /// All `R`-successors of members of `t`.
    pub fn image(&self, t: &Team) -> Team {
        let mut out = self.empty_team();
        for s in t.iter() {
            out.union_with(&self.successor_sets[s]);
        }
        out
    }

    /// Whether every member of `t` has an `R`-successor in `next`.
    pub fn successor_covers(&self, t: &Team, next: &Team) -> bool {
        t.iter().all(|s| self.successor_sets[s].intersects(next))
    }
}

/// Incremental construction by world name.
#[derive(Clone, Debug, Default)]
pub struct KripkeBuilder {
    worlds: Vec<String>,
    edges: Vec<(usize, usize)>,
    labels: Vec<BTreeSet<Prop>>,
    index: HashMap<String, usize>,
}

impl KripkeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a world (or returns the existing index) and extends its labels.
    pub fn world<I, P>(&mut self, name: &str, labels: I) -> usize
    where
        I: IntoIterator<Item = P>,
        P: AsRef<str>,
    {
        let i = match self.index.get(name) {
            Some(&i) => i,
            None => {
                let i = self.worlds.len();
                self.worlds.push(name.to_string());
                self.labels.push(BTreeSet::new());
                self.index.insert(name.to_string(), i);
                i
            }
        };
        for p in labels {
            self.labels[i].insert(Prop::new(p.as_ref()).expect("valid proposition name"));
        }
        i
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn edge(&mut self, from: &str, to: &str) {
        let a = self.world(from, std::iter::empty::<&str>());
        let b = self.world(to, std::iter::empty::<&str>());
        self.edges.push((a, b));
    }

    pub fn build(self) -> Result<KripkeStructure, StructureError> {
        KripkeStructure::new(self.worlds, self.edges, self.labels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_cycle() -> KripkeStructure {
        let mut b = KripkeBuilder::new();
        b.edge("a", "b");
        b.edge("b", "a");
        b.build().unwrap()
    }

    /// Fragment of the diamond reduction: clause world c with the single edge
    /// to s1 (positive occurrence), s0 present but unreachable.
    fn clause_fragment() -> KripkeStructure {
        let mut b = KripkeBuilder::new();
        b.world("c_i", std::iter::empty::<&str>());
        b.world("s_j^0", ["p_j"]);
        b.world("s_j^1", ["p_j", "q"]);
        b.edge("c_i", "s_j^1");
        b.build().unwrap()
    }

    #[test]
    fn image_examples() {
        let w = clause_fragment();
        assert_eq!(w.image(&w.empty_team()), w.empty_team());
        assert_eq!(w.image(&w.team([0])), w.team([2]));
        let w = two_cycle();
        assert_eq!(w.image(&w.full_team()), w.full_team());
    }

    #[test]
    fn successor_cover_examples() {
        let w = clause_fragment();
        assert!(w.successor_covers(&w.empty_team(), &w.empty_team()));
        assert!(w.successor_covers(&w.team([0]), &w.team([2])));
        assert!(!w.successor_covers(&w.team([0]), &w.team([1])));
        // s_j^1 has no successors at all
        assert!(!w.successor_covers(&w.team([2]), &w.full_team()));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(
            KripkeStructure::new(vec![], vec![], vec![]),
            Err(StructureError::NoWorlds)
        );
        assert_eq!(
            KripkeStructure::new(
                vec!["a".into(), "a".into()],
                vec![],
                vec![BTreeSet::new(), BTreeSet::new()]
            ),
            Err(StructureError::DuplicateWorld("a".into()))
        );
        assert_eq!(
            KripkeStructure::new(vec!["a".into()], vec![(0, 1)], vec![BTreeSet::new()]),
            Err(StructureError::IndexOutOfRange(1))
        );
    }

    #[test]
    fn image_distributes_over_union_exhaustively() {
        // every relation on 3 worlds, every pair of teams
        for rel in 0u32..512 {
            let edges: Vec<_> = (0..9)
                .filter(|b| rel & (1 << b) != 0)
                .map(|b| (b / 3, b % 3))
                .collect();
            let w = KripkeStructure::new(
                vec!["a".into(), "b".into(), "c".into()],
                edges,
                vec![BTreeSet::new(); 3],
            )
            .unwrap();
            for m1 in 0..8u64 {
                let t1 = Team::from_mask(3, m1);
                let all_have_succ = t1.iter().all(|s| !w.successors(s).is_empty());
                assert_eq!(w.successor_covers(&t1, &w.image(&t1)), all_have_succ);
                for m2 in 0..8u64 {
                    let t2 = Team::from_mask(3, m2);
                    assert_eq!(w.image(&t1.union(&t2)), w.image(&t1).union(&w.image(&t2)));
                }
            }
        }
    }
}
