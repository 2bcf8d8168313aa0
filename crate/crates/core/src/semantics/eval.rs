use rustc_hash::{FxHashMap, FxHashSet};

use super::{certificate::Certificate, dep_holds};
use crate::formula::{DagNode, FormulaDag, NodeId};
use crate::kripke::{KripkeStructure, Team};

/// Structures up to this many worlds use a flat memo table.
const DENSE_MAX_WORLDS: usize = 12;
const DENSE_MAX_ENTRIES: usize = 1 << 26;
/// Cap on remembered dead-end splits per search.
const FAILED_SPLITS_MAX: usize = 1 << 20;

enum Memo {
    /// `table[node << n | mask]`: 0 unknown, 1 false, 2 true.
    Dense {
        n: usize,
        table: Vec<u8>,
    },
    Sparse(FxHashMap<(NodeId, Team), bool>),
}

impl Memo {
    fn new(n: usize, nodes: usize) -> Memo {
        if n <= DENSE_MAX_WORLDS && nodes.saturating_mul(1 << n) <= DENSE_MAX_ENTRIES {
            Memo::Dense {
                n,
                table: vec![0; nodes << n],
            }
        } else {
            Memo::Sparse(FxHashMap::default())
        }
    }

    #[inline]
    fn get(&self, id: NodeId, t: &Team) -> Option<bool> {
        match self {
            Memo::Dense { n, table } => match table[id.index() << n | t.low_mask() as usize] {
                0 => None,
                v => Some(v == 2),
            },
            Memo::Sparse(map) => map.get(&(id, t.clone())).copied(),
        }
    }

    #[inline]
    fn put(&mut self, id: NodeId, t: &Team, v: bool) {
        match self {
            Memo::Dense { n, table } => {
                table[id.index() << *n | t.low_mask() as usize] = 1 + v as u8
            }
            Memo::Sparse(map) => {
                map.insert((id, t.clone()), v);
            }
        }
    }
}

/// Memoizing backtracking evaluator for one structure and one formula graph.
///
/// The memo is keyed by `(node, team)` and survives across calls, so checking
/// many formulas that share subformulas costs little more than the largest.
///
/// Split disjunctions are decided by assigning the team's worlds one by one to
/// an operand of the flattened chain, abandoning a branch once the growing
/// part falsifies its operand. A diamond walks the worlds of the team and
/// gives each one not yet covered a successor, again abandoning a branch once
/// the growing successor team falsifies the operand. Both prunings are sound
/// because satisfaction is closed under subteams.
pub struct Evaluator<'a> {
    w: &'a KripkeStructure,
    dag: &'a FormulaDag,
    labels: Vec<Team>,
    memo: Memo,
    explored: u64,
}

impl<'a> Evaluator<'a> {
    pub fn new(w: &'a KripkeStructure, dag: &'a FormulaDag) -> Self {
        Evaluator {
            w,
            dag,
            labels: dag.props().iter().map(|p| w.label_team(p)).collect(),
            memo: Memo::new(w.num_worlds(), dag.len()),
            explored: 0,
        }
    }

    pub fn structure(&self) -> &'a KripkeStructure {
        self.w
    }

    pub fn dag(&self) -> &'a FormulaDag {
        self.dag
    }

    /// Number of `(node, team)` pairs evaluated so far (memo misses).
    pub fn nodes_explored(&self) -> u64 {
        self.explored
    }

    pub fn holds(&mut self, id: NodeId, t: &Team) -> bool {
        debug_assert!(self.w.is_valid_team(t));
        if let Some(v) = self.memo.get(id, t) {
            return v;
        }
        self.explored += 1;
        let v = match self.dag.node(id) {
            DagNode::Top => true,
            DagNode::Bot | DagNode::NegDep(..) => t.is_empty(),
            DagNode::Atom(p) => t.is_subset(&self.labels[p.index()]),
            DagNode::NegAtom(p) => !t.intersects(&self.labels[p.index()]),
            DagNode::Dep(dets, target) => {
                let dets: Vec<&Team> = dets.iter().map(|p| &self.labels[p.index()]).collect();
                dep_holds(t, &dets, &self.labels[target.index()])
            }
            &DagNode::And(a, b) => self.holds(a, t) && self.holds(b, t),
            &DagNode::ClassicalOr(a, b) => self.holds(a, t) || self.holds(b, t),
            &DagNode::Box(a) => {
                let img = self.w.image(t);
                self.holds(a, &img)
            }
            &DagNode::Diamond(a) => self.find_successor_team(a, t).is_some(),
            DagNode::SplitOr(..) => self.find_split(id, t).is_some(),
        };
        self.memo.put(id, t, v);
        v
    }

    /// Parts of `t`, one per operand of the `|` chain at `id`, each
    /// satisfying its operand. Parts are pairwise disjoint.
    pub fn find_split(&mut self, id: NodeId, t: &Team) -> Option<Vec<Team>> {
        let ops = self.dag.disjuncts(id);
        let mut pending: Vec<usize> = t.iter().collect();
        let mut parts = vec![self.w.empty_team(); ops.len()];
        let mut failed = FxHashSet::default();
        self.split_dfs(ops, &mut pending, &mut parts, &mut failed)
            .then_some(parts)
    }

    /// Places the most constrained pending world first. `failed` holds
    /// partial splits already known not to extend.
    fn split_dfs(
        &mut self,
        ops: &[NodeId],
        pending: &mut Vec<usize>,
        parts: &mut [Team],
        failed: &mut FxHashSet<Vec<Team>>,
    ) -> bool {
        if pending.is_empty() {
            // non-empty parts were checked when their last world arrived
            return (0..ops.len()).all(|j| !parts[j].is_empty() || self.holds(ops[j], &parts[j]));
        }
        if failed.contains(parts) {
            return false;
        }
        let mut best: Option<(usize, Vec<usize>)> = None;
        for (i, &s) in pending.iter().enumerate() {
            let mut options = Vec::new();
            for j in 0..ops.len() {
                // an operand repeated with an equally empty part is the same branch
                if parts[j].is_empty() && (0..j).any(|k| ops[k] == ops[j] && parts[k].is_empty()) {
                    continue;
                }
                parts[j].insert(s);
                if self.holds(ops[j], &parts[j]) {
                    options.push(j);
                }
                parts[j].remove(s);
            }
            if best.as_ref().is_none_or(|(_, b)| options.len() < b.len()) {
                let done = options.len() <= 1;
                best = Some((i, options));
                if done {
                    break;
                }
            }
        }
        let (i, options) = best.expect("pending is non-empty");
        let s = pending.swap_remove(i);
        for j in options {
            parts[j].insert(s);
            let found = self.split_dfs(ops, pending, parts, failed);
            parts[j].remove(s);
            if found {
                parts[j].insert(s);
                return true;
            }
        }
        pending.push(s);
        let last = pending.len() - 1;
        pending.swap(i, last);
        if failed.len() < FAILED_SPLITS_MAX {
            failed.insert(parts.to_vec());
        }
        false
    }

    /// A team `T'` within the image of `t` that covers every world of `t` and
    /// satisfies `child`.
    pub fn find_successor_team(&mut self, child: NodeId, t: &Team) -> Option<Team> {
        let worlds: Vec<usize> = t.iter().collect();
        let mut next = self.w.empty_team();
        self.diamond_dfs(child, &worlds, &mut next).then_some(next)
    }

    fn diamond_dfs(&mut self, child: NodeId, worlds: &[usize], next: &mut Team) -> bool {
        let w = self.w;
        let pending = worlds
            .iter()
            .position(|&s| !w.successor_set(s).intersects(next));
        let Some(i) = pending else {
            return self.holds(child, next);
        };
        let rest = &worlds[i + 1..];
        for &u in w.successors(worlds[i]) {
            next.insert(u);
            if self.holds(child, next) && self.diamond_dfs(child, rest, next) {
                return true;
            }
            next.remove(u);
        }
        false
    }

    /// Witness for `holds(id, t)`, or `None` when it fails.
    pub fn certificate(&mut self, id: NodeId, t: &Team) -> Option<Certificate> {
        if !self.holds(id, t) {
            return None;
        }
        Some(self.build(id, t.clone()))
    }

    fn build(&mut self, id: NodeId, team: Team) -> Certificate {
        match *self.dag.node(id) {
            DagNode::Top
            | DagNode::Bot
            | DagNode::Atom(_)
            | DagNode::NegAtom(_)
            | DagNode::Dep(..)
            | DagNode::NegDep(..) => Certificate::Leaf { team },
            DagNode::And(a, b) => Certificate::And {
                left: Box::new(self.build(a, team.clone())),
                right: Box::new(self.build(b, team.clone())),
                team,
            },
            DagNode::ClassicalOr(a, b) => {
                let (left, chosen) = if self.holds(a, &team) {
                    (true, a)
                } else {
                    (false, b)
                };
                Certificate::ClassicalOr {
                    left,
                    child: Box::new(self.build(chosen, team.clone())),
                    team,
                }
            }
            DagNode::Box(a) => Certificate::Box {
                child: Box::new(self.build(a, self.w.image(&team))),
                team,
            },
            DagNode::Diamond(a) => {
                let next = self
                    .find_successor_team(a, &team)
                    .expect("diamond holds, so a successor team exists");
                Certificate::Diamond {
                    child: Box::new(self.build(a, next.clone())),
                    successor: next,
                    team,
                }
            }
            DagNode::SplitOr(..) => {
                let parts = self
                    .find_split(id, &team)
                    .expect("split holds, so a split exists");
                self.build_chain(id, &parts)
            }
        }
    }

    /// Rebuilds the binary shape of a `|` chain from the flat parts.
    fn build_chain(&mut self, id: NodeId, parts: &[Team]) -> Certificate {
        let DagNode::SplitOr(a, b) = *self.dag.node(id) else {
            return self.build(id, parts[0].clone());
        };
        let width = |n: NodeId| self.dag.disjuncts(n).len().max(1);
        let (lp, rp) = parts.split_at(width(a));
        let left = self.build_chain(a, lp);
        let right = self.build_chain(b, rp);
        Certificate::SplitOr {
            team: left.team().union(right.team()),
            left: Box::new(left),
            right: Box::new(right),
        }
    }
}
