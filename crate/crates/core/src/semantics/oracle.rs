//! Brute-force reference semantics.
//!
//! Teams are plain `u64` masks and every clause is evaluated literally: a
//! split ranges over all covers `T1 ∪ T2 = T` (overlap allowed) and a diamond
//! over all `T' ⊆ S`. Nothing relies on downward closure or the empty-team
//! property. The atom clauses are reimplemented here on masks rather than
//! shared with the evaluator.

use crate::formula::{DagNode, Formula, FormulaDag, NodeId, Prop};
use crate::kripke::{KripkeStructure, Team};

pub const DEFAULT_ORACLE_MAX_WORLDS: usize = 12;

/// Largest structure [`SatTable`] handles: all `2^n` teams fit one `u64`.
pub const TABLE_MAX_WORLDS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("oracle scale exceeded: {worlds} worlds, bound {bound}")]
pub struct OracleError {
    pub worlds: usize,
    pub bound: usize,
}

struct Masks {
    n: usize,
    succ: Vec<u64>,
}

impl Masks {
    fn new(w: &KripkeStructure) -> Masks {
        Masks {
            n: w.num_worlds(),
            succ: (0..w.num_worlds())
                .map(|s| w.successor_set(s).low_mask())
                .collect(),
        }
    }

    fn image(&self, t: u64) -> u64 {
        bits(t).fold(0, |acc, s| acc | self.succ[s])
    }

    fn covers(&self, t: u64, next: u64) -> bool {
        bits(t).all(|s| self.succ[s] & next != 0)
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            b
        })
    })
}

fn label_mask(w: &KripkeStructure, p: &Prop) -> u64 {
    (0..w.num_worlds())
        .filter(|&s| w.has_label(s, p))
        .fold(0, |m, s| m | 1 << s)
}

/// Pairwise reading of the dependence clause.
fn dep_mask(t: u64, dets: &[u64], target: u64) -> bool {
    bits(t).all(|a| {
        bits(t).all(|b| {
            let agree = dets.iter().all(|d| (d >> a) & 1 == (d >> b) & 1);
            !agree || (target >> a) & 1 == (target >> b) & 1
        })
    })
}

fn leaf(t: u64, node: &Formula, w: &KripkeStructure) -> bool {
    match node {
        Formula::Top => true,
        Formula::Bot | Formula::NegDep(_) => t == 0,
        Formula::Atom(p) => t & !label_mask(w, p) == 0,
        Formula::NegAtom(p) => t & label_mask(w, p) == 0,
        Formula::Dep(d) => {
            let dets: Vec<u64> = d.determiners.iter().map(|p| label_mask(w, p)).collect();
            dep_mask(t, &dets, label_mask(w, &d.target))
        }
        _ => unreachable!("compound formula"),
    }
}

fn sat(m: &Masks, w: &KripkeStructure, t: u64, phi: &Formula) -> bool {
    match phi {
        Formula::And(l, r) => sat(m, w, t, l) && sat(m, w, t, r),
        Formula::ClassicalOr(l, r) => sat(m, w, t, l) || sat(m, w, t, r),
        Formula::SplitOr(l, r) => {
            // T1 ranges over subsets of T; T2 must contain T \ T1 plus any
            // part of T1
            let mut t1 = t;
            loop {
                let mut extra = t1;
                loop {
                    let t2 = (t & !t1) | extra;
                    if sat(m, w, t1, l) && sat(m, w, t2, r) {
                        return true;
                    }
                    if extra == 0 {
                        break;
                    }
                    extra = (extra - 1) & t1;
                }
                if t1 == 0 {
                    return false;
                }
                t1 = (t1 - 1) & t;
            }
        }
        Formula::Box(f) => sat(m, w, m.image(t), f),
        Formula::Diamond(f) => (0..1u64 << m.n).any(|next| m.covers(t, next) && sat(m, w, next, f)),
        atomic => leaf(t, atomic, w),
    }
}

/// Literal evaluation of the satisfaction clauses, refusing structures above
/// `max_worlds`.
pub fn oracle_check_bounded(
    w: &KripkeStructure,
    t: &Team,
    phi: &Formula,
    max_worlds: usize,
) -> Result<bool, OracleError> {
    let n = w.num_worlds();
    if n > max_worlds.min(63) {
        return Err(OracleError {
            worlds: n,
            bound: max_worlds,
        });
    }
    Ok(sat(&Masks::new(w), w, t.low_mask(), phi))
}

pub fn oracle_check(w: &KripkeStructure, t: &Team, phi: &Formula) -> Result<bool, OracleError> {
    oracle_check_bounded(w, t, phi, DEFAULT_ORACLE_MAX_WORLDS)
}

/// For every node of a formula graph, the set of all satisfying teams of a
/// small structure, as a mask over team masks.
///
/// Built bottom-up from the same literal clauses as [`oracle_check`]: a split
/// collects `T1 ∪ T2` over all satisfying pairs, a diamond tests every
/// satisfying `T'` for coverage.
pub struct SatTable {
    sat: Vec<u64>,
}

impl SatTable {
    pub fn build(w: &KripkeStructure, dag: &FormulaDag) -> Result<SatTable, OracleError> {
        let n = w.num_worlds();
        if n > TABLE_MAX_WORLDS {
            return Err(OracleError {
                worlds: n,
                bound: TABLE_MAX_WORLDS,
            });
        }
        let m = Masks::new(w);
        let teams = 1u64 << n;
        let all_teams = if teams == 64 {
            u64::MAX
        } else {
            (1 << teams) - 1
        };
        let props: Vec<u64> = dag.props().iter().map(|p| label_mask(w, p)).collect();
        let images: Vec<u64> = (0..teams).map(|t| m.image(t)).collect();
        // cover[t] = set of T' covering t
        let cover: Vec<u64> = (0..teams)
            .map(|t| {
                (0..teams)
                    .filter(|&x| m.covers(t, x))
                    .fold(0, |a, x| a | 1 << x)
            })
            .collect();
        let by_team =
            |f: &dyn Fn(u64) -> bool| (0..teams).filter(|&t| f(t)).fold(0, |a, t| a | 1 << t);

        let mut sat: Vec<u64> = Vec::with_capacity(dag.len());
        for i in 0..dag.len() {
            let s = match dag.node(NodeId(i as u32)) {
                DagNode::Top => all_teams,
                DagNode::Bot | DagNode::NegDep(..) => 1,
                DagNode::Atom(p) => by_team(&|t| t & !props[p.index()] == 0),
                DagNode::NegAtom(p) => by_team(&|t| t & props[p.index()] == 0),
                DagNode::Dep(d, q) => {
                    let dets: Vec<u64> = d.iter().map(|p| props[p.index()]).collect();
                    by_team(&|t| dep_mask(t, &dets, props[q.index()]))
                }
                DagNode::And(a, b) => sat[a.index()] & sat[b.index()],
                DagNode::ClassicalOr(a, b) => sat[a.index()] | sat[b.index()],
                DagNode::SplitOr(a, b) => {
                    let (sa, sb) = (sat[a.index()], sat[b.index()]);
                    bits(sa).fold(0, |acc, t1| {
                        bits(sb).fold(acc, |acc, t2| acc | 1 << (t1 as u64 | t2 as u64))
                    })
                }
                DagNode::Box(a) => {
                    let sa = sat[a.index()];
                    by_team(&|t| (sa >> images[t as usize]) & 1 != 0)
                }
                DagNode::Diamond(a) => {
                    let sa = sat[a.index()];
                    by_team(&|t| cover[t as usize] & sa != 0)
                }
            };
            sat.push(s);
        }
        Ok(SatTable { sat })
    }

    pub fn holds(&self, id: NodeId, t: &Team) -> bool {
        (self.sat[id.index()] >> t.low_mask()) & 1 != 0
    }

    /// Satisfying teams of `id` as a mask indexed by team mask.
    pub fn teams(&self, id: NodeId) -> u64 {
        self.sat[id.index()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::kripke::KripkeBuilder;

    #[test]
    fn refuses_large_structures() {
        let mut b = KripkeBuilder::new();
        for i in 0..13 {
            b.world(&format!("w{i}"), ["p"]);
        }
        let w = b.build().unwrap();
        let err = oracle_check(&w, &w.full_team(), &Formula::Top).unwrap_err();
        assert_eq!(
            err,
            OracleError {
                worlds: 13,
                bound: 12
            }
        );
        assert!(oracle_check_bounded(&w, &w.full_team(), &Formula::atom("p"), 13).unwrap());
    }

    #[test]
    fn table_agrees_with_recursion_on_a_cycle() {
        let mut b = KripkeBuilder::new();
        b.world("a", ["p"]);
        b.world("b", ["q"]);
        b.world("c", ["p", "q"]);
        b.edge("a", "b");
        b.edge("b", "c");
        b.edge("c", "a");
        b.edge("c", "b");
        let w = b.build().unwrap();
        let formulas = [
            "dia dep(p; q) | box !p",
            "dep(;p) | dep(;q) | dep(;p)",
            "box (p cor dep(q; p)) & dia q",
            "dia (p | q) | !dep(;q)",
        ];
        let mut dag = FormulaDag::new();
        let ids: Vec<_> = formulas
            .iter()
            .map(|f| dag.insert(&parse(f).unwrap()))
            .collect();
        let table = SatTable::build(&w, &dag).unwrap();
        for (f, id) in formulas.iter().zip(ids) {
            let phi = parse(f).unwrap();
            for mask in 0..8 {
                let t = Team::from_mask(3, mask);
                assert_eq!(
                    table.holds(id, &t),
                    oracle_check(&w, &t, &phi).unwrap(),
                    "{f} at {t:?}"
                );
            }
        }
    }
}
