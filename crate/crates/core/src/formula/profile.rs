use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::Formula;

/// Operators by which formula fragments are delimited.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Operator {
    Box,
    Diamond,
    And,
    SplitOr,
    ClassicalOr,
    Neg,
    Dep,
    Top,
    Bot,
}

impl Operator {
    pub const ALL: [Operator; 9] = [
        Operator::Box,
        Operator::Diamond,
        Operator::And,
        Operator::SplitOr,
        Operator::ClassicalOr,
        Operator::Neg,
        Operator::Dep,
        Operator::Top,
        Operator::Bot,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Operator::Box => "box",
            Operator::Diamond => "dia",
            Operator::And => "&",
            Operator::SplitOr => "|",
            Operator::ClassicalOr => "cor",
            Operator::Neg => "!",
            Operator::Dep => "dep",
            Operator::Top => "true",
            Operator::Bot => "false",
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Operator set, arity bound, and dependence-atom count of a formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FragmentProfile {
    pub operators: BTreeSet<Operator>,
    /// Largest determiner-list length over positive and negated dependence
    /// atoms; `None` when the formula has none.
    pub max_arity: Option<usize>,
    /// Number of positive dependence atoms.
    pub sigma: usize,
    pub modal_depth: usize,
}

impl FragmentProfile {
    pub fn has(&self, op: Operator) -> bool {
        self.operators.contains(&op)
    }

    /// True when every operator of the profile is in `allowed`.
    pub fn within(&self, allowed: &[Operator]) -> bool {
        self.operators.iter().all(|op| allowed.contains(op))
    }
}

pub fn profile(phi: &Formula) -> FragmentProfile {
    let mut operators = BTreeSet::new();
    let mut max_arity: Option<usize> = None;
    let mut sigma = 0;
    for f in phi.subformulas() {
        match f {
            Formula::Top => {
                operators.insert(Operator::Top);
            }
            Formula::Bot => {
                operators.insert(Operator::Bot);
            }
            Formula::Atom(_) => {}
            Formula::NegAtom(_) => {
                operators.insert(Operator::Neg);
            }
            Formula::Dep(d) => {
                operators.insert(Operator::Dep);
                sigma += 1;
                max_arity = Some(max_arity.map_or(d.arity(), |a| a.max(d.arity())));
            }
            Formula::NegDep(d) => {
                operators.insert(Operator::Dep);
                operators.insert(Operator::Neg);
                max_arity = Some(max_arity.map_or(d.arity(), |a| a.max(d.arity())));
            }
            Formula::And(..) => {
                operators.insert(Operator::And);
            }
            Formula::SplitOr(..) => {
                operators.insert(Operator::SplitOr);
            }
            Formula::ClassicalOr(..) => {
                operators.insert(Operator::ClassicalOr);
            }
            Formula::Box(_) => {
                operators.insert(Operator::Box);
            }
            Formula::Diamond(_) => {
                operators.insert(Operator::Diamond);
            }
        }
    }
    FragmentProfile {
        operators,
        max_arity,
        sigma,
        modal_depth: modal_depth(phi),
    }
}

fn modal_depth(f: &Formula) -> usize {
    match f {
        Formula::Box(c) | Formula::Diamond(c) => 1 + modal_depth(c),
        Formula::And(l, r) | Formula::SplitOr(l, r) | Formula::ClassicalOr(l, r) => {
            modal_depth(l).max(modal_depth(r))
        }
        _ => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn ops(list: &[Operator]) -> BTreeSet<Operator> {
        list.iter().copied().collect()
    }

    #[test]
    fn top_alone() {
        let pr = profile(&Formula::Top);
        assert_eq!(pr.operators, ops(&[Operator::Top]));
        assert_eq!((pr.sigma, pr.max_arity, pr.modal_depth), (0, None, 0));
    }

    #[test]
    fn diamond_over_ternary_dep() {
        let pr = profile(&parse("dia dep(p1,p2,p3; q)").unwrap());
        assert_eq!(pr.operators, ops(&[Operator::Diamond, Operator::Dep]));
        assert_eq!((pr.sigma, pr.max_arity, pr.modal_depth), (1, Some(3), 1));
    }

    #[test]
    fn both_disjunctions() {
        let pr = profile(&parse("(p1 cor q1) | (p2 cor q2)").unwrap());
        assert_eq!(
            pr.operators,
            ops(&[Operator::SplitOr, Operator::ClassicalOr])
        );
        assert_eq!((pr.sigma, pr.max_arity, pr.modal_depth), (0, None, 0));
    }

    #[test]
    fn negated_dep_counts_for_arity_not_sigma() {
        let pr = profile(&parse("!dep(a,b;c) | dep(;d) | box dia dep(a;b)").unwrap());
        assert_eq!(pr.sigma, 2);
        assert_eq!(pr.max_arity, Some(2));
        assert_eq!(pr.modal_depth, 2);
        assert!(pr.has(Operator::Neg));
    }
}
