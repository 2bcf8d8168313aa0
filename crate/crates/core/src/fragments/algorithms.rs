use super::FragmentError;
use crate::formula::{profile, Formula, Operator};
use crate::kripke::{KripkeStructure, Team};
use crate::semantics::atom_sat;

fn require_within(
    phi: &Formula,
    allowed: &[Operator],
    algorithm: &'static str,
) -> Result<(), FragmentError> {
    let pr = profile(phi);
    match pr.operators.iter().find(|op| !allowed.contains(op)) {
        Some(&operator) => Err(FragmentError::Violation {
            algorithm,
            operator,
        }),
        None => Ok(()),
    }
}

const TOPDOWN_OPS: &[Operator] = &[
    Operator::Box,
    Operator::And,
    Operator::ClassicalOr,
    Operator::Neg,
    Operator::Dep,
    Operator::Top,
    Operator::Bot,
];

/// Deterministic evaluation for formulas without diamonds and splits: every
/// clause left has exactly one team to look at.
pub fn check_topdown(w: &KripkeStructure, t: &Team, phi: &Formula) -> Result<bool, FragmentError> {
    require_within(phi, TOPDOWN_OPS, "topdown")?;
    Ok(topdown(w, t, phi))
}

fn topdown(w: &KripkeStructure, t: &Team, phi: &Formula) -> bool {
    match phi {
        Formula::And(l, r) => topdown(w, t, l) && topdown(w, t, r),
        Formula::ClassicalOr(l, r) => topdown(w, t, l) || topdown(w, t, r),
        Formula::Box(c) => topdown(w, &w.image(t), c),
        Formula::SplitOr(..) | Formula::Diamond(_) => unreachable!("checked by profile"),
        atom => atom_sat(w, t, atom),
    }
}

const FLAT_OPS: &[Operator] = &[
    Operator::Box,
    Operator::Diamond,
    Operator::And,
    Operator::SplitOr,
    Operator::Neg,
    Operator::Top,
    Operator::Bot,
];

/// Plain modal formulas are flat, so the team holds iff each member does.
/// Computes the set of satisfying worlds bottom-up.
pub fn check_flat(w: &KripkeStructure, t: &Team, phi: &Formula) -> Result<bool, FragmentError> {
    require_within(phi, FLAT_OPS, "flat-pointwise")?;
    Ok(t.is_subset(&sat_worlds(w, phi)))
}

/// Worlds at which a dependence-free, `cor`-free formula holds.
pub(crate) fn sat_worlds(w: &KripkeStructure, phi: &Formula) -> Team {
    match phi {
        Formula::Top => w.full_team(),
        Formula::Bot => w.empty_team(),
        Formula::Atom(p) => w.label_team(p),
        Formula::NegAtom(p) => w.full_team().difference(&w.label_team(p)),
        Formula::And(l, r) => sat_worlds(w, l).intersection(&sat_worlds(w, r)),
        Formula::SplitOr(l, r) => sat_worlds(w, l).union(&sat_worlds(w, r)),
        Formula::Box(c) => {
            let x = sat_worlds(w, c);
            w.team((0..w.num_worlds()).filter(|&s| w.successor_set(s).is_subset(&x)))
        }
        Formula::Diamond(c) => {
            let x = sat_worlds(w, c);
            w.team((0..w.num_worlds()).filter(|&s| w.successor_set(s).intersects(&x)))
        }
        Formula::Dep(_) | Formula::NegDep(_) | Formula::ClassicalOr(..) => {
            unreachable!("checked by profile")
        }
    }
}

/// `2^sigma > n` without overflow.
pub(crate) fn exceeds_log(sigma: usize, n: usize) -> bool {
    sigma >= usize::BITS as usize || (1usize << sigma) > n
}

const VEE_OPS: &[Operator] = &[
    Operator::SplitOr,
    Operator::Neg,
    Operator::Dep,
    Operator::Top,
    Operator::Bot,
];

/// With more dependence atoms than `log2 |S|`, a split disjunction of atoms
/// holds on every team: each dependence atom absorbs at least half of the
/// worlds still unassigned. `None` when that bound is not met.
pub fn check_trivial_vee(
    w: &KripkeStructure,
    _t: &Team,
    phi: &Formula,
) -> Result<Option<bool>, FragmentError> {
    require_within(phi, VEE_OPS, "trivial-accept")?;
    let sigma = profile(phi).sigma;
    Ok(exceeds_log(sigma, w.num_worlds()).then_some(true))
}

const NOR_OPS: &[Operator] = &[
    Operator::Box,
    Operator::Diamond,
    Operator::ClassicalOr,
    Operator::Neg,
    Operator::Dep,
    Operator::Top,
    Operator::Bot,
];

/// Pushes `cor` to the top through the modalities:
/// `box (a cor b)` is `box a cor box b`, likewise for `dia`.
pub fn nor_distribute(phi: &Formula) -> Result<Vec<Formula>, FragmentError> {
    require_within(phi, NOR_OPS, "nor-distribute")?;
    Ok(distribute(phi))
}

fn distribute(phi: &Formula) -> Vec<Formula> {
    match phi {
        Formula::ClassicalOr(l, r) => {
            let mut out = distribute(l);
            out.extend(distribute(r));
            out
        }
        Formula::Box(c) => distribute(c).into_iter().map(Formula::boxed).collect(),
        Formula::Diamond(c) => distribute(c).into_iter().map(Formula::diamond).collect(),
        leaf => vec![leaf.clone()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::kripke::KripkeBuilder;
    use crate::semantics::oracle_check;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn topdown_examples() {
        let mut b = KripkeBuilder::new();
        b.world("u", ["p", "q"]);
        b.world("v", ["p"]);
        b.edge("r", "u");
        b.edge("r", "v");
        let w = b.build().unwrap();
        let root = w.team([w.world_index("r").unwrap()]);
        assert_eq!(check_topdown(&w, &root, &f("box dep(;p)")), Ok(true));
        assert_eq!(
            check_topdown(&w, &root, &f("box (p & dep(p;q))")),
            Ok(false)
        );
        assert_eq!(oracle_check(&w, &root, &f("box (p & dep(p;q))")), Ok(false));
        assert_eq!(
            check_topdown(&w, &w.empty_team(), &f("box false & dep(p;q)")),
            Ok(true)
        );
        assert_eq!(
            check_topdown(&w, &root, &f("dia p")),
            Err(FragmentError::Violation {
                algorithm: "topdown",
                operator: Operator::Diamond
            })
        );
    }

    #[test]
    fn trivial_vee_boundaries() {
        let mut b = KripkeBuilder::new();
        for (i, l) in [["p"], ["q"], ["r"], ["p"]].iter().enumerate() {
            b.world(&format!("w{i}"), l);
        }
        let w4 = b.build().unwrap();
        let t = w4.full_team();
        let three = f("dep(;p) | dep(;q) | dep(;r)");
        assert_eq!(check_trivial_vee(&w4, &t, &three), Ok(Some(true)));
        assert_eq!(oracle_check(&w4, &t, &three), Ok(true));
        assert_eq!(
            check_trivial_vee(&w4, &t, &f("dep(;p) | dep(;q)")),
            Ok(None)
        );
        let mut b = KripkeBuilder::new();
        b.world("only", ["p"]);
        let w1 = b.build().unwrap();
        assert_eq!(
            check_trivial_vee(&w1, &w1.full_team(), &f("dep(;p)")),
            Ok(Some(true))
        );
        assert!(check_trivial_vee(&w1, &w1.full_team(), &f("dep(;p) & p")).is_err());
    }

    #[test]
    fn distribution_examples() {
        assert_eq!(nor_distribute(&f("p cor q")).unwrap(), [f("p"), f("q")]);
        assert_eq!(
            nor_distribute(&f("box (p cor q)")).unwrap(),
            [f("box p"), f("box q")]
        );
        assert_eq!(
            nor_distribute(&f("dia (dep(;p) cor !q)")).unwrap(),
            [f("dia dep(;p)"), f("dia !q")]
        );
        assert!(nor_distribute(&f("p & q")).is_err());
    }

    #[test]
    fn flat_rejects_dependence() {
        let mut b = KripkeBuilder::new();
        b.world("a", ["p"]);
        let w = b.build().unwrap();
        assert!(check_flat(&w, &w.full_team(), &f("dep(;p)")).is_err());
        assert!(check_flat(&w, &w.full_team(), &f("!dep(;p)")).is_err());
        assert_eq!(
            check_flat(&w, &w.full_team(), &f("p | box false")),
            Ok(true)
        );
    }
}
