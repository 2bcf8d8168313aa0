//! Instance generators turning a CNF into a model checking instance that
//! holds iff the CNF is satisfiable, plus an exhaustive SAT oracle.
//!
//! Every generated formula depends on the number of variables only.

mod cnf;

use std::fmt;
use std::str::FromStr;

pub use cnf::{sat_oracle, Assignment, CnfError, CnfFormula, SAT_ORACLE_MAX_VARS};

use crate::formula::{Formula, Prop};
use crate::kripke::{KripkeBuilder, KripkeStructure, Team};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("the {0} construction needs at least one clause")]
    NoClauses(Construction),
    #[error("dependence atom of arity {arity} cannot be replaced by a classical disjunction")]
    NonZeroAry { arity: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Construction {
    Split,
    Diamond,
    BoxVee,
    DiamondWedge,
    DiamondVee,
    NorVee,
}

impl Construction {
    pub const ALL: [Construction; 6] = [
        Construction::Split,
        Construction::Diamond,
        Construction::BoxVee,
        Construction::DiamondWedge,
        Construction::DiamondVee,
        Construction::NorVee,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Construction::Split => "split",
            Construction::Diamond => "diamond",
            Construction::BoxVee => "boxvee",
            Construction::DiamondWedge => "diamondwedge",
            Construction::DiamondVee => "diamondvee",
            Construction::NorVee => "norvee",
        }
    }

    pub fn reduce(self, phi: &CnfFormula) -> Result<Reduction, ReductionError> {
        match self {
            Construction::Split => reduce_split(phi),
            Construction::Diamond => Ok(reduce_diamond(phi)),
            Construction::BoxVee => Ok(reduce_box_vee(phi)),
            Construction::DiamondWedge => Ok(reduce_diamond_wedge(phi)),
            Construction::DiamondVee => Ok(reduce_diamond_vee(phi)),
            Construction::NorVee => reduce_nor_vee(phi),
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Construction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Construction::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown construction {s:?}"))
    }
}

/// A generated instance: `structure, team ⊨ formula` iff the CNF is
/// satisfiable.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub structure: KripkeStructure,
    pub team: Team,
    pub formula: Formula,
}

const NONE: [&str; 0] = [];

fn finish(b: KripkeBuilder, team_names: &[String], formula: Formula) -> Reduction {
    let structure = b.build().expect("generated structures are well formed");
    let team = structure.team(
        team_names
            .iter()
            .map(|n| structure.world_index(n).expect("team world exists")),
    );
    Reduction {
        structure,
        team,
        formula,
    }
}

fn split_all(items: impl IntoIterator<Item = Formula>) -> Formula {
    Formula::split_or_all(items).expect("at least one variable")
}

/// One edgeless world per clause, labeled `r_j` for each variable of the
/// clause and `p_j` for each positive one. Checks
/// `(r_1 & dep(;p_1)) | … | (r_n & dep(;p_n))` on all worlds.
pub fn reduce_split(phi: &CnfFormula) -> Result<Reduction, ReductionError> {
    if phi.num_clauses() == 0 {
        return Err(ReductionError::NoClauses(Construction::Split));
    }
    let mut b = KripkeBuilder::new();
    let mut team = Vec::new();
    for (i, clause) in phi.clauses().iter().enumerate() {
        let name = format!("s_{}", i + 1);
        let mut labels = Vec::new();
        for &l in clause {
            let j = l.unsigned_abs();
            labels.push(format!("r_{j}"));
            if l > 0 {
                labels.push(format!("p_{j}"));
            }
        }
        b.world(&name, &labels);
        team.push(name);
    }
    let formula = split_all((1..=phi.num_vars()).map(|j| {
        Formula::and(
            Formula::atom(&format!("r_{j}")),
            Formula::dep(&[], &format!("p_{j}")),
        )
    }));
    Ok(finish(b, &team, formula))
}

/// Clause worlds `c_i` pointing at `s_j^1` (labeled `p_j, q`) for positive
/// and `s_j^0` (labeled `p_j`) for negative occurrences. Checks
/// `dia dep(p_1, …, p_n; q)` on the clause worlds.
pub fn reduce_diamond(phi: &CnfFormula) -> Reduction {
    let mut b = KripkeBuilder::new();
    for i in 1..=phi.num_clauses() {
        b.world(&format!("c_{i}"), NONE);
    }
    for j in 1..=phi.num_vars() {
        b.world(&format!("s_{j}^1"), [format!("p_{j}"), "q".into()]);
        b.world(&format!("s_{j}^0"), [format!("p_{j}")]);
    }
    for (i, clause) in phi.clauses().iter().enumerate() {
        for &l in clause {
            let bit = if l > 0 { 1 } else { 0 };
            b.edge(
                &format!("c_{}", i + 1),
                &format!("s_{}^{bit}", l.unsigned_abs()),
            );
        }
    }
    let team: Vec<String> = (1..=phi.num_clauses()).map(|i| format!("c_{i}")).collect();
    let dets: Vec<String> = (1..=phi.num_vars()).map(|j| format!("p_{j}")).collect();
    let dets: Vec<&str> = dets.iter().map(String::as_str).collect();
    let formula = Formula::diamond(Formula::dep(&dets, "q"));
    finish(b, &team, formula)
}

/// One chain per clause: `s_i` followed by levels `1..n`, each holding
/// `r_i^j` and `rb_i^j`. Level `j` is reached as `{r_i^j}` alone when `x_j`
/// occurs in the clause and as both worlds otherwise; `r_i^j` carries `p_j`
/// unless `x_j` occurs negatively. Checks `box dep(;p_1) | … | box^n
/// dep(;p_n)` on the `s_i`.
pub fn reduce_box_vee(phi: &CnfFormula) -> Reduction {
    let (m, n) = (phi.num_clauses(), phi.num_vars());
    let mut b = KripkeBuilder::new();
    let r = |i: usize, j: usize| format!("r_{i}^{j}");
    let rb = |i: usize, j: usize| format!("rb_{i}^{j}");
    for i in 1..=m {
        b.world(&format!("s_{i}"), NONE);
        for j in 1..=n {
            let label = match phi.occurrence(i - 1, j) {
                Some(false) => None,
                _ => Some(format!("p_{j}")),
            };
            b.world(&r(i, j), label);
            b.world(&rb(i, j), NONE);
        }
    }
    for i in 1..=m {
        let occurs = |j: usize| phi.occurrence(i - 1, j).is_some();
        let s = format!("s_{i}");
        b.edge(&s, &r(i, 1));
        if !occurs(1) {
            b.edge(&s, &rb(i, 1));
        }
        for j in 1..n {
            b.edge(&r(i, j), &r(i, j + 1));
            match (occurs(j), occurs(j + 1)) {
                (true, true) => {}
                (true, false) => b.edge(&r(i, j), &rb(i, j + 1)),
                (false, true) => b.edge(&rb(i, j), &r(i, j + 1)),
                (false, false) => b.edge(&rb(i, j), &rb(i, j + 1)),
            }
        }
    }
    let team: Vec<String> = (1..=m).map(|i| format!("s_{i}")).collect();
    let formula =
        split_all((1..=n).map(|j| Formula::box_pow(j, Formula::dep(&[], &format!("p_{j}")))));
    finish(b, &team, formula)
}

/// Clause worlds `c_i` choose a literal world `s_1_j` (for `x_j`) or
/// `sb_1_j` (for its negation) on the first of `n` levels. Each literal
/// world continues straight down its column and, at level `k`, may also
/// step to `t_k` (labeled `r_k, p_k`) or `tb_k` (labeled `r_k`): only to
/// the matching one in column `k`, to both elsewhere. Checks
/// `dia (dia (r_1 & dep(;p_1)) & … & dia^n (r_n & dep(;p_n)))` on the
/// clause worlds.
pub fn reduce_diamond_wedge(phi: &CnfFormula) -> Reduction {
    let (m, n) = (phi.num_clauses(), phi.num_vars());
    let mut b = KripkeBuilder::new();
    let s = |k: usize, j: usize| format!("s_{k}_{j}");
    let sb = |k: usize, j: usize| format!("sb_{k}_{j}");
    for i in 1..=m {
        b.world(&format!("c_{i}"), NONE);
    }
    for k in 1..=n {
        for j in 1..=n {
            b.world(&s(k, j), NONE);
            b.world(&sb(k, j), NONE);
        }
    }
    for j in 1..=n {
        b.world(&format!("t_{j}"), [format!("r_{j}"), format!("p_{j}")]);
        b.world(&format!("tb_{j}"), [format!("r_{j}")]);
    }
    for (i, clause) in phi.clauses().iter().enumerate() {
        for &l in clause {
            let j = l.unsigned_abs() as usize;
            let target = if l > 0 { s(1, j) } else { sb(1, j) };
            b.edge(&format!("c_{}", i + 1), &target);
        }
    }
    for k in 1..=n {
        let (t, tb) = (format!("t_{k}"), format!("tb_{k}"));
        for j in 1..=n {
            if k < n {
                b.edge(&s(k, j), &s(k + 1, j));
                b.edge(&sb(k, j), &sb(k + 1, j));
            }
            b.edge(&s(k, j), &t);
            b.edge(&sb(k, j), &tb);
            if j != k {
                b.edge(&s(k, j), &tb);
                b.edge(&sb(k, j), &t);
            }
        }
    }
    let team: Vec<String> = (1..=m).map(|i| format!("c_{i}")).collect();
    let conjuncts = (1..=n).map(|j| {
        Formula::diamond_pow(
            j,
            Formula::and(
                Formula::atom(&format!("r_{j}")),
                Formula::dep(&[], &format!("p_{j}")),
            ),
        )
    });
    let formula = Formula::diamond(Formula::and_all(conjuncts).expect("at least one variable"));
    finish(b, &team, formula)
}

/// Clause chains `c_i_1 → … → c_i_n`, where `c_i_j` is labeled `q` if `x_j`
/// does not occur in the clause, `p_j` if it occurs positively and nothing
/// if negatively; ladder chains `x_j_1 → … → x_j_j` labeled `q`, plus `p_j`
/// at the end. Checks `dep(q; p_1) | dia dep(q; p_2) | … | dia^(n-1)
/// dep(q; p_n)` on the chain heads.
pub fn reduce_diamond_vee(phi: &CnfFormula) -> Reduction {
    let (m, n) = (phi.num_clauses(), phi.num_vars());
    let mut b = KripkeBuilder::new();
    let c = |i: usize, j: usize| format!("c_{i}_{j}");
    let x = |j: usize, k: usize| format!("x_{j}_{k}");
    for i in 1..=m {
        for j in 1..=n {
            let label = match phi.occurrence(i - 1, j) {
                None => Some("q".to_string()),
                Some(true) => Some(format!("p_{j}")),
                Some(false) => None,
            };
            b.world(&c(i, j), label);
        }
        for j in 1..n {
            b.edge(&c(i, j), &c(i, j + 1));
        }
    }
    for j in 1..=n {
        for k in 1..=j {
            let mut labels = vec!["q".to_string()];
            if k == j {
                labels.push(format!("p_{j}"));
            }
            b.world(&x(j, k), labels);
        }
        for k in 1..j {
            b.edge(&x(j, k), &x(j, k + 1));
        }
    }
    let team: Vec<String> = (1..=m)
        .map(|i| c(i, 1))
        .chain((1..=n).map(|j| x(j, 1)))
        .collect();
    let formula = split_all(
        (1..=n).map(|j| Formula::diamond_pow(j - 1, Formula::dep(&["q"], &format!("p_{j}")))),
    );
    finish(b, &team, formula)
}

/// One edgeless world per clause labeled `p_j` for each positive and `q_j`
/// for each negative literal `x_j`. Checks `(p_1 cor q_1) | … | (p_n cor
/// q_n)` on all worlds.
pub fn reduce_nor_vee(phi: &CnfFormula) -> Result<Reduction, ReductionError> {
    if phi.num_clauses() == 0 {
        return Err(ReductionError::NoClauses(Construction::NorVee));
    }
    let mut b = KripkeBuilder::new();
    let mut team = Vec::new();
    for (i, clause) in phi.clauses().iter().enumerate() {
        let name = format!("c_{}", i + 1);
        let labels: Vec<String> = clause
            .iter()
            .map(|&l| {
                let j = l.unsigned_abs();
                if l > 0 {
                    format!("p_{j}")
                } else {
                    format!("q_{j}")
                }
            })
            .collect();
        b.world(&name, labels);
        team.push(name);
    }
    let formula = split_all((1..=phi.num_vars()).map(|j| {
        Formula::classical_or(
            Formula::atom(&format!("p_{j}")),
            Formula::atom(&format!("q_{j}")),
        )
    }));
    Ok(finish(b, &team, formula))
}

/// Replaces every `dep(;p)` by `p cor !p`, its equivalent.
pub fn nor_for_dep(phi: &Formula) -> Result<Formula, ReductionError> {
    if let Some(d) = phi.dep_atoms().into_iter().find(|d| d.arity() > 0) {
        return Err(ReductionError::NonZeroAry { arity: d.arity() });
    }
    if let Some(arity) = phi.subformulas().iter().find_map(|f| match f {
        Formula::NegDep(d) if d.arity() > 0 => Some(d.arity()),
        _ => None,
    }) {
        return Err(ReductionError::NonZeroAry { arity });
    }
    Ok(phi.map_bottom_up(&mut |node| match node {
        Formula::Dep(d) => nor_of(&d.target),
        other => other,
    }))
}

fn nor_of(p: &Prop) -> Formula {
    Formula::classical_or(Formula::Atom(p.clone()), Formula::NegAtom(p.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, profile, Operator};
    use crate::semantics::{holds, oracle_check};

    fn cnf(n: usize, clauses: &[&[i64]]) -> CnfFormula {
        CnfFormula::new(n, clauses.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    fn accepted(r: &Reduction) -> bool {
        holds(&r.structure, &r.team, &r.formula)
    }

    #[test]
    fn tiny_instances_all_constructions() {
        let unit = cnf(1, &[&[1]]);
        let contradiction = cnf(1, &[&[1], &[-1]]);
        for c in Construction::ALL {
            let yes = c.reduce(&unit).unwrap();
            let no = c.reduce(&contradiction).unwrap();
            assert!(accepted(&yes), "{c} on (x1)");
            assert!(!accepted(&no), "{c} on (x1)&(!x1)");
            if no.structure.num_worlds() <= 12 {
                assert_eq!(
                    oracle_check(&no.structure, &no.team, &no.formula),
                    Ok(false),
                    "{c}"
                );
                assert_eq!(
                    oracle_check(&yes.structure, &yes.team, &yes.formula),
                    Ok(true)
                );
            }
        }
    }

    #[test]
    fn split_labels() {
        let r = reduce_split(&cnf(1, &[&[1], &[-1]])).unwrap();
        let w = &r.structure;
        let names: Vec<Vec<&str>> = (0..2)
            .map(|s| w.labels(s).iter().map(Prop::as_str).collect())
            .collect();
        assert_eq!(names, [vec!["p_1", "r_1"], vec!["r_1"]]);
        assert_eq!(r.formula, parse("r_1 & dep(;p_1)").unwrap());
    }

    #[test]
    fn example_nine_structure() {
        let phi = cnf(4, &[&[-1, 2, 3], &[2, -3, 4], &[1, -2]]);
        let r = reduce_box_vee(&phi);
        let w = &r.structure;
        assert_eq!(w.num_worlds(), 3 * 8 + 3);
        let i = |n: &str| w.world_index(n).unwrap();
        assert_eq!(w.successors(i("s_2")), [i("r_2^1"), i("rb_2^1")]);
        assert_eq!(w.successors(i("s_1")), [i("r_1^1")]);
        // x3 occurs in C3? no; x2 does: r_3^2 -> r_3^3, rb_3^3
        assert_eq!(w.successors(i("r_3^2")), [i("r_3^3"), i("rb_3^3")]);
        assert!(w.labels(i("r_1^1")).is_empty());
        assert_eq!(w.labels(i("r_2^1")).len(), 1);
        assert!(accepted(&r));
        let gamma1 = parse("box dep(;p_1)").unwrap();
        assert!(!holds(w, &w.team([i("s_2")]), &gamma1));
        assert_eq!(
            r.formula,
            parse("box dep(;p_1) | box box dep(;p_2) | box box box dep(;p_3) | box box box box dep(;p_4)")
                .unwrap()
        );
    }

    #[test]
    fn sizes_and_fragments() {
        let phi = cnf(3, &[&[1, -2], &[1, 2, 3], &[-1, 3]]);
        let (m, n) = (3, 3);
        let sizes = [
            (Construction::Split, m),
            (Construction::Diamond, m + 2 * n),
            (Construction::BoxVee, m * 2 * n + m),
            (Construction::DiamondWedge, m + 2 * n * n + 2 * n),
            (Construction::DiamondVee, m * n + n * (n + 1) / 2),
            (Construction::NorVee, m),
        ];
        for (c, size) in sizes {
            let r = c.reduce(&phi).unwrap();
            assert_eq!(r.structure.num_worlds(), size, "{c}");
            assert!(accepted(&r), "{c}");
        }
        let pr = profile(&reduce_diamond_vee(&phi).formula);
        assert_eq!(pr.max_arity, Some(1));
        assert!(pr.within(&[Operator::Diamond, Operator::SplitOr, Operator::Dep]));
        let pr = profile(&reduce_diamond_wedge(&phi).formula);
        assert_eq!(pr.max_arity, Some(0));
        let pr = profile(&reduce_nor_vee(&phi).unwrap().formula);
        assert!(pr.within(&[Operator::SplitOr, Operator::ClassicalOr]));
    }

    #[test]
    fn empty_cnf() {
        let empty = CnfFormula::new(2, vec![]).unwrap();
        assert!(reduce_split(&empty).is_err());
        assert!(reduce_nor_vee(&empty).is_err());
        assert!(accepted(&reduce_diamond(&empty)));
    }

    #[test]
    fn nor_for_dep_examples() {
        assert_eq!(
            nor_for_dep(&parse("dep(;p)").unwrap()).unwrap(),
            parse("p cor !p").unwrap()
        );
        let plain = parse("box p | q").unwrap();
        assert_eq!(nor_for_dep(&plain).unwrap(), plain);
        assert_eq!(
            nor_for_dep(&parse("dep(a;p)").unwrap()),
            Err(ReductionError::NonZeroAry { arity: 1 })
        );
    }
}
