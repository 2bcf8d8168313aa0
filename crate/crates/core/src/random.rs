//! Seeded instance generators for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{Formula, Operator};
use crate::kripke::{KripkeBuilder, KripkeStructure, Team};
use crate::reductions::CnfFormula;

pub type InstanceRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Worlds `w0..`, each edge present with probability `edge_prob`, each
/// proposition labeled with probability one half.
pub fn random_structure(
    rng: &mut impl Rng,
    worlds: usize,
    props: &[&str],
    edge_prob: f64,
) -> KripkeStructure {
    let mut b = KripkeBuilder::new();
    for s in 0..worlds {
        let labels: Vec<&str> = props
            .iter()
            .copied()
            .filter(|_| rng.gen_bool(0.5))
            .collect();
        b.world(&format!("w{s}"), labels);
    }
    for s in 0..worlds {
        for t in 0..worlds {
            if rng.gen_bool(edge_prob) {
                b.edge(&format!("w{s}"), &format!("w{t}"));
            }
        }
    }
    b.build().expect("at least one world")
}

/// Every world included independently with probability one half.
pub fn random_team(rng: &mut impl Rng, w: &KripkeStructure) -> Team {
    w.team((0..w.num_worlds()).filter(|_| rng.gen_bool(0.5)))
}

/// What [`random_formula`] may draw from.
#[derive(Clone, Debug)]
pub struct FormulaSpec {
    pub props: Vec<String>,
    /// Operators allowed; atoms are always available.
    pub operators: Vec<Operator>,
    pub max_arity: usize,
}

impl FormulaSpec {
    pub fn new(props: &[&str], operators: &[Operator], max_arity: usize) -> Self {
        FormulaSpec {
            props: props.iter().map(|p| p.to_string()).collect(),
            operators: operators.to_vec(),
            max_arity,
        }
    }

    fn allows(&self, op: Operator) -> bool {
        self.operators.contains(&op)
    }

    fn prop<'a>(&'a self, rng: &mut impl Rng) -> &'a str {
        self.props.choose(rng).expect("at least one proposition")
    }

    fn leaf(&self, rng: &mut impl Rng) -> Formula {
        let mut kinds = vec![0];
        for (op, kind) in [
            (Operator::Neg, 1),
            (Operator::Dep, 2),
            (Operator::Top, 3),
            (Operator::Bot, 4),
        ] {
            if self.allows(op) {
                kinds.push(kind);
            }
        }
        // dependence atoms are what the interesting fragments are about
        if self.allows(Operator::Dep) {
            kinds.push(2);
        }
        match *kinds.choose(rng).unwrap() {
            0 => Formula::atom(self.prop(rng)),
            1 => Formula::neg_atom(self.prop(rng)),
            2 => {
                let arity = rng.gen_range(0..=self.max_arity.min(self.props.len()));
                let dets: Vec<&str> = self
                    .props
                    .choose_multiple(rng, arity)
                    .map(String::as_str)
                    .collect();
                Formula::dep(&dets, self.prop(rng))
            }
            3 => Formula::Top,
            _ => Formula::Bot,
        }
    }
}

/// A formula of at most `size` nodes, exactly `size` whenever the allowed
/// operators make that possible.
pub fn random_formula(rng: &mut impl Rng, spec: &FormulaSpec, size: usize) -> Formula {
    let unary: Vec<Operator> = [Operator::Box, Operator::Diamond]
        .into_iter()
        .filter(|&op| spec.allows(op))
        .collect();
    let binary: Vec<Operator> = [Operator::And, Operator::SplitOr, Operator::ClassicalOr]
        .into_iter()
        .filter(|&op| spec.allows(op))
        .collect();
    let mut choices: Vec<Operator> = Vec::new();
    if size >= 2 {
        choices.extend(&unary);
    }
    if size >= 3 {
        choices.extend(&binary);
    }
    let Some(&op) = choices.choose(rng) else {
        return spec.leaf(rng);
    };
    match op {
        Operator::Box => Formula::boxed(random_formula(rng, spec, size - 1)),
        Operator::Diamond => Formula::diamond(random_formula(rng, spec, size - 1)),
        _ => {
            let left = rng.gen_range(1..size - 1);
            let (l, r) = (
                random_formula(rng, spec, left),
                random_formula(rng, spec, size - 1 - left),
            );
            match op {
                Operator::And => Formula::and(l, r),
                Operator::SplitOr => Formula::split_or(l, r),
                _ => Formula::classical_or(l, r),
            }
        }
    }
}

/// `m` clauses over `n` variables, each with `min(width, n)` distinct
/// variables signed at random.
pub fn random_cnf(rng: &mut impl Rng, n: usize, m: usize, width: usize) -> CnfFormula {
    let vars: Vec<i64> = (1..=n as i64).collect();
    let clauses = (0..m)
        .map(|_| {
            vars.choose_multiple(rng, width.min(n))
                .map(|&v| if rng.gen_bool(0.5) { v } else { -v })
                .collect()
        })
        .collect();
    CnfFormula::new(n, clauses).expect("distinct variables never clash")
}

/// A 3CNF with `n ∈ 1..=max_vars` and `m ∈ 1..=max_clauses`.
pub fn random_3cnf(rng: &mut impl Rng, max_vars: usize, max_clauses: usize) -> CnfFormula {
    let n = rng.gen_range(1..=max_vars);
    let m = rng.gen_range(1..=max_clauses);
    random_cnf(rng, n, m, 3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::profile;

    #[test]
    fn deterministic_and_in_fragment() {
        let spec = FormulaSpec::new(
            &["p", "q"],
            &[Operator::Box, Operator::And, Operator::Dep],
            1,
        );
        let a: Vec<Formula> = (0..20)
            .map(|i| random_formula(&mut seeded(i), &spec, 7))
            .collect();
        let b: Vec<Formula> = (0..20)
            .map(|i| random_formula(&mut seeded(i), &spec, 7))
            .collect();
        assert_eq!(a, b);
        for f in &a {
            assert_eq!(f.size(), 7);
            let pr = profile(f);
            assert!(pr.within(&spec.operators));
            assert!(pr.max_arity.unwrap_or(0) <= 1);
        }
        let leaves_only = FormulaSpec::new(&["p"], &[], 0);
        assert_eq!(
            random_formula(&mut seeded(1), &leaves_only, 5),
            Formula::atom("p")
        );
    }

    #[test]
    fn cnf_shape() {
        let mut rng = seeded(3);
        for _ in 0..50 {
            let phi = random_3cnf(&mut rng, 8, 10);
            assert!(phi.max_width() == 3.min(phi.num_vars()));
            assert!((1..=10).contains(&phi.num_clauses()));
        }
        let w = random_structure(&mut rng, 5, &["p"], 0.3);
        assert_eq!(w.num_worlds(), 5);
        assert!(w.is_valid_team(&random_team(&mut rng, &w)));
    }
}
