use mdl_core::random::{
    random_3cnf, random_formula, random_structure, random_team, seeded, FormulaSpec,
};
use mdl_core::semantics::oracle_check;
use mdl_core::{check, parse, sat_oracle, verify_certificate, Construction, Operator};
use proptest::prelude::*;

fn spec() -> FormulaSpec {
    FormulaSpec::new(&["p", "q", "r"], &Operator::ALL, 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rendering_parses_back(seed in any::<u64>(), size in 1usize..24) {
        let phi = random_formula(&mut seeded(seed), &spec(), size);
        let text = phi.to_string();
        prop_assert_eq!(parse(&text).unwrap(), phi, "{}", text);
    }

    #[test]
    fn checker_matches_oracle_and_certifies(
        seed in any::<u64>(),
        worlds in 1usize..6,
        size in 1usize..9,
    ) {
        let mut rng = seeded(seed);
        let w = random_structure(&mut rng, worlds, &["p", "q", "r"], 0.4);
        let t = random_team(&mut rng, &w);
        let phi = random_formula(&mut rng, &spec(), size);
        let out = check(&w, &t, &phi);
        prop_assert_eq!(out.holds, oracle_check(&w, &t, &phi).unwrap(), "{}", phi);
        if let Some(cert) = out.certificate {
            prop_assert!(verify_certificate(&w, &t, &phi, &cert).unwrap());
        }
    }

    #[test]
    fn downward_closed(seed in any::<u64>(), worlds in 1usize..6, size in 1usize..9) {
        let mut rng = seeded(seed);
        let w = random_structure(&mut rng, worlds, &["p", "q"], 0.4);
        let t = random_team(&mut rng, &w);
        let phi = random_formula(&mut rng, &FormulaSpec::new(&["p", "q"], &Operator::ALL, 1), size);
        if check(&w, &t, &phi).holds {
            for s in t.iter() {
                let mut smaller = t.clone();
                smaller.remove(s);
                prop_assert!(check(&w, &smaller, &phi).holds, "{}", phi);
            }
        }
        prop_assert!(check(&w, &w.empty_team(), &phi).holds);
    }
}

#[test]
fn reductions_track_satisfiability() {
    let mut rng = seeded(5);
    for _ in 0..40 {
        let cnf = random_3cnf(&mut rng, 5, 7);
        let sat = sat_oracle(&cnf).unwrap().is_some();
        for c in Construction::ALL {
            let r = c.reduce(&cnf).unwrap();
            assert_eq!(check(&r.structure, &r.team, &r.formula).holds, sat, "{c}");
        }
    }
}
