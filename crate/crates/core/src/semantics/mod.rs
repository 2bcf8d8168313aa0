//! Team semantics: the certificate-producing checker, the brute-force oracle,
//! and certificate verification.

mod certificate;
mod eval;
mod oracle;

pub use certificate::{verify_certificate, Certificate, CertificateError};
pub use eval::Evaluator;
pub use oracle::{
    oracle_check, oracle_check_bounded, OracleError, SatTable, DEFAULT_ORACLE_MAX_WORLDS,
    TABLE_MAX_WORLDS,
};

use crate::formula::{DepAtom, Formula, FormulaDag};
use crate::kripke::{KripkeStructure, Team};

/// Whether worlds of `t` that agree on every determiner also agree on the
/// target. Refines `t` into agreement classes, then requires each class to
/// lie inside or outside the target.
pub(crate) fn dep_holds(t: &Team, dets: &[&Team], target: &Team) -> bool {
    let mut classes = vec![t.clone()];
    for d in dets {
        let mut next = Vec::with_capacity(classes.len() * 2);
        for c in classes {
            let inside = c.intersection(d);
            let outside = c.difference(d);
            next.extend([inside, outside].into_iter().filter(|x| !x.is_empty()));
        }
        classes = next;
    }
    classes
        .iter()
        .all(|c| c.is_subset(target) || !c.intersects(target))
}

fn dep_atom_holds(w: &KripkeStructure, t: &Team, d: &DepAtom) -> bool {
    let dets: Vec<Team> = d.determiners.iter().map(|p| w.label_team(p)).collect();
    let refs: Vec<&Team> = dets.iter().collect();
    dep_holds(t, &refs, &w.label_team(&d.target))
}

/// Satisfaction of an atomic formula (constant, literal or dependence atom).
///
/// # Panics
/// If `phi` is not atomic.
pub fn atom_sat(w: &KripkeStructure, t: &Team, phi: &Formula) -> bool {
    match phi {
        Formula::Top => true,
        Formula::Bot | Formula::NegDep(_) => t.is_empty(),
        Formula::Atom(p) => t.is_subset(&w.label_team(p)),
        Formula::NegAtom(p) => !t.intersects(&w.label_team(p)),
        Formula::Dep(d) => dep_atom_holds(w, t, d),
        _ => panic!("atom_sat called on a compound formula"),
    }
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub holds: bool,
    /// Present exactly when `holds`.
    pub certificate: Option<Certificate>,
    pub nodes_explored: u64,
}

/// Decides `W, T ⊨ φ` and, on success, records the choices that witness it.
pub fn check(w: &KripkeStructure, t: &Team, phi: &Formula) -> CheckOutcome {
    assert!(w.is_valid_team(t), "team does not belong to the structure");
    let mut dag = FormulaDag::new();
    let root = dag.insert(phi);
    let mut ev = Evaluator::new(w, &dag);
    let certificate = ev.certificate(root, t);
    CheckOutcome {
        holds: certificate.is_some(),
        certificate,
        nodes_explored: ev.nodes_explored(),
    }
}

/// Verdict only.
pub fn holds(w: &KripkeStructure, t: &Team, phi: &Formula) -> bool {
    let mut dag = FormulaDag::new();
    let root = dag.insert(phi);
    Evaluator::new(w, &dag).holds(root, t)
}

/// A subteam of at least half of `t` satisfying the dependence atom `d`:
/// the larger side of `t` split on the target proposition.
pub fn half_team(w: &KripkeStructure, t: &Team, d: &DepAtom) -> Team {
    let target = w.label_team(&d.target);
    let inside = t.intersection(&target);
    let outside = t.difference(&target);
    if inside.len() >= outside.len() {
        inside
    } else {
        outside
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::kripke::KripkeBuilder;

    /// One clause world with edges to both value worlds of variable j.
    fn value_worlds() -> KripkeStructure {
        let mut b = KripkeBuilder::new();
        b.world("s_j^0", ["p_j"]);
        b.world("s_j^1", ["p_j", "q"]);
        b.edge("c", "s_j^0");
        b.edge("c", "s_j^1");
        b.build().unwrap()
    }

    #[test]
    fn atom_examples() {
        let w = value_worlds();
        let both = w.team([0, 1]);
        assert!(!atom_sat(&w, &both, &parse("dep(p_j; q)").unwrap()));
        assert!(atom_sat(&w, &w.team([1]), &parse("dep(p_j; q)").unwrap()));
        assert!(atom_sat(&w, &both, &parse("dep(; p_j)").unwrap()));
        assert!(atom_sat(&w, &both, &parse("p_j").unwrap()));
        assert!(!atom_sat(&w, &both, &parse("!q").unwrap()));
        assert!(atom_sat(
            &w,
            &w.empty_team(),
            &parse("!dep(p_j; q)").unwrap()
        ));
        assert!(!atom_sat(&w, &w.team([2]), &parse("!dep(p_j; q)").unwrap()));
    }

    #[test]
    fn dep_partition_matches_pairwise_reading() {
        let w = value_worlds();
        for m in 0..8u64 {
            let t = Team::from_mask(3, m);
            for f in ["dep(p_j; q)", "dep(q; p_j)", "dep(;q)", "dep(p_j, q; q)"] {
                let phi = parse(f).unwrap();
                assert_eq!(atom_sat(&w, &t, &phi), oracle_check(&w, &t, &phi).unwrap());
            }
        }
    }

    #[test]
    fn empty_team_always_holds() {
        let w = value_worlds();
        for f in [
            "false",
            "box false | dia false",
            "dia dep(p_j; q) & !dep(;q)",
        ] {
            let out = check(&w, &w.empty_team(), &parse(f).unwrap());
            assert!(out.holds && out.certificate.is_some(), "{f}");
        }
    }

    #[test]
    fn diamond_picks_a_consistent_successor() {
        let w = value_worlds();
        let c = w.team([2]);
        let phi = parse("dia (dep(;q) & q)").unwrap();
        let out = check(&w, &c, &phi);
        assert!(out.holds);
        let Some(Certificate::Diamond { successor, .. }) = &out.certificate else {
            panic!("expected a diamond certificate");
        };
        assert_eq!(successor, &w.team([1]));
        assert_eq!(
            verify_certificate(&w, &c, &phi, out.certificate.as_ref().unwrap()),
            Ok(true)
        );
        assert!(!holds(&w, &c, &parse("box dep(;q)").unwrap()));
    }

    #[test]
    fn split_chain_certificate_is_binary_and_verifies() {
        let w = value_worlds();
        let t = w.full_team();
        let phi = parse("q | !p_j | dep(;q) & p_j").unwrap();
        let out = check(&w, &t, &phi);
        assert!(out.holds);
        let cert = out.certificate.unwrap();
        assert_eq!(verify_certificate(&w, &t, &phi, &cert), Ok(true));
        assert_eq!(
            verify_certificate(&w, &t, &parse("q | p_j").unwrap(), &cert),
            Err(CertificateError::ShapeMismatch {
                path: "/left".into(),
                expected: "leaf"
            })
        );
        let json = cert.to_json(&w);
        assert_eq!(Certificate::from_json(&json, &w).unwrap(), cert);
    }

    #[test]
    fn half_team_satisfies_its_atom() {
        let w = value_worlds();
        let d = DepAtom::new(vec![], crate::formula::Prop::new("q").unwrap());
        let h = half_team(&w, &w.full_team(), &d);
        assert!(h.len() * 2 >= 3);
        assert!(atom_sat(&w, &h, &Formula::Dep(d)));
    }
}
