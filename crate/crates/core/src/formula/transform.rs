//! Elimination of `true`, `false` and atomic negation by proposition
//! duplication.
//!
//! Every proposition `p` gets a fresh twin `p'` labeled exactly where `p` is
//! not, plus two fresh propositions `t` (labeled everywhere) and `f` (labeled
//! nowhere). Then `!p` becomes `p'`, `true` becomes `t`, and `false` as well
//! as every negated dependence atom become `f`. A negated dependence atom
//! holds only on the empty team, exactly like `false`.

use std::collections::{BTreeMap, BTreeSet};

use super::{Formula, Prop};
use crate::kripke::KripkeStructure;

/// Hands out proposition names that avoid a reserved set.
#[derive(Clone, Debug, Default)]
pub struct FreshNamer {
    taken: BTreeSet<String>,
}

impl FreshNamer {
    pub fn avoiding<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        FreshNamer {
            taken: names.into_iter().map(|s| s.as_ref().to_string()).collect(),
        }
    }

    pub fn for_formula(phi: &Formula) -> Self {
        Self::avoiding(phi.propositions().iter().map(|p| p.as_str().to_string()))
    }

    /// `base` itself if unused, else the first unused `base_<n>`.
    pub fn fresh(&mut self, base: &str) -> Prop {
        let mut candidate = base.to_string();
        let mut n = 1;
        while self.taken.contains(&candidate) {
            candidate = format!("{base}_{n}");
            n += 1;
        }
        self.taken.insert(candidate.clone());
        Prop::new(candidate).expect("fresh names are identifiers")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elimination {
    pub formula: Formula,
    /// `p ↦ p'` for every proposition of the input, used or not.
    pub negated: BTreeMap<Prop, Prop>,
    pub top: Prop,
    pub bot: Prop,
}

pub fn eliminate_constants_and_negation(phi: &Formula, namer: &mut FreshNamer) -> Elimination {
    let negated: BTreeMap<Prop, Prop> = phi
        .propositions()
        .into_iter()
        .map(|p| {
            let twin = namer.fresh(&format!("{p}_neg"));
            (p, twin)
        })
        .collect();
    let top = namer.fresh("t");
    let bot = namer.fresh("f");
    let formula = phi.map_bottom_up(&mut |node| match node {
        Formula::Top => Formula::Atom(top.clone()),
        Formula::Bot | Formula::NegDep(_) => Formula::Atom(bot.clone()),
        Formula::NegAtom(p) => Formula::Atom(negated[&p].clone()),
        other => other,
    });
    Elimination {
        formula,
        negated,
        top,
        bot,
    }
}

/// The structure on which the eliminated formula is evaluated: same worlds
/// and relation, labels restricted to the original propositions plus their
/// twins and `t`.
pub fn duplicate_structure(w: &KripkeStructure, e: &Elimination) -> KripkeStructure {
    let labels = (0..w.num_worlds())
        .map(|s| {
            let mut set = BTreeSet::new();
            set.insert(e.top.clone());
            for (p, twin) in &e.negated {
                if w.has_label(s, p) {
                    set.insert(p.clone());
                } else {
                    set.insert(twin.clone());
                }
            }
            set
        })
        .collect();
    KripkeStructure::new(w.world_names().to_vec(), w.relation(), labels)
        .expect("duplicated structure keeps a valid shape")
}
