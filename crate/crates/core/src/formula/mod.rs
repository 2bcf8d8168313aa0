//! Abstract syntax of modal dependence logic formulas, their concrete text
//! syntax, and structural analyses.
//!
//! Negation is atomic: it only appears as [`Formula::NegAtom`] or
//! [`Formula::NegDep`]. Two disjunctions coexist: the team-splitting
//! [`Formula::SplitOr`] (`|`) and the classical [`Formula::ClassicalOr`]
//! (`cor`).

mod dag;
mod parser;
mod profile;
mod render;
mod transform;

use std::fmt;

pub use dag::{DagNode, FormulaDag, NodeId, PropId};
pub use parser::{parse, ParseError};
pub use profile::{profile, FragmentProfile, Operator};
pub use transform::{
    duplicate_structure, eliminate_constants_and_negation, Elimination, FreshNamer,
};

/// Words that can never be used as proposition names.
pub const KEYWORDS: [&str; 7] = ["true", "false", "and", "cor", "box", "dia", "dep"];

/// An atomic proposition name matching `[a-zA-Z_][a-zA-Z0-9_]*`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prop(String);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid proposition name {0:?}")]
pub struct InvalidProp(pub String);

impl Prop {
    pub fn new(name: impl Into<String>) -> Result<Self, InvalidProp> {
        let name = name.into();
        if is_identifier(&name) && !KEYWORDS.contains(&name.as_str()) {
            Ok(Prop(name))
        } else {
            Err(InvalidProp(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Prop {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// A dependence atom `dep(p_1,...,p_k; q)`: the target is functionally
/// determined by the determiners. Its arity is `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DepAtom {
    pub determiners: Vec<Prop>,
    pub target: Prop,
}

impl DepAtom {
    pub fn new(determiners: Vec<Prop>, target: Prop) -> Self {
        DepAtom {
            determiners,
            target,
        }
    }

    pub fn arity(&self) -> usize {
        self.determiners.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Top,
    Bot,
    Atom(Prop),
    NegAtom(Prop),
    Dep(DepAtom),
    NegDep(DepAtom),
    And(Box<Formula>, Box<Formula>),
    /// Dependence (team-splitting) disjunction.
    SplitOr(Box<Formula>, Box<Formula>),
    /// Classical (Boolean) disjunction.
    ClassicalOr(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    Diamond(Box<Formula>),
}

impl Formula {
    /// Convenience constructor; panics on an invalid name.
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Prop::new(name).expect("valid proposition name"))
    }

    /// Convenience constructor; panics on an invalid name.
    pub fn neg_atom(name: &str) -> Formula {
        Formula::NegAtom(Prop::new(name).expect("valid proposition name"))
    }

    /// Convenience constructor; panics on an invalid name.
    pub fn dep(determiners: &[&str], target: &str) -> Formula {
        let determiners = determiners
            .iter()
            .map(|d| Prop::new(*d).expect("valid proposition name"))
            .collect();
        Formula::Dep(DepAtom::new(
            determiners,
            Prop::new(target).expect("valid proposition name"),
        ))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn split_or(l: Formula, r: Formula) -> Formula {
        Formula::SplitOr(Box::new(l), Box::new(r))
    }

    pub fn classical_or(l: Formula, r: Formula) -> Formula {
        Formula::ClassicalOr(Box::new(l), Box::new(r))
    }

    pub fn boxed(child: Formula) -> Formula {
        Formula::Box(Box::new(child))
    }

    pub fn diamond(child: Formula) -> Formula {
        Formula::Diamond(Box::new(child))
    }

    /// `box^n child`.
    pub fn box_pow(n: usize, child: Formula) -> Formula {
        (0..n).fold(child, |f, _| Formula::boxed(f))
    }

    /// `dia^n child`.
    pub fn diamond_pow(n: usize, child: Formula) -> Formula {
        (0..n).fold(child, |f, _| Formula::diamond(f))
    }

    /// Left-associated split disjunction of `items`; `None` when empty.
    pub fn split_or_all(items: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        items.into_iter().reduce(Formula::split_or)
    }

    /// Left-associated conjunction of `items`; `None` when empty.
    pub fn and_all(items: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        items.into_iter().reduce(Formula::and)
    }

    /// Left-associated classical disjunction of `items`; `None` when empty.
    pub fn classical_or_all(items: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        items.into_iter().reduce(Formula::classical_or)
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Top
            | Formula::Bot
            | Formula::Atom(_)
            | Formula::NegAtom(_)
            | Formula::Dep(_)
            | Formula::NegDep(_) => 1,
            Formula::And(l, r) | Formula::SplitOr(l, r) | Formula::ClassicalOr(l, r) => {
                1 + l.size() + r.size()
            }
            Formula::Box(c) | Formula::Diamond(c) => 1 + c.size(),
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(
            self,
            Formula::Top
                | Formula::Bot
                | Formula::Atom(_)
                | Formula::NegAtom(_)
                | Formula::Dep(_)
                | Formula::NegDep(_)
        )
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::And(l, r) | Formula::SplitOr(l, r) | Formula::ClassicalOr(l, r) => {
                vec![l, r]
            }
            Formula::Box(c) | Formula::Diamond(c) => vec![c],
            _ => Vec::new(),
        }
    }

    /// Pre-order traversal.
    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            out.push(f);
            let children = f.children();
            stack.extend(children.into_iter().rev());
        }
        out
    }

    /// All propositions occurring anywhere, including inside dependence atoms.
    pub fn propositions(&self) -> std::collections::BTreeSet<Prop> {
        let mut out = std::collections::BTreeSet::new();
        for f in self.subformulas() {
            match f {
                Formula::Atom(p) | Formula::NegAtom(p) => {
                    out.insert(p.clone());
                }
                Formula::Dep(d) | Formula::NegDep(d) => {
                    out.extend(d.determiners.iter().cloned());
                    out.insert(d.target.clone());
                }
                _ => {}
            }
        }
        out
    }

    /// Positive dependence atoms in pre-order (AST position order).
    pub fn dep_atoms(&self) -> Vec<&DepAtom> {
        self.subformulas()
            .into_iter()
            .filter_map(|f| match f {
                Formula::Dep(d) => Some(d),
                _ => None,
            })
            .collect()
    }

    /// Rebuilds the formula bottom-up, letting `f` replace any node after its
    /// children have been rebuilt.
    pub fn map_bottom_up(&self, f: &mut impl FnMut(Formula) -> Formula) -> Formula {
        let rebuilt = match self {
            Formula::And(l, r) => Formula::and(l.map_bottom_up(f), r.map_bottom_up(f)),
            Formula::SplitOr(l, r) => Formula::split_or(l.map_bottom_up(f), r.map_bottom_up(f)),
            Formula::ClassicalOr(l, r) => {
                Formula::classical_or(l.map_bottom_up(f), r.map_bottom_up(f))
            }
            Formula::Box(c) => Formula::boxed(c.map_bottom_up(f)),
            Formula::Diamond(c) => Formula::diamond(c.map_bottom_up(f)),
            leaf => leaf.clone(),
        };
        f(rebuilt)
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
