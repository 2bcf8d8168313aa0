//! Canonical text rendering; `parse(&f.to_string()) == f` for every AST.

use std::fmt;

use super::{DepAtom, Formula};

// Binding strength: disjunctions < conjunction < unary/atoms.
fn level(f: &Formula) -> u8 {
    match f {
        Formula::SplitOr(..) | Formula::ClassicalOr(..) => 0,
        Formula::And(..) => 1,
        _ => 2,
    }
}

struct Paren<'a>(&'a Formula, bool);

impl fmt::Display for Paren<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for DepAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("dep(")?;
        for (i, d) in self.determiners.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "; {})", self.target)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Top => f.write_str("true"),
            Formula::Bot => f.write_str("false"),
            Formula::Atom(p) => write!(f, "{p}"),
            Formula::NegAtom(p) => write!(f, "!{p}"),
            Formula::Dep(d) => write!(f, "{d}"),
            Formula::NegDep(d) => write!(f, "!{d}"),
            Formula::And(l, r) => {
                write!(f, "{} & {}", Paren(l, level(l) < 1), Paren(r, level(r) < 2))
            }
            Formula::SplitOr(l, r) => write!(
                f,
                "{} | {}",
                Paren(l, !matches!(**l, Formula::SplitOr(..)) && level(l) == 0),
                Paren(r, level(r) == 0)
            ),
            Formula::ClassicalOr(l, r) => write!(
                f,
                "{} cor {}",
                Paren(l, !matches!(**l, Formula::ClassicalOr(..)) && level(l) == 0),
                Paren(r, level(r) == 0)
            ),
            Formula::Box(c) => write!(f, "box {}", Paren(c, level(c) < 2)),
            Formula::Diamond(c) => write!(f, "dia {}", Paren(c, level(c) < 2)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;

    #[test]
    fn renders_minimal_parentheses() {
        for text in [
            "p | q & r",
            "(p | q) & r",
            "p & (q & r)",
            "p | (q | r)",
            "(p cor q) | r",
            "box (p & q)",
            "dia !dep(a, b; c)",
            "dep(; q) cor true cor false",
        ] {
            let f = parse(text).unwrap();
            assert_eq!(f.to_string(), text);
        }
    }
}
