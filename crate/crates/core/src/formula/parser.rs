//! Recursive-descent parser for the formula language.
//!
//! ```text
//! formula   := or_expr ;
//! or_expr   := and_expr (("|" and_expr)* | ("cor" and_expr)*) ;
//! and_expr  := unary ("&" unary)* ;
//! unary     := "box" unary | "dia" unary | "[]" unary | "<>" unary | "!" atom | atom ;
//! atom      := "true" | "false" | ident | dep | "(" formula ")" ;
//! dep       := "dep" "(" [ident ("," ident)*] ";" ident ")" ;
//! ```
//!
//! `&` binds tighter than both disjunctions; `|` and `cor` may not be mixed
//! at one level without parentheses. `#` starts a line comment.

use std::fmt;

use super::{DepAtom, Formula, Prop, KEYWORDS};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    And,
    Bar,
    Cor,
    Bang,
    Box,
    Dia,
    Dep,
    LParen,
    RParen,
    Comma,
    Semi,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::True => f.write_str("`true`"),
            Tok::False => f.write_str("`false`"),
            Tok::And => f.write_str("`&`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Cor => f.write_str("`cor`"),
            Tok::Bang => f.write_str("`!`"),
            Tok::Box => f.write_str("`box`"),
            Tok::Dia => f.write_str("`dia`"),
            Tok::Dep => f.write_str("`dep`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{column}: unexpected {found}, expected one of: {}", expected.join(", "))]
    Unexpected {
        line: usize,
        column: usize,
        found: String,
        expected: Vec<String>,
    },
    #[error("{line}:{column}: unrecognized character {ch:?}")]
    BadChar {
        line: usize,
        column: usize,
        ch: char,
    },
    #[error("{line}:{column}: `!` may only negate a proposition or a dependence atom")]
    NegationOfCompound { line: usize, column: usize },
    #[error("{line}:{column}: `|` and `cor` cannot be mixed without parentheses")]
    MixedDisjunction { line: usize, column: usize },
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let mut push = |tok: Tok| {
            out.push(Spanned {
                tok,
                line: start_line,
                column: start_col,
            })
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '&' => push(Tok::And),
            '|' => push(Tok::Bar),
            '!' => push(Tok::Bang),
            '(' => push(Tok::LParen),
            ')' => push(Tok::RParen),
            ',' => push(Tok::Comma),
            ';' => push(Tok::Semi),
            '[' if chars.get(i + 1) == Some(&']') => {
                push(Tok::Box);
                i += 2;
                col += 2;
                continue;
            }
            '<' if chars.get(i + 1) == Some(&'>') => {
                push(Tok::Dia);
                i += 2;
                col += 2;
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                col += i - start;
                push(match word.as_str() {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "and" => Tok::And,
                    "cor" => Tok::Cor,
                    "box" => Tok::Box,
                    "dia" => Tok::Dia,
                    "dep" => Tok::Dep,
                    _ => Tok::Ident(word),
                });
                continue;
            }
            other => {
                return Err(ParseError::BadChar {
                    line,
                    column: col,
                    ch: other,
                })
            }
        }
        i += 1;
        col += 1;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let t = self.peek();
        ParseError::Unexpected {
            line: t.line,
            column: t.column,
            found: t.tok.to_string(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if self.peek().tok == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&[expected]))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and_expr()?;
        let mut kind: Option<Tok> = None;
        loop {
            let t = self.peek().clone();
            match t.tok {
                Tok::Bar | Tok::Cor => {
                    if let Some(k) = &kind {
                        if *k != t.tok {
                            return Err(ParseError::MixedDisjunction {
                                line: t.line,
                                column: t.column,
                            });
                        }
                    }
                    self.bump();
                    let rhs = self.and_expr()?;
                    lhs = if t.tok == Tok::Bar {
                        Formula::split_or(lhs, rhs)
                    } else {
                        Formula::classical_or(lhs, rhs)
                    };
                    kind = Some(t.tok);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn and_expr(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek().tok == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().tok {
            Tok::Box => {
                self.bump();
                Ok(Formula::boxed(self.unary()?))
            }
            Tok::Dia => {
                self.bump();
                Ok(Formula::diamond(self.unary()?))
            }
            Tok::Bang => {
                let bang = self.bump();
                match self.peek().tok.clone() {
                    Tok::Ident(name) => {
                        self.bump();
                        Ok(Formula::NegAtom(Prop(name)))
                    }
                    Tok::Dep => Ok(Formula::NegDep(self.dep()?)),
                    Tok::True | Tok::False | Tok::LParen | Tok::Box | Tok::Dia | Tok::Bang => {
                        Err(ParseError::NegationOfCompound {
                            line: bang.line,
                            column: bang.column,
                        })
                    }
                    _ => Err(self.unexpected(&["identifier", "`dep`"])),
                }
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().tok.clone() {
            Tok::True => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::Bot)
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Atom(Prop(name)))
            }
            Tok::Dep => Ok(Formula::Dep(self.dep()?)),
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.unexpected(&[
                "`true`",
                "`false`",
                "identifier",
                "`dep`",
                "`(`",
                "`box`",
                "`dia`",
                "`!`",
            ])),
        }
    }

    fn ident(&mut self) -> Result<Prop, ParseError> {
        match self.peek().tok.clone() {
            Tok::Ident(name) => {
                self.bump();
                debug_assert!(!KEYWORDS.contains(&name.as_str()));
                Ok(Prop(name))
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    fn dep(&mut self) -> Result<DepAtom, ParseError> {
        self.expect(Tok::Dep, "`dep`")?;
        self.expect(Tok::LParen, "`(`")?;
        let mut determiners = Vec::new();
        if self.peek().tok != Tok::Semi {
            determiners.push(self.ident()?);
            loop {
                match self.peek().tok {
                    Tok::Comma => {
                        self.bump();
                        determiners.push(self.ident()?);
                    }
                    Tok::Semi => break,
                    _ => return Err(self.unexpected(&["`,`", "`;`"])),
                }
            }
        }
        self.expect(Tok::Semi, "`;`")?;
        let target = self.ident()?;
        self.expect(Tok::RParen, "`)`")?;
        Ok(DepAtom::new(determiners, target))
    }
}

/// Parses formula text into its unique AST.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.formula()?;
    if p.peek().tok != Tok::Eof {
        let expected: &[&str] = &["`&`", "`|`", "`cor`", "end of input"];
        return Err(p.unexpected(expected));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap_or_else(|e| panic!("{s}: {e}"))
    }

    #[test]
    fn unary_dep() {
        assert_eq!(p("dep(p1; q)"), Formula::dep(&["p1"], "q"));
    }

    #[test]
    fn split_of_conjunctions() {
        let expected = Formula::split_or(
            Formula::and(Formula::atom("r1"), Formula::dep(&[], "p1")),
            Formula::and(Formula::atom("r2"), Formula::dep(&[], "p2")),
        );
        assert_eq!(p("(r1 & dep(; p1)) | (r2 & dep(; p2))"), expected);
    }

    #[test]
    fn nested_boxes() {
        assert_eq!(
            p("box box dep(; p2)"),
            Formula::boxed(Formula::boxed(Formula::dep(&[], "p2")))
        );
        assert_eq!(
            p("[] <> p"),
            Formula::boxed(Formula::diamond(Formula::atom("p")))
        );
    }

    #[test]
    fn conjunction_binds_tighter() {
        assert_eq!(
            p("p | q & r"),
            Formula::split_or(
                Formula::atom("p"),
                Formula::and(Formula::atom("q"), Formula::atom("r"))
            )
        );
        assert_eq!(
            p("p and q"),
            Formula::and(Formula::atom("p"), Formula::atom("q"))
        );
    }

    #[test]
    fn disjunctions_are_left_associative() {
        assert_eq!(
            p("a cor b cor c"),
            Formula::classical_or(
                Formula::classical_or(Formula::atom("a"), Formula::atom("b")),
                Formula::atom("c")
            )
        );
    }

    #[test]
    fn negations() {
        assert_eq!(p("!p"), Formula::neg_atom("p"));
        assert_eq!(
            p("!dep(a,b;c)"),
            Formula::NegDep(DepAtom::new(
                vec![Prop::new("a").unwrap(), Prop::new("b").unwrap()],
                Prop::new("c").unwrap()
            ))
        );
        assert!(matches!(
            parse("!(p & q)"),
            Err(ParseError::NegationOfCompound { line: 1, column: 1 })
        ));
        assert!(matches!(
            parse("!true"),
            Err(ParseError::NegationOfCompound { .. })
        ));
    }

    #[test]
    fn mixing_disjunctions_is_rejected() {
        assert!(matches!(
            parse("p | q cor r"),
            Err(ParseError::MixedDisjunction { line: 1, column: 7 })
        ));
        assert!(parse("(p | q) cor r").is_ok());
    }

    #[test]
    fn comments_and_positions() {
        assert_eq!(p("# leading\n p # trailing\n & q"), p("p & q"));
        match parse("p &\n  & q") {
            Err(ParseError::Unexpected {
                line,
                column,
                expected,
                ..
            }) => {
                assert_eq!((line, column), (2, 3));
                assert!(expected.contains(&"identifier".to_string()));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_ary_and_duplicate_determiners() {
        assert_eq!(p("dep(;q)"), Formula::dep(&[], "q"));
        assert_eq!(p("dep(p,p;q)"), Formula::dep(&["p", "p"], "q"));
        assert!(parse("dep(q)").is_err());
        assert!(parse("dep(p,;q)").is_err());
    }

    #[test]
    fn keywords_are_not_identifiers() {
        assert!(parse("box").is_err());
        assert!(parse("dep(box; q)").is_err());
        assert!(parse("p q").is_err());
        assert!(parse("p $ q").is_err());
    }
}
