use std::fmt::Write as _;

/// Largest variable count [`sat_oracle`] enumerates.
pub const SAT_ORACLE_MAX_VARS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CnfError {
    #[error("a CNF needs at least one variable")]
    NoVariables,
    #[error("clause {clause} is empty")]
    EmptyClause { clause: usize },
    #[error("clause {clause} contains x{var} and its negation")]
    Tautology { clause: usize, var: usize },
    #[error("literal {literal} out of range for {num_vars} variables")]
    LiteralOutOfRange { literal: i64, num_vars: usize },
    #[error("literal 0 inside clause {clause}")]
    ZeroLiteral { clause: usize },
    #[error("line {line}: missing or malformed `p cnf <vars> <clauses>` header")]
    Header { line: usize },
    #[error("line {line}: unexpected token {token:?}")]
    Token { line: usize, token: String },
    #[error("header declares {declared} clauses, found {found}")]
    ClauseCount { declared: usize, found: usize },
    #[error("last clause is not terminated by 0")]
    Unterminated,
    #[error("{num_vars} variables exceed the oracle bound {bound}")]
    TooManyVariables { num_vars: usize, bound: usize },
}

/// A CNF over variables `1..=n`. Clauses are stored as sorted, duplicate-free
/// lists of signed variable indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<i64>>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i64>>) -> Result<Self, CnfError> {
        if num_vars == 0 {
            return Err(CnfError::NoVariables);
        }
        let mut out = Vec::with_capacity(clauses.len());
        for (ci, mut clause) in clauses.into_iter().enumerate() {
            for &lit in &clause {
                if lit == 0 {
                    return Err(CnfError::ZeroLiteral { clause: ci });
                }
                if lit.unsigned_abs() as usize > num_vars {
                    return Err(CnfError::LiteralOutOfRange {
                        literal: lit,
                        num_vars,
                    });
                }
            }
            clause.sort_by_key(|l| (l.abs(), *l));
            clause.dedup();
            if clause.is_empty() {
                return Err(CnfError::EmptyClause { clause: ci });
            }
            if let Some(w) = clause.windows(2).find(|w| w[0] == -w[1]) {
                return Err(CnfError::Tautology {
                    clause: ci,
                    var: w[0].unsigned_abs() as usize,
                });
            }
            out.push(clause);
        }
        Ok(CnfFormula {
            num_vars,
            clauses: out,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<i64>] {
        &self.clauses
    }

    pub fn max_width(&self) -> usize {
        self.clauses.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// How variable `var` (1-based) occurs in clause `clause` (0-based):
    /// `Some(true)` positively, `Some(false)` negatively.
    pub fn occurrence(&self, clause: usize, var: usize) -> Option<bool> {
        self.clauses[clause]
            .iter()
            .find(|l| l.unsigned_abs() as usize == var)
            .map(|&l| l > 0)
    }

    pub fn is_satisfied_by(&self, a: &Assignment) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| a.value(l.unsigned_abs() as usize) == (l > 0))
        })
    }

    /// DIMACS text: header, then one zero-terminated clause per line.
    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                write!(s, "{l} ").unwrap();
            }
            s.push_str("0\n");
        }
        s
    }

    /// Reads DIMACS: `c` comment lines, a `p cnf n m` header, clauses as
    /// zero-terminated literal sequences that may span lines, and an
    /// optional `%` end marker.
    pub fn parse_dimacs(text: &str) -> Result<Self, CnfError> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        'lines: for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('c') {
                continue;
            }
            if trimmed.starts_with('%') {
                break;
            }
            if trimmed.starts_with('p') {
                let parts: Vec<&str> = trimmed.split_whitespace().collect();
                match (header, parts.as_slice()) {
                    (None, ["p", "cnf", n, m]) => {
                        let n = n.parse().map_err(|_| CnfError::Header { line: line_no })?;
                        let m = m.parse().map_err(|_| CnfError::Header { line: line_no })?;
                        header = Some((n, m));
                        continue;
                    }
                    _ => return Err(CnfError::Header { line: line_no }),
                }
            }
            let Some((n, _)) = header else {
                return Err(CnfError::Header { line: line_no });
            };
            for token in trimmed.split_whitespace() {
                if token == "%" {
                    break 'lines;
                }
                let lit: i64 = token.parse().map_err(|_| CnfError::Token {
                    line: line_no,
                    token: token.to_string(),
                })?;
                if lit == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else if lit.unsigned_abs() as usize > n {
                    return Err(CnfError::LiteralOutOfRange {
                        literal: lit,
                        num_vars: n,
                    });
                } else {
                    current.push(lit);
                }
            }
        }
        let Some((n, m)) = header else {
            return Err(CnfError::Header { line: 1 });
        };
        if !current.is_empty() {
            return Err(CnfError::Unterminated);
        }
        if clauses.len() != m {
            return Err(CnfError::ClauseCount {
                declared: m,
                found: clauses.len(),
            });
        }
        CnfFormula::new(n, clauses)
    }
}

/// A truth value per variable, indexed from 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment(values)
    }

    pub fn from_mask(num_vars: usize, mask: u64) -> Self {
        Assignment((0..num_vars).map(|j| (mask >> j) & 1 == 1).collect())
    }

    pub fn value(&self, var: usize) -> bool {
        self.0[var - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Exhaustive search over all `2^n` assignments, variable `j` at bit `j-1`,
/// counting up from all-false.
pub fn sat_oracle(phi: &CnfFormula) -> Result<Option<Assignment>, CnfError> {
    let n = phi.num_vars();
    if n > SAT_ORACLE_MAX_VARS {
        return Err(CnfError::TooManyVariables {
            num_vars: n,
            bound: SAT_ORACLE_MAX_VARS,
        });
    }
    let masks: Vec<(u64, u64)> = phi
        .clauses()
        .iter()
        .map(|c| {
            c.iter().fold((0, 0), |(pos, neg), &l| {
                let bit = 1u64 << (l.unsigned_abs() - 1);
                if l > 0 {
                    (pos | bit, neg)
                } else {
                    (pos, neg | bit)
                }
            })
        })
        .collect();
    Ok((0..1u64 << n)
        .find(|&a| {
            masks
                .iter()
                .all(|&(pos, neg)| a & pos != 0 || !a & neg != 0)
        })
        .map(|a| Assignment::from_mask(n, a)))
}
