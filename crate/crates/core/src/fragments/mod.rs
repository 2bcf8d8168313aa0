//! Complexity classification of operator fragments and the polynomial-time
//! algorithms for the tractable ones.

mod algorithms;
mod funcenum;

use std::fmt;

use serde::Serialize;

pub use algorithms::{check_flat, check_topdown, check_trivial_vee, nor_distribute};
pub use funcenum::{
    check_funcenum, funcenum_bound, function_formula, substitute_function, BooleanFunctionTable,
    FuncEnumOutcome, MAX_TABLE_ARITY,
};

use crate::formula::{profile, Formula, FragmentProfile, Operator};
use crate::kripke::{KripkeStructure, Team};
use crate::semantics::{self, Certificate};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FragmentError {
    #[error("fragment violation: {algorithm} does not handle `{operator}`")]
    Violation {
        algorithm: &'static str,
        operator: Operator,
    },
    #[error("function table has arity {got}, dependence atom has arity {expected}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("dependence atom of arity {arity} exceeds the bound {bound}")]
    ArityBound { arity: usize, bound: usize },
    #[error("function tables support arity at most {max}, got {arity}")]
    ArityTooLarge { arity: usize, max: usize },
    #[error("table bits {bits:#x} do not fit arity {arity}")]
    TableOutOfRange { arity: usize, bits: u64 },
    #[error("no dependence atom with index {index} (formula has {count})")]
    NoSuchAtom { index: usize, count: usize },
    #[error(
        "{sigma} dependence atoms exceed log2 of {worlds} worlds; use trivial-accept or backtrack"
    )]
    TooManyDepAtoms { sigma: usize, worlds: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Status {
    #[serde(rename = "NP-complete")]
    NpComplete,
    #[serde(rename = "in-NP-open")]
    InNpOpen,
    #[serde(rename = "in-P")]
    InP,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::NpComplete => "NP-complete",
            Status::InNpOpen => "in-NP-open",
            Status::InP => "in-P",
        })
    }
}

/// Declared in increasing dispatch priority.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Algorithm {
    #[serde(rename = "backtrack")]
    Backtrack,
    #[serde(rename = "nor-distribute+funcenum")]
    NorDistributeFuncenum,
    #[serde(rename = "trivial-accept-or-funcenum")]
    TrivialAcceptOrFuncenum,
    #[serde(rename = "topdown")]
    Topdown,
    #[serde(rename = "flat-pointwise")]
    FlatPointwise,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Backtrack => "backtrack",
            Algorithm::NorDistributeFuncenum => "nor-distribute+funcenum",
            Algorithm::TrivialAcceptOrFuncenum => "trivial-accept-or-funcenum",
            Algorithm::Topdown => "topdown",
            Algorithm::FlatPointwise => "flat-pointwise",
        })
    }
}

/// `+` required, `-` forbidden, `*` irrelevant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mark {
    Plus,
    Minus,
    Any,
}

/// Column order of the tables.
const COLUMNS: [Operator; 7] = [
    Operator::Box,
    Operator::Diamond,
    Operator::And,
    Operator::SplitOr,
    Operator::Neg,
    Operator::Dep,
    Operator::ClassicalOr,
];

pub struct Row {
    pub key: &'static str,
    marks: &'static str,
    pub status: Status,
    pub algorithm: Algorithm,
}

impl Row {
    fn mark(&self, column: usize) -> Mark {
        match self.marks.as_bytes()[column] {
            b'+' => Mark::Plus,
            b'-' => Mark::Minus,
            _ => Mark::Any,
        }
    }

    fn matches(&self, ops: &FragmentProfile) -> bool {
        COLUMNS
            .iter()
            .enumerate()
            .all(|(i, &op)| match self.mark(i) {
                Mark::Plus => ops.has(op),
                Mark::Minus => !ops.has(op),
                Mark::Any => true,
            })
    }

    fn specificity(&self) -> usize {
        (0..COLUMNS.len())
            .filter(|&i| self.mark(i) != Mark::Any)
            .count()
    }

    /// The `+`/`-`/`*` pattern over `box dia & | ! dep cor`.
    pub fn marks(&self) -> &'static str {
        self.marks
    }
}

const fn row(key: &'static str, marks: &'static str, status: Status, algorithm: Algorithm) -> Row {
    Row {
        key,
        marks,
        status,
        algorithm,
    }
}

use Algorithm::*;
use Status::*;

/// Unbounded dependence arity.
pub static UNBOUNDED_TABLE: [Row; 9] = [
    row("T1R1", "**++*+*", NpComplete, Backtrack),
    row("T1R2", "+**+*+*", NpComplete, Backtrack),
    row("T1R3", "***+**+", NpComplete, Backtrack),
    row("T1R4", "*+***+*", NpComplete, Backtrack),
    row("T1R5", "*++***+", NpComplete, Backtrack),
    row("T1R6", "---+*+-", InNpOpen, Backtrack),
    row("T1R7", "**--*-*", InP, NorDistributeFuncenum),
    row("T1R8", "*-*-***", InP, Topdown),
    row("T1R9", "*****--", InP, FlatPointwise),
];

/// Dependence arity bounded by a fixed `k`.
pub static BOUNDED_TABLE: [Row; 10] = [
    row("T2R1", "**++*+*", NpComplete, Backtrack),
    row("T2R2", "+**+*+*", NpComplete, Backtrack),
    row("T2R3", "***+**+", NpComplete, Backtrack),
    row("T2R4", "*++**+*", NpComplete, Backtrack),
    row("T2R5", "*++***+", NpComplete, Backtrack),
    row("T2R6", "*+*+*+*", NpComplete, Backtrack),
    row("T2R7", "**--***", InP, NorDistributeFuncenum),
    row("T2R8", "*-*-***", InP, Topdown),
    row("T2R9", "---***-", InP, TrivialAcceptOrFuncenum),
    row("T2R10", "*****--", InP, FlatPointwise),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    /// Stable row key, `T1R1`..`T1R9` or `T2R1`..`T2R10`.
    pub key: &'static str,
    pub status: Status,
    pub algorithm: Algorithm,
    /// Whether the bounded-arity table was used.
    pub bounded: bool,
    pub profile: FragmentProfile,
}

impl Classification {
    pub fn row_number(&self) -> usize {
        self.key[3..].parse().expect("keys end in a row number")
    }

    pub fn description(&self) -> String {
        let table = if self.bounded {
            "bounded-arity"
        } else {
            "unbounded-arity"
        };
        format!("{table} table, row {}", self.row_number())
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t{}",
            self.key,
            self.status,
            self.algorithm,
            self.description()
        )
    }
}

/// Places a formula in the tables.
///
/// The bounded table applies when an arity bound is given and every
/// dependence atom respects it. Among matching rows the one with the
/// fastest algorithm wins, then the most specific. The bounded table's row
/// for `dia` with `|` and `dep` is open for bound 0. In the open
/// unbounded `|`/`dep` row, a known structure size with `2^σ > |S|` selects
/// the trivial acceptance.
pub fn classify(
    phi: &Formula,
    arity_bound: Option<usize>,
    structure_size: Option<usize>,
) -> Classification {
    let pr = profile(phi);
    let bounded = match (arity_bound, pr.max_arity) {
        (None, _) => false,
        (Some(_), None) => true,
        (Some(k), Some(a)) => a <= k,
    };
    let table: &[Row] = if bounded {
        &BOUNDED_TABLE
    } else {
        &UNBOUNDED_TABLE
    };
    let best = table
        .iter()
        .enumerate()
        .filter(|(_, r)| r.matches(&pr))
        .max_by_key(|(i, r)| (r.algorithm, r.specificity(), std::cmp::Reverse(*i)))
        .map(|(_, r)| r)
        .expect("the tables cover every operator set");
    let mut status = best.status;
    let mut algorithm = best.algorithm;
    if best.key == "T2R6" && arity_bound == Some(0) {
        status = InNpOpen;
    }
    if best.key == "T1R6" && structure_size.is_some_and(|n| algorithms::exceeds_log(pr.sigma, n)) {
        algorithm = TrivialAcceptOrFuncenum;
    }
    Classification {
        key: best.key,
        status,
        algorithm,
        bounded,
        profile: pr,
    }
}

#[derive(Clone, Debug)]
pub struct DispatchOutcome {
    pub holds: bool,
    pub classification: Classification,
    /// The algorithm that produced the verdict; differs from the
    /// classification's when a fast path was not applicable.
    pub used: Algorithm,
    /// Search nodes for backtracking, function tuples for enumeration.
    pub work: Option<u128>,
    pub certificate: Option<Certificate>,
}

/// Classifies, then runs the selected algorithm, falling back to the
/// backtracking checker whenever a fast path does not apply.
pub fn dispatch_check(
    w: &KripkeStructure,
    t: &Team,
    phi: &Formula,
    arity_bound: Option<usize>,
) -> Result<DispatchOutcome, FragmentError> {
    let classification = classify(phi, arity_bound, Some(w.num_worlds()));
    let done = |holds, used, work| DispatchOutcome {
        holds,
        classification: classification.clone(),
        used,
        work,
        certificate: None,
    };
    let k = arity_bound.unwrap_or(0);
    let table_ok = classification.profile.max_arity.unwrap_or(0) <= MAX_TABLE_ARITY;
    match classification.algorithm {
        FlatPointwise => return Ok(done(check_flat(w, t, phi)?, FlatPointwise, None)),
        Topdown => return Ok(done(check_topdown(w, t, phi)?, Topdown, None)),
        TrivialAcceptOrFuncenum => {
            if check_trivial_vee(w, t, phi)? == Some(true) {
                return Ok(done(true, TrivialAcceptOrFuncenum, None));
            }
            if classification.bounded && table_ok {
                let out = check_funcenum(w, t, phi, k)?;
                return Ok(done(out.holds, TrivialAcceptOrFuncenum, Some(out.tuples)));
            }
        }
        NorDistributeFuncenum if table_ok => {
            let mut tuples = 0;
            let mut holds = false;
            for piece in nor_distribute(phi)? {
                let out = check_funcenum(w, t, &piece, k.max(piece_arity(&piece)))?;
                tuples += out.tuples;
                if out.holds {
                    holds = true;
                    break;
                }
            }
            return Ok(done(holds, NorDistributeFuncenum, Some(tuples)));
        }
        NorDistributeFuncenum | Backtrack => {}
    }
    let out = semantics::check(w, t, phi);
    Ok(DispatchOutcome {
        holds: out.holds,
        classification,
        used: Backtrack,
        work: Some(out.nodes_explored as u128),
        certificate: out.certificate,
    })
}

fn piece_arity(phi: &Formula) -> usize {
    phi.dep_atoms().iter().map(|d| d.arity()).max().unwrap_or(0)
}
