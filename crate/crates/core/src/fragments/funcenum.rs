//! Model checking by guessing the functions behind the dependence atoms.
//!
//! `dep(p1..pk; q)` holds on a team iff some Boolean function `f` gives
//! `q = f(p1..pk)` at every member. Fixing a function table per atom leaves a
//! plain modal formula, which is flat.

use super::algorithms::{check_flat, exceeds_log};
use super::FragmentError;
use crate::formula::{DepAtom, Formula, Operator, Prop};
use crate::kripke::{KripkeStructure, Team};

/// Largest supported arity; a table is stored in one `u64`.
pub const MAX_TABLE_ARITY: usize = 6;

/// Truth table of a `k`-ary Boolean function. Row `x` is stored at bit
/// `x_0·2^(k-1) + … + x_(k-1)`, the first argument being most significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BooleanFunctionTable {
    arity: usize,
    bits: u64,
}

impl BooleanFunctionTable {
    pub fn new(arity: usize, bits: u64) -> Result<Self, FragmentError> {
        if arity > MAX_TABLE_ARITY {
            return Err(FragmentError::ArityTooLarge {
                arity,
                max: MAX_TABLE_ARITY,
            });
        }
        let rows = 1u32 << arity;
        if rows < 64 && bits >> rows != 0 {
            return Err(FragmentError::TableOutOfRange { arity, bits });
        }
        Ok(BooleanFunctionTable { arity, bits })
    }

    pub fn constant(value: bool) -> Self {
        BooleanFunctionTable {
            arity: 0,
            bits: value as u64,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn rows(&self) -> usize {
        1 << self.arity
    }

    pub fn row(&self, index: usize) -> bool {
        (self.bits >> index) & 1 != 0
    }

    pub fn eval(&self, args: &[bool]) -> bool {
        assert_eq!(args.len(), self.arity);
        let index = args.iter().fold(0, |acc, &b| acc << 1 | b as usize);
        self.row(index)
    }

    /// Number of distinct tables of this arity, `2^(2^arity)`.
    pub fn count(arity: usize) -> u128 {
        1u128 << (1u32 << arity)
    }

    /// Every table of `arity` in increasing order of `bits`.
    pub fn all(arity: usize) -> impl Iterator<Item = BooleanFunctionTable> {
        assert!(arity <= MAX_TABLE_ARITY);
        let last = if arity == MAX_TABLE_ARITY {
            u64::MAX
        } else {
            (1u64 << (1 << arity)) - 1
        };
        (0..=last).map(move |bits| BooleanFunctionTable { arity, bits })
    }
}

fn or(l: Formula, r: Formula) -> Formula {
    match (l, r) {
        (Formula::Top, _) | (_, Formula::Top) => Formula::Top,
        (Formula::Bot, x) | (x, Formula::Bot) => x,
        (l, r) => Formula::split_or(l, r),
    }
}

fn and(l: Formula, r: Formula) -> Formula {
    match (l, r) {
        (Formula::Bot, _) | (_, Formula::Bot) => Formula::Bot,
        (Formula::Top, x) | (x, Formula::Top) => x,
        (l, r) => Formula::and(l, r),
    }
}

/// Disjunction over the rows where the table equals `value` of the
/// conjunction of determiner literals selecting that row.
fn dnf(dets: &[Prop], f: &BooleanFunctionTable, value: bool) -> Formula {
    let k = dets.len();
    (0..f.rows())
        .filter(|&x| f.row(x) == value)
        .map(|x| {
            (0..k)
                .map(|i| {
                    let p = dets[i].clone();
                    if (x >> (k - 1 - i)) & 1 == 1 {
                        Formula::Atom(p)
                    } else {
                        Formula::NegAtom(p)
                    }
                })
                .fold(Formula::Top, and)
        })
        .fold(Formula::Bot, or)
}

/// Pointwise `q ↔ f(p1..pk)`: `(¬f ∨ q) ∧ (f ∨ ¬q)`.
pub fn function_formula(d: &DepAtom, f: &BooleanFunctionTable) -> Result<Formula, FragmentError> {
    if f.arity() != d.arity() {
        return Err(FragmentError::ArityMismatch {
            expected: d.arity(),
            got: f.arity(),
        });
    }
    let q = &d.target;
    Ok(and(
        or(dnf(&d.determiners, f, false), Formula::Atom(q.clone())),
        or(dnf(&d.determiners, f, true), Formula::NegAtom(q.clone())),
    ))
}

/// Replaces the `index`-th dependence atom (pre-order, negated atoms not
/// counted) by its function formula.
pub fn substitute_function(
    phi: &Formula,
    index: usize,
    f: &BooleanFunctionTable,
) -> Result<Formula, FragmentError> {
    substitute_all(phi, &mut |i, d| {
        if i == index {
            function_formula(d, f).map(Some)
        } else {
            Ok(None)
        }
    })
    .and_then(|(out, seen)| {
        if index < seen {
            Ok(out)
        } else {
            Err(FragmentError::NoSuchAtom { index, count: seen })
        }
    })
}

/// Rewrites dependence atoms in pre-order; `replace` returns `None` to keep
/// an atom. Also returns the number of atoms visited.
fn substitute_all(
    phi: &Formula,
    replace: &mut dyn FnMut(usize, &DepAtom) -> Result<Option<Formula>, FragmentError>,
) -> Result<(Formula, usize), FragmentError> {
    fn go(
        phi: &Formula,
        next: &mut usize,
        replace: &mut dyn FnMut(usize, &DepAtom) -> Result<Option<Formula>, FragmentError>,
    ) -> Result<Formula, FragmentError> {
        Ok(match phi {
            Formula::Dep(d) => {
                let i = *next;
                *next += 1;
                replace(i, d)?.unwrap_or_else(|| phi.clone())
            }
            Formula::And(l, r) => Formula::and(go(l, next, replace)?, go(r, next, replace)?),
            Formula::SplitOr(l, r) => {
                Formula::split_or(go(l, next, replace)?, go(r, next, replace)?)
            }
            Formula::ClassicalOr(l, r) => {
                Formula::classical_or(go(l, next, replace)?, go(r, next, replace)?)
            }
            Formula::Box(c) => Formula::boxed(go(c, next, replace)?),
            Formula::Diamond(c) => Formula::diamond(go(c, next, replace)?),
            leaf => leaf.clone(),
        })
    }
    let mut next = 0;
    let out = go(phi, &mut next, replace)?;
    Ok((out, next))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FuncEnumOutcome {
    pub holds: bool,
    /// Function-table tuples examined before the verdict.
    pub tuples: u128,
}

/// Tries every tuple of function tables, atoms in pre-order, each atom's
/// tables in increasing order and the first atom varying slowest.
///
/// Requires a `cor`-free formula whose dependence atoms have arity at most
/// `k` and with `2^σ ≤ |S|`, which keeps the number of tuples at most
/// `|S|^(2^k)`. On a one-world structure every dependence atom holds
/// wherever it is evaluated and is replaced by `true` outright.
pub fn check_funcenum(
    w: &KripkeStructure,
    t: &Team,
    phi: &Formula,
    k: usize,
) -> Result<FuncEnumOutcome, FragmentError> {
    let pr = crate::formula::profile(phi);
    if pr.has(Operator::ClassicalOr) {
        return Err(FragmentError::Violation {
            algorithm: "funcenum",
            operator: Operator::ClassicalOr,
        });
    }
    let atoms = phi.dep_atoms();
    if let Some(d) = atoms.iter().find(|d| d.arity() > k) {
        return Err(FragmentError::ArityBound {
            arity: d.arity(),
            bound: k,
        });
    }
    if let Some(d) = atoms.iter().find(|d| d.arity() > MAX_TABLE_ARITY) {
        return Err(FragmentError::ArityTooLarge {
            arity: d.arity(),
            max: MAX_TABLE_ARITY,
        });
    }
    // a negated dependence atom is false on every non-empty team
    let phi = phi.map_bottom_up(&mut |node| match node {
        Formula::NegDep(_) => Formula::Bot,
        other => other,
    });
    let n = w.num_worlds();
    if n == 1 {
        let (flat, _) = substitute_all(&phi, &mut |_, _| Ok(Some(Formula::Top)))?;
        return Ok(FuncEnumOutcome {
            holds: check_flat(w, t, &flat)?,
            tuples: 1,
        });
    }
    if exceeds_log(atoms.len(), n) {
        return Err(FragmentError::TooManyDepAtoms {
            sigma: atoms.len(),
            worlds: n,
        });
    }
    let arities: Vec<usize> = atoms.iter().map(|d| d.arity()).collect();
    let mut tuple: Vec<u64> = vec![0; arities.len()];
    let mut tuples = 0u128;
    loop {
        tuples += 1;
        let (flat, _) = substitute_all(&phi, &mut |i, d| {
            let f = BooleanFunctionTable::new(arities[i], tuple[i])?;
            function_formula(d, &f).map(Some)
        })?;
        if check_flat(w, t, &flat)? {
            return Ok(FuncEnumOutcome {
                holds: true,
                tuples,
            });
        }
        // odometer, last atom fastest
        let mut i = tuple.len();
        loop {
            if i == 0 {
                return Ok(FuncEnumOutcome {
                    holds: false,
                    tuples,
                });
            }
            i -= 1;
            let last = (BooleanFunctionTable::count(arities[i]) - 1) as u64;
            if tuple[i] < last {
                tuple[i] += 1;
                break;
            }
            tuple[i] = 0;
        }
    }
}

/// `|S|^(2^k)`, saturating.
pub fn funcenum_bound(worlds: usize, k: usize) -> u128 {
    let exp = 1u32.checked_shl(k as u32).unwrap_or(u32::MAX);
    (worlds as u128).checked_pow(exp).unwrap_or(u128::MAX)
}
