//! Model checking for modal dependence logic under team semantics.

pub mod formula;
pub mod fragments;
pub mod kripke;
pub mod random;
pub mod reductions;
pub mod semantics;

pub use formula::{parse, DepAtom, Formula, FragmentProfile, Operator, ParseError, Prop};
pub use kripke::{KripkeBuilder, KripkeStructure, StructureError, Team};
pub use reductions::{sat_oracle, Assignment, CnfFormula, Construction, Reduction};
pub use semantics::{check, verify_certificate, Certificate, CheckOutcome, Evaluator};
