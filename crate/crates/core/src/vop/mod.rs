//! Normal-ordered vertex operators: primitives, expression trees, the
//! sum-of-primitives normal form and the operator-word grammar.

mod ir;
mod parse;

pub use ir::{Homogeneity, Leg, NormalForm, PowerFactor, Primitive, Side, VopError, VopExpr};
pub use parse::{parse_expr, Atom, ParseError, Word, WordSum};
