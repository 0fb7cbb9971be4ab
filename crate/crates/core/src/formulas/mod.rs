//! Terms and formulas over `{0, S, +, *, <=}` plus Skolem symbols: AST,
//! concrete syntax, and the normalization pipeline to rectified negation
//! normal form.

mod formula;
mod normalize;
mod parse;
mod print;
mod term;

pub use formula::Formula;
pub use normalize::{desugar_bounded, is_rnnf, nnf, rnnf};
pub use parse::{parse_formula, parse_lines, parse_term, strip_comment, ParseError, MAX_NUMERAL};
pub use print::{formula_to_string, term_to_string, write_formula, write_term, SymbolNames};
pub use term::{FunSym, SkolemId, Term};
