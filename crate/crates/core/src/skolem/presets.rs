use crate::formulas::{parse_formula, Formula};

use super::theory::Theory;
use super::SkolemError;

pub const PRESET_NAMES: [&str; 6] = ["EX2", "EX3", "T1", "IND_SQ", "OMEGA0", "EX3_PLUS"];

/// Induction for `psi(x) = exists y <= x*x (y = x*x)`.
pub const IND_SQ: &str = "((exists y <= 0*0 (y = 0*0)) \
    & (forall x ((exists y <= x*x (y = x*x)) -> exists y <= S(x)*S(x) (y = S(x)*S(x))))) \
    -> forall x exists y <= x*x (y = x*x)";

pub const OMEGA0: &str = "forall x exists y <= x*x (y = x*x)";

pub const EX3: [&str; 4] = [
    "forall x (S(x) != 0)",
    "forall x, y (x + S(y) = S(x + y))",
    "forall x exists z (x != 0 -> x = S(z))",
    "forall x, y exists z (x <= y -> z + x = y)",
];

/// The negation of `forall x (x <= 0 -> x = 0)`.
pub const EX3_TARGET_NEGATION: &str = "exists x (x <= 0 & x != 0)";

/// The fourteen universal sentences of the second fragment, open; each is
/// closed over its variables in order of first occurrence.
pub const T1_UNIVERSAL: [&str; 14] = [
    "x + 0 = x",
    "x + S(y) = S(x + y)",
    "x*0 = 0",
    "x*S(y) = x*y + x",
    "x <= 0 <-> x = 0",
    "x <= S(y) <-> x = S(y) | x <= y",
    "x <= y | y <= x",
    "x <= y & y <= z -> x <= z",
    "x <= z + x",
    "x <= x + z",
    "x + z <= y + z -> x <= y",
    "z != 0 & x*z <= y*z -> x <= y",
    "x != y <-> S(x) <= y | S(y) <= x",
    "!(x <= y) <-> S(y) <= x",
];

pub const T1_EXISTENTIAL: [&str; 2] =
    ["forall x, y (x <= y -> exists z (z + x = y))", "forall x, y (y != 0 -> exists q, r (x = r + q*y & r <= y))"];

fn parse(text: &str) -> Formula {
    parse_formula(text).expect("preset axioms parse")
}

fn close(f: Formula) -> Formula {
    let vars = f.free_vars();
    let vars: Vec<&str> = vars.iter().map(String::as_str).collect();
    Formula::forall_many(&vars, f)
}

/// Axioms of a named preset theory.
pub fn preset_axioms(name: &str) -> Result<Vec<Formula>, SkolemError> {
    Ok(match name {
        "EX2" => vec![parse("forall x (x*0 = 0)"), parse(IND_SQ)],
        "EX3" => EX3.iter().map(|s| parse(s)).collect(),
        "EX3_PLUS" => {
            let mut v: Vec<Formula> = EX3.iter().map(|s| parse(s)).collect();
            v.push(parse(EX3_TARGET_NEGATION));
            v
        }
        "T1" => T1_UNIVERSAL.iter().map(|s| close(parse(s))).chain(T1_EXISTENTIAL.iter().map(|s| parse(s))).collect(),
        "IND_SQ" => vec![parse(IND_SQ)],
        "OMEGA0" => vec![parse(OMEGA0)],
        _ => return Err(SkolemError::UnknownPreset(name.to_string())),
    })
}

pub fn preset(name: &str) -> Result<Theory, SkolemError> {
    Theory::from_axioms(name, preset_axioms(name)?)
}
