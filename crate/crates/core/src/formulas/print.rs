//! Concrete syntax output. `parse_formula(&f.to_string()) == f` for every AST.

use std::fmt::{self, Display, Write};

use super::formula::Formula;
use super::term::{SkolemId, Term};

/// Optional display names for Skolem symbols (used for named parameters).
pub type SymbolNames<'a> = &'a dyn Fn(SkolemId) -> Option<String>;

fn no_names(_: SkolemId) -> Option<String> {
    None
}

const P_ADD: u8 = 1;
const P_MUL: u8 = 2;
const P_ATOM: u8 = 3;

pub fn write_term(out: &mut impl Write, t: &Term, names: SymbolNames) -> fmt::Result {
    term_prec(out, t, 0, names)
}

fn term_prec(out: &mut impl Write, t: &Term, ctx: u8, names: SymbolNames) -> fmt::Result {
    let (p, paren) = match t {
        Term::Add(..) => (P_ADD, ctx > P_ADD),
        Term::Mul(..) => (P_MUL, ctx > P_MUL),
        _ => (P_ATOM, false),
    };
    if paren {
        out.write_char('(')?;
    }
    match t {
        Term::Var(v) => out.write_str(v)?,
        Term::Zero => out.write_char('0')?,
        Term::Succ(a) => {
            out.write_str("S(")?;
            term_prec(out, a, 0, names)?;
            out.write_char(')')?;
        }
        Term::Add(a, b) => {
            term_prec(out, a, p, names)?;
            out.write_str(" + ")?;
            term_prec(out, b, p + 1, names)?;
        }
        Term::Mul(a, b) => {
            term_prec(out, a, p, names)?;
            out.write_char('*')?;
            term_prec(out, b, p + 1, names)?;
        }
        Term::Skolem(id, args) => {
            match names(*id) {
                Some(n) if args.is_empty() => out.write_str(&n)?,
                _ => write!(out, "{id}")?,
            }
            if !args.is_empty() {
                out.write_char('(')?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.write_str(", ")?;
                    }
                    term_prec(out, a, 0, names)?;
                }
                out.write_char(')')?;
            }
        }
    }
    if paren {
        out.write_char(')')?;
    }
    Ok(())
}

const F_QUANT: u8 = 0;
const F_IMP: u8 = 1;
const F_OR: u8 = 2;
const F_AND: u8 = 3;
const F_NOT: u8 = 4;
const F_ATOM: u8 = 5;

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Eq(..) | Formula::Le(..) => F_ATOM,
        Formula::Not(g) if matches!(**g, Formula::Eq(..)) => F_ATOM,
        Formula::Not(_) => F_NOT,
        Formula::And(..) => F_AND,
        Formula::Or(..) => F_OR,
        Formula::Implies(..) => F_IMP,
        _ => F_QUANT,
    }
}

pub fn write_formula(out: &mut impl Write, f: &Formula, names: SymbolNames) -> fmt::Result {
    formula_prec(out, f, 0, true, names)
}

/// `tail` is true when nothing follows `f` inside the current parentheses,
/// which is the only place a quantifier may appear unwrapped: its body
/// extends as far right as possible.
fn formula_prec(out: &mut impl Write, f: &Formula, ctx: u8, tail: bool, names: SymbolNames) -> fmt::Result {
    let p = prec(f);
    let paren = if p == F_QUANT { !tail || ctx > F_NOT } else { p < ctx };
    if paren {
        out.write_char('(')?;
    }
    let tail = tail || paren;
    match f {
        Formula::Eq(a, b) => atom(out, a, " = ", b, names)?,
        Formula::Le(a, b) => atom(out, a, " <= ", b, names)?,
        Formula::Not(g) => match &**g {
            Formula::Eq(a, b) => atom(out, a, " != ", b, names)?,
            g => {
                out.write_char('!')?;
                // Wrap everything except a further `!`.
                let inner = if prec(g) == F_NOT { F_NOT } else { F_ATOM + 1 };
                formula_prec(out, g, inner, tail, names)?;
            }
        },
        Formula::And(a, b) => binary(out, a, " & ", b, F_AND, F_AND + 1, tail, names)?,
        Formula::Or(a, b) => binary(out, a, " | ", b, F_OR, F_OR + 1, tail, names)?,
        Formula::Implies(a, b) => binary(out, a, " -> ", b, F_IMP + 1, F_IMP, tail, names)?,
        Formula::Forall(..) | Formula::Exists(..) => {
            let (kw, is_forall) = match f {
                Formula::Forall(..) => ("forall", true),
                _ => ("exists", false),
            };
            out.write_str(kw)?;
            out.write_char(' ')?;
            // Collapse a run of unbounded quantifiers of one kind into a list.
            let mut cur = f;
            let mut first = true;
            while let (Formula::Forall(v, g), true) | (Formula::Exists(v, g), false) = (cur, is_forall) {
                if !first {
                    out.write_str(", ")?;
                }
                out.write_str(v)?;
                first = false;
                cur = g;
            }
            quant_body(out, cur, names)?;
        }
        Formula::BoundedForall(v, t, g) | Formula::BoundedExists(v, t, g) => {
            let kw = if matches!(f, Formula::BoundedForall(..)) { "forall" } else { "exists" };
            write!(out, "{kw} {v} <= ")?;
            write_term(out, t, names)?;
            quant_body(out, g, names)?;
        }
    }
    if paren {
        out.write_char(')')?;
    }
    Ok(())
}

fn quant_body(out: &mut impl Write, body: &Formula, names: SymbolNames) -> fmt::Result {
    if prec(body) == F_QUANT {
        out.write_char(' ')?;
        formula_prec(out, body, 0, true, names)
    } else {
        out.write_str(" (")?;
        formula_prec(out, body, 0, true, names)?;
        out.write_char(')')
    }
}

fn atom(out: &mut impl Write, a: &Term, op: &str, b: &Term, names: SymbolNames) -> fmt::Result {
    write_term(out, a, names)?;
    out.write_str(op)?;
    write_term(out, b, names)
}

#[allow(clippy::too_many_arguments)]
fn binary(
    out: &mut impl Write,
    a: &Formula,
    op: &str,
    b: &Formula,
    left: u8,
    right: u8,
    tail: bool,
    names: SymbolNames,
) -> fmt::Result {
    formula_prec(out, a, left, false, names)?;
    out.write_str(op)?;
    formula_prec(out, b, right, tail, names)
}

impl Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_term(&mut s, self, &no_names)?;
        f.write_str(&s)
    }
}

impl Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_formula(&mut s, self, &no_names)?;
        f.write_str(&s)
    }
}

pub fn term_to_string(t: &Term, names: SymbolNames) -> String {
    let mut s = String::new();
    write_term(&mut s, t, names).expect("writing to a String");
    s
}

pub fn formula_to_string(f: &Formula, names: SymbolNames) -> String {
    let mut s = String::new();
    write_formula(&mut s, f, names).expect("writing to a String");
    s
}
