//! Recursive-descent parser for the concrete syntax.
//!
//! Precedence, loosest first: quantifiers (body extends as far right as
//! possible), `->` / `<->` (right associative), `|`, `&`, `!`, atoms.
//! Terms: `+` below `*`, both left associative. Decimal numerals are sugar for
//! `S`-towers over `0`.

use thiserror::Error;

use super::formula::Formula;
use super::term::{SkolemId, Term};

/// Largest decimal numeral accepted as sugar.
pub const MAX_NUMERAL: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character {ch:?} at {pos}")]
    UnexpectedChar { pos: usize, ch: char },
    #[error("expected {expected} at {pos}, found {found}")]
    Unexpected { pos: usize, expected: String, found: String },
    #[error("unexpected end of input, expected {expected}")]
    UnexpectedEnd { expected: String },
    #[error("unknown symbol {name:?} at {pos}")]
    UnknownSymbol { pos: usize, name: String },
    #[error("numeral at {pos} exceeds {MAX_NUMERAL}")]
    NumeralTooLarge { pos: usize },
}

impl ParseError {
    /// Character offset of the error, if it has one.
    pub fn position(&self) -> Option<usize> {
        match self {
            ParseError::UnexpectedChar { pos, .. }
            | ParseError::Unexpected { pos, .. }
            | ParseError::UnknownSymbol { pos, .. }
            | ParseError::NumeralTooLarge { pos } => Some(*pos),
            ParseError::UnexpectedEnd { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(String),
    Sym(u32),
    LParen,
    RParen,
    Comma,
    Plus,
    Star,
    Eq,
    Le,
    Neq,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Iff,
    Forall,
    Exists,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Num(s) => format!("numeral {s}"),
            Tok::Sym(k) => format!("${k}"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Plus => "'+'".into(),
            Tok::Star => "'*'".into(),
            Tok::Eq => "'='".into(),
            Tok::Le => "'<='".into(),
            Tok::Neq => "'!='".into(),
            Tok::Bang => "'!'".into(),
            Tok::Amp => "'&'".into(),
            Tok::Pipe => "'|'".into(),
            Tok::Arrow => "'->'".into(),
            Tok::Iff => "'<->'".into(),
            Tok::Forall => "'forall'".into(),
            Tok::Exists => "'exists'".into(),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Tokens with their offset and whether they touch the previous token.
fn lex(text: &str) -> Result<Vec<(usize, Tok, bool)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out: Vec<(usize, Tok, bool)> = Vec::new();
    let glued = |start: usize, chars: &[char]| start > 0 && !chars[start - 1].is_whitespace();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let next = chars.get(i + 1).copied();
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' | '[' => Tok::LParen,
            ')' | ']' => Tok::RParen,
            ',' => Tok::Comma,
            '+' => Tok::Plus,
            '*' | '·' | '×' => Tok::Star,
            '=' => Tok::Eq,
            '≤' => Tok::Le,
            '≠' => Tok::Neq,
            '¬' => Tok::Bang,
            '&' | '∧' => Tok::Amp,
            '|' | '∨' => Tok::Pipe,
            '→' => Tok::Arrow,
            '↔' => Tok::Iff,
            '∀' => Tok::Forall,
            '∃' => Tok::Exists,
            '!' if next == Some('=') => {
                i += 1;
                Tok::Neq
            }
            '!' => Tok::Bang,
            '-' if next == Some('>') => {
                i += 1;
                Tok::Arrow
            }
            '<' if next == Some('=') => {
                i += 1;
                Tok::Le
            }
            '<' if next == Some('-') && chars.get(i + 2) == Some(&'>') => {
                i += 2;
                Tok::Iff
            }
            '$' => {
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let digits: String = chars[i + 1..j].iter().collect();
                let k = digits.parse::<u32>().map_err(|_| ParseError::UnexpectedChar { pos: i, ch: c })?;
                i = j;
                out.push((start, Tok::Sym(k), glued(start, &chars)));
                continue;
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                i = j;
                out.push((start, Tok::Num(s), glued(start, &chars)));
                continue;
            }
            c if is_ident_start(c) => {
                let mut j = i;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                i = j;
                let tok = match s.as_str() {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    _ => Tok::Ident(s),
                };
                out.push((start, tok, glued(start, &chars)));
                continue;
            }
            _ => return Err(ParseError::UnexpectedChar { pos: i, ch: c }),
        };
        i += 1;
        out.push((start, tok, glued(start, &chars)));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok, bool)>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(text: &str) -> PResult<Parser> {
        Ok(Parser { toks: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _, _)| *p).unwrap_or(usize::MAX)
    }

    fn error(&self, expected: &str) -> ParseError {
        match self.toks.get(self.pos) {
            Some((pos, t, _)) => {
                ParseError::Unexpected { pos: *pos, expected: expected.to_string(), found: t.describe() }
            }
            None => ParseError::UnexpectedEnd { expected: expected.to_string() },
        }
    }

    /// An argument list: '(' directly attached to the preceding symbol.
    fn call_follows(&self) -> bool {
        matches!(self.toks.get(self.pos), Some((_, Tok::LParen, true)))
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> PResult<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.error(&t.describe()))
        }
    }

    fn finish(&self) -> PResult<()> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Some(Tok::Ident(s)) if s != "S" => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error("variable name")),
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        match self.peek() {
            Some(Tok::Forall) | Some(Tok::Exists) => self.quantifier(),
            _ => self.implication(),
        }
    }

    fn quantifier(&mut self) -> PResult<Formula> {
        let is_forall = self.peek() == Some(&Tok::Forall);
        self.pos += 1;
        let first = self.ident()?;
        if self.eat(&Tok::Le) {
            let bound = self.term()?;
            let body = self.formula()?;
            return Ok(if is_forall {
                Formula::bounded_forall(&first, bound, body)
            } else {
                Formula::bounded_exists(&first, bound, body)
            });
        }
        let mut vars = vec![first];
        while self.eat(&Tok::Comma) {
            vars.push(self.ident()?);
        }
        let body = self.formula()?;
        Ok(vars.iter().rev().fold(body, |b, v| if is_forall { Formula::forall(v, b) } else { Formula::exists(v, b) }))
    }

    fn implication(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula_or_implication()?;
            Ok(Formula::implies(lhs, rhs))
        } else if self.eat(&Tok::Iff) {
            let rhs = self.formula_or_implication()?;
            Ok(Formula::iff(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn formula_or_implication(&mut self) -> PResult<Formula> {
        match self.peek() {
            Some(Tok::Forall) | Some(Tok::Exists) => self.quantifier(),
            _ => self.implication(),
        }
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut f = self.conjunction()?;
        while self.eat(&Tok::Pipe) {
            let rhs = self.conjunction()?;
            f = Formula::or(f, rhs);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut f = self.unary()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.unary()?;
            f = Formula::and(f, rhs);
        }
        Ok(f)
    }

    fn unary(&mut self) -> PResult<Formula> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Forall) | Some(Tok::Exists) => self.quantifier(),
            Some(Tok::LParen) => {
                // Either a parenthesised formula or an atom whose left term
                // starts with '('. Try the atom first and keep whichever
                // attempt got further on failure.
                let save = self.pos;
                match self.atom() {
                    Ok(f) => Ok(f),
                    Err(atom_err) => {
                        let atom_reach = self.pos;
                        self.pos = save + 1;
                        let inner = self.formula().and_then(|f| {
                            self.expect(Tok::RParen)?;
                            Ok(f)
                        });
                        match inner {
                            Ok(f) => Ok(f),
                            Err(e) if self.pos >= atom_reach => Err(e),
                            Err(_) => Err(atom_err),
                        }
                    }
                }
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> PResult<Formula> {
        let lhs = self.term()?;
        let f = match self.peek() {
            Some(Tok::Eq) => Formula::eq,
            Some(Tok::Le) => Formula::le,
            Some(Tok::Neq) => Formula::neq,
            _ => return Err(self.error("'=', '<=' or '!='")),
        };
        self.pos += 1;
        let rhs = self.term()?;
        Ok(f(lhs, rhs))
    }

    fn term(&mut self) -> PResult<Term> {
        let mut t = self.product()?;
        while self.eat(&Tok::Plus) {
            let rhs = self.product()?;
            t = Term::add(t, rhs);
        }
        Ok(t)
    }

    fn product(&mut self) -> PResult<Term> {
        let mut t = self.primary_term()?;
        while self.eat(&Tok::Star) {
            let rhs = self.primary_term()?;
            t = Term::mul(t, rhs);
        }
        Ok(t)
    }

    fn primary_term(&mut self) -> PResult<Term> {
        let pos = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.pos += 1;
                let n: usize = s.parse().map_err(|_| ParseError::NumeralTooLarge { pos })?;
                if n > MAX_NUMERAL {
                    return Err(ParseError::NumeralTooLarge { pos });
                }
                Ok(Term::numeral(n))
            }
            Some(Tok::Sym(k)) => {
                self.pos += 1;
                let args = if self.call_follows() {
                    self.pos += 1;
                    let mut args = vec![self.term()?];
                    while self.eat(&Tok::Comma) {
                        args.push(self.term()?);
                    }
                    self.expect(Tok::RParen)?;
                    args
                } else {
                    Vec::new()
                };
                Ok(Term::skolem(SkolemId(k), args))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.call_follows() || (name == "S" && self.peek() == Some(&Tok::LParen)) {
                    if name != "S" {
                        return Err(ParseError::UnknownSymbol { pos, name });
                    }
                    self.pos += 1;
                    let a = self.term()?;
                    self.expect(Tok::RParen)?;
                    Ok(Term::succ(a))
                } else if name == "S" {
                    Err(self.error("'(' after S"))
                } else {
                    Ok(Term::Var(name))
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => Err(self.error("term")),
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Strip a trailing `#` comment and surrounding whitespace.
pub fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => line[..i].trim(),
        None => line.trim(),
    }
}

/// Parse a line-oriented file: one item per non-empty line, `#` comments.
/// Errors carry the 1-based line number.
pub fn parse_lines<T>(text: &str, item: impl Fn(&str) -> Result<T, ParseError>) -> Result<Vec<T>, (usize, ParseError)> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = strip_comment(line);
        if line.is_empty() {
            continue;
        }
        out.push(item(line).map_err(|e| (n + 1, e))?);
    }
    Ok(out)
}
