//! Efficient Gödel coding.
//!
//! A sequence of naturals is written as a string of base-64 digits. Each
//! element becomes a little group of digits carrying 5 payload bits each
//! (most significant first), with bit 32 set on every digit but the last.
//! The code is the number whose base-64 expansion is a leading `1` followed
//! by all those digits, so the empty sequence has code 1 and
//!
//! * `code(a ++ b) = code(a) * 64^|b digits| + (code(b) - 64^|b digits|) <= 64 * code(a) * code(b)`,
//! * every element takes at least one digit, so `|a| <= 6 * |a| <= log2 code(a)`.
//!
//! Terms and formulas are coded as the sequence of their symbols in Polish
//! notation; sets are coded as the sorted sequence of their members' codes.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::formulas::{Formula, SkolemId, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodingError {
    #[error("not a valid code: {0}")]
    Malformed(&'static str),
    #[error("result would exceed the budget of {budget} bits")]
    Overflow { budget: u64 },
    #[error("omega_{0} is not supported (only n <= 2)")]
    UnsupportedLevel(u32),
    #[error("omega needs an argument >= 2")]
    ArgumentTooSmall,
}

/// A Gödel code; always at least 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Code(BigUint);

impl Code {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_value(self) -> BigUint {
        self.0
    }

    /// Number of bits of the code, i.e. `floor(log2 code) + 1`.
    pub fn bits(&self) -> u64 {
        self.0.bits()
    }

    /// `log2` of the code (the code is never zero).
    pub fn log2(&self) -> f64 {
        let bits = self.0.bits();
        if bits <= 52 {
            return self.0.to_f64().unwrap().log2();
        }
        // Keep the top 52 bits to stay within f64 precision.
        let shift = bits - 52;
        (&self.0 >> shift).to_f64().unwrap().log2() + shift as f64
    }

    pub fn from_value(v: BigUint) -> Result<Code, CodingError> {
        if v.is_zero() {
            return Err(CodingError::Malformed("zero"));
        }
        Ok(Code(v))
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

const PAYLOAD: u32 = 5;
const CONT: u8 = 32;

fn push_digits(n: &BigUint, digits: &mut Vec<u8>) {
    if n.is_zero() {
        digits.push(0);
        return;
    }
    let groups = n.bits().div_ceil(PAYLOAD as u64);
    let mask = BigUint::from(31u8);
    for g in (0..groups).rev() {
        let d = ((n >> (g * PAYLOAD as u64)) & &mask).to_u8().unwrap();
        digits.push(if g == 0 { d } else { d | CONT });
    }
}

/// Code of a sequence of naturals.
pub fn encode_sequence(items: &[BigUint]) -> Code {
    let mut digits = Vec::new();
    for n in items {
        push_digits(n, &mut digits);
    }
    let mut v = BigUint::one();
    for d in digits {
        v = (v << 6u32) + BigUint::from(d);
    }
    Code(v)
}

/// Code of a sequence of small naturals.
pub fn encode_symbols(items: &[u64]) -> Code {
    let big: Vec<BigUint> = items.iter().map(|&n| BigUint::from(n)).collect();
    encode_sequence(&big)
}

pub fn decode_sequence(code: &Code) -> Result<Vec<BigUint>, CodingError> {
    let digits = code.0.to_radix_be(64);
    let (first, rest) = digits.split_first().ok_or(CodingError::Malformed("empty"))?;
    if *first != 1 {
        return Err(CodingError::Malformed("leading digit is not 1"));
    }
    let mut out = Vec::new();
    let mut cur: Option<BigUint> = None;
    for &d in rest {
        let payload = BigUint::from(d & 31);
        let value = match cur.take() {
            None => {
                if d == CONT {
                    return Err(CodingError::Malformed("non-canonical leading digit"));
                }
                payload
            }
            Some(acc) => (acc << PAYLOAD) + payload,
        };
        if d & CONT != 0 {
            cur = Some(value);
        } else {
            out.push(value);
        }
    }
    if cur.is_some() {
        return Err(CodingError::Malformed("truncated element"));
    }
    Ok(out)
}

/// Symbol numbers used in the Polish-notation streams.
pub mod sym {
    pub const ZERO: u64 = 0;
    pub const SUCC: u64 = 1;
    pub const ADD: u64 = 2;
    pub const MUL: u64 = 3;
    pub const SKOLEM: u64 = 4;
    pub const VAR: u64 = 5;
    pub const EQ: u64 = 6;
    pub const LE: u64 = 7;
    pub const NOT: u64 = 8;
    pub const AND: u64 = 9;
    pub const OR: u64 = 10;
    pub const IMPLIES: u64 = 11;
    pub const FORALL: u64 = 12;
    pub const EXISTS: u64 = 13;
    pub const BFORALL: u64 = 14;
    pub const BEXISTS: u64 = 15;
    /// Evaluation separators.
    pub const SEP_EQ: u64 = 16;
    pub const SEP_LT: u64 = 17;
}

fn var_symbols(name: &str, out: &mut Vec<u64>) {
    out.push(sym::VAR);
    out.push(name.len() as u64);
    out.extend(name.bytes().map(u64::from));
}

pub fn term_symbols(t: &Term, out: &mut Vec<u64>) {
    match t {
        Term::Var(v) => var_symbols(v, out),
        Term::Zero => out.push(sym::ZERO),
        Term::Succ(a) => {
            out.push(sym::SUCC);
            term_symbols(a, out);
        }
        Term::Add(a, b) | Term::Mul(a, b) => {
            out.push(if matches!(t, Term::Add(..)) { sym::ADD } else { sym::MUL });
            term_symbols(a, out);
            term_symbols(b, out);
        }
        Term::Skolem(id, args) => {
            out.extend([sym::SKOLEM, id.0 as u64, args.len() as u64]);
            for a in args.iter() {
                term_symbols(a, out);
            }
        }
    }
}

pub fn formula_symbols(f: &Formula, out: &mut Vec<u64>) {
    use Formula::*;
    match f {
        Eq(a, b) | Le(a, b) => {
            out.push(if matches!(f, Eq(..)) { sym::EQ } else { sym::LE });
            term_symbols(a, out);
            term_symbols(b, out);
        }
        Not(g) => {
            out.push(sym::NOT);
            formula_symbols(g, out);
        }
        And(a, b) | Or(a, b) | Implies(a, b) => {
            out.push(match f {
                And(..) => sym::AND,
                Or(..) => sym::OR,
                _ => sym::IMPLIES,
            });
            formula_symbols(a, out);
            formula_symbols(b, out);
        }
        Forall(v, g) | Exists(v, g) => {
            out.push(if matches!(f, Forall(..)) { sym::FORALL } else { sym::EXISTS });
            var_symbols(v, out);
            formula_symbols(g, out);
        }
        BoundedForall(v, t, g) | BoundedExists(v, t, g) => {
            out.push(if matches!(f, BoundedForall(..)) { sym::BFORALL } else { sym::BEXISTS });
            var_symbols(v, out);
            term_symbols(t, out);
            formula_symbols(g, out);
        }
    }
}

pub fn encode_term(t: &Term) -> Code {
    let mut s = Vec::new();
    term_symbols(t, &mut s);
    encode_symbols(&s)
}

pub fn encode_formula(f: &Formula) -> Code {
    let mut s = Vec::new();
    formula_symbols(f, &mut s);
    encode_symbols(&s)
}

/// Code of a finite set: the sequence of member codes in increasing order.
pub fn encode_set<'a>(members: impl IntoIterator<Item = &'a Code>) -> Code {
    let mut vals: Vec<BigUint> = members.into_iter().map(|c| c.0.clone()).collect();
    vals.sort();
    vals.dedup();
    encode_sequence(&vals)
}

struct Reader<'a> {
    syms: &'a [BigUint],
    pos: usize,
}

impl Reader<'_> {
    fn next(&mut self) -> Result<u64, CodingError> {
        let v = self.syms.get(self.pos).ok_or(CodingError::Malformed("truncated"))?;
        self.pos += 1;
        v.to_u64().ok_or(CodingError::Malformed("symbol out of range"))
    }

    fn var(&mut self) -> Result<String, CodingError> {
        let len = self.next()? as usize;
        let mut bytes = Vec::with_capacity(len);
        for _ in 0..len {
            let b = self.next()?;
            bytes.push(u8::try_from(b).map_err(|_| CodingError::Malformed("bad name byte"))?);
        }
        String::from_utf8(bytes).map_err(|_| CodingError::Malformed("bad name"))
    }

    fn term(&mut self) -> Result<Term, CodingError> {
        Ok(match self.next()? {
            sym::ZERO => Term::Zero,
            sym::SUCC => Term::succ(self.term()?),
            sym::ADD => {
                let a = self.term()?;
                Term::add(a, self.term()?)
            }
            sym::MUL => {
                let a = self.term()?;
                Term::mul(a, self.term()?)
            }
            sym::SKOLEM => {
                let id = u32::try_from(self.next()?).map_err(|_| CodingError::Malformed("id"))?;
                let n = self.next()? as usize;
                let mut args = Vec::with_capacity(n.min(64));
                for _ in 0..n {
                    args.push(self.term()?);
                }
                Term::skolem(SkolemId(id), args)
            }
            sym::VAR => Term::Var(self.var()?),
            _ => return Err(CodingError::Malformed("expected a term symbol")),
        })
    }

    fn formula(&mut self) -> Result<Formula, CodingError> {
        Ok(match self.next()? {
            s @ (sym::EQ | sym::LE) => {
                let a = self.term()?;
                let b = self.term()?;
                if s == sym::EQ {
                    Formula::eq(a, b)
                } else {
                    Formula::le(a, b)
                }
            }
            sym::NOT => Formula::not(self.formula()?),
            s @ (sym::AND | sym::OR | sym::IMPLIES) => {
                let a = self.formula()?;
                let b = self.formula()?;
                match s {
                    sym::AND => Formula::and(a, b),
                    sym::OR => Formula::or(a, b),
                    _ => Formula::implies(a, b),
                }
            }
            s @ (sym::FORALL | sym::EXISTS | sym::BFORALL | sym::BEXISTS) => {
                if self.next()? != sym::VAR {
                    return Err(CodingError::Malformed("expected a variable"));
                }
                let v = self.var()?;
                let bound = if s >= sym::BFORALL { Some(self.term()?) } else { None };
                let body = self.formula()?;
                match (s, bound) {
                    (sym::FORALL, _) => Formula::forall(&v, body),
                    (sym::EXISTS, _) => Formula::exists(&v, body),
                    (sym::BFORALL, Some(t)) => Formula::bounded_forall(&v, t, body),
                    (_, Some(t)) => Formula::bounded_exists(&v, t, body),
                    _ => unreachable!(),
                }
            }
            _ => return Err(CodingError::Malformed("expected a formula symbol")),
        })
    }

    fn done(&self) -> Result<(), CodingError> {
        if self.pos == self.syms.len() {
            Ok(())
        } else {
            Err(CodingError::Malformed("trailing symbols"))
        }
    }
}

pub fn decode_term(code: &Code) -> Result<Term, CodingError> {
    let syms = decode_sequence(code)?;
    let mut r = Reader { syms: &syms, pos: 0 };
    let t = r.term()?;
    r.done()?;
    Ok(t)
}

pub fn decode_formula(code: &Code) -> Result<Formula, CodingError> {
    let syms = decode_sequence(code)?;
    let mut r = Reader { syms: &syms, pos: 0 };
    let f = r.formula()?;
    r.done()?;
    Ok(f)
}

/// `omega_n(x)` with `omega_0(x) = x^2` and `omega_{k+1}(x) = 2^{omega_k(floor(log2 x))}`.
///
/// Fails with [`CodingError::Overflow`] when the result would have more than
/// `budget_bits` bits.
pub fn omega(n: u32, x: &BigUint, budget_bits: u64) -> Result<BigUint, CodingError> {
    if n > 2 {
        return Err(CodingError::UnsupportedLevel(n));
    }
    if *x < BigUint::from(2u8) {
        return Err(CodingError::ArgumentTooSmall);
    }
    omega_raw(n, x, budget_bits)
}

fn omega_raw(n: u32, x: &BigUint, budget: u64) -> Result<BigUint, CodingError> {
    if n == 0 {
        let sq = x * x;
        if sq.bits() > budget {
            return Err(CodingError::Overflow { budget });
        }
        return Ok(sq);
    }
    // floor(log2 0) is taken as 0 so the recursion stays total.
    let log = BigUint::from(x.bits().saturating_sub(1));
    let e = omega_raw(n - 1, &log, budget)?;
    match e.to_u64() {
        Some(e) if e < budget => Ok(BigUint::one() << e),
        _ => Err(CodingError::Overflow { budget }),
    }
}

/// `q_0 = S(S(0))`, `q_{i+1} = q(q_i)` for `i < n`, where `q` is the Skolem
/// symbol of the squaring formula.
pub fn q_chain(n: usize, q: SkolemId) -> Vec<Term> {
    let mut out = vec![Term::numeral(2)];
    for _ in 0..n {
        let last = out.last().unwrap().clone();
        out.push(Term::skolem(q, vec![last]));
    }
    out
}

/// Value of a ground term in the standard model, reading `q` as squaring.
/// Returns `None` for other Skolem symbols.
pub fn standard_value(t: &Term, q: SkolemId) -> Option<BigUint> {
    Some(match t {
        Term::Var(_) => return None,
        Term::Zero => BigUint::zero(),
        Term::Succ(a) => standard_value(a, q)? + 1u8,
        Term::Add(a, b) => standard_value(a, q)? + standard_value(b, q)?,
        Term::Mul(a, b) => standard_value(a, q)? * standard_value(b, q)?,
        Term::Skolem(id, args) if *id == q && args.len() == 1 => {
            let v = standard_value(&args[0], q)?;
            &v * &v
        }
        Term::Skolem(..) => return None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthRow {
    pub i: usize,
    pub value_bits: u64,
    pub code_bits: u64,
}

/// Value size against code size along the `q_i` chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthReport {
    pub rows: Vec<GrowthRow>,
    /// Least `c` with `code_bits <= c*i + c` on every row.
    pub c: u64,
}

pub fn growth_report(n: usize, q: SkolemId) -> GrowthReport {
    let mut rows = Vec::new();
    let mut value = BigUint::from(2u8);
    for (i, t) in q_chain(n, q).into_iter().enumerate() {
        if i > 0 {
            value = &value * &value;
        }
        rows.push(GrowthRow { i, value_bits: value.bits(), code_bits: encode_term(&t).bits() });
    }
    let c = rows.iter().map(|r| r.code_bits.div_ceil(r.i as u64 + 1)).max().unwrap_or(0);
    GrowthReport { rows, c }
}

impl GrowthReport {
    pub fn to_table(&self) -> String {
        let mut s = format!("{:>4}  {:>12}  {:>10}\n", "i", "value_bits", "code_bits");
        for r in &self.rows {
            s += &format!("{:>4}  {:>12}  {:>10}\n", r.i, r.value_bits, r.code_bits);
        }
        s += &format!("fitted c = {} (code_bits <= c*i + c)\n", self.c);
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("i,value_bits,code_bits\n");
        for r in &self.rows {
            s += &format!("{},{},{}\n", r.i, r.value_bits, r.code_bits);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::{parse_formula, parse_term};

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&n| BigUint::from(n)).collect()
    }

    #[test]
    fn empty_sequence_has_code_one() {
        assert_eq!(encode_sequence(&[]).value(), &BigUint::one());
        assert_eq!(decode_sequence(&Code(BigUint::one())).unwrap(), vec![]);
    }

    #[test]
    fn sequence_round_trip() {
        for s in [vec![0], vec![31], vec![32], vec![1, 2, 3], vec![u64::MAX, 0, 1 << 40]] {
            let c = encode_symbols(&s);
            assert_eq!(decode_sequence(&c).unwrap(), big(&s));
        }
    }

    #[test]
    fn concatenation_bound_examples() {
        let a = big(&[5, 1000, 0]);
        let b = big(&[7, 1 << 33]);
        let ab: Vec<BigUint> = a.iter().chain(&b).cloned().collect();
        let lhs = encode_sequence(&ab).into_value();
        let rhs = encode_sequence(&a).into_value() * encode_sequence(&b).into_value() * 64u8;
        assert!(lhs <= rhs);
    }

    #[test]
    fn malformed_codes_are_rejected() {
        assert!(Code::from_value(BigUint::zero()).is_err());
        // Leading digit 2.
        assert!(decode_sequence(&Code(BigUint::from(2u8))).is_err());
        // 1 followed by a dangling continuation digit.
        assert!(decode_sequence(&Code(BigUint::from(64u32 + 33))).is_err());
    }

    #[test]
    fn term_and_formula_round_trip() {
        let t = parse_term("$3(x + S(0), y*0)").unwrap();
        assert_eq!(decode_term(&encode_term(&t)).unwrap(), t);
        let f = parse_formula("forall x exists y <= x*x (y = x*x | !(x <= $1))").unwrap();
        assert_eq!(decode_formula(&encode_formula(&f)).unwrap(), f);
        assert!(decode_term(&encode_formula(&f)).is_err());
    }

    #[test]
    fn omega_values() {
        let b = |n: u64| BigUint::from(n);
        assert_eq!(omega(0, &b(3), 64).unwrap(), b(9));
        assert_eq!(omega(1, &b(16), 64).unwrap(), b(65536));
        assert_eq!(omega(2, &b(16), 64).unwrap(), b(65536));
        assert!(matches!(omega(1, &b(1 << 20), 64), Err(CodingError::Overflow { .. })));
        assert!(matches!(omega(3, &b(4), 64), Err(CodingError::UnsupportedLevel(3))));
        assert!(matches!(omega(0, &b(1), 64), Err(CodingError::ArgumentTooSmall)));
    }

    #[test]
    fn omega_one_is_monotone() {
        let mut prev = BigUint::zero();
        for x in 2u64..5000 {
            let v = omega(1, &BigUint::from(x), 1 << 20).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn q_chain_values() {
        let q = SkolemId(1);
        let chain = q_chain(3, q);
        assert_eq!(chain[1], Term::skolem(q, vec![Term::numeral(2)]));
        assert_eq!(standard_value(&chain[2], q).unwrap(), BigUint::from(16u8));
    }

    #[test]
    fn growth_report_shape() {
        let r = growth_report(16, SkolemId(1));
        assert_eq!(r.rows.len(), 17);
        for row in &r.rows {
            assert_eq!(row.value_bits, (1u64 << row.i) + 1);
            assert!(row.code_bits <= r.c * row.i as u64 + r.c);
        }
        assert_eq!(r.c, 19);
    }
}
