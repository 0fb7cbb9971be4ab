#![allow(dead_code)]

use hcon::formulas::{parse_formula, parse_term, Formula, SkolemId, Term};
use hcon::skolem::{TermSet, Theory};

pub fn f(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

pub fn t(s: &str) -> Term {
    parse_term(s).unwrap()
}

/// The nine terms of the squaring example, with `t` a parameter.
pub fn ex2_lambda(th: &mut Theory) -> (TermSet, Term) {
    let tt = Term::constant(th.registry_mut().parameter("t"));
    let terms = ["0", "0*0", "$0", "$0*$0", "$1($0)", "S($0)*S($0)"].iter().map(|s| t(s)).chain([
        tt.clone(),
        Term::mul(tt.clone(), tt.clone()),
        Term::skolem(SkolemId(1), vec![tt.clone()]),
    ]);
    (TermSet::new(terms).unwrap(), tt)
}

/// The nine terms of the successor example for a given `t`, with `$0` the
/// predecessor symbol and `$1` the difference symbol.
pub fn gamma_terms(tt: &Term) -> Vec<Term> {
    let h = Term::skolem(SkolemId(1), vec![tt.clone(), Term::Zero]);
    let p = Term::skolem(SkolemId(0), vec![tt.clone()]);
    vec![
        Term::Zero,
        tt.clone(),
        h.clone(),
        Term::add(h.clone(), tt.clone()),
        p.clone(),
        Term::succ(p.clone()),
        Term::add(h.clone(), p.clone()),
        Term::add(h.clone(), Term::succ(p.clone())),
        Term::succ(Term::add(h, p)),
    ]
}

pub fn gamma(tt: &Term) -> TermSet {
    TermSet::new(gamma_terms(tt)).unwrap()
}
