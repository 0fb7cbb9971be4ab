use std::collections::BTreeMap;

use super::term::{SkolemId, Term};

/// First-order formula over `=` and `<=`.
///
/// `!=` and the negated order are `Not(Eq)` / `Not(Le)`; there is no
/// primitive for them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Eq(Term, Term),
    Le(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
    BoundedForall(String, Term, Box<Formula>),
    BoundedExists(String, Term, Box<Formula>),
}

impl Formula {
    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Eq(a, b)
    }

    pub fn le(a: Term, b: Term) -> Formula {
        Formula::Le(a, b)
    }

    pub fn neq(a: Term, b: Term) -> Formula {
        Formula::not(Formula::Eq(a, b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    pub fn forall(v: &str, body: Formula) -> Formula {
        Formula::Forall(v.to_string(), Box::new(body))
    }

    pub fn exists(v: &str, body: Formula) -> Formula {
        Formula::Exists(v.to_string(), Box::new(body))
    }

    pub fn bounded_forall(v: &str, bound: Term, body: Formula) -> Formula {
        Formula::BoundedForall(v.to_string(), bound, Box::new(body))
    }

    pub fn bounded_exists(v: &str, bound: Term, body: Formula) -> Formula {
        Formula::BoundedExists(v.to_string(), bound, Box::new(body))
    }

    /// Universal closure over the given variables, outermost first.
    pub fn forall_many(vars: &[&str], body: Formula) -> Formula {
        vars.iter().rev().fold(body, |b, v| Formula::forall(v, b))
    }

    /// Left-nested disjunction; panics on an empty list.
    pub fn disj(fs: Vec<Formula>) -> Formula {
        fs.into_iter().reduce(Formula::or).expect("empty disjunction")
    }

    /// Left-nested conjunction; panics on an empty list.
    pub fn conj(fs: Vec<Formula>) -> Formula {
        fs.into_iter().reduce(Formula::and).expect("empty conjunction")
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Eq(..) | Formula::Le(..))
    }

    /// Atom or negated atom.
    pub fn is_literal(&self) -> bool {
        match self {
            Formula::Not(f) => f.is_atom(),
            f => f.is_atom(),
        }
    }

    pub fn is_open(&self) -> bool {
        match self {
            Formula::Eq(..) | Formula::Le(..) => true,
            Formula::Not(f) => f.is_open(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => a.is_open() && b.is_open(),
            _ => false,
        }
    }

    pub fn has_bounded(&self) -> bool {
        match self {
            Formula::Eq(..) | Formula::Le(..) => false,
            Formula::BoundedForall(..) | Formula::BoundedExists(..) => true,
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) => f.has_bounded(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => a.has_bounded() || b.has_bounded(),
        }
    }

    /// Free variables in order of first occurrence (left to right).
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let term = |t: &Term, bound: &Vec<String>, out: &mut Vec<String>| {
            for v in t.vars() {
                if !bound.contains(&v) && !out.contains(&v) {
                    out.push(v);
                }
            }
        };
        match self {
            Formula::Eq(a, b) | Formula::Le(a, b) => {
                term(a, bound, out);
                term(b, bound, out);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
            Formula::BoundedForall(v, t, f) | Formula::BoundedExists(v, t, f) => {
                term(t, bound, out);
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Quantified variables in pre-order, with repetitions.
    pub fn bound_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.visit(&mut |f| match f {
            Formula::Forall(v, _)
            | Formula::Exists(v, _)
            | Formula::BoundedForall(v, _, _)
            | Formula::BoundedExists(v, _, _) => out.push(v.clone()),
            _ => {}
        });
        out
    }

    /// Pre-order traversal over subformulas.
    pub fn visit(&self, f: &mut dyn FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Eq(..) | Formula::Le(..) => {}
            Formula::Not(g)
            | Formula::Forall(_, g)
            | Formula::Exists(_, g)
            | Formula::BoundedForall(_, _, g)
            | Formula::BoundedExists(_, _, g) => g.visit(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    /// Argument terms of every atom, left to right, with repetitions.
    pub fn atom_terms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        self.collect_atom_terms(&mut out);
        out
    }

    fn collect_atom_terms<'a>(&'a self, out: &mut Vec<&'a Term>) {
        match self {
            Formula::Eq(a, b) | Formula::Le(a, b) => {
                out.push(a);
                out.push(b);
            }
            Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => g.collect_atom_terms(out),
            Formula::BoundedForall(_, t, g) | Formula::BoundedExists(_, t, g) => {
                out.push(t);
                g.collect_atom_terms(out);
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_atom_terms(out);
                b.collect_atom_terms(out);
            }
        }
    }

    /// Skolem symbols used anywhere, with their arities.
    pub fn skolem_symbols(&self) -> BTreeMap<SkolemId, usize> {
        let mut out = BTreeMap::new();
        for t in self.atom_terms() {
            t.skolem_symbols(&mut out);
        }
        out
    }

    /// Apply `f` to every term in the formula (atom arguments and bounds).
    pub fn map_terms(&self, f: &dyn Fn(&Term) -> Term) -> Formula {
        match self {
            Formula::Eq(a, b) => Formula::Eq(f(a), f(b)),
            Formula::Le(a, b) => Formula::Le(f(a), f(b)),
            Formula::Not(g) => Formula::not(g.map_terms(f)),
            Formula::And(a, b) => Formula::and(a.map_terms(f), b.map_terms(f)),
            Formula::Or(a, b) => Formula::or(a.map_terms(f), b.map_terms(f)),
            Formula::Implies(a, b) => Formula::implies(a.map_terms(f), b.map_terms(f)),
            Formula::Forall(v, g) => Formula::Forall(v.clone(), Box::new(g.map_terms(f))),
            Formula::Exists(v, g) => Formula::Exists(v.clone(), Box::new(g.map_terms(f))),
            Formula::BoundedForall(v, t, g) => Formula::BoundedForall(v.clone(), f(t), Box::new(g.map_terms(f))),
            Formula::BoundedExists(v, t, g) => Formula::BoundedExists(v.clone(), f(t), Box::new(g.map_terms(f))),
        }
    }

    /// Substitute ground terms for free variables.
    ///
    /// Only ground replacements are meaningful here (no capture check), which
    /// is the only way the library uses it.
    pub fn substitute_free(&self, subst: &dyn Fn(&str) -> Option<Term>) -> Formula {
        self.subst_inner(subst, &mut Vec::new())
    }

    fn subst_inner(&self, subst: &dyn Fn(&str) -> Option<Term>, bound: &mut Vec<String>) -> Formula {
        let sub_term = |t: &Term, bound: &Vec<String>| {
            t.substitute(&|v| if bound.iter().any(|b| b == v) { None } else { subst(v) })
        };
        match self {
            Formula::Eq(a, b) => Formula::Eq(sub_term(a, bound), sub_term(b, bound)),
            Formula::Le(a, b) => Formula::Le(sub_term(a, bound), sub_term(b, bound)),
            Formula::Not(g) => Formula::not(g.subst_inner(subst, bound)),
            Formula::And(a, b) => Formula::and(a.subst_inner(subst, bound), b.subst_inner(subst, bound)),
            Formula::Or(a, b) => Formula::or(a.subst_inner(subst, bound), b.subst_inner(subst, bound)),
            Formula::Implies(a, b) => Formula::implies(a.subst_inner(subst, bound), b.subst_inner(subst, bound)),
            Formula::Forall(v, g) | Formula::Exists(v, g) => {
                bound.push(v.clone());
                let body = Box::new(g.subst_inner(subst, bound));
                bound.pop();
                if matches!(self, Formula::Forall(..)) {
                    Formula::Forall(v.clone(), body)
                } else {
                    Formula::Exists(v.clone(), body)
                }
            }
            Formula::BoundedForall(v, t, g) | Formula::BoundedExists(v, t, g) => {
                let t = sub_term(t, bound);
                bound.push(v.clone());
                let body = Box::new(g.subst_inner(subst, bound));
                bound.pop();
                if matches!(self, Formula::BoundedForall(..)) {
                    Formula::BoundedForall(v.clone(), t, body)
                } else {
                    Formula::BoundedExists(v.clone(), t, body)
                }
            }
        }
    }

    /// Number of connective, quantifier and atom nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }
}
