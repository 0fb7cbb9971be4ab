use std::collections::HashMap;

use super::formula::Formula;
use super::term::Term;

/// Replace bounded quantifiers by their unbounded definitions.
pub fn desugar_bounded(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        Eq(..) | Le(..) => f.clone(),
        Not(g) => Formula::not(desugar_bounded(g)),
        And(a, b) => Formula::and(desugar_bounded(a), desugar_bounded(b)),
        Or(a, b) => Formula::or(desugar_bounded(a), desugar_bounded(b)),
        Implies(a, b) => Formula::implies(desugar_bounded(a), desugar_bounded(b)),
        Forall(v, g) => Formula::forall(v, desugar_bounded(g)),
        Exists(v, g) => Formula::exists(v, desugar_bounded(g)),
        BoundedForall(v, t, g) | BoundedExists(v, t, g) => {
            let (v, g) = unshadow(v, t, g);
            let guard = Formula::le(Term::Var(v.clone()), t.clone());
            if matches!(f, BoundedForall(..)) {
                Formula::forall(&v, Formula::implies(guard, desugar_bounded(&g)))
            } else {
                Formula::exists(&v, Formula::and(guard, desugar_bounded(&g)))
            }
        }
    }
}

/// In `Qx <= t. g` the bound is outside the scope of `x`. When `t` mentions
/// `x`, rename the bound variable so the unbounded form does not capture it.
fn unshadow(v: &str, t: &Term, g: &Formula) -> (String, Formula) {
    if !t.contains_var(v) {
        return (v.to_string(), g.clone());
    }
    let mut taken: Vec<String> = t.vars();
    taken.extend(g.free_vars());
    taken.extend(g.bound_vars());
    let fresh = (0..).map(|k| format!("{v}_{k}")).find(|n| !taken.contains(n)).expect("unbounded");
    let var = Term::Var(fresh.clone());
    (fresh, g.substitute_free(&|x| (x == v).then(|| var.clone())))
}

/// Negation normal form: no `->`, negation only on atoms, no double negation.
/// Bounded quantifiers are desugared on the way.
pub fn nnf(f: &Formula) -> Formula {
    push(f, false)
}

fn push(f: &Formula, neg: bool) -> Formula {
    use Formula::*;
    match f {
        Eq(..) | Le(..) => {
            if neg {
                Formula::not(f.clone())
            } else {
                f.clone()
            }
        }
        Not(g) => push(g, !neg),
        And(a, b) if neg => Formula::or(push(a, true), push(b, true)),
        And(a, b) => Formula::and(push(a, false), push(b, false)),
        Or(a, b) if neg => Formula::and(push(a, true), push(b, true)),
        Or(a, b) => Formula::or(push(a, false), push(b, false)),
        Implies(a, b) if neg => Formula::and(push(a, false), push(b, true)),
        Implies(a, b) => Formula::or(push(a, true), push(b, false)),
        Forall(v, g) if neg => Formula::exists(v, push(g, true)),
        Forall(v, g) => Formula::forall(v, push(g, false)),
        Exists(v, g) if neg => Formula::forall(v, push(g, true)),
        Exists(v, g) => Formula::exists(v, push(g, false)),
        BoundedForall(..) | BoundedExists(..) => push(&desugar_bounded(f), neg),
    }
}

/// Rectified negation normal form with canonical bound-variable names.
///
/// Quantifiers are renamed `v0, v1, ...` in pre-order (leftmost quantifier
/// first); names that occur free in `f` are skipped. The output is therefore
/// a function of `f` up to renaming of its bound variables.
pub fn rnnf(f: &Formula) -> Formula {
    let f = nnf(f);
    let free = f.free_vars();
    let mut next = 0usize;
    let mut fresh = || loop {
        let name = format!("v{next}");
        next += 1;
        if !free.contains(&name) {
            return name;
        }
    };
    rename_bound(&f, &mut HashMap::new(), &mut fresh)
}

fn rename_bound(f: &Formula, scope: &mut HashMap<String, Vec<String>>, fresh: &mut dyn FnMut() -> String) -> Formula {
    use Formula::*;
    let term = |t: &Term, scope: &HashMap<String, Vec<String>>| {
        t.substitute(&|v| scope.get(v).and_then(|s| s.last()).map(|n| Term::Var(n.clone())))
    };
    match f {
        Eq(a, b) => Eq(term(a, scope), term(b, scope)),
        Le(a, b) => Le(term(a, scope), term(b, scope)),
        Not(g) => Formula::not(rename_bound(g, scope, fresh)),
        And(a, b) => {
            let a = rename_bound(a, scope, fresh);
            Formula::and(a, rename_bound(b, scope, fresh))
        }
        Or(a, b) => {
            let a = rename_bound(a, scope, fresh);
            Formula::or(a, rename_bound(b, scope, fresh))
        }
        Implies(a, b) => {
            let a = rename_bound(a, scope, fresh);
            Formula::implies(a, rename_bound(b, scope, fresh))
        }
        Forall(v, g) | Exists(v, g) => {
            let name = fresh();
            scope.entry(v.clone()).or_default().push(name.clone());
            let body = Box::new(rename_bound(g, scope, fresh));
            scope.get_mut(v).unwrap().pop();
            if matches!(f, Forall(..)) {
                Forall(name, body)
            } else {
                Exists(name, body)
            }
        }
        BoundedForall(v, t, g) | BoundedExists(v, t, g) => {
            let t = term(t, scope);
            let name = fresh();
            scope.entry(v.clone()).or_default().push(name.clone());
            let body = Box::new(rename_bound(g, scope, fresh));
            scope.get_mut(v).unwrap().pop();
            if matches!(f, BoundedForall(..)) {
                BoundedForall(name, t, body)
            } else {
                BoundedExists(name, t, body)
            }
        }
    }
}

/// Check the RNNF shape: no `->`, no bounded quantifiers, negation only on
/// atoms, bound variables pairwise distinct and distinct from free ones.
pub fn is_rnnf(f: &Formula) -> bool {
    fn shape(f: &Formula) -> bool {
        use Formula::*;
        match f {
            Eq(..) | Le(..) => true,
            Not(g) => g.is_atom(),
            And(a, b) | Or(a, b) => shape(a) && shape(b),
            Forall(_, g) | Exists(_, g) => shape(g),
            Implies(..) | BoundedForall(..) | BoundedExists(..) => false,
        }
    }
    if !shape(f) {
        return false;
    }
    let bound = f.bound_vars();
    let free = f.free_vars();
    let mut seen = std::collections::HashSet::new();
    bound.iter().all(|v| seen.insert(v) && !free.contains(v))
}
