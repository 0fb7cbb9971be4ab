use std::collections::{BTreeSet, HashSet};

use num_bigint::BigUint;

use crate::coding::encode_term;
use crate::formulas::{FunSym, SkolemId, Term};

use super::registry::{SkolemRegistry, SymbolKind};
use super::termset::{Provenance, TermSet};
use super::theory::Theory;

/// Which Skolem symbols a hull step may apply.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HullMode {
    /// Every registered Skolem symbol under the code bound.
    Full,
    /// Only these symbols (still subject to the code bound).
    Restricted(BTreeSet<SkolemId>),
}

impl HullMode {
    pub fn for_theory(t: &Theory) -> HullMode {
        HullMode::Restricted(t.symbols())
    }
}

/// Skolem symbols admitted by the threshold `j`, with their arities, in id
/// order. Parameters are never applied.
pub fn admissible_symbols(reg: &SkolemRegistry, j: &BigUint, mode: &HullMode) -> Vec<(SkolemId, usize)> {
    reg.entries()
        .iter()
        .filter(|e| matches!(e.kind, SymbolKind::Skolem { .. }))
        .filter(|e| e.code.as_ref().is_some_and(|c| c.value() <= j))
        .filter(|e| match mode {
            HullMode::Full => true,
            HullMode::Restricted(s) => s.contains(&e.id),
        })
        .map(|e| (e.id, e.arity))
        .collect()
}

/// Least threshold admitting every Skolem symbol of the theory.
pub fn theory_threshold(t: &Theory) -> BigUint {
    let syms = t.symbols();
    t.registry()
        .entries()
        .iter()
        .filter(|e| syms.contains(&e.id))
        .filter_map(|e| e.code.as_ref().map(|c| c.value().clone()))
        .max()
        .unwrap_or_default()
}

/// Number of terms one step would add at most (before removing duplicates).
pub fn step_size_bound(n: usize, symbols: &[(SkolemId, usize)]) -> u128 {
    let n = n as u128;
    let mut total = n + 1 + n + 2 * n * n;
    for &(_, a) in symbols {
        total = total.saturating_add(n.saturating_pow(a as u32));
    }
    total
}

fn tuples(terms: &[Term], arity: usize, f: &mut dyn FnMut(Vec<Term>)) {
    fn rec(terms: &[Term], arity: usize, cur: &mut Vec<Term>, f: &mut dyn FnMut(Vec<Term>)) {
        if cur.len() == arity {
            f(cur.clone());
            return;
        }
        for t in terms {
            cur.push(t.clone());
            rec(terms, arity, cur, f);
            cur.pop();
        }
    }
    rec(terms, arity, &mut Vec::with_capacity(arity), f)
}

/// One step of the Skolem hull: add `0`, `S(t)`, `t + s`, `t * s` and
/// `f(t1, ..., tm)` for every admissible Skolem symbol `f` and members `ti`.
pub fn hull_step(lambda: &TermSet, j: &BigUint, reg: &SkolemRegistry, mode: &HullMode) -> TermSet {
    let symbols = admissible_symbols(reg, j, mode);
    let terms = lambda.terms();
    let mut seen: HashSet<Term> = terms.iter().cloned().collect();
    let mut fresh = Vec::new();
    let mut add = |t: Term| {
        if seen.insert(t.clone()) {
            fresh.push(t);
        }
    };
    add(Term::Zero);
    for t in terms {
        add(Term::succ(t.clone()));
    }
    for a in terms {
        for b in terms {
            add(Term::add(a.clone(), b.clone()));
            add(Term::mul(a.clone(), b.clone()));
        }
    }
    for &(id, arity) in &symbols {
        tuples(terms, arity, &mut |args| add(Term::skolem(id, args)));
    }
    let level = match lambda.provenance {
        Provenance::Hull { level } => level + 1,
        Provenance::User => 1,
    };
    let extra: Vec<(crate::coding::Code, Term)> = fresh.into_iter().map(|t| (encode_term(&t), t)).collect();
    lambda.union_coded(extra).with_provenance(Provenance::Hull { level })
}

/// `steps` hull steps with a fixed threshold.
pub fn hull(lambda: &TermSet, steps: usize, j: &BigUint, reg: &SkolemRegistry, mode: &HullMode) -> TermSet {
    let mut cur = lambda.clone();
    for _ in 0..steps {
        cur = hull_step(&cur, j, reg, mode);
    }
    cur
}

/// Membership in the `k`-step hull of `base` without building it: a term is
/// in level `k` when it is in the base, or its head is admissible and all its
/// arguments are in level `k - 1`.
pub fn in_hull(base: &TermSet, k: usize, symbols: &[(SkolemId, usize)], t: &Term) -> bool {
    if base.contains(t) {
        return true;
    }
    if k == 0 {
        return false;
    }
    let head_ok = match t.head() {
        None => false,
        Some(FunSym::Skolem(id)) => symbols.iter().any(|&(s, _)| s == id),
        Some(_) => true,
    };
    head_ok && t.args().into_iter().all(|a| in_hull(base, k - 1, symbols, a))
}

/// Least `k` with `t` in the `k`-step hull, if any `k <= max` works.
pub fn hull_level(base: &TermSet, max: usize, symbols: &[(SkolemId, usize)], t: &Term) -> Option<usize> {
    (0..=max).find(|&k| in_hull(base, k, symbols, t))
}
