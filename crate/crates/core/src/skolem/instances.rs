use std::collections::{HashMap, HashSet};

use crate::formulas::{Formula, Term};

use super::termset::TermSet;
use super::theory::{instance, Theory};

/// A ground instance of one Skolemized axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub axiom: usize,
    pub subst: Vec<(String, Term)>,
    pub formula: Formula,
}

/// Match a pattern against a ground term, extending `binding`.
fn matches(p: &Term, t: &Term, binding: &mut HashMap<String, Term>) -> bool {
    match (p, t) {
        (Term::Var(v), _) => match binding.get(v) {
            Some(b) => b == t,
            None => {
                binding.insert(v.clone(), t.clone());
                true
            }
        },
        (Term::Zero, Term::Zero) => true,
        (Term::Succ(a), Term::Succ(b)) => matches(a, b, binding),
        (Term::Add(a1, a2), Term::Add(b1, b2)) | (Term::Mul(a1, a2), Term::Mul(b1, b2)) => {
            matches(a1, b1, binding) && matches(a2, b2, binding)
        }
        (Term::Skolem(f, xs), Term::Skolem(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys.iter()).all(|(x, y)| matches(x, y, binding))
        }
        _ => false,
    }
}

/// Instances of `open` over `vars` whose atom arguments all lie in `lambda`,
/// in lexicographic order of the substituted terms (code order per variable).
///
/// A term appears in an instance when it is an argument of one of its atoms;
/// subterms of such arguments need not be members themselves.
pub fn instances_of(open: &Formula, vars: &[String], lambda: &TermSet) -> Vec<Vec<(String, Term)>> {
    let mut patterns: Vec<&Term> = Vec::new();
    for t in open.atom_terms() {
        if !patterns.contains(&t) {
            patterns.push(t);
        }
    }
    if patterns.iter().any(|p| p.is_ground() && !lambda.contains(p)) {
        return Vec::new();
    }
    // Candidates for each variable: values it takes in some match of every
    // pattern that mentions it.
    let mut candidates: Vec<Vec<Term>> = Vec::with_capacity(vars.len());
    for v in vars {
        let mut cand: Option<HashSet<Term>> = None;
        for p in patterns.iter().filter(|p| p.contains_var(v)) {
            let mut vals: HashSet<Term> = HashSet::new();
            for m in lambda {
                let mut b = HashMap::new();
                if matches(p, m, &mut b) {
                    vals.insert(b.remove(v).unwrap());
                }
            }
            cand = Some(match cand {
                None => vals,
                Some(prev) => prev.into_iter().filter(|t| vals.contains(t)).collect(),
            });
        }
        let Some(cand) = cand else {
            // A variable that occurs in no atom never reaches `free_vars`.
            return Vec::new();
        };
        let order = TermSet::new(cand).expect("matched values are ground");
        candidates.push(order.terms().to_vec());
    }
    // Each pattern is checked as soon as its last variable is bound.
    let ready: Vec<Vec<&Term>> = (0..vars.len())
        .map(|k| {
            patterns
                .iter()
                .copied()
                .filter(|p| {
                    !p.is_ground() && p.vars().iter().all(|w| vars[..=k].contains(w)) && p.contains_var(&vars[k])
                })
                .collect()
        })
        .collect();

    let mut out = Vec::new();
    let mut chosen: Vec<Term> = Vec::with_capacity(vars.len());
    fn rec(
        k: usize,
        vars: &[String],
        candidates: &[Vec<Term>],
        ready: &[Vec<&Term>],
        lambda: &TermSet,
        chosen: &mut Vec<Term>,
        out: &mut Vec<Vec<(String, Term)>>,
    ) {
        if k == vars.len() {
            out.push(vars.iter().cloned().zip(chosen.iter().cloned()).collect());
            return;
        }
        for c in &candidates[k] {
            chosen.push(c.clone());
            let ok = ready[k].iter().all(|p| {
                let t = p.substitute(&|v| vars.iter().position(|w| w == v).map(|i| chosen[i].clone()));
                lambda.contains(&t)
            });
            if ok {
                rec(k + 1, vars, candidates, ready, lambda, chosen, out);
            }
            chosen.pop();
        }
    }
    rec(0, vars, &candidates, &ready, lambda, &mut chosen, &mut out);
    out
}

/// All available Skolem instances of the theory's axioms over `lambda`, axiom
/// by axiom.
pub fn available_instances(theory: &Theory, lambda: &TermSet) -> Vec<Instance> {
    let mut out = Vec::new();
    for (i, ax) in theory.axioms().iter().enumerate() {
        for subst in instances_of(ax.open(), ax.free_vars(), lambda) {
            let formula = instance(ax.open(), &subst).expect("complete ground substitution");
            out.push(Instance { axiom: i, subst, formula });
        }
    }
    out
}
