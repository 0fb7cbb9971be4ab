use std::collections::{BTreeSet, HashMap};

use crate::formulas::{is_rnnf, rnnf, Formula, SkolemId, Term};

use super::registry::SkolemRegistry;
use super::SkolemError;

/// The stages of Skolemizing one closed formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skolemized {
    pub rnnf: Formula,
    /// `phi^S`: existentials replaced, universal quantifiers kept.
    pub s_form: Formula,
    /// `phi^Sk`: the open formula.
    pub open: Formula,
    /// Formerly universally quantified variables, in quantifier order.
    pub free_vars: Vec<String>,
}

/// Skolemize a formula, registering its existential subformulas in
/// pre-order (outer before inner, left before right).
///
/// Free variables of `f` (there are none for axioms) are left in place and
/// are not listed in `free_vars`.
pub fn skolemize(f: &Formula, reg: &mut SkolemRegistry) -> Skolemized {
    let r = rnnf(f);
    debug_assert!(is_rnnf(&r));
    let s_form = s_transform(&r, reg, &mut HashMap::new());
    let mut quantified = Vec::new();
    s_form.visit(&mut |g| {
        if let Formula::Forall(v, _) = g {
            quantified.push(v.clone());
        }
    });
    let open = strip_universals(&s_form);
    let occurring = open.free_vars();
    let free_vars = quantified.into_iter().filter(|v| occurring.contains(v)).collect();
    Skolemized { rnnf: r, s_form, open, free_vars }
}

fn s_transform(f: &Formula, reg: &mut SkolemRegistry, env: &mut HashMap<String, Term>) -> Formula {
    use Formula::*;
    match f {
        Eq(..) | Le(..) | Not(_) => f.map_terms(&|t| t.substitute(&|v| env.get(v).cloned())),
        And(a, b) => {
            let a = s_transform(a, reg, env);
            Formula::and(a, s_transform(b, reg, env))
        }
        Or(a, b) => {
            let a = s_transform(a, reg, env);
            Formula::or(a, s_transform(b, reg, env))
        }
        Forall(v, g) => Formula::forall(v, s_transform(g, reg, env)),
        Exists(x, g) => {
            // The key is the existential as it stands in the RNNF; its free
            // variables may already stand for Skolem terms of outer
            // existentials, which the environment supplies.
            let (id, free) = reg.register(f);
            let args = free.iter().map(|y| env.get(y).cloned().unwrap_or_else(|| Term::Var(y.clone()))).collect();
            let prev = env.insert(x.clone(), Term::skolem(id, args));
            let out = s_transform(g, reg, env);
            match prev {
                Some(p) => env.insert(x.clone(), p),
                None => env.remove(x),
            };
            out
        }
        Implies(..) | BoundedForall(..) | BoundedExists(..) => {
            unreachable!("input is in RNNF")
        }
    }
}

fn strip_universals(f: &Formula) -> Formula {
    match f {
        Formula::Forall(_, g) => strip_universals(g),
        Formula::And(a, b) => Formula::and(strip_universals(a), strip_universals(b)),
        Formula::Or(a, b) => Formula::or(strip_universals(a), strip_universals(b)),
        _ => f.clone(),
    }
}

/// Simultaneous substitution of ground terms into an open formula.
pub fn instance(open: &Formula, subst: &[(String, Term)]) -> Result<Formula, SkolemError> {
    for v in open.free_vars() {
        if !subst.iter().any(|(w, _)| *w == v) {
            return Err(SkolemError::MissingVariable(v));
        }
    }
    for (_, t) in subst {
        if !t.is_ground() {
            return Err(SkolemError::NonGround(t.to_string()));
        }
    }
    Ok(open.substitute_free(&|v| subst.iter().find(|(w, _)| w == v).map(|(_, t)| t.clone())))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axiom {
    pub source: Formula,
    pub skolemized: Skolemized,
}

impl Axiom {
    pub fn open(&self) -> &Formula {
        &self.skolemized.open
    }

    pub fn free_vars(&self) -> &[String] {
        &self.skolemized.free_vars
    }
}

/// A finite set of closed axioms with their Skolemized forms, all sharing
/// one registry.
#[derive(Debug, Clone)]
pub struct Theory {
    pub name: String,
    axioms: Vec<Axiom>,
    registry: SkolemRegistry,
}

impl Theory {
    pub fn new(name: &str) -> Theory {
        Theory { name: name.to_string(), axioms: Vec::new(), registry: SkolemRegistry::new() }
    }

    pub fn from_axioms(name: &str, axioms: Vec<Formula>) -> Result<Theory, SkolemError> {
        let mut t = Theory::new(name);
        for a in axioms {
            t.add_axiom(a)?;
        }
        Ok(t)
    }

    pub fn add_axiom(&mut self, f: Formula) -> Result<(), SkolemError> {
        if !f.is_closed() {
            return Err(SkolemError::NotClosed(f.to_string()));
        }
        self.registry.check_formula(&f)?;
        let skolemized = skolemize(&f, &mut self.registry);
        self.axioms.push(Axiom { source: f, skolemized });
        Ok(())
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    pub fn registry(&self) -> &SkolemRegistry {
        &self.registry
    }

    /// Mutable access for adding parameters.
    pub fn registry_mut(&mut self) -> &mut SkolemRegistry {
        &mut self.registry
    }

    /// Skolem symbols occurring in the Skolemized axioms.
    pub fn symbols(&self) -> BTreeSet<SkolemId> {
        self.axioms.iter().flat_map(|a| a.open().skolem_symbols().into_keys()).collect()
    }
}
