use std::collections::HashMap;

use crate::coding::{encode_formula, Code};
use crate::formulas::{formula_to_string, rnnf, term_to_string, Formula, SkolemId, Term};

use super::SkolemError;

/// What a registry symbol stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymbolKind {
    /// `f_{exists x phi}`: the key is the existential formula with its free
    /// variables renamed `p0, p1, ...` (first occurrence order) and its bound
    /// variables renamed `b0, b1, ...` (pre-order).
    Skolem { key: Formula },
    /// A named fresh constant, e.g. the `t` of a term-set file.
    Parameter { name: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolEntry {
    pub id: SkolemId,
    pub kind: SymbolKind,
    pub arity: usize,
    /// Gödel code of the key formula; parameters have none.
    pub code: Option<Code>,
}

/// Canonical mapping from existential formulas to Skolem symbols.
///
/// Registration is single-writer; lookups are read-only and may be shared.
#[derive(Debug, Clone, Default)]
pub struct SkolemRegistry {
    entries: Vec<SymbolEntry>,
    by_key: HashMap<Formula, SkolemId>,
    by_name: HashMap<String, SkolemId>,
}

impl SkolemRegistry {
    pub fn new() -> SkolemRegistry {
        SkolemRegistry::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[SymbolEntry] {
        &self.entries
    }

    pub fn get(&self, id: SkolemId) -> Option<&SymbolEntry> {
        self.entries.get(id.0 as usize)
    }

    pub fn arity(&self, id: SkolemId) -> Option<usize> {
        self.get(id).map(|e| e.arity)
    }

    /// Register (or look up) the symbol of an existential formula.
    ///
    /// Returns the symbol and the free variables of `f` in the order they
    /// become the symbol's arguments. Panics if `f` is not an `Exists` node.
    pub fn register(&mut self, f: &Formula) -> (SkolemId, Vec<String>) {
        assert!(matches!(f, Formula::Exists(..)), "only existential formulas get Skolem symbols");
        let free = f.free_vars();
        let key = skolem_key(f);
        if let Some(&id) = self.by_key.get(&key) {
            return (id, free);
        }
        let id = SkolemId(self.entries.len() as u32);
        self.entries.push(SymbolEntry {
            id,
            arity: free.len(),
            code: Some(encode_formula(&key)),
            kind: SymbolKind::Skolem { key: key.clone() },
        });
        self.by_key.insert(key, id);
        (id, free)
    }

    /// Symbol of an already registered existential formula. The formula is
    /// brought to normal form first, so it may be written as in the source.
    pub fn lookup(&self, f: &Formula) -> Option<SkolemId> {
        self.by_key.get(&skolem_key(&rnnf(f))).copied()
    }

    /// Named constant, created on first use.
    pub fn parameter(&mut self, name: &str) -> SkolemId {
        if let Some(&id) = self.by_name.get(name) {
            return id;
        }
        let id = SkolemId(self.entries.len() as u32);
        self.entries.push(SymbolEntry {
            id,
            arity: 0,
            code: None,
            kind: SymbolKind::Parameter { name: name.to_string() },
        });
        self.by_name.insert(name.to_string(), id);
        id
    }

    pub fn find_parameter(&self, name: &str) -> Option<SkolemId> {
        self.by_name.get(name).copied()
    }

    pub fn name_of(&self, id: SkolemId) -> Option<String> {
        match &self.get(id)?.kind {
            SymbolKind::Parameter { name } => Some(name.clone()),
            SymbolKind::Skolem { .. } => None,
        }
    }

    pub fn is_parameter(&self, id: SkolemId) -> bool {
        matches!(self.get(id).map(|e| &e.kind), Some(SymbolKind::Parameter { .. }))
    }

    /// Turn the free variables of a term into parameters and check every
    /// Skolem application against the registry.
    pub fn ground_term(&mut self, t: &Term) -> Result<Term, SkolemError> {
        for v in t.vars() {
            self.parameter(&v);
        }
        let g = t.substitute(&|v| self.find_parameter(v).map(Term::constant));
        self.check_term(&g)?;
        Ok(g)
    }

    /// Check that every Skolem application names a known symbol at its arity.
    pub fn check_term(&self, t: &Term) -> Result<(), SkolemError> {
        if let Term::Skolem(id, args) = t {
            let arity = self.arity(*id).ok_or(SkolemError::UnknownSymbol(*id))?;
            if arity != args.len() {
                return Err(SkolemError::ArityMismatch { id: *id, expected: arity, found: args.len() });
            }
        }
        t.args().into_iter().try_for_each(|a| self.check_term(a))
    }

    pub fn check_formula(&self, f: &Formula) -> Result<(), SkolemError> {
        f.atom_terms().into_iter().try_for_each(|t| self.check_term(t))
    }

    /// Render a term, printing parameters by name.
    pub fn show_term(&self, t: &Term) -> String {
        term_to_string(t, &|id| self.name_of(id))
    }

    pub fn show_formula(&self, f: &Formula) -> String {
        formula_to_string(f, &|id| self.name_of(id))
    }

    /// One line per symbol: `$k/arity  key` or `$k  = name`.
    pub fn listing(&self) -> Vec<String> {
        self.entries
            .iter()
            .map(|e| match &e.kind {
                SymbolKind::Skolem { key } => format!("{}/{}  {}", e.id, e.arity, key),
                SymbolKind::Parameter { name } => format!("{}  = {}", e.id, name),
            })
            .collect()
    }
}

/// Normalize an existential formula so that alpha-equivalent formulas, and
/// formulas differing only in the names of their free variables, coincide.
pub fn skolem_key(f: &Formula) -> Formula {
    let free = f.free_vars();
    let mut counter = 0usize;
    rename(f, &free, &mut Vec::new(), &mut counter)
}

fn rename(f: &Formula, free: &[String], scope: &mut Vec<(String, String)>, counter: &mut usize) -> Formula {
    use Formula::*;
    let term = |t: &Term, scope: &Vec<(String, String)>| {
        t.substitute(&|v| {
            if let Some((_, n)) = scope.iter().rev().find(|(o, _)| o == v) {
                return Some(Term::Var(n.clone()));
            }
            free.iter().position(|w| w == v).map(|i| Term::Var(format!("p{i}")))
        })
    };
    match f {
        Eq(a, b) => Eq(term(a, scope), term(b, scope)),
        Le(a, b) => Le(term(a, scope), term(b, scope)),
        Not(g) => Formula::not(rename(g, free, scope, counter)),
        And(a, b) | Or(a, b) | Implies(a, b) => {
            let a = rename(a, free, scope, counter);
            let b = rename(b, free, scope, counter);
            match f {
                And(..) => Formula::and(a, b),
                Or(..) => Formula::or(a, b),
                _ => Formula::implies(a, b),
            }
        }
        Forall(v, g) | Exists(v, g) | BoundedForall(v, _, g) | BoundedExists(v, _, g) => {
            let bound = match f {
                BoundedForall(_, t, _) | BoundedExists(_, t, _) => Some(term(t, scope)),
                _ => None,
            };
            let name = format!("b{counter}");
            *counter += 1;
            scope.push((v.clone(), name.clone()));
            let body = Box::new(rename(g, free, scope, counter));
            scope.pop();
            match (f, bound) {
                (Forall(..), _) => Forall(name, body),
                (Exists(..), _) => Exists(name, body),
                (BoundedForall(..), Some(t)) => BoundedForall(name, t, body),
                (_, Some(t)) => BoundedExists(name, t, body),
                _ => unreachable!(),
            }
        }
    }
}
