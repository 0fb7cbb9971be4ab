use std::collections::HashSet;
use std::sync::Arc;

use crate::evaluation::TermDag;
use crate::formulas::{nnf, Formula, Term};
use crate::skolem::{Instance, TermSet};

use super::SearchError;

/// Where a ground constraint came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    /// An available instance of axiom `axiom`.
    Axiom { axiom: usize, subst: Vec<(String, Term)> },
    /// A constraint supplied by the caller, such as a negated goal.
    Extra,
}

/// A ground open formula every evaluation must satisfy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub origin: Origin,
    pub formula: Formula,
}

impl Constraint {
    pub fn extra(formula: Formula) -> Constraint {
        Constraint { origin: Origin::Extra, formula }
    }
}

impl From<Instance> for Constraint {
    fn from(i: Instance) -> Constraint {
        Constraint { origin: Origin::Axiom { axiom: i.axiom, subst: i.subst }, formula: i.formula }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rel {
    Eq,
    Le,
}

/// `a = b`, `a <= b` or their negations, over domain indices. Equalities
/// keep `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit {
    pub rel: Rel,
    pub a: usize,
    pub b: usize,
    pub pos: bool,
}

impl Lit {
    fn negated(self) -> Lit {
        Lit { pos: !self.pos, ..self }
    }

    /// Truth under a rank assignment.
    pub fn holds(self, ranks: &[usize]) -> bool {
        let v = match self.rel {
            Rel::Eq => ranks[self.a] == ranks[self.b],
            Rel::Le => ranks[self.a] <= ranks[self.b],
        };
        v == self.pos
    }
}

pub type Clause = Vec<Lit>;

fn atom(domain: &TermSet, rel: Rel, a: &Term, b: &Term, pos: bool) -> Result<Vec<Clause>, SearchError> {
    let idx = |t: &Term| domain.index_of(t).ok_or_else(|| SearchError::NotInDomain(t.to_string()));
    let (mut i, mut j) = (idx(a)?, idx(b)?);
    if i == j {
        // Reflexive atoms are true in every evaluation.
        return Ok(if pos { vec![] } else { vec![vec![]] });
    }
    if rel == Rel::Eq && i > j {
        std::mem::swap(&mut i, &mut j);
    }
    Ok(vec![vec![Lit { rel, a: i, b: j, pos }]])
}

fn cnf_rec(domain: &TermSet, f: &Formula) -> Result<Vec<Clause>, SearchError> {
    Ok(match f {
        Formula::Eq(a, b) => atom(domain, Rel::Eq, a, b, true)?,
        Formula::Le(a, b) => atom(domain, Rel::Le, a, b, true)?,
        Formula::Not(g) => match &**g {
            Formula::Eq(a, b) => atom(domain, Rel::Eq, a, b, false)?,
            Formula::Le(a, b) => atom(domain, Rel::Le, a, b, false)?,
            _ => unreachable!("negation normal form"),
        },
        Formula::And(a, b) => {
            let mut v = cnf_rec(domain, a)?;
            v.extend(cnf_rec(domain, b)?);
            v
        }
        Formula::Or(a, b) => {
            let (x, y) = (cnf_rec(domain, a)?, cnf_rec(domain, b)?);
            let mut out = Vec::with_capacity(x.len() * y.len());
            for c in &x {
                for d in &y {
                    let mut e: Clause = c.iter().chain(d).copied().collect();
                    e.sort();
                    e.dedup();
                    if !e.iter().any(|l| e.binary_search(&l.negated()).is_ok()) {
                        out.push(e);
                    }
                }
            }
            out
        }
        _ => return Err(SearchError::NotOpen(f.to_string())),
    })
}

/// Clausal form of a ground open formula. An empty list means true; a list
/// holding the empty clause means false.
pub fn cnf(domain: &TermSet, f: &Formula) -> Result<Vec<Clause>, SearchError> {
    if !f.is_open() {
        return Err(SearchError::NotOpen(f.to_string()));
    }
    let mut v = cnf_rec(domain, &nnf(f))?;
    v.sort();
    v.dedup();
    Ok(v)
}

/// A search problem: a domain, its subterm DAG and the clauses of its
/// constraints.
#[derive(Debug, Clone)]
pub struct Problem {
    pub domain: Arc<TermSet>,
    pub dag: TermDag,
    pub constraints: Vec<Constraint>,
    pub clauses: Vec<Clause>,
    /// Constraint each clause came from (the first, for shared clauses).
    pub clause_origin: Vec<usize>,
    /// DAG node pairs with the same head and at least one argument.
    pairs: Vec<(usize, usize)>,
}

impl Problem {
    pub fn new(domain: impl Into<Arc<TermSet>>, constraints: Vec<Constraint>) -> Result<Problem, SearchError> {
        let domain = domain.into();
        if domain.is_empty() {
            return Err(SearchError::EmptyDomain);
        }
        let dag = TermDag::new(&domain);
        let mut clauses = Vec::new();
        let mut clause_origin = Vec::new();
        let mut seen = HashSet::new();
        for (k, c) in constraints.iter().enumerate() {
            for cl in cnf(&domain, &c.formula)? {
                if seen.insert(cl.clone()) {
                    clauses.push(cl);
                    clause_origin.push(k);
                }
            }
        }
        let mut pairs = Vec::new();
        for a in 0..dag.len() {
            for b in a + 1..dag.len() {
                if !dag.children[a].is_empty() && dag.head[a] == dag.head[b] {
                    pairs.push((a, b));
                }
            }
        }
        Ok(Problem { domain, dag, constraints, clauses, clause_origin, pairs })
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn has_empty_clause(&self) -> bool {
        self.clauses.iter().any(|c| c.is_empty())
    }

    /// Restrict to some constraints, over the terms they mention.
    pub fn restricted(&self, keep: &[usize]) -> Problem {
        let constraints: Vec<Constraint> = keep.iter().map(|&k| self.constraints[k].clone()).collect();
        let domain = constraint_domain(&self.domain, &constraints);
        Problem::new(domain, constraints).expect("terms come from the domain")
    }

    /// Whether the member ranks give an evaluation satisfying every clause.
    ///
    /// The congruence is recomputed naively: pairs of same-symbol nodes with
    /// equal argument classes are merged until nothing changes.
    pub fn check_ranks(&self, ranks: &[usize]) -> bool {
        self.congruent(ranks) && self.clauses.iter().all(|c| c.iter().any(|l| l.holds(ranks)))
    }

    pub fn congruent(&self, ranks: &[usize]) -> bool {
        let n = self.len();
        let dag = &self.dag;
        let mut cls: Vec<usize> = (0..dag.len())
            .map(|v| match dag.node_member[v] {
                Some(i) => ranks[i],
                None => n + v,
            })
            .collect();
        loop {
            let mut changed = false;
            for &(a, b) in &self.pairs {
                if cls[a] == cls[b] {
                    continue;
                }
                let (ca, cb) = (&dag.children[a], &dag.children[b]);
                if ca.iter().zip(cb).all(|(&x, &y)| cls[x] == cls[y]) {
                    let (x, y) = (cls[a], cls[b]);
                    if x < n && y < n {
                        return false;
                    }
                    let (keep, drop) = if x < y { (x, y) } else { (y, x) };
                    for c in cls.iter_mut() {
                        if *c == drop {
                            *c = keep;
                        }
                    }
                    changed = true;
                }
            }
            if !changed {
                return true;
            }
        }
    }

    /// Constraints falsified by the ranks, by index.
    pub fn falsified(&self, ranks: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .clauses
            .iter()
            .zip(&self.clause_origin)
            .filter(|(c, _)| !c.iter().any(|l| l.holds(ranks)))
            .map(|(_, &k)| k)
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Atom arguments of the constraints, in code order. Falls back to the first
/// member of `domain` when there are none.
pub fn constraint_domain(domain: &TermSet, constraints: &[Constraint]) -> TermSet {
    let mut terms: Vec<Term> = Vec::new();
    for c in constraints {
        terms.extend(c.formula.atom_terms().into_iter().cloned());
    }
    if terms.is_empty() {
        terms.push(domain.get(0).clone());
    }
    TermSet::new(terms).expect("ground")
}
