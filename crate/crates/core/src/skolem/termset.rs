use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::coding::{encode_set, encode_term, Code};
use crate::formulas::Term;

use super::SkolemError;

/// Where a term set came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    User,
    Hull { level: usize },
}

/// A finite set of ground terms, kept in increasing order of Gödel code.
/// The position of a term in that order is its index.
#[derive(Clone)]
pub struct TermSet {
    terms: Vec<Term>,
    codes: Vec<Code>,
    index: HashMap<Term, usize>,
    pub provenance: Provenance,
}

impl fmt::Debug for TermSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.terms.iter().map(|t| t.to_string())).finish()
    }
}

impl PartialEq for TermSet {
    fn eq(&self, other: &TermSet) -> bool {
        self.terms == other.terms
    }
}

impl Eq for TermSet {}

impl TermSet {
    /// Build a set, dropping duplicates. Fails on a term with variables.
    pub fn new(terms: impl IntoIterator<Item = Term>) -> Result<TermSet, SkolemError> {
        let mut seen = HashSet::new();
        let mut pairs = Vec::new();
        for t in terms {
            if !t.is_ground() {
                return Err(SkolemError::NonGround(t.to_string()));
            }
            if seen.insert(t.clone()) {
                pairs.push((encode_term(&t), t));
            }
        }
        Ok(TermSet::from_pairs(pairs, Provenance::User))
    }

    fn from_pairs(mut pairs: Vec<(Code, Term)>, provenance: Provenance) -> TermSet {
        pairs.sort();
        let (codes, terms): (Vec<Code>, Vec<Term>) = pairs.into_iter().unzip();
        let index = terms.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        TermSet { terms, codes, index, provenance }
    }

    pub fn empty() -> TermSet {
        TermSet::from_pairs(Vec::new(), Provenance::User)
    }

    pub fn with_provenance(mut self, p: Provenance) -> TermSet {
        self.provenance = p;
        self
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.index.contains_key(t)
    }

    pub fn index_of(&self, t: &Term) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn get(&self, i: usize) -> &Term {
        &self.terms[i]
    }

    pub fn code(&self, i: usize) -> &Code {
        &self.codes[i]
    }

    /// Members in code order.
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Term> {
        self.terms.iter()
    }

    pub fn is_subset(&self, other: &TermSet) -> bool {
        self.terms.iter().all(|t| other.contains(t))
    }

    /// Add terms, keeping code order.
    pub fn extended(&self, extra: impl IntoIterator<Item = Term>) -> Result<TermSet, SkolemError> {
        Ok(self.union(&TermSet::new(extra)?))
    }

    pub fn union(&self, other: &TermSet) -> TermSet {
        let mut pairs: Vec<(Code, Term)> = self.codes.iter().cloned().zip(self.terms.iter().cloned()).collect();
        for (c, t) in other.codes.iter().zip(&other.terms) {
            if !self.contains(t) {
                pairs.push((c.clone(), t.clone()));
            }
        }
        TermSet::from_pairs(pairs, self.provenance)
    }

    /// Add pre-coded terms known to be ground and not yet members.
    pub(crate) fn union_coded(&self, extra: Vec<(Code, Term)>) -> TermSet {
        let mut pairs: Vec<(Code, Term)> = self.codes.iter().cloned().zip(self.terms.iter().cloned()).collect();
        pairs.extend(extra);
        TermSet::from_pairs(pairs, self.provenance)
    }

    pub fn without(&self, t: &Term) -> TermSet {
        let pairs = self.codes.iter().cloned().zip(self.terms.iter().cloned()).filter(|(_, u)| u != t).collect();
        TermSet::from_pairs(pairs, self.provenance)
    }

    /// Every subterm of every member, in code order.
    pub fn subterm_closure(&self) -> TermSet {
        let mut seen = HashSet::new();
        let mut all = Vec::new();
        for t in &self.terms {
            for s in t.subterms() {
                if seen.insert(s.clone()) {
                    all.push(s);
                }
            }
        }
        let pairs = all
            .into_iter()
            .map(|t| match self.index_of(&t) {
                Some(i) => (self.codes[i].clone(), t),
                None => (encode_term(&t), t),
            })
            .collect();
        TermSet::from_pairs(pairs, self.provenance)
    }

    /// Gödel code of the set.
    pub fn set_code(&self) -> Code {
        encode_set(self.codes.iter())
    }
}

impl<'a> IntoIterator for &'a TermSet {
    type Item = &'a Term;
    type IntoIter = std::slice::Iter<'a, Term>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}
