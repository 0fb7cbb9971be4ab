use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::coding::{encode_sequence, sym, Code};
use crate::formulas::{parse_term, term_to_string, Formula, SymbolNames, Term};
use crate::skolem::TermSet;

use super::EvaluationError;

/// Separator between consecutive terms: `~` or `<`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sep {
    Eq,
    Lt,
}

impl Sep {
    pub fn symbol(self) -> char {
        match self {
            Sep::Eq => '~',
            Sep::Lt => '<',
        }
    }
}

/// A sorting of a term set into blocks: `t0 s1 t1 s2 ... t(n-1)`.
///
/// Terms are stored as indices into the domain (code order). The block of a
/// term is the number of `<` separators before it.
#[derive(Clone, PartialEq, Eq)]
pub struct PreEvaluation {
    domain: Arc<TermSet>,
    order: Vec<usize>,
    seps: Vec<Sep>,
    block: Vec<usize>,
}

impl fmt::Debug for PreEvaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PreEvaluation({self})")
    }
}

impl PreEvaluation {
    /// Build from a domain, a permutation of its indices and `n - 1`
    /// separators.
    pub fn from_indices(
        domain: impl Into<Arc<TermSet>>,
        order: Vec<usize>,
        seps: Vec<Sep>,
    ) -> Result<PreEvaluation, EvaluationError> {
        let domain = domain.into();
        let n = domain.len();
        if n == 0 {
            return Err(EvaluationError::EmptyDomain);
        }
        if order.len() != n || seps.len() + 1 != n {
            return Err(EvaluationError::Length { terms: order.len(), seps: seps.len(), domain: n });
        }
        let mut block = vec![usize::MAX; n];
        let mut b = 0;
        for (k, &i) in order.iter().enumerate() {
            if k > 0 && seps[k - 1] == Sep::Lt {
                b += 1;
            }
            match block.get(i) {
                None => return Err(EvaluationError::Length { terms: order.len(), seps: seps.len(), domain: n }),
                Some(&x) if x != usize::MAX => return Err(EvaluationError::Duplicate(domain.get(i).to_string())),
                _ => block[i] = b,
            }
        }
        Ok(PreEvaluation { domain, order, seps, block })
    }

    /// Build from terms in sequence order over a given domain.
    pub fn new(
        domain: impl Into<Arc<TermSet>>,
        terms: &[Term],
        seps: Vec<Sep>,
    ) -> Result<PreEvaluation, EvaluationError> {
        let domain = domain.into();
        let mut order = Vec::with_capacity(terms.len());
        for t in terms {
            order.push(domain.index_of(t).ok_or_else(|| EvaluationError::NotInDomain(t.to_string()))?);
        }
        if order.len() != domain.len() {
            if let Some(missing) = domain.iter().find(|t| !terms.contains(t)) {
                return Err(EvaluationError::Missing(missing.to_string()));
            }
        }
        PreEvaluation::from_indices(domain, order, seps)
    }

    /// Build from a sequence, taking its terms as the domain.
    pub fn from_sequence(terms: &[Term], seps: Vec<Sep>) -> Result<PreEvaluation, EvaluationError> {
        if let Some(t) = terms.iter().find(|t| !t.is_ground()) {
            return Err(EvaluationError::NonGround(t.to_string()));
        }
        let domain = TermSet::new(terms.iter().cloned()).expect("checked ground");
        if domain.len() != terms.len() {
            let dup = terms.iter().enumerate().find(|(i, t)| terms[..*i].contains(t)).unwrap().1;
            return Err(EvaluationError::Duplicate(dup.to_string()));
        }
        PreEvaluation::new(domain, terms, seps)
    }

    /// Block-sorted sequence from a rank per domain index. Ranks need not be
    /// contiguous; only their order matters.
    pub fn from_ranks(domain: impl Into<Arc<TermSet>>, ranks: &[usize]) -> Result<PreEvaluation, EvaluationError> {
        let domain = domain.into();
        let mut order: Vec<usize> = (0..ranks.len()).collect();
        order.sort_by_key(|&i| (ranks[i], i));
        let seps = order.windows(2).map(|w| if ranks[w[0]] == ranks[w[1]] { Sep::Eq } else { Sep::Lt }).collect();
        PreEvaluation::from_indices(domain, order, seps)
    }

    pub fn domain(&self) -> &TermSet {
        &self.domain
    }

    pub fn shared_domain(&self) -> &Arc<TermSet> {
        &self.domain
    }

    /// Domain indices in sequence order.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn seps(&self) -> &[Sep] {
        &self.seps
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Block of the member with domain index `i`.
    pub fn block_of(&self, i: usize) -> usize {
        self.block[i]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.block
    }

    pub fn num_blocks(&self) -> usize {
        1 + self.seps.iter().filter(|s| **s == Sep::Lt).count()
    }

    /// The `~`-classes, lowest first, each in sequence order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for &i in &self.order {
            out[self.block[i]].push(i);
        }
        out
    }

    pub fn equiv(&self, i: usize, j: usize) -> bool {
        self.block[i] == self.block[j]
    }

    pub fn precedes(&self, i: usize, j: usize) -> bool {
        self.block[i] < self.block[j]
    }

    pub fn weakly_precedes(&self, i: usize, j: usize) -> bool {
        self.block[i] <= self.block[j]
    }

    fn idx(&self, t: &Term) -> Result<usize, EvaluationError> {
        self.domain.index_of(t).ok_or_else(|| EvaluationError::NotInDomain(t.to_string()))
    }

    pub fn eq_terms(&self, a: &Term, b: &Term) -> Result<bool, EvaluationError> {
        Ok(self.equiv(self.idx(a)?, self.idx(b)?))
    }

    pub fn lt_terms(&self, a: &Term, b: &Term) -> Result<bool, EvaluationError> {
        Ok(self.precedes(self.idx(a)?, self.idx(b)?))
    }

    /// Truth of a ground open formula, reading `=` as `~` and `<=` as `~` or
    /// `<`.
    pub fn satisfies(&self, f: &Formula) -> Result<bool, EvaluationError> {
        Ok(match f {
            Formula::Eq(a, b) => self.equiv(self.idx(a)?, self.idx(b)?),
            Formula::Le(a, b) => self.weakly_precedes(self.idx(a)?, self.idx(b)?),
            Formula::Not(g) => !self.satisfies(g)?,
            Formula::And(a, b) => self.satisfies(a)? & self.satisfies(b)?,
            Formula::Or(a, b) => self.satisfies(a)? | self.satisfies(b)?,
            Formula::Implies(a, b) => !self.satisfies(a)? | self.satisfies(b)?,
            _ => return Err(EvaluationError::NotOpen(f.to_string())),
        })
    }

    /// Each block listed in increasing code order.
    pub fn is_block_sorted(&self) -> bool {
        self.order.windows(2).zip(&self.seps).all(|(w, s)| *s == Sep::Lt || w[0] < w[1])
    }

    /// The block-sorted sequence with the same relations.
    pub fn canonical(&self) -> PreEvaluation {
        PreEvaluation::from_ranks(self.domain.clone(), &self.block).expect("same shape")
    }

    /// Gödel code of the sequence: term codes interleaved with separator
    /// symbols.
    pub fn code(&self) -> Code {
        let mut items = Vec::with_capacity(2 * self.len());
        for (k, &i) in self.order.iter().enumerate() {
            if k > 0 {
                items.push(BigUint::from(match self.seps[k - 1] {
                    Sep::Eq => sym::SEP_EQ,
                    Sep::Lt => sym::SEP_LT,
                }));
            }
            items.push(self.domain.code(i).value().clone());
        }
        encode_sequence(&items)
    }

    pub fn display_with(&self, names: SymbolNames) -> String {
        let mut out = String::new();
        for (k, &i) in self.order.iter().enumerate() {
            if k > 0 {
                out.push(' ');
                out.push(self.seps[k - 1].symbol());
                out.push(' ');
            }
            out.push_str(&term_to_string(self.domain.get(i), names));
        }
        out
    }
}

impl fmt::Display for PreEvaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&|_| None))
    }
}

/// Split `a < b ~ c` into terms and separators. Terms may contain variables;
/// callers ground them.
pub fn parse_sequence(text: &str) -> Result<(Vec<Term>, Vec<Sep>), EvaluationError> {
    let mut terms = Vec::new();
    let mut seps = Vec::new();
    let mut start = 0;
    let push = |piece: &str, offset: usize, terms: &mut Vec<Term>| {
        parse_term(piece).map(|t| terms.push(t)).map_err(|e| EvaluationError::Syntax {
            offset: offset + e.position().unwrap_or(piece.len()),
            message: e.to_string(),
        })
    };
    for (pos, ch) in text.char_indices() {
        let sep = match ch {
            '~' | '≈' => Sep::Eq,
            '<' | '≺' => Sep::Lt,
            _ => continue,
        };
        push(&text[start..pos], start, &mut terms)?;
        seps.push(sep);
        start = pos + ch.len_utf8();
    }
    push(&text[start..], start, &mut terms)?;
    Ok((terms, seps))
}

/// Steps through sequences on `0..n` in lexicographic order of
/// `(t0, s1, t1, ...)`, terms by index and `~` before `<`.
///
/// With `block_sorted`, only sequences whose blocks are increasing are
/// visited: one per weak order.
#[derive(Debug, Clone)]
pub struct SequenceCursor {
    order: Vec<usize>,
    seps: Vec<Sep>,
    used: Vec<bool>,
    block_sorted: bool,
    fresh: bool,
}

impl SequenceCursor {
    pub fn new(n: usize, block_sorted: bool) -> SequenceCursor {
        let mut c = SequenceCursor {
            order: Vec::with_capacity(n),
            seps: Vec::with_capacity(n.saturating_sub(1)),
            used: vec![false; n],
            block_sorted,
            fresh: true,
        };
        c.fill();
        c
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn seps(&self) -> &[Sep] {
        &self.seps
    }

    /// Lexicographically least completion of the current prefix.
    fn fill(&mut self) {
        let n = self.used.len();
        while self.order.len() < n {
            let next_free = |from: usize, used: &[bool]| (from..n).find(|&i| !used[i]);
            let (s, t) = match self.order.last() {
                None => (None, next_free(0, &self.used).unwrap()),
                Some(&last) => {
                    let eq = if self.block_sorted { next_free(last + 1, &self.used) } else { next_free(0, &self.used) };
                    match eq {
                        Some(t) => (Some(Sep::Eq), t),
                        None => (Some(Sep::Lt), next_free(0, &self.used).unwrap()),
                    }
                }
            };
            if let Some(s) = s {
                self.seps.push(s);
            }
            self.used[t] = true;
            self.order.push(t);
        }
    }

    /// Move to the next sequence; false when exhausted.
    pub fn advance(&mut self) -> bool {
        let n = self.used.len();
        while let Some(t) = self.order.pop() {
            self.used[t] = false;
            let k = self.order.len();
            // Try a larger term at position k under the same separator.
            let lo = if k > 0 && self.block_sorted && self.seps[k - 1] == Sep::Eq {
                t.max(self.order[k - 1]) + 1
            } else {
                t + 1
            };
            if let Some(u) = (lo..n).find(|&i| !self.used[i]) {
                self.used[u] = true;
                self.order.push(u);
                self.fill();
                return true;
            }
            // Then a `<` in place of a `~`.
            if k > 0 {
                let s = self.seps.pop().unwrap();
                if s == Sep::Eq {
                    let u = (0..n).find(|&i| !self.used[i]).unwrap();
                    self.seps.push(Sep::Lt);
                    self.used[u] = true;
                    self.order.push(u);
                    self.fill();
                    return true;
                }
            }
        }
        false
    }
}

/// Iterator over pre-evaluations of a domain.
pub struct PreEvaluations {
    domain: Arc<TermSet>,
    cursor: SequenceCursor,
    done: bool,
}

impl Iterator for PreEvaluations {
    type Item = PreEvaluation;

    fn next(&mut self) -> Option<PreEvaluation> {
        if self.done {
            return None;
        }
        if !self.cursor.fresh && !self.cursor.advance() {
            self.done = true;
            return None;
        }
        self.cursor.fresh = false;
        Some(
            PreEvaluation::from_indices(self.domain.clone(), self.cursor.order.clone(), self.cursor.seps.clone())
                .expect("cursor yields permutations"),
        )
    }
}

fn iterate(domain: impl Into<Arc<TermSet>>, block_sorted: bool) -> Result<PreEvaluations, EvaluationError> {
    let domain = domain.into();
    if domain.len() < 2 {
        return Err(EvaluationError::TooSmall(domain.len()));
    }
    let cursor = SequenceCursor::new(domain.len(), block_sorted);
    Ok(PreEvaluations { domain, cursor, done: false })
}

/// All `n! * 2^(n-1)` pre-evaluations, in lexicographic order.
pub fn enumerate_pre_evaluations(domain: impl Into<Arc<TermSet>>) -> Result<PreEvaluations, EvaluationError> {
    iterate(domain, false)
}

/// One block-sorted pre-evaluation per weak order of the domain.
pub fn enumerate_weak_orders(domain: impl Into<Arc<TermSet>>) -> Result<PreEvaluations, EvaluationError> {
    iterate(domain, true)
}
