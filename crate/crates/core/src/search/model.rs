use std::collections::{BTreeMap, HashMap};

use crate::evaluation::Evaluation;
use crate::formulas::{Formula, FunSym, Term};

/// The finite structure read off an evaluation: one element per block,
/// partial function tables wherever an application lies in the domain, and
/// `<=` as the block order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteHerbrandModel {
    /// Elements in increasing order; each is a block of terms.
    pub universe: Vec<Vec<Term>>,
    /// For each symbol, argument elements to result element.
    pub functions: BTreeMap<FunSym, BTreeMap<Vec<usize>, usize>>,
    class_of: HashMap<Term, usize>,
}

/// Build the model of an evaluation.
///
/// Panics if two representatives of the same argument elements give
/// different results, which congruence rules out.
pub fn extract_model(p: &Evaluation) -> FiniteHerbrandModel {
    let dom = p.domain();
    let universe: Vec<Vec<Term>> =
        p.blocks().into_iter().map(|b| b.into_iter().map(|i| dom.get(i).clone()).collect()).collect();
    let class_of: HashMap<Term, usize> = dom.iter().enumerate().map(|(i, t)| (t.clone(), p.block_of(i))).collect();
    let mut functions: BTreeMap<FunSym, BTreeMap<Vec<usize>, usize>> = BTreeMap::new();
    for (i, t) in dom.iter().enumerate() {
        let Some(args) = t.args().into_iter().map(|a| class_of.get(a).copied()).collect::<Option<Vec<usize>>>() else {
            continue;
        };
        let head = t.head().expect("ground");
        let prev = functions.entry(head).or_default().insert(args, p.block_of(i));
        assert!(prev.is_none_or(|c| c == p.block_of(i)), "table entry depends on representative");
    }
    FiniteHerbrandModel { universe, functions, class_of }
}

impl FiniteHerbrandModel {
    pub fn size(&self) -> usize {
        self.universe.len()
    }

    /// `t/p` for a member of the domain.
    pub fn class_of(&self, t: &Term) -> Option<usize> {
        self.class_of.get(t).copied()
    }

    /// Value of a term through the tables, falling back to the term's own
    /// element when some application along the way is undefined.
    pub fn eval_term(&self, t: &Term) -> Option<usize> {
        let args: Option<Vec<usize>> = t.args().into_iter().map(|a| self.eval_term(a)).collect();
        let by_table = args.and_then(|a| self.functions.get(&t.head()?)?.get(&a).copied());
        by_table.or_else(|| self.class_of(t))
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        a <= b
    }

    /// All pairs of the `<=` relation.
    pub fn le_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect()
    }

    /// Truth of a ground open formula, or `None` when a term has no value.
    pub fn satisfies(&self, f: &Formula) -> Option<bool> {
        Some(match f {
            Formula::Eq(a, b) => self.eval_term(a)? == self.eval_term(b)?,
            Formula::Le(a, b) => self.le(self.eval_term(a)?, self.eval_term(b)?),
            Formula::Not(g) => !self.satisfies(g)?,
            Formula::And(a, b) => self.satisfies(a)? & self.satisfies(b)?,
            Formula::Or(a, b) => self.satisfies(a)? | self.satisfies(b)?,
            Formula::Implies(a, b) => !self.satisfies(a)? | self.satisfies(b)?,
            _ => return None,
        })
    }
}
