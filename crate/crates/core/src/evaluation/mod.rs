//! Pre-evaluations, their equality and order relations, the congruence
//! condition, and satisfaction of ground open formulas.

mod dag;
mod pre;

use std::fmt;
use std::ops::Deref;

use thiserror::Error;

use crate::skolem::{available_instances, Instance, Theory};

pub use dag::{TermDag, UnionFind};
pub use pre::{
    enumerate_pre_evaluations, enumerate_weak_orders, parse_sequence, PreEvaluation, PreEvaluations, Sep,
    SequenceCursor,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvaluationError {
    #[error("empty term set")]
    EmptyDomain,
    #[error("need at least 2 terms to enumerate, got {0}")]
    TooSmall(usize),
    #[error("{terms} terms and {seps} separators do not sort a set of {domain}")]
    Length { terms: usize, seps: usize, domain: usize },
    #[error("term occurs twice: {0}")]
    Duplicate(String),
    #[error("term not in domain: {0}")]
    NotInDomain(String),
    #[error("domain term missing from sequence: {0}")]
    Missing(String),
    #[error("term is not ground: {0}")]
    NonGround(String),
    #[error("formula is not open: {0}")]
    NotOpen(String),
    #[error("at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("not a congruence: {0} and {1} are forced equal")]
    NotCongruent(String, String),
}

/// Two members in different blocks that the congruence generated by the
/// blocks identifies, if any. Domain indices, lowest pair first.
///
/// The congruence is taken over the whole subterm DAG, so intermediate
/// subterms outside the domain also carry equalities.
pub fn congruence_violation(p: &PreEvaluation) -> Option<(usize, usize)> {
    let dag = TermDag::new(p.domain());
    let pairs = p
        .blocks()
        .into_iter()
        .flat_map(|b| {
            let first = b[0];
            b.into_iter().skip(1).map(move |i| (first, i))
        })
        .map(|(i, j)| (dag.member_node[i], dag.member_node[j]))
        .collect::<Vec<_>>();
    let root = dag.congruence_closure(pairs);
    let mut seen: Vec<Option<usize>> = vec![None; dag.len()];
    let mut worst: Option<(usize, usize)> = None;
    for i in 0..p.domain().len() {
        let r = root[dag.member_node[i]];
        match seen[r] {
            Some(j) if !p.equiv(i, j) => {
                let cand = (j.min(i), j.max(i));
                worst = Some(worst.map_or(cand, |w| w.min(cand)));
            }
            Some(_) => {}
            None => seen[r] = Some(i),
        }
    }
    worst
}

pub fn is_evaluation(p: &PreEvaluation) -> bool {
    congruence_violation(p).is_none()
}

/// A pre-evaluation whose equality is a congruence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation(PreEvaluation);

impl Evaluation {
    pub fn new(p: PreEvaluation) -> Result<Evaluation, EvaluationError> {
        match congruence_violation(&p) {
            None => Ok(Evaluation(p)),
            Some((i, j)) => {
                Err(EvaluationError::NotCongruent(p.domain().get(i).to_string(), p.domain().get(j).to_string()))
            }
        }
    }

    pub fn pre(&self) -> &PreEvaluation {
        &self.0
    }

    pub fn into_pre(self) -> PreEvaluation {
        self.0
    }
}

impl Deref for Evaluation {
    type Target = PreEvaluation;
    fn deref(&self) -> &PreEvaluation {
        &self.0
    }
}

impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// First available instance of the theory that `p` falsifies.
pub fn failing_instance(p: &Evaluation, theory: &Theory) -> Option<Instance> {
    available_instances(theory, p.domain())
        .into_iter()
        .find(|i| !p.satisfies(&i.formula).expect("available instances lie in the domain"))
}

pub fn is_t_evaluation(p: &Evaluation, theory: &Theory) -> bool {
    failing_instance(p, theory).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::{parse_formula, parse_term, Formula, Term};
    use crate::skolem::{SkolemRegistry, TermSet};

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn grounded(text: &str, reg: &mut SkolemRegistry) -> PreEvaluation {
        let (terms, seps) = parse_sequence(text).unwrap();
        let terms: Vec<Term> = terms.iter().map(|x| reg.ground_term(x).unwrap()).collect();
        PreEvaluation::from_sequence(&terms, seps).unwrap()
    }

    /// Relations read off contiguous windows of the sequence.
    fn window_oracle(p: &PreEvaluation, a: usize, b: usize) -> (bool, bool) {
        let pos = |x: usize| p.order().iter().position(|&y| y == x).unwrap();
        let (pa, pb) = (pos(a), pos(b));
        let (lo, hi) = (pa.min(pb), pa.max(pb));
        let all_eq = p.seps()[lo..hi].iter().all(|s| *s == Sep::Eq);
        let some_lt = pa < pb && p.seps()[pa..pb].contains(&Sep::Lt);
        (all_eq, some_lt)
    }

    #[test]
    fn alpha_example() {
        let mut reg = SkolemRegistry::new();
        let p = grounded("a4 < a7 ~ a1 ~ a5 < a3 < a6 ~ a2", &mut reg);
        let a = |k: u32| {
            let id = reg.find_parameter(&format!("a{k}")).unwrap();
            Term::constant(id)
        };
        let eq = |x, y| p.eq_terms(&a(x), &a(y)).unwrap();
        let lt = |x, y| p.lt_terms(&a(x), &a(y)).unwrap();
        assert!(eq(1, 5) && eq(5, 7) && eq(2, 6));
        for (x, y) in [(4, 1), (4, 5), (4, 7), (1, 2), (1, 3), (1, 6)] {
            assert!(lt(x, y));
        }
        assert!(!eq(1, 2));
        assert!(p.satisfies(&Formula::le(a(4), a(1))).unwrap());
        assert!(!p.satisfies(&Formula::eq(a(1), a(2))).unwrap());
        assert_eq!(p.display_with(&|id| reg.name_of(id)), "a4 < a7 ~ a1 ~ a5 < a3 < a6 ~ a2");
    }

    #[test]
    fn two_terms_one_block() {
        let p = PreEvaluation::from_sequence(&[t("0"), t("S(0)")], vec![Sep::Eq]).unwrap();
        assert_eq!(p.blocks(), [vec![0, 1]]);
        assert!(!p.precedes(0, 1) && !p.precedes(1, 0));
    }

    #[test]
    fn blocks_agree_with_windows() {
        for n in 2..=4 {
            let dom = TermSet::new((0..n).map(Term::numeral)).unwrap();
            let mut count = 0;
            for p in enumerate_pre_evaluations(dom).unwrap() {
                count += 1;
                for a in 0..n {
                    for b in 0..n {
                        assert_eq!(window_oracle(&p, a, b), (p.equiv(a, b), p.precedes(a, b)), "{p}");
                    }
                }
            }
            assert_eq!(count, [0, 0, 4, 24, 192][n]);
        }
    }

    #[test]
    fn enumeration_order_and_counts() {
        let dom = TermSet::new((0..3).map(Term::numeral)).unwrap();
        let seqs: Vec<String> = enumerate_pre_evaluations(dom.clone()).unwrap().map(|p| p.to_string()).collect();
        assert_eq!(seqs[0], "0 ~ S(0) ~ S(S(0))");
        assert_eq!(seqs[1], "0 ~ S(0) < S(S(0))");
        assert_eq!(seqs[2], "0 ~ S(S(0)) ~ S(0)");
        let mut sorted = seqs.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), 24);
        let weak: Vec<PreEvaluation> = enumerate_weak_orders(dom).unwrap().collect();
        assert_eq!(weak.len(), 13);
        assert!(weak.iter().all(|p| p.is_block_sorted()));
        for n in 1..=6usize {
            let mut c = SequenceCursor::new(n, true);
            let mut k = 1;
            while c.advance() {
                k += 1;
            }
            assert_eq!(k, [0, 1, 3, 13, 75, 541, 4683][n]);
        }
        let one = TermSet::new([Term::Zero]).unwrap();
        assert_eq!(enumerate_pre_evaluations(one).err(), Some(EvaluationError::TooSmall(1)));
    }

    #[test]
    fn congruence_examples() {
        let bad =
            PreEvaluation::from_sequence(&[t("0"), t("0+0"), t("S(0)"), t("S(0+0)")], vec![Sep::Eq, Sep::Lt, Sep::Lt])
                .unwrap();
        assert!(!is_evaluation(&bad));
        assert!(matches!(Evaluation::new(bad), Err(EvaluationError::NotCongruent(..))));
        let ok = PreEvaluation::from_sequence(&[t("0"), t("S(0)")], vec![Sep::Lt]).unwrap();
        assert!(is_evaluation(&ok));
        // Equality reaches members through a subterm outside the domain.
        let deep = PreEvaluation::from_sequence(
            &[t("0"), t("0+0"), t("S(S(0))"), t("S(S(0+0))")],
            vec![Sep::Eq, Sep::Lt, Sep::Lt],
        )
        .unwrap();
        assert!(!is_evaluation(&deep));
    }

    #[test]
    fn satisfaction() {
        let p = PreEvaluation::from_sequence(&[t("0"), t("S(0)")], vec![Sep::Lt]).unwrap();
        for u in p.domain().iter() {
            let f = Formula::and(Formula::le(u.clone(), u.clone()), Formula::eq(u.clone(), u.clone()));
            assert!(p.satisfies(&f).unwrap());
        }
        let f = parse_formula("S(0) <= 0 -> !(0 = S(0))").unwrap();
        assert!(p.satisfies(&f).unwrap());
        assert_eq!(p.satisfies(&parse_formula("0 = 0+0").unwrap()), Err(EvaluationError::NotInDomain("0 + 0".into())));
        assert!(matches!(p.satisfies(&parse_formula("forall x (x = 0)").unwrap()), Err(EvaluationError::NotOpen(_))));
    }

    #[test]
    fn singleton_and_errors() {
        let p = PreEvaluation::from_sequence(&[t("0")], vec![]).unwrap();
        assert!(is_evaluation(&p));
        assert_eq!(p.num_blocks(), 1);
        assert!(matches!(
            PreEvaluation::from_sequence(&[t("0"), t("0")], vec![Sep::Eq]),
            Err(EvaluationError::Duplicate(_))
        ));
        assert!(matches!(PreEvaluation::from_sequence(&[t("x")], vec![]), Err(EvaluationError::NonGround(_))));
        assert!(matches!(
            PreEvaluation::from_sequence(&[t("0"), t("S(0)")], vec![]),
            Err(EvaluationError::Length { .. })
        ));
        assert!(matches!(parse_sequence("0 < S(0 ~ 0"), Err(EvaluationError::Syntax { .. })));
    }

    #[test]
    fn canonical_and_code() {
        let p = PreEvaluation::from_sequence(&[t("S(0)"), t("0"), t("0+0")], vec![Sep::Eq, Sep::Lt]).unwrap();
        let c = p.canonical();
        assert_eq!(c.to_string(), "0 ~ S(0) < 0 + 0");
        assert_eq!(c.ranks(), p.ranks());
        assert_ne!(c.code(), p.code());
        let (terms, seps) = parse_sequence(&c.to_string()).unwrap();
        assert_eq!(PreEvaluation::from_sequence(&terms, seps).unwrap(), c);
    }

    #[test]
    fn empty_theory_accepts_everything() {
        let th = Theory::new("empty");
        let dom = TermSet::new([t("0"), t("S(0)"), t("0+0")]).unwrap();
        for p in enumerate_pre_evaluations(dom).unwrap() {
            if let Ok(e) = Evaluation::new(p) {
                assert!(is_t_evaluation(&e, &th));
            }
        }
    }
}
