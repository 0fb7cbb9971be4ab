mod common;

use std::collections::HashMap;

use num_bigint::BigUint;
use proptest::prelude::*;

use common::{f, t};
use hcon::coding::{decode_formula, decode_sequence, decode_term, encode_formula, encode_sequence, encode_term};
use hcon::evaluation::{enumerate_pre_evaluations, is_evaluation, Evaluation, PreEvaluation};
use hcon::formulas::{formula_to_string, is_rnnf, parse_formula, rnnf, Formula, Term};
use hcon::search::{
    find_evaluation, theory_constraints, Constraint, Problem, SearchOptions, SearchOutcome, Strategy as Search,
};
use hcon::skolem::{available_instances, hull, preset, skolemize, HullMode, SkolemRegistry, TermSet, Theory};

const VARS: [&str; 3] = ["x", "y", "z"];

fn term_strategy() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just(Term::Zero), (0..3usize).prop_map(|i| Term::var(VARS[i]))];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Term::succ),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::add(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Term::mul(a, b)),
        ]
    })
}

fn formula_strategy() -> impl Strategy<Value = Formula> {
    let atom = prop_oneof![
        (term_strategy(), term_strategy()).prop_map(|(a, b)| Formula::eq(a, b)),
        (term_strategy(), term_strategy()).prop_map(|(a, b)| Formula::le(a, b)),
    ];
    atom.prop_recursive(4, 24, 2, |inner| {
        let v = 0..3usize;
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (v.clone(), inner.clone()).prop_map(|(i, g)| Formula::forall(VARS[i], g)),
            (v.clone(), inner.clone()).prop_map(|(i, g)| Formula::exists(VARS[i], g)),
            (v.clone(), term_strategy(), inner.clone()).prop_map(|(i, b, g)| Formula::bounded_forall(VARS[i], b, g)),
            (v, term_strategy(), inner).prop_map(|(i, b, g)| Formula::bounded_exists(VARS[i], b, g)),
        ]
    })
}

/// Arithmetic modulo `N`, ordered as integers.
const N: u64 = 3;

fn eval_term(t: &Term, env: &HashMap<String, u64>) -> u64 {
    match t {
        Term::Var(v) => env[v],
        Term::Zero => 0,
        Term::Succ(a) => (eval_term(a, env) + 1) % N,
        Term::Add(a, b) => (eval_term(a, env) + eval_term(b, env)) % N,
        Term::Mul(a, b) => (eval_term(a, env) * eval_term(b, env)) % N,
        Term::Skolem(..) => unreachable!(),
    }
}

fn holds(f: &Formula, env: &mut HashMap<String, u64>) -> bool {
    let quant = |v: &str, env: &mut HashMap<String, u64>, all: bool, g: &dyn Fn(&mut HashMap<String, u64>) -> bool| {
        let saved = env.get(v).copied();
        let mut r = all;
        for d in 0..N {
            env.insert(v.to_string(), d);
            if g(env) != all {
                r = !all;
                break;
            }
        }
        match saved {
            Some(s) => env.insert(v.to_string(), s),
            None => env.remove(v),
        };
        r
    };
    match f {
        Formula::Eq(a, b) => eval_term(a, env) == eval_term(b, env),
        Formula::Le(a, b) => eval_term(a, env) <= eval_term(b, env),
        Formula::Not(g) => !holds(g, env),
        Formula::And(a, b) => holds(a, env) && holds(b, env),
        Formula::Or(a, b) => holds(a, env) || holds(b, env),
        Formula::Implies(a, b) => !holds(a, env) || holds(b, env),
        Formula::Forall(v, g) => quant(v, env, true, &|e| holds(g, e)),
        Formula::Exists(v, g) => quant(v, env, false, &|e| holds(g, e)),
        Formula::BoundedForall(v, b, g) => {
            let bound = eval_term(b, env);
            quant(v, env, true, &|e| e[v.as_str()] > bound || holds(g, e))
        }
        Formula::BoundedExists(v, b, g) => {
            let bound = eval_term(b, env);
            quant(v, env, false, &|e| e[v.as_str()] <= bound && holds(g, e))
        }
    }
}

fn small_terms() -> Vec<Term> {
    ["0", "S(0)", "S(S(0))", "0+0", "S(0)+0", "0+S(0)", "0*0", "S(0)*S(0)", "S(0+0)", "S(0)*0"]
        .iter()
        .map(|s| t(s))
        .collect()
}

fn domain_strategy(max: usize) -> impl Strategy<Value = TermSet> {
    proptest::sample::subsequence(small_terms(), 2..=max).prop_map(|v| TermSet::new(v).unwrap())
}

/// Naive congruence: merge same-symbol nodes with related arguments until
/// nothing changes, over all subterms.
fn naive_congruent(p: &PreEvaluation) -> bool {
    let dom = p.domain();
    let nodes = dom.subterm_closure();
    let m = nodes.len();
    let mut rel = vec![vec![false; m]; m];
    for (i, row) in rel.iter_mut().enumerate() {
        row[i] = true;
        for (j, cell) in row.iter_mut().enumerate() {
            if let (Some(a), Some(b)) = (dom.index_of(nodes.get(i)), dom.index_of(nodes.get(j))) {
                *cell |= p.equiv(a, b);
            }
        }
    }
    loop {
        let mut changed = false;
        for i in 0..m {
            for j in 0..m {
                if rel[i][j] {
                    continue;
                }
                let (a, b) = (nodes.get(i), nodes.get(j));
                let related = a.head() == b.head()
                    && !a.args().is_empty()
                    && a.args()
                        .iter()
                        .zip(b.args())
                        .all(|(x, y)| rel[nodes.index_of(x).unwrap()][nodes.index_of(y).unwrap()]);
                let trans = (0..m).any(|k| rel[i][k] && rel[k][j]);
                if related || trans {
                    rel[i][j] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    (0..m).all(|i| {
        (0..m).all(|j| match (dom.index_of(nodes.get(i)), dom.index_of(nodes.get(j))) {
            (Some(a), Some(b)) if rel[i][j] => p.equiv(a, b),
            _ => true,
        })
    })
}

/// The congruence condition restricted to one-hole contexts within the
/// domain.
fn one_hole_ok(p: &PreEvaluation) -> bool {
    let dom = p.domain();
    for (a, u) in dom.iter().enumerate() {
        for (b, v) in dom.iter().enumerate() {
            if a == b || !p.equiv(a, b) {
                continue;
            }
            for (c, w) in dom.iter().enumerate() {
                let moved = w.replace(u, v);
                if let Some(d) = dom.index_of(&moved) {
                    if !p.equiv(c, d) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn ranks_strategy(n: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0..n, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rnnf_preserves_truth(g in formula_strategy(), vals in proptest::collection::vec(0..N, 3)) {
        let r = rnnf(&g);
        prop_assert!(is_rnnf(&r));
        let mut env: HashMap<String, u64> = VARS.iter().map(|v| v.to_string()).zip(vals).collect();
        prop_assert_eq!(holds(&g, &mut env), holds(&r, &mut env));
    }

    #[test]
    fn printing_round_trips(g in formula_strategy()) {
        let s = formula_to_string(&g, &|_| None);
        prop_assert_eq!(parse_formula(&s).unwrap(), g);
    }

    #[test]
    fn coding_round_trips(g in formula_strategy(), u in term_strategy()) {
        prop_assert_eq!(decode_formula(&encode_formula(&g)).unwrap(), g);
        prop_assert_eq!(decode_term(&encode_term(&u)).unwrap(), u);
    }

    #[test]
    fn coding_bounds(
        a in proptest::collection::vec(0u64..1000, 0..20),
        b in proptest::collection::vec(0u64..1000, 0..20),
    ) {
        let big = |v: &[u64]| v.iter().map(|&x| BigUint::from(x)).collect::<Vec<_>>();
        let (ca, cb) = (encode_sequence(&big(&a)), encode_sequence(&big(&b)));
        let ab: Vec<u64> = a.iter().chain(&b).copied().collect();
        let cab = encode_sequence(&big(&ab));
        prop_assert!(cab.value() <= &(BigUint::from(64u8) * ca.value() * cb.value()));
        prop_assert!((ab.len() as f64) <= cab.log2());
        prop_assert_eq!(decode_sequence(&cab).unwrap(), big(&ab));
    }

    #[test]
    fn skolemization_ignores_bound_names(g in formula_strategy()) {
        let closed = {
            let vs = g.free_vars();
            let vs: Vec<&str> = vs.iter().map(String::as_str).collect();
            Formula::forall_many(&vs, g)
        };
        let renamed = rnnf(&closed);
        let mut r1 = SkolemRegistry::new();
        let mut r2 = SkolemRegistry::new();
        let a = skolemize(&closed, &mut r1);
        let b = skolemize(&renamed, &mut r2);
        prop_assert_eq!(&a.open, &b.open);
        prop_assert_eq!(a.free_vars, b.free_vars);
        let again = skolemize(&closed, &mut r1);
        prop_assert_eq!(a.open, again.open);
    }

    #[test]
    fn relations_are_a_total_preorder(dom in domain_strategy(6), seed in any::<u64>()) {
        let n = dom.len();
        let ranks: Vec<usize> = (0..n).map(|i| ((seed >> (i * 3)) % n as u64) as usize).collect();
        let p = PreEvaluation::from_ranks(dom, &ranks).unwrap();
        for a in 0..n {
            prop_assert!(p.equiv(a, a) && !p.precedes(a, a));
            for b in 0..n {
                prop_assert_eq!(p.equiv(a, b), p.equiv(b, a));
                if a != b {
                    let k = [p.equiv(a, b), p.precedes(a, b), p.precedes(b, a)].iter().filter(|x| **x).count();
                    prop_assert_eq!(k, 1);
                }
                for c in 0..n {
                    if p.equiv(a, b) && p.precedes(a, c) { prop_assert!(p.precedes(b, c)); }
                    if p.equiv(a, b) && p.precedes(c, a) { prop_assert!(p.precedes(c, b)); }
                    if p.precedes(a, b) && p.precedes(b, c) { prop_assert!(p.precedes(a, c)); }
                }
            }
        }
    }

    #[test]
    fn congruence_matches_naive_oracle(dom in domain_strategy(5), ranks in ranks_strategy(5)) {
        let ranks = &ranks[..dom.len()];
        let p = PreEvaluation::from_ranks(dom, ranks).unwrap();
        let ok = is_evaluation(&p);
        prop_assert_eq!(ok, naive_congruent(&p));
        if ok {
            prop_assert!(one_hole_ok(&p));
        }
    }

    #[test]
    fn leibniz(dom in domain_strategy(7), ranks in ranks_strategy(7), picks in proptest::collection::vec(any::<prop::sample::Index>(), 6)) {
        let ranks = &ranks[..dom.len()];
        let Ok(e) = Evaluation::new(PreEvaluation::from_ranks(dom.clone(), ranks).unwrap()) else {
            return Ok(());
        };
        let n = dom.len();
        let (a, b) = (picks[0].index(n), picks[1].index(n));
        if !e.equiv(a, b) {
            return Ok(());
        }
        let (u, v) = (dom.get(a).clone(), dom.get(b).clone());
        // Atoms between members whose images under u := v stay in the domain.
        let movable: Vec<&Term> = dom.iter().filter(|w| dom.contains(&w.replace(&u, &v))).collect();
        let pick = |i: usize| movable[picks[i].index(movable.len())].clone();
        let phi = Formula::or(
            Formula::and(Formula::eq(pick(2), pick(3)), Formula::not(Formula::le(pick(4), pick(5)))),
            Formula::le(pick(3), pick(2)),
        );
        let phi_v = phi.map_terms(&|w| w.replace(&u, &v));
        let law = Formula::implies(Formula::and(Formula::eq(u.clone(), v.clone()), phi), phi_v);
        prop_assert!(e.satisfies(&law).unwrap());
    }
}

fn theories() -> Vec<Theory> {
    let mut v: Vec<Theory> = ["EX3", "T1", "OMEGA0", "IND_SQ", "EX2"].iter().map(|n| preset(n).unwrap()).collect();
    v.push(Theory::from_axioms("lin", vec![f("forall x (x <= S(x))"), f("forall x (S(x) != x)")]).unwrap());
    v.push(Theory::from_axioms("clash", vec![f("forall x (x + 0 = x)"), f("forall x (S(x) + 0 != S(x))")]).unwrap());
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(240))]

    #[test]
    fn strategies_agree(which in 0..7usize, dom in domain_strategy(6), jobs in 1..4usize) {
        let th = &theories()[which];
        let brute = find_evaluation(th, &dom, &SearchOptions { strategy: Search::Brute, ..Default::default() }).unwrap();
        let prop = find_evaluation(th, &dom, &SearchOptions { jobs, ..Default::default() }).unwrap();
        match (&brute, &prop) {
            (SearchOutcome::Witness { evaluation: a, .. }, SearchOutcome::Witness { evaluation: b, .. }) => {
                prop_assert_eq!(a, b);
                prop_assert!(a.is_block_sorted());
                // It is the first in the full enumeration.
                let first = enumerate_pre_evaluations(dom.clone())
                    .unwrap()
                    .find(|p| Evaluation::new(p.clone()).is_ok_and(|e| hcon::evaluation::is_t_evaluation(&e, th)))
                    .unwrap();
                prop_assert_eq!(a.pre(), &first);
            }
            (SearchOutcome::Inconsistent { certificate, .. }, SearchOutcome::Inconsistent { .. }) => {
                prop_assert_eq!(certificate.verify(9), Some(true));
                let all = Problem::new(dom.clone(), theory_constraints(th, &dom)).unwrap();
                let none = enumerate_pre_evaluations(dom.clone()).unwrap().all(|p| {
                    !is_evaluation(&p) || !all.constraints.iter().all(|c: &Constraint| p.satisfies(&c.formula).unwrap())
                });
                prop_assert!(none);
            }
            _ => prop_assert!(false, "{:?} vs {:?}", brute, prop),
        }
    }

    #[test]
    fn refutation_is_monotone(which in 0..7usize, dom in domain_strategy(5), extra in domain_strategy(3)) {
        let th = &theories()[which];
        let out = find_evaluation(th, &dom, &SearchOptions::default()).unwrap();
        if out.is_inconsistent() {
            let bigger = dom.union(&extra);
            prop_assert!(find_evaluation(th, &bigger, &SearchOptions::default()).unwrap().is_inconsistent());
        }
    }

    #[test]
    fn availability_is_monotone_and_sound(which in 0..7usize, dom in domain_strategy(6), extra in domain_strategy(3)) {
        let th = &theories()[which];
        let small = available_instances(th, &dom);
        let big = available_instances(th, &dom.union(&extra));
        for i in &small {
            prop_assert!(big.contains(i));
            for a in i.formula.atom_terms() {
                prop_assert!(dom.contains(a));
            }
        }
    }
}

#[test]
fn hulls_grow() {
    let th = preset("IND_SQ").unwrap();
    let base = TermSet::new([Term::Zero]).unwrap();
    let mode = HullMode::for_theory(&th);
    let j0 = BigUint::from(0u8);
    let j = hcon::skolem::theory_threshold(&th);
    let mut prev = base.clone();
    for k in 1..=2 {
        let low = hull(&base, k, &j0, th.registry(), &mode);
        let high = hull(&base, k, &j, th.registry(), &mode);
        assert!(prev.is_subset(&high) && low.is_subset(&high));
        prev = high;
    }
}

#[test]
fn evaluation_codes_stay_logarithmic() {
    let dom = TermSet::new(small_terms()).unwrap();
    let set_bits = dom.set_code().log2();
    for p in enumerate_pre_evaluations(TermSet::new(small_terms()[..5].to_vec()).unwrap()).unwrap().take(200) {
        assert!(p.code().log2() <= 2.0 * p.domain().set_code().log2());
    }
    assert!(set_bits > 0.0);
}
