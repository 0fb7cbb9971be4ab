mod common;

use common::{ex2_lambda, f, gamma, gamma_terms, t};
use hcon::evaluation::is_t_evaluation;
use hcon::formulas::{SkolemId, Term};
use hcon::search::{
    check_universal, extract_model, find_all, find_evaluation, theory_constraints, Problem, SearchOptions,
    SearchOutcome, Strategy,
};
use hcon::skolem::{admissible_symbols, hull_level, preset, theory_threshold, HullMode, TermSet};

fn brute() -> SearchOptions {
    SearchOptions { strategy: Strategy::Brute, ..Default::default() }
}

#[test]
fn squaring_example_every_witness_squares() {
    let mut th = preset("EX2").unwrap();
    let (lam, tt) = ex2_lambda(&mut th);
    let q = Term::skolem(SkolemId(1), vec![tt.clone()]);
    let tsq = Term::mul(tt.clone(), tt.clone());
    let p = Problem::new(lam.clone(), theory_constraints(&th, &lam)).unwrap();
    let all = find_all(&p, &SearchOptions::default()).unwrap();
    assert!(!all.is_empty());
    for e in &all {
        assert!(is_t_evaluation(e, &th));
        assert!(e.eq_terms(&q, &tsq).unwrap());
        assert!(e.eq_terms(&t("0*0"), &t("0")).unwrap());
    }
    let all_brute = find_all(&p, &brute()).unwrap();
    assert_eq!(all, all_brute);
}

#[test]
fn squaring_example_model_agrees() {
    let mut th = preset("EX2").unwrap();
    let (lam, _) = ex2_lambda(&mut th);
    let out = find_evaluation(&th, &lam, &SearchOptions::default()).unwrap();
    let e = out.witness().unwrap();
    let m = extract_model(e);
    for c in theory_constraints(&th, &lam) {
        assert_eq!(m.satisfies(&c.formula), Some(e.satisfies(&c.formula).unwrap()));
        assert_eq!(m.satisfies(&c.formula), Some(true));
    }
}

#[test]
fn successor_example_proves_goal() {
    let mut th = preset("EX3").unwrap();
    let tt = Term::constant(th.registry_mut().parameter("t"));
    let g = gamma(&tt);
    let psi = f("x <= 0 -> x = 0");
    for o in [SearchOptions::default(), brute()] {
        let out = check_universal(&th, &psi, &tt, &g, &o).unwrap();
        let SearchOutcome::Inconsistent { certificate, .. } = out else { panic!("{out:?}") };
        assert_eq!(certificate.verify(9), Some(true));
    }
}

#[test]
fn successor_example_needs_last_term() {
    let mut th = preset("EX3").unwrap();
    let tt = Term::constant(th.registry_mut().parameter("t"));
    let last = gamma_terms(&tt).pop().unwrap();
    let g = gamma(&tt).without(&last);
    let psi = f("x <= 0 -> x = 0");
    for o in [SearchOptions::default(), brute()] {
        let out = check_universal(&th, &psi, &tt, &g, &o).unwrap();
        let e = out.witness().expect("countermodel");
        assert!(is_t_evaluation(e, &th));
        assert!(e.satisfies(&f("!(x <= 0 -> x = 0)").substitute_free(&|_| Some(tt.clone()))).unwrap());
    }
}

#[test]
fn successor_refutation_with_skolem_constant() {
    let th = preset("EX3_PLUS").unwrap();
    let c = Term::constant(SkolemId(2));
    let g = gamma(&c);
    let out = find_evaluation(&th, &g, &SearchOptions::default()).unwrap();
    assert!(out.is_inconsistent());
    let base = TermSet::new([c, Term::Zero]).unwrap();
    let j = theory_threshold(&th);
    let syms = admissible_symbols(th.registry(), &j, &HullMode::for_theory(&th));
    let levels: Vec<usize> = g.iter().map(|x| hull_level(&base, 5, &syms, x).unwrap()).collect();
    assert_eq!(levels.iter().max(), Some(&3));
}

#[test]
fn hull_search_on_squaring_theory() {
    let th = preset("EX2").unwrap();
    let base = TermSet::new([Term::Zero]).unwrap();
    let r = hcon::search::herbrand_refute(&th, &base, 2, 5_000, &SearchOptions::default()).unwrap();
    assert!(r.outcome.is_exhausted());
    assert_eq!(r.reason, hcon::search::StopReason::MaxLevel);
    let w = r.last_witness.unwrap();
    assert!(is_t_evaluation(&w, &th));
}
