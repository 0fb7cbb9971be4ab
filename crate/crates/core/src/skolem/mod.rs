//! Skolem symbols, Skolemized theories, ground term sets and Skolem hulls.

mod hull;
mod instances;
mod presets;
mod registry;
mod termset;
mod theory;

use thiserror::Error;

use crate::formulas::SkolemId;

pub use hull::{admissible_symbols, hull, hull_level, hull_step, in_hull, step_size_bound, theory_threshold, HullMode};
pub use instances::{available_instances, instances_of, Instance};
pub use presets::{
    preset, preset_axioms, EX3, EX3_TARGET_NEGATION, IND_SQ, OMEGA0, PRESET_NAMES, T1_EXISTENTIAL, T1_UNIVERSAL,
};
pub use registry::{skolem_key, SkolemRegistry, SymbolEntry, SymbolKind};
pub use termset::{Provenance, TermSet};
pub use theory::{instance, skolemize, Axiom, Skolemized, Theory};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SkolemError {
    #[error("axiom is not closed: {0}")]
    NotClosed(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("unknown Skolem symbol {0}")]
    UnknownSymbol(SkolemId),
    #[error("{id} takes {expected} arguments, got {found}")]
    ArityMismatch { id: SkolemId, expected: usize, found: usize },
    #[error("term is not ground: {0}")]
    NonGround(String),
    #[error("substitution misses variable `{0}`")]
    MissingVariable(String),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::{parse_formula, parse_term, Formula, Term};
    use num_bigint::BigUint;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn c(k: u32) -> Term {
        Term::constant(SkolemId(k))
    }

    #[test]
    fn ind_sq_stages() {
        let mut reg = SkolemRegistry::new();
        let sk = skolemize(&f(IND_SQ), &mut reg);
        let rnnf = f("(forall v0 (!(v0 <= 0*0) | v0 != 0*0)) \
            | (exists v1 ((exists v2 (v2 <= v1*v1 & v2 = v1*v1)) \
                 & forall v3 (!(v3 <= S(v1)*S(v1)) | v3 != S(v1)*S(v1)))) \
            | forall v4 exists v5 (v5 <= v4*v4 & v5 = v4*v4)");
        assert_eq!(sk.rnnf, rnnf);
        let s_form = f("(forall v0 (!(v0 <= 0*0) | v0 != 0*0)) \
            | (($1($0) <= $0*$0 & $1($0) = $0*$0) \
                 & forall v3 (!(v3 <= S($0)*S($0)) | v3 != S($0)*S($0))) \
            | forall v4 ($1(v4) <= v4*v4 & $1(v4) = v4*v4)");
        assert_eq!(sk.s_form, s_form);
        let open = f("(!(v0 <= 0*0) | v0 != 0*0) \
            | (($1($0) <= $0*$0 & $1($0) = $0*$0) \
                 & (!(v3 <= S($0)*S($0)) | v3 != S($0)*S($0))) \
            | ($1(v4) <= v4*v4 & $1(v4) = v4*v4)");
        assert_eq!(sk.open, open);
        assert_eq!(sk.free_vars, ["v0", "v3", "v4"]);
        assert_eq!(reg.arity(SkolemId(0)), Some(0));
        assert_eq!(reg.arity(SkolemId(1)), Some(1));

        let tt = c(reg.parameter("t").0);
        let inst = instance(
            &sk.open,
            &[("v0".into(), Term::Zero), ("v3".into(), t("S($0)*S($0)")), ("v4".into(), tt.clone())],
        )
        .unwrap();
        let expected = f("(!(0 <= 0*0) | 0 != 0*0) \
            | (($1($0) <= $0*$0 & $1($0) = $0*$0) \
                 & (!(S($0)*S($0) <= S($0)*S($0)) | S($0)*S($0) != S($0)*S($0))) \
            | ($1(t) <= t*t & $1(t) = t*t)")
        .substitute_free(&|v| (v == "t").then(|| tt.clone()));
        assert_eq!(inst, expected);
    }

    #[test]
    fn lookup_accepts_source_syntax() {
        let sq = f("exists y <= x*x (y = x*x)");
        assert_eq!(preset("OMEGA0").unwrap().registry().lookup(&sq), Some(SkolemId(0)));
        assert_eq!(preset("IND_SQ").unwrap().registry().lookup(&sq), Some(SkolemId(1)));
        assert_eq!(preset("EX3").unwrap().registry().lookup(&sq), None);
    }

    #[test]
    fn ex3_skolemized() {
        let th = preset("EX3").unwrap();
        let opens: Vec<Formula> = th.axioms().iter().map(|a| a.open().clone()).collect();
        assert_eq!(
            opens,
            [
                f("S(v0) != 0"),
                f("v0 + S(v1) = S(v0 + v1)"),
                f("v0 = 0 | v0 = S($0(v0))"),
                f("!(v0 <= v1) | $1(v0, v1) + v0 = v1"),
            ]
        );
        assert_eq!(th.axioms()[3].free_vars(), ["v0", "v1"]);
        assert_eq!(th.registry().arity(SkolemId(1)), Some(2));
    }

    #[test]
    fn instance_errors() {
        let open = f("v0 + S(v1) = S(v0 + v1)");
        assert_eq!(instance(&open, &[("v0".into(), Term::Zero)]), Err(SkolemError::MissingVariable("v1".into())));
        assert!(matches!(
            instance(&open, &[("v0".into(), Term::Zero), ("v1".into(), t("x"))]),
            Err(SkolemError::NonGround(_))
        ));
        let closed = f("0 = 0");
        assert_eq!(instance(&closed, &[]).unwrap(), closed);
    }

    #[test]
    fn ex3_second_axiom_instance() {
        let th = preset("EX3").unwrap();
        let tt = c(4);
        let h = Term::skolem(SkolemId(1), vec![tt.clone(), Term::Zero]);
        let p = Term::skolem(SkolemId(0), vec![tt]);
        let inst = instance(th.axioms()[1].open(), &[("v0".into(), h.clone()), ("v1".into(), p.clone())]).unwrap();
        assert_eq!(inst, Formula::eq(Term::add(h.clone(), Term::succ(p.clone())), Term::succ(Term::add(h, p))));
    }

    fn ex2_lambda(th: &mut Theory) -> (TermSet, Term) {
        let tt = c(th.registry_mut().parameter("t").0);
        let l = ["0", "0*0", "$0", "$0*$0", "$1($0)", "S($0)*S($0)"].iter().map(|s| t(s)).chain([
            tt.clone(),
            Term::mul(tt.clone(), tt.clone()),
            Term::skolem(SkolemId(1), vec![tt.clone()]),
        ]);
        (TermSet::new(l).unwrap(), tt)
    }

    #[test]
    fn ex2_availability() {
        let mut th = preset("EX2").unwrap();
        let (lam, tt) = ex2_lambda(&mut th);
        assert_eq!(lam.len(), 9);
        let insts = available_instances(&th, &lam);
        assert!(insts.iter().any(|i| i.axiom == 0 && i.subst == [("v0".to_string(), Term::Zero)]));
        let want = vec![("v0".to_string(), Term::Zero), ("v3".to_string(), t("S($0)*S($0)")), ("v4".to_string(), tt)];
        assert!(insts.iter().any(|i| i.axiom == 1 && i.subst == want));
        for i in &insts {
            for a in i.formula.atom_terms() {
                assert!(lam.contains(a), "{a}");
            }
        }
    }

    fn gamma_t(tt: &Term) -> TermSet {
        let h = Term::skolem(SkolemId(1), vec![tt.clone(), Term::Zero]);
        let p = Term::skolem(SkolemId(0), vec![tt.clone()]);
        TermSet::new([
            Term::Zero,
            tt.clone(),
            h.clone(),
            Term::add(h.clone(), tt.clone()),
            p.clone(),
            Term::succ(p.clone()),
            Term::add(h.clone(), p.clone()),
            Term::add(h.clone(), Term::succ(p.clone())),
            Term::succ(Term::add(h, p)),
        ])
        .unwrap()
    }

    #[test]
    fn gamma_t_instances() {
        let mut th = preset("EX3").unwrap();
        let tt = c(th.registry_mut().parameter("t").0);
        let g = gamma_t(&tt);
        assert_eq!(g.len(), 9);
        let insts = available_instances(&th, &g);
        let h = Term::skolem(SkolemId(1), vec![tt.clone(), Term::Zero]);
        let p = Term::skolem(SkolemId(0), vec![tt.clone()]);
        let cited: [(usize, Vec<Term>); 4] = [
            (3, vec![tt.clone(), Term::Zero]),
            (2, vec![tt.clone()]),
            (1, vec![h.clone(), p.clone()]),
            (0, vec![Term::add(h, p)]),
        ];
        for (ax, vals) in cited {
            assert!(
                insts.iter().any(|i| i.axiom == ax && i.subst.iter().map(|(_, t)| t).eq(vals.iter())),
                "axiom {ax}"
            );
        }
    }

    #[test]
    fn availability_excludes_missing_terms() {
        let th = Theory::from_axioms("x", vec![f("forall x (x + x = x)")]).unwrap();
        let lam = TermSet::new([Term::Zero, t("S(0)")]).unwrap();
        assert!(available_instances(&th, &lam).is_empty());
        let lam = lam.extended([t("0+0")]).unwrap();
        assert_eq!(available_instances(&th, &lam).len(), 1);
    }

    #[test]
    fn hull_examples() {
        let reg = SkolemRegistry::new();
        let base = TermSet::new([Term::Zero]).unwrap();
        assert_eq!(hull(&base, 0, &BigUint::from(0u8), &reg, &HullMode::Full), base);
        let one = hull_step(&base, &BigUint::from(0u8), &reg, &HullMode::Full);
        assert_eq!(one, TermSet::new([t("0"), t("S(0)"), t("0+0"), t("0*0")]).unwrap());
        assert_eq!(one.provenance, Provenance::Hull { level: 1 });

        let th = preset("IND_SQ").unwrap();
        let j = theory_threshold(&th);
        let mode = HullMode::for_theory(&th);
        let two = hull(&base, 2, &j, th.registry(), &mode);
        let one_r = hull_step(&base, &j, th.registry(), &mode);
        // Independent enumeration of the second level.
        let mut want2: Vec<Term> = one_r.terms().to_vec();
        want2.push(Term::Zero);
        want2.push(c(0));
        for a in one_r.iter() {
            want2.push(Term::succ(a.clone()));
            want2.push(Term::skolem(SkolemId(1), vec![a.clone()]));
            for b in one_r.iter() {
                want2.push(Term::add(a.clone(), b.clone()));
                want2.push(Term::mul(a.clone(), b.clone()));
            }
        }
        assert_eq!(two, TermSet::new(want2).unwrap());
        assert!(one_r.contains(&c(0)) && one_r.contains(&t("$1(0)")));
        let syms = admissible_symbols(th.registry(), &j, &mode);
        for x in two.iter() {
            assert!(in_hull(&base, 2, &syms, x));
        }
        assert!(!in_hull(&base, 2, &syms, &t("S(S(S(0)))")));
        assert_eq!(hull_level(&base, 5, &syms, &t("S(S(S(0)))")), Some(3));
        // A threshold below every key admits no Skolem symbol.
        assert!(admissible_symbols(th.registry(), &BigUint::from(1u8), &mode).is_empty());
    }

    #[test]
    fn preset_counts() {
        let counts: Vec<usize> = PRESET_NAMES.iter().map(|n| preset(n).unwrap().axioms().len()).collect();
        assert_eq!(counts, [2, 4, 16, 1, 1, 5]);
        assert_eq!(preset("EX3").unwrap().axioms()[0].source, f("forall x (S(x) != 0)"));
        assert_eq!(preset("OMEGA0").unwrap().axioms()[0].source, f("forall x exists y <= x*x (y = x*x)"));
        assert_eq!(preset("nope").unwrap_err(), SkolemError::UnknownPreset("nope".into()));
    }

    #[test]
    fn stable_and_alpha_invariant() {
        let mut reg = SkolemRegistry::new();
        let a = skolemize(&f("forall x exists y (x <= y)"), &mut reg);
        let b = skolemize(&f("forall x exists y (x <= y)"), &mut reg);
        let c = skolemize(&f("forall u exists w (u <= w)"), &mut reg);
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(reg.len(), 1);
    }

    #[test]
    fn not_closed_rejected() {
        assert!(matches!(Theory::from_axioms("x", vec![f("x = 0")]), Err(SkolemError::NotClosed(_))));
        assert!(matches!(
            Theory::from_axioms("x", vec![f("forall x ($3(x) = 0)")]),
            Err(SkolemError::UnknownSymbol(_))
        ));
    }
}
