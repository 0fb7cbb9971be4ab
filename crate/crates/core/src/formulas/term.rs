use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

/// Index of a symbol in a [`crate::skolem::SkolemRegistry`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SkolemId(pub u32);

impl fmt::Display for SkolemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "${}", self.0)
    }
}

/// A term over `0, S, +, *` plus Skolem function symbols.
///
/// Children sit behind `Arc` so cloning a term is cheap; terms are shared
/// freely between term sets, instances and evaluations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Zero,
    Succ(Arc<Term>),
    Add(Arc<Term>, Arc<Term>),
    Mul(Arc<Term>, Arc<Term>),
    Skolem(SkolemId, Arc<[Term]>),
}

/// Function symbol at the head of a non-variable term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FunSym {
    Zero,
    Succ,
    Add,
    Mul,
    Skolem(SkolemId),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn succ(t: Term) -> Term {
        Term::Succ(Arc::new(t))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(Arc::new(a), Arc::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Arc::new(a), Arc::new(b))
    }

    pub fn skolem(id: SkolemId, args: Vec<Term>) -> Term {
        Term::Skolem(id, args.into())
    }

    pub fn constant(id: SkolemId) -> Term {
        Term::Skolem(id, Vec::new().into())
    }

    /// The numeral: `n` applications of `S` to `0`.
    pub fn numeral(n: usize) -> Term {
        (0..n).fold(Term::Zero, |t, _| Term::succ(t))
    }

    /// If the term is a numeral, its value.
    pub fn as_numeral(&self) -> Option<usize> {
        let mut n = 0;
        let mut t = self;
        loop {
            match t {
                Term::Zero => return Some(n),
                Term::Succ(a) => {
                    n += 1;
                    t = a;
                }
                _ => return None,
            }
        }
    }

    pub fn head(&self) -> Option<FunSym> {
        match self {
            Term::Var(_) => None,
            Term::Zero => Some(FunSym::Zero),
            Term::Succ(_) => Some(FunSym::Succ),
            Term::Add(..) => Some(FunSym::Add),
            Term::Mul(..) => Some(FunSym::Mul),
            Term::Skolem(id, _) => Some(FunSym::Skolem(*id)),
        }
    }

    /// Immediate subterms, left to right.
    pub fn args(&self) -> Vec<&Term> {
        match self {
            Term::Var(_) | Term::Zero => vec![],
            Term::Succ(a) => vec![a],
            Term::Add(a, b) | Term::Mul(a, b) => vec![a, b],
            Term::Skolem(_, args) => args.iter().collect(),
        }
    }

    /// Rebuild a term from a head symbol and arguments.
    ///
    /// Panics if the argument count does not fit the symbol.
    pub fn apply(f: FunSym, mut args: Vec<Term>) -> Term {
        match f {
            FunSym::Zero => {
                assert!(args.is_empty());
                Term::Zero
            }
            FunSym::Succ => {
                assert_eq!(args.len(), 1);
                Term::succ(args.pop().unwrap())
            }
            FunSym::Add | FunSym::Mul => {
                assert_eq!(args.len(), 2);
                let b = args.pop().unwrap();
                let a = args.pop().unwrap();
                if f == FunSym::Add {
                    Term::add(a, b)
                } else {
                    Term::mul(a, b)
                }
            }
            FunSym::Skolem(id) => Term::skolem(id, args),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Zero => true,
            Term::Succ(a) => a.is_ground(),
            Term::Add(a, b) | Term::Mul(a, b) => a.is_ground() && b.is_ground(),
            Term::Skolem(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.args().iter().map(|a| a.size()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.args().iter().map(|a| a.depth()).max().unwrap_or(0)
    }

    /// Variables in order of first occurrence.
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            _ => {
                for a in self.args() {
                    a.collect_vars(out);
                }
            }
        }
    }

    pub fn contains_var(&self, v: &str) -> bool {
        match self {
            Term::Var(w) => w == v,
            _ => self.args().iter().any(|a| a.contains_var(v)),
        }
    }

    /// Every subterm (including the term itself), children before parents,
    /// without duplicates.
    pub fn subterms(&self) -> Vec<Term> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        self.collect_subterms(&mut seen, &mut out);
        out
    }

    pub(crate) fn collect_subterms(&self, seen: &mut HashSet<Term>, out: &mut Vec<Term>) {
        if seen.contains(self) {
            return;
        }
        for a in self.args() {
            a.collect_subterms(seen, out);
        }
        seen.insert(self.clone());
        out.push(self.clone());
    }

    /// Skolem symbols used, with the arity they are applied at.
    pub fn skolem_symbols(&self, out: &mut BTreeMap<SkolemId, usize>) {
        if let Term::Skolem(id, args) = self {
            out.insert(*id, args.len());
        }
        for a in self.args() {
            a.skolem_symbols(out);
        }
    }

    /// Simultaneous substitution of variables.
    pub fn substitute(&self, subst: &dyn Fn(&str) -> Option<Term>) -> Term {
        match self {
            Term::Var(v) => subst(v).unwrap_or_else(|| self.clone()),
            Term::Zero => Term::Zero,
            Term::Succ(a) => Term::succ(a.substitute(subst)),
            Term::Add(a, b) => Term::add(a.substitute(subst), b.substitute(subst)),
            Term::Mul(a, b) => Term::mul(a.substitute(subst), b.substitute(subst)),
            Term::Skolem(id, args) => Term::skolem(*id, args.iter().map(|a| a.substitute(subst)).collect()),
        }
    }

    /// Replace every occurrence of `from` by `to`.
    pub fn replace(&self, from: &Term, to: &Term) -> Term {
        if self == from {
            return to.clone();
        }
        match self {
            Term::Var(_) | Term::Zero => self.clone(),
            _ => {
                let args = self.args().into_iter().map(|a| a.replace(from, to)).collect();
                Term::apply(self.head().unwrap(), args)
            }
        }
    }

    /// Rename variables via `f`.
    pub fn rename(&self, f: &dyn Fn(&str) -> String) -> Term {
        self.substitute(&|v| Some(Term::Var(f(v))))
    }
}

impl From<usize> for Term {
    fn from(n: usize) -> Term {
        Term::numeral(n)
    }
}
