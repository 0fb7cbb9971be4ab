//! Searching for T-evaluations, refuting theories over growing hulls, and
//! reading finite Herbrand models off witnesses.

mod engine;
mod model;
mod problem;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::evaluation::{Evaluation, PreEvaluation, Sep, SequenceCursor};
use crate::formulas::{Formula, Term};
use crate::skolem::{
    admissible_symbols, available_instances, hull_step, step_size_bound, theory_threshold, HullMode, Provenance,
    SkolemError, TermSet, Theory,
};

use engine::{ranks_of, Branch, Engine};
pub use model::{extract_model, FiniteHerbrandModel};
pub use problem::{cnf, constraint_domain, Clause, Constraint, Lit, Origin, Problem, Rel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("empty term set")]
    EmptyDomain,
    #[error("term not in domain: {0}")]
    NotInDomain(String),
    #[error("formula is not open: {0}")]
    NotOpen(String),
    #[error("goal formula must have at most one free variable, found {0}")]
    GoalVariables(usize),
    #[error("node budget exhausted")]
    Budget,
    #[error(transparent)]
    Skolem(#[from] SkolemError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Every pre-evaluation in canonical order through the compiled checker.
    Brute,
    /// Backtracking with congruence and clause propagation.
    Propagate,
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub strategy: Strategy,
    /// Node limit per root branch (per sequence count for brute force).
    pub node_budget: Option<u64>,
    /// Worker threads for root branches.
    pub jobs: usize,
    /// Shrink the constraints of an inconsistency certificate.
    pub minimize_core: bool,
}

impl Default for SearchOptions {
    fn default() -> SearchOptions {
        SearchOptions { strategy: Strategy::Propagate, node_budget: None, jobs: 1, minimize_core: true }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    /// Root branches examined (brute force counts one).
    pub branches: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exhaustive,
    Propagation,
}

/// Evidence that no evaluation of the domain satisfies the constraints.
#[derive(Debug, Clone)]
pub struct InconsistencyCertificate {
    pub domain: TermSet,
    pub constraints: Vec<Constraint>,
    pub method: Method,
    /// Indices into `constraints` of a subset that is already unsatisfiable.
    pub conflict_core: Vec<usize>,
    /// Terms of the core's atoms.
    pub core_domain: TermSet,
}

impl InconsistencyCertificate {
    pub fn core(&self) -> Vec<&Constraint> {
        self.conflict_core.iter().map(|&k| &self.constraints[k]).collect()
    }

    /// Recheck the core over every weak order of its domain. `None` when the
    /// core domain has more than `max_terms` terms.
    ///
    /// An evaluation of the full domain satisfying the core would restrict to
    /// one of the core domain, so a negative answer here covers the whole.
    pub fn verify(&self, max_terms: usize) -> Option<bool> {
        if self.core_domain.len() > max_terms {
            return None;
        }
        let core = self.core().into_iter().cloned().collect();
        let p = Problem::new(self.core_domain.clone(), core).ok()?;
        Some(exhaustive_witness(&p).is_none())
    }
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Witness { evaluation: Evaluation, stats: SearchStats },
    Inconsistent { certificate: InconsistencyCertificate, stats: SearchStats },
    BudgetExhausted { stats: SearchStats },
}

impl SearchOutcome {
    pub fn stats(&self) -> SearchStats {
        match self {
            SearchOutcome::Witness { stats, .. }
            | SearchOutcome::Inconsistent { stats, .. }
            | SearchOutcome::BudgetExhausted { stats } => *stats,
        }
    }

    pub fn witness(&self) -> Option<&Evaluation> {
        match self {
            SearchOutcome::Witness { evaluation, .. } => Some(evaluation),
            _ => None,
        }
    }

    pub fn is_inconsistent(&self) -> bool {
        matches!(self, SearchOutcome::Inconsistent { .. })
    }

    pub fn is_exhausted(&self) -> bool {
        matches!(self, SearchOutcome::BudgetExhausted { .. })
    }
}

/// Available instances of the theory over the domain, as constraints.
pub fn theory_constraints(theory: &Theory, domain: &TermSet) -> Vec<Constraint> {
    available_instances(theory, domain).into_iter().map(Constraint::from).collect()
}

enum Decision {
    Witness(Vec<usize>),
    Exhausted,
    Inconsistent,
}

fn is_block_sorted(order: &[usize], seps: &[Sep]) -> bool {
    order.windows(2).zip(seps).all(|(w, s)| *s == Sep::Lt || w[0] < w[1])
}

fn brute(p: &Problem, budget: Option<u64>) -> (Decision, SearchStats) {
    let n = p.len();
    let mut cursor = SequenceCursor::new(n, false);
    let mut nodes = 0u64;
    loop {
        nodes += 1;
        if budget.is_some_and(|b| nodes > b) {
            return (Decision::Exhausted, SearchStats { nodes: nodes - 1, branches: 1 });
        }
        // A sequence that is not block-sorted has the relations of its
        // block-sorted form, which comes earlier and has been rejected.
        if is_block_sorted(cursor.order(), cursor.seps()) {
            let ranks = ranks_of(cursor.order(), cursor.seps(), n);
            if p.check_ranks(&ranks) {
                return (Decision::Witness(ranks), SearchStats { nodes, branches: 1 });
            }
        }
        if !cursor.advance() {
            return (Decision::Inconsistent, SearchStats { nodes, branches: 1 });
        }
    }
}

/// First witness over the weak orders of the domain, by the compiled
/// checker alone.
pub(crate) fn exhaustive_witness(p: &Problem) -> Option<Vec<usize>> {
    let n = p.len();
    let mut cursor = SequenceCursor::new(n, true);
    loop {
        let ranks = ranks_of(cursor.order(), cursor.seps(), n);
        if p.check_ranks(&ranks) {
            return Some(ranks);
        }
        if !cursor.advance() {
            return None;
        }
    }
}

fn propagate(p: &Problem, budget: Option<u64>, jobs: usize) -> (Decision, SearchStats) {
    let engine = Engine::new(p);
    let n = p.len();
    if p.has_empty_clause() || !engine.consistent(&[], &[]) {
        return (Decision::Inconsistent, SearchStats { nodes: 1, branches: 0 });
    }
    let results: Vec<Mutex<Option<(Branch, u64)>>> = (0..n).map(|_| Mutex::new(None)).collect();
    if jobs <= 1 {
        for (t0, slot) in results.iter().enumerate() {
            let r = engine.branch(t0, budget);
            let stop = r.0 != Branch::Inconsistent;
            *slot.lock().unwrap() = Some(r);
            if stop {
                break;
            }
        }
    } else {
        let next = AtomicUsize::new(0);
        let decided = AtomicUsize::new(usize::MAX);
        std::thread::scope(|s| {
            for _ in 0..jobs.min(n) {
                s.spawn(|| loop {
                    let t0 = next.fetch_add(1, Ordering::SeqCst);
                    if t0 >= n || t0 > decided.load(Ordering::SeqCst) {
                        break;
                    }
                    let r = engine.branch(t0, budget);
                    if r.0 != Branch::Inconsistent {
                        decided.fetch_min(t0, Ordering::SeqCst);
                    }
                    *results[t0].lock().unwrap() = Some(r);
                });
            }
        });
    }
    let mut stats = SearchStats { nodes: 1, branches: 0 };
    for slot in results {
        let (b, nodes) = slot.into_inner().unwrap().expect("branches before the deciding one all ran");
        stats.nodes += nodes;
        stats.branches += 1;
        match b {
            Branch::Witness(r) => return (Decision::Witness(r), stats),
            Branch::Exhausted => return (Decision::Exhausted, stats),
            Branch::Inconsistent => {}
        }
    }
    (Decision::Inconsistent, stats)
}

/// Whether the problem is unsatisfiable, if that is decided in budget.
fn unsat(p: &Problem, budget: Option<u64>) -> Option<bool> {
    match propagate(p, budget, 1).0 {
        Decision::Inconsistent => Some(true),
        Decision::Witness(_) => Some(false),
        Decision::Exhausted => None,
    }
}

/// Shrink an unsatisfiable constraint set by deleting chunks, then single
/// constraints, whenever the rest stays unsatisfiable.
fn minimize_core(p: &Problem, budget: Option<u64>) -> Vec<usize> {
    let mut keep: Vec<usize> = (0..p.constraints.len()).filter(|k| p.clause_origin.contains(k)).collect();
    let mut chunk = (keep.len() / 2).max(1);
    loop {
        let mut i = 0;
        while i < keep.len() {
            let trial: Vec<usize> =
                keep[..i].iter().chain(keep[(i + chunk).min(keep.len())..].iter()).copied().collect();
            if unsat(&p.restricted(&trial), budget) == Some(true) {
                keep = trial;
            } else {
                i += chunk;
            }
        }
        if chunk == 1 {
            return keep;
        }
        chunk = (chunk / 2).max(1);
    }
}

fn witness(p: &Problem, ranks: &[usize]) -> Evaluation {
    let pre = PreEvaluation::from_ranks(p.domain.clone(), ranks).expect("ranks cover the domain");
    let e = Evaluation::new(pre).expect("witnesses are congruent");
    assert!(p.constraints.iter().all(|c| e.satisfies(&c.formula).unwrap_or(false)), "witness falsifies a constraint");
    e
}

/// Decide a compiled problem.
pub fn solve(p: &Problem, opts: &SearchOptions) -> SearchOutcome {
    let (decision, stats) = match opts.strategy {
        Strategy::Brute => brute(p, opts.node_budget),
        Strategy::Propagate => propagate(p, opts.node_budget, opts.jobs),
    };
    match decision {
        Decision::Witness(r) => SearchOutcome::Witness { evaluation: witness(p, &r), stats },
        Decision::Exhausted => SearchOutcome::BudgetExhausted { stats },
        Decision::Inconsistent => {
            let conflict_core = if opts.minimize_core {
                minimize_core(p, Some(opts.node_budget.unwrap_or(100_000)))
            } else {
                (0..p.constraints.len()).collect()
            };
            let core: Vec<Constraint> = conflict_core.iter().map(|&k| p.constraints[k].clone()).collect();
            let certificate = InconsistencyCertificate {
                domain: (*p.domain).clone(),
                constraints: p.constraints.clone(),
                method: match opts.strategy {
                    Strategy::Brute => Method::Exhaustive,
                    Strategy::Propagate => Method::Propagation,
                },
                core_domain: constraint_domain(&p.domain, &core),
                conflict_core,
            };
            SearchOutcome::Inconsistent { certificate, stats }
        }
    }
}

/// Look for a T-evaluation on the domain.
pub fn find_evaluation(theory: &Theory, domain: &TermSet, opts: &SearchOptions) -> Result<SearchOutcome, SearchError> {
    find_evaluation_with(theory, domain, Vec::new(), opts)
}

/// Look for a T-evaluation on the domain that also satisfies some extra
/// ground constraints.
pub fn find_evaluation_with(
    theory: &Theory,
    domain: &TermSet,
    extra: Vec<Formula>,
    opts: &SearchOptions,
) -> Result<SearchOutcome, SearchError> {
    let mut constraints = theory_constraints(theory, domain);
    constraints.extend(extra.into_iter().map(Constraint::extra));
    let p = Problem::new(Arc::new(domain.clone()), constraints)?;
    Ok(solve(&p, opts))
}

/// Every witness of the problem, one per weak order, in canonical order.
pub fn find_all(p: &Problem, opts: &SearchOptions) -> Result<Vec<Evaluation>, SearchError> {
    let n = p.len();
    let mut out = Vec::new();
    match opts.strategy {
        Strategy::Brute => {
            let mut cursor = SequenceCursor::new(n, true);
            let mut nodes = 0u64;
            loop {
                nodes += 1;
                if opts.node_budget.is_some_and(|b| nodes > b) {
                    return Err(SearchError::Budget);
                }
                let ranks = ranks_of(cursor.order(), cursor.seps(), n);
                if p.check_ranks(&ranks) {
                    out.push(witness(p, &ranks));
                }
                if !cursor.advance() {
                    break;
                }
            }
        }
        Strategy::Propagate => {
            let engine = Engine::new(p);
            if p.has_empty_clause() || !engine.consistent(&[], &[]) {
                return Ok(out);
            }
            for t0 in 0..n {
                let mut used = vec![false; n];
                used[t0] = true;
                let mut nodes = 0;
                let mut ranks_found = Vec::new();
                engine
                    .dfs(&mut vec![t0], &mut Vec::new(), &mut used, &mut nodes, opts.node_budget, &mut |r| {
                        ranks_found.push(r);
                        false
                    })
                    .map_err(|()| SearchError::Budget)?;
                out.extend(ranks_found.iter().map(|r| witness(p, r)));
            }
        }
    }
    Ok(out)
}

/// Whether every T-evaluation on the domain satisfies `psi(t)`: the search
/// for one satisfying the available instances and the negation of `psi(t)`.
/// An inconsistent outcome means the goal holds.
pub fn check_universal(
    theory: &Theory,
    psi: &Formula,
    t: &Term,
    domain: &TermSet,
    opts: &SearchOptions,
) -> Result<SearchOutcome, SearchError> {
    if !psi.is_open() {
        return Err(SearchError::NotOpen(psi.to_string()));
    }
    let vars = psi.free_vars();
    if vars.len() > 1 {
        return Err(SearchError::GoalVariables(vars.len()));
    }
    if !domain.contains(t) {
        return Err(SearchError::NotInDomain(t.to_string()));
    }
    let goal = psi.substitute_free(&|_| Some(t.clone()));
    find_evaluation_with(theory, domain, vec![Formula::not(goal)], opts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// Refuted.
    Refuted,
    /// Every level up to the maximum has a witness.
    MaxLevel,
    /// The next level would exceed the term limit.
    TermLimit,
    /// The node budget ran out on some level.
    NodeBudget,
}

#[derive(Debug, Clone)]
pub struct RefuteReport {
    pub outcome: SearchOutcome,
    /// Last level searched.
    pub level: usize,
    pub reason: StopReason,
    /// Size of each level searched.
    pub sizes: Vec<usize>,
    pub last_witness: Option<Evaluation>,
    pub domain: TermSet,
}

/// Search the theory-restricted hulls of `base` level by level for one with
/// no T-evaluation.
pub fn herbrand_refute(
    theory: &Theory,
    base: &TermSet,
    max_level: usize,
    max_terms: usize,
    opts: &SearchOptions,
) -> Result<RefuteReport, SearchError> {
    let j = theory_threshold(theory);
    let mode = HullMode::for_theory(theory);
    let symbols = admissible_symbols(theory.registry(), &j, &mode);
    let mut lam = base.clone().with_provenance(Provenance::Hull { level: 0 });
    let mut sizes = Vec::new();
    let mut last_witness = None;
    let mut total = SearchStats::default();
    for level in 0..=max_level {
        if level > 0 {
            let bound = step_size_bound(lam.len(), &symbols).saturating_add(lam.len() as u128);
            if bound > max_terms as u128 {
                return Ok(RefuteReport {
                    outcome: SearchOutcome::BudgetExhausted { stats: total },
                    level: level - 1,
                    reason: StopReason::TermLimit,
                    sizes,
                    last_witness,
                    domain: lam,
                });
            }
            lam = hull_step(&lam, &j, theory.registry(), &mode);
        }
        sizes.push(lam.len());
        let outcome = find_evaluation(theory, &lam, opts)?;
        let s = outcome.stats();
        total.nodes += s.nodes;
        total.branches += s.branches;
        match outcome {
            SearchOutcome::Witness { evaluation, .. } => last_witness = Some(evaluation),
            SearchOutcome::Inconsistent { certificate, stats } => {
                return Ok(RefuteReport {
                    outcome: SearchOutcome::Inconsistent { certificate, stats },
                    level,
                    reason: StopReason::Refuted,
                    sizes,
                    last_witness,
                    domain: lam,
                })
            }
            SearchOutcome::BudgetExhausted { .. } => {
                return Ok(RefuteReport {
                    outcome: SearchOutcome::BudgetExhausted { stats: total },
                    level,
                    reason: StopReason::NodeBudget,
                    sizes,
                    last_witness,
                    domain: lam,
                })
            }
        }
    }
    Ok(RefuteReport {
        outcome: SearchOutcome::BudgetExhausted { stats: total },
        level: max_level,
        reason: StopReason::MaxLevel,
        sizes,
        last_witness,
        domain: lam,
    })
}
