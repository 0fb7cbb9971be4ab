//! Backtracking over block-sorted sequences with congruence and clause
//! propagation at every node.

use std::collections::{HashMap, HashSet};

use crate::evaluation::{Sep, UnionFind};
use crate::formulas::FunSym;

use super::problem::{Lit, Problem, Rel};

struct Bits {
    words: usize,
    data: Vec<u64>,
}

impl Bits {
    fn new(rows: usize, cols: usize) -> Bits {
        let words = cols.div_ceil(64).max(1);
        Bits { words, data: vec![0; rows * words] }
    }

    fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    fn set(&mut self, r: usize, c: usize) {
        self.data[r * self.words + c / 64] |= 1 << (c % 64);
    }

    /// Row `r` |= row `s`.
    fn or_row(&mut self, r: usize, s: usize) {
        if r == s {
            return;
        }
        let w = self.words;
        for k in 0..w {
            let v = self.data[s * w + k];
            self.data[r * w + k] |= v;
        }
    }

    fn or_from(&mut self, r: usize, other: &Bits, s: usize) {
        let w = self.words;
        for k in 0..w {
            self.data[r * w + k] |= other.data[s * w + k];
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Val {
    True,
    False,
    Unknown,
}

/// Outcome of one root branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Branch {
    /// Ranks of the first witness in the branch.
    Witness(Vec<usize>),
    Exhausted,
    Inconsistent,
}

pub(crate) struct Engine<'a> {
    p: &'a Problem,
    n: usize,
    inner: Vec<usize>,
}

impl<'a> Engine<'a> {
    pub fn new(p: &'a Problem) -> Engine<'a> {
        let inner = (0..p.dag.len()).filter(|&v| !p.dag.children[v].is_empty()).collect();
        Engine { p, n: p.len(), inner }
    }

    fn close_congruence(&self, uf: &mut UnionFind) {
        let dag = &self.p.dag;
        loop {
            let mut changed = false;
            let mut sig: HashMap<(FunSym, Vec<usize>), usize> = HashMap::with_capacity(self.inner.len());
            for &v in &self.inner {
                let key = (dag.head[v], dag.children[v].iter().map(|&c| uf.find(c)).collect());
                match sig.get(&key) {
                    Some(&w) => changed |= uf.union(w, v),
                    None => {
                        sig.insert(key, v);
                    }
                }
            }
            if !changed {
                return;
            }
        }
    }

    /// False when no block-sorted completion of the prefix can be a
    /// witness. Sound but incomplete, except at full length where it is
    /// exact.
    pub fn consistent(&self, order: &[usize], seps: &[Sep]) -> bool {
        let n = self.n;
        let node = &self.p.dag.member_node;
        let mut uf = UnionFind::new(self.p.dag.len());
        let mut weak: Vec<(usize, usize)> = Vec::new();
        let mut strict: Vec<(usize, usize)> = Vec::new();
        let mut diseq: Vec<(usize, usize)> = Vec::new();

        if let Some(&last) = order.last() {
            let mut placed = vec![false; n];
            let mut rep = order[0];
            placed[rep] = true;
            for (k, &t) in order.iter().enumerate().skip(1) {
                placed[t] = true;
                match seps[k - 1] {
                    Sep::Eq => {
                        uf.union(node[rep], node[t]);
                    }
                    Sep::Lt => {
                        strict.push((rep, t));
                        rep = t;
                    }
                }
            }
            for u in (0..n).filter(|&u| !placed[u]) {
                if u < last {
                    strict.push((rep, u));
                } else {
                    weak.push((rep, u));
                }
            }
        }

        loop {
            self.close_congruence(&mut uf);
            // Member classes.
            let mut class_of_root: HashMap<usize, usize> = HashMap::new();
            let mut class = vec![0; n];
            let mut class_rep: Vec<usize> = Vec::new();
            for i in 0..n {
                let r = uf.find(node[i]);
                let k = class_of_root.len();
                let c = *class_of_root.entry(r).or_insert(k);
                if c == class_rep.len() {
                    class_rep.push(i);
                }
                class[i] = c;
            }
            let k = class_rep.len();
            let mut reach = Bits::new(k, k);
            for c in 0..k {
                reach.set(c, c);
            }
            for &(a, b) in weak.iter().chain(&strict) {
                reach.set(class[a], class[b]);
            }
            for m in 0..k {
                for a in 0..k {
                    if reach.get(a, m) {
                        reach.or_row(a, m);
                    }
                }
            }
            let mut sreach = Bits::new(k, k);
            for a in 0..k {
                for &(x, y) in &strict {
                    if reach.get(a, class[x]) {
                        sreach.or_from(a, &reach, class[y]);
                    }
                }
                if sreach.get(a, a) {
                    return false;
                }
            }
            let mut merged = false;
            for a in 0..k {
                for b in a + 1..k {
                    if reach.get(a, b) && reach.get(b, a) {
                        merged |= uf.union(node[class_rep[a]], node[class_rep[b]]);
                    }
                }
            }
            if merged {
                continue;
            }
            let neq: HashSet<(usize, usize)> = diseq
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = (class[a], class[b]);
                    (x.min(y), x.max(y))
                })
                .collect();
            if neq.iter().any(|&(x, y)| x == y) {
                return false;
            }

            let val = |l: &Lit| -> Val {
                let (x, y) = (class[l.a], class[l.b]);
                let v = match l.rel {
                    Rel::Eq => {
                        if x == y {
                            Val::True
                        } else if sreach.get(x, y) || sreach.get(y, x) || neq.contains(&(x.min(y), x.max(y))) {
                            Val::False
                        } else {
                            Val::Unknown
                        }
                    }
                    Rel::Le => {
                        if reach.get(x, y) {
                            Val::True
                        } else if sreach.get(y, x) {
                            Val::False
                        } else {
                            Val::Unknown
                        }
                    }
                };
                match (v, l.pos) {
                    (Val::True, false) => Val::False,
                    (Val::False, false) => Val::True,
                    (v, _) => v,
                }
            };

            let mut changed = false;
            for clause in &self.p.clauses {
                let mut unknown: Option<Lit> = None;
                let mut several = false;
                let mut sat = false;
                for l in clause {
                    match val(l) {
                        Val::True => {
                            sat = true;
                            break;
                        }
                        Val::Unknown => {
                            if unknown.is_some() {
                                several = true;
                            }
                            unknown = Some(*l);
                        }
                        Val::False => {}
                    }
                }
                if sat || several {
                    continue;
                }
                let Some(l) = unknown else {
                    return false;
                };
                changed = true;
                match (l.rel, l.pos) {
                    (Rel::Eq, true) => {
                        uf.union(node[l.a], node[l.b]);
                    }
                    (Rel::Eq, false) => diseq.push((l.a, l.b)),
                    (Rel::Le, true) => weak.push((l.a, l.b)),
                    (Rel::Le, false) => strict.push((l.b, l.a)),
                }
            }
            if !changed {
                return true;
            }
        }
    }

    /// Depth-first search below a prefix. `visit` receives the ranks of each
    /// witness and returns true to stop. Returns `Err(())` when the node
    /// budget runs out.
    pub fn dfs(
        &self,
        order: &mut Vec<usize>,
        seps: &mut Vec<Sep>,
        used: &mut [bool],
        nodes: &mut u64,
        budget: Option<u64>,
        visit: &mut dyn FnMut(Vec<usize>) -> bool,
    ) -> Result<bool, ()> {
        *nodes += 1;
        if budget.is_some_and(|b| *nodes > b) {
            return Err(());
        }
        if !self.consistent(order, seps) {
            return Ok(false);
        }
        if order.len() == self.n {
            return Ok(visit(ranks_of(order, seps, self.n)));
        }
        let last = *order.last().expect("dfs starts below a root");
        for (sep, from) in [(Sep::Eq, last + 1), (Sep::Lt, 0)] {
            for t in from..self.n {
                if used[t] {
                    continue;
                }
                used[t] = true;
                order.push(t);
                seps.push(sep);
                let r = self.dfs(order, seps, used, nodes, budget, visit);
                seps.pop();
                order.pop();
                used[t] = false;
                if r? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// The root branch starting with member `t0`.
    pub fn branch(&self, t0: usize, budget: Option<u64>) -> (Branch, u64) {
        let mut nodes = 0;
        let mut found = None;
        let mut used = vec![false; self.n];
        used[t0] = true;
        let r = self.dfs(&mut vec![t0], &mut Vec::new(), &mut used, &mut nodes, budget, &mut |ranks| {
            found = Some(ranks);
            true
        });
        let b = match (r, found) {
            (_, Some(ranks)) => Branch::Witness(ranks),
            (Err(()), None) => Branch::Exhausted,
            (Ok(_), None) => Branch::Inconsistent,
        };
        (b, nodes)
    }
}

pub(crate) fn ranks_of(order: &[usize], seps: &[Sep], n: usize) -> Vec<usize> {
    let mut ranks = vec![0; n];
    let mut b = 0;
    for (k, &t) in order.iter().enumerate() {
        if k > 0 && seps[k - 1] == Sep::Lt {
            b += 1;
        }
        ranks[t] = b;
    }
    ranks
}
