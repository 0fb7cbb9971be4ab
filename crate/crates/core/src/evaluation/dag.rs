use std::collections::HashMap;

use crate::formulas::{FunSym, Term};
use crate::skolem::TermSet;

/// The subterm DAG of a term set: every subterm of every member, children
/// before parents, shared.
#[derive(Debug, Clone)]
pub struct TermDag {
    pub nodes: Vec<Term>,
    pub head: Vec<FunSym>,
    pub children: Vec<Vec<usize>>,
    /// Node of each domain member, by domain index.
    pub member_node: Vec<usize>,
    /// Domain index of each node, if it is a member.
    pub node_member: Vec<Option<usize>>,
    index: HashMap<Term, usize>,
}

impl TermDag {
    pub fn new(domain: &TermSet) -> TermDag {
        let mut dag = TermDag {
            nodes: Vec::new(),
            head: Vec::new(),
            children: Vec::new(),
            member_node: Vec::with_capacity(domain.len()),
            node_member: Vec::new(),
            index: HashMap::new(),
        };
        for t in domain {
            let n = dag.intern(t);
            dag.member_node.push(n);
        }
        dag.node_member = vec![None; dag.nodes.len()];
        for (i, &n) in dag.member_node.iter().enumerate() {
            dag.node_member[n] = Some(i);
        }
        dag
    }

    fn intern(&mut self, t: &Term) -> usize {
        if let Some(&n) = self.index.get(t) {
            return n;
        }
        let kids: Vec<usize> = t.args().into_iter().map(|a| self.intern(a)).collect();
        let n = self.nodes.len();
        self.nodes.push(t.clone());
        self.head.push(t.head().expect("ground term"));
        self.children.push(kids);
        self.index.insert(t.clone(), n);
        n
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, t: &Term) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// Least congruence on the nodes containing the given pairs, as a
    /// representative per node.
    pub fn congruence_closure(&self, pairs: impl IntoIterator<Item = (usize, usize)>) -> Vec<usize> {
        let mut uf = UnionFind::new(self.len());
        for (a, b) in pairs {
            uf.union(a, b);
        }
        loop {
            let mut changed = false;
            let mut sig: HashMap<(FunSym, Vec<usize>), usize> = HashMap::new();
            for n in 0..self.len() {
                if self.children[n].is_empty() {
                    continue;
                }
                let key = (self.head[n], self.children[n].iter().map(|&c| uf.find(c)).collect());
                match sig.get(&key) {
                    Some(&m) => changed |= uf.union(m, n),
                    None => {
                        sig.insert(key, n);
                    }
                }
            }
            if !changed {
                break;
            }
        }
        (0..self.len()).map(|n| uf.find(n)).collect()
    }
}

/// Union-find with path halving.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merge; the smaller root survives. True when the classes differed.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi] = lo;
        true
    }
}
