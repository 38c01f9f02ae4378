use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use super::{check_names, GraphError};

/// A directed acyclic graph over named nodes.
///
/// Parent and child lists are kept sorted by node index; the topological
/// order is computed once at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    names: Vec<String>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    order: Vec<usize>,
}

/// Kahn's algorithm with the smallest available index taken first.
pub fn topological_order(n: usize, edges: &[(usize, usize)]) -> Result<Vec<usize>, GraphError> {
    let mut indeg = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in edges {
        if a >= n {
            return Err(GraphError::NodeOutOfRange(a, n));
        }
        if b >= n {
            return Err(GraphError::NodeOutOfRange(b, n));
        }
        out[a].push(b);
        indeg[b] += 1;
    }
    let mut ready: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(v)) = ready.pop() {
        order.push(v);
        for &c in &out[v] {
            indeg[c] -= 1;
            if indeg[c] == 0 {
                ready.push(Reverse(c));
            }
        }
    }
    if order.len() != n {
        return Err(GraphError::Cycle);
    }
    Ok(order)
}

impl Dag {
    pub fn new<I>(names: Vec<String>, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        check_names(&names)?;
        let n = names.len();
        let mut pairs = BTreeSet::new();
        let mut list = Vec::new();
        for (a, b) in edges {
            if a >= n {
                return Err(GraphError::NodeOutOfRange(a, n));
            }
            if b >= n {
                return Err(GraphError::NodeOutOfRange(b, n));
            }
            if a == b {
                return Err(GraphError::SelfLoop(names[a].clone()));
            }
            if !pairs.insert((a.min(b), a.max(b))) {
                return Err(GraphError::DuplicateEdge(
                    names[a].clone(),
                    names[b].clone(),
                ));
            }
            list.push((a, b));
        }
        let order = topological_order(n, &list)?;
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        for (a, b) in list {
            parents[b].push(a);
            children[a].push(b);
        }
        for v in parents.iter_mut().chain(children.iter_mut()) {
            v.sort_unstable();
        }
        Ok(Dag {
            names,
            parents,
            children,
            order,
        })
    }

    /// Builds a DAG from name pairs, declaring nodes in `names` order.
    pub fn from_named_edges(names: &[&str], edges: &[(&str, &str)]) -> Result<Self, GraphError> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let lookup = |s: &str| {
            names
                .iter()
                .position(|n| n == s)
                .ok_or_else(|| GraphError::UnknownNode(s.to_string()))
        };
        let idx = edges
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>, GraphError>>()?;
        Dag::new(names, idx)
    }

    pub fn empty(names: Vec<String>) -> Result<Self, GraphError> {
        Dag::new(names, std::iter::empty())
    }

    pub fn n_nodes(&self) -> usize {
        self.names.len()
    }

    pub fn n_edges(&self) -> usize {
        self.parents.iter().map(Vec::len).sum()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn node(&self, name: &str) -> Result<usize, GraphError> {
        self.index_of(name)
            .ok_or_else(|| GraphError::UnknownNode(name.to_string()))
    }

    pub(crate) fn check(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n_nodes() {
            Ok(())
        } else {
            Err(GraphError::NodeOutOfRange(v, self.n_nodes()))
        }
    }

    pub fn parents(&self, v: usize) -> &[usize] {
        &self.parents[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.children[a].binary_search(&b).is_ok()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.has_edge(a, b) || self.has_edge(b, a)
    }

    /// Parents and children of `v`, sorted.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.parents[v]
            .iter()
            .chain(&self.children[v])
            .copied()
            .collect();
        out.sort_unstable();
        out
    }

    /// All edges as (parent, child), sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self
            .children
            .iter()
            .enumerate()
            .flat_map(|(a, cs)| cs.iter().map(move |&b| (a, b)))
            .collect();
        e.sort_unstable();
        e
    }

    /// Topological order, ties broken by ascending node index.
    pub fn topological_order(&self) -> &[usize] {
        &self.order
    }

    /// Unshielded colliders `a → c ← b` as `(a, c, b)` with `a < b`.
    pub fn v_structures(&self) -> BTreeSet<(usize, usize, usize)> {
        let mut out = BTreeSet::new();
        for c in 0..self.n_nodes() {
            let ps = &self.parents[c];
            for (i, &a) in ps.iter().enumerate() {
                for &b in &ps[i + 1..] {
                    if !self.adjacent(a, b) {
                        out.insert((a, c, b));
                    }
                }
            }
        }
        out
    }

    /// Unordered adjacent pairs `(min, max)`.
    pub fn skeleton_pairs(&self) -> BTreeSet<(usize, usize)> {
        self.edges()
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect()
    }

    /// Ancestors of the nodes in `set`, including the set itself.
    pub fn ancestors_of(&self, set: &[usize]) -> Vec<bool> {
        let mut mark = vec![false; self.n_nodes()];
        let mut stack: Vec<usize> = set.to_vec();
        while let Some(v) = stack.pop() {
            if mark[v] {
                continue;
            }
            mark[v] = true;
            stack.extend(self.parents[v].iter().copied().filter(|&p| !mark[p]));
        }
        mark
    }

    /// Reorders nodes: node `i` of the result is node `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Dag, GraphError> {
        let mut inverse = vec![usize::MAX; self.n_nodes()];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        let names = perm.iter().map(|&o| self.names[o].clone()).collect();
        Dag::new(
            names,
            self.edges()
                .into_iter()
                .map(|(a, b)| (inverse[a], inverse[b])),
        )
    }
}
